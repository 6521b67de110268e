use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Matrix2 = [[Complex64; 2]; 2];

/// A gate angle, either fixed at construction or read from a parameter slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    Fixed(f64),
    Slot(usize),
}

impl Angle {
    pub fn slot(&self) -> Option<usize> {
        match *self {
            Angle::Slot(k) => Some(k),
            Angle::Fixed(_) => None,
        }
    }

    pub(crate) fn resolve(&self, params: &[f64]) -> Result<f64> {
        match *self {
            Angle::Fixed(v) => Ok(v),
            Angle::Slot(k) => params.get(k).copied().ok_or(Error::MissingAngle),
        }
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle::Fixed(v)
    }
}

/// One gate of the native set.
///
/// `U3(θ, φ, λ)` is
///
/// ```text
/// [ cos θ/2            -e^{iλ} sin θ/2      ]
/// [ e^{iφ} sin θ/2      e^{i(φ+λ)} cos θ/2  ]
/// ```
///
/// and `RZ(θ) = exp(-iθZ/2)`, `RX(θ) = exp(-iθX/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    H(usize),
    Rz(usize, Angle),
    Rx(usize, Angle),
    U3 {
        qubit: usize,
        theta: Angle,
        phi: Angle,
        lambda: Angle,
    },
    Cz(usize, usize),
    Cnot {
        control: usize,
        target: usize,
    },
}

impl GateOp {
    pub fn u3(qubit: usize, theta: impl Into<Angle>, phi: impl Into<Angle>, lambda: impl Into<Angle>) -> Self {
        GateOp::U3 {
            qubit,
            theta: theta.into(),
            phi: phi.into(),
            lambda: lambda.into(),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Cnot { control, target }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateOp::H(_) => "H",
            GateOp::Rz(..) => "RZ",
            GateOp::Rx(..) => "RX",
            GateOp::U3 { .. } => "U3",
            GateOp::Cz(..) => "CZ",
            GateOp::Cnot { .. } => "CNOT",
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            GateOp::H(q) | GateOp::Rz(q, _) | GateOp::Rx(q, _) | GateOp::U3 { qubit: q, .. } => vec![q],
            GateOp::Cz(a, b) => vec![a, b],
            GateOp::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn angles(&self) -> Vec<Angle> {
        match *self {
            GateOp::Rz(_, a) | GateOp::Rx(_, a) => vec![a],
            GateOp::U3 { theta, phi, lambda, .. } => vec![theta, phi, lambda],
            _ => Vec::new(),
        }
    }

    /// Parameter slots read by this gate, in angle order.
    pub fn slots(&self) -> Vec<usize> {
        self.angles().iter().filter_map(Angle::slot).collect()
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let targets = self.targets();
        for &q in &targets {
            if q >= num_qubits {
                return Err(Error::InvalidQubit { index: q, num_qubits });
            }
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateTarget(targets[0]));
        }
        Ok(())
    }

    /// Replaces every slot with its value from `params`.
    pub fn bind(&self, params: &[f64]) -> Result<GateOp> {
        let fix = |a: Angle| a.resolve(params).map(Angle::Fixed);
        Ok(match *self {
            GateOp::Rz(q, a) => GateOp::Rz(q, fix(a)?),
            GateOp::Rx(q, a) => GateOp::Rx(q, fix(a)?),
            GateOp::U3 {
                qubit,
                theta,
                phi,
                lambda,
            } => GateOp::U3 {
                qubit,
                theta: fix(theta)?,
                phi: fix(phi)?,
                lambda: fix(lambda)?,
            },
            other => other,
        })
    }

    /// Inverse of a gate with fixed angles.
    pub fn inverse(&self) -> Result<GateOp> {
        let neg = |a: Angle| match a {
            Angle::Fixed(v) => Ok(Angle::Fixed(-v)),
            Angle::Slot(_) => Err(Error::InvalidArgument(
                "cannot invert a gate with an unbound slot".into(),
            )),
        };
        Ok(match *self {
            GateOp::Rz(q, a) => GateOp::Rz(q, neg(a)?),
            GateOp::Rx(q, a) => GateOp::Rx(q, neg(a)?),
            GateOp::U3 {
                qubit,
                theta,
                phi,
                lambda,
            } => GateOp::U3 {
                qubit,
                theta: neg(theta)?,
                phi: neg(lambda)?,
                lambda: neg(phi)?,
            },
            other => other,
        })
    }

    /// Single-qubit matrix with angles taken from `params`; `None` for two-qubit gates.
    pub fn matrix(&self, params: &[f64]) -> Result<Option<Matrix2>> {
        Ok(match *self {
            GateOp::H(_) => Some(hadamard()),
            GateOp::Rz(_, a) => Some(rz(a.resolve(params)?)),
            GateOp::Rx(_, a) => Some(rx(a.resolve(params)?)),
            GateOp::U3 { theta, phi, lambda, .. } => Some(u3(
                theta.resolve(params)?,
                phi.resolve(params)?,
                lambda.resolve(params)?,
            )),
            GateOp::Cz(..) | GateOp::Cnot { .. } => None,
        })
    }
}

impl GateOp {
    /// `∂G/∂a` for the `which`-th entry of [`GateOp::angles`], at `params`.
    /// `None` for gates without that angle.
    pub(crate) fn angle_derivative(&self, params: &[f64], which: usize) -> Result<Option<Matrix2>> {
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        Ok(match (*self, which) {
            (GateOp::Rz(_, a), 0) => {
                let t = a.resolve(params)?;
                Some([
                    [-0.5 * i * Complex64::from_polar(1.0, -t / 2.0), zero],
                    [zero, 0.5 * i * Complex64::from_polar(1.0, t / 2.0)],
                ])
            }
            (GateOp::Rx(_, a), 0) => {
                let (s, c) = (a.resolve(params)? / 2.0).sin_cos();
                let d = Complex64::new(-s / 2.0, 0.0);
                let o = Complex64::new(0.0, -c / 2.0);
                Some([[d, o], [o, d]])
            }
            (GateOp::U3 { theta, phi, lambda, .. }, k) if k < 3 => {
                let (t, p, l) = (theta.resolve(params)?, phi.resolve(params)?, lambda.resolve(params)?);
                let (s, c) = (t / 2.0).sin_cos();
                Some(match k {
                    0 => [
                        [Complex64::new(-s / 2.0, 0.0), -Complex64::from_polar(c / 2.0, l)],
                        [
                            Complex64::from_polar(c / 2.0, p),
                            -Complex64::from_polar(s / 2.0, p + l),
                        ],
                    ],
                    1 => [
                        [zero, zero],
                        [i * Complex64::from_polar(s, p), i * Complex64::from_polar(c, p + l)],
                    ],
                    _ => [
                        [zero, -i * Complex64::from_polar(s, l)],
                        [zero, i * Complex64::from_polar(c, p + l)],
                    ],
                })
            }
            _ => None,
        })
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name(), self.targets())
    }
}

pub(crate) fn hadamard() -> Matrix2 {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

pub(crate) fn rz(theta: f64) -> Matrix2 {
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -theta / 2.0), zero],
        [zero, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

pub(crate) fn rx(theta: f64) -> Matrix2 {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

pub(crate) fn u3(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
        [Complex64::from_polar(s, phi), Complex64::from_polar(c, phi + lambda)],
    ]
}
