use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Bias-corrected Adam.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerState {
    pub t: u64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl OptimizerState {
    pub fn new(num_params: usize, learning_rate: f64) -> Self {
        Self {
            t: 0,
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    /// One update of `params` in place. A non-finite gradient aborts without
    /// touching either the parameters or the moments.
    pub fn step(&mut self, grad: &[f64], params: &mut [f64]) -> Result<()> {
        if grad.len() != self.m.len() || params.len() != self.m.len() {
            return Err(Error::ParamLength {
                expected: self.m.len(),
                got: if grad.len() != self.m.len() {
                    grad.len()
                } else {
                    params.len()
                },
            });
        }
        if let Some(k) = grad.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFinite(format!(
                "gradient component {k} is {} at optimizer step {}; training aborted",
                grad[k],
                self.t + 1
            )));
        }
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t as i32);
        let c2 = 1.0 - self.beta2.powi(self.t as i32);
        for (((p, g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            *p -= self.learning_rate * (*m / c1) / ((*v / c2).sqrt() + self.eps);
        }
        Ok(())
    }
}

/// Convenience form returning the updated state and parameters.
pub fn adam_step(state: &OptimizerState, grad: &[f64], params: &[f64]) -> Result<(OptimizerState, Vec<f64>)> {
    let mut s = state.clone();
    let mut p = params.to_vec();
    s.step(grad, &mut p)?;
    Ok((s, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_is_signed_learning_rate() {
        let s = OptimizerState::new(3, 0.1);
        let (s, p) = adam_step(&s, &[2.0, -0.5, 0.0], &[1.0, 1.0, 1.0]).unwrap();
        assert!((p[0] - 0.9).abs() < 1e-7);
        assert!((p[1] - 1.1).abs() < 1e-7);
        assert_eq!(p[2], 1.0);
        assert_eq!(s.t, 1);
    }

    #[test]
    fn constant_gradient_descends_monotonically() {
        let mut s = OptimizerState::new(1, 0.05);
        let mut p = [0.0];
        let mut last = p[0];
        for _ in 0..2 {
            s.step(&[0.7], &mut p).unwrap();
            assert!(p[0] < last);
            last = p[0];
        }
    }

    #[test]
    fn nan_aborts_without_side_effects() {
        let mut s = OptimizerState::new(2, 0.1);
        let mut p = [0.5, 0.5];
        assert!(matches!(s.step(&[f64::NAN, 1.0], &mut p), Err(Error::NonFinite(_))));
        assert_eq!(p, [0.5, 0.5]);
        assert_eq!(s.t, 0);
    }
}
