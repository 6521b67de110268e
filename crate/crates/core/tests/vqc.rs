mod common;

use bellcorr::bell::{build_chain_hamiltonian, build_honeycomb_hamiltonian, GhzBellOperator, HoneycombLattice};
use bellcorr::qsim::Observable;
use bellcorr::vqc::{
    adam_step, adjoint_gradient, build_chain_ansatz, build_hierarchical_ansatz, hierarchical_train,
    parameter_shift_gradient, read_trajectory, train, write_trajectory, AnsatzSpec, ExactEstimator, HierarchicalConfig,
    Mode, OptimizerState, TrainConfig, TrajectoryHeader,
};
use common::{circuit_from, pauli_sums, recipes};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shift_rule_matches_finite_differences(n in 1usize..5, r in recipes(25), h in pauli_sums(4, 5)) {
        let (c, p) = circuit_from(4, &r);
        let _ = n;
        let g = parameter_shift_gradient(&c, &h, &p).unwrap();
        let step = 1e-5;
        for k in 0..p.len() {
            let (mut up, mut down) = (p.clone(), p.clone());
            up[k] += step;
            down[k] -= step;
            let fd = (h.expectation(&c.prepare(&up).unwrap()).unwrap() - h.expectation(&c.prepare(&down).unwrap()).unwrap()) / (2.0 * step);
            prop_assert!((g[k] - fd).abs() < 1e-6, "slot {k}: {} vs {fd}", g[k]);
        }
    }

    #[test]
    fn adjoint_sweep_equals_shift_rule(r in recipes(30), h in pauli_sums(4, 6)) {
        let (c, p) = circuit_from(4, &r);
        let slots: Vec<usize> = (0..p.len()).collect();
        let a = adjoint_gradient(&c, &h, &p, &slots).unwrap();
        let s = parameter_shift_gradient(&c, &h, &p).unwrap();
        for (x, y) in a.iter().zip(&s) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn adam_is_a_pure_function(g in prop::collection::vec(-5.0f64..5.0, 1..8), lr in 0.001f64..0.5) {
        let state = OptimizerState::new(g.len(), lr);
        let params = vec![0.3; g.len()];
        let (s1, p1) = adam_step(&state, &g, &params).unwrap();
        let (s2, p2) = adam_step(&state, &g, &params).unwrap();
        prop_assert_eq!(&p1, &p2);
        prop_assert_eq!(s1, s2);
        // The first Adam step moves each coordinate by at most the learning rate.
        for (a, b) in p1.iter().zip(&params) {
            prop_assert!((a - b).abs() <= lr * (1.0 + 1e-9));
        }
    }
}

#[test]
fn chain_ansatz_respects_the_variational_principle() {
    let h = build_chain_hamiltonian(5, 2.0, 0.95).unwrap();
    let ground = bellcorr::qsim::ground_energy_dense(&h).unwrap();
    let c = build_chain_ansatz(5, 2).unwrap();
    assert_eq!(c.num_params(), 10);
    for seed in 0..5u64 {
        let p: Vec<f64> = (0..10).map(|k| ((seed * 31 + k) as f64).sin() * 3.0).collect();
        let e = h.expectation(&c.prepare(&p).unwrap()).unwrap();
        assert!(e.is_finite() && e >= ground - 1e-9);
    }
}

#[test]
fn honeycomb_training_violates_the_bound_and_round_trips() {
    let lat = HoneycombLattice::brick_wall_rect(3, 3).unwrap();
    let h = build_honeycomb_hamiltonian(&lat, 0.9).unwrap();
    let bound = bellcorr::bell::build_honeycomb_expression(&lat, 0.9)
        .unwrap()
        .classical_bound;
    let mut cfg = TrainConfig::new(5);
    cfg.max_iters = 150;
    let out = train(&AnsatzSpec::Honeycomb { lattice: lat }, &h, &cfg).unwrap();
    assert!(out.records[0].energy > bound, "all-ones start should not violate");
    assert!(out.energy < bound);

    let header = TrajectoryHeader::new("honeycomb", 9, out.params.len(), "exact", 5);
    let mut buf = Vec::new();
    write_trajectory(&mut buf, &header, &out.records).unwrap();
    let (h2, records) = read_trajectory(buf.as_slice()).unwrap();
    assert_eq!(h2, header);
    assert_eq!(records, out.records);
}

#[test]
fn shot_mode_training_is_reproducible() {
    let lat = HoneycombLattice::brick_wall_rect(2, 2).unwrap();
    let h = build_honeycomb_hamiltonian(&lat, 0.9).unwrap();
    let mut cfg = TrainConfig::new(8);
    cfg.mode = Mode::Shots;
    cfg.shots = 200;
    cfg.max_iters = 5;
    let spec = AnsatzSpec::Honeycomb { lattice: lat };
    let a = train(&spec, &h, &cfg).unwrap();
    assert_eq!(a, train(&spec, &h, &cfg).unwrap());
    assert!(a.records.iter().skip(1).all(|r| r.shots_used > 0));
    cfg.seed = 9;
    assert_ne!(a.records, train(&spec, &h, &cfg).unwrap().records);
}

#[test]
fn ladder_phases_certify_growing_depth() {
    let mut train = TrainConfig::new(2);
    train.max_iters = 150;
    let cfg = HierarchicalConfig {
        max_phase: 4,
        joint_iters: 0,
        train,
    };
    let out = hierarchical_train(
        &cfg,
        |n| Ok(Box::new(ExactEstimator::new(GhzBellOperator::new(n))) as _),
    )
    .unwrap();
    for (j, phase) in out.phases.iter().enumerate() {
        assert_eq!(phase.num_qubits, 2 * (j + 1));
        assert_eq!(phase.certificate.certified_depth, 2 * (j + 1));
    }
    let state = build_hierarchical_ansatz(4).unwrap().prepare(&out.params).unwrap();
    assert!(GhzBellOperator::new(8).expectation(&state).unwrap() < -8.0);
}
