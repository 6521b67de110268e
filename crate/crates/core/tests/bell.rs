use bellcorr::bell::{
    bell_operator_dense, build_chain_expression, build_honeycomb_expression, build_mermin_expression,
    build_svetlichny_expression, certify_depth, classical_bound_chain, ghz_bell_operator_dense, k_nonlocal_bound,
    lhv_bound_bruteforce, GhzBellOperator, HoneycombLattice, LinkColor,
};
use bellcorr::qsim::{Observable, StateVector};
use proptest::prelude::*;

#[test]
fn ghz_expressions_reduce_to_the_antidiagonal_operator() {
    for n in 2..=6 {
        let want = ghz_bell_operator_dense(n).unwrap();
        for (expr, meas) in [
            build_svetlichny_expression(n).unwrap(),
            build_mermin_expression(n).unwrap(),
        ] {
            let got = bell_operator_dense(&expr, &meas).unwrap();
            assert!((got - &want).norm() < 1e-9, "{} n={n}", expr.name);
        }
    }
}

#[test]
fn small_ghz_expressions_have_the_documented_local_minima() {
    // Svetlichny: −1 for even N, −√2 for odd N; Mermin the other way round.
    for n in 2..=6 {
        let parity = (n % 2) as f64;
        let (s, _) = build_svetlichny_expression(n).unwrap();
        let (m, _) = build_mermin_expression(n).unwrap();
        assert!((lhv_bound_bruteforce(&s).unwrap() + 2f64.powf(parity / 2.0)).abs() < 1e-9);
        assert!((lhv_bound_bruteforce(&m).unwrap() + 2f64.powf((1.0 - parity) / 2.0)).abs() < 1e-9);
    }
}

#[test]
fn chain_closed_form_matches_enumeration() {
    for n in [3, 5] {
        for delta in [0.5, 1.0, 2.0, 3.0] {
            let (expr, _) = build_chain_expression(n, delta, 0.95).unwrap();
            let bound = classical_bound_chain(n, delta).unwrap();
            assert!(
                (lhv_bound_bruteforce(&expr).unwrap() - bound).abs() < 1e-9,
                "n={n} Δ={delta}"
            );
        }
    }
    assert!((classical_bound_chain(21, 2.0).unwrap() + 160.0).abs() < 1e-9);
}

#[test]
fn k_bounds_are_monotone_and_end_at_the_ghz_value() {
    for n in 2..=24 {
        let bounds: Vec<f64> = (1..n).map(|k| k_nonlocal_bound(n, k).unwrap()).collect();
        assert!(bounds.windows(2).all(|w| w[1] <= w[0]));
        let ghz = -2f64.powf((n as f64 - 1.0) / 2.0);
        assert!(ghz < *bounds.last().unwrap());
    }
}

#[test]
fn ideal_ghz_certifies_full_depth() {
    for n in [2, 3, 8, 12] {
        let e = GhzBellOperator::new(n)
            .expectation(&StateVector::ghz(n, std::f64::consts::PI).unwrap())
            .unwrap();
        assert_eq!(certify_depth(n, e, 0.0).unwrap().certified_depth, n);
    }
}

#[test]
fn the_shipped_lattice_has_the_headline_bound() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/honeycomb73.json");
    let lat = HoneycombLattice::load(path).unwrap();
    assert_eq!(
        (lat.num_sites, lat.count(LinkColor::Red), lat.links.len()),
        (73, 33, 92)
    );
    let expr = build_honeycomb_expression(&lat, 0.9).unwrap();
    assert!((expr.classical_bound + 131.3).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn honeycomb_bound_is_twice_the_total_coupling(rows in 2usize..4, cols in 2usize..5, eps in 0.0f64..1.0) {
        let lat = HoneycombLattice::brick_wall_rect(rows, cols).unwrap();
        let expr = build_honeycomb_expression(&lat, eps).unwrap();
        let red = lat.count(LinkColor::Red) as f64;
        let other = (lat.links.len() as f64) - red;
        prop_assert!((expr.classical_bound + 2.0 * (red * (1.0 + eps) + other * (1.0 - eps) / 2.0)).abs() < 1e-9);
    }

    #[test]
    fn certified_depth_is_monotone_in_the_energy(n in 2usize..12, e1 in -50.0f64..0.0, de in 0.0f64..20.0, s in 0.0f64..1.0) {
        let a = certify_depth(n, e1, s).unwrap();
        let b = certify_depth(n, e1 + de, s).unwrap();
        prop_assert!(a.certified_depth >= b.certified_depth);
        prop_assert!(a.certified_depth >= 1 && a.certified_depth <= n);
    }
}

#[test]
fn small_honeycomb_bound_matches_enumeration() {
    for (rows, cols) in [(2, 2), (2, 3)] {
        let lat = HoneycombLattice::brick_wall_rect(rows, cols).unwrap();
        let expr = build_honeycomb_expression(&lat, 0.9).unwrap();
        assert!((lhv_bound_bruteforce(&expr).unwrap() - expr.classical_bound).abs() < 1e-9);
    }
}
