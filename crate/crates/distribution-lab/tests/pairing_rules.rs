//! Structural identities of the pairing and smoothing rules, checked on
//! randomized inputs. Each identity is verified through two genuinely
//! different computational routes, so these are differential tests rather
//! than restatements of the implementation.

use distribution_lab::{convolve, Distribution, Kernel, TestFunction};
use proptest::prelude::*;

fn arb_bump() -> impl Strategy<Value = TestFunction> {
    (
        proptest::collection::vec(-2.0..2.0f64, 1..4),
        0.5..2.0f64,
        -0.5..0.5f64,
    )
        .prop_map(|(coeffs, radius, shift)| {
            TestFunction::bump_poly(&coeffs, radius).translated(shift)
        })
}

fn arb_atom() -> impl Strategy<Value = Distribution> {
    prop_oneof![
        (-0.5..0.5f64).prop_map(Distribution::delta_at),
        (-0.5..0.5f64).prop_map(Distribution::heaviside_at),
        proptest::collection::vec(-2.0..2.0f64, 1..4).prop_map(Distribution::polynomial),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Pairing a weighted pair of distributions equals the weighted sum of
    // the individual pairings.
    #[test]
    fn pairing_is_linear_in_the_distribution(
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        t1 in arb_atom(),
        t2 in arb_atom(),
        tau in arb_bump(),
    ) {
        let combo = Distribution::combination(vec![(a, t1.clone()), (b, t2.clone())]).unwrap();
        let split = a * t1.pair(&tau).unwrap() + b * t2.pair(&tau).unwrap();
        let joint = combo.pair(&tau).unwrap();
        prop_assert!((joint - split).abs() <= 1e-10 * (1.0 + split.abs()));
    }

    // Pairing against a sum of same-shape bumps equals the sum of the
    // pairings: the joint integrand is a different polynomial modulation,
    // not a reuse of the split computation.
    #[test]
    fn pairing_is_linear_in_the_test_function(
        p1 in proptest::collection::vec(-2.0..2.0f64, 1..4),
        p2 in proptest::collection::vec(-2.0..2.0f64, 1..4),
        radius in 0.5..2.0f64,
        t in arb_atom(),
    ) {
        let mut joint_coeffs = vec![0.0; p1.len().max(p2.len())];
        for (k, &c) in p1.iter().enumerate() { joint_coeffs[k] += c; }
        for (k, &c) in p2.iter().enumerate() { joint_coeffs[k] += c; }
        let joint = t.pair(&TestFunction::bump_poly(&joint_coeffs, radius)).unwrap();
        let split = t.pair(&TestFunction::bump_poly(&p1, radius)).unwrap()
            + t.pair(&TestFunction::bump_poly(&p2, radius)).unwrap();
        prop_assert!((joint - split).abs() <= 1e-10 * (1.0 + split.abs()));
    }

    // The derivative of a polynomial density pairs like the classical
    // derivative polynomial: integral of p' tau versus -integral of
    // p tau', two different integrands related by parts.
    #[test]
    fn distributional_derivative_matches_classical_for_polynomials(
        coeffs in proptest::collection::vec(-2.0..2.0f64, 2..5),
        tau in arb_bump(),
    ) {
        let weak = Distribution::derivative(Distribution::polynomial(coeffs.clone()), 1)
            .unwrap()
            .pair(&tau)
            .unwrap();
        let classical_coeffs: Vec<f64> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        let classical = Distribution::polynomial(classical_coeffs).pair(&tau).unwrap();
        prop_assert!((weak - classical).abs() <= 1e-9 * (1.0 + classical.abs()));
    }

    // The derivative of a step pairs like a point mass at the jump.
    #[test]
    fn step_derivative_sifts(offset in -0.4..0.4f64, tau in arb_bump()) {
        let weak = Distribution::derivative(Distribution::heaviside_at(offset), 1)
            .unwrap()
            .pair(&tau)
            .unwrap();
        prop_assert!((weak - tau.eval(offset)).abs() <= 1e-10 * (1.0 + tau.eval(offset).abs()));
    }

    // Smoothing commutes with differentiation: the exact derivative of
    // T * phi, the smoothing against phi', and central differences of
    // T * phi all agree on probe points.
    #[test]
    fn smoothing_commutes_with_differentiation(
        t in arb_atom(),
        radius in 0.6..1.5f64,
        x in -1.0..1.0f64,
    ) {
        let kernel = Kernel::smooth(distribution_lab::BumpPoly::standard(radius));
        let smoothed = convolve(&t, &kernel).unwrap();
        let exact = smoothed.derivative().unwrap();
        let alt = convolve(&t, &kernel.derivative().unwrap()).unwrap();
        let h = 1e-5;
        let fd = (smoothed.eval(x + h) - smoothed.eval(x - h)) / (2.0 * h);
        prop_assert!((exact.eval(x) - fd).abs() <= 1e-6 * (1.0 + fd.abs()));
        prop_assert!((alt.eval(x) - fd).abs() <= 1e-6 * (1.0 + fd.abs()));
    }
}

#[test]
fn second_step_derivative_matches_the_point_mass_derivative() {
    let tau = TestFunction::bump_poly(&[1.0, -0.5, 0.25], 1.5);
    let via_step = Distribution::derivative(Distribution::heaviside(), 2)
        .unwrap()
        .pair(&tau)
        .unwrap();
    let via_delta = Distribution::derivative(Distribution::delta(), 1)
        .unwrap()
        .pair(&tau)
        .unwrap();
    assert!((via_step - via_delta).abs() < 1e-12);
}

#[test]
fn nested_combinations_pair_linearly() {
    let tau = TestFunction::bump(1.0);
    let inner = Distribution::combination(vec![
        (0.5, Distribution::delta()),
        (2.0, Distribution::polynomial(vec![1.0])),
    ])
    .unwrap();
    let outer = Distribution::combination(vec![
        (3.0, inner.clone()),
        (-1.0, Distribution::heaviside()),
    ])
    .unwrap();
    let expect = 3.0 * (0.5 * tau.eval(0.0) + 2.0 * Distribution::polynomial(vec![1.0]).pair(&tau).unwrap())
        - Distribution::heaviside().pair(&tau).unwrap();
    assert!((outer.pair(&tau).unwrap() - expect).abs() < 1e-12);
}
