//! Property tests for the expression language and the shared slope fitter.
//!
//! The round-trip law under test: for any expression tree `t` built from the
//! grammar, `parse(render(t))` is the same tree. Rendering inserts parentheses
//! wherever precedence or left-associativity would otherwise reshape the
//! parse, so the composition must be the identity on trees.

use cli_harness::{parse, render, FieldExpr};
use distribution_lab::{fit_slope, log_grid};
use num::BigRational;
use proptest::prelude::*;

/// Exponents the renderer prints after `^`. Zero and negatives included.
const EXPONENTS: std::ops::RangeInclusive<i64> = -6..=6;

/// Denominators whose prime factors are only 2 and 5, so the literal renders
/// as a finite decimal and reparses as a single number token. Other
/// denominators render as `p/q`, which reparses as a division node and would
/// change the tree shape even though the value is identical.
const DECIMAL_DENOMS: [i64; 8] = [1, 2, 4, 5, 8, 10, 100, 1000];

fn literal() -> impl Strategy<Value = FieldExpr> {
    (0i64..10_000, prop::sample::select(&DECIMAL_DENOMS[..]))
        .prop_map(|(p, q)| FieldExpr::Number(BigRational::new(p.into(), q.into())))
}

fn leaf() -> impl Strategy<Value = FieldExpr> {
    prop_oneof![literal(), Just(FieldExpr::Rho)]
}

fn expr_tree() -> impl Strategy<Value = FieldExpr> {
    leaf().prop_recursive(4, 48, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), 0u8..4).prop_map(|(lhs, rhs, op)| {
                let op = match op {
                    0 => cli_harness::BinOp::Add,
                    1 => cli_harness::BinOp::Sub,
                    2 => cli_harness::BinOp::Mul,
                    _ => cli_harness::BinOp::Div,
                };
                FieldExpr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
            }),
            (inner.clone(), EXPONENTS).prop_map(|(base, exponent)| FieldExpr::Pow {
                base: Box::new(base),
                exponent,
            }),
            (inner, 0u8..3).prop_map(|(arg, f)| {
                let func = match f {
                    0 => cli_harness::Func::Sqrt,
                    1 => cli_harness::Func::St,
                    _ => cli_harness::Func::Inv,
                };
                FieldExpr::Call { func, arg: Box::new(arg) }
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rendering_then_parsing_is_the_identity(tree in expr_tree()) {
        let text = render(&tree);
        let reparsed = parse(&text)
            .unwrap_or_else(|e| panic!("rendered form {text:?} failed to parse: {e}"));
        prop_assert_eq!(&reparsed, &tree, "render/parse changed the tree for {}", text);
    }

    #[test]
    fn rendered_text_is_stable_under_one_more_round(tree in expr_tree()) {
        let once = render(&tree);
        let twice = render(&parse(&once).unwrap());
        prop_assert_eq!(&once, &twice);
    }
}

#[test]
fn slope_fit_recovers_pure_power_laws() {
    let eps = log_grid(1e-2, 1.0, 5);
    for p in [0.5, 1.0, 2.0, 3.0, 4.5] {
        let samples: Vec<(f64, f64)> = eps.iter().map(|&e| (e, 0.7 * e.powf(p))).collect();
        let est = fit_slope(&samples).unwrap();
        assert!(
            (est.slope - p).abs() < 1e-10,
            "exponent {p}: fitted {} off by {:.3e}",
            est.slope,
            (est.slope - p).abs()
        );
        assert!(est.r_squared > 1.0 - 1e-12, "exponent {p}: r^2 {}", est.r_squared);
    }
}

#[test]
fn slope_fit_matches_the_worked_example() {
    let samples = [(0.1, 1e-3), (0.01, 1e-6), (0.001, 1e-9)];
    let est = fit_slope(&samples).unwrap();
    assert!((est.slope - 3.0).abs() < 1e-10, "slope {}", est.slope);
    assert!((est.r_squared - 1.0).abs() < 1e-12, "r^2 {}", est.r_squared);
    assert_eq!(est.points_used, 3);
}

#[test]
fn slope_fit_drops_floor_samples_and_reports_the_rest() {
    // The two smallest eps values push 2*eps^5 below the 1e-13 noise floor,
    // so the fitter must exclude them and still recover the exponent from
    // the remaining points.
    let samples: Vec<(f64, f64)> = log_grid(1e-3, 1.0, 3)
        .iter()
        .map(|&e| (e, 2.0 * e.powi(5)))
        .collect();
    let est = fit_slope(&samples).unwrap();
    assert!(est.points_used >= 3);
    assert!(est.points_used < samples.len(), "expected the floor to drop a point");
    assert!((est.slope - 5.0).abs() < 1e-10, "slope {}", est.slope);
}
