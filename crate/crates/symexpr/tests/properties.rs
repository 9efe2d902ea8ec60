use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use symexpr::{parse, Expr, Rational};

const NAMES: [&str; 3] = ["x", "y", "z"];

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-3i64..=3).prop_map(Expr::int),
        (1i64..=4, 1i64..=3).prop_map(|(n, d)| Expr::ratio(n, d)),
        (0usize..3).prop_map(Expr::var),
        (0usize..3, prop::sample::select(vec![-2i64, -1, 1, 2])).prop_map(|(v, k)| {
            let mut rate = vec![Rational::from_integer(0.into()); 3];
            rate[v] = Rational::new(k.into(), 2.into());
            Expr::exp_affine(rate, Rational::from_integer(0.into()))
        }),
    ]
}

/// Random expressions whose denominators are bounded away from zero.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner, 1i64..=3).prop_map(|(a, b, c)| a / (Expr::int(c) + &b * &b)),
        ]
    })
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 3)
}

fn close(lhs: f64, rhs: f64, scale: f64, tol: f64) -> bool {
    (lhs - rhs).abs() <= tol * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 100,
        rng_seed: RngSeed::Fixed(42),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn evaluation_is_additive(a in expr(), b in expr(), p in point()) {
        let (va, vb) = (a.eval(&p).unwrap(), b.eval(&p).unwrap());
        let sum = (&a + &b).eval(&p).unwrap();
        prop_assert!(close(sum, va + vb, va.abs() + vb.abs(), 1e-12), "{sum} vs {}", va + vb);
    }

    #[test]
    fn evaluation_is_multiplicative(a in expr(), b in expr(), p in point()) {
        let (va, vb) = (a.eval(&p).unwrap(), b.eval(&p).unwrap());
        let prod = (&a * &b).eval(&p).unwrap();
        prop_assert!(close(prod, va * vb, (va * vb).abs(), 1e-12), "{prod} vs {}", va * vb);
    }

    #[test]
    fn product_rule_holds(a in expr(), b in expr(), var in 0usize..3) {
        let lhs = (&a * &b).derivative(var);
        let rhs = a.derivative(var) * &b + &a * b.derivative(var);
        prop_assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn derivative_is_linear(a in expr(), b in expr(), c in -3i64..=3, var in 0usize..3) {
        let lhs = (&a * Expr::int(c) + &b).derivative(var);
        let rhs = a.derivative(var) * Expr::int(c) + b.derivative(var);
        prop_assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn canonical_equality_is_sound(a in expr(), b in expr(), p in point()) {
        // a*b/b and a agree symbolically, so they must agree numerically
        let nonzero = Expr::int(2) + &b * &b;
        let roundabout = &a * &nonzero / &nonzero;
        prop_assert!((&roundabout - &a).is_zero());
        let (x, y) = (roundabout.eval(&p).unwrap(), a.eval(&p).unwrap());
        prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
    }

    #[test]
    fn print_then_parse_is_identity(a in expr()) {
        let printed = a.display(&NAMES).to_string();
        let back = parse(&printed, &NAMES).unwrap();
        prop_assert_eq!(&back, &a, "printed as {}", printed);
    }
}
