use proptest::prelude::*;

use stirling_core::analytic::{f_of_v, fixed_point_residual, implicit_derivative, v_of_x, y_of_v};
use stirling_core::approximant::error_table;
use stirling_core::exactfield::{parse_rational, render_rational, FieldOp};
use stirling_core::series::{
    compute_coefficients, maclaurin_eval, standard_table, stirling_coefficients,
};
use stirling_core::{BigFloat, BigRational, PrecisionContext, QSqrt2};

fn ctx() -> PrecisionContext {
    PrecisionContext::new(30).unwrap()
}

fn rel(a: &BigFloat, b: &BigFloat) -> f64 {
    ((a - b) / b).abs().to_f64()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn element() -> impl Strategy<Value = QSqrt2> {
    (rational(), rational()).prop_map(|(p, q)| QSqrt2::new(p, q))
}

proptest! {
    #[test]
    fn field_axioms(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &QSqrt2::one(), a.clone());
        if !b.is_zero() {
            let q = a.apply(FieldOp::Div, &b).unwrap();
            prop_assert_eq!(&q * &b, a.clone());
        } else {
            prop_assert!(a.apply(FieldOp::Div, &b).is_err());
        }
    }

    #[test]
    fn canonical_form_is_stable(a in element()) {
        prop_assert_eq!(a.reduced(), a.clone());
        prop_assert_eq!(a.reduced().reduced(), a.reduced());
        let text = a.to_string();
        let back: QSqrt2 = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn rational_text_round_trip(r in rational()) {
        prop_assert_eq!(parse_rational(&render_rational(&r)).unwrap(), r);
    }

    #[test]
    fn decimal_agrees_with_wider_precision(a in element(), digits in 16u32..60) {
        let p = PrecisionContext::new(digits).unwrap();
        let wide = p.widen(10);
        let lo = a.to_decimal(&p);
        let hi = a.to_decimal(&wide);
        if hi.is_zero() {
            prop_assert!(lo.is_zero());
        } else {
            prop_assert!(rel(&lo, &hi) <= 10f64.powi(-(digits as i32)));
        }
    }

    #[test]
    fn coefficient_prefix(m in 0usize..14, extra in 0usize..6) {
        let big = compute_coefficients(m + extra);
        prop_assert_eq!(big.prefix(m).unwrap(), compute_coefficients(m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_round_trip(x in -0.99f64..50.0) {
        prop_assume!(x != 0.0);
        let c = ctx();
        let xb = c.f64(x);
        let back = f_of_v(&v_of_x(&xb, &c).unwrap(), &c).unwrap();
        prop_assert!(rel(&back, &xb) <= 1e-12);
    }

    #[test]
    fn y_times_f_is_v(v in -8.0f64..30.0) {
        prop_assume!(v != 0.0);
        let c = ctx();
        let vb = c.f64(v);
        let prod = y_of_v(&vb, &c).unwrap() * f_of_v(&vb, &c).unwrap();
        prop_assert!(rel(&prod, &vb) <= 1e-12);
    }

    #[test]
    fn fixed_point_holds(v in -5.0f64..20.0) {
        let c = ctx();
        prop_assert!(fixed_point_residual(&c.f64(v), &c).unwrap().to_f64() <= 1e-11);
    }

    #[test]
    fn implicit_derivative_positive(v in -12.0f64..40.0) {
        let c = ctx();
        prop_assert!(implicit_derivative(&c.f64(v), &c).unwrap().is_positive());
    }

    #[test]
    fn y_matches_truncated_series(v in -0.3f64..0.3) {
        let c = ctx();
        let vb = c.f64(v);
        let series = maclaurin_eval(standard_table(), &vb, 20, &c).unwrap();
        let direct = y_of_v(&vb, &c).unwrap();
        prop_assert!((direct - series).abs().to_f64() <= 1e-9);
    }

    #[test]
    fn y_positive_and_decreasing(v in -10.0f64..10.0, dv in 0.001f64..1.0) {
        let c = ctx();
        let a = y_of_v(&c.f64(v), &c).unwrap();
        let b = y_of_v(&c.f64(v + dv), &c).unwrap();
        prop_assert!(a.is_positive());
        prop_assert!(b < a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Two extra terms always help for s ≥ 10. Adjacent orders need not:
    /// the error after an odd order can undercut the next even one.
    #[test]
    fn two_more_terms_reduce_error(s in 10.0f64..200.0) {
        let c = PrecisionContext::default();
        let series = stirling_coefficients(&compute_coefficients(20)).unwrap();
        let orders: Vec<usize> = (0..=10).collect();
        let report = error_table(&[s], &orders, &series, &c).unwrap();
        let errs: Vec<f64> = report.rows.iter().map(|r| r.rel_error).collect();
        for n in 0..=8 {
            for m in n + 2..=10 {
                prop_assert!(errs[m] < errs[n], "s={} n={} m={} {:?}", s, n, m, errs);
            }
        }
        prop_assert!(errs.iter().all(|e| *e >= 0.0));
    }
}
