use fracineq_core::engine::{fejer_fractional, hh_fractional, lemma_2_3_residual, sarikaya_erden_residual, thm_2_4_bound};
use fracineq_core::fractional::{j_left, midpoint_pair_weight};
use fracineq_core::{parse_function, parse_weight, EvalContext, FracOrder, FunctionModel, Interval, QuadConfig, Verdict};
use proptest::prelude::*;

const WEIGHTS: [&str; 4] = ["one", "sym:bump:2", "sym:cosine:1", "sym:poly:2,1"];

fn convex_function() -> impl Strategy<Value = FunctionModel> {
    prop_oneof![
        Just("exp".to_string()),
        (0.1f64..3.0, -2.0f64..2.0, -1.0f64..1.0).prop_map(|(c2, c1, c0)| format!("quad:{c2},{c1},{c0}")),
        (0.2f64..2.0, 0.0f64..4.0).prop_map(|(c, s)| format!("abslin:{c},{s}")),
    ]
    .prop_map(|spec| parse_function(&spec).unwrap())
}

fn interval() -> impl Strategy<Value = Interval> {
    (0.0f64..2.0, 0.3f64..3.0).prop_map(|(a, len)| Interval::new(a, a + len).unwrap())
}

fn order() -> impl Strategy<Value = FracOrder> {
    (0.2f64..3.0).prop_map(|a| FracOrder::new(a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_identity_holds(f in convex_function(), iv in interval(), alpha in order(), w in 0..WEIGHTS.len()) {
        let g = parse_weight(WEIGHTS[w], iv).unwrap();
        let r = lemma_2_3_residual(&f, &g, alpha, &iv, &EvalContext::default()).unwrap();
        let resid = (r.value("lhs") - r.value("rhs")).abs();
        prop_assert!(resid <= 1e-7 * (1.0 + r.scale), "{} residual {resid:e}", f.spec());
    }

    #[test]
    fn fractional_sandwiches_hold(f in convex_function(), iv in interval(), alpha in order(), w in 0..WEIGHTS.len()) {
        let ctx = EvalContext::default();
        let g = parse_weight(WEIGHTS[w], iv).unwrap();
        prop_assert_eq!(hh_fractional(&f, alpha, &iv, &ctx).unwrap().verdict, Verdict::Pass);
        prop_assert_eq!(fejer_fractional(&f, &g, alpha, &iv, &ctx).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn derivative_bound_chain(c2 in 0.1f64..3.0, c1 in -2.0f64..2.0, iv in interval(), alpha in order(), w in 0..WEIGHTS.len()) {
        // |f'| is convex for any quadratic with positive leading coefficient.
        let f = parse_function(&format!("quad:{c2},{c1},0")).unwrap();
        let g = parse_weight(WEIGHTS[w], iv).unwrap();
        let r = thm_2_4_bound(&f, &g, alpha, &iv, &EvalContext::default()).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Pass);
        prop_assert!(r.value("rhs_sharp") <= r.value("rhs_final") * (1.0 + 1e-12));
    }

    #[test]
    fn weighted_identity_holds(f in convex_function(), iv in interval(), alpha in order(), w in 0..WEIGHTS.len(), u in 0.0f64..=1.0) {
        let g = parse_weight(WEIGHTS[w], iv).unwrap();
        let x = iv.a() + u * iv.length();
        let r = sarikaya_erden_residual(&f, &g, alpha, x, &iv, &EvalContext::default()).unwrap();
        let resid = (r.value("lhs") - r.value("rhs")).abs();
        prop_assert!(resid <= 1e-6 * (1.0 + r.scale), "residual {resid:e}");
    }

    #[test]
    fn left_operator_is_linear(c in -3.0f64..3.0, iv in interval(), alpha in order()) {
        let cfg = QuadConfig::default();
        let (a, b) = (iv.a(), iv.b());
        let sum = j_left(|t: f64| t.exp() + c * t * t, alpha, a, b, &cfg).unwrap().value;
        let e = j_left(f64::exp, alpha, a, b, &cfg).unwrap().value;
        let sq = j_left(|t: f64| t * t, alpha, a, b, &cfg).unwrap().value;
        prop_assert!((sum - (e + c * sq)).abs() <= 1e-10 * (1.0 + e.abs() + (c * sq).abs()));
    }

    #[test]
    fn symmetric_weight_pair_balances(iv in interval(), alpha in order(), w in 0..WEIGHTS.len()) {
        let g = parse_weight(WEIGHTS[w], iv).unwrap();
        let pair = midpoint_pair_weight(&g, alpha, &iv, &QuadConfig::default()).unwrap();
        prop_assert!((pair.left.value - pair.right.value).abs() <= 1e-11 * (1.0 + pair.sum().abs()));
    }
}
