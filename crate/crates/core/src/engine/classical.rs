use super::{breaks_of, endpoint_slopes, finish, instance_of, EngineError, EvalContext, InequalityReport, Numerics, Side};
use crate::models::{Claim, FunctionModel, Interval, WeightModel};
use crate::quadrature::integrate_with_breaks;

/// f(m) ≤ (1/(b−a))∫f ≤ (f(a)+f(b))/2 for convex f.
pub fn hh_classical(f: &FunctionModel, iv: &Interval, ctx: &EvalContext) -> Result<InequalityReport, EngineError> {
    ctx.require_claim(f, Claim::Convex, iv)?;
    let mut num = Numerics::default();
    let len = iv.length();
    let integral = num.take_quad(
        "mean",
        integrate_with_breaks(|t| f.eval(t), iv.a(), iv.b(), f.kinks(), &ctx.quad),
    );
    let mean = integral.value / len;
    let mean_err = integral.error_estimate / len;
    let mid = f.eval(iv.midpoint());
    let ends = 0.5 * (f.eval(iv.a()) + f.eval(iv.b()));
    let sides = vec![
        Side::exact("midpoint", mid),
        Side::new("mean", mean, mean_err),
        Side::exact("endpoints", ends),
    ];
    let slack = (mean - mid).min(ends - mean);
    Ok(finish("hh", sides, slack, mean_err, instance_of(f, None, iv), ctx, num, Vec::new()))
}

/// f(m)∫g ≤ ∫fg ≤ ((f(a)+f(b))/2)∫g for convex f and symmetric g ≥ 0.
pub fn fejer_classical(
    f: &FunctionModel,
    g: &WeightModel,
    iv: &Interval,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    ctx.require_claim(f, Claim::Convex, iv)?;
    ctx.require_symmetric_nonnegative(g, iv)?;
    let mut num = Numerics::default();
    let breaks = breaks_of(f, Some(g));
    let ig = num.take_quad(
        "weight",
        integrate_with_breaks(|t| g.eval(t), iv.a(), iv.b(), &breaks, &ctx.quad),
    );
    let ifg = num.take_quad(
        "product",
        integrate_with_breaks(|t| f.eval(t) * g.eval(t), iv.a(), iv.b(), &breaks, &ctx.quad),
    );
    let mid = f.eval(iv.midpoint());
    let ends = 0.5 * (f.eval(iv.a()) + f.eval(iv.b()));
    let sides = vec![
        Side::new("midpoint", mid * ig.value, mid.abs() * ig.error_estimate),
        Side::new("weighted", ifg.value, ifg.error_estimate),
        Side::new("endpoints", ends * ig.value, ends.abs() * ig.error_estimate),
    ];
    let slack = (sides[1].value - sides[0].value).min(sides[2].value - sides[1].value);
    let budget = ifg.error_estimate + (mid.abs() + ends.abs()) * ig.error_estimate;
    Ok(finish("fejer", sides, slack, budget, instance_of(f, Some(g), iv), ctx, num, Vec::new()))
}

/// (1/(b−a))∫f − f(m) = (b−a)[∫₀^{1/2} t f′(ta+(1−t)b)dt + ∫_{1/2}^1 (t−1) f′(ta+(1−t)b)dt].
pub fn kirmaci_identity_residual(
    f: &FunctionModel,
    iv: &Interval,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    ctx.require_domain(f, iv)?;
    let mut num = Numerics::default();
    let (a, b) = (iv.a(), iv.b());
    let len = iv.length();
    let integral = num.take_quad(
        "mean",
        integrate_with_breaks(|t| f.eval(t), a, b, f.kinks(), &ctx.quad),
    );
    let lhs = integral.value / len - f.eval(iv.midpoint());
    let lhs_err = integral.error_estimate / len;
    // kinks of f′ in x map to t = (b − x)/(b − a)
    let mut t_breaks: Vec<f64> = f.kinks().iter().map(|&k| (b - k) / len).collect();
    t_breaks.push(0.5);
    let kernel = num.take_quad(
        "kernel",
        integrate_with_breaks(
            |t| {
                let w = if t <= 0.5 { t } else { t - 1.0 };
                w * f.derivative(t * a + (1.0 - t) * b)
            },
            0.0,
            1.0,
            &t_breaks,
            &ctx.quad,
        ),
    );
    let rhs = len * kernel.value;
    let rhs_err = len * kernel.error_estimate;
    let sides = vec![Side::new("lhs", lhs, lhs_err), Side::new("rhs", rhs, rhs_err)];
    Ok(finish(
        "kirmaci-id",
        sides,
        -(lhs - rhs).abs(),
        lhs_err + rhs_err,
        instance_of(f, None, iv),
        ctx,
        num,
        Vec::new(),
    ))
}

/// |(1/(b−a))∫f − f(m)| with its quadrature error.
fn mean_gap(f: &FunctionModel, iv: &Interval, ctx: &EvalContext, num: &mut Numerics) -> (f64, f64) {
    let len = iv.length();
    let integral = num.take_quad(
        "mean",
        integrate_with_breaks(|t| f.eval(t), iv.a(), iv.b(), f.kinks(), &ctx.quad),
    );
    (
        (integral.value / len - f.eval(iv.midpoint())).abs(),
        integral.error_estimate / len,
    )
}

/// |mean − f(m)| ≤ ((b−a)/8)(|f′(a)|+|f′(b)|) for |f′| convex.
pub fn kirmaci_bound1(f: &FunctionModel, iv: &Interval, ctx: &EvalContext) -> Result<InequalityReport, EngineError> {
    ctx.require_claim(f, Claim::AbsDerivativeConvex, iv)?;
    let mut num = Numerics::default();
    let (lhs, lhs_err) = mean_gap(f, iv, ctx, &mut num);
    let (da, db) = endpoint_slopes(f, iv);
    let rhs = iv.length() / 8.0 * (da + db);
    let sides = vec![Side::new("lhs", lhs, lhs_err), Side::exact("rhs", rhs)];
    let mut report = finish("kirmaci-1", sides, rhs - lhs, lhs_err, instance_of(f, None, iv), ctx, num, Vec::new());
    report.tightness = ratio(lhs, rhs);
    Ok(report)
}

/// Right side of the Hölder-type midpoint bound for |f′|^{p/(p−1)} convex.
pub(crate) fn kirmaci_bound2_rhs(len: f64, da: f64, db: f64, p: f64) -> f64 {
    let q = p / (p - 1.0);
    let (aq, bq) = (da.powf(q), db.powf(q));
    len / 16.0 * (4.0 / (p + 1.0)).powf(1.0 / p) * ((aq + 3.0 * bq).powf(1.0 / q) + (3.0 * aq + bq).powf(1.0 / q))
}

/// |mean − f(m)| ≤ ((b−a)/16)(4/(p+1))^{1/p}[(|f′(a)|^q+3|f′(b)|^q)^{1/q} + (3|f′(a)|^q+|f′(b)|^q)^{1/q}]
/// with q = p/(p−1).
pub fn kirmaci_bound2(
    f: &FunctionModel,
    iv: &Interval,
    p: f64,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    super::require(p > 1.0 && p.is_finite(), || format!("p must be > 1, got {p}"))?;
    let q = p / (p - 1.0);
    ctx.require_claim(f, Claim::AbsDerivativePowConvex(q), iv)?;
    let mut num = Numerics::default();
    let (lhs, lhs_err) = mean_gap(f, iv, ctx, &mut num);
    let (da, db) = endpoint_slopes(f, iv);
    let rhs = kirmaci_bound2_rhs(iv.length(), da, db, p);
    let sides = vec![Side::new("lhs", lhs, lhs_err), Side::exact("rhs", rhs)];
    let mut instance = instance_of(f, None, iv);
    instance.p = Some(p);
    instance.q = Some(q);
    let mut report = finish("kirmaci-2", sides, rhs - lhs, lhs_err, instance, ctx, num, Vec::new());
    report.tightness = ratio(lhs, rhs);
    Ok(report)
}

pub(crate) fn ratio(lhs: f64, rhs: f64) -> Option<f64> {
    (rhs > 0.0 && lhs.is_finite()).then(|| lhs / rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Verdict;
    use crate::models::{parse_function, parse_weight};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn ctx() -> EvalContext {
        EvalContext::default()
    }

    #[test]
    fn hh_affine_is_equality() {
        let r = hh_classical(&parse_function("pow:1").unwrap(), &unit(), &ctx()).unwrap();
        for s in &r.sides {
            assert_abs_diff_eq!(s.value, 0.5, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(r.slack, 0.0, epsilon = 1e-14);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn hh_square_and_exp() {
        let r = hh_classical(&parse_function("pow:2").unwrap(), &unit(), &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("midpoint"), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r.value("mean"), 1.0 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.value("endpoints"), 0.5, epsilon = 1e-15);
        let r = hh_classical(&parse_function("exp").unwrap(), &unit(), &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("midpoint"), 0.5f64.exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(r.value("mean"), E - 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.value("endpoints"), (1.0 + E) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn hh_concave_fails_when_unchecked() {
        let f = parse_function("pow:2").unwrap().negated();
        assert!(matches!(
            hh_classical(&f, &unit(), &ctx()),
            Err(EngineError::Precondition(_))
        ));
        let r = hh_classical(&f, &unit(), &ctx().unchecked()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_abs_diff_eq!(r.slack, -1.0 / 6.0, epsilon = 1e-13);
    }

    #[test]
    fn fejer_unit_weight_scales_hh() {
        let iv = Interval::new(0.5, 2.0).unwrap();
        let f = parse_function("exp").unwrap();
        let g = parse_weight("one", iv).unwrap();
        let hh = hh_classical(&f, &iv, &ctx()).unwrap();
        let fe = fejer_classical(&f, &g, &iv, &ctx()).unwrap();
        for (x, y) in hh.sides.iter().zip(&fe.sides) {
            assert_abs_diff_eq!(x.value * 1.5, y.value, epsilon = 1e-12);
        }
    }

    #[test]
    fn fejer_affine_left_gap_zero() {
        let f = parse_function("quad:0,2,1").unwrap();
        let g = parse_weight("sym:bump:3", unit()).unwrap();
        let r = fejer_classical(&f, &g, &unit(), &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("weighted"), r.value("midpoint"), epsilon = 1e-13);
    }

    #[test]
    fn fejer_abs_weight() {
        let f = parse_function("pow:2").unwrap();
        let g = parse_weight("sym:poly:1,0", unit()).unwrap();
        let r = fejer_classical(&f, &g, &unit(), &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("midpoint"), 0.0625, epsilon = 1e-14);
        assert_abs_diff_eq!(r.value("weighted"), 0.09375, epsilon = 1e-13);
        assert_abs_diff_eq!(r.value("endpoints"), 0.125, epsilon = 1e-14);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn fejer_rejects_asymmetric_weight() {
        let g = parse_weight("asym:lin:1,0.5", unit()).unwrap();
        let f = parse_function("exp").unwrap();
        assert!(matches!(
            fejer_classical(&f, &g, &unit(), &ctx()),
            Err(EngineError::Precondition(_))
        ));
    }

    #[test]
    fn kirmaci_identity_examples() {
        for spec in ["quad:0,0,3", "quad:0,-2,1"] {
            let r = kirmaci_identity_residual(&parse_function(spec).unwrap(), &unit(), &ctx()).unwrap();
            assert_abs_diff_eq!(r.value("lhs"), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(r.value("rhs"), 0.0, epsilon = 1e-14);
        }
        let r = kirmaci_identity_residual(&parse_function("pow:2").unwrap(), &unit(), &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("lhs"), 1.0 / 12.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.value("rhs"), 1.0 / 12.0, epsilon = 1e-13);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn kirmaci_identity_kinked() {
        let iv = Interval::new(-1.0, 2.5).unwrap();
        let r = kirmaci_identity_residual(&parse_function("abslin:1.5,0.3").unwrap(), &iv, &ctx()).unwrap();
        assert!(r.slack.abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn kirmaci_bound1_examples() {
        let r = kirmaci_bound1(&parse_function("quad:0,1,0").unwrap(), &unit(), &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("lhs"), 0.0, epsilon = 1e-14);
        assert!(r.slack > 0.0);
        let r = kirmaci_bound1(&parse_function("pow:2").unwrap(), &unit(), &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("lhs"), 1.0 / 12.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.value("rhs"), 0.25, epsilon = 1e-15);
        let r = kirmaci_bound1(&parse_function("exp").unwrap(), &unit(), &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("lhs"), E - 1.0 - 0.5f64.exp(), epsilon = 1e-13);
        assert_abs_diff_eq!(r.value("rhs"), (1.0 + E) / 8.0, epsilon = 1e-15);
    }

    #[test]
    fn kirmaci_bound2_examples() {
        let r = kirmaci_bound2(&parse_function("pow:2").unwrap(), &unit(), 2.0, &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("rhs"), 0.394_337_567_297_406_44, epsilon = 1e-15);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = kirmaci_bound2(&parse_function("exp").unwrap(), &unit(), 2.0, &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("rhs"), 0.579_979_691_340_719_7, epsilon = 1e-15);
        let r = kirmaci_bound2(&parse_function("quad:0,3,1").unwrap(), &unit(), 3.0, &ctx()).unwrap();
        assert_abs_diff_eq!(r.value("lhs"), 0.0, epsilon = 1e-14);
        assert!(kirmaci_bound2(&parse_function("exp").unwrap(), &unit(), 1.0, &ctx()).is_err());
    }
}
