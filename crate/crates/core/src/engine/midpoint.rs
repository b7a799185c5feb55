use super::classical::ratio;
use super::kernel::KernelK;
use super::report::Candidate;
use super::{breaks_of, endpoint_slopes, finish, instance_of, require, EngineError, EvalContext, InequalityReport, Norms, Numerics, Side};
use crate::fractional::{midpoint_pair, midpoint_pair_weight, FracOrder};
use crate::models::{Claim, FunctionModel, Interval, WeightModel};
use crate::quadrature::integrate_with_breaks;

/// f(m)[J_{m−}^α g(a) + J_{m+}^α g(b)] − [J_{m−}^α(fg)(a) + J_{m+}^α(fg)(b)].
struct MidpointLhs {
    value: f64,
    error: f64,
}

fn midpoint_lhs(
    f: &FunctionModel,
    g: &WeightModel,
    alpha: FracOrder,
    iv: &Interval,
    ctx: &EvalContext,
    num: &mut Numerics,
) -> MidpointLhs {
    let fm = f.eval(iv.midpoint());
    let (g_sum, g_err) = match midpoint_pair_weight(g, alpha, iv, &ctx.quad) {
        Ok(p) => (p.sum(), p.error()),
        Err(e) => {
            let r = num.take("weight pair", Err(e));
            (r.value, r.error_estimate)
        }
    };
    let fg = |t: f64| f.eval(t) * g.eval(t);
    let (fg_sum, fg_err) = match midpoint_pair(fg, alpha, iv, &breaks_of(f, Some(g)), &ctx.quad) {
        Ok(p) => (p.sum(), p.error()),
        Err(e) => {
            let r = num.take("product pair", Err(e));
            (r.value, r.error_estimate)
        }
    };
    MidpointLhs {
        value: fm * g_sum - fg_sum,
        error: fm.abs() * g_err + fg_err,
    }
}

/// Residual of the midpoint identity
///
/// f(m)[J_{m−}^α g(a) + J_{m+}^α g(b)] − [J_{m−}^α(fg)(a) + J_{m+}^α(fg)(b)]
///   = (1/Γ(α)) ∫ₐᵇ k(t) f′(t) dt
///
/// with k the kernel of [`KernelK`].
pub fn lemma_2_3_residual(
    f: &FunctionModel,
    g: &WeightModel,
    alpha: FracOrder,
    iv: &Interval,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    ctx.require_domain(f, iv)?;
    let mut num = Numerics::default();
    let lhs = midpoint_lhs(f, g, alpha, iv, ctx, &mut num);
    let (rhs, rhs_err) = kernel_side(f, g, alpha, iv, ctx, &mut num);
    let sides = vec![Side::new("lhs", lhs.value, lhs.error), Side::new("rhs", rhs, rhs_err)];
    let mut instance = instance_of(f, Some(g), iv);
    instance.alpha = Some(alpha.get());
    Ok(finish(
        "lemma23",
        sides,
        -(lhs.value - rhs).abs(),
        lhs.error + rhs_err,
        instance,
        ctx,
        num,
        Vec::new(),
    ))
}

/// (1/Γ(α)) ∫ₐᵇ k(t) f′(t) dt, split at the midpoint and at kinks of f′.
fn kernel_side(
    f: &FunctionModel,
    g: &WeightModel,
    alpha: FracOrder,
    iv: &Interval,
    ctx: &EvalContext,
    num: &mut Numerics,
) -> (f64, f64) {
    let kernel = match KernelK::new(g, alpha, *iv, &ctx.quad) {
        Ok(k) => k,
        Err(e) => {
            let r = num.take_quad("kernel table", Err(e));
            return (r.value, r.error_estimate);
        }
    };
    let mut breaks = breaks_of(f, Some(g));
    breaks.push(iv.midpoint());
    // A failed kernel evaluation poisons the integrand; the outer quadrature
    // then reports a non-finite value.
    let outer = num.take_quad(
        "kernel integral",
        integrate_with_breaks(
            |t| match super::eval_kernel(&kernel, t, &ctx.quad) {
                Ok(k) => k.value * f.derivative(t),
                Err(_) => f64::NAN,
            },
            iv.a(),
            iv.b(),
            &breaks,
            &ctx.quad,
        ),
    );
    let inv_gamma = 1.0 / alpha.gamma();
    let slope_max = iv
        .grid(33)
        .into_iter()
        .map(|t| f.derivative(t).abs())
        .fold(0.0, f64::max);
    let table = kernel.table_error() * slope_max * iv.length();
    (outer.value * inv_gamma, (outer.error_estimate + table) * inv_gamma)
}

struct BoundInputs {
    lhs: MidpointLhs,
    norms: Norms,
    da: f64,
    db: f64,
    /// (b−a)^{α+1} / Γ(α+1)
    base: f64,
    alpha: f64,
}

fn bound_inputs(
    f: &FunctionModel,
    g: &WeightModel,
    alpha: FracOrder,
    iv: &Interval,
    ctx: &EvalContext,
    num: &mut Numerics,
) -> Result<BoundInputs, EngineError> {
    let norms = Norms::of(g, iv)?;
    let lhs = midpoint_lhs(f, g, alpha, iv, ctx, num);
    let (da, db) = endpoint_slopes(f, iv);
    let al = alpha.get();
    Ok(BoundInputs {
        lhs: MidpointLhs {
            value: lhs.value.abs(),
            error: lhs.error,
        },
        norms,
        da,
        db,
        base: iv.length().powf(al + 1.0) / alpha.gamma_plus_one(),
        alpha: al,
    })
}

/// Bound for |f′| convex:
///
/// |midpoint lhs| ≤ rhs_sharp ≤ rhs_final, where
/// rhs_final = (b−a)^{α+1}‖g‖/(2^{α+1}(α+1)Γ(α+1)) · (|f′(a)|+|f′(b)|) and
/// rhs_sharp keeps the half-interval norms of g.
pub fn thm_2_4_bound(
    f: &FunctionModel,
    g: &WeightModel,
    alpha: FracOrder,
    iv: &Interval,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    ctx.require_claim(f, Claim::AbsDerivativeConvex, iv)?;
    let mut num = Numerics::default();
    let bi = bound_inputs(f, g, alpha, iv, ctx, &mut num)?;
    let BoundInputs {
        da, db, alpha: al, base, ..
    } = bi;
    let rhs_final = base * bi.norms.full / (2f64.powf(al + 1.0) * (al + 1.0)) * (da + db);
    let rhs_sharp = base / (2f64.powf(al + 2.0) * (al + 2.0) * (al + 1.0))
        * (bi.norms.left * ((al + 3.0) * da + (al + 1.0) * db) + bi.norms.right * ((al + 1.0) * da + (al + 3.0) * db));
    let sides = vec![
        Side::new("lhs", bi.lhs.value, bi.lhs.error),
        Side::exact("rhs_sharp", rhs_sharp),
        Side::exact("rhs_final", rhs_final),
    ];
    let slack = (rhs_sharp - bi.lhs.value).min(rhs_final - rhs_sharp);
    let mut instance = instance_of(f, Some(g), iv);
    instance.alpha = Some(al);
    let mut report = finish("thm24", sides, slack, bi.lhs.error, instance, ctx, num, Vec::new());
    report.tightness = ratio(bi.lhs.value, rhs_final);
    Ok(report)
}

/// Power-mean bound for |f′|^q convex.
///
/// Two first-level constants are evaluated,
/// C_stmt = (b−a)^{α+1}/(2^{α+1+1/q}(α+1)(α+2)^{1/q}Γ(α+1)) and
/// C_proof = 2·C_stmt, each multiplying
/// ‖g‖_{[a,m]}((α+3)A+(α+1)B)^{1/q} + ‖g‖_{[m,b]}((α+1)A+(α+3)B)^{1/q}
/// with A = |f′(a)|^q, B = |f′(b)|^q. Two second-level forms use the full
/// norm: `rhs_final` keeps the (α+3) factors, `rhs_final_drop3` replaces
/// them by 1. The verdict follows the strictest first-level candidate.
pub fn thm_2_5_bound(
    f: &FunctionModel,
    g: &WeightModel,
    alpha: FracOrder,
    iv: &Interval,
    q: f64,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    require(q > 1.0 && q.is_finite(), || format!("q must be > 1, got {q}"))?;
    ctx.require_claim(f, Claim::AbsDerivativePowConvex(q), iv)?;
    let mut num = Numerics::default();
    let bi = bound_inputs(f, g, alpha, iv, ctx, &mut num)?;
    let al = bi.alpha;
    let (aq, bq) = (bi.da.powf(q), bi.db.powf(q));
    let root = |x: f64| x.powf(1.0 / q);
    let c_stmt = bi.base / (2f64.powf(al + 1.0 + 1.0 / q) * (al + 1.0) * (al + 2.0).powf(1.0 / q));
    let c_proof = bi.base / (2f64.powf(al + 1.0 / q) * (al + 1.0) * (al + 2.0).powf(1.0 / q));
    let left = root((al + 3.0) * aq + (al + 1.0) * bq);
    let right = root((al + 1.0) * aq + (al + 3.0) * bq);
    let split = bi.norms.left * left + bi.norms.right * right;
    let rhs_stmt = c_stmt * split;
    let rhs_proof = c_proof * split;
    let rhs_final = c_stmt * bi.norms.full * (left + right);
    let rhs_final_drop3 = c_stmt * bi.norms.full * (root(aq + (al + 1.0) * bq) + root((al + 1.0) * aq + bq));

    let lhs = bi.lhs.value;
    let sides = vec![
        Side::new("lhs", lhs, bi.lhs.error),
        Side::exact("rhs_stmt", rhs_stmt),
        Side::exact("rhs_proof", rhs_proof),
        Side::exact("rhs_final", rhs_final),
        Side::exact("rhs_final_drop3", rhs_final_drop3),
    ];
    let mut instance = instance_of(f, Some(g), iv);
    instance.alpha = Some(al);
    instance.q = Some(q);
    let notes = vec![
        "lhs uses the midpoint operator pair J_{m-}g(a), J_{m+}g(b); the whole-interval pair J_{a+}g(b), J_{b-}g(a) is not what the kernel identity bounds".to_string(),
        "rhs_final keeps the (alpha+3) factors of the first level; rhs_final_drop3 drops them".to_string(),
    ];
    let numerics_failed = num.failed();
    let mut report = finish("thm25", sides, rhs_stmt - lhs, bi.lhs.error, instance, ctx, num, notes);
    report.candidates = [
        ("rhs_stmt", rhs_stmt),
        ("rhs_proof", rhs_proof),
        ("rhs_final", rhs_final),
        ("rhs_final_drop3", rhs_final_drop3),
    ]
    .into_iter()
    .map(|(label, rhs)| {
        let slack = rhs - lhs;
        Candidate {
            label: label.to_string(),
            rhs,
            slack,
            verdict: ctx.tol.classify(slack, report.scale, bi.lhs.error, numerics_failed),
        }
    })
    .collect();
    report.tightness = ratio(lhs, rhs_stmt);
    Ok(report)
}

/// Hölder bound with 1/p + 1/q = 1 for |f′|^q convex:
///
/// ‖g‖(b−a)^{α+1}/(2^{α+1+2/q}(αp+1)^{1/p}Γ(α+1)) · [(3A+B)^{1/q} + (A+3B)^{1/q}].
pub fn thm_2_6_bound(
    f: &FunctionModel,
    g: &WeightModel,
    alpha: FracOrder,
    iv: &Interval,
    p: f64,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    require(p > 1.0 && p.is_finite(), || format!("p must be > 1, got {p}"))?;
    let q = p / (p - 1.0);
    ctx.require_claim(f, Claim::AbsDerivativePowConvex(q), iv)?;
    let mut num = Numerics::default();
    let bi = bound_inputs(f, g, alpha, iv, ctx, &mut num)?;
    let al = bi.alpha;
    let (aq, bq) = (bi.da.powf(q), bi.db.powf(q));
    let rhs = bi.norms.full * bi.base / (2f64.powf(al + 1.0 + 2.0 / q) * (al * p + 1.0).powf(1.0 / p))
        * ((3.0 * aq + bq).powf(1.0 / q) + (aq + 3.0 * bq).powf(1.0 / q));
    let lhs = bi.lhs.value;
    let sides = vec![Side::new("lhs", lhs, bi.lhs.error), Side::exact("rhs", rhs)];
    let mut instance = instance_of(f, Some(g), iv);
    instance.alpha = Some(al);
    instance.p = Some(p);
    instance.q = Some(q);
    let mut report = finish("thm26", sides, rhs - lhs, bi.lhs.error, instance, ctx, num, Vec::new());
    report.tightness = ratio(lhs, rhs);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Verdict;
    use crate::models::{parse_function, parse_weight};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    fn one(iv: Interval) -> WeightModel {
        parse_weight("one", iv).unwrap()
    }

    #[test]
    fn lemma_constant_function() {
        let iv = Interval::new(-0.5, 1.5).unwrap();
        let g = parse_weight("sym:cosine:1", iv).unwrap();
        for alpha in [0.3, 2.2] {
            let r = lemma_2_3_residual(&parse_function("quad:0,0,2.5").unwrap(), &g, order(alpha), &iv, &EvalContext::default())
                .unwrap();
            assert_abs_diff_eq!(r.value("lhs"), 0.0, epsilon = 1e-12);
            assert_eq!(r.value("rhs"), 0.0);
        }
    }

    #[test]
    fn lemma_analytic_examples() {
        let ctx = EvalContext::default();
        let r = lemma_2_3_residual(&parse_function("pow:1").unwrap(), &one(unit()), order(1.0), &unit(), &ctx).unwrap();
        assert_abs_diff_eq!(r.value("lhs"), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.value("rhs"), 0.0, epsilon = 1e-14);
        let r = lemma_2_3_residual(&parse_function("pow:2").unwrap(), &one(unit()), order(1.0), &unit(), &ctx).unwrap();
        assert_abs_diff_eq!(r.value("lhs"), -1.0 / 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.value("rhs"), -1.0 / 12.0, epsilon = 1e-12);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn lemma_fractional_kinked() {
        let iv = Interval::new(0.2, 2.7).unwrap();
        let g = parse_weight("sym:poly:2,1", iv).unwrap();
        let ctx = EvalContext::default();
        for spec in ["maxaffine:(-1,2),(0.5,-1)", "abslin:1,2", "exp"] {
            for alpha in [0.2, 0.5, 1.0, 2.9] {
                let r = lemma_2_3_residual(&parse_function(spec).unwrap(), &g, order(alpha), &iv, &ctx).unwrap();
                assert!(
                    r.slack.abs() <= 1e-7 * (1.0 + r.scale),
                    "{spec} alpha={alpha}: {r:?}"
                );
            }
        }
    }

    #[test]
    fn thm24_square() {
        let r = thm_2_4_bound(&parse_function("pow:2").unwrap(), &one(unit()), order(1.0), &unit(), &EvalContext::default())
            .unwrap();
        assert_abs_diff_eq!(r.value("lhs"), 1.0 / 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.value("rhs_final"), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r.value("rhs_sharp"), 0.25, epsilon = 1e-15);
        assert_eq!(r.verdict, Verdict::Pass);
        assert_relative_eq!(r.tightness.unwrap(), 1.0 / 3.0, max_relative = 1e-11);
    }

    #[test]
    fn thm24_affine_symmetric() {
        let iv = Interval::new(-1.0, 3.0).unwrap();
        let g = parse_weight("sym:bump:2", iv).unwrap();
        let r = thm_2_4_bound(&parse_function("quad:0,2,-1").unwrap(), &g, order(0.6), &iv, &EvalContext::default())
            .unwrap();
        assert_abs_diff_eq!(r.value("lhs"), 0.0, epsilon = 1e-11);
        assert!(r.value("rhs_final") > 0.0);
        // equal slopes make the two right sides coincide
        assert_relative_eq!(r.value("rhs_sharp"), r.value("rhs_final"), max_relative = 1e-14);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn thm25_square_candidates() {
        let r = thm_2_5_bound(&parse_function("pow:2").unwrap(), &one(unit()), order(1.0), &unit(), 2.0, &EvalContext::default())
            .unwrap();
        let c = 1.0 / (2f64.powf(2.5) * 2.0 * 3f64.sqrt());
        // A = 0, B = 4
        let split = (2.0f64 * 4.0).sqrt() + (4.0f64 * 4.0).sqrt();
        assert_relative_eq!(r.value("rhs_stmt"), c * split, max_relative = 1e-14);
        assert_relative_eq!(r.value("rhs_proof"), 2.0 * c * split, max_relative = 1e-14);
        assert_relative_eq!(r.value("rhs_final"), c * split, max_relative = 1e-14);
        assert_relative_eq!(r.value("rhs_final_drop3"), c * (8f64.sqrt() + 2.0), max_relative = 1e-14);
        assert_abs_diff_eq!(r.value("lhs"), 1.0 / 12.0, epsilon = 1e-12);
        assert_eq!(r.candidates.len(), 4);
        assert!(r.candidates.iter().all(|c| c.verdict == Verdict::Pass));
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn thm25_exp_bump_half_order() {
        let g = parse_weight("sym:bump:2", unit()).unwrap();
        let r = thm_2_5_bound(&parse_function("exp").unwrap(), &g, order(0.5), &unit(), 2.0, &EvalContext::default()).unwrap();
        assert!(r.candidate("rhs_stmt").is_some());
        assert!(r.value("rhs_stmt") <= r.value("rhs_proof"));
        assert!(r.value("rhs_stmt") <= r.value("rhs_final") * (1.0 + 1e-15));
    }

    #[test]
    fn thm26_square() {
        let r = thm_2_6_bound(&parse_function("pow:2").unwrap(), &one(unit()), order(1.0), &unit(), 2.0, &EvalContext::default())
            .unwrap();
        assert_abs_diff_eq!(r.value("lhs"), 1.0 / 12.0, epsilon = 1e-12);
        assert_relative_eq!(r.value("rhs"), 0.394_337_567_297_406_44, max_relative = 1e-15);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn thm26_affine_symmetric() {
        let iv = Interval::new(0.0, 2.0).unwrap();
        let g = parse_weight("sym:cosine:1", iv).unwrap();
        let r = thm_2_6_bound(&parse_function("quad:0,1,0").unwrap(), &g, order(1.8), &iv, 3.0, &EvalContext::default())
            .unwrap();
        assert_abs_diff_eq!(r.value("lhs"), 0.0, epsilon = 1e-11);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn bounds_check_hypotheses() {
        let f = parse_function("maxaffine:(-1,2),(0.5,-1)").unwrap();
        let ctx = EvalContext::default();
        assert!(matches!(
            thm_2_4_bound(&f, &one(unit()), order(1.0), &unit(), &ctx),
            Err(EngineError::Precondition(_))
        ));
        assert!(thm_2_5_bound(&parse_function("exp").unwrap(), &one(unit()), order(1.0), &unit(), 1.0, &ctx).is_err());
    }
}
