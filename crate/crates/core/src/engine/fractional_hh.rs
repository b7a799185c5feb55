use super::{breaks_of, finish, instance_of, require, EngineError, EvalContext, InequalityReport, Numerics, Side};
use crate::fractional::{j_left_with_breaks, j_right_with_breaks, FracOrder};
use crate::models::{Claim, FunctionModel, Interval, WeightModel};
use crate::quadrature::QuadResult;

/// J_{a+}^α h(b) + J_{b−}^α h(a).
fn symmetric_sum<H: Fn(f64) -> f64>(
    h: H,
    alpha: FracOrder,
    iv: &Interval,
    breaks: &[f64],
    ctx: &EvalContext,
    num: &mut Numerics,
    what: &str,
) -> QuadResult {
    let left = num.take(
        &format!("{what} J_a+"),
        j_left_with_breaks(&h, alpha, iv.a(), iv.b(), breaks, &ctx.quad),
    );
    let right = num.take(
        &format!("{what} J_b-"),
        j_right_with_breaks(&h, alpha, iv.a(), iv.b(), breaks, &ctx.quad),
    );
    left.combine(right)
}

/// f(m) ≤ (Γ(α+1)/(2(b−a)^α))[J_{a+}^α f(b) + J_{b−}^α f(a)] ≤ (f(a)+f(b))/2
/// for convex f on [a, b] with a ≥ 0.
pub fn hh_fractional(
    f: &FunctionModel,
    alpha: FracOrder,
    iv: &Interval,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    if ctx.check_hypotheses {
        require(iv.a() >= 0.0, || format!("interval {iv} must satisfy a >= 0"))?;
    }
    ctx.require_claim(f, Claim::Convex, iv)?;
    let mut num = Numerics::default();
    let sum = symmetric_sum(|t| f.eval(t), alpha, iv, f.kinks(), ctx, &mut num, "f");
    let c = alpha.gamma_plus_one() / (2.0 * iv.length().powf(alpha.get()));
    let middle = c * sum.value;
    let middle_err = c * sum.error_estimate;
    let mid = f.eval(iv.midpoint());
    let ends = 0.5 * (f.eval(iv.a()) + f.eval(iv.b()));
    let sides = vec![
        Side::exact("midpoint", mid),
        Side::new("fractional_mean", middle, middle_err),
        Side::exact("endpoints", ends),
    ];
    let slack = (middle - mid).min(ends - middle);
    let mut instance = instance_of(f, None, iv);
    instance.alpha = Some(alpha.get());
    Ok(finish("hh-frac", sides, slack, middle_err, instance, ctx, num, Vec::new()))
}

/// f(m)·S(g) ≤ S(fg) ≤ ((f(a)+f(b))/2)·S(g) with S(h) = J_{a+}^α h(b) + J_{b−}^α h(a),
/// for convex f and symmetric g ≥ 0.
pub fn fejer_fractional(
    f: &FunctionModel,
    g: &WeightModel,
    alpha: FracOrder,
    iv: &Interval,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    ctx.require_claim(f, Claim::Convex, iv)?;
    ctx.require_symmetric_nonnegative(g, iv)?;
    let mut num = Numerics::default();
    let breaks = breaks_of(f, Some(g));
    let sg = symmetric_sum(|t| g.eval(t), alpha, iv, &breaks, ctx, &mut num, "g");
    let sfg = symmetric_sum(|t| f.eval(t) * g.eval(t), alpha, iv, &breaks, ctx, &mut num, "fg");
    let mid = f.eval(iv.midpoint());
    let ends = 0.5 * (f.eval(iv.a()) + f.eval(iv.b()));
    let sides = vec![
        Side::new("midpoint", mid * sg.value, mid.abs() * sg.error_estimate),
        Side::new("weighted", sfg.value, sfg.error_estimate),
        Side::new("endpoints", ends * sg.value, ends.abs() * sg.error_estimate),
    ];
    let slack = (sides[1].value - sides[0].value).min(sides[2].value - sides[1].value);
    let budget = sfg.error_estimate + (mid.abs() + ends.abs()) * sg.error_estimate;
    let mut instance = instance_of(f, Some(g), iv);
    instance.alpha = Some(alpha.get());
    Ok(finish("fejer-frac", sides, slack, budget, instance, ctx, num, Vec::new()))
}
