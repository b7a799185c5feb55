use super::{breaks_of, finish, instance_of, require, EngineError, EvalContext, InequalityReport, Numerics, Side};
use crate::fractional::FracOrder;
use crate::models::{FunctionModel, Interval, WeightModel};
use crate::quadrature::{
    integrate_left_weighted_with_breaks, integrate_right_weighted_with_breaks, integrate_with_breaks, CumulativeIntegral,
    FirstPanel, QuadResult,
};

/// Panels of the cumulative weight tables.
const WEIGHT_PANELS: usize = 64;

/// Residual of the weighted identity, with W_L(t) = ∫ₐᵗ w and W_R(t) = ∫ₜᵇ w:
///
/// ∫ₐˣ W_L^α f′ − ∫ₓᵇ W_R^α f′
///   = [W_L(x)^α + W_R(x)^α] f(x) − α∫ₐˣ W_L^{α−1} w f − α∫ₓᵇ W_R^{α−1} w f.
///
/// For α < 1 the factor W_L^{α−1} blows up at a like (t − a)^{α−1}; it is
/// written as (t − a)^{α−1}·(W_L(t)/(t − a))^{α−1} and integrated with the
/// endpoint-weighted rule (mirrored at b).
pub fn sarikaya_erden_residual(
    f: &FunctionModel,
    w: &WeightModel,
    alpha: FracOrder,
    x: f64,
    iv: &Interval,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    require(iv.contains(x), || format!("x = {x} is outside {iv}"))?;
    ctx.require_domain(f, iv)?;
    ctx.require_nonnegative(w, iv)?;
    let (a, b) = (iv.a(), iv.b());
    let al = alpha.get();
    let mut num = Numerics::default();
    let breaks = breaks_of(f, Some(w));

    let wl = CumulativeIntegral::new(|s| w.eval(s), a, b, WEIGHT_PANELS, FirstPanel::Plain, &ctx.quad);
    let wr = CumulativeIntegral::new(|s| w.eval(s), b, a, WEIGHT_PANELS, FirstPanel::Plain, &ctx.quad);
    let (wl, wr) = match (wl, wr) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => {
            num.take_quad("weight table", Err(e));
            let sides = vec![Side::new("lhs", f64::NAN, f64::INFINITY), Side::new("rhs", f64::NAN, f64::INFINITY)];
            return Ok(finish("eq0", sides, f64::NAN, f64::INFINITY, record(f, w, iv, al, x), ctx, num, Vec::new()));
        }
    };
    let cum_l = |t: f64| wl.eval(t).map_or(f64::NAN, |r| r.value);
    let cum_r = |t: f64| wr.eval(t).map_or(f64::NAN, |r| r.value);
    // W/(distance to the anchor), continuous at the anchor with value w(anchor)
    let mean_l = |t: f64| if t > a { cum_l(t) / (t - a) } else { w.eval(a) };
    let mean_r = |t: f64| if t < b { cum_r(t) / (b - t) } else { w.eval(b) };

    let zero = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    let (t1, t3) = if x > a {
        let t1 = num.take_quad(
            "left derivative term",
            integrate_with_breaks(|t| cum_l(t).max(0.0).powf(al) * f.derivative(t), a, x, &breaks, &ctx.quad),
        );
        let t3 = num.take_quad(
            "left weight term",
            integrate_left_weighted_with_breaks(
                |t| mean_l(t).powf(al - 1.0) * w.eval(t) * f.eval(t),
                alpha.as_pos(),
                a,
                x,
                &breaks,
                &ctx.quad,
            ),
        );
        (t1, t3.scale(al))
    } else {
        (zero, zero)
    };
    let (t2, t4) = if x < b {
        let t2 = num.take_quad(
            "right derivative term",
            integrate_with_breaks(|t| cum_r(t).max(0.0).powf(al) * f.derivative(t), x, b, &breaks, &ctx.quad),
        );
        let t4 = num.take_quad(
            "right weight term",
            integrate_right_weighted_with_breaks(
                |t| mean_r(t).powf(al - 1.0) * w.eval(t) * f.eval(t),
                alpha.as_pos(),
                x,
                b,
                &breaks,
                &ctx.quad,
            ),
        );
        (t2, t4.scale(al))
    } else {
        (zero, zero)
    };

    let wx_l = if x > a { cum_l(x) } else { 0.0 };
    let wx_r = if x < b { cum_r(x) } else { 0.0 };
    let lhs = t1.value - t2.value;
    let boundary = (wx_l.max(0.0).powf(al) + wx_r.max(0.0).powf(al)) * f.eval(x);
    let rhs = boundary - t3.value - t4.value;
    let lhs_err = t1.error_estimate + t2.error_estimate;
    let tables = (wl.table_error() + wr.table_error()) * (1.0 + boundary.abs());
    let rhs_err = t3.error_estimate + t4.error_estimate + tables;
    let sides = vec![Side::new("lhs", lhs, lhs_err), Side::new("rhs", rhs, rhs_err)];
    Ok(finish(
        "eq0",
        sides,
        -(lhs - rhs).abs(),
        lhs_err + rhs_err,
        record(f, w, iv, al, x),
        ctx,
        num,
        Vec::new(),
    ))
}

fn record(f: &FunctionModel, w: &WeightModel, iv: &Interval, alpha: f64, x: f64) -> super::InstanceRecord {
    let mut r = instance_of(f, Some(w), iv);
    r.alpha = Some(alpha);
    r.x = Some(x);
    r
}
