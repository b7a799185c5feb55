//! Order-one, unit-weight specialisations of the fractional results checked
//! against their classical counterparts computed independently.

use super::{
    breaks_of, finish, instance_of, kirmaci_bound1, kirmaci_bound2, lemma_2_3_residual, thm_2_4_bound, thm_2_6_bound,
    EngineError, EvalContext, InequalityReport, Numerics, Side,
};
use crate::fractional::FracOrder;
use crate::models::{parse_weight, FunctionModel, Interval, WeightModel};
use crate::quadrature::integrate_with_breaks;

fn order_one() -> FracOrder {
    FracOrder::new(1.0).expect("1 is a valid order")
}

fn coherence(
    name: &str,
    reduced: (&str, f64, f64),
    classical: (&str, f64, f64),
    mut instance: super::InstanceRecord,
    ctx: &EvalContext,
    num: Numerics,
    notes: Vec<String>,
) -> InequalityReport {
    instance.alpha = Some(1.0);
    let sides = vec![
        Side::new(reduced.0, reduced.1, reduced.2),
        Side::new(classical.0, classical.1, classical.2),
    ];
    finish(
        name,
        sides,
        -(reduced.1 - classical.1).abs(),
        reduced.2 + classical.2,
        instance,
        ctx,
        num,
        notes,
    )
}

fn carry_notes(reports: &[&InequalityReport]) -> Vec<String> {
    reports.iter().flat_map(|r| r.notes.iter().cloned()).collect()
}

/// At α = 1 the midpoint identity's left side is f(m)∫g − ∫fg.
pub fn remark1_reduction(
    f: &FunctionModel,
    g: &WeightModel,
    iv: &Interval,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    let lemma = lemma_2_3_residual(f, g, order_one(), iv, ctx)?;
    let lhs = lemma.side("lhs").expect("lemma report has lhs").clone();
    let mut num = Numerics::default();
    let breaks = breaks_of(f, Some(g));
    let ig = num.take_quad("weight", integrate_with_breaks(|t| g.eval(t), iv.a(), iv.b(), &breaks, &ctx.quad));
    let ifg = num.take_quad(
        "product",
        integrate_with_breaks(|t| f.eval(t) * g.eval(t), iv.a(), iv.b(), &breaks, &ctx.quad),
    );
    let fm = f.eval(iv.midpoint());
    let classical = fm * ig.value - ifg.value;
    let classical_err = fm.abs() * ig.error_estimate + ifg.error_estimate;
    let mut notes = carry_notes(&[&lemma]);
    if lemma.verdict != super::Verdict::Pass {
        notes.push(format!("underlying lemma23 verdict: {}", lemma.verdict));
    }
    Ok(coherence(
        "remark1",
        ("lemma_lhs", lhs.value, lhs.error_estimate),
        ("classical", classical, classical_err),
        instance_of(f, Some(g), iv),
        ctx,
        num,
        notes,
    ))
}

/// With g ≡ 1 and α = 1 the |f′|-convex bound is (b−a) times the classical
/// midpoint bound (b−a)(|f′(a)|+|f′(b)|)/8.
pub fn remark2_reduction(f: &FunctionModel, iv: &Interval, ctx: &EvalContext) -> Result<InequalityReport, EngineError> {
    let one = parse_weight("one", *iv)?;
    let frac = thm_2_4_bound(f, &one, order_one(), iv, ctx)?;
    let classical = kirmaci_bound1(f, iv, ctx)?;
    let len = iv.length();
    Ok(coherence(
        "remark2",
        ("rhs_final", frac.value("rhs_final"), 0.0),
        ("scaled_classical_rhs", len * classical.value("rhs"), 0.0),
        instance_of(f, Some(&one), iv),
        ctx,
        Numerics::default(),
        carry_notes(&[&frac, &classical]),
    ))
}

/// With g ≡ 1 and α = 1 the Hölder bound is (b−a) times the classical
/// Hölder midpoint bound for the same p.
pub fn remark3_reduction(
    f: &FunctionModel,
    iv: &Interval,
    p: f64,
    ctx: &EvalContext,
) -> Result<InequalityReport, EngineError> {
    let one = parse_weight("one", *iv)?;
    let frac = thm_2_6_bound(f, &one, order_one(), iv, p, ctx)?;
    let classical = kirmaci_bound2(f, iv, p, ctx)?;
    let len = iv.length();
    let mut instance = instance_of(f, Some(&one), iv);
    instance.p = Some(p);
    instance.q = Some(p / (p - 1.0));
    Ok(coherence(
        "remark3",
        ("rhs", frac.value("rhs"), 0.0),
        ("scaled_classical_rhs", len * classical.value("rhs"), 0.0),
        instance,
        ctx,
        Numerics::default(),
        carry_notes(&[&frac, &classical]),
    ))
}
