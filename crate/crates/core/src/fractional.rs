//! Riemann-Liouville fractional integrals
//!
//! ```text
//! J_{a+}^α f(x) = 1/Γ(α) ∫ₐˣ (x − t)^{α−1} f(t) dt,   x > a
//! J_{b−}^α f(x) = 1/Γ(α) ∫ₓᵇ (t − x)^{α−1} f(t) dt,   x < b
//! ```
//!
//! with J^0 f = f.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::{Interval, WeightModel};
use crate::quadrature::{
    integrate_left_weighted_with_breaks, integrate_right_weighted_with_breaks, QuadConfig, QuadError, QuadResult,
};
use crate::special::{gamma, MathError, PosReal};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FractionalError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("{side} operator: {source}")]
    Quadrature {
        side: &'static str,
        #[source]
        source: QuadError,
    },
}

impl FractionalError {
    fn quad(side: &'static str) -> impl FnOnce(QuadError) -> FractionalError {
        move |source| FractionalError::Quadrature { side, source }
    }
}

/// Order α > 0 of a fractional integral, with Γ(α) precomputed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder {
    alpha: PosReal,
    gamma: f64,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self, MathError> {
        let alpha = PosReal::new(alpha)?;
        let gamma = gamma(alpha.get())?;
        Ok(FracOrder { alpha, gamma })
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.alpha.get()
    }

    #[inline]
    pub fn as_pos(self) -> PosReal {
        self.alpha
    }

    /// Γ(α).
    #[inline]
    pub fn gamma(self) -> f64 {
        self.gamma
    }

    /// Γ(α + 1) = α·Γ(α).
    #[inline]
    pub fn gamma_plus_one(self) -> f64 {
        self.get() * self.gamma
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = MathError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        FracOrder::new(value)
    }
}

impl From<FracOrder> for f64 {
    fn from(value: FracOrder) -> f64 {
        value.get()
    }
}

/// J_{a+}^α f(x). The (x − t)^{α−1} singularity sits at t = x.
pub fn j_left<F: Fn(f64) -> f64>(
    f: F,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, FractionalError> {
    j_left_with_breaks(f, alpha, a, x, &[], cfg)
}

pub fn j_left_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    alpha: FracOrder,
    a: f64,
    x: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult, FractionalError> {
    let raw = integrate_right_weighted_with_breaks(f, alpha.as_pos(), a, x, breaks, cfg)
        .map_err(FractionalError::quad("left"))?;
    Ok(raw.scale(1.0 / alpha.gamma()))
}

/// J_{b−}^α f(x). The (t − x)^{α−1} singularity sits at t = x.
pub fn j_right<F: Fn(f64) -> f64>(
    f: F,
    alpha: FracOrder,
    x: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, FractionalError> {
    j_right_with_breaks(f, alpha, x, b, &[], cfg)
}

pub fn j_right_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    alpha: FracOrder,
    x: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult, FractionalError> {
    let raw = integrate_left_weighted_with_breaks(f, alpha.as_pos(), x, b, breaks, cfg)
        .map_err(FractionalError::quad("right"))?;
    Ok(raw.scale(1.0 / alpha.gamma()))
}

/// J_{a+}^α f(x) for α ≥ 0, where order 0 is the identity.
pub fn j_left_order<F: Fn(f64) -> f64>(
    f: F,
    alpha: f64,
    a: f64,
    x: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, FractionalError> {
    if alpha == 0.0 {
        return Ok(point_value(f(x)));
    }
    j_left(f, FracOrder::new(alpha)?, a, x, cfg)
}

/// J_{b−}^α f(x) for α ≥ 0, where order 0 is the identity.
pub fn j_right_order<F: Fn(f64) -> f64>(
    f: F,
    alpha: f64,
    x: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, FractionalError> {
    if alpha == 0.0 {
        return Ok(point_value(f(x)));
    }
    j_right(f, FracOrder::new(alpha)?, x, b, cfg)
}

fn point_value(value: f64) -> QuadResult {
    QuadResult {
        value,
        error_estimate: 0.0,
        evaluations: 1,
    }
}

/// The midpoint-anchored operator pair applied to h over the two halves of [a, b]:
///
/// * left  = J_{m−}^α h(a) = 1/Γ(α) ∫ₐᵐ (t − a)^{α−1} h(t) dt
/// * right = J_{m+}^α h(b) = 1/Γ(α) ∫ₘᵇ (b − t)^{α−1} h(t) dt
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidpointPair {
    pub left: QuadResult,
    pub right: QuadResult,
}

impl MidpointPair {
    pub fn sum(&self) -> f64 {
        self.left.value + self.right.value
    }

    pub fn error(&self) -> f64 {
        self.left.error_estimate + self.right.error_estimate
    }
}

/// [`MidpointPair`] for an arbitrary integrand, cut at `breaks`.
pub fn midpoint_pair<F: Fn(f64) -> f64>(
    h: F,
    alpha: FracOrder,
    iv: &Interval,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<MidpointPair, FractionalError> {
    let m = iv.midpoint();
    let left = j_right_with_breaks(&h, alpha, iv.a(), m, breaks, cfg).map_err(|e| relabel(e, "midpoint-left"))?;
    let right = j_left_with_breaks(&h, alpha, m, iv.b(), breaks, cfg).map_err(|e| relabel(e, "midpoint-right"))?;
    Ok(MidpointPair { left, right })
}

fn relabel(e: FractionalError, side: &'static str) -> FractionalError {
    match e {
        FractionalError::Quadrature { source, .. } => FractionalError::Quadrature { side, source },
        other => other,
    }
}

/// J_{m−}^α g(a) and J_{m+}^α g(b) for a weight g.
pub fn midpoint_pair_weight(
    g: &WeightModel,
    alpha: FracOrder,
    iv: &Interval,
    cfg: &QuadConfig,
) -> Result<MidpointPair, FractionalError> {
    midpoint_pair(|t| g.eval(t), alpha, iv, &g.kinks(), cfg)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::models::parse_weight;
    use crate::special::rl_power_rule;
    use approx::assert_relative_eq;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn constant_function() {
        for &alpha in &[0.3, 1.0, 2.2] {
            let al = order(alpha);
            let expected = 1.7f64.powf(alpha) / al.gamma_plus_one();
            let l = j_left(|_| 1.0, al, 0.3, 2.0, &cfg()).unwrap();
            let r = j_right(|_| 1.0, al, 0.3, 2.0, &cfg()).unwrap();
            assert_relative_eq!(l.value, expected, max_relative = 1e-10);
            assert_relative_eq!(r.value, expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn order_one_is_plain_integral() {
        let l = j_left(f64::exp, order(1.0), 0.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(l.value, 1f64.exp() - 1.0, max_relative = 1e-13);
        let r = j_right(f64::sin, order(1.0), 0.0, 2.0, &cfg()).unwrap();
        assert_relative_eq!(r.value, 1.0 - 2f64.cos(), max_relative = 1e-13);
    }

    #[test]
    fn half_order_linear() {
        // Γ(2)/Γ(2.5), from the power rule with β = 1
        let expected = rl_power_rule(PosReal::new(0.5).unwrap(), 1.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(expected, 0.752_252_778_063_675_049_26, max_relative = 1e-13);
        let l = j_left(|t| t, order(0.5), 0.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(l.value, expected, max_relative = 1e-10);
        let r = j_right(|t| 1.0 - t, order(0.5), 0.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(r.value, expected, max_relative = 1e-10);
    }

    #[test]
    fn order_zero_is_identity() {
        let v = j_left_order(|t| t * t, 0.0, 0.0, 3.0, &cfg()).unwrap();
        assert_eq!(v.value, 9.0);
        let v = j_right_order(|t| t * t, 0.0, 2.0, 3.0, &cfg()).unwrap();
        assert_eq!(v.value, 4.0);
        assert!(j_left_order(|t| t, -1.0, 0.0, 1.0, &cfg()).is_err());
        assert!(FracOrder::new(0.0).is_err());
    }

    #[test]
    fn errors_carry_side() {
        let err = j_left(|t| t, order(0.5), 1.0, 0.0, &cfg()).unwrap_err();
        assert!(matches!(err, FractionalError::Quadrature { side: "left", .. }));
        let err = j_right(|t| t, order(0.5), 1.0, 0.0, &cfg()).unwrap_err();
        assert!(matches!(err, FractionalError::Quadrature { side: "right", .. }));
    }

    #[test]
    fn midpoint_pair_examples() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let one = parse_weight("one", iv).unwrap();
        let p = midpoint_pair_weight(&one, order(1.0), &iv, &cfg()).unwrap();
        assert_relative_eq!(p.left.value, 0.5, max_relative = 1e-14);
        assert_relative_eq!(p.right.value, 0.5, max_relative = 1e-14);

        let iv2 = Interval::new(-1.0, 2.5).unwrap();
        let one2 = parse_weight("one", iv2).unwrap();
        for &alpha in &[0.25, 1.7] {
            let al = order(alpha);
            let expected = (iv2.length() / 2.0).powf(alpha) / al.gamma_plus_one();
            let p = midpoint_pair_weight(&one2, al, &iv2, &cfg()).unwrap();
            assert_relative_eq!(p.left.value, expected, max_relative = 1e-10);
            assert_relative_eq!(p.right.value, expected, max_relative = 1e-10);
        }

        let v = parse_weight("sym:poly:1,0", iv).unwrap();
        let p = midpoint_pair_weight(&v, order(1.0), &iv, &cfg()).unwrap();
        assert_relative_eq!(p.left.value, 0.125, max_relative = 1e-13);
        assert_relative_eq!(p.right.value, 0.125, max_relative = 1e-13);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn linearity(alpha in 0.2f64..3.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, a in -1.0f64..1.0, len in 0.3f64..3.0) {
                let al = order(alpha);
                let x = a + len;
                let f1 = |t: f64| t.exp();
                let f2 = |t: f64| (t - a).powi(2);
                let c = cfg();
                let lhs = j_left(|t| c1 * f1(t) + c2 * f2(t), al, a, x, &c).unwrap();
                let r1 = j_left(f1, al, a, x, &c).unwrap();
                let r2 = j_left(f2, al, a, x, &c).unwrap();
                let rhs = c1 * r1.value + c2 * r2.value;
                let budget = lhs.error_estimate + c1.abs() * r1.error_estimate + c2.abs() * r2.error_estimate
                    + 1e-10 * (1.0 + rhs.abs());
                prop_assert!((lhs.value - rhs).abs() <= budget);
            }

            #[test]
            fn symmetric_weight_gives_equal_halves(alpha in 0.2f64..3.0, a in -1.0f64..2.0, len in 0.3f64..3.0, k in 0.0f64..4.0) {
                let iv = Interval::new(a, a + len).unwrap();
                let g = parse_weight(&format!("sym:bump:{k}"), iv).unwrap();
                let p = midpoint_pair_weight(&g, order(alpha), &iv, &cfg()).unwrap();
                prop_assert!((p.left.value - p.right.value).abs() <= 2.0 * p.error() + 1e-14 * p.sum().abs());
            }

            #[test]
            fn order_near_one_matches_plain(a in -1.0f64..1.0, len in 0.3f64..3.0) {
                let c = cfg();
                let j = j_left(|t| t.cos() + 2.0, order(1.0), a, a + len, &c).unwrap();
                let plain = crate::quadrature::integrate(|t| t.cos() + 2.0, a, a + len, &c).unwrap();
                prop_assert!((j.value - plain.value).abs() <= j.error_estimate + plain.error_estimate + 1e-14);
            }
        }
    }
}
