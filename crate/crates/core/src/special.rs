//! Gamma function and closed-form Riemann-Liouville power rules.
//!
//! These are the analytic oracles used to cross-check the numerical
//! fractional operators.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the special functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    #[error("argument {0} is outside the domain (must be finite and > 0)")]
    Domain(f64),
    #[error("gamma({0}) overflows f64")]
    Overflow(f64),
}

/// A strictly positive, finite real number.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PosReal(f64);

impl PosReal {
    pub fn new(value: f64) -> Result<Self, MathError> {
        if value.is_finite() && value > 0.0 {
            Ok(PosReal(value))
        } else {
            Err(MathError::Domain(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PosReal {
    type Error = MathError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        PosReal::new(value)
    }
}

impl From<PosReal> for f64 {
    fn from(value: PosReal) -> f64 {
        value.0
    }
}

/// Largest argument accepted by [`gamma`]; Γ(171.62…) exceeds `f64::MAX`.
pub const GAMMA_MAX_ARG: f64 = 171.0;

const LANCZOS_G: f64 = 7.0;

// g = 7, n = 9 coefficients (Godfrey), as used by GSL and most ports.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for any real x that is not a pole, via Lanczos with reflection.
///
/// No domain checks; see [`gamma`] for the checked entry point.
pub fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    // Exact factorials for small integers keep the trivial cases exact.
    if x == x.trunc() && x <= 23.0 {
        return (1..x as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z+1/2) is split in two halves so that large arguments don't overflow early.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * sum
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64, MathError> {
    if !(x.is_finite() && x > 0.0) {
        return Err(MathError::Domain(x));
    }
    if x > GAMMA_MAX_ARG {
        return Err(MathError::Overflow(x));
    }
    Ok(gamma_unchecked(x))
}

/// Exact value of the left Riemann-Liouville integral of order `alpha`
/// applied to t ↦ (t − a)^β, evaluated at `x`:
/// Γ(β+1)/Γ(α+β+1) · (x − a)^{α+β}.
pub fn rl_power_rule(alpha: PosReal, beta: f64, a: f64, x: f64) -> Result<f64, MathError> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(MathError::Domain(beta));
    }
    if !(a.is_finite() && x.is_finite() && x > a) {
        return Err(MathError::Domain(x - a));
    }
    let alpha = alpha.get();
    let ratio = gamma(beta + 1.0)? / gamma(alpha + beta + 1.0)?;
    Ok(ratio * (x - a).powf(alpha + beta))
}
