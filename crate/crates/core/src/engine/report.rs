use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of one identity or inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Absolute and relative slack tolerances for verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { atol: 1e-9, rtol: 1e-7 }
    }
}

impl Tolerance {
    pub fn allowance(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }

    /// Verdict for a computed slack.
    ///
    /// A negative slack within `atol + rtol·scale` passes. Beyond that, a
    /// shortfall still covered by the quadrature error budget is
    /// inconclusive; only a shortfall exceeding it is a failure.
    pub fn classify(&self, slack: f64, scale: f64, error_budget: f64, numerics_failed: bool) -> Verdict {
        if numerics_failed || !slack.is_finite() {
            return Verdict::Inconclusive;
        }
        let shortfall = -slack - self.allowance(scale);
        if shortfall <= 0.0 {
            Verdict::Pass
        } else if shortfall <= error_budget {
            Verdict::Inconclusive
        } else {
            Verdict::Fail
        }
    }
}

/// One computed side of a relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub label: String,
    pub value: f64,
    pub error_estimate: f64,
}

impl Side {
    pub fn new(label: impl Into<String>, value: f64, error_estimate: f64) -> Self {
        Side {
            label: label.into(),
            value,
            error_estimate,
        }
    }

    pub fn exact(label: impl Into<String>, value: f64) -> Self {
        Side::new(label, value, 0.0)
    }
}

/// A right-hand side whose exact form is uncertain, checked on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub rhs: f64,
    pub slack: f64,
    pub verdict: Verdict,
}

/// Everything needed to rebuild and re-run one evaluation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub f: String,
    #[serde(default)]
    pub negate_f: bool,
    #[serde(default)]
    pub g: Option<String>,
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub x: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub index: Option<u64>,
}

/// All sides of one evaluated identity or inequality with its verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub sides: Vec<Side>,
    /// Smallest margin in the claimed direction (−|residual| for identities).
    pub slack: f64,
    /// max |side value|.
    pub scale: f64,
    /// Accumulated quadrature error estimates relevant to the slack.
    pub error_budget: f64,
    pub verdict: Verdict,
    pub instance: InstanceRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tightness: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Candidate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl InequalityReport {
    pub fn side(&self, label: &str) -> Option<&Side> {
        self.sides.iter().find(|s| s.label == label)
    }

    /// Value of a side; NaN when absent.
    pub fn value(&self, label: &str) -> f64 {
        self.side(label).map_or(f64::NAN, |s| s.value)
    }

    pub fn candidate(&self, label: &str) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.label == label)
    }
}

pub(crate) fn scale_of(sides: &[Side]) -> f64 {
    sides
        .iter()
        .map(|s| s.value.abs())
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
}
