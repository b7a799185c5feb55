//! Evaluators for the identities and inequalities of Hermite-Hadamard-Fejér
//! type, classical and fractional.
//!
//! Every evaluator returns an [`InequalityReport`] listing all computed sides.
//! A precondition that does not hold on the instance (a missing convexity
//! claim, an asymmetric weight, a domain violation) is an
//! [`EngineError::Precondition`], never a failing verdict. A quadrature that
//! does not converge makes the report inconclusive.

mod classical;
mod fractional_hh;
mod kernel;
mod midpoint;
mod reductions;
mod report;
mod weighted_identity;

pub use classical::{fejer_classical, hh_classical, kirmaci_bound1, kirmaci_bound2, kirmaci_identity_residual};
pub use fractional_hh::{fejer_fractional, hh_fractional};
pub use kernel::{eval_kernel, KernelK};
pub use midpoint::{lemma_2_3_residual, thm_2_4_bound, thm_2_5_bound, thm_2_6_bound};
pub use reductions::{remark1_reduction, remark2_reduction, remark3_reduction};
pub use report::{Candidate, InequalityReport, InstanceRecord, Side, Tolerance, Verdict};
pub use weighted_identity::sarikaya_erden_residual;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fractional::FractionalError;
use crate::models::{check_symmetry, grid_minimum, sup_norm, Claim, FunctionModel, Interval, ModelError, WeightModel, SUP_NORM_SCAN};
use crate::quadrature::{QuadConfig, QuadError, QuadResult};
use crate::special::MathError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Math(#[from] MathError),
}

/// Settings shared by every evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalContext {
    pub quad: QuadConfig,
    pub tol: Tolerance,
    /// When false, theorem hypotheses are not enforced (negative controls).
    pub check_hypotheses: bool,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext {
            quad: QuadConfig::default(),
            tol: Tolerance::default(),
            check_hypotheses: true,
        }
    }
}

impl EvalContext {
    pub fn unchecked(self) -> Self {
        EvalContext {
            check_hypotheses: false,
            ..self
        }
    }

    fn require_claim(&self, f: &FunctionModel, claim: Claim, iv: &Interval) -> Result<(), EngineError> {
        if self.check_hypotheses {
            f.validate_claim(claim, iv).map_err(hypothesis)?;
        }
        Ok(())
    }

    fn require_domain(&self, f: &FunctionModel, iv: &Interval) -> Result<(), EngineError> {
        if self.check_hypotheses {
            f.check_domain(iv).map_err(hypothesis)?;
        }
        Ok(())
    }

    fn require_symmetric_nonnegative(&self, g: &WeightModel, iv: &Interval) -> Result<(), EngineError> {
        if !self.check_hypotheses {
            return Ok(());
        }
        self.require_nonnegative(g, iv)?;
        let norm = sup_norm(g, iv.a(), iv.b(), 64)?.value;
        let asym = check_symmetry(g, iv, SYMMETRY_GRID)?;
        if asym > 1e-12 * (1.0 + norm) {
            return Err(EngineError::Precondition(format!(
                "weight {} is not symmetric about {} (asymmetry {asym:e})",
                g.spec(),
                iv.midpoint()
            )));
        }
        Ok(())
    }

    fn require_nonnegative(&self, g: &WeightModel, iv: &Interval) -> Result<(), EngineError> {
        if !self.check_hypotheses {
            return Ok(());
        }
        let min = grid_minimum(g, iv, SYMMETRY_GRID)?;
        if min < 0.0 {
            return Err(EngineError::Precondition(format!(
                "weight {} is negative on {iv} (min {min:e})",
                g.spec()
            )));
        }
        Ok(())
    }
}

const SYMMETRY_GRID: usize = 257;

fn hypothesis(e: ModelError) -> EngineError {
    match e {
        ModelError::Hypothesis(msg) => EngineError::Precondition(msg),
        other => EngineError::Model(other),
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), EngineError> {
    if cond {
        Ok(())
    } else {
        Err(EngineError::Precondition(msg()))
    }
}

/// Collects quadrature outcomes for one evaluation. Failures are recorded
/// and replaced by the best available value so the report can still list
/// every side.
#[derive(Debug, Default)]
pub(crate) struct Numerics {
    failures: Vec<String>,
}

impl Numerics {
    fn take_quad(&mut self, what: &str, r: Result<QuadResult, QuadError>) -> QuadResult {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                e.best_effort().unwrap_or(NAN_RESULT)
            }
        }
    }

    fn take(&mut self, what: &str, r: Result<QuadResult, FractionalError>) -> QuadResult {
        match r {
            Ok(v) => v,
            Err(FractionalError::Quadrature { source, .. }) => self.take_quad(what, Err(source)),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                NAN_RESULT
            }
        }
    }

    fn failed(&self) -> bool {
        !self.failures.is_empty()
    }

    fn into_notes(self) -> Vec<String> {
        self.failures
            .into_iter()
            .map(|f| format!("quadrature failure: {f}"))
            .collect()
    }
}

const NAN_RESULT: QuadResult = QuadResult {
    value: f64::NAN,
    error_estimate: f64::INFINITY,
    evaluations: 0,
};

/// Assemble a report and classify it.
#[allow(clippy::too_many_arguments)]
fn finish(
    name: &str,
    sides: Vec<Side>,
    slack: f64,
    error_budget: f64,
    instance: InstanceRecord,
    ctx: &EvalContext,
    numerics: Numerics,
    mut notes: Vec<String>,
) -> InequalityReport {
    let scale = report::scale_of(&sides);
    let verdict = ctx.tol.classify(slack, scale, error_budget, numerics.failed());
    notes.extend(numerics.into_notes());
    InequalityReport {
        name: name.to_string(),
        sides,
        slack,
        scale,
        error_budget,
        verdict,
        instance,
        tightness: None,
        candidates: Vec::new(),
        notes,
    }
}

fn instance_of(f: &FunctionModel, g: Option<&WeightModel>, iv: &Interval) -> InstanceRecord {
    InstanceRecord {
        f: f.spec().to_string(),
        negate_f: f.is_negated(),
        g: g.map(|g| g.spec().to_string()),
        a: iv.a(),
        b: iv.b(),
        ..InstanceRecord::default()
    }
}

/// Cut points for integrands built from f and g.
fn breaks_of(f: &FunctionModel, g: Option<&WeightModel>) -> Vec<f64> {
    let mut v = f.kinks().to_vec();
    if let Some(g) = g {
        v.extend(g.kinks());
    }
    v
}

/// |f′(a)| and |f′(b)| using one-sided derivatives from inside [a, b].
fn endpoint_slopes(f: &FunctionModel, iv: &Interval) -> (f64, f64) {
    (f.derivative(iv.a()).abs(), f.derivative_left(iv.b()).abs())
}

/// ‖g‖ on [a, b], [a, m] and [m, b].
#[derive(Debug, Clone, Copy)]
struct Norms {
    full: f64,
    left: f64,
    right: f64,
}

impl Norms {
    fn of(g: &WeightModel, iv: &Interval) -> Result<Norms, EngineError> {
        let m = iv.midpoint();
        Ok(Norms {
            full: sup_norm(g, iv.a(), iv.b(), SUP_NORM_SCAN)?.value,
            left: sup_norm(g, iv.a(), m, SUP_NORM_SCAN)?.value,
            right: sup_norm(g, m, iv.b(), SUP_NORM_SCAN)?.value,
        })
    }
}
