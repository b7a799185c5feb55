use std::fmt;
use std::io;
use std::str::FromStr;

use fracineq_core::engine::{thm_2_4_bound, thm_2_5_bound, thm_2_6_bound};
use fracineq_core::{EvalContext, FracOrder, FunctionModel, InequalityReport, Interval, WeightModel};

use crate::output::format_real;
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Thm24,
    Thm25,
    Thm26,
}

impl Bound {
    pub const NAMES: [&'static str; 3] = ["thm24", "thm25", "thm26"];
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::Thm24 => "thm24",
            Bound::Thm25 => "thm25",
            Bound::Thm26 => "thm26",
        })
    }
}

impl FromStr for Bound {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thm24" => Ok(Bound::Thm24),
            "thm25" => Ok(Bound::Thm25),
            "thm26" => Ok(Bound::Thm26),
            _ => Err(HarnessError::Config(format!("unknown bound {s:?}"))),
        }
    }
}

/// Parse `lo:hi:step` into lo, lo + step, … up to hi (inclusive, with a
/// small allowance for rounding).
pub fn parse_alphas(spec: &str) -> Result<Vec<f64>, HarnessError> {
    let bad = |why: &str| HarnessError::Config(format!("alphas {spec:?}: {why}"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad("expected lo:hi:step")))
        .collect::<Result<_, _>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(bad("expected lo:hi:step"));
    };
    if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(bad("need 0 < lo <= hi"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(bad("step must be positive"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

/// One row of an α sweep. Columns a bound does not define stay `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub lhs: Option<f64>,
    pub rhs_final: Option<f64>,
    pub rhs_sharp: Option<f64>,
    pub rhs_stmt: Option<f64>,
    pub rhs_proof: Option<f64>,
    pub ratio: Option<f64>,
    pub status: String,
}

pub const CSV_HEADER: [&str; 8] = ["alpha", "lhs", "rhs_final", "rhs_sharp", "rhs_stmt", "rhs_proof", "ratio", "status"];

impl SweepRow {
    fn failed(alpha: f64, status: String) -> Self {
        SweepRow {
            alpha,
            lhs: None,
            rhs_final: None,
            rhs_sharp: None,
            rhs_stmt: None,
            rhs_proof: None,
            ratio: None,
            status,
        }
    }

    fn from_report(alpha: f64, bound: Bound, r: &InequalityReport) -> Self {
        let get = |label: &str| r.side(label).map(|s| s.value);
        let (rhs_final, rhs_sharp, rhs_stmt, rhs_proof) = match bound {
            Bound::Thm24 => (get("rhs_final"), get("rhs_sharp"), None, None),
            Bound::Thm25 => (get("rhs_final"), None, get("rhs_stmt"), get("rhs_proof")),
            Bound::Thm26 => (get("rhs"), None, None, None),
        };
        SweepRow {
            alpha,
            lhs: get("lhs"),
            rhs_final,
            rhs_sharp,
            rhs_stmt,
            rhs_proof,
            ratio: r.tightness,
            status: r.verdict.to_string(),
        }
    }

    fn cells(&self) -> [String; 8] {
        let cell = |v: Option<f64>| v.and_then(format_real).unwrap_or_default();
        [
            cell(Some(self.alpha)),
            cell(self.lhs),
            cell(self.rhs_final),
            cell(self.rhs_sharp),
            cell(self.rhs_stmt),
            cell(self.rhs_proof),
            cell(self.ratio),
            self.status.clone(),
        ]
    }
}

/// Evaluate `bound` at each α in order. `q` is the power-mean exponent for
/// thm25; thm26 uses the conjugate p = q/(q−1). Failures are recorded in the
/// row and the sweep continues.
pub fn sweep_alpha(
    f: &FunctionModel,
    g: &WeightModel,
    iv: &Interval,
    alphas: &[f64],
    bound: Bound,
    q: f64,
    ctx: &EvalContext,
) -> Vec<SweepRow> {
    alphas
        .iter()
        .map(|&alpha| {
            let order = match FracOrder::new(alpha) {
                Ok(o) => o,
                Err(e) => return SweepRow::failed(alpha, format!("error: {e}")),
            };
            let report = match bound {
                Bound::Thm24 => thm_2_4_bound(f, g, order, iv, ctx),
                Bound::Thm25 => thm_2_5_bound(f, g, order, iv, q, ctx),
                Bound::Thm26 => thm_2_6_bound(f, g, order, iv, q / (q - 1.0), ctx),
            };
            match report {
                Ok(r) => SweepRow::from_report(alpha, bound, &r),
                Err(e) => SweepRow::failed(alpha, format!("error: {e}")),
            }
        })
        .collect()
}

pub fn write_csv<W: io::Write>(rows: &[SweepRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    w.flush()?;
    Ok(())
}
