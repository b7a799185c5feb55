use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use fracineq_core::{EvalContext, InequalityReport, InstanceRecord, QuadConfig, Tolerance, Verdict};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispatch::{evaluate, EqId};
use crate::generate::{gen_instance_with, Requirements};
use crate::{HarnessError, InstanceConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Evaluators whose verdicts are reported but never gate a run: the
/// power-mean bound has competing constants and is judged per candidate.
pub const UNGATED: [EqId; 1] = [EqId::Thm25];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    Identities,
    Sandwiches,
    Bounds,
    Reductions,
    NegativeControls,
    All,
}

impl SuiteId {
    pub const NAMES: [&'static str; 6] = [
        "identities",
        "sandwiches",
        "bounds",
        "reductions",
        "negative-controls",
        "all",
    ];

    pub const CONCRETE: [SuiteId; 5] = [
        SuiteId::Identities,
        SuiteId::Sandwiches,
        SuiteId::Bounds,
        SuiteId::Reductions,
        SuiteId::NegativeControls,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::Identities => "identities",
            SuiteId::Sandwiches => "sandwiches",
            SuiteId::Bounds => "bounds",
            SuiteId::Reductions => "reductions",
            SuiteId::NegativeControls => "negative-controls",
            SuiteId::All => "all",
        }
    }

    /// Evaluators run on every instance of the suite.
    pub fn equations(self) -> &'static [EqId] {
        match self {
            SuiteId::Identities => &[EqId::Lemma23, EqId::KirmaciId, EqId::Eq0],
            SuiteId::Sandwiches => &[EqId::Hh, EqId::Fejer, EqId::HhFrac, EqId::FejerFrac],
            SuiteId::Bounds => &[EqId::Kirmaci1, EqId::Kirmaci2, EqId::Thm24, EqId::Thm25, EqId::Thm26],
            SuiteId::Reductions => &[EqId::Remark1, EqId::Remark2, EqId::Remark3],
            SuiteId::NegativeControls => &[EqId::Hh],
            SuiteId::All => &[],
        }
    }

    fn requirements(self) -> Requirements {
        match self {
            SuiteId::Identities | SuiteId::All => Requirements::NONE,
            SuiteId::Sandwiches | SuiteId::NegativeControls => Requirements {
                convex: true,
                symmetric_weight: true,
                ..Requirements::NONE
            },
            SuiteId::Bounds | SuiteId::Reductions => Requirements {
                derivative_convex: true,
                ..Requirements::NONE
            },
        }
    }

    /// Whether every evaluation in this suite is meant to fail.
    pub fn expects_failure(self) -> bool {
        self == SuiteId::NegativeControls
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::CONCRETE
            .into_iter()
            .chain([SuiteId::All])
            .find(|x| x.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown suite {s:?}")))
    }
}

/// Everything that determines a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub n: usize,
    pub instance: InstanceConfig,
    pub tolerance: Tolerance,
    pub quad: QuadConfig,
    /// Evaluate instances on the rayon pool. Output does not depend on it.
    #[serde(skip)]
    pub parallel: bool,
}

impl SuiteOptions {
    pub fn new(n: usize, seed: u64) -> Self {
        SuiteOptions {
            n,
            instance: InstanceConfig::default().with_seed(seed),
            tolerance: Tolerance::default(),
            quad: QuadConfig::default(),
            parallel: true,
        }
    }

    fn context(&self) -> EvalContext {
        EvalContext {
            quad: self.quad,
            tol: self.tolerance,
            check_hypotheses: true,
        }
    }
}

/// An evaluation that could not produce a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub suite: SuiteId,
    pub eq: Option<EqId>,
    pub index: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub evaluations: usize,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Counts {
    fn add(&mut self, v: Verdict) {
        self.evaluations += 1;
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Spread {
    fn of(mut v: Vec<f64>) -> Option<Spread> {
        v.retain(|x| x.is_finite());
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
        Some(Spread {
            min: v[0],
            median,
            max: v[n - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationStats {
    #[serde(flatten)]
    pub counts: Counts,
    pub worst_slack: f64,
    /// LHS/RHS over all evaluations of a bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tightness: Option<Spread>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CandidateStats {
    pub evaluated: usize,
    pub violations: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Worst {
    pub name: String,
    pub slack: f64,
    pub verdict: Verdict,
    pub instance: InstanceRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Generated instances (n per concrete suite).
    pub instances: usize,
    #[serde(flatten)]
    pub counts: Counts,
    pub errors: usize,
    /// Fails in suites built to fail.
    pub expected_fails: usize,
    /// Fails of gated evaluators outside those suites.
    pub unexpected_fails: usize,
    /// Fails of ungated evaluators.
    pub ungated_fails: usize,
    /// Smallest slack among evaluations not expected to fail.
    pub worst: Option<Worst>,
    pub per_suite: BTreeMap<SuiteId, Counts>,
    pub per_equation: BTreeMap<EqId, EquationStats>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub thm25_candidates: BTreeMap<String, CandidateStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub error_details: Vec<ErrorRecord>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub seed: u64,
    pub instance: InstanceConfig,
    /// α used by the reductions suite in place of `instance.alpha_range`.
    pub reductions_alpha: f64,
    pub tolerance: Tolerance,
    pub quad: QuadConfig,
}

/// The document written by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: SuiteId,
    pub config: ConfigEcho,
    pub results: Vec<InequalityReport>,
    pub summary: Summary,
}

impl SuiteReport {
    /// Results of one evaluator.
    pub fn results_for(&self, eq: EqId) -> impl Iterator<Item = &InequalityReport> {
        self.results.iter().filter(move |r| r.name == eq.as_str())
    }
}

const REDUCTIONS_ALPHA: f64 = 1.0;

enum Outcome {
    Report(Box<InequalityReport>),
    Error(ErrorRecord),
}

fn suite_instance_config(suite: SuiteId, opts: &SuiteOptions) -> InstanceConfig {
    if suite == SuiteId::Reductions {
        opts.instance.clone().with_alpha(REDUCTIONS_ALPHA)
    } else {
        opts.instance.clone()
    }
}

/// The fixed concave control: −x² on [0, 1].
fn concave_control(seed: u64) -> InstanceRecord {
    InstanceRecord {
        f: "pow:2".into(),
        negate_f: true,
        g: None,
        a: 0.0,
        b: 1.0,
        seed: Some(seed),
        index: Some(0),
        ..InstanceRecord::default()
    }
}

fn run_index(suite: SuiteId, index: u64, cfg: &InstanceConfig, ctx: &EvalContext) -> Vec<Outcome> {
    let record = if suite == SuiteId::NegativeControls && index == 0 {
        concave_control(cfg.seed)
    } else {
        match gen_instance_with(cfg, index, suite.requirements()) {
            Ok(inst) => {
                let mut rec = inst.record(cfg.seed);
                rec.negate_f = suite.expects_failure();
                rec
            }
            Err(e) => {
                return vec![Outcome::Error(ErrorRecord {
                    suite,
                    eq: None,
                    index,
                    message: e.to_string(),
                })]
            }
        }
    };
    suite
        .equations()
        .iter()
        .map(|&eq| match evaluate(eq, &record, ctx) {
            Ok(r) => Outcome::Report(Box::new(r)),
            Err(e) => Outcome::Error(ErrorRecord {
                suite,
                eq: Some(eq),
                index,
                message: e.to_string(),
            }),
        })
        .collect()
}

fn run_concrete(suite: SuiteId, opts: &SuiteOptions) -> Vec<Outcome> {
    let cfg = suite_instance_config(suite, opts);
    let ctx = opts.context();
    let indices = 0..opts.n as u64;
    let nested: Vec<Vec<Outcome>> = if opts.parallel {
        indices.into_par_iter().map(|i| run_index(suite, i, &cfg, &ctx)).collect()
    } else {
        indices.map(|i| run_index(suite, i, &cfg, &ctx)).collect()
    };
    nested.into_iter().flatten().collect()
}

/// Run a suite of `opts.n` instances (per concrete suite for `all`).
pub fn run_suite(suite: SuiteId, opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    opts.instance.validate()?;
    let start = Instant::now();
    let suites: Vec<SuiteId> = if suite == SuiteId::All {
        SuiteId::CONCRETE.to_vec()
    } else {
        vec![suite]
    };
    let mut results = Vec::new();
    let mut origins = Vec::new();
    let mut errors = Vec::new();
    for &s in &suites {
        for outcome in run_concrete(s, opts) {
            match outcome {
                Outcome::Report(r) => {
                    results.push(*r);
                    origins.push(s);
                }
                Outcome::Error(e) => errors.push(e),
            }
        }
    }
    let mut summary = summarize(&results, &origins, errors, suites.len() * opts.n);
    summary.wall_time_s = start.elapsed().as_secs_f64();
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite,
        config: ConfigEcho {
            n: opts.n,
            seed: opts.instance.seed,
            instance: opts.instance.clone(),
            reductions_alpha: REDUCTIONS_ALPHA,
            tolerance: opts.tolerance,
            quad: opts.quad,
        },
        results,
        summary,
    })
}

fn summarize(results: &[InequalityReport], origins: &[SuiteId], errors: Vec<ErrorRecord>, instances: usize) -> Summary {
    let mut counts = Counts::default();
    let mut per_suite: BTreeMap<SuiteId, Counts> = BTreeMap::new();
    let mut per_eq: BTreeMap<EqId, (Counts, f64, Vec<f64>)> = BTreeMap::new();
    let mut candidates: BTreeMap<String, CandidateStats> = BTreeMap::new();
    let (mut expected, mut unexpected, mut ungated) = (0, 0, 0);
    let mut worst: Option<&InequalityReport> = None;

    for (r, &suite) in results.iter().zip(origins) {
        counts.add(r.verdict);
        per_suite.entry(suite).or_default().add(r.verdict);
        let eq: EqId = r.name.parse().expect("evaluator names are equation ids");
        let entry = per_eq.entry(eq).or_insert_with(|| (Counts::default(), f64::INFINITY, Vec::new()));
        entry.0.add(r.verdict);
        if r.slack < entry.1 || entry.1.is_nan() {
            entry.1 = r.slack;
        }
        if let Some(t) = r.tightness {
            entry.2.push(t);
        }
        let gated = !UNGATED.contains(&eq);
        if r.verdict == Verdict::Fail {
            if suite.expects_failure() {
                expected += 1;
            } else if gated {
                unexpected += 1;
            } else {
                ungated += 1;
            }
        }
        if !suite.expects_failure() && gated && worst.is_none_or(|w| r.slack < w.slack) {
            worst = Some(r);
        }
        if eq == EqId::Thm25 {
            for c in &r.candidates {
                let s = candidates.entry(c.label.clone()).or_default();
                s.evaluated += 1;
                match c.verdict {
                    Verdict::Fail => s.violations += 1,
                    Verdict::Inconclusive => s.inconclusive += 1,
                    Verdict::Pass => {}
                }
            }
        }
    }

    Summary {
        instances,
        counts,
        errors: errors.len(),
        expected_fails: expected,
        unexpected_fails: unexpected,
        ungated_fails: ungated,
        worst: worst.map(|r| Worst {
            name: r.name.clone(),
            slack: r.slack,
            verdict: r.verdict,
            instance: r.instance.clone(),
        }),
        per_suite,
        per_equation: per_eq
            .into_iter()
            .map(|(eq, (counts, worst_slack, tight))| {
                (
                    eq,
                    EquationStats {
                        counts,
                        worst_slack,
                        tightness: Spread::of(tight),
                    },
                )
            })
            .collect(),
        thm25_candidates: candidates,
        error_details: errors,
        wall_time_s: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in SuiteId::NAMES {
            assert_eq!(name.parse::<SuiteId>().unwrap().as_str(), name);
        }
        assert!("everything".parse::<SuiteId>().is_err());
    }

    #[test]
    fn spread_median() {
        let s = Spread::of(vec![3.0, 1.0, f64::NAN, 2.0, 10.0]).unwrap();
        assert_eq!((s.min, s.median, s.max), (1.0, 2.5, 10.0));
        assert!(Spread::of(vec![]).is_none());
    }

    #[test]
    fn negative_controls_fail_by_design() {
        let report = run_suite(SuiteId::NegativeControls, &SuiteOptions::new(3, 1)).unwrap();
        assert_eq!(report.results[0].verdict, Verdict::Fail);
        assert!(report.summary.expected_fails >= 1);
        assert_eq!(report.summary.unexpected_fails, 0);
    }

    #[test]
    fn parallel_matches_serial() {
        let mut opts = SuiteOptions::new(6, 9);
        let par = run_suite(SuiteId::Identities, &opts).unwrap();
        opts.parallel = false;
        let ser = run_suite(SuiteId::Identities, &opts).unwrap();
        assert_eq!(par.results, ser.results);
        let strip = |mut s: Summary| {
            s.wall_time_s = 0.0;
            s
        };
        assert_eq!(strip(par.summary), strip(ser.summary));
    }

    #[test]
    fn counts_sum() {
        let report = run_suite(SuiteId::Sandwiches, &SuiteOptions::new(4, 2)).unwrap();
        let c = &report.summary.counts;
        assert_eq!(c.pass + c.fail + c.inconclusive, c.evaluations);
        assert_eq!(c.evaluations + report.summary.errors, 4 * SuiteId::Sandwiches.equations().len());
    }
}
