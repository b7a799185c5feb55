use fracineq_core::{EvalContext, InequalityReport, InstanceRecord, Tolerance, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dispatch::{evaluate, EqId};
use crate::suite::SuiteReport;
use crate::HarnessError;

/// A single evaluation to re-run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayItem {
    pub eq: EqId,
    pub instance: InstanceRecord,
    /// Verdict recorded when the item was first evaluated, if known.
    pub expected: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayOutcome {
    pub eq: EqId,
    pub expected: Option<Verdict>,
    pub verdict: Option<Verdict>,
    pub reproduced: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<InequalityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Items named by a record file, with the tolerance they were judged under.
///
/// Accepted shapes: a suite document (its failing results, or all results
/// when none failed), a single report, or `{ "eq": …, "instance": … }`.
pub fn parse_record(text: &str) -> Result<(Vec<ReplayItem>, Option<Tolerance>), HarnessError> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("schema_version").is_some() && value.get("results").is_some() {
        let suite: SuiteReport = serde_json::from_value(value)?;
        let failing: Vec<&InequalityReport> = suite.results.iter().filter(|r| r.verdict == Verdict::Fail).collect();
        let chosen = if failing.is_empty() {
            suite.results.iter().collect()
        } else {
            failing
        };
        let items = chosen.into_iter().map(item_of).collect::<Result<_, _>>()?;
        return Ok((items, Some(suite.config.tolerance)));
    }
    if value.get("sides").is_some() {
        let report: InequalityReport = serde_json::from_value(value)?;
        return Ok((vec![item_of(&report)?], None));
    }
    let item: ReplayItem = serde_json::from_value(value)?;
    Ok((vec![item], None))
}

fn item_of(r: &InequalityReport) -> Result<ReplayItem, HarnessError> {
    Ok(ReplayItem {
        eq: r.name.parse()?,
        instance: r.instance.clone(),
        expected: Some(r.verdict),
    })
}

pub fn replay(items: &[ReplayItem], ctx: &EvalContext) -> Vec<ReplayOutcome> {
    items
        .iter()
        .map(|item| match evaluate(item.eq, &item.instance, ctx) {
            Ok(report) => ReplayOutcome {
                eq: item.eq,
                expected: item.expected,
                verdict: Some(report.verdict),
                reproduced: item.expected.is_none_or(|v| v == report.verdict),
                report: Some(report),
                error: None,
            },
            Err(e) => ReplayOutcome {
                eq: item.eq,
                expected: item.expected,
                verdict: None,
                reproduced: false,
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}
