use std::fmt;
use std::str::FromStr;

use fracineq_core::engine::{
    fejer_classical, fejer_fractional, hh_classical, hh_fractional, kirmaci_bound1, kirmaci_bound2,
    kirmaci_identity_residual, lemma_2_3_residual, remark1_reduction, remark2_reduction, remark3_reduction,
    sarikaya_erden_residual, thm_2_4_bound, thm_2_5_bound, thm_2_6_bound,
};
use fracineq_core::{parse_function, parse_weight, EvalContext, FracOrder, InequalityReport, InstanceRecord, Interval};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Every identity and inequality the harness can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EqId {
    #[serde(rename = "hh")]
    Hh,
    #[serde(rename = "fejer")]
    Fejer,
    #[serde(rename = "hh-frac")]
    HhFrac,
    #[serde(rename = "fejer-frac")]
    FejerFrac,
    #[serde(rename = "lemma23")]
    Lemma23,
    #[serde(rename = "kirmaci-id")]
    KirmaciId,
    #[serde(rename = "kirmaci-1")]
    Kirmaci1,
    #[serde(rename = "kirmaci-2")]
    Kirmaci2,
    #[serde(rename = "thm24")]
    Thm24,
    #[serde(rename = "thm25")]
    Thm25,
    #[serde(rename = "thm26")]
    Thm26,
    #[serde(rename = "eq0")]
    Eq0,
    #[serde(rename = "remark1")]
    Remark1,
    #[serde(rename = "remark2")]
    Remark2,
    #[serde(rename = "remark3")]
    Remark3,
}

impl EqId {
    pub const ALL: [EqId; 15] = [
        EqId::Hh,
        EqId::Fejer,
        EqId::HhFrac,
        EqId::FejerFrac,
        EqId::Lemma23,
        EqId::KirmaciId,
        EqId::Kirmaci1,
        EqId::Kirmaci2,
        EqId::Thm24,
        EqId::Thm25,
        EqId::Thm26,
        EqId::Eq0,
        EqId::Remark1,
        EqId::Remark2,
        EqId::Remark3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EqId::Hh => "hh",
            EqId::Fejer => "fejer",
            EqId::HhFrac => "hh-frac",
            EqId::FejerFrac => "fejer-frac",
            EqId::Lemma23 => "lemma23",
            EqId::KirmaciId => "kirmaci-id",
            EqId::Kirmaci1 => "kirmaci-1",
            EqId::Kirmaci2 => "kirmaci-2",
            EqId::Thm24 => "thm24",
            EqId::Thm25 => "thm25",
            EqId::Thm26 => "thm26",
            EqId::Eq0 => "eq0",
            EqId::Remark1 => "remark1",
            EqId::Remark2 => "remark2",
            EqId::Remark3 => "remark3",
        }
    }
}

impl fmt::Display for EqId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EqId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EqId::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown equation id {s:?}")))
    }
}

/// Rebuild the instance described by `rec` and evaluate `eq` on it.
///
/// Negated functions are evaluated without hypothesis checks, as in the
/// negative-control suite.
pub fn evaluate(eq: EqId, rec: &InstanceRecord, ctx: &EvalContext) -> Result<InequalityReport, HarnessError> {
    let mut f = parse_function(&rec.f)?;
    let ctx = if rec.negate_f {
        f = f.negated();
        ctx.unchecked()
    } else {
        *ctx
    };
    let iv = Interval::new(rec.a, rec.b)?;
    let g = parse_weight(rec.g.as_deref().unwrap_or("one"), iv)?;
    let alpha = FracOrder::new(rec.alpha.unwrap_or(1.0))?;
    let q = match (rec.q, rec.p) {
        (Some(q), _) => q,
        (None, Some(p)) => p / (p - 1.0),
        (None, None) => 2.0,
    };
    let p = rec.p.unwrap_or(q / (q - 1.0));
    let x = rec.x.unwrap_or(iv.midpoint());
    let mut report = match eq {
        EqId::Hh => hh_classical(&f, &iv, &ctx),
        EqId::Fejer => fejer_classical(&f, &g, &iv, &ctx),
        EqId::HhFrac => hh_fractional(&f, alpha, &iv, &ctx),
        EqId::FejerFrac => fejer_fractional(&f, &g, alpha, &iv, &ctx),
        EqId::Lemma23 => lemma_2_3_residual(&f, &g, alpha, &iv, &ctx),
        EqId::KirmaciId => kirmaci_identity_residual(&f, &iv, &ctx),
        EqId::Kirmaci1 => kirmaci_bound1(&f, &iv, &ctx),
        EqId::Kirmaci2 => kirmaci_bound2(&f, &iv, p, &ctx),
        EqId::Thm24 => thm_2_4_bound(&f, &g, alpha, &iv, &ctx),
        EqId::Thm25 => thm_2_5_bound(&f, &g, alpha, &iv, q, &ctx),
        EqId::Thm26 => thm_2_6_bound(&f, &g, alpha, &iv, p, &ctx),
        EqId::Eq0 => sarikaya_erden_residual(&f, &g, alpha, x, &iv, &ctx),
        EqId::Remark1 => remark1_reduction(&f, &g, &iv, &ctx),
        EqId::Remark2 => remark2_reduction(&f, &iv, &ctx),
        EqId::Remark3 => remark3_reduction(&f, &iv, p, &ctx),
    }?;
    report.instance.seed = rec.seed;
    report.instance.index = rec.index;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for eq in EqId::ALL {
            assert_eq!(eq.as_str().parse::<EqId>().unwrap(), eq);
            let json = serde_json::to_string(&eq).unwrap();
            assert_eq!(json, format!("\"{eq}\""));
        }
        assert!("thm27".parse::<EqId>().is_err());
    }

    #[test]
    fn evaluate_lemma_example() {
        let rec = InstanceRecord {
            f: "pow:2".into(),
            g: Some("one".into()),
            a: 0.0,
            b: 1.0,
            alpha: Some(1.0),
            ..InstanceRecord::default()
        };
        let r = evaluate(EqId::Lemma23, &rec, &EvalContext::default()).unwrap();
        assert_eq!(r.name, "lemma23");
        assert!((r.value("lhs") + 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn negated_records_skip_hypotheses() {
        let rec = InstanceRecord {
            f: "pow:2".into(),
            negate_f: true,
            a: 0.0,
            b: 1.0,
            ..InstanceRecord::default()
        };
        let r = evaluate(EqId::Hh, &rec, &EvalContext::default()).unwrap();
        assert_eq!(r.verdict, fracineq_core::Verdict::Fail);
        assert!(r.instance.negate_f);
    }
}
