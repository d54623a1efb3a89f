//! Line-delimited JSON records, schema version "1".
//!
//! Serialization is deterministic: struct declaration order is the key
//! order, optional fields are omitted entirely when absent, and every
//! integer travels as a decimal string so consumers without big-integer
//! support cannot overflow.

use good_integers::goodness::classify_special_case;
use good_integers::{ExponentProgression, GoodnessVerdict};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

/// The query triple as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub a: String,
    pub b: String,
    pub l: String,
}

/// The decomposition g = gcd(A, B), L = g_part * ell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub g: String,
    pub a: String,
    pub b: String,
    pub g_part: String,
    pub ell: String,
    pub gamma: String,
}

/// The admissible exponents: K = residue (mod modulus), K >= threshold,
/// together with the sporadic members below the threshold when any exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionRecord {
    pub residue: String,
    pub modulus: String,
    pub threshold: String,
    pub k_min: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sporadics: Option<Vec<String>>,
}

/// One record per decided query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub query: QueryRecord,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_step: Option<String>,
    pub split: SplitRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub progression: Option<ProgressionRecord>,
    pub special_case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents_preview: Option<Vec<String>>,
}

impl From<&ExponentProgression> for ProgressionRecord {
    fn from(p: &ExponentProgression) -> Self {
        ProgressionRecord {
            residue: p.residue.to_string(),
            modulus: p.modulus.to_string(),
            threshold: p.threshold.to_string(),
            k_min: p.k_min.to_string(),
            sporadics: if p.sporadics.is_empty() {
                None
            } else {
                Some(p.sporadics.iter().map(ToString::to_string).collect())
            },
        }
    }
}

impl OutputRecord {
    /// Assembles the record for a decided query. `preview` carries the
    /// exponent listing when the invoking subcommand produced one.
    pub fn from_verdict(verdict: &GoodnessVerdict, preview: Option<Vec<String>>) -> Self {
        let ctx = &verdict.context;
        OutputRecord {
            schema_version: SCHEMA_VERSION.to_owned(),
            query: QueryRecord {
                a: ctx.base_a.to_string(),
                b: ctx.base_b.to_string(),
                l: ctx.modulus.to_string(),
            },
            verdict: verdict.good,
            failure_step: verdict.failure_step.as_ref().map(|s| s.label().to_owned()),
            split: SplitRecord {
                g: ctx.g.to_string(),
                a: ctx.a.to_string(),
                b: ctx.b.to_string(),
                g_part: ctx.g_part.to_string(),
                ell: ctx.ell.to_string(),
                gamma: ctx.gamma.to_string(),
            },
            progression: verdict.progression.as_ref().map(ProgressionRecord::from),
            special_case: classify_special_case(ctx).label().to_owned(),
            exponents_preview: preview,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use good_integers::decide;
    use num_bigint::{BigInt, BigUint};

    #[test]
    fn serialization_is_order_stable() {
        let verdict = decide(
            &BigInt::from(18),
            &BigInt::from(12),
            &BigUint::from(3200u32),
        )
        .unwrap();
        let record = OutputRecord::from_verdict(&verdict, None);
        let line = serde_json::to_string(&record).unwrap();
        assert_eq!(
            line,
            "{\"schema_version\":\"1\",\"query\":{\"a\":\"18\",\"b\":\"12\",\"l\":\"3200\"},\
             \"verdict\":true,\"split\":{\"g\":\"6\",\"a\":\"3\",\"b\":\"2\",\"g_part\":\"128\",\
             \"ell\":\"25\",\"gamma\":\"7\"},\"progression\":{\"residue\":\"5\",\"modulus\":\"10\",\
             \"threshold\":\"7\",\"k_min\":\"15\"},\"special_case\":\"squarefree_g\"}"
        );
        let back: OutputRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, record);
        assert_eq!(serde_json::to_string(&back).unwrap(), line);
    }

    #[test]
    fn bad_queries_carry_the_failing_step() {
        let verdict = decide(&BigInt::from(10), &BigInt::from(15), &BigUint::from(6u32)).unwrap();
        let record = OutputRecord::from_verdict(&verdict, None);
        assert!(!record.verdict);
        assert_eq!(record.failure_step.as_deref(), Some("step3_gcd_a"));
        assert!(record.progression.is_none());
        let line = serde_json::to_string(&record).unwrap();
        assert!(!line.contains("progression"));
    }

    #[test]
    fn sporadics_appear_when_present() {
        let verdict = decide(&BigInt::from(6), &BigInt::from(10), &BigUint::from(64u32)).unwrap();
        let record = OutputRecord::from_verdict(&verdict, None);
        let p = record.progression.unwrap();
        assert_eq!(p.sporadics, Some(vec!["3".to_owned(), "5".to_owned()]));
        assert_eq!(p.k_min, "3");
    }
}
