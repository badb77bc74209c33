//! Serializable report types: suite reports, per-check outcomes, and
//! self-contained replayable witnesses.
//!
//! Reports carry no timestamps and use only order-stable containers so
//! that identical (seed, config) pairs serialize byte-identically.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::matcore::SymMatrix;

/// Tolerances in force during a run, embedded in every report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ToleranceInfo {
    /// Relative tolerance of the operator-inequality margin convention.
    pub op_ineq_rel: f64,
    /// Per-prefix relative tolerance of majorization margins.
    pub majorization_rel: f64,
    /// Relative positive-semidefinite clamping threshold.
    pub psd_rel: f64,
}

impl Default for ToleranceInfo {
    fn default() -> Self {
        ToleranceInfo {
            op_ineq_rel: crate::perspective::OP_INEQ_REL_TOL,
            majorization_rel: 1e-8,
            psd_rel: crate::matcore::PSD_TOL,
        }
    }
}

/// Report header.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportMeta {
    pub seed: u64,
    pub tolerances: ToleranceInfo,
    pub version: String,
}

/// Status of one check.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// A self-contained, replayable record of the worst trial of a check:
/// full matrices, function descriptor text, exponent, seed and trial
/// index, plus any named scalars the evaluator needs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Witness {
    pub check_id: String,
    /// Function descriptor in the parser grammar.
    pub func: String,
    pub p: f64,
    pub seed: u64,
    pub trial_index: u64,
    pub matrices: Vec<SymMatrix>,
    /// Named scalars (e.g. `a`, `b`, `theta` for 2×2 scalar
    /// counterexamples; `dim`, `cond` for matrix trials).
    pub scalars: BTreeMap<String, f64>,
    /// Signed relative violation reproduced on replay.
    pub violation: f64,
}

/// Result of one theorem-check.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckOutcome {
    pub check_id: String,
    pub status: CheckStatus,
    /// Number of executed trials.
    pub trials: u64,
    /// Largest signed relative violation seen (positive = violated).
    pub max_rel_violation: f64,
    pub tolerance_used: f64,
    /// Machine-readable reason when status is `skipped`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// A full suite run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SuiteReport {
    pub meta: ReportMeta,
    pub outcomes: Vec<CheckOutcome>,
}

impl SuiteReport {
    /// CSV export of `(checkId, status, maxRelViolation)` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("checkId,status,maxRelViolation\n");
        for o in &self.outcomes {
            let status = match o.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "fail",
                CheckStatus::Skipped => "skipped",
            };
            out.push_str(&format!(
                "{},{},{:e}\n",
                o.check_id, status, o.max_rel_violation
            ));
        }
        out
    }

    pub fn has_failure(&self) -> bool {
        self.outcomes.iter().any(|o| o.status == CheckStatus::Fail)
    }
}

/// Verdict for a single grid exponent in a region scan.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegionVerdict {
    Survived { trials: u64 },
    Violated { witness: Witness },
}

/// One grid point of a region scan.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RegionEntry {
    pub p: f64,
    pub verdict: RegionVerdict,
    /// Worst signed margin observed at this exponent (positive =
    /// violated).
    pub worst_margin: f64,
}

/// Survival map of the exponent region for one function.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RegionMap {
    pub func: String,
    pub p_grid: Vec<f64>,
    pub entries: Vec<RegionEntry>,
    /// Maximal contiguous survived interval of the grid (empirical
    /// evidence, not proof), if any point survived.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survived_interval: Option<(f64, f64)>,
    pub meta: ReportMeta,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_roundtrip() {
        let report = SuiteReport {
            meta: ReportMeta {
                seed: 7,
                tolerances: ToleranceInfo::default(),
                version: "0.0.0".into(),
            },
            outcomes: vec![CheckOutcome {
                check_id: "AH-NORM".into(),
                status: CheckStatus::Pass,
                trials: 10,
                max_rel_violation: -1e-12,
                tolerance_used: 1e-8,
                skipped_reason: None,
                witness: None,
            }],
        };
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: SuiteReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert!(!report.has_failure());
        let csv = report.to_csv();
        assert!(csv.starts_with("checkId,status,maxRelViolation\n"));
        assert!(csv.contains("AH-NORM,pass,"));
    }

    #[test]
    fn witness_embeds_matrices() {
        let w = Witness {
            check_id: "X".into(),
            func: "pow(0.5)".into(),
            p: 2.0,
            seed: 1,
            trial_index: 3,
            matrices: vec![SymMatrix::identity(2)],
            scalars: BTreeMap::new(),
            violation: 0.5,
        };
        let json = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }
}
