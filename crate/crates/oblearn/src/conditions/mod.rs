//! Checkers for the preference and informational conditions: single
//! crossing, MLRP, distinguishability, the unbounded-beliefs lattice,
//! tail classification, and the implication audit that ties them
//! together.
//!
//! Asymptotic conditions are undecidable from finite probes in general,
//! so verdicts carry a third value `inconclusive`; analytic certificates
//! for the named families upgrade numeric evidence to exact verdicts,
//! and verdicts obtained on truncated domains say so in their witnesses.

mod mlrp;
mod scd;
mod tails;
mod unbounded;

pub use mlrp::check_mlrp;
pub use scd::{check_scd, scd_oracle};
pub use tails::{tail_classify, TailReport};
pub use unbounded::{
    check_dub, check_pairwise_ub, check_pidd, check_unbounded_beliefs, check_universal_dub,
    default_prior_sample, distinguishability, Comparison,
};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::signal::SignalModel;

/// Outcome of a condition check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// A checker's verdict with its numeric evidence.
///
/// `probe_log` rows are `[probe, value]` where `value` is the natural log
/// of the probed ratio (linear ratios underflow long before the probes
/// stop being informative). A `fails` verdict always carries a concrete,
/// re-evaluable counterexample in `witnesses`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub condition: String,
    pub verdict: Verdict,
    pub witnesses: Value,
    pub probe_log: Vec<(f64, f64)>,
}

impl CheckReport {
    pub fn new(condition: &str, verdict: Verdict, witnesses: Value) -> Self {
        CheckReport {
            condition: condition.to_string(),
            verdict,
            witnesses,
            probe_log: Vec::new(),
        }
    }

    pub fn with_log(mut self, log: Vec<(f64, f64)>) -> Self {
        self.probe_log = log;
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Probe budget and thresholds for the limit checkers.
#[derive(Debug, Clone)]
pub struct ProbePlan {
    /// Geometric probe grids run out to `2^max_exponent` state spreads.
    pub max_exponent: u32,
    /// A running minimum below this counts as "→ 0".
    pub eps_limit: f64,
    /// A full-domain minimum above this counts as "bounded away".
    pub bounded_away: f64,
    /// Probes of strict final decrease required to call a trend.
    pub trend_window: usize,
    /// Whether stationarity checks examine the tail limits beyond the
    /// grid. Scenarios on truncated windows switch this off and say so.
    pub include_tails: bool,
}

impl Default for ProbePlan {
    fn default() -> Self {
        ProbePlan {
            max_exponent: 40,
            eps_limit: 1e-8,
            bounded_away: 1e-4,
            trend_window: 5,
            include_tails: true,
        }
    }
}

/// Runs the whole battery and flags any verdict combination that the
/// implication lattice forbids:
/// unbounded ⟹ DUB ⟹ pairwise, universal DUB ⟹ DUB; under MLRP the
/// middle three agree, and with more than two states MLRP excludes
/// unbounded beliefs. `inconclusive` is compatible with anything.
pub fn implication_audit(model: &SignalModel, plan: &ProbePlan) -> Result<CheckReport> {
    let mlrp = match check_mlrp(model) {
        Ok(r) => Some(r),
        Err(crate::Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let dub = check_dub(model, plan)?;
    let udub = check_universal_dub(model, plan)?;
    let pub_ = check_pairwise_ub(model, plan)?;
    let ub = check_unbounded_beliefs(model, plan)?;

    let mut violations: Vec<String> = Vec::new();
    let def = |r: &CheckReport| r.verdict != Verdict::Inconclusive;
    let imply = |name: &str, a: &CheckReport, b: &CheckReport, violations: &mut Vec<String>| {
        if a.verdict == Verdict::Holds && b.verdict == Verdict::Fails {
            violations.push(format!("{name}: {} holds but {} fails", a.condition, b.condition));
        }
    };
    imply("unbounded⟹dub", &ub, &dub, &mut violations);
    imply("dub⟹pairwise", &dub, &pub_, &mut violations);
    imply("universal⟹dub", &udub, &dub, &mut violations);

    if let Some(mlrp) = &mlrp {
        if mlrp.verdict == Verdict::Holds {
            let trio = [&pub_, &dub, &udub];
            for a in trio {
                for b in trio {
                    if def(a) && def(b) && a.verdict != b.verdict {
                        violations.push(format!(
                            "mlrp equivalence: {} {:?} vs {} {:?}",
                            a.condition, a.verdict, b.condition, b.verdict
                        ));
                    }
                }
            }
            if model.space().len() > 2 && ub.verdict == Verdict::Holds {
                violations.push("mlrp with >2 states cannot have unbounded beliefs".into());
            }
        }
    }

    let verdicts = json!({
        "mlrp": mlrp.as_ref().map(|r| r.verdict),
        "dub": dub.verdict,
        "universal_dub": udub.verdict,
        "pairwise_unbounded": pub_.verdict,
        "unbounded": ub.verdict,
    });
    let verdict = if violations.is_empty() { Verdict::Holds } else { Verdict::Fails };
    Ok(CheckReport::new(
        "implication_audit",
        verdict,
        json!({ "verdicts": verdicts, "violations": violations }),
    ))
}
