//! Stationary beliefs: public beliefs at which some optimal action stays
//! optimal after (almost) every signal — the sites of information
//! cascades. Whether every stationary belief has adequate knowledge is
//! exactly the adequate-learning question, so the scanner below is the
//! inadequate-learning certificate finder.

use serde::Serialize;
use serde_json::json;

use crate::conditions::{CheckReport, ProbePlan, Verdict};
use crate::error::{Error, Result};
use crate::model::{adequate_knowledge, choice_set, same_space, Belief, UtilityTable, TIE_TOL};
use crate::signal::SignalModel;

use super::tail_belief;

const STATIONARY_GRID: usize = 2048;

/// Tests whether some action in c(μ) remains optimal at μ_s for every
/// signal. Exact for discrete backends; location families are examined
/// on a quantile grid plus the limiting tail posteriors, and the verdict
/// says which domain produced it.
pub fn detect_stationary(
    u: &UtilityTable,
    mu: &Belief,
    model: &SignalModel,
    plan: &ProbePlan,
) -> Result<CheckReport> {
    if !same_space(u.space(), mu.space()) || !same_space(mu.space(), model.space()) {
        return Err(Error::SpaceMismatch);
    }
    let mut candidates = choice_set(u, mu, TIE_TOL)?;

    match model {
        SignalModel::Finite(_) | SignalModel::Posteriors(_) => {
            for s in model.discrete_signals().expect("discrete backend") {
                let post = model.bayes_update(mu, s)?;
                let cs = choice_set(u, &post, TIE_TOL)?;
                candidates.retain(|a| cs.contains(a));
                if candidates.is_empty() {
                    return Ok(CheckReport::new(
                        "stationary",
                        Verdict::Fails,
                        json!({ "offending_signal": s, "domain": "exact" }),
                    ));
                }
            }
            Ok(CheckReport::new(
                "stationary",
                Verdict::Holds,
                json!({ "witness_action": candidates[0], "domain": "exact" }),
            ))
        }
        SignalModel::Location(fam) => {
            let (lo, hi) = fam.grid_range(1e-9);
            let step = (hi - lo) / (STATIONARY_GRID as f64 - 1.0);
            // scan from both ends inward: violations live at the extremes
            for i in 0..STATIONARY_GRID {
                let idx = if i % 2 == 0 { i / 2 } else { STATIONARY_GRID - 1 - i / 2 };
                let s = lo + step * idx as f64;
                let post = model.bayes_update(mu, s)?;
                let cs = choice_set(u, &post, TIE_TOL)?;
                candidates.retain(|a| cs.contains(a));
                if candidates.is_empty() {
                    return Ok(CheckReport::new(
                        "stationary",
                        Verdict::Fails,
                        json!({ "offending_signal": s, "domain": "grid" }),
                    ));
                }
            }
            let mut domain = "grid".to_string();
            if plan.include_tails {
                for toward_high in [false, true] {
                    let limit = tail_belief(fam, mu, toward_high);
                    let cs = choice_set(u, &limit, TIE_TOL)?;
                    candidates.retain(|a| cs.contains(a));
                    if candidates.is_empty() {
                        return Ok(CheckReport::new(
                            "stationary",
                            Verdict::Fails,
                            json!({
                                "offending_signal": if toward_high { "+inf limit" } else { "-inf limit" },
                                "domain": "tail-limit",
                            }),
                        ));
                    }
                }
                domain = "grid+tails".into();
            } else {
                domain = format!("{domain} (tails excluded: truncated window)");
            }
            Ok(CheckReport::new(
                "stationary",
                Verdict::Holds,
                json!({ "witness_action": candidates[0], "domain": domain, "tolerance": "grid" }),
            ))
        }
        SignalModel::MixtureAtom(_) => Err(Error::Unsupported(
            "stationarity detection is not wired for the atom-mixture family".into(),
        )),
    }
}

/// One stationary-but-inadequate belief found by the scanner.
#[derive(Debug, Clone, Serialize)]
pub struct ScanHit {
    /// Full-length mass vector of the offending belief.
    pub mass: Vec<f64>,
    /// States spanned by the scanned face.
    pub face: Vec<i64>,
    /// The action that stays optimal after every probed signal.
    pub stationary_witness: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanOutcome {
    pub examined: usize,
    pub hits: Vec<ScanHit>,
}

/// Enumerates simplex-grid beliefs supported exactly on `face` (state
/// indices) with resolution `grid_step`, classifies each as
/// stationary/adequate, and returns the stationary-with-inadequate-
/// knowledge hits.
pub fn stationary_scan(
    u: &UtilityTable,
    model: &SignalModel,
    face: &[usize],
    grid_step: f64,
    plan: &ProbePlan,
) -> Result<ScanOutcome> {
    if face.is_empty() {
        return Err(Error::InvalidBelief("empty face".into()));
    }
    if !(grid_step > 0.0 && grid_step < 1.0) {
        return Err(Error::InvalidBelief(format!("grid step {grid_step} outside (0,1)")));
    }
    let space = model.space();
    let units = (1.0 / grid_step).round() as u32;
    let k = face.len();
    if (units as usize) < k {
        return Err(Error::InvalidBelief("grid step too coarse for this face".into()));
    }

    let mut hits = Vec::new();
    let mut examined = 0usize;
    for parts in compositions(units, k) {
        let mut weights = vec![0.0; space.len()];
        for (i, &f) in face.iter().enumerate() {
            weights[f] = parts[i] as f64 / units as f64;
        }
        let mu = Belief::from_weights(space, &weights)?;
        examined += 1;
        let stat = detect_stationary(u, &mu, model, plan)?;
        if stat.verdict == Verdict::Holds {
            let adq = adequate_knowledge(u, &mu, TIE_TOL)?;
            if !adq.holds {
                hits.push(ScanHit {
                    mass: mu.masses().to_vec(),
                    face: face.iter().map(|&i| space.state(i)).collect(),
                    stationary_witness: stat.witnesses["witness_action"].as_u64().unwrap_or(0)
                        as usize,
                });
            }
        }
    }

    Ok(ScanOutcome { examined, hits })
}

/// All ways to write `total` as an ordered sum of `k` positive integers.
fn compositions(total: u32, k: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 1..=remaining - (slots as u32 - 1) {
            prefix.push(v);
            rec(remaining - v, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts_match_stars_and_bars() {
        assert_eq!(compositions(50, 1).len(), 1);
        assert_eq!(compositions(50, 2).len(), 49);
        assert_eq!(compositions(50, 3).len(), 49 * 48 / 2);
        for c in compositions(7, 3) {
            assert_eq!(c.iter().sum::<u32>(), 7);
            assert!(c.iter().all(|&v| v >= 1));
        }
    }
}
