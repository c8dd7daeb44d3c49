//! Limit checkers for distinguishability and the unbounded-beliefs
//! lattice: DUB, universal DUB, pairwise unbounded beliefs, unbounded
//! beliefs, and prior-independent directional distinguishability.
//!
//! Probing conventions by backend:
//! - location families: geometric signal grids s = anchor ± spread·2^k up
//!   to 2^40 spreads; verdicts that cannot be certified analytically are
//!   `holds` only on a reached "→ 0" trend, `inconclusive` otherwise.
//! - finite matrices: the whole signal set is enumerated; limits over a
//!   finite set are attained minima, so no unboundedness condition can
//!   hold and checkers report `fails` with the attained minimum.
//! - posterior sequences: the finite entry list stands for a truncated
//!   infinite sequence; running-minimum record subsequences below the
//!   limit threshold count as `holds`, labeled truncated-domain.
//! - the atom-mixture family: probes stay inside the state window where
//!   the tracking atoms are active; verdicts are labeled truncated.

use serde_json::{json, Value};

use crate::conditions::{CheckReport, ProbePlan, Verdict};
use crate::error::{Error, Result};
use crate::model::Belief;
use crate::signal::{LocationFamily, LocationKind, SignalModel, TailClass};

use super::tails::tail_classify;
use super::check_mlrp;

/// Which states a benchmark state is tested against.
#[derive(Debug, Clone, PartialEq)]
pub enum Comparison {
    Lower,
    Upper,
    Complement,
    Explicit(Vec<usize>),
}

impl Comparison {
    fn resolve(&self, omega_idx: usize, n_states: usize) -> Vec<usize> {
        match self {
            Comparison::Lower => (0..omega_idx).collect(),
            Comparison::Upper => (omega_idx + 1..n_states).collect(),
            Comparison::Complement => (0..n_states).filter(|&i| i != omega_idx).collect(),
            Comparison::Explicit(v) => v.clone(),
        }
    }

    fn label(&self) -> String {
        match self {
            Comparison::Lower => "lower".into(),
            Comparison::Upper => "upper".into(),
            Comparison::Complement => "complement".into(),
            Comparison::Explicit(v) => format!("explicit{v:?}"),
        }
    }
}

// ---------------------------------------------------------------------------
// probe machinery
// ---------------------------------------------------------------------------

struct ProbeSet {
    /// Probe labels: signal values, or 1-based indices for sequences.
    xs: Vec<f64>,
    /// log f(x|ω) per probe per state.
    loglik: Vec<Vec<f64>>,
    /// Full signal domain (or full window) enumerated.
    complete: bool,
    /// Whether a reached trend may upgrade to `holds`.
    trend_may_hold: bool,
    /// Truncated-domain label for the report.
    truncated: bool,
    /// Probes progress monotonically toward a limit.
    ordered: bool,
}

fn probe_set(model: &SignalModel, plan: &ProbePlan, up: bool, anchor: f64) -> ProbeSet {
    let n_states = model.space().len();
    match model {
        SignalModel::Location(fam) => {
            let spread = fam.space().spread();
            let sign = if up { 1.0 } else { -1.0 };
            let xs: Vec<f64> = (0..=plan.max_exponent)
                .map(|k| anchor + sign * spread * 2f64.powi(k as i32))
                .collect();
            let loglik = xs
                .iter()
                .map(|&x| (0..n_states).map(|w| fam.log_density(x, w)).collect())
                .collect();
            ProbeSet {
                xs,
                loglik,
                complete: false,
                trend_may_hold: true,
                truncated: fam.space().is_truncated(),
                ordered: true,
            }
        }
        SignalModel::MixtureAtom(fam) => {
            let xs = fam.probe_signals(up);
            let loglik = xs
                .iter()
                .map(|&x| (0..n_states).map(|w| fam.log_mass(x as i64, w)).collect())
                .collect();
            ProbeSet {
                xs,
                loglik,
                complete: true,
                trend_may_hold: true,
                truncated: true,
                ordered: true,
            }
        }
        SignalModel::Finite(m) => {
            let xs = m.signals().to_vec();
            let loglik = xs
                .iter()
                .enumerate()
                .map(|(i, _)| (0..n_states).map(|w| m.log_mass_at(w, i)).collect())
                .collect();
            ProbeSet {
                xs,
                loglik,
                complete: true,
                trend_may_hold: false,
                truncated: false,
                ordered: false,
            }
        }
        SignalModel::Posteriors(m) => {
            let xs = m.signals();
            let loglik = (0..m.signal_count())
                .map(|i| (0..n_states).map(|w| m.log_mass_at(w, i)).collect())
                .collect();
            ProbeSet {
                xs,
                loglik,
                complete: true,
                trend_may_hold: true,
                truncated: true,
                ordered: false,
            }
        }
    }
}

struct LimitOutcome {
    min_log: f64,
    min_at: f64,
    max_log: f64,
    records: usize,
    tail_decreasing: bool,
    log: Vec<(f64, f64)>,
}

/// Evaluates a log-ratio target over the probes and summarizes the trend
/// toward zero. `skip` drops probes by label (used to step around atoms).
fn run_target<F: Fn(&[f64]) -> f64>(probes: &ProbeSet, target: F, skip: Option<f64>) -> LimitOutcome {
    let mut log = Vec::with_capacity(probes.xs.len());
    let mut min_log = f64::INFINITY;
    let mut max_log = f64::NEG_INFINITY;
    let mut min_at = f64::NAN;
    let mut records = 0usize;
    for (x, ll) in probes.xs.iter().zip(&probes.loglik) {
        if skip == Some(*x) {
            continue;
        }
        let v = target(ll);
        log.push((*x, v));
        if v < min_log {
            min_log = v;
            min_at = *x;
            records += 1;
        }
        max_log = max_log.max(v);
    }
    let tail_decreasing = {
        let k = 5.min(log.len());
        k >= 2 && log[log.len() - k..].windows(2).all(|w| w[1].1 < w[0].1)
    };
    LimitOutcome {
        min_log,
        min_at,
        max_log,
        records,
        tail_decreasing,
        log,
    }
}

/// Applies the numeric verdict rules to an outcome (no certificates).
fn numeric_verdict(out: &LimitOutcome, probes: &ProbeSet, plan: &ProbePlan) -> Verdict {
    let ln_eps = plan.eps_limit.ln();
    let ln_away = plan.bounded_away.ln();
    if !probes.trend_may_hold {
        // attained minima over a finite true domain: never a limit to zero
        return Verdict::Fails;
    }
    let trended = if probes.ordered {
        out.tail_decreasing && out.min_log < ln_eps
    } else {
        out.records >= plan.trend_window && out.min_log < ln_eps
    };
    if trended {
        Verdict::Holds
    } else if probes.complete && out.min_log > ln_away {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    }
}

fn outcome_json(out: &LimitOutcome, probes: &ProbeSet) -> Value {
    json!({
        "min_log_ratio": out.min_log,
        "at_probe": out.min_at,
        "max_log_ratio": out.max_log,
        "records": out.records,
        "domain": if probes.truncated { "truncated" } else { "exact" },
    })
}

fn verdict_rank(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 2,
        Verdict::Inconclusive => 1,
        Verdict::Fails => 0,
    }
}

/// Better of two directional outcomes for a limit-to-zero target.
fn best_of(
    a: (Verdict, LimitOutcome, ProbeSet),
    b: (Verdict, LimitOutcome, ProbeSet),
) -> (Verdict, LimitOutcome, ProbeSet) {
    if (verdict_rank(a.0), -a.1.min_log) >= (verdict_rank(b.0), -b.1.min_log) {
        a
    } else {
        b
    }
}

// ---------------------------------------------------------------------------
// analytic floors for the named location kinds
// ---------------------------------------------------------------------------

/// A certified positive lower bound on the likelihood ratio
/// f(s|ω′)/f(s|ω) over all signals, when the family admits one.
fn pairwise_ratio_floor(fam: &LocationFamily, w_cmp: usize, w_ref: usize) -> Option<(f64, Value)> {
    let d = (fam.space().state(w_cmp) - fam.space().state(w_ref)) as f64;
    match fam.kind() {
        LocationKind::Laplace { scale } => {
            let floor = (-d.abs() / scale).exp();
            Some((
                floor,
                json!({
                    "certificate": "laplace_constancy",
                    "floor": floor,
                    "note": "ratio is exactly exp(−|Δω|/b) beyond the states and never below it",
                }),
            ))
        }
        LocationKind::StudentT { .. } => {
            // ratio → 1 at both ends (closed form); the infimum is an
            // attained interior minimum, located numerically.
            let (lo, hi) = fam.grid_range(1e-12);
            let n = 8192;
            let step = (hi - lo) / (n as f64 - 1.0);
            let mut best = f64::INFINITY;
            for i in 0..n {
                let s = lo + step * i as f64;
                let r = fam.log_density(s, w_cmp) - fam.log_density(s, w_ref);
                best = best.min(r);
            }
            Some((
                best.exp(),
                json!({
                    "certificate": "student_t_ratio_limit_one",
                    "floor": best.exp(),
                    "note": "f(s|ω′)/f(s|ω) → 1 as s → ±∞; interior minimum located on a grid",
                }),
            ))
        }
        _ => None,
    }
}

/// Kind-level DUB disposition for location families.
fn location_dub_disposition(fam: &LocationFamily) -> (Verdict, Value) {
    match fam.kind() {
        LocationKind::Normal { .. } => (
            Verdict::Holds,
            json!({
                "certificate": "normal_tail_bound",
                "C": 1.0,
                "note": "for ω′<ω and every s>ω, f(s|ω′)/f(s|ω) < 1; witness sequences run above ω",
            }),
        ),
        LocationKind::Laplace { scale } => {
            let sp = fam.space();
            // verify the constancy certificate numerically to 1e-12
            let mut checks = Vec::new();
            let top = *sp.states().last().unwrap() as f64;
            for w in 0..sp.len() {
                for w2 in (w + 1)..sp.len() {
                    let expected =
                        ((sp.state(w) - sp.state(w2)) as f64 / scale).exp();
                    let mut max_dev = 0.0f64;
                    for k in 0..6 {
                        let s = top + 2f64.powi(k);
                        let got = (fam.log_density(s, w) - fam.log_density(s, w2)).exp();
                        max_dev = max_dev.max((got - expected).abs());
                    }
                    checks.push(json!({
                        "omega_low": sp.state(w),
                        "omega_high": sp.state(w2),
                        "expected_ratio": expected,
                        "max_abs_deviation": max_dev,
                    }));
                }
            }
            (
                Verdict::Fails,
                json!({
                    "certificate": "laplace_constancy",
                    "note": "f(s|ω′)/f(s|ω) = exp((ω′−ω)/b) for all s > max(ω,ω′)",
                    "constancy_checks": checks,
                }),
            )
        }
        LocationKind::StudentT { .. } => (
            Verdict::Fails,
            json!({
                "certificate": "student_t_ratio_limit_one",
                "note": "extreme signals are uninformative: f(s|ω′)/f(s|ω) → 1",
            }),
        ),
        LocationKind::Custom(_) => {
            let tails = tail_classify(fam);
            let verdict = match tails.class {
                TailClass::StrictlySubexponential { .. } => Verdict::Holds,
                TailClass::Exponential | TailClass::Thick { .. } => Verdict::Fails,
                TailClass::Unknown => Verdict::Inconclusive,
            };
            (
                verdict,
                json!({ "tail_class": tails.class, "tail_evidence": tails.evidence }),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// distinguishability (posterior likelihood ratio of a set against a state)
// ---------------------------------------------------------------------------

/// Probes r(s) = Σ_{ω′∈Ω′} μ(ω′) f(s|ω′) / (μ(ω) f(s|ω)) for a limit to
/// zero along the model's probe plan.
pub fn distinguishability(
    model: &SignalModel,
    omega_idx: usize,
    comparison: Comparison,
    mu: &Belief,
    plan: &ProbePlan,
) -> Result<CheckReport> {
    let n_states = model.space().len();
    if omega_idx >= n_states {
        return Err(Error::InvalidBelief(format!("state index {omega_idx} out of range")));
    }
    if mu.mass(omega_idx) <= 0.0 {
        return Err(Error::InvalidBelief(
            "benchmark state has zero prior mass".into(),
        ));
    }
    let cmp_all = comparison.resolve(omega_idx, n_states);
    if cmp_all.is_empty() {
        return Err(Error::InvalidBelief("comparison set is empty".into()));
    }
    let cmp: Vec<usize> = cmp_all.iter().copied().filter(|&i| mu.mass(i) > 0.0).collect();
    let base = json!({
        "omega": model.space().state(omega_idx),
        "comparison": comparison.label(),
    });
    if cmp.is_empty() {
        let mut w = base;
        w["note"] = json!("comparison set carries zero prior mass; ratio is identically zero");
        return Ok(CheckReport::new("distinguishability", Verdict::Holds, w));
    }

    let log_mu_cmp: Vec<f64> = cmp.iter().map(|&i| mu.mass(i).ln()).collect();
    let log_mu_ref = mu.mass(omega_idx).ln();
    let target = move |ll: &[f64]| -> f64 {
        let num = crate::numeric::log_sum_exp(
            &cmp.iter()
                .zip(&log_mu_cmp)
                .map(|(&i, lm)| lm + ll[i])
                .collect::<Vec<_>>(),
        );
        num - (log_mu_ref + ll[omega_idx])
    };

    // analytic floors settle the fails side for laplace / student-t
    if let SignalModel::Location(fam) = model {
        let mut floor_total = 0.0;
        let mut certs = Vec::new();
        let mut have_all = true;
        for &i in &comparison.resolve(omega_idx, n_states) {
            if mu.mass(i) <= 0.0 {
                continue;
            }
            match pairwise_ratio_floor(fam, i, omega_idx) {
                Some((floor, cert)) => {
                    floor_total += mu.mass(i) * floor / mu.mass(omega_idx);
                    certs.push(cert);
                }
                None => {
                    have_all = false;
                    break;
                }
            }
        }
        if have_all {
            let up = probe_set(model, plan, true, 0.0);
            let out = run_target(&up, &target, None);
            let mut w = base;
            w["certificate"] = json!({
                "type": "ratio_floor",
                "floor": floor_total,
                "per_pair": certs,
            });
            w["achieved"] = outcome_json(&out, &up);
            return Ok(CheckReport::new("distinguishability", Verdict::Fails, w).with_log(out.log));
        }
    }

    let up = probe_set(model, plan, true, 0.0);
    let out_up = run_target(&up, &target, None);
    let v_up = numeric_verdict(&out_up, &up, plan);
    let (verdict, out, probes) =
        if model.has_ordered_signals() && !matches!(model, SignalModel::Finite(_)) {
            let down = probe_set(model, plan, false, 0.0);
            let out_down = run_target(&down, &target, None);
            let v_down = numeric_verdict(&out_down, &down, plan);
            best_of((v_up, out_up, up), (v_down, out_down, down))
        } else {
            (v_up, out_up, up)
        };

    let mut w = base;
    w["achieved"] = outcome_json(&out, &probes);
    Ok(CheckReport::new("distinguishability", verdict, w).with_log(out.log))
}

// ---------------------------------------------------------------------------
// the unbounded-beliefs lattice
// ---------------------------------------------------------------------------

/// Directionally unbounded beliefs: for every state, witness sequences
/// drive the likelihood ratios of all lower (resp. upper) states to zero
/// with a uniform bound C along the sequence.
pub fn check_dub(model: &SignalModel, plan: &ProbePlan) -> Result<CheckReport> {
    check_directional(model, plan, false)
}

/// Universal DUB: one pair of witness sequences shared by every state.
pub fn check_universal_dub(model: &SignalModel, plan: &ProbePlan) -> Result<CheckReport> {
    check_directional(model, plan, true)
}

fn check_directional(model: &SignalModel, plan: &ProbePlan, universal: bool) -> Result<CheckReport> {
    let name = if universal { "universal_dub" } else { "dub" };
    let n_states = model.space().len();
    let states = model.space().states().to_vec();

    // location families: kind-level disposition decides the verdict;
    // probes below supply witnesses and the bound C.
    let disposition = match model {
        SignalModel::Location(fam) => Some(location_dub_disposition(fam)),
        _ => None,
    };

    let mut per_omega = Vec::new();
    let mut decisive_log: Vec<(f64, f64)> = Vec::new();
    let mut any_fail = false;
    let mut any_fail_logged = false;
    let mut any_inconclusive = false;
    let mut c_max = f64::NEG_INFINITY;

    if universal && n_states == 1 {
        return Ok(CheckReport::new(name, Verdict::Holds, json!({"note": "single state"})));
    }

    // targets per direction; `universal` shares one sequence across states
    let directions: [(&str, bool); 2] = [("lower", true), ("upper", false)];
    for (dir_name, up) in directions {
        let groups: Vec<(Option<usize>, Vec<(usize, usize)>)> = if universal {
            // one shared target: all (ω, ω′) pairs in this direction
            let mut pairs = Vec::new();
            for w in 0..n_states {
                let rng = if up { 0..w } else { w + 1..n_states };
                for w2 in rng {
                    pairs.push((w2, w));
                }
            }
            if pairs.is_empty() {
                continue;
            }
            vec![(None, pairs)]
        } else {
            (0..n_states)
                .filter_map(|w| {
                    let rng = if up { 0..w } else { w + 1..n_states };
                    let pairs: Vec<(usize, usize)> = rng.map(|w2| (w2, w)).collect();
                    if pairs.is_empty() {
                        None
                    } else {
                        Some((Some(w), pairs))
                    }
                })
                .collect()
        };

        for (w_opt, pairs) in groups {
            let anchor = match w_opt {
                Some(w) => states[w] as f64,
                None => {
                    if up {
                        *states.last().unwrap() as f64
                    } else {
                        states[0] as f64
                    }
                }
            };
            let probes = probe_set(model, plan, up, anchor);
            let pairs_for_target = pairs.clone();
            let target = move |ll: &[f64]| -> f64 {
                pairs_for_target
                    .iter()
                    .map(|&(cmp, re)| ll[cmp] - ll[re])
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            let out = run_target(&probes, &target, None);
            let verdict = match &disposition {
                Some((v, _)) => *v,
                None => numeric_verdict(&out, &probes, plan),
            };
            match verdict {
                Verdict::Fails => any_fail = true,
                Verdict::Inconclusive => any_inconclusive = true,
                Verdict::Holds => {}
            }
            c_max = c_max.max(out.max_log);
            let entry = json!({
                "omega": w_opt.map(|w| states[w]),
                "direction": dir_name,
                "verdict": verdict,
                "outcome": outcome_json(&out, &probes),
                "C_along_sequence": out.max_log.exp(),
                "witness_log": out.log.iter().map(|&(x, v)| json!([x, v])).collect::<Vec<_>>(),
            });
            per_omega.push(entry);
            // keep the first trace, upgrading to the first failing one
            if decisive_log.is_empty() || (verdict == Verdict::Fails && !any_fail_logged) {
                decisive_log = out.log;
            }
            if verdict == Verdict::Fails {
                any_fail_logged = true;
            }
        }
    }

    let verdict = match &disposition {
        Some((v, _)) => *v,
        None => {
            if any_fail {
                Verdict::Fails
            } else if any_inconclusive {
                Verdict::Inconclusive
            } else {
                Verdict::Holds
            }
        }
    };
    let mut witnesses = json!({
        "per_state": per_omega,
        "C_max": if c_max.is_finite() { json!(c_max.exp()) } else { json!(null) },
    });
    if let Some((_, cert)) = disposition {
        witnesses["kind_certificate"] = cert;
    }
    Ok(CheckReport::new(name, verdict, witnesses).with_log(decisive_log))
}

/// Pairwise unbounded beliefs: each ordered state pair has its own
/// ratio-to-zero sequence.
pub fn check_pairwise_ub(model: &SignalModel, plan: &ProbePlan) -> Result<CheckReport> {
    let n_states = model.space().len();
    let states = model.space().states().to_vec();
    let mut per_pair = Vec::new();
    let mut any_fail = false;
    let mut any_inconclusive = false;
    let mut decisive: Vec<(f64, f64)> = Vec::new();

    for w in 0..n_states {
        for w2 in 0..n_states {
            if w == w2 {
                continue;
            }
            // distinguish ω (= w) from ω′ (= w2): f(s|ω′)/f(s|ω) → 0
            let (verdict, outcome_j, log) = pair_limit(model, plan, w2, w)?;
            if verdict == Verdict::Fails {
                any_fail = true;
            }
            if verdict == Verdict::Inconclusive {
                any_inconclusive = true;
            }
            per_pair.push(json!({
                "omega": states[w],
                "omega_prime": states[w2],
                "verdict": verdict,
                "outcome": outcome_j,
            }));
            if decisive.is_empty() {
                decisive = log;
            }
        }
    }
    let verdict = if any_fail {
        Verdict::Fails
    } else if any_inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    };
    Ok(CheckReport::new(
        "pairwise_unbounded_beliefs",
        verdict,
        json!({ "per_pair": per_pair }),
    )
    .with_log(decisive))
}

/// Single-pair limit f(s|cmp)/f(s|ref) → 0.
fn pair_limit(
    model: &SignalModel,
    plan: &ProbePlan,
    cmp: usize,
    re: usize,
) -> Result<(Verdict, Value, Vec<(f64, f64)>)> {
    if let SignalModel::Location(fam) = model {
        if let Some((floor, cert)) = pairwise_ratio_floor(fam, cmp, re) {
            return Ok((
                Verdict::Fails,
                json!({ "certificate": cert, "floor": floor }),
                Vec::new(),
            ));
        }
    }
    let target = move |ll: &[f64]| ll[cmp] - ll[re];
    // step around the comparison state's own atom on the mixture backend
    let skip = match model {
        SignalModel::MixtureAtom(_) => Some(-(model.space().state(cmp) as f64)),
        _ => None,
    };
    let anchor = model.space().state(re) as f64;
    let up = probe_set(model, plan, true, anchor);
    let out_up = run_target(&up, &target, skip);
    let v_up = numeric_verdict(&out_up, &up, plan);
    if !model.has_ordered_signals() || matches!(model, SignalModel::Finite(_)) {
        let j = outcome_json(&out_up, &up);
        return Ok((v_up, j, out_up.log));
    }
    let down = probe_set(model, plan, false, anchor);
    let out_down = run_target(&down, &target, skip);
    let v_down = numeric_verdict(&out_down, &down, plan);
    let (v, out, pr) = best_of((v_up, out_up, up), (v_down, out_down, down));
    let j = outcome_json(&out, &pr);
    Ok((v, j, out.log))
}

/// Unbounded beliefs: each state distinguishable from its whole
/// complement along a single sequence.
pub fn check_unbounded_beliefs(model: &SignalModel, plan: &ProbePlan) -> Result<CheckReport> {
    let n_states = model.space().len();
    let states = model.space().states().to_vec();

    // MLRP with more than two states excludes unbounded beliefs: the
    // ratios against a lower and a higher state move oppositely in s.
    if n_states > 2 {
        if let Ok(mlrp) = check_mlrp(model) {
            if mlrp.verdict == Verdict::Holds {
                return Ok(CheckReport::new(
                    "unbounded_beliefs",
                    Verdict::Fails,
                    json!({
                        "certificate": "mlrp_excludes_unbounded_beliefs",
                        "witness_state": states[n_states / 2],
                        "note": "no sequence can send both a lower-state and a higher-state ratio to zero",
                    }),
                ));
            }
        }
    }

    let mut per_state = Vec::new();
    let mut any_fail = false;
    let mut any_inconclusive = false;
    let mut decisive: Vec<(f64, f64)> = Vec::new();

    for w in 0..n_states {
        // fails for this state if some pairwise limit fails definitively
        let mut state_fail_cert = None;
        if let SignalModel::Location(fam) = model {
            for w2 in 0..n_states {
                if w2 == w {
                    continue;
                }
                if let Some((floor, cert)) = pairwise_ratio_floor(fam, w2, w) {
                    state_fail_cert = Some(json!({
                        "pair_floor": floor,
                        "against": states[w2],
                        "certificate": cert,
                    }));
                    break;
                }
            }
        }
        if let Some(cert) = state_fail_cert {
            any_fail = true;
            per_state.push(json!({
                "omega": states[w],
                "verdict": Verdict::Fails,
                "outcome": cert,
            }));
            continue;
        }

        let pairs: Vec<usize> = (0..n_states).filter(|&i| i != w).collect();
        let pairs_t = pairs.clone();
        let target = move |ll: &[f64]| -> f64 {
            pairs_t
                .iter()
                .map(|&i| ll[i] - ll[w])
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let anchor = states[w] as f64;
        let up = probe_set(model, plan, true, anchor);
        let out_up = run_target(&up, &target, None);
        let v_up = numeric_verdict(&out_up, &up, plan);
        let (verdict, out, pr) =
            if model.has_ordered_signals() && !matches!(model, SignalModel::Finite(_)) {
                let down = probe_set(model, plan, false, anchor);
                let out_down = run_target(&down, &target, None);
                let v_down = numeric_verdict(&out_down, &down, plan);
                best_of((v_up, out_up, up), (v_down, out_down, down))
            } else {
                (v_up, out_up, up)
            };
        match verdict {
            Verdict::Fails => any_fail = true,
            Verdict::Inconclusive => any_inconclusive = true,
            Verdict::Holds => {}
        }
        per_state.push(json!({
            "omega": states[w],
            "verdict": verdict,
            "outcome": outcome_json(&out, &pr),
        }));
        if decisive.is_empty() {
            decisive = out.log;
        }
    }

    let verdict = if any_fail {
        Verdict::Fails
    } else if any_inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    };
    Ok(CheckReport::new(
        "unbounded_beliefs",
        verdict,
        json!({ "per_state": per_state }),
    )
    .with_log(decisive))
}

/// Prior-independent directional distinguishability, characterized by
/// DUB. The DUB witness sequences are re-verified under every prior in
/// the sample; adversarial priors concentrating geometrically on far
/// states are the interesting stress case.
pub fn check_pidd(model: &SignalModel, priors: &[Belief], plan: &ProbePlan) -> Result<CheckReport> {
    let dub = check_dub(model, plan)?;
    let n_states = model.space().len();
    let states = model.space().states().to_vec();

    let mut prior_evidence = Vec::new();
    for (pi, mu) in priors.iter().enumerate() {
        let mut worst_min = f64::NEG_INFINITY;
        let mut worst_max = f64::NEG_INFINITY;
        let mut worst_at = Value::Null;
        for w in 0..n_states {
            if mu.mass(w) <= 0.0 {
                continue;
            }
            for up in [true, false] {
                let cmp: Vec<usize> = if up { (0..w).collect() } else { (w + 1..n_states).collect() };
                let cmp: Vec<usize> = cmp.into_iter().filter(|&i| mu.mass(i) > 0.0).collect();
                if cmp.is_empty() {
                    continue;
                }
                let log_mu: Vec<f64> = cmp.iter().map(|&i| mu.mass(i).ln()).collect();
                let lref = mu.mass(w).ln();
                let target = |ll: &[f64]| -> f64 {
                    crate::numeric::log_sum_exp(
                        &cmp.iter().zip(&log_mu).map(|(&i, lm)| lm + ll[i]).collect::<Vec<_>>(),
                    ) - (lref + ll[w])
                };
                let probes = probe_set(model, plan, up, states[w] as f64);
                let out = run_target(&probes, &target, None);
                if out.min_log > worst_min {
                    worst_min = out.min_log;
                    worst_at = json!({ "omega": states[w], "direction": if up { "lower" } else { "upper" } });
                }
                worst_max = worst_max.max(out.max_log);
            }
        }
        prior_evidence.push(json!({
            "prior_index": pi,
            "worst_min_log_ratio": worst_min,
            "worst_max_log_ratio": worst_max,
            "worst_at": worst_at,
        }));
    }

    let witnesses = json!({
        "dub_verdict": dub.verdict,
        "equivalence": "DUB ⟺ PIDD",
        "dub_witnesses": dub.witnesses,
        "prior_checks": prior_evidence,
    });
    Ok(CheckReport::new("pidd", dub.verdict, witnesses).with_log(dub.probe_log))
}

/// Sample of priors for PIDD checks: uniform, a few random full-support
/// draws, and adversarial geometric priors loading far states.
pub fn default_prior_sample(
    space: &std::sync::Arc<crate::model::StateSpace>,
    master_seed: u64,
    n_random: usize,
) -> Vec<Belief> {
    use crate::numeric::unit_open;
    let mut out = vec![Belief::uniform(space)];
    let n = space.len();
    for dir in [1.0f64, -1.0] {
        let weights: Vec<f64> = space.states().iter().map(|&w| (dir * w as f64).exp()).collect();
        if let Ok(b) = Belief::from_weights(space, &weights) {
            out.push(b);
        }
    }
    let mut rng = crate::rng::stream_for(master_seed, 0x9d);
    for _ in 0..n_random {
        let weights: Vec<f64> = (0..n).map(|_| unit_open(&mut rng) + 1e-3).collect();
        if let Ok(b) = Belief::from_weights(space, &weights) {
            out.push(b);
        }
    }
    out
}
