//! Seed-parallel Monte Carlo over simulated runs, with Wilson 95%
//! intervals per horizon checkpoint.
//!
//! One master seed reproduces an entire sweep: run i uses the stream
//! derived from (master, i), runs execute in parallel, and results are
//! assembled in run order, so the output is independent of scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{simulate_run, simulate_run_in_state, Trajectory, HERD_MIN_RUN};
use crate::error::Result;
use crate::model::{choice_set, Belief, UtilityTable, TIE_TOL};
use crate::numeric::{derive_seed, wilson_interval};
use crate::signal::SignalModel;

#[derive(Debug, Clone, Serialize)]
pub struct McRow {
    pub horizon: usize,
    pub n_runs: usize,
    pub correct_action_freq: f64,
    pub correct_ci: (f64, f64),
    pub wrong_herd_freq: f64,
    pub wrong_herd_ci: (f64, f64),
}

pub struct MonteCarloSpec<'a> {
    pub u: &'a UtilityTable,
    pub model: &'a SignalModel,
    pub prior: &'a Belief,
    /// Condition every run on this true state instead of drawing it.
    pub forced_state: Option<usize>,
    pub horizons: Vec<usize>,
    pub n_runs: usize,
    pub master_seed: u64,
}

/// Per-run, per-horizon bookkeeping extracted before the trajectory is
/// dropped.
struct RunSummary {
    correct: Vec<bool>,
    wrong_herd: Vec<bool>,
}

pub fn monte_carlo(spec: &MonteCarloSpec) -> Result<Vec<McRow>> {
    assert!(spec.n_runs >= 1, "need at least one run");
    let max_h = *spec.horizons.iter().max().expect("need at least one horizon");

    let summaries: Vec<Result<RunSummary>> = (0..spec.n_runs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(spec.master_seed, i);
            let t = match spec.forced_state {
                Some(w) => simulate_run_in_state(spec.u, spec.model, spec.prior, w, max_h, seed)?,
                None => simulate_run(spec.u, spec.model, spec.prior, max_h, seed)?,
            };
            summarize(&t, spec)
        })
        .collect();

    let mut correct = vec![0u64; spec.horizons.len()];
    let mut wrong = vec![0u64; spec.horizons.len()];
    for s in summaries {
        let s = s?;
        for (h, (&c, &w)) in s.correct.iter().zip(&s.wrong_herd).enumerate() {
            if c {
                correct[h] += 1;
            }
            if w {
                wrong[h] += 1;
            }
        }
    }

    Ok(spec
        .horizons
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            let n = spec.n_runs as u64;
            McRow {
                horizon: h,
                n_runs: spec.n_runs,
                correct_action_freq: correct[i] as f64 / n as f64,
                correct_ci: wilson_interval(correct[i], n),
                wrong_herd_freq: wrong[i] as f64 / n as f64,
                wrong_herd_ci: wilson_interval(wrong[i], n),
            }
        })
        .collect())
}

fn summarize(t: &Trajectory, spec: &MonteCarloSpec) -> Result<RunSummary> {
    let optimal = choice_set(
        spec.u,
        &Belief::degenerate(spec.model.space(), t.true_state),
        TIE_TOL,
    )?;
    let mut correct = Vec::with_capacity(spec.horizons.len());
    let mut wrong_herd = Vec::with_capacity(spec.horizons.len());
    for &h in &spec.horizons {
        let action_h = t.action_at_step(h);
        correct.push(action_h.is_some_and(|a| optimal.contains(&a)));
        wrong_herd.push(is_wrong_herd_at(t, h, &optimal));
    }
    Ok(RunSummary { correct, wrong_herd })
}

/// A herd sustained to horizon `h` on an action that is not optimal in
/// the realized state. The closing constant-action run must span at
/// least `HERD_MIN_RUN` steps (or the whole truncated run).
fn is_wrong_herd_at(t: &Trajectory, h: usize, optimal: &[usize]) -> bool {
    let recorded = t.steps.len();
    if recorded == 0 || h == 0 {
        return false;
    }
    let upto = h.min(recorded);
    let last = t.steps[upto - 1].action;
    // extension past an early stop keeps the same action by construction
    let extension = h.saturating_sub(recorded);
    let mut run = extension;
    for i in (0..upto).rev() {
        if t.steps[i].action == last {
            run += 1;
        } else {
            break;
        }
    }
    run >= HERD_MIN_RUN.min(h) && !optimal.contains(&last)
}
