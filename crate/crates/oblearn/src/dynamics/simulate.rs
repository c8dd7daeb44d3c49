//! Trajectory simulation of the sequential game.
//!
//! Per step: build the partition at the current public belief, draw the
//! agent's private signal, play the lowest-index optimal action, update
//! the public belief from the observed action. A run stops early once
//! the public belief has moved less than 1e-12 for 50 consecutive steps
//! and the belief tests stationary; from that point the path is constant
//! forever, so nothing is lost by stopping.

use std::io::Write;

use serde::Serialize;

use crate::conditions::{ProbePlan, Verdict};
use crate::error::Result;
use crate::model::{Belief, UtilityTable};
use crate::numeric::unit_open;
use crate::rng::stream_for;
use crate::signal::SignalModel;

use super::partition::{strategy_partition_with_grid, SIM_PARTITION_GRID};
use super::belief_after_action;

/// Belief movement below this, sustained for [`QUIET_STEPS`], arms the
/// early-stop stationarity test.
pub const QUIET_EPS: f64 = 1e-12;
pub const QUIET_STEPS: usize = 50;

/// Minimum closing run of identical actions that counts as a herd when
/// no cascade is detected.
pub const HERD_MIN_RUN: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    HorizonReached,
    /// Quiet belief + stationarity test passed; the path is constant
    /// from here on.
    CascadeAbsorbed,
}

/// How the cascade marker was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StationarityBasis {
    ExactFinite,
    GridTolerance,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryStep {
    pub signal: f64,
    pub action: usize,
    pub belief_after: Belief,
}

/// One simulated run.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    /// Index of the realized state in the model's state space.
    pub true_state: usize,
    pub seed: u64,
    pub steps: Vec<TrajectoryStep>,
    /// First step from which agents' actions were independent of their
    /// signals (single-action partition) through the end of the run.
    pub cascade_at: Option<usize>,
    /// First step of the herd; equals `cascade_at` when a cascade is the
    /// herd's cause, otherwise the start of a closing constant-action
    /// run of at least [`HERD_MIN_RUN`] steps.
    pub herd_at: Option<usize>,
    pub final_belief: Belief,
    pub stop: StopReason,
    pub cascade_basis: Option<StationarityBasis>,
}

impl Trajectory {
    /// Action index at 1-based step `n`, extending a cascaded run past
    /// its early stop.
    pub fn action_at_step(&self, n: usize) -> Option<usize> {
        if self.steps.is_empty() || n == 0 {
            return None;
        }
        if n <= self.steps.len() {
            Some(self.steps[n - 1].action)
        } else if self.stop == StopReason::CascadeAbsorbed {
            Some(self.steps.last().unwrap().action)
        } else {
            None
        }
    }

    /// CSV emission: `n,signal,action,belief_<state>...` with floats at
    /// 17 significant digits.
    pub fn write_csv<W: Write>(
        &self,
        mut w: W,
        action_labels: &[String],
        states: &[i64],
    ) -> std::io::Result<()> {
        write!(w, "n,signal,action")?;
        for s in states {
            write!(w, ",belief_{s}")?;
        }
        writeln!(w)?;
        for (i, step) in self.steps.iter().enumerate() {
            write!(w, "{},{:.16e},{}", i + 1, step.signal, action_labels[step.action])?;
            for m in step.belief_after.masses() {
                write!(w, ",{m:.16e}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Simulates one run, drawing the true state from the prior.
pub fn simulate_run(
    u: &UtilityTable,
    model: &SignalModel,
    prior: &Belief,
    horizon: usize,
    seed: u64,
) -> Result<Trajectory> {
    let mut rng = stream_for(seed, 0);
    let draw = unit_open(&mut rng);
    let mut acc = 0.0;
    let mut true_state = prior.support()[0];
    for w in prior.support() {
        acc += prior.mass(w);
        if draw < acc {
            true_state = w;
            break;
        }
        true_state = w;
    }
    run_core(u, model, prior, true_state, horizon, seed, rng)
}

/// Simulates one run in a forced true state (for conditional Monte
/// Carlo). The signal stream is aligned with [`simulate_run`]: the
/// state-drawing variate is consumed either way.
pub fn simulate_run_in_state(
    u: &UtilityTable,
    model: &SignalModel,
    prior: &Belief,
    true_state: usize,
    horizon: usize,
    seed: u64,
) -> Result<Trajectory> {
    let mut rng = stream_for(seed, 0);
    let _ = unit_open(&mut rng);
    run_core(u, model, prior, true_state, horizon, seed, rng)
}

fn run_core(
    u: &UtilityTable,
    model: &SignalModel,
    prior: &Belief,
    true_state: usize,
    horizon: usize,
    seed: u64,
    mut rng: crate::rng::RngStream,
) -> Result<Trajectory> {
    let plan = ProbePlan::default();
    let mut mu = prior.clone();
    let mut steps: Vec<TrajectoryStep> = Vec::new();
    let mut single_action_flags: Vec<bool> = Vec::new();
    let mut quiet = 0usize;
    let mut stop = StopReason::HorizonReached;
    let mut cascade_basis = None;

    for _n in 1..=horizon {
        let partition = strategy_partition_with_grid(u, &mu, model, SIM_PARTITION_GRID)?;
        single_action_flags.push(partition.single_action().is_some());
        let signal = model.sample_signal(true_state, &mut rng);
        let action = partition.action_at(model, signal)?;
        let next = belief_after_action(&mu, &partition, action, model)?;
        let movement = next.max_abs_diff(&mu);
        mu = next;
        steps.push(TrajectoryStep { signal, action, belief_after: mu.clone() });

        if movement < QUIET_EPS {
            quiet += 1;
            if quiet >= QUIET_STEPS {
                let stat = super::detect_stationary(u, &mu, model, &plan)?;
                if stat.verdict == Verdict::Holds {
                    stop = StopReason::CascadeAbsorbed;
                    cascade_basis = Some(match model {
                        SignalModel::Finite(_) | SignalModel::Posteriors(_) => {
                            StationarityBasis::ExactFinite
                        }
                        _ => StationarityBasis::GridTolerance,
                    });
                    break;
                }
                quiet = 0; // quiet but not stationary: keep simulating
            }
        } else {
            quiet = 0;
        }
    }

    // cascade marker: last run of single-action partitions reaching the end
    let cascade_at = {
        let mut start = None;
        for (i, &flag) in single_action_flags.iter().enumerate() {
            if flag {
                if start.is_none() {
                    start = Some(i + 1);
                }
            } else {
                start = None;
            }
        }
        start
    };
    // herd marker: the cascade when present, else a long closing run
    let herd_at = match cascade_at {
        Some(c) => Some(c),
        None => {
            let actions: Vec<usize> = steps.iter().map(|s| s.action).collect();
            closing_run_start(&actions)
                .filter(|&h| actions.len() + 1 - h >= HERD_MIN_RUN.min(actions.len()))
        }
    };

    Ok(Trajectory {
        true_state,
        seed,
        cascade_at,
        herd_at,
        final_belief: steps
            .last()
            .map(|s| s.belief_after.clone())
            .unwrap_or_else(|| prior.clone()),
        steps,
        stop,
        cascade_basis,
    })
}

/// 1-based start of the final constant-action run.
pub(crate) fn closing_run_start(actions: &[usize]) -> Option<usize> {
    let last = *actions.last()?;
    let mut start = actions.len();
    for i in (0..actions.len()).rev() {
        if actions[i] == last {
            start = i + 1;
        } else {
            break;
        }
    }
    Some(start)
}
