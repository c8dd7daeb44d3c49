//! The sequential game: canonical pure-strategy partitions, public-belief
//! transitions, stationarity detection, and trajectory simulation.
//!
//! The canonical equilibrium plays the lowest-index optimal action at
//! every signal, so ties never randomize and every run is reproducible
//! from its seed.

mod partition;
mod simulate;
mod stationary;

pub use partition::{cells_are_monotone, strategy_partition};
pub use simulate::{
    simulate_run, simulate_run_in_state, StationarityBasis, StopReason, Trajectory,
    TrajectoryStep, HERD_MIN_RUN, QUIET_EPS, QUIET_STEPS,
};
pub use stationary::{detect_stationary, stationary_scan, ScanHit, ScanOutcome};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{same_space, Belief};
use crate::signal::{LocationFamily, SignalModel, SignalSet, TailWeights};

/// A signal resolved by the deterministic tie-break.
#[derive(Debug, Clone, Serialize)]
pub struct TieRecord {
    pub signal: f64,
    pub tied: Vec<usize>,
}

/// One interval cell of a location-family partition; `[lo, hi)`.
#[derive(Debug, Clone, Serialize)]
pub struct IntervalCell {
    pub lo: f64,
    pub hi: f64,
    pub action: usize,
}

#[derive(Debug, Clone, Serialize)]
pub enum PartitionCells {
    /// Action per signal index, for the discrete backends.
    Discrete { action_of_signal: Vec<usize> },
    /// Sorted interval cells covering the real line, endpoints refined
    /// to 1e-10.
    Intervals { cells: Vec<IntervalCell> },
}

/// The canonical pure strategy at a public belief: which action each
/// signal leads to.
#[derive(Debug, Clone, Serialize)]
pub struct StrategyPartition {
    pub public_belief: Belief,
    pub cells: PartitionCells,
    pub tie_records: Vec<TieRecord>,
}

impl StrategyPartition {
    /// The action played after observing `s`.
    pub fn action_at(&self, model: &SignalModel, s: f64) -> Result<usize> {
        match &self.cells {
            PartitionCells::Discrete { action_of_signal } => {
                let idx = match model {
                    SignalModel::Finite(m) => m.signal_index(s)?,
                    SignalModel::Posteriors(m) => m.signal_index(s)?,
                    _ => return Err(Error::Unsupported("discrete cells on a continuous backend".into())),
                };
                Ok(action_of_signal[idx])
            }
            PartitionCells::Intervals { cells } => {
                let pos = cells.partition_point(|c| c.hi <= s);
                Ok(cells[pos.min(cells.len() - 1)].action)
            }
        }
    }

    /// Some(action) when every signal leads to the same action.
    pub fn single_action(&self) -> Option<usize> {
        match &self.cells {
            PartitionCells::Discrete { action_of_signal } => {
                let first = *action_of_signal.first()?;
                action_of_signal.iter().all(|&a| a == first).then_some(first)
            }
            PartitionCells::Intervals { cells } => {
                let first = cells.first()?.action;
                cells.iter().all(|c| c.action == first).then_some(first)
            }
        }
    }

    /// Per-action signal sets in action-index order, for
    /// [`SignalModel::action_probability`].
    pub fn signal_sets(&self, n_actions: usize) -> Vec<SignalSet> {
        match &self.cells {
            PartitionCells::Discrete { action_of_signal } => {
                let mut sets = vec![Vec::new(); n_actions];
                for (idx, &a) in action_of_signal.iter().enumerate() {
                    sets[a].push(idx);
                }
                sets.into_iter().map(SignalSet::Indices).collect()
            }
            PartitionCells::Intervals { cells } => {
                let mut sets = vec![Vec::new(); n_actions];
                for c in cells {
                    sets[c.action].push((c.lo, c.hi));
                }
                sets.into_iter().map(SignalSet::Intervals).collect()
            }
        }
    }

    /// Number of interior thresholds (interval backends).
    pub fn threshold_count(&self) -> usize {
        match &self.cells {
            PartitionCells::Discrete { .. } => 0,
            PartitionCells::Intervals { cells } => cells.len().saturating_sub(1),
        }
    }
}

/// Pr(a|ω) for one action of a partition, per state index.
fn action_prob_per_state(
    partition: &StrategyPartition,
    action: usize,
    model: &SignalModel,
    state_idx: usize,
) -> f64 {
    match (&partition.cells, model) {
        (PartitionCells::Discrete { action_of_signal }, SignalModel::Finite(m)) => action_of_signal
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a == action)
            .map(|(s, _)| m.mass_at(state_idx, s))
            .sum(),
        (PartitionCells::Discrete { action_of_signal }, SignalModel::Posteriors(m)) => {
            action_of_signal
                .iter()
                .enumerate()
                .filter(|&(_, &a)| a == action)
                .map(|(s, _)| m.mass_at(state_idx, s))
                .sum()
        }
        (PartitionCells::Intervals { cells }, SignalModel::Location(fam)) => {
            let mut total = 0.0;
            let mut covered = false;
            for c in cells.iter().filter(|c| c.action == action) {
                covered = true;
                total += interval_mass(fam, c.lo, c.hi, state_idx);
            }
            // full-support families give nonempty intervals positive mass;
            // guard the double underflow so supports never collapse
            if covered && total <= 0.0 {
                total = 1e-300;
            }
            total
        }
        _ => 0.0,
    }
}

/// Mass of `[lo, hi)` under f(·|ω), evaluated from whichever tail keeps
/// precision.
pub(crate) fn interval_mass(fam: &LocationFamily, lo: f64, hi: f64, state_idx: usize) -> f64 {
    let w = fam.space().state(state_idx) as f64;
    let (x1, x2) = (lo - w, hi - w);
    let m = if x1 >= 0.0 {
        // right tail: survival-function differences
        let sf_hi = if x2 == f64::INFINITY { 0.0 } else { sf_precise(fam, x2) };
        let sf_lo = sf_precise(fam, x1);
        sf_lo - sf_hi
    } else {
        let c1 = if x1 == f64::NEG_INFINITY { 0.0 } else { fam.cdf_std(x1) };
        let c2 = if x2 == f64::INFINITY { 1.0 } else { fam.cdf_std(x2) };
        c2 - c1
    };
    m.max(0.0)
}

fn sf_precise(fam: &LocationFamily, x: f64) -> f64 {
    use crate::signal::LocationKind;
    match fam.kind() {
        LocationKind::Normal { sigma } => 0.5 * libm::erfc(x / (sigma * std::f64::consts::SQRT_2)),
        LocationKind::Laplace { scale } => {
            if x < 0.0 {
                1.0 - 0.5 * (x / scale).exp()
            } else {
                0.5 * (-x / scale).exp()
            }
        }
        // symmetric density: survival(x) = cdf(−x)
        LocationKind::StudentT { .. } => fam.cdf_std(-x),
        LocationKind::Custom(_) => 1.0 - fam.cdf_std(x),
    }
}

/// Public-belief transition after observing action `a`:
/// μ′(ω) ∝ μ(ω)·Pr(a|ω, partition). Support is preserved.
///
/// An action with zero probability under the partition is off-path and
/// returns [`Error::OffPathAction`]; the game convention for off-path
/// observations is "belief unchanged", and simulated runs only ever emit
/// on-path actions, so no caller in this crate hits it.
pub fn belief_after_action(
    mu: &Belief,
    partition: &StrategyPartition,
    action: usize,
    model: &SignalModel,
) -> Result<Belief> {
    if !same_space(mu.space(), model.space()) {
        return Err(Error::SpaceMismatch);
    }
    let mut mass = vec![0.0; mu.space().len()];
    let mut total = 0.0;
    for w in mu.support() {
        let p = action_prob_per_state(partition, action, model, w);
        mass[w] = mu.mass(w) * p;
        total += mass[w];
    }
    if total <= 0.0 {
        return Err(Error::OffPathAction(format!("#{action}")));
    }
    for m in &mut mass {
        *m /= total;
    }
    Ok(Belief::from_normalized(mu.space(), mass))
}

/// Max-norm deviation of the one-step belief martingale:
/// max_ω |Σ_a Pr(a|μ)·belief_after_action(μ, a)(ω) − μ(ω)|.
///
/// Actions absent from the partition have zero probability and
/// contribute nothing, so the sum runs over the actions the partition
/// mentions.
pub fn martingale_residual(
    mu: &Belief,
    partition: &StrategyPartition,
    model: &SignalModel,
) -> Result<f64> {
    let n = mu.space().len();
    let mut mixed = vec![0.0; n];
    for a in partition_actions(partition) {
        let mut weight = 0.0;
        let mut contrib = vec![0.0; n];
        for w in mu.support() {
            let p = action_prob_per_state(partition, a, model, w);
            contrib[w] = mu.mass(w) * p;
            weight += contrib[w];
        }
        if weight <= 0.0 {
            continue; // off-path action carries no martingale weight
        }
        for w in 0..n {
            mixed[w] += contrib[w];
        }
    }
    Ok((0..n)
        .map(|w| (mixed[w] - mu.mass(w)).abs())
        .fold(0.0, f64::max))
}

fn partition_actions(partition: &StrategyPartition) -> Vec<usize> {
    let mut actions: Vec<usize> = match &partition.cells {
        PartitionCells::Discrete { action_of_signal } => action_of_signal.clone(),
        PartitionCells::Intervals { cells } => cells.iter().map(|c| c.action).collect(),
    };
    actions.sort_unstable();
    actions.dedup();
    actions
}

/// Strict first-order stochastic dominance of μ_{s′} over μ_s.
///
/// Returns true iff the cumulative mass of μ_s exceeds that of μ_{s′} at
/// every state below the top by more than rounding noise (1e-13).
/// Equivalent signals produce the same posterior up to rounding and
/// return false: the strictness requirement is waived by failing it.
pub fn fosd_check(model: &SignalModel, mu: &Belief, s: f64, s_prime: f64) -> Result<bool> {
    let post_lo = model.bayes_update(mu, s)?;
    let post_hi = model.bayes_update(mu, s_prime)?;
    let cum_lo = post_lo.cumulative();
    let cum_hi = post_hi.cumulative();
    let n = cum_lo.len();
    Ok((0..n - 1).all(|w| cum_lo[w] - cum_hi[w] > 1e-13))
}

/// Limiting posterior of μ as the signal runs off toward ±∞, restricted
/// to μ's support.
pub(crate) fn tail_belief(fam: &LocationFamily, mu: &Belief, toward_high: bool) -> Belief {
    let support = mu.support();
    match fam.tail_log_weights(toward_high) {
        TailWeights::Degenerate(_) => {
            let idx = if toward_high {
                *support.last().unwrap()
            } else {
                support[0]
            };
            Belief::degenerate(mu.space(), idx)
        }
        TailWeights::Finite(logw) => {
            let lw: Vec<f64> = support.iter().map(|&w| mu.mass(w).ln() + logw[w]).collect();
            let z = crate::numeric::log_sum_exp(&lw);
            let mut mass = vec![0.0; mu.space().len()];
            for (&w, l) in support.iter().zip(&lw) {
                mass[w] = (l - z).exp();
            }
            let total: f64 = mass.iter().sum();
            for m in &mut mass {
                *m /= total;
            }
            Belief::from_normalized(mu.space(), mass)
        }
    }
}
