//! Building the canonical strategy partition at a public belief.
//!
//! Discrete backends take a per-signal argmax with the lowest-index
//! tie-break. Location families bracket the sign changes of every
//! pairwise expected difference on a grid between the 1e-9 quantiles of
//! the extreme states, refine each boundary by bisection to 1e-10, and
//! assign the regions beyond the grid from the limiting tail posterior.
//! The stand-alone operation brackets on 2048 points; the simulation
//! loop runs the same algorithm on 128 (the bisection refinement makes
//! the boundaries identical to 1e-10 whenever both grids bracket the
//! same sign changes).

use crate::error::{Error, Result};
use crate::model::{choice_set, same_space, Belief, UtilityTable, TIE_TOL};
use crate::numeric::bisect;
use crate::signal::{LocationFamily, SignalModel};

use super::{tail_belief, IntervalCell, PartitionCells, StrategyPartition, TieRecord};

pub(crate) const PARTITION_GRID: usize = 2048;
pub(crate) const SIM_PARTITION_GRID: usize = 128;
const MAX_THRESHOLDS: usize = 64;
const BOUNDARY_TOL: f64 = 1e-10;

pub fn strategy_partition(
    u: &UtilityTable,
    mu: &Belief,
    model: &SignalModel,
) -> Result<StrategyPartition> {
    strategy_partition_with_grid(u, mu, model, PARTITION_GRID)
}

pub(crate) fn strategy_partition_with_grid(
    u: &UtilityTable,
    mu: &Belief,
    model: &SignalModel,
    grid: usize,
) -> Result<StrategyPartition> {
    if !same_space(u.space(), mu.space()) || !same_space(mu.space(), model.space()) {
        return Err(Error::SpaceMismatch);
    }
    match model {
        SignalModel::Finite(_) | SignalModel::Posteriors(_) => discrete_partition(u, mu, model),
        SignalModel::Location(fam) => location_partition(u, mu, fam, grid),
        SignalModel::MixtureAtom(_) => Err(Error::Unsupported(
            "strategy partitions are not wired for the atom-mixture family".into(),
        )),
    }
}

fn discrete_partition(
    u: &UtilityTable,
    mu: &Belief,
    model: &SignalModel,
) -> Result<StrategyPartition> {
    let signals = model.discrete_signals().expect("discrete backend");
    let mut action_of_signal = Vec::with_capacity(signals.len());
    let mut tie_records = Vec::new();
    for &s in &signals {
        let post = model.bayes_update(mu, s)?;
        let cs = choice_set(u, &post, TIE_TOL)?;
        if cs.len() > 1 {
            tie_records.push(TieRecord { signal: s, tied: cs.clone() });
        }
        action_of_signal.push(cs[0]);
    }
    Ok(StrategyPartition {
        public_belief: mu.clone(),
        cells: PartitionCells::Discrete { action_of_signal },
        tie_records,
    })
}

/// Expected-utility evaluation at posteriors along the signal line,
/// over μ's support, with reusable scratch buffers.
///
/// Works with unnormalized posterior weights: the argmax and the sign of
/// pairwise differences are invariant to the positive normalizer, and
/// the tie slack is rescaled by the weight total so tie-breaking matches
/// the normalized computation.
pub(crate) struct PosteriorEu<'a> {
    fam: &'a LocationFamily,
    n_actions: usize,
    support_states: Vec<f64>,
    log_mu: Vec<f64>,
    /// `u_flat[a * k + j]` = u(a, support[j]).
    u_flat: Vec<f64>,
    slack: f64,
    // scratch
    lp: Vec<f64>,
    w: Vec<f64>,
    eus: Vec<f64>,
}

impl<'a> PosteriorEu<'a> {
    pub(crate) fn new(u: &'a UtilityTable, mu: &'a Belief, fam: &'a LocationFamily) -> Self {
        let support = mu.support();
        let k = support.len();
        let n_actions = u.action_count();
        let mut u_flat = Vec::with_capacity(n_actions * k);
        for a in 0..n_actions {
            for &j in &support {
                u_flat.push(u.value(a, j));
            }
        }
        PosteriorEu {
            fam,
            n_actions,
            support_states: support.iter().map(|&j| mu.space().state(j) as f64).collect(),
            log_mu: support.iter().map(|&j| mu.mass(j).ln()).collect(),
            u_flat,
            slack: TIE_TOL * u.scale(),
            lp: vec![0.0; k],
            w: vec![0.0; k],
            eus: vec![0.0; n_actions],
        }
    }

    /// Fills the scratch EUs (unnormalized) and returns the weight total.
    fn eval(&mut self, s: f64) -> f64 {
        let k = self.support_states.len();
        let mut max_lp = f64::NEG_INFINITY;
        for j in 0..k {
            let lp = self.log_mu[j] + self.fam.log_std(s - self.support_states[j]);
            self.lp[j] = lp;
            if lp > max_lp {
                max_lp = lp;
            }
        }
        let mut total = 0.0;
        for j in 0..k {
            let w = (self.lp[j] - max_lp).exp();
            self.w[j] = w;
            total += w;
        }
        for a in 0..self.n_actions {
            let row = &self.u_flat[a * k..(a + 1) * k];
            let mut acc = 0.0;
            for j in 0..k {
                acc += row[j] * self.w[j];
            }
            self.eus[a] = acc;
        }
        total
    }

    pub(crate) fn winner(&mut self, s: f64) -> usize {
        let total = self.eval(s);
        let best = self.eus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let slack = self.slack * total;
        self.eus.iter().position(|&e| e >= best - slack).unwrap()
    }

    /// Sign-stable EU(a) − EU(b) at the posterior after s (unnormalized).
    fn pair_diff(&mut self, s: f64, a: usize, b: usize) -> f64 {
        self.eval(s);
        self.eus[a] - self.eus[b]
    }

    fn winner_at_belief(&self, u: &UtilityTable, belief: &Belief) -> usize {
        let eus: Vec<f64> = (0..self.n_actions)
            .map(|a| u.expected_utility(a, belief))
            .collect();
        let best = eus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        eus.iter().position(|&e| e >= best - self.slack).unwrap()
    }
}

fn location_partition(
    u: &UtilityTable,
    mu: &Belief,
    fam: &LocationFamily,
    grid: usize,
) -> Result<StrategyPartition> {
    let mut eu = PosteriorEu::new(u, mu, fam);
    let (lo, hi) = fam.grid_range(1e-9);
    let step = (hi - lo) / (grid as f64 - 1.0);

    let mut grid_winner = Vec::with_capacity(grid);
    for i in 0..grid {
        grid_winner.push(eu.winner(lo + step * i as f64));
    }
    let tail_low = eu.winner_at_belief(u, &tail_belief(fam, mu, false));
    let tail_high = eu.winner_at_belief(u, &tail_belief(fam, mu, true));

    // boundaries inside the grid
    let mut boundaries: Vec<(f64, usize, usize)> = Vec::new(); // (s, left, right)
    for i in 0..grid - 1 {
        let (a, b) = (grid_winner[i], grid_winner[i + 1]);
        if a != b {
            let x0 = lo + step * i as f64;
            let x1 = x0 + step;
            boundaries.push((refine_boundary(&mut eu, x0, x1, a, b), a, b));
        }
    }
    // boundaries between the grid edges and the tail regimes
    if tail_low != grid_winner[0] {
        if let Some(s) = bracket_outward(&mut eu, lo, fam, false, tail_low, grid_winner[0]) {
            boundaries.insert(0, (s, tail_low, grid_winner[0]));
        }
    }
    if tail_high != grid_winner[grid - 1] {
        let a = grid_winner[grid - 1];
        if let Some(s) = bracket_outward(&mut eu, hi, fam, true, a, tail_high) {
            boundaries.push((s, a, tail_high));
        }
    }
    boundaries.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

    if boundaries.len() > MAX_THRESHOLDS {
        return Err(Error::PathologicalPartition(boundaries.len()));
    }

    // assemble cells, merging consecutive equal actions
    let mut cells: Vec<IntervalCell> = Vec::new();
    let mut tie_records = Vec::new();
    let mut current_lo = f64::NEG_INFINITY;
    let mut current_action = if boundaries.is_empty() { grid_winner[0] } else { boundaries[0].1 };
    for &(s, _, right) in &boundaries {
        if right == current_action {
            continue;
        }
        cells.push(IntervalCell { lo: current_lo, hi: s, action: current_action });
        tie_records.push(TieRecord {
            signal: s,
            tied: vec![current_action.min(right), current_action.max(right)],
        });
        current_lo = s;
        current_action = right;
    }
    cells.push(IntervalCell { lo: current_lo, hi: f64::INFINITY, action: current_action });

    Ok(StrategyPartition {
        public_belief: mu.clone(),
        cells: PartitionCells::Intervals { cells },
        tie_records,
    })
}

/// Bisection on the pairwise expected difference between the winners on
/// each side of a grid sign change.
fn refine_boundary(eu: &mut PosteriorEu, x0: f64, x1: f64, left: usize, right: usize) -> f64 {
    let (p0, p1) = (eu.pair_diff(x0, left, right), eu.pair_diff(x1, left, right));
    if p0 > 0.0 && p1 < 0.0 {
        bisect(|s| eu.pair_diff(s, left, right), x0, x1, BOUNDARY_TOL)
    } else if p0 < 0.0 && p1 > 0.0 {
        bisect(|s| -eu.pair_diff(s, left, right), x0, x1, BOUNDARY_TOL)
    } else {
        // tie-break switch without a strict sign change
        0.5 * (x0 + x1)
    }
}

/// Walks outward from a grid edge until the tail action takes over, then
/// refines the switch point. Returns None when the tail action never
/// materializes within the probe budget, in which case the grid's edge
/// action keeps the tail.
fn bracket_outward(
    eu: &mut PosteriorEu,
    edge: f64,
    fam: &LocationFamily,
    upward: bool,
    near: usize,
    far: usize,
) -> Option<f64> {
    let spread = fam.space().spread();
    let sign = if upward { 1.0 } else { -1.0 };
    let mut prev = edge;
    for k in 0..=40 {
        let x = edge + sign * spread * 2f64.powi(k);
        if eu.winner(x) == far {
            let (a, b) = if upward { (prev, x) } else { (x, prev) };
            let (l, r) = if upward { (near, far) } else { (far, near) };
            return Some(refine_boundary(eu, a, b, l, r));
        }
        prev = x;
    }
    None
}

/// Under MLRP and single-crossing preferences the cells come out ordered:
/// higher actions own higher signals. Exposed for tests and diagnostics.
pub fn cells_are_monotone(partition: &StrategyPartition) -> bool {
    match &partition.cells {
        PartitionCells::Intervals { cells } => cells.windows(2).all(|w| w[0].action <= w[1].action),
        PartitionCells::Discrete { action_of_signal } => {
            action_of_signal.windows(2).all(|w| w[0] <= w[1])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StateSpace;
    use crate::signal::FiniteMatrix;
    use std::sync::Arc;

    fn sp3() -> Arc<StateSpace> {
        StateSpace::new(vec![1, 2, 3]).unwrap()
    }

    #[test]
    fn quadratic_loss_normal_uniform_gives_three_ordered_intervals() {
        let sp = sp3();
        let u = UtilityTable::quadratic_loss(&sp);
        let model = SignalModel::Location(LocationFamily::normal(&sp, 1.0).unwrap());
        let part = strategy_partition(&u, &Belief::uniform(&sp), &model).unwrap();
        // quadratic loss picks the action closest to the posterior mean,
        // so the thresholds sit where that mean crosses 1.5 and 2.5
        let post_mean = |s: f64| {
            let lw: Vec<f64> = [1.0f64, 2.0, 3.0]
                .iter()
                .map(|w| s * w - w * w / 2.0)
                .collect();
            let z = crate::numeric::log_sum_exp(&lw);
            [1.0f64, 2.0, 3.0]
                .iter()
                .zip(&lw)
                .map(|(w, l)| w * (l - z).exp())
                .sum::<f64>()
        };
        match &part.cells {
            PartitionCells::Intervals { cells } => {
                assert_eq!(cells.len(), 3);
                assert_eq!(cells[0].action, 0);
                assert_eq!(cells[1].action, 1);
                assert_eq!(cells[2].action, 2);
                assert!((post_mean(cells[0].hi) - 1.5).abs() < 1e-7, "lo threshold {}", cells[0].hi);
                assert!((post_mean(cells[1].hi) - 2.5).abs() < 1e-7, "hi threshold {}", cells[1].hi);
                // symmetric problem: thresholds mirror around s = 2
                assert!((cells[0].hi + cells[1].hi - 4.0).abs() < 1e-7);
            }
            _ => panic!("expected intervals"),
        }
        assert!(cells_are_monotone(&part));
        assert_eq!(part.single_action(), None);
    }

    #[test]
    fn coarse_and_fine_grids_agree_on_the_boundaries() {
        let sp = sp3();
        let u = UtilityTable::quadratic_loss(&sp);
        let model = SignalModel::Location(LocationFamily::normal(&sp, 1.0).unwrap());
        for weights in [[1.0, 1.0, 1.0], [0.6, 0.3, 0.1], [0.05, 0.15, 0.8]] {
            let mu = Belief::from_weights(&sp, &weights).unwrap();
            let fine = strategy_partition_with_grid(&u, &mu, &model, PARTITION_GRID).unwrap();
            let coarse = strategy_partition_with_grid(&u, &mu, &model, SIM_PARTITION_GRID).unwrap();
            match (&fine.cells, &coarse.cells) {
                (PartitionCells::Intervals { cells: f }, PartitionCells::Intervals { cells: c }) => {
                    assert_eq!(f.len(), c.len());
                    for (a, b) in f.iter().zip(c) {
                        assert_eq!(a.action, b.action);
                        if a.hi.is_finite() {
                            assert!((a.hi - b.hi).abs() < 1e-9, "{} vs {}", a.hi, b.hi);
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn dominant_action_owns_the_whole_line() {
        let sp = sp3();
        let u = UtilityTable::from_difference(&sp, "top", "bottom", &[1.0, 1.0, 1.0]).unwrap();
        let model = SignalModel::Location(LocationFamily::normal(&sp, 1.0).unwrap());
        let part = strategy_partition(&u, &Belief::uniform(&sp), &model).unwrap();
        assert_eq!(part.single_action(), Some(0));
        assert_eq!(part.threshold_count(), 0);
    }

    #[test]
    fn discrete_partition_uses_lowest_index_tie_break() {
        let sp = StateSpace::new(vec![1, 2]).unwrap();
        let m = FiniteMatrix::uniform(&sp, 3).unwrap();
        // both actions identical: every signal ties, lowest index wins
        let u = UtilityTable::new(
            &sp,
            vec!["a".into(), "b".into()],
            vec![vec![1.0, 0.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let part = strategy_partition(&u, &Belief::uniform(&sp), &SignalModel::Finite(m)).unwrap();
        match &part.cells {
            PartitionCells::Discrete { action_of_signal } => {
                assert_eq!(action_of_signal, &vec![0, 0, 0]);
            }
            _ => unreachable!(),
        }
        assert_eq!(part.tie_records.len(), 3);
        assert_eq!(part.single_action(), Some(0));
    }

    #[test]
    fn action_lookup_matches_cells() {
        let sp = sp3();
        let u = UtilityTable::quadratic_loss(&sp);
        let model = SignalModel::Location(LocationFamily::normal(&sp, 1.0).unwrap());
        let part = strategy_partition(&u, &Belief::uniform(&sp), &model).unwrap();
        assert_eq!(part.action_at(&model, -3.0).unwrap(), 0);
        assert_eq!(part.action_at(&model, 2.0).unwrap(), 1);
        assert_eq!(part.action_at(&model, 7.5).unwrap(), 2);
    }
}
