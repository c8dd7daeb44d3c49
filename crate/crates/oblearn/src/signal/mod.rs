//! The signal-model backends and the operations every one of them
//! exposes: log-likelihood evaluation, Bayes updating in the log domain,
//! sampling from explicit per-run streams, and per-action signal-set
//! probabilities.

mod finite;
mod location;
mod mixture;
mod posterior;

pub use finite::FiniteMatrix;
pub use location::{CustomDensity, LocationFamily, LocationKind, TailClass, TailWeights};
pub use mixture::MixtureAtomFamily;
pub use posterior::{from_posteriors, PosteriorSequence};

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{same_space, Belief, StateSpace};
use crate::numeric::{log_sum_exp, unit_open};
use crate::rng::RngStream;

/// One of the signal-structure backends.
///
/// All backends guarantee full support: no signal excludes any state, so
/// Bayes updates are always well-posed and never change a belief's
/// support.
#[derive(Debug, Clone)]
pub enum SignalModel {
    Finite(FiniteMatrix),
    Posteriors(PosteriorSequence),
    Location(LocationFamily),
    MixtureAtom(MixtureAtomFamily),
}

/// The signals an action owns inside a strategy partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SignalSet {
    /// Indices into a discrete backend's signal list.
    Indices(Vec<usize>),
    /// Disjoint real intervals `[lo, hi)`; `±inf` endpoints allowed.
    Intervals(Vec<(f64, f64)>),
}

impl SignalModel {
    pub fn space(&self) -> &Arc<StateSpace> {
        match self {
            SignalModel::Finite(m) => m.space(),
            SignalModel::Posteriors(m) => m.space(),
            SignalModel::Location(m) => m.space(),
            SignalModel::MixtureAtom(m) => m.space(),
        }
    }

    pub fn kind_name(&self) -> String {
        match self {
            SignalModel::Finite(_) => "finite".into(),
            SignalModel::Posteriors(_) => "posterior_sequence".into(),
            SignalModel::Location(f) => format!("location/{}", f.kind().name()),
            SignalModel::MixtureAtom(_) => "mixture_atom".into(),
        }
    }

    /// Whether the signal domain carries a meaningful total order.
    pub fn has_ordered_signals(&self) -> bool {
        !matches!(self, SignalModel::Posteriors(_))
    }

    /// Signal labels for backends with finitely many signals.
    pub fn discrete_signals(&self) -> Option<Vec<f64>> {
        match self {
            SignalModel::Finite(m) => Some(m.signals().to_vec()),
            SignalModel::Posteriors(m) => Some(m.signals()),
            _ => None,
        }
    }

    /// log f(s|ω). Finite for every in-domain signal (full support).
    pub fn log_likelihood(&self, s: f64, state_idx: usize) -> Result<f64> {
        if state_idx >= self.space().len() {
            return Err(Error::InvalidBelief(format!("state index {state_idx} out of range")));
        }
        match self {
            SignalModel::Finite(m) => Ok(m.log_mass_at(state_idx, m.signal_index(s)?)),
            SignalModel::Posteriors(m) => Ok(m.log_mass_at(state_idx, m.signal_index(s)?)),
            SignalModel::Location(m) => Ok(m.log_density(s, state_idx)),
            SignalModel::MixtureAtom(m) => Ok(m.log_mass(m.signal_to_int(s)?, state_idx)),
        }
    }

    /// Posterior μ_s(ω) ∝ μ(ω)·f(s|ω), normalized through log-sum-exp.
    /// The support is preserved exactly: zero mass in, zero mass out.
    pub fn bayes_update(&self, mu: &Belief, s: f64) -> Result<Belief> {
        if !same_space(mu.space(), self.space()) {
            return Err(Error::SpaceMismatch);
        }
        let support = mu.support();
        let mut log_post: Vec<f64> = Vec::with_capacity(support.len());
        for &w in &support {
            log_post.push(mu.mass(w).ln() + self.log_likelihood(s, w)?);
        }
        let z = log_sum_exp(&log_post);
        let mut mass = vec![0.0; mu.space().len()];
        for (&w, lp) in support.iter().zip(&log_post) {
            mass[w] = (lp - z).exp();
        }
        // tidy the normalization drift without disturbing exact zeros
        let total: f64 = mass.iter().sum();
        for m in &mut mass {
            *m /= total;
        }
        Ok(Belief::from_normalized(mu.space(), mass))
    }

    /// One draw from f(·|ω), deterministic given the stream state.
    pub fn sample_signal(&self, state_idx: usize, rng: &mut RngStream) -> f64 {
        match self {
            SignalModel::Finite(m) => {
                let u = unit_open(rng);
                let mut acc = 0.0;
                let last = m.signal_count() - 1;
                for idx in 0..m.signal_count() {
                    acc += m.mass_at(state_idx, idx);
                    if u < acc || idx == last {
                        return m.signals()[idx];
                    }
                }
                unreachable!()
            }
            SignalModel::Posteriors(m) => {
                let u = unit_open(rng);
                let mut acc = 0.0;
                let last = m.signal_count() - 1;
                for idx in 0..m.signal_count() {
                    acc += m.mass_at(state_idx, idx);
                    if u < acc || idx == last {
                        return (idx + 1) as f64;
                    }
                }
                unreachable!()
            }
            SignalModel::Location(m) => {
                let u = unit_open(rng);
                m.space().state(state_idx) as f64 + m.quantile_std(u)
            }
            SignalModel::MixtureAtom(m) => {
                let u_atom = unit_open(rng);
                let u_base = unit_open(rng);
                m.sample(state_idx, u_atom, u_base) as f64
            }
        }
    }

    /// Pr(a|ω) for each action given a partition of the signal domain
    /// into per-action signal sets. Discrete backends sum masses;
    /// location families integrate CDF differences.
    pub fn action_probability(&self, partition: &[SignalSet], state_idx: usize) -> Result<Vec<f64>> {
        self.validate_partition(partition)?;
        match self {
            SignalModel::Finite(_) | SignalModel::Posteriors(_) => {
                let mass = |idx: usize| match self {
                    SignalModel::Finite(m) => m.mass_at(state_idx, idx),
                    SignalModel::Posteriors(m) => m.mass_at(state_idx, idx),
                    _ => unreachable!(),
                };
                partition
                    .iter()
                    .map(|set| match set {
                        SignalSet::Indices(ix) => Ok(ix.iter().map(|&i| mass(i)).sum()),
                        SignalSet::Intervals(_) => Err(Error::BadPartition(
                            "interval sets on a discrete backend".into(),
                        )),
                    })
                    .collect()
            }
            SignalModel::Location(m) => partition
                .iter()
                .map(|set| match set {
                    SignalSet::Intervals(cells) => Ok(cells
                        .iter()
                        .map(|&(lo, hi)| {
                            let chi = if hi == f64::INFINITY { 1.0 } else { m.cdf(hi, state_idx) };
                            let clo = if lo == f64::NEG_INFINITY {
                                0.0
                            } else {
                                m.cdf(lo, state_idx)
                            };
                            (chi - clo).max(0.0)
                        })
                        .sum()),
                    SignalSet::Indices(_) => Err(Error::BadPartition(
                        "index sets on a continuous backend".into(),
                    )),
                })
                .collect(),
            SignalModel::MixtureAtom(_) => Err(Error::Unsupported(
                "action probabilities are not wired for the atom-mixture family".into(),
            )),
        }
    }

    fn validate_partition(&self, partition: &[SignalSet]) -> Result<()> {
        if partition.is_empty() {
            return Err(Error::BadPartition("no signal sets".into()));
        }
        match self {
            SignalModel::Finite(_) | SignalModel::Posteriors(_) => {
                let n = match self {
                    SignalModel::Finite(m) => m.signal_count(),
                    SignalModel::Posteriors(m) => m.signal_count(),
                    _ => unreachable!(),
                };
                let mut seen = vec![false; n];
                for set in partition {
                    if let SignalSet::Indices(ix) = set {
                        for &i in ix {
                            if i >= n {
                                return Err(Error::BadPartition(format!("signal index {i} out of range")));
                            }
                            if seen[i] {
                                return Err(Error::BadPartition(format!("signal index {i} assigned twice")));
                            }
                            seen[i] = true;
                        }
                    }
                }
                if seen.iter().any(|&s| !s) {
                    return Err(Error::BadPartition("partition does not cover every signal".into()));
                }
                Ok(())
            }
            SignalModel::Location(_) => {
                let mut cells: Vec<(f64, f64)> = Vec::new();
                for set in partition {
                    if let SignalSet::Intervals(iv) = set {
                        cells.extend(iv.iter().copied());
                    }
                }
                if cells.is_empty() {
                    return Err(Error::BadPartition("no intervals".into()));
                }
                cells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                let tol = 1e-9;
                if cells[0].0 != f64::NEG_INFINITY {
                    return Err(Error::BadPartition("does not reach -inf".into()));
                }
                for w in cells.windows(2) {
                    if (w[0].1 - w[1].0).abs() > tol {
                        return Err(Error::BadPartition(format!(
                            "gap or overlap between {:?} and {:?}",
                            w[0], w[1]
                        )));
                    }
                }
                if cells.last().unwrap().1 != f64::INFINITY {
                    return Err(Error::BadPartition("does not reach +inf".into()));
                }
                Ok(())
            }
            SignalModel::MixtureAtom(_) => Ok(()),
        }
    }
}
