//! Signal structures declared by the posteriors they induce.
//!
//! A Bayes-plausible weighted set of posteriors pins down a signal
//! structure for its prior: signal i occurs with total probability q_i
//! and moves the prior to ν_i, so f(s_i|ω) = q_i ν_i(ω) / prior(ω).
//! A residual signal, defined by the exact balance equation, absorbs the
//! remaining mass so the system averages back to the prior by
//! construction rather than by tolerance.
//!
//! Signal labels are the integers 1..=n+1 with the residual last. The
//! label order carries no meaning; condition checkers on this backend
//! work with subsequence limits, never with a signal order.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{same_space, Belief, StateSpace};

#[derive(Debug, Clone)]
pub struct PosteriorSequence {
    prior: Belief,
    entries: Vec<(f64, Belief)>,
    residual_q: f64,
    residual: Belief,
    /// Induced likelihoods, `[state][signal]`, residual signal last.
    mass: Vec<Vec<f64>>,
    log_mass: Vec<Vec<f64>>,
}

/// Builds the induced signal structure from `(q_i, ν_i)` entries.
///
/// Requires Σ q_i ≤ 1 − 1e-9 and full support throughout, so the residual
/// posterior keeps full support; a nonpositive residual coordinate means
/// the declared posteriors are not Bayes-plausible for this prior.
pub fn from_posteriors(prior: &Belief, entries: &[(f64, Belief)]) -> Result<PosteriorSequence> {
    let space = prior.space();
    let n_states = space.len();
    if prior.support_size() != n_states {
        return Err(Error::NotBayesPlausible("prior must have full support".into()));
    }
    let mut q_total = 0.0;
    for (i, (q, nu)) in entries.iter().enumerate() {
        if !(q > &0.0) || !q.is_finite() {
            return Err(Error::NotBayesPlausible(format!("weight q_{i} = {q} must be > 0")));
        }
        if !same_space(nu.space(), space) {
            return Err(Error::SpaceMismatch);
        }
        if nu.support_size() != n_states {
            return Err(Error::NotBayesPlausible(format!(
                "posterior ν_{i} must have full support"
            )));
        }
        q_total += q;
    }
    if q_total > 1.0 - 1e-9 {
        return Err(Error::NotBayesPlausible(format!(
            "entry weights sum to {q_total}; must stay ≤ 1 − 1e-9 so the residual keeps mass"
        )));
    }
    let residual_q = 1.0 - q_total;

    // Balance equation: residual_q · ν_res(ω) = prior(ω) − Σ q_i ν_i(ω).
    let mut residual_mass = Vec::with_capacity(n_states);
    for w in 0..n_states {
        let consumed: f64 = entries.iter().map(|(q, nu)| q * nu.mass(w)).sum();
        let left = prior.mass(w) - consumed;
        if !(left > 0.0) {
            return Err(Error::NotBayesPlausible(format!(
                "residual posterior coordinate for state index {w} is {left} ≤ 0"
            )));
        }
        residual_mass.push(left);
    }
    let residual = Belief::from_weights(space, &residual_mass)?;

    let n_signals = entries.len() + 1;
    let mut mass = vec![vec![0.0; n_signals]; n_states];
    for w in 0..n_states {
        for (i, (q, nu)) in entries.iter().enumerate() {
            mass[w][i] = q * nu.mass(w) / prior.mass(w);
        }
        // same numerator as the balance equation, so rows sum to 1 exactly
        mass[w][n_signals - 1] = residual_mass[w] / prior.mass(w);
    }
    let log_mass = mass
        .iter()
        .map(|row| row.iter().map(|v| v.ln()).collect())
        .collect();

    Ok(PosteriorSequence {
        prior: prior.clone(),
        entries: entries.to_vec(),
        residual_q,
        residual,
        mass,
        log_mass,
    })
}

impl PosteriorSequence {
    pub fn space(&self) -> &Arc<StateSpace> {
        self.prior.space()
    }

    pub fn prior(&self) -> &Belief {
        &self.prior
    }

    pub fn entries(&self) -> &[(f64, Belief)] {
        &self.entries
    }

    pub fn residual(&self) -> (f64, &Belief) {
        (self.residual_q, &self.residual)
    }

    /// Including the residual signal.
    pub fn signal_count(&self) -> usize {
        self.entries.len() + 1
    }

    /// Signal labels 1..=n+1.
    pub fn signals(&self) -> Vec<f64> {
        (1..=self.signal_count()).map(|i| i as f64).collect()
    }

    pub fn signal_index(&self, s: f64) -> Result<usize> {
        if s.fract() == 0.0 && s >= 1.0 && s <= self.signal_count() as f64 {
            Ok(s as usize - 1)
        } else {
            Err(Error::OutOfDomainSignal(s))
        }
    }

    /// Marginal probability of signal index i under the prior.
    pub fn signal_weight(&self, idx: usize) -> f64 {
        if idx < self.entries.len() {
            self.entries[idx].0
        } else {
            self.residual_q
        }
    }

    /// The posterior this signal induces from the model's prior.
    pub fn posterior(&self, idx: usize) -> &Belief {
        if idx < self.entries.len() {
            &self.entries[idx].1
        } else {
            &self.residual
        }
    }

    pub fn mass_at(&self, state_idx: usize, signal_idx: usize) -> f64 {
        self.mass[state_idx][signal_idx]
    }

    pub fn log_mass_at(&self, state_idx: usize, signal_idx: usize) -> f64 {
        self.log_mass[state_idx][signal_idx]
    }
}
