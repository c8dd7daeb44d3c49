//! Discrete location family on ℤ with a state-tracking atom:
//!   f(s|ω) = (1−λ)·g(s−ω) + λ·1{s = −ω},
//! where g(x) ∝ exp(−x²) is a probability mass function on the integers.
//!
//! Fixing any pair of states, large signals distinguish them cleanly
//! through the g-ratio; but the signal s carries an atom for state −s, so
//! a prior with enough weight far below can make large signals point away
//! from state 0 even while every pairwise ratio against 0 vanishes. The
//! state window is a truncation of ℤ; probes stay inside the window where
//! the atoms are active, which is where that tension is visible.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::StateSpace;
use crate::numeric::log_sum_exp;

/// Integer offsets beyond which exp(−x²) is below any relevant mass.
const BASE_RADIUS: i64 = 12;

#[derive(Debug, Clone)]
pub struct MixtureAtomFamily {
    space: Arc<StateSpace>,
    lambda: f64,
    /// log k with g(x) = k·exp(−x²) summing to 1 over ℤ.
    log_k: f64,
    /// Cumulative base masses on [−BASE_RADIUS, BASE_RADIUS] for sampling.
    base_cum: Vec<f64>,
}

impl MixtureAtomFamily {
    pub fn new(space: &Arc<StateSpace>, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidSignalModel(format!(
                "lambda {lambda} must lie in (0,1)"
            )));
        }
        let mut z = 1.0;
        for x in 1..=BASE_RADIUS {
            z += 2.0 * (-((x * x) as f64)).exp();
        }
        let log_k = -z.ln();
        let mut base_cum = Vec::with_capacity((2 * BASE_RADIUS + 1) as usize);
        let mut acc = 0.0;
        for x in -BASE_RADIUS..=BASE_RADIUS {
            acc += (-((x * x) as f64)).exp() / z;
            base_cum.push(acc);
        }
        Ok(MixtureAtomFamily {
            space: Arc::clone(space),
            lambda,
            log_k,
            base_cum,
        })
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// log g(x) of the base mass function.
    pub fn log_base(&self, x: i64) -> f64 {
        self.log_k - (x * x) as f64
    }

    pub fn log_mass(&self, s: i64, state_idx: usize) -> f64 {
        let w = self.space.state(state_idx);
        let base = (1.0 - self.lambda).ln() + self.log_base(s - w);
        if s == -w {
            log_sum_exp(&[base, self.lambda.ln()])
        } else {
            base
        }
    }

    /// Integer check for a real-typed signal.
    pub fn signal_to_int(&self, s: f64) -> Result<i64> {
        if s.fract() == 0.0 && s.abs() < 9e15 {
            Ok(s as i64)
        } else {
            Err(Error::OutOfDomainSignal(s))
        }
    }

    pub fn sample(&self, state_idx: usize, u_atom: f64, u_base: f64) -> i64 {
        let w = self.space.state(state_idx);
        if u_atom < self.lambda {
            return -w;
        }
        let pos = self.base_cum.partition_point(|&c| c < u_base);
        w + (pos as i64 - BASE_RADIUS).clamp(-BASE_RADIUS, BASE_RADIUS)
    }

    /// Signals probed by the condition checkers: integers of growing
    /// magnitude out to the window edge, where the atoms live.
    pub fn probe_signals(&self, toward_high: bool) -> Vec<f64> {
        let extent = self
            .space
            .states()
            .iter()
            .map(|w| w.abs())
            .max()
            .unwrap()
            .max(8);
        (1..=extent)
            .map(|k| if toward_high { k as f64 } else { -(k as f64) })
            .collect()
    }
}
