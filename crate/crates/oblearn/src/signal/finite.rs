//! Full-support finite signal matrices.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::StateSpace;

/// A finite signal structure: strictly increasing real signal labels and
/// per-state mass functions f(s|ω) > 0 that each sum to 1 within 1e-12.
#[derive(Debug, Clone)]
pub struct FiniteMatrix {
    space: Arc<StateSpace>,
    signals: Vec<f64>,
    /// Indexed `[state][signal]`.
    mass: Vec<Vec<f64>>,
    log_mass: Vec<Vec<f64>>,
}

impl FiniteMatrix {
    /// `rows_by_signal[s][ω]` — row-major by signal, matching the JSON
    /// descriptor layout.
    pub fn new(
        space: &Arc<StateSpace>,
        signals: Vec<f64>,
        rows_by_signal: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if signals.is_empty() {
            return Err(Error::InvalidSignalModel("no signals".into()));
        }
        if !signals.iter().all(|s| s.is_finite()) {
            return Err(Error::InvalidSignalModel("signal labels must be finite".into()));
        }
        if !signals.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSignalModel(
                "signal labels must be strictly increasing".into(),
            ));
        }
        if rows_by_signal.len() != signals.len() {
            return Err(Error::InvalidSignalModel(format!(
                "{} matrix rows for {} signals",
                rows_by_signal.len(),
                signals.len()
            )));
        }
        let n_states = space.len();
        for row in &rows_by_signal {
            if row.len() != n_states {
                return Err(Error::InvalidSignalModel(format!(
                    "matrix row has {} entries for {} states",
                    row.len(),
                    n_states
                )));
            }
        }
        let mut mass = vec![vec![0.0; signals.len()]; n_states];
        for (si, row) in rows_by_signal.iter().enumerate() {
            for (wi, &v) in row.iter().enumerate() {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::InvalidSignalModel(format!(
                        "f(s_{si}|ω_{wi}) = {v}; full support requires every entry > 0"
                    )));
                }
                mass[wi][si] = v;
            }
        }
        for (wi, col) in mass.iter().enumerate() {
            let total: f64 = col.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidSignalModel(format!(
                    "state ω_{wi} signal masses sum to {total}, not 1"
                )));
            }
        }
        let log_mass = mass
            .iter()
            .map(|col| col.iter().map(|v| v.ln()).collect())
            .collect();
        Ok(FiniteMatrix {
            space: Arc::clone(space),
            signals,
            mass,
            log_mass,
        })
    }

    /// Uninformative structure: every state emits each signal equally.
    pub fn uniform(space: &Arc<StateSpace>, n_signals: usize) -> Result<Self> {
        let signals = (0..n_signals).map(|i| i as f64).collect();
        let rows = vec![vec![1.0 / n_signals as f64; space.len()]; n_signals];
        Self::new(space, signals, rows)
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn signals(&self) -> &[f64] {
        &self.signals
    }

    pub fn signal_count(&self) -> usize {
        self.signals.len()
    }

    pub fn signal_index(&self, s: f64) -> Result<usize> {
        self.signals
            .iter()
            .position(|&x| x == s)
            .ok_or(Error::OutOfDomainSignal(s))
    }

    pub fn mass_at(&self, state_idx: usize, signal_idx: usize) -> f64 {
        self.mass[state_idx][signal_idx]
    }

    pub fn log_mass_at(&self, state_idx: usize, signal_idx: usize) -> f64 {
        self.log_mass[state_idx][signal_idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_matrix_has_flat_log_likelihood() {
        let sp = StateSpace::new(vec![1, 2]).unwrap();
        let m = FiniteMatrix::uniform(&sp, 4).unwrap();
        for w in 0..2 {
            for s in 0..4 {
                assert!((m.log_mass_at(w, s) - (0.25f64).ln()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn construction_rejects_bad_matrices() {
        let sp = StateSpace::new(vec![1, 2]).unwrap();
        // a zero entry breaks full support
        assert!(FiniteMatrix::new(
            &sp,
            vec![0.0, 1.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]]
        )
        .is_err());
        // column sums 0.9
        assert!(FiniteMatrix::new(
            &sp,
            vec![0.0, 1.0],
            vec![vec![0.5, 0.4], vec![0.4, 0.5]]
        )
        .is_err());
        // unsorted labels
        assert!(FiniteMatrix::new(
            &sp,
            vec![1.0, 0.0],
            vec![vec![0.5, 0.5], vec![0.5, 0.5]]
        )
        .is_err());
    }
}
