//! Ordered state spaces, beliefs, utility tables, and the choice
//! correspondence — the vocabulary every other module consumes.
//!
//! Beliefs keep exact zeros: a state is either in the support or it is
//! not. Support restriction is structural, never approximated by epsilon
//! mass, so downstream support-preservation invariants are checkable with
//! `==` rather than tolerances.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default tie tolerance for the choice correspondence, relative to the
/// utility scale (max |u| over the table).
pub const TIE_TOL: f64 = 1e-12;

/// A strictly increasing finite window of integer states.
///
/// A window standing in for an infinite state set records the prior mass
/// that was truncated away; every verdict computed on such a space is
/// labeled truncated-domain by the reporting layers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSpace {
    states: Vec<i64>,
    truncated_mass: Option<f64>,
}

impl StateSpace {
    pub fn new(states: Vec<i64>) -> Result<Arc<Self>> {
        Self::build(states, None)
    }

    /// Window standing in for an infinite state set; `truncated_mass` is
    /// the prior mass outside the window, in [0, 1).
    pub fn truncated(states: Vec<i64>, truncated_mass: f64) -> Result<Arc<Self>> {
        if !(0.0..1.0).contains(&truncated_mass) {
            return Err(Error::InvalidStateSpace(format!(
                "truncated mass {truncated_mass} outside [0,1)"
            )));
        }
        Self::build(states, Some(truncated_mass))
    }

    /// Contiguous window `lo..=hi`.
    pub fn window(lo: i64, hi: i64) -> Result<Arc<Self>> {
        Self::new((lo..=hi).collect())
    }

    fn build(states: Vec<i64>, truncated_mass: Option<f64>) -> Result<Arc<Self>> {
        if states.is_empty() {
            return Err(Error::InvalidStateSpace("no states".into()));
        }
        if !states.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidStateSpace(
                "states must be strictly increasing".into(),
            ));
        }
        Ok(Arc::new(StateSpace {
            states,
            truncated_mass,
        }))
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty state lists
    }

    pub fn states(&self) -> &[i64] {
        &self.states
    }

    pub fn state(&self, idx: usize) -> i64 {
        self.states[idx]
    }

    pub fn index_of(&self, state: i64) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    /// max state − min state, floored at 1; the length unit for probe grids.
    pub fn spread(&self) -> f64 {
        ((self.states[self.states.len() - 1] - self.states[0]) as f64).max(1.0)
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated_mass.is_some()
    }

    pub fn truncated_mass(&self) -> Option<f64> {
        self.truncated_mass
    }
}

/// Checks that two space handles refer to the same space (pointer or value).
pub fn same_space(a: &Arc<StateSpace>, b: &Arc<StateSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A probability mass function over a [`StateSpace`], with exact-zero
/// support tracking. Masses sum to 1 within 1e-12.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Belief {
    #[serde(skip)]
    space: Arc<StateSpace>,
    mass: Vec<f64>,
}

impl Belief {
    /// Normalizes nonnegative weights into a belief. States with weight
    /// exactly zero stay at exactly zero mass.
    pub fn from_weights(space: &Arc<StateSpace>, weights: &[f64]) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::InvalidBelief(format!(
                "{} weights for {} states",
                weights.len(),
                space.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidBelief(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidBelief("all weights are zero".into()));
        }
        let mass = weights.iter().map(|w| w / total).collect();
        Ok(Belief {
            space: Arc::clone(space),
            mass,
        })
    }

    /// Point mass on the state at `idx`.
    pub fn degenerate(space: &Arc<StateSpace>, idx: usize) -> Self {
        let mut mass = vec![0.0; space.len()];
        mass[idx] = 1.0;
        Belief {
            space: Arc::clone(space),
            mass,
        }
    }

    pub fn uniform(space: &Arc<StateSpace>) -> Self {
        let mass = vec![1.0 / space.len() as f64; space.len()];
        Belief {
            space: Arc::clone(space),
            mass,
        }
    }

    /// Uniform over a subset of state indices.
    pub fn uniform_on(space: &Arc<StateSpace>, support: &[usize]) -> Result<Self> {
        let mut weights = vec![0.0; space.len()];
        for &i in support {
            if i >= space.len() {
                return Err(Error::InvalidBelief(format!("state index {i} out of range")));
            }
            weights[i] = 1.0;
        }
        Self::from_weights(space, &weights)
    }

    /// Internal constructor for already-normalized masses with exact zeros.
    pub(crate) fn from_normalized(space: &Arc<StateSpace>, mass: Vec<f64>) -> Self {
        debug_assert!((mass.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Belief {
            space: Arc::clone(space),
            mass,
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn mass(&self, idx: usize) -> f64 {
        self.mass[idx]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    /// Indices of states with strictly positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.mass.len()).filter(|&i| self.mass[i] > 0.0).collect()
    }

    pub fn support_size(&self) -> usize {
        self.mass.iter().filter(|&&m| m > 0.0).count()
    }

    /// Max absolute per-state mass difference.
    pub fn max_abs_diff(&self, other: &Belief) -> f64 {
        self.mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Cumulative mass up to and including each state index.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.mass
            .iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect()
    }
}

/// Bounded utility over a finite action set and a state window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityTable {
    #[serde(skip)]
    space: Arc<StateSpace>,
    actions: Vec<String>,
    /// Indexed `[action][state]`.
    table: Vec<Vec<f64>>,
    scale: f64,
}

impl UtilityTable {
    pub fn new(space: &Arc<StateSpace>, actions: Vec<String>, table: Vec<Vec<f64>>) -> Result<Self> {
        if actions.len() < 2 {
            return Err(Error::InvalidUtility("need at least two actions".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for a in &actions {
            if !seen.insert(a.clone()) {
                return Err(Error::InvalidUtility(format!("duplicate action label {a:?}")));
            }
        }
        if table.len() != actions.len() {
            return Err(Error::InvalidUtility(format!(
                "{} rows for {} actions",
                table.len(),
                actions.len()
            )));
        }
        let mut scale = 0.0_f64;
        for row in &table {
            if row.len() != space.len() {
                return Err(Error::InvalidUtility(format!(
                    "row has {} entries for {} states",
                    row.len(),
                    space.len()
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidUtility("utilities must be finite".into()));
                }
                scale = scale.max(v.abs());
            }
        }
        Ok(UtilityTable {
            space: Arc::clone(space),
            actions,
            table,
            scale: scale.max(1e-300),
        })
    }

    /// Quadratic loss u(a, ω) = −(a − ω)² with one action per state.
    pub fn quadratic_loss(space: &Arc<StateSpace>) -> Self {
        let actions: Vec<String> = space.states().iter().map(|s| s.to_string()).collect();
        let table = space
            .states()
            .iter()
            .map(|&a| {
                space
                    .states()
                    .iter()
                    .map(|&w| -(((a - w) * (a - w)) as f64))
                    .collect()
            })
            .collect();
        UtilityTable::new(space, actions, table).expect("quadratic loss is always valid")
    }

    /// Two actions with a prescribed utility difference: u(hi, ω) = d(ω),
    /// u(lo, ω) = 0. The `hi` action is listed first (index 0).
    pub fn from_difference(
        space: &Arc<StateSpace>,
        hi: &str,
        lo: &str,
        diff: &[f64],
    ) -> Result<Self> {
        UtilityTable::new(
            space,
            vec![hi.to_string(), lo.to_string()],
            vec![diff.to_vec(), vec![0.0; space.len()]],
        )
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn action_label(&self, idx: usize) -> &str {
        &self.actions[idx]
    }

    pub fn action_index(&self, label: &str) -> Result<usize> {
        self.actions
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::UnknownAction(label.to_string()))
    }

    pub fn value(&self, action: usize, state: usize) -> f64 {
        self.table[action][state]
    }

    /// max |u| over the table; the relative scale for tie tolerances.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// u(a, ω) − u(a′, ω) across states.
    pub fn difference(&self, a: usize, a_prime: usize) -> Vec<f64> {
        (0..self.space.len())
            .map(|w| self.table[a][w] - self.table[a_prime][w])
            .collect()
    }

    pub fn expected_utility(&self, action: usize, mu: &Belief) -> f64 {
        self.table[action]
            .iter()
            .zip(mu.masses())
            .map(|(u, m)| u * m)
            .sum()
    }
}

/// Outcome of an adequate-knowledge test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Adequacy {
    pub holds: bool,
    /// Any action optimal at every supported state, when one exists.
    pub witness: Option<usize>,
}

fn check_shared_space(u: &UtilityTable, mu: &Belief) -> Result<()> {
    if same_space(u.space(), mu.space()) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// The choice correspondence c(μ): all actions whose expected utility is
/// within `tie_tol` (relative to the utility scale) of the maximum.
/// Never empty; indices come back sorted ascending.
pub fn choice_set(u: &UtilityTable, mu: &Belief, tie_tol: f64) -> Result<Vec<usize>> {
    check_shared_space(u, mu)?;
    let eus: Vec<f64> = (0..u.action_count())
        .map(|a| u.expected_utility(a, mu))
        .collect();
    let best = eus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = tie_tol * u.scale();
    Ok((0..eus.len()).filter(|&a| eus[a] >= best - slack).collect())
}

/// Adequate knowledge at μ: some action optimal at every state in Supp μ.
pub fn adequate_knowledge(u: &UtilityTable, mu: &Belief, tie_tol: f64) -> Result<Adequacy> {
    check_shared_space(u, mu)?;
    let mut common: Option<Vec<usize>> = None;
    for idx in mu.support() {
        let cs = choice_set(u, &Belief::degenerate(mu.space(), idx), tie_tol)?;
        common = Some(match common {
            None => cs,
            Some(prev) => prev.into_iter().filter(|a| cs.contains(a)).collect(),
        });
        if common.as_ref().is_some_and(|c| c.is_empty()) {
            break;
        }
    }
    let common = common.unwrap_or_default();
    Ok(Adequacy {
        holds: !common.is_empty(),
        witness: common.first().copied(),
    })
}

/// E_μ[u(a, ω) − u(a′, ω)].
pub fn expected_difference(u: &UtilityTable, a: usize, a_prime: usize, mu: &Belief) -> Result<f64> {
    check_shared_space(u, mu)?;
    if a >= u.action_count() {
        return Err(Error::UnknownAction(format!("#{a}")));
    }
    if a_prime >= u.action_count() {
        return Err(Error::UnknownAction(format!("#{a_prime}")));
    }
    Ok((0..mu.space().len())
        .map(|w| mu.mass(w) * (u.value(a, w) - u.value(a_prime, w)))
        .sum())
}
