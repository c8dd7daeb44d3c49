//! Primitive bundles for the gallery scenarios. The stationary priors
//! and indifference margins are computed from their defining
//! inequalities at setup time, not hard-coded, and the computed values
//! travel with the bundle for the report.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::Result;
use crate::model::{Belief, StateSpace, UtilityTable};
use crate::signal::{LocationFamily, MixtureAtomFamily, SignalModel};

pub struct Primitives {
    pub space: Arc<StateSpace>,
    pub u: UtilityTable,
    pub model: SignalModel,
    pub prior: Belief,
    /// Setup-time computed quantities, for the scenario report.
    pub computed: Value,
}

/// Quadratic loss + unit normal on Ω = {1,2,3}: the sufficiency
/// benchmark where every stationary belief has adequate knowledge.
pub fn thm1_sufficiency() -> Result<Primitives> {
    let space = StateSpace::new(vec![1, 2, 3])?;
    let u = UtilityTable::quadratic_loss(&space);
    let model = SignalModel::Location(LocationFamily::normal(&space, 1.0)?);
    let prior = Belief::uniform(&space);
    Ok(Primitives {
        space,
        u,
        model,
        prior,
        computed: json!({}),
    })
}

/// Laplace signals with a two-action choice set where the inferior
/// action wins every state below the top one.
///
/// Under Laplace information the posterior likelihood ratio of the lower
/// set against the top state ω* is bounded below by its value on
/// s ≥ ω*, where it is exactly Σ μ(ω)e^(ω−ω*)/μ(ω*). Any indifference
/// margin ε below that floor makes the prior stationary while adequate
/// knowledge fails at ω*.
pub fn thm1_3_laplace() -> Result<Primitives> {
    let space = StateSpace::new(vec![0, 1, 2])?;
    let scale = 1.0;
    let prior = Belief::from_weights(&space, &[0.375, 0.375, 0.25])?;
    let top = space.len() - 1;

    let ratio_floor: f64 = (0..top)
        .map(|w| {
            prior.mass(w) * (((space.state(w) - space.state(top)) as f64) / scale).exp()
        })
        .sum::<f64>()
        / prior.mass(top);
    let eps = ratio_floor / 2.0;

    let mut diff = vec![1.0; space.len()];
    diff[top] = -eps;
    let u = UtilityTable::from_difference(&space, "a'", "a*", &diff)?;
    let model = SignalModel::Location(LocationFamily::laplace(&space, scale)?);
    Ok(Primitives {
        space,
        u,
        model,
        prior,
        computed: json!({ "ratio_floor": ratio_floor, "epsilon": eps, "omega_star": 2 }),
    })
}

/// Normal signals (MLRP) with the single-crossing violation
/// D = (+1, −1, +1) and a prior placing little mass on the middle state.
///
/// With h(s) = f(s|1)/f(s|2) decreasing and g(s) = f(s|3)/f(s|2)
/// increasing, δ = min{h(2), g(2)} bounds μ(1)h(s) + μ(3)g(s) below, so
/// any prior with μ(2) under (1−μ(2))δ/2 keeps the favored action
/// strictly optimal after every signal.
pub fn prop1_nonscd() -> Result<Primitives> {
    let space = StateSpace::new(vec![1, 2, 3])?;
    let fam = LocationFamily::normal(&space, 1.0)?;
    let s_mid = 2.0;
    let h = (fam.log_density(s_mid, 0) - fam.log_density(s_mid, 1)).exp();
    let g = (fam.log_density(s_mid, 2) - fam.log_density(s_mid, 1)).exp();
    let delta = h.min(g);
    let eps_critical = delta / (2.0 + delta);
    let eps = eps_critical / 2.0;
    let prior = Belief::from_weights(&space, &[(1.0 - eps) / 2.0, eps, (1.0 - eps) / 2.0])?;

    let u = UtilityTable::from_difference(&space, "a'", "a''", &[1.0, -1.0, 1.0])?;
    let model = SignalModel::Location(fam);
    Ok(Primitives {
        space,
        u,
        model,
        prior,
        computed: json!({ "delta": delta, "epsilon_critical": eps_critical, "middle_mass": eps }),
    })
}

/// Laplace signals (MLRP, DUB fails) with threshold preferences
/// D_{a′,a*} = (+1, −1, −1): a′ is right only in state 1, a* from state
/// ω* = 2 up. Full-support priors cascade onto a′ with positive
/// probability even when the state is 2.
pub fn prop2_fullsupport() -> Result<Primitives> {
    let space = StateSpace::new(vec![1, 2, 3])?;
    let u = UtilityTable::from_difference(&space, "a'", "a*", &[1.0, -1.0, -1.0])?;
    let model = SignalModel::Location(LocationFamily::laplace(&space, 1.0)?);
    let prior = Belief::uniform(&space);
    Ok(Primitives {
        space,
        u,
        model,
        prior,
        computed: json!({ "omega_star": 2 }),
    })
}

/// Truncated rendering of the matching-action example on Ω = ℤ with a
/// uniformly safe outside option: u(ω,ω) = ε, u(a*,·) = 0, anything else
/// −1/ε. A double-geometric prior keeps every posterior's top mass
/// bounded away from 1, so the safe action stays optimal after every
/// signal in the window and the prior is stationary without adequate
/// knowledge.
pub fn safe_action(half_width: i64, eps: f64, ratio: f64) -> Result<Primitives> {
    // prior mass of the full lattice outside the window
    let truncated_mass =
        2.0 * ratio.powi(half_width as i32 + 1) / (1.0 + ratio);
    let space = StateSpace::truncated((-half_width..=half_width).collect(), truncated_mass)?;
    let n = space.len();

    let mut actions: Vec<String> = space.states().iter().map(|s| s.to_string()).collect();
    actions.push("a*".into());
    let mut table = vec![vec![-1.0 / eps; n]; n + 1];
    for (i, row) in table.iter_mut().enumerate().take(n) {
        row[i] = eps;
    }
    table[n] = vec![0.0; n];
    let u = UtilityTable::new(&space, actions, table)?;

    let weights: Vec<f64> = space.states().iter().map(|&w| ratio.powi(w.unsigned_abs() as i32)).collect();
    let prior = Belief::from_weights(&space, &weights)?;
    let model = SignalModel::Location(LocationFamily::normal(&space, 1.0)?);
    Ok(Primitives {
        space,
        u,
        model,
        prior,
        computed: json!({
            "epsilon": eps,
            "geometric_ratio": ratio,
            "truncated_mass": truncated_mass,
        }),
    })
}

/// Atom-mixture family on the window [−m, 0] with the geometric prior
/// μ(ω) ∝ e^ω: pairwise ratios against state 0 vanish along high signals
/// while the prior-weighted lower-set ratio explodes.
pub fn appendix_b_mixture(half_width: i64, lambda: f64) -> Result<Primitives> {
    // geometric prior mass below the window: Σ_{ω<−m} e^ω / Σ_{ω≤0} e^ω = e^{−(m+1)}
    let truncated_mass = (-(half_width as f64 + 1.0)).exp();
    let space = StateSpace::truncated((-half_width..=0).collect(), truncated_mass)?;
    let weights: Vec<f64> = space.states().iter().map(|&w| (w as f64).exp()).collect();
    let prior = Belief::from_weights(&space, &weights)?;
    let model = SignalModel::MixtureAtom(MixtureAtomFamily::new(&space, lambda)?);

    // any essentially-constant utility keeps the bundle well-formed;
    // this scenario only exercises the ratio checks
    let u = UtilityTable::from_difference(&space, "a", "b", &vec![1.0; space.len()])?;
    Ok(Primitives {
        space,
        u,
        model,
        prior,
        computed: json!({ "lambda": lambda, "truncated_mass": truncated_mass }),
    })
}
