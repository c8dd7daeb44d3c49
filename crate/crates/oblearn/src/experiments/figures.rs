//! Posterior-geometry constructions on the three-state simplex, declared
//! as Bayes-plausible posterior sequences.
//!
//! `normal_curve_structure` discretizes the posterior curve induced by
//! normal signals (tangent to the simplex edges at the extreme-state
//! vertices). The others stage the separations between the
//! unbounded-beliefs variants: rays to all three vertices (unbounded
//! beliefs without a universal witness sequence), tangential vertex
//! approaches (universal witnesses exist), rays to two vertices plus two
//! edge points (directional distinguishability without full complement
//! distinguishability), and the midpoint triangle (pairwise
//! distinguishability only).

use crate::error::Result;
use crate::model::Belief;
use crate::signal::{from_posteriors, LocationFamily, PosteriorSequence, SignalModel};

/// Entries per ray; ratios reach ~2^-31 ≈ 5e-10, well past the 1e-8
/// limit threshold, with one running-minimum record per entry.
const RAY_STEPS: u32 = 31;

/// Total prior mass spent on declared entries (the rest stays with the
/// residual signal, keeping the system comfortably Bayes-plausible).
const ENTRY_BUDGET: f64 = 0.18;

fn ray_point(prior: &Belief, target: &[f64], k: u32) -> Vec<f64> {
    let t = 1.0 - 2f64.powi(-(k as i32));
    prior
        .masses()
        .iter()
        .zip(target)
        .map(|(m, tv)| (1.0 - t) * m + t * tv)
        .collect()
}

/// Interleaves one posterior per ray per depth, k-major, so record
/// subsequences develop along each ray.
fn build_rays(prior: &Belief, rays: &[&dyn Fn(u32) -> Vec<f64>]) -> Result<PosteriorSequence> {
    let c = ENTRY_BUDGET / rays.len() as f64;
    let mut entries = Vec::new();
    for k in 1..=RAY_STEPS {
        let q = c * 2f64.powi(-(k as i32));
        for ray in rays {
            let nu = Belief::from_weights(prior.space(), &ray(k))?;
            entries.push((q, nu));
        }
    }
    from_posteriors(prior, &entries)
}

/// The normal-information posterior curve from `prior`, sampled at
/// signals fanning out from the center. Approaching vertex 3 the curve
/// hugs the 2–3 edge; approaching vertex 1, the 1–2 edge.
pub fn normal_curve_structure(prior: &Belief, sigma: f64) -> Result<PosteriorSequence> {
    let fam = LocationFamily::normal(prior.space(), sigma)?;
    let model = SignalModel::Location(fam);
    let center = (prior.space().state(0) + prior.space().state(prior.space().len() - 1)) as f64 / 2.0;
    let mut entries = Vec::new();
    // k = 0..=5 on each side: signals out to center ± 32
    for k in 0..=5u32 {
        let offset = 2f64.powi(k as i32);
        let q = 0.02 * 2f64.powi(-(k as i32));
        for s in [center + offset, center - offset] {
            entries.push((q, model.bayes_update(prior, s)?));
        }
    }
    from_posteriors(prior, &entries)
}

/// Straight rays from the prior to each vertex. Every state is
/// distinguishable from its complement, but no single sequence works for
/// two states at once: along any vertex ray, the other two states'
/// mutual ratio freezes at the prior odds.
pub fn fig6a_structure(prior: &Belief) -> Result<PosteriorSequence> {
    let p = prior.clone();
    let r1 = move |k| ray_point(&p, &[1.0, 0.0, 0.0], k);
    let p = prior.clone();
    let r2 = move |k| ray_point(&p, &[0.0, 1.0, 0.0], k);
    let p = prior.clone();
    let r3 = move |k| ray_point(&p, &[0.0, 0.0, 1.0], k);
    build_rays(prior, &[&r1, &r2, &r3])
}

/// Everything `fig6a_structure` has, plus tangential vertex approaches
/// whose coordinates vanish at staggered rates, giving shared witness
/// sequences for universal DUB.
pub fn fig6b_structure(prior: &Belief) -> Result<PosteriorSequence> {
    let p = prior.clone();
    let tang3 = move |k: u32| {
        let a = p.mass(0) * 4f64.powi(-(k as i32));
        let b = p.mass(1) * 2f64.powi(-(k as i32));
        vec![a, b, 1.0 - a - b]
    };
    let p = prior.clone();
    let tang1 = move |k: u32| {
        let c = p.mass(2) * 4f64.powi(-(k as i32));
        let b = p.mass(1) * 2f64.powi(-(k as i32));
        vec![1.0 - b - c, b, c]
    };
    let p = prior.clone();
    let r2 = move |k| ray_point(&p, &[0.0, 1.0, 0.0], k);
    build_rays(prior, &[&tang1, &tang3, &r2])
}

/// Rays to vertices 1 and 3 plus rays onto the 1–2 and 2–3 edges. DUB
/// holds (each direction of each state gets a witness), yet state 2 is
/// never distinguished from its whole complement and no shared sequence
/// exists.
pub fn fig6c_structure(prior: &Belief) -> Result<PosteriorSequence> {
    let p = prior.clone();
    let r1 = move |k| ray_point(&p, &[1.0, 0.0, 0.0], k);
    let p = prior.clone();
    let r3 = move |k| ray_point(&p, &[0.0, 0.0, 1.0], k);
    let p = prior.clone();
    let edge12 = move |k| ray_point(&p, &[0.25, 0.75, 0.0], k);
    let p = prior.clone();
    let edge23 = move |k| ray_point(&p, &[0.0, 0.5, 0.5], k);
    build_rays(prior, &[&r1, &r3, &edge12, &edge23])
}

/// Posteriors accumulating at the simplex's three edge midpoints. Every
/// pair of states is distinguished along some midpoint subsequence, but
/// no state is distinguishable from its whole lower or upper set, so
/// pairwise unbounded beliefs holds while DUB fails.
pub fn triangle_structure(prior: &Belief) -> Result<PosteriorSequence> {
    let p = prior.clone();
    let d = move |k| ray_point(&p, &[0.5, 0.5, 0.0], k);
    let p = prior.clone();
    let e = move |k| ray_point(&p, &[0.5, 0.0, 0.5], k);
    let p = prior.clone();
    let f = move |k| ray_point(&p, &[0.0, 0.5, 0.5], k);
    build_rays(prior, &[&d, &e, &f])
}
