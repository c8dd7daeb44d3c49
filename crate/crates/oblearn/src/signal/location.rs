//! Location-shift signal structures: f(s|ω) = g(s − ω) for a standard
//! density g on ℝ.
//!
//! Density evaluation is exact in the log domain for every kind. CDFs are
//! closed-form for normal and Laplace; Student-t and custom kinds fall
//! back to adaptive quadrature to 1e-11 absolute, which only runs on
//! partition probabilities, never on likelihood hot paths.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::StateSpace;
use crate::numeric::{adaptive_simpson, bisect, normal_cdf, normal_quantile};

/// Tail classification of a standard density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum TailClass {
    /// g(s) ≤ exp(−|s|^p) eventually, for some p > 1.
    StrictlySubexponential { p: f64 },
    /// Exponential boundary case (Laplace).
    Exponential,
    /// g(s) ≥ exp(−|s|^p) eventually, for some p < 1.
    Thick { p: f64 },
    Unknown,
}

/// A user-supplied standard density, described by its log-density.
///
/// The closure may be unnormalized; the family normalizes by quadrature
/// at construction. A declared tail class, when present, is trusted by
/// the condition checkers in place of the numeric tail regression.
#[derive(Clone)]
pub struct CustomDensity {
    pub name: String,
    pub log_g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub declared_tail: Option<TailClass>,
}

impl fmt::Debug for CustomDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity")
            .field("name", &self.name)
            .field("declared_tail", &self.declared_tail)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum LocationKind {
    Normal { sigma: f64 },
    Laplace { scale: f64 },
    StudentT { df: f64, scale: f64 },
    Custom(CustomDensity),
}

impl LocationKind {
    pub fn name(&self) -> String {
        match self {
            LocationKind::Normal { .. } => "normal".into(),
            LocationKind::Laplace { .. } => "laplace".into(),
            LocationKind::StudentT { .. } => "student_t".into(),
            LocationKind::Custom(c) => format!("custom({})", c.name),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LocationFamily {
    space: Arc<StateSpace>,
    kind: LocationKind,
    /// log of the custom density's normalizer; 0 for named kinds.
    log_z: f64,
    /// Effective support radius for quadrature on custom kinds.
    custom_radius: f64,
    /// Cached CDF at 0 for custom kinds.
    custom_cdf0: f64,
}

impl LocationFamily {
    pub fn normal(space: &Arc<StateSpace>, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidSignalModel(format!("sigma {sigma} must be > 0")));
        }
        Ok(Self::named(space, LocationKind::Normal { sigma }))
    }

    pub fn laplace(space: &Arc<StateSpace>, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidSignalModel(format!("scale {scale} must be > 0")));
        }
        Ok(Self::named(space, LocationKind::Laplace { scale }))
    }

    pub fn student_t(space: &Arc<StateSpace>, df: f64, scale: f64) -> Result<Self> {
        if !(df >= 1.0) || !df.is_finite() {
            return Err(Error::InvalidSignalModel(format!(
                "degrees of freedom {df} must be >= 1"
            )));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidSignalModel(format!("scale {scale} must be > 0")));
        }
        Ok(Self::named(space, LocationKind::StudentT { df, scale }))
    }

    fn named(space: &Arc<StateSpace>, kind: LocationKind) -> Self {
        LocationFamily {
            space: Arc::clone(space),
            kind,
            log_z: 0.0,
            custom_radius: 0.0,
            custom_cdf0: 0.0,
        }
    }

    pub fn custom(space: &Arc<StateSpace>, density: CustomDensity) -> Result<Self> {
        // Find a radius beyond which the (unnormalized) density is negligible.
        let g = |x: f64| ((density.log_g)(x)).exp();
        let mut radius = 1.0;
        while radius < 1e7 {
            let edge = g(radius).max(g(-radius)) * radius;
            if edge < 1e-17 {
                break;
            }
            radius *= 2.0;
        }
        let tol = 1e-13;
        let left = adaptive_simpson(&g, -radius, 0.0, tol);
        let right = adaptive_simpson(&g, 0.0, radius, tol);
        let z = left + right;
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::InvalidSignalModel(format!(
                "custom density {:?} does not integrate to a positive finite mass",
                density.name
            )));
        }
        let custom_cdf0 = left / z;
        Ok(LocationFamily {
            space: Arc::clone(space),
            kind: LocationKind::Custom(density),
            log_z: z.ln(),
            custom_radius: radius,
            custom_cdf0,
        })
    }

    /// Generalized exponential standard density g(s) ∝ exp(−|s|^p), the
    /// stock "custom" kind reachable from JSON configs. p > 1 has thin
    /// tails, p = 1 is Laplace-like, p < 1 has thick tails.
    pub fn generalized_exponential(space: &Arc<StateSpace>, power: f64) -> Result<Self> {
        if !(power > 0.0) || !power.is_finite() {
            return Err(Error::InvalidSignalModel(format!("power {power} must be > 0")));
        }
        Self::custom(
            space,
            CustomDensity {
                name: format!("gen_exp({power})"),
                log_g: Arc::new(move |x: f64| -x.abs().powf(power)),
                declared_tail: None,
            },
        )
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn kind(&self) -> &LocationKind {
        &self.kind
    }

    /// log g(x) of the standard (normalized) density.
    pub fn log_std(&self, x: f64) -> f64 {
        match &self.kind {
            LocationKind::Normal { sigma } => {
                let z = x / sigma;
                -0.5 * z * z - sigma.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
            }
            LocationKind::Laplace { scale } => -x.abs() / scale - (2.0 * scale).ln(),
            LocationKind::StudentT { df, scale } => {
                let z = x / scale;
                libm::lgamma((df + 1.0) / 2.0)
                    - libm::lgamma(df / 2.0)
                    - 0.5 * (df * std::f64::consts::PI).ln()
                    - scale.ln()
                    - (df + 1.0) / 2.0 * (1.0 + z * z / df).ln()
            }
            LocationKind::Custom(c) => (c.log_g)(x) - self.log_z,
        }
    }

    /// CDF G(x) of the standard density.
    pub fn cdf_std(&self, x: f64) -> f64 {
        match &self.kind {
            LocationKind::Normal { sigma } => normal_cdf(x / sigma),
            LocationKind::Laplace { scale } => {
                if x < 0.0 {
                    0.5 * (x / scale).exp()
                } else {
                    1.0 - 0.5 * (-x / scale).exp()
                }
            }
            LocationKind::StudentT { .. } => self.t_cdf(x),
            LocationKind::Custom(_) => self.custom_cdf(x),
        }
    }

    /// Quantile G⁻¹(p), p in (0, 1).
    pub fn quantile_std(&self, p: f64) -> f64 {
        assert!(p > 0.0 && p < 1.0);
        match &self.kind {
            LocationKind::Normal { sigma } => sigma * normal_quantile(p),
            LocationKind::Laplace { scale } => {
                if p < 0.5 {
                    scale * (2.0 * p).ln()
                } else {
                    -scale * (2.0 * (1.0 - p)).ln()
                }
            }
            _ => {
                // Bracket by doubling, then bisect on the CDF.
                let mut hi = 1.0;
                while self.cdf_std(hi) < p && hi < 1e18 {
                    hi *= 2.0;
                }
                let mut lo = -1.0;
                while self.cdf_std(lo) > p && lo > -1e18 {
                    lo *= 2.0;
                }
                bisect(|x| self.cdf_std(x) - p, lo, hi, 1e-11)
            }
        }
    }

    fn t_cdf(&self, x: f64) -> f64 {
        if x > 0.0 {
            return 1.0 - self.t_cdf(-x);
        }
        if x == 0.0 {
            return 0.5;
        }
        let tol = 1e-11;
        let g = |t: f64| self.log_std(t).exp();
        if x <= -1.0 {
            // ∫_{−∞}^{x} g(t) dt with t = −1/u, u ∈ (0, −1/x]
            let integrand = |u: f64| {
                if u == 0.0 {
                    0.0
                } else {
                    g(-1.0 / u) / (u * u)
                }
            };
            adaptive_simpson(&integrand, 0.0, -1.0 / x, tol)
        } else {
            self.t_cdf(-1.0) + adaptive_simpson(&g, -1.0, x, tol)
        }
    }

    fn custom_cdf(&self, x: f64) -> f64 {
        let r = self.custom_radius;
        let g = |t: f64| self.log_std(t).exp();
        let tol = 1e-11;
        if x <= -r {
            0.0
        } else if x >= r {
            1.0
        } else if x <= 0.0 {
            (self.custom_cdf0 - adaptive_simpson(&g, x, 0.0, tol)).clamp(0.0, 1.0)
        } else {
            (self.custom_cdf0 + adaptive_simpson(&g, 0.0, x, tol)).clamp(0.0, 1.0)
        }
    }

    pub fn log_density(&self, s: f64, state_idx: usize) -> f64 {
        self.log_std(s - self.space.state(state_idx) as f64)
    }

    pub fn cdf(&self, s: f64, state_idx: usize) -> f64 {
        self.cdf_std(s - self.space.state(state_idx) as f64)
    }

    /// Signal range covering all states' distributions except `coverage`
    /// mass in each tail of the extreme states.
    pub fn grid_range(&self, coverage: f64) -> (f64, f64) {
        let lo = self.space.states()[0] as f64 + self.quantile_std(coverage);
        let hi = *self.space.states().last().unwrap() as f64 + self.quantile_std(1.0 - coverage);
        (lo, hi)
    }

    /// Limiting posterior log-weights (relative, per state) as s → ±∞.
    pub fn tail_log_weights(&self, toward_high: bool) -> TailWeights {
        let states = self.space.states();
        match &self.kind {
            LocationKind::Normal { .. } => TailWeights::Degenerate(if toward_high {
                states.len() - 1
            } else {
                0
            }),
            LocationKind::Laplace { scale } => TailWeights::Finite(
                states
                    .iter()
                    .map(|&w| {
                        if toward_high {
                            w as f64 / scale
                        } else {
                            -(w as f64) / scale
                        }
                    })
                    .collect(),
            ),
            LocationKind::StudentT { .. } => TailWeights::Finite(vec![0.0; states.len()]),
            LocationKind::Custom(_) => {
                // Probe the log-ratio of adjacent evaluation points far out;
                // growing differences mean a degenerate tail.
                let spread = self.space.spread();
                let probe = |s: f64| -> Vec<f64> {
                    states.iter().map(|&w| self.log_std(s - w as f64)).collect()
                };
                let sgn = if toward_high { 1.0 } else { -1.0 };
                let a = probe(sgn * spread * 2f64.powi(34));
                let b = probe(sgn * spread * 2f64.powi(35));
                let rel = |v: &[f64]| -> Vec<f64> {
                    let r = v[0];
                    v.iter().map(|x| x - r).collect()
                };
                let (ra, rb) = (rel(&a), rel(&b));
                let amp = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                if amp(&rb) > amp(&ra) * (1.0 + 1e-9) + 1e-12 {
                    // log-ratios still growing: tail concentrates on an extreme state
                    TailWeights::Degenerate(if toward_high { states.len() - 1 } else { 0 })
                } else {
                    TailWeights::Finite(rb)
                }
            }
        }
    }
}

/// Limiting relative posterior weights as the signal runs off to one side.
#[derive(Debug, Clone, PartialEq)]
pub enum TailWeights {
    /// All mass collapses onto one state index.
    Degenerate(usize),
    /// Finite limiting log-weights per state (up to a common constant);
    /// all-zero means the tail is uninformative.
    Finite(Vec<f64>),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space13() -> Arc<StateSpace> {
        StateSpace::new(vec![1, 2, 3]).unwrap()
    }

    #[test]
    fn normal_log_density_at_center() {
        let fam = LocationFamily::normal(&space13(), 1.0).unwrap();
        let got = fam.log_density(2.0, 1);
        let expected = -0.5 * (2.0 * std::f64::consts::PI).ln();
        assert!((got - expected).abs() < 1e-15);
    }

    #[test]
    fn laplace_ratio_is_constant_beyond_the_states() {
        let fam = LocationFamily::laplace(&space13(), 1.0).unwrap();
        for s in [3.5, 10.0, 1e4, 1e8] {
            let diff = fam.log_density(s, 2) - fam.log_density(s, 0);
            assert!((diff - 2.0).abs() < 1e-12, "s={s}, diff={diff}");
        }
    }

    #[test]
    fn laplace_cdf_quantile_roundtrip() {
        let fam = LocationFamily::laplace(&space13(), 0.7).unwrap();
        for &p in &[1e-9, 0.2, 0.5, 0.9, 1.0 - 1e-9] {
            let x = fam.quantile_std(p);
            assert!((fam.cdf_std(x) - p).abs() < 1e-13);
        }
    }

    #[test]
    fn student_t_cdf_is_symmetric_and_normalized() {
        let fam = LocationFamily::student_t(&space13(), 5.0, 1.0).unwrap();
        assert!((fam.cdf_std(0.0) - 0.5).abs() < 1e-12);
        for &x in &[0.3, 1.0, 4.0, 25.0] {
            let s = fam.cdf_std(x) + fam.cdf_std(-x);
            assert!((s - 1.0).abs() < 1e-10, "x={x}, sum={s}");
        }
        // Cauchy special case has a closed form to compare against.
        let cauchy = LocationFamily::student_t(&space13(), 1.0, 1.0).unwrap();
        for &x in &[-3.0f64, -0.5, 0.5, 2.0] {
            let exact = 0.5 + x.atan() / std::f64::consts::PI;
            assert!((cauchy.cdf_std(x) - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn custom_gen_exp_matches_laplace_at_power_one() {
        let fam = LocationFamily::generalized_exponential(&space13(), 1.0).unwrap();
        let lap = LocationFamily::laplace(&space13(), 1.0).unwrap();
        for &x in &[-3.0, -0.2, 0.0, 1.7, 8.0] {
            assert!((fam.log_std(x) - lap.log_std(x)).abs() < 1e-9, "x={x}");
        }
        for &p in &[1e-6, 0.3, 0.8] {
            assert!((fam.quantile_std(p) - lap.quantile_std(p)).abs() < 1e-7);
        }
    }

    #[test]
    fn normal_tail_bound_below_one_past_the_state() {
        // for ω' < ω and every s > ω the likelihood ratio stays under 1
        let fam = LocationFamily::normal(&space13(), 1.0).unwrap();
        for s in [3.0001, 3.5, 5.0, 40.0, 1e6] {
            for lo in 0..2 {
                let r = fam.log_density(s, lo) - fam.log_density(s, 2);
                assert!(r < 0.0, "s={s}, state={lo}, log-ratio={r}");
            }
        }
    }

    #[test]
    fn tail_weights_per_kind() {
        let sp = space13();
        assert_eq!(
            LocationFamily::normal(&sp, 1.0).unwrap().tail_log_weights(true),
            TailWeights::Degenerate(2)
        );
        assert_eq!(
            LocationFamily::laplace(&sp, 1.0).unwrap().tail_log_weights(true),
            TailWeights::Finite(vec![1.0, 2.0, 3.0])
        );
        assert_eq!(
            LocationFamily::student_t(&sp, 5.0, 1.0)
                .unwrap()
                .tail_log_weights(false),
            TailWeights::Finite(vec![0.0, 0.0, 0.0])
        );
        // custom thin tail concentrates, thick tail flattens
        let thin = LocationFamily::generalized_exponential(&sp, 1.5).unwrap();
        assert_eq!(thin.tail_log_weights(true), TailWeights::Degenerate(2));
        let thick = LocationFamily::generalized_exponential(&sp, 0.5).unwrap();
        match thick.tail_log_weights(true) {
            TailWeights::Finite(w) => {
                assert!(w.iter().all(|x| x.abs() < 1e-3), "weights {w:?}")
            }
            other => panic!("expected finite tail weights, got {other:?}"),
        }
    }
}
