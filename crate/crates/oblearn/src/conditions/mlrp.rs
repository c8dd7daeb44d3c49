//! Monotone likelihood ratio property: f(s′|ω′)/f(s′|ω) ≥ f(s|ω′)/f(s|ω)
//! for every ω′ > ω and s′ > s.
//!
//! Finite matrices are checked through adjacent 2×2 log-determinants
//! (adjacent checks compose into all pairs by ratio multiplication).
//! Location families reduce to log-concavity of the standard density:
//! analytic for the named kinds, a second-difference grid scan for
//! custom ones. Posterior-sequence backends carry no signal order and
//! are rejected.

use serde_json::json;

use crate::conditions::{CheckReport, Verdict};
use crate::error::{Error, Result};
use crate::signal::{LocationFamily, LocationKind, SignalModel};

const DET_TOL: f64 = 1e-12;
const GRID: usize = 4096;

pub fn check_mlrp(model: &SignalModel) -> Result<CheckReport> {
    match model {
        SignalModel::Finite(m) => {
            let n_states = m.space().len();
            let n_signals = m.signal_count();
            for w in 0..n_states.saturating_sub(1) {
                for s in 0..n_signals - 1 {
                    let det = m.log_mass_at(w + 1, s + 1) + m.log_mass_at(w, s)
                        - m.log_mass_at(w, s + 1)
                        - m.log_mass_at(w + 1, s);
                    if det < -DET_TOL {
                        return Ok(CheckReport::new(
                            "mlrp",
                            Verdict::Fails,
                            json!({
                                "omega": m.space().state(w),
                                "omega_prime": m.space().state(w + 1),
                                "s": m.signals()[s],
                                "s_prime": m.signals()[s + 1],
                                "ratio_at_s": m.mass_at(w + 1, s) / m.mass_at(w, s),
                                "ratio_at_s_prime": m.mass_at(w + 1, s + 1) / m.mass_at(w, s + 1),
                            }),
                        ));
                    }
                }
            }
            Ok(CheckReport::new(
                "mlrp",
                Verdict::Holds,
                json!({ "checked": "adjacent 2x2 log-determinants" }),
            ))
        }
        SignalModel::Location(fam) => Ok(location_mlrp(fam)),
        SignalModel::MixtureAtom(m) => {
            // Windowed integer scan; the tracking atoms break monotonicity.
            let extent = m
                .space()
                .states()
                .iter()
                .map(|w| w.abs())
                .max()
                .unwrap()
                + 8;
            let n_states = m.space().len();
            for w in 0..n_states.saturating_sub(1) {
                for s in -extent..extent {
                    let det = m.log_mass(s + 1, w + 1) + m.log_mass(s, w)
                        - m.log_mass(s + 1, w)
                        - m.log_mass(s, w + 1);
                    if det < -DET_TOL {
                        return Ok(CheckReport::new(
                            "mlrp",
                            Verdict::Fails,
                            json!({
                                "domain": "truncated",
                                "omega": m.space().state(w),
                                "omega_prime": m.space().state(w + 1),
                                "s": s,
                                "s_prime": s + 1,
                            }),
                        ));
                    }
                }
            }
            Ok(CheckReport::new(
                "mlrp",
                Verdict::Holds,
                json!({ "domain": "truncated", "checked": "windowed adjacent determinants" }),
            ))
        }
        SignalModel::Posteriors(_) => Err(Error::Unsupported(
            "MLRP needs an ordered signal domain; posterior-sequence signals are unordered".into(),
        )),
    }
}

fn location_mlrp(fam: &LocationFamily) -> CheckReport {
    match fam.kind() {
        LocationKind::Normal { .. } | LocationKind::Laplace { .. } => CheckReport::new(
            "mlrp",
            Verdict::Holds,
            json!({ "certificate": "log-concave standard density" }),
        ),
        LocationKind::StudentT { df, scale } => {
            // log-density is convex beyond |x| = scale·√df; exhibit a
            // concrete violating quadruple out there.
            let x = scale * df.sqrt() + 1.0;
            let h = 0.5 * scale;
            let witness = second_difference_witness(fam, x, h)
                .or_else(|| second_difference_witness(fam, 2.0 * x, h))
                .expect("student-t tail is log-convex");
            CheckReport::new("mlrp", Verdict::Fails, witness)
        }
        LocationKind::Custom(_) => {
            let (lo, hi) = fam.grid_range(1e-9);
            let h = (hi - lo) / (GRID as f64 - 1.0);
            for i in 1..GRID - 1 {
                let x = lo + h * i as f64;
                let d2 = fam.log_std(x - h) - 2.0 * fam.log_std(x) + fam.log_std(x + h);
                if d2 > 1e-9 {
                    let witness = second_difference_witness(fam, x, h)
                        .expect("second difference already found positive");
                    return CheckReport::new("mlrp", Verdict::Fails, witness);
                }
            }
            CheckReport::new(
                "mlrp",
                Verdict::Holds,
                json!({ "checked": format!("{GRID}-point second-difference scan of log g") }),
            )
        }
    }
}

/// For a log-convexity point of g at `x`, produce the violating MLRP
/// quadruple on the first adjacent state pair.
fn second_difference_witness(fam: &LocationFamily, x: f64, h: f64) -> Option<serde_json::Value> {
    let d2 = fam.log_std(x - h) - 2.0 * fam.log_std(x) + fam.log_std(x + h);
    if d2 <= 0.0 {
        return None;
    }
    let sp = fam.space();
    let (w_lo, w_hi) = (sp.state(0), if sp.len() > 1 { sp.state(1) } else { sp.state(0) + 1 });
    let delta = (w_hi - w_lo) as f64;
    // φ(s) = log f(s|ω_hi) − log f(s|ω_lo) must be nondecreasing under
    // MLRP; around a convexity point it decreases for some step.
    let probe = |s: f64| fam.log_std(s - delta) - fam.log_std(s);
    let mut s = x + w_lo as f64 - 2.0 * delta.max(h);
    let step = h.min(delta / 2.0).max(1e-3);
    for _ in 0..10_000 {
        let (a, b) = (probe(s), probe(s + step));
        if b < a - 1e-12 {
            return Some(json!({
                "omega": w_lo,
                "omega_prime": w_hi,
                "s": s,
                "s_prime": s + step,
                "log_ratio_at_s": a,
                "log_ratio_at_s_prime": b,
            }));
        }
        s += step;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Belief, StateSpace};
    use crate::signal::{from_posteriors, FiniteMatrix};
    use std::sync::Arc;

    fn sp3() -> Arc<StateSpace> {
        StateSpace::new(vec![1, 2, 3]).unwrap()
    }

    #[test]
    fn named_location_families() {
        let sp = sp3();
        let normal = SignalModel::Location(LocationFamily::normal(&sp, 1.0).unwrap());
        assert_eq!(check_mlrp(&normal).unwrap().verdict, Verdict::Holds);
        let laplace = SignalModel::Location(LocationFamily::laplace(&sp, 1.0).unwrap());
        assert_eq!(check_mlrp(&laplace).unwrap().verdict, Verdict::Holds);
        let t = SignalModel::Location(LocationFamily::student_t(&sp, 5.0, 1.0).unwrap());
        let r = check_mlrp(&t).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.witnesses["log_ratio_at_s_prime"].as_f64().unwrap()
            < r.witnesses["log_ratio_at_s"].as_f64().unwrap());
    }

    #[test]
    fn custom_kinds_scan_log_concavity() {
        let sp = sp3();
        let thin = SignalModel::Location(LocationFamily::generalized_exponential(&sp, 1.5).unwrap());
        assert_eq!(check_mlrp(&thin).unwrap().verdict, Verdict::Holds);
        let thick = SignalModel::Location(LocationFamily::generalized_exponential(&sp, 0.5).unwrap());
        assert_eq!(check_mlrp(&thick).unwrap().verdict, Verdict::Fails);
    }

    #[test]
    fn crossed_finite_matrix_fails_with_witness() {
        let sp = StateSpace::new(vec![1, 2]).unwrap();
        let m = FiniteMatrix::new(
            &sp,
            vec![0.0, 1.0],
            vec![vec![0.1, 0.9], vec![0.9, 0.1]],
        )
        .unwrap();
        let r = check_mlrp(&SignalModel::Finite(m)).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.witnesses["ratio_at_s"].as_f64().unwrap() > r.witnesses["ratio_at_s_prime"].as_f64().unwrap());
    }

    #[test]
    fn posterior_sequences_are_rejected() {
        let sp = sp3();
        let prior = Belief::uniform(&sp);
        let m = from_posteriors(&prior, &[(0.3, prior.clone())]).unwrap();
        assert!(matches!(
            check_mlrp(&SignalModel::Posteriors(m)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn adjacent_checks_agree_with_all_pairs_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_pcg::Pcg64Mcg::seed_from_u64(5150);
        let mut holds_seen = 0;
        for round in 0..1000 {
            let n_states = rng.random_range(2..=5usize);
            let n_signals = rng.random_range(2..=5usize);
            let sp = StateSpace::new((0..n_states as i64).collect()).unwrap();

            // half the rounds: arbitrary positive matrices; other half:
            // exponential-family matrices, which satisfy MLRP by design
            let make_mlrp = round % 2 == 0;
            let mut rows = vec![vec![0.0; n_states]; n_signals];
            if make_mlrp {
                let xs: Vec<f64> = (0..n_signals).map(|i| i as f64 + rng.random_range(0.0..0.5)).collect();
                let thetas: Vec<f64> =
                    (0..n_states).map(|i| 0.7 * i as f64 + rng.random_range(0.0..0.2)).collect();
                let base: Vec<f64> = (0..n_signals).map(|_| rng.random_range(0.2..1.0)).collect();
                for w in 0..n_states {
                    let col: Vec<f64> =
                        (0..n_signals).map(|s| base[s] * (thetas[w] * xs[s]).exp()).collect();
                    let z: f64 = col.iter().sum();
                    for s in 0..n_signals {
                        rows[s][w] = col[s] / z;
                    }
                }
            } else {
                for w in 0..n_states {
                    let col: Vec<f64> = (0..n_signals).map(|_| rng.random_range(0.05..1.0)).collect();
                    let z: f64 = col.iter().sum();
                    for s in 0..n_signals {
                        rows[s][w] = col[s] / z;
                    }
                }
            }
            let signals = (0..n_signals).map(|i| i as f64).collect();
            let m = FiniteMatrix::new(&sp, signals, rows).unwrap();

            // all-pairs oracle
            let mut all_pairs = true;
            'outer: for w in 0..n_states {
                for w2 in (w + 1)..n_states {
                    for s in 0..n_signals {
                        for s2 in (s + 1)..n_signals {
                            let det = m.log_mass_at(w2, s2) + m.log_mass_at(w, s)
                                - m.log_mass_at(w, s2)
                                - m.log_mass_at(w2, s);
                            if det < -DET_TOL {
                                all_pairs = false;
                                break 'outer;
                            }
                        }
                    }
                }
            }
            let adjacent = check_mlrp(&SignalModel::Finite(m)).unwrap().verdict == Verdict::Holds;
            assert_eq!(adjacent, all_pairs, "round {round}");
            if adjacent {
                holds_seen += 1;
            }
        }
        assert!(holds_seen >= 400, "MLRP-true instances under-sampled: {holds_seen}");
    }
}
