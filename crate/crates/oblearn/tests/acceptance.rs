//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (run with `--nocapture` to see them). Every tolerance is pinned
//! here, not configured elsewhere.

use std::sync::Arc;

use oblearn::conditions::{
    check_dub, check_mlrp, check_pairwise_ub, check_scd, check_unbounded_beliefs,
    check_universal_dub, implication_audit, scd_oracle, ProbePlan, Verdict,
};
use oblearn::dynamics::{fosd_check, martingale_residual, strategy_partition};
use oblearn::experiments::{monte_carlo, run_gallery, MonteCarloSpec};
use oblearn::numeric::unit_open;
use oblearn::{
    Belief, FiniteMatrix, LocationFamily, SignalModel, StateSpace, UtilityTable,
};

const MASTER_SEED: u64 = 20240808;

fn pass(n: usize, name: &str) {
    println!("acceptance {n} ({name}): PASS");
}

fn rng(tag: u64) -> oblearn::RngStream {
    oblearn::stream_for(MASTER_SEED, tag)
}

fn random_utility(
    space: &Arc<StateSpace>,
    n_actions: usize,
    r: &mut oblearn::RngStream,
) -> UtilityTable {
    let labels = (0..n_actions).map(|i| format!("a{i}")).collect();
    let table = (0..n_actions)
        .map(|_| (0..space.len()).map(|_| 2.0 * unit_open(r) - 1.0).collect())
        .collect();
    UtilityTable::new(space, labels, table).unwrap()
}

fn random_belief(space: &Arc<StateSpace>, allow_zeros: bool, r: &mut oblearn::RngStream) -> Belief {
    loop {
        let weights: Vec<f64> = (0..space.len())
            .map(|_| {
                if allow_zeros && unit_open(r) < 0.25 {
                    0.0
                } else {
                    unit_open(r) + 1e-3
                }
            })
            .collect();
        if let Ok(b) = Belief::from_weights(space, &weights) {
            return b;
        }
    }
}

#[test]
fn criterion_1_martingale_identity() {
    // finite backends: exact arithmetic, residual ≤ 1e-12
    let mut r = rng(1);
    let mut worst_finite = 0.0f64;
    for _ in 0..1000 {
        let n_states = 2 + (r.next_range(4)) as usize;
        let n_signals = 2 + (r.next_range(4)) as usize;
        let n_actions = 2 + (r.next_range(4)) as usize;
        let space = StateSpace::new((0..n_states as i64).collect()).unwrap();
        let mut rows = vec![vec![0.0; n_states]; n_signals];
        for w in 0..n_states {
            let col: Vec<f64> = (0..n_signals).map(|_| unit_open(&mut r) + 0.05).collect();
            let z: f64 = col.iter().sum();
            for s in 0..n_signals {
                rows[s][w] = col[s] / z;
            }
        }
        let signals = (0..n_signals).map(|i| i as f64).collect();
        let model = SignalModel::Finite(FiniteMatrix::new(&space, signals, rows).unwrap());
        let u = random_utility(&space, n_actions, &mut r);
        let mu = random_belief(&space, true, &mut r);
        let part = strategy_partition(&u, &mu, &model).unwrap();
        let res = martingale_residual(&mu, &part, &model).unwrap();
        worst_finite = worst_finite.max(res);
    }
    assert!(worst_finite <= 1e-12, "finite residual {worst_finite}");

    // location backends: CDF quadrature, residual ≤ 1e-10
    let mut worst_location = 0.0f64;
    for i in 0..100 {
        let lo = -(r.next_range(3) as i64);
        let hi = lo + 1 + r.next_range(3) as i64;
        let space = StateSpace::new((lo..=hi).collect()).unwrap();
        let scale = 0.5 + 1.5 * unit_open(&mut r);
        let model = if i % 2 == 0 {
            SignalModel::Location(LocationFamily::normal(&space, scale).unwrap())
        } else {
            SignalModel::Location(LocationFamily::laplace(&space, scale).unwrap())
        };
        let n_actions = 2 + (r.next_range(3)) as usize;
        let u = random_utility(&space, n_actions, &mut r);
        let mu = random_belief(&space, false, &mut r);
        let part = strategy_partition(&u, &mu, &model).unwrap();
        let res = martingale_residual(&mu, &part, &model).unwrap();
        worst_location = worst_location.max(res);
    }
    assert!(worst_location <= 1e-10, "location residual {worst_location}");
    pass(1, "martingale identity");
}

#[test]
fn criterion_2_scd_checker_matches_oracle() {
    let mut r = rng(2);
    for round in 0..1000 {
        let n_states = 2 + (r.next_range(5)) as usize; // ≤ 6
        let n_actions = 2 + (r.next_range(3)) as usize; // ≤ 4
        let space = StateSpace::new((0..n_states as i64).collect()).unwrap();
        let u = random_utility(&space, n_actions, &mut r);
        let a = check_scd(&u);
        let b = scd_oracle(&u);
        assert_eq!(a.verdict, b.verdict, "round {round}");
        assert_eq!(
            a.verdict == Verdict::Fails,
            !b.witnesses["states"].is_null() && b.verdict == Verdict::Fails,
            "witness existence must agree (round {round})"
        );
        if a.verdict == Verdict::Fails {
            assert!(a.witnesses["states"].is_array());
            assert!(b.witnesses["states"].is_array());
        }
    }
    pass(2, "scd checker ≡ interval-choice oracle");
}

#[test]
fn criterion_3_condition_lattice() {
    let sp = StateSpace::new(vec![1, 2, 3]).unwrap();
    let plan = ProbePlan::default();

    let normal = SignalModel::Location(LocationFamily::normal(&sp, 1.0).unwrap());
    assert_eq!(check_mlrp(&normal).unwrap().verdict, Verdict::Holds);
    assert_eq!(check_universal_dub(&normal, &plan).unwrap().verdict, Verdict::Holds);
    assert_eq!(check_dub(&normal, &plan).unwrap().verdict, Verdict::Holds);
    assert_eq!(check_pairwise_ub(&normal, &plan).unwrap().verdict, Verdict::Holds);
    assert_eq!(check_unbounded_beliefs(&normal, &plan).unwrap().verdict, Verdict::Fails);

    let laplace_fam = LocationFamily::laplace(&sp, 1.0).unwrap();
    let laplace = SignalModel::Location(laplace_fam.clone());
    assert_eq!(check_mlrp(&laplace).unwrap().verdict, Verdict::Holds);
    assert_eq!(check_dub(&laplace, &plan).unwrap().verdict, Verdict::Fails);

    // the failure certificate is the exact ratio constancy
    // f(s|ω′)/f(s|ω) = exp(ω′−ω) for s > max(ω, ω′), verified to 1e-12
    for w_lo in 0..3usize {
        for w_hi in (w_lo + 1)..3 {
            let expected = ((sp.state(w_lo) - sp.state(w_hi)) as f64).exp();
            for k in 0..6 {
                let s = 3.0 + 2f64.powi(k);
                let got =
                    (laplace_fam.log_density(s, w_lo) - laplace_fam.log_density(s, w_hi)).exp();
                assert!(
                    (got - expected).abs() <= 1e-12,
                    "constancy at s={s}: {got} vs {expected}"
                );
            }
        }
    }

    let t = SignalModel::Location(LocationFamily::student_t(&sp, 5.0, 1.0).unwrap());
    assert_eq!(check_pairwise_ub(&t, &plan).unwrap().verdict, Verdict::Fails);

    // Figure-6 caption verdicts and audit consistency, via the gallery
    let g7 = run_gallery("fig6_lattice", None, MASTER_SEED).unwrap();
    assert!(g7.passed, "figure/caption verdict table: {}", g7.details);

    for model in [&normal, &laplace, &t] {
        assert_eq!(implication_audit(model, &plan).unwrap().verdict, Verdict::Holds);
    }
    pass(3, "condition lattice + laplace certificate");
}

#[test]
fn criterion_4_sufficiency_mechanism() {
    let report = run_gallery("thm1_sufficiency", None, MASTER_SEED).unwrap();
    let scan_hits = report.details["stationary_scan"]["total_hits"].as_u64().unwrap();
    assert_eq!(scan_hits, 0, "stationary-inadequate hits on some face");
    let mc = report.details["monte_carlo"].as_array().unwrap();
    let (f100, hi100) = (
        mc[0]["correct_action_freq"].as_f64().unwrap(),
        mc[0]["correct_ci"][1].as_f64().unwrap(),
    );
    let (f4000, lo4000) = (
        mc[1]["correct_action_freq"].as_f64().unwrap(),
        mc[1]["correct_ci"][0].as_f64().unwrap(),
    );
    assert!(f4000 > f100, "no improvement: {f100} vs {f4000}");
    assert!(lo4000 > hi100, "Wilson intervals overlap: [{hi100}] vs [{lo4000}]");
    assert!(report.passed);
    pass(4, "sufficiency mechanism (empty scan + learning trend)");
}

#[test]
fn criterion_5_stationary_constructions_cascade() {
    for name in ["thm1_3_laplace", "prop1_nonscd"] {
        let report = run_gallery(name, None, MASTER_SEED).unwrap();
        assert!(report.passed, "{name}: {}", report.details);
        assert_eq!(report.details["stationary"]["verdict"], "holds", "{name}");
        assert_eq!(report.details["runs"].as_u64().unwrap(), 200);
        assert_eq!(report.details["cascade_at_1_frequency"].as_f64().unwrap(), 1.0, "{name}");
        assert_eq!(
            report.details["inadequate_final_frequency"].as_f64().unwrap(),
            1.0,
            "{name}"
        );
    }
    pass(5, "engineered stationary constructions cascade immediately");
}

#[test]
fn criterion_6_wrong_herds_have_positive_frequency() {
    let p = oblearn::experiments::setups::prop2_fullsupport().unwrap();
    let rows = monte_carlo(&MonteCarloSpec {
        u: &p.u,
        model: &p.model,
        prior: &p.prior,
        forced_state: Some(1), // state 2 = ω*
        horizons: vec![2000],
        n_runs: 2000,
        master_seed: MASTER_SEED,
    })
    .unwrap();
    let (lb, freq) = (rows[0].wrong_herd_ci.0, rows[0].wrong_herd_freq);
    assert!(lb > 0.0, "Wilson lower bound {lb} (freq {freq})");
    pass(6, "wrong herds under bounded ratios occur with positive frequency");
}

#[test]
fn criterion_7_atom_mixture_ratios() {
    let report = run_gallery("appendixB_mixture", None, MASTER_SEED).unwrap();
    let pointwise = report.details["worst_pointwise_log_ratio"].as_f64().unwrap();
    let weighted = report.details["max_weighted_log_ratio"].as_f64().unwrap();
    assert!(pointwise < (1e-8f64).ln(), "pointwise {pointwise}");
    assert!(weighted > (1e8f64).ln(), "weighted {weighted}");
    assert!(report.passed);
    pass(7, "atom mixture: pointwise vanishing vs weighted divergence");
}

#[test]
fn criterion_8_strict_fosd_under_mlrp() {
    let mut r = rng(8);
    for round in 0..500 {
        let strict = if round % 2 == 0 {
            // exponential-family finite matrix: strictly MLRP
            let n_states = 2 + (r.next_range(3)) as usize;
            let n_signals = 2 + (r.next_range(3)) as usize;
            let space = StateSpace::new((0..n_states as i64).collect()).unwrap();
            let xs: Vec<f64> = (0..n_signals)
                .map(|i| i as f64 + 0.3 * unit_open(&mut r))
                .collect();
            let thetas: Vec<f64> = (0..n_states)
                .map(|i| 0.8 * i as f64 + 0.2 * unit_open(&mut r))
                .collect();
            let base: Vec<f64> = (0..n_signals).map(|_| unit_open(&mut r) + 0.2).collect();
            let mut rows = vec![vec![0.0; n_states]; n_signals];
            for w in 0..n_states {
                let col: Vec<f64> = (0..n_signals)
                    .map(|s| base[s] * (thetas[w] * xs[s]).exp())
                    .collect();
                let z: f64 = col.iter().sum();
                for s in 0..n_signals {
                    rows[s][w] = col[s] / z;
                }
            }
            let signals: Vec<f64> = (0..n_signals).map(|i| i as f64).collect();
            let i = r.next_range(n_signals as u64 - 1) as usize;
            let s_lo = signals[i];
            let s_hi = signals[i + 1 + r.next_range((n_signals - i - 1) as u64) as usize];
            let model =
                SignalModel::Finite(FiniteMatrix::new(&space, signals, rows).unwrap());
            let mu = random_belief(&space, false, &mut r);
            fosd_check(&model, &mu, s_lo, s_hi).unwrap()
        } else {
            // location family with signals in the informative band
            let space = StateSpace::new(vec![0, 1, 2]).unwrap();
            let scale = 0.6 + unit_open(&mut r);
            let model = if round % 4 == 1 {
                SignalModel::Location(LocationFamily::normal(&space, scale).unwrap())
            } else {
                SignalModel::Location(LocationFamily::laplace(&space, scale).unwrap())
            };
            let mu = random_belief(&space, false, &mut r);
            let s_lo = 0.05 + 1.4 * unit_open(&mut r);
            let s_hi = s_lo + 0.1 + 0.4 * unit_open(&mut r);
            fosd_check(&model, &mu, s_lo, s_hi).unwrap()
        };
        assert!(strict, "strict FOSD failed in round {round}");
    }
    pass(8, "strict FOSD for MLRP models and non-equivalent signals");
}

#[test]
fn criterion_9_gallery_artifacts_are_byte_identical() {
    let base = std::env::temp_dir().join(format!("oblearn_acc9_{}", std::process::id()));
    let dir_a = base.join("a");
    let dir_b = base.join("b");
    for name in ["thm1_3_laplace", "fig_geometry"] {
        let ra = run_gallery(name, Some(&dir_a), MASTER_SEED).unwrap();
        let rb = run_gallery(name, Some(&dir_b), MASTER_SEED).unwrap();
        assert!(ra.passed && rb.passed);
        assert_eq!(ra.artifacts.len(), rb.artifacts.len());
        for (pa, pb) in ra.artifacts.iter().zip(&rb.artifacts) {
            let ba = std::fs::read(pa).unwrap();
            let bb = std::fs::read(pb).unwrap();
            assert_eq!(
                ba, bb,
                "artifact bytes differ: {} vs {}",
                pa.display(),
                pb.display()
            );
        }
    }
    std::fs::remove_dir_all(&base).ok();
    pass(9, "deterministic artifacts");
}

/// Small uniform-integer helper on the raw stream.
trait NextRange {
    fn next_range(&mut self, n: u64) -> u64;
}

impl NextRange for oblearn::RngStream {
    fn next_range(&mut self, n: u64) -> u64 {
        (unit_open(self) * n as f64) as u64
    }
}
