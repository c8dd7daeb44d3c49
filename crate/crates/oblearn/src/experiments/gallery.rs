//! The scenario gallery: each entry reproduces one construction, checks
//! its declared expectation by machine, and emits a JSON report (plus
//! CSV artifacts where the scenario produces curves or trajectories).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::conditions::{
    check_dub, check_mlrp, check_pairwise_ub, check_unbounded_beliefs, check_universal_dub,
    implication_audit, ProbePlan, Verdict,
};
use crate::dynamics::{detect_stationary, simulate_run, stationary_scan};
use crate::error::{Error, Result};
use crate::model::{adequate_knowledge, Belief, StateSpace, TIE_TOL};
use crate::numeric::derive_seed;
use crate::signal::SignalModel;

use super::artifacts::{atomic_write, write_json};
use super::figures;
use super::monte_carlo::{monte_carlo, MonteCarloSpec};
use super::setups;

/// Registry entry metadata.
pub struct ScenarioInfo {
    pub id: &'static str,
    pub name: &'static str,
    pub expectation: &'static str,
}

pub const SCENARIOS: [ScenarioInfo; 8] = [
    ScenarioInfo {
        id: "g1",
        name: "thm1_sufficiency",
        expectation: "no stationary belief lacks adequate knowledge on any face; correct-action frequency rises from horizon 100 to 4000 with separated confidence intervals",
    },
    ScenarioInfo {
        id: "g2",
        name: "thm1_3_laplace",
        expectation: "the computed prior is stationary without adequate knowledge; every seeded run cascades at step 1",
    },
    ScenarioInfo {
        id: "g3",
        name: "prop1_nonscd",
        expectation: "the computed low-middle-mass prior is stationary without adequate knowledge; every seeded run cascades at step 1",
    },
    ScenarioInfo {
        id: "g4",
        name: "prop2_fullsupport",
        expectation: "wrong herds in state 2 occur with strictly positive frequency (Wilson lower bound > 0)",
    },
    ScenarioInfo {
        id: "g5",
        name: "safe_action",
        expectation: "the double-geometric prior is stationary on the truncated window and lacks adequate knowledge",
    },
    ScenarioInfo {
        id: "g6",
        name: "appendixB_mixture",
        expectation: "every fixed lower state's ratio against state 0 falls below 1e-8 while the prior-weighted lower-set ratio exceeds 1e8",
    },
    ScenarioInfo {
        id: "g7",
        name: "fig6_lattice",
        expectation: "the separating posterior structures reproduce their caption verdicts and the implication audit is consistent on all of them",
    },
    ScenarioInfo {
        id: "g8",
        name: "fig_geometry",
        expectation: "posterior curves approach the extreme-state vertices tangentially; the triangle sequence accumulates at the edge midpoints",
    },
];

pub fn gallery_names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|s| s.name).collect()
}

fn resolve(name: &str) -> Result<&'static ScenarioInfo> {
    SCENARIOS
        .iter()
        .find(|s| s.id == name || s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

#[derive(Debug)]
pub struct GalleryReport {
    pub name: &'static str,
    pub passed: bool,
    pub details: Value,
    pub artifacts: Vec<PathBuf>,
}

/// Runs one scenario, checks its expectation, and (with an output
/// directory) writes the report and any CSV artifacts.
pub fn run_gallery(name: &str, out_dir: Option<&Path>, master_seed: u64) -> Result<GalleryReport> {
    let info = resolve(name)?;
    let (passed, mut details, artifacts) = match info.id {
        "g1" => g1_thm1_sufficiency(master_seed)?,
        "g2" => g2_thm1_3_laplace(out_dir, master_seed)?,
        "g3" => g3_prop1_nonscd(out_dir, master_seed)?,
        "g4" => g4_prop2_fullsupport(master_seed)?,
        "g5" => g5_safe_action()?,
        "g6" => g6_appendix_b_mixture()?,
        "g7" => g7_fig6_lattice()?,
        "g8" => g8_fig_geometry(out_dir)?,
        _ => unreachable!(),
    };
    details["scenario"] = json!(info.name);
    details["expectation"] = json!(info.expectation);
    details["passed"] = json!(passed);
    details["master_seed"] = json!(master_seed);

    let mut artifacts = artifacts;
    if let Some(dir) = out_dir {
        let path = dir.join(format!("{}_report.json", info.name));
        write_json(&path, &details)?;
        artifacts.push(path);
    }
    Ok(GalleryReport {
        name: info.name,
        passed,
        details,
        artifacts,
    })
}

fn g1_thm1_sufficiency(master_seed: u64) -> Result<(bool, Value, Vec<PathBuf>)> {
    let p = setups::thm1_sufficiency()?;
    let plan = ProbePlan::default();

    // every nonempty support face of the 3-simplex
    let faces: Vec<Vec<usize>> = vec![
        vec![0], vec![1], vec![2],
        vec![0, 1], vec![0, 2], vec![1, 2],
        vec![0, 1, 2],
    ];
    let mut face_reports = Vec::new();
    let mut total_hits = 0usize;
    for face in &faces {
        let scan = stationary_scan(&p.u, &p.model, face, 0.02, &plan)?;
        total_hits += scan.hits.len();
        face_reports.push(json!({
            "face": face.iter().map(|&i| p.space.state(i)).collect::<Vec<_>>(),
            "examined": scan.examined,
            "hits": scan.hits.len(),
        }));
    }

    let rows = monte_carlo(&MonteCarloSpec {
        u: &p.u,
        model: &p.model,
        prior: &p.prior,
        forced_state: None,
        horizons: vec![100, 4000],
        n_runs: 1000,
        master_seed,
    })?;
    let trend_ok = rows[1].correct_action_freq > rows[0].correct_action_freq
        && rows[1].correct_ci.0 > rows[0].correct_ci.1;

    let passed = total_hits == 0 && trend_ok;
    Ok((
        passed,
        json!({
            "stationary_scan": { "faces": face_reports, "total_hits": total_hits },
            "monte_carlo": rows,
        }),
        Vec::new(),
    ))
}

fn cascade_scenario(
    p: &setups::Primitives,
    out_dir: Option<&Path>,
    master_seed: u64,
    csv_stem: &str,
) -> Result<(bool, Value, Vec<PathBuf>)> {
    let plan = ProbePlan::default();
    let stat = detect_stationary(&p.u, &p.prior, &p.model, &plan)?;
    let adq = adequate_knowledge(&p.u, &p.prior, TIE_TOL)?;

    let n_seeds = 200u64;
    let mut immediate = 0u64;
    let mut inadequate_final = 0u64;
    let mut artifacts = Vec::new();
    for i in 0..n_seeds {
        let t = simulate_run(&p.u, &p.model, &p.prior, 200, derive_seed(master_seed, i))?;
        if t.cascade_at == Some(1) {
            immediate += 1;
        }
        if !adequate_knowledge(&p.u, &t.final_belief, TIE_TOL)?.holds {
            inadequate_final += 1;
        }
        if i == 0 {
            if let Some(dir) = out_dir {
                let mut buf = Vec::new();
                t.write_csv(&mut buf, p.u.actions(), p.space.states())?;
                let path = dir.join(format!("{csv_stem}_seed0.csv"));
                atomic_write(&path, &buf)?;
                artifacts.push(path);
            }
        }
    }

    let passed = stat.verdict == Verdict::Holds
        && !adq.holds
        && immediate == n_seeds
        && inadequate_final == n_seeds;
    Ok((
        passed,
        json!({
            "computed": p.computed,
            "stationary": stat,
            "prior_adequate_knowledge": adq.holds,
            "runs": n_seeds,
            "cascade_at_1_frequency": immediate as f64 / n_seeds as f64,
            "inadequate_final_frequency": inadequate_final as f64 / n_seeds as f64,
        }),
        artifacts,
    ))
}

fn g2_thm1_3_laplace(out_dir: Option<&Path>, master_seed: u64) -> Result<(bool, Value, Vec<PathBuf>)> {
    let p = setups::thm1_3_laplace()?;
    cascade_scenario(&p, out_dir, master_seed, "thm1_3_laplace")
}

fn g3_prop1_nonscd(out_dir: Option<&Path>, master_seed: u64) -> Result<(bool, Value, Vec<PathBuf>)> {
    let p = setups::prop1_nonscd()?;
    cascade_scenario(&p, out_dir, master_seed, "prop1_nonscd")
}

fn g4_prop2_fullsupport(master_seed: u64) -> Result<(bool, Value, Vec<PathBuf>)> {
    let p = setups::prop2_fullsupport()?;
    let omega_star_idx = 1; // state 2

    // the pinned demonstration prior, plus extra full-support samples
    let priors = vec![
        ("uniform", p.prior.clone()),
        ("low_tilted", Belief::from_weights(&p.space, &[0.5, 0.3, 0.2])?),
        ("high_tilted", Belief::from_weights(&p.space, &[0.2, 0.3, 0.5])?),
    ];
    let mut rows_out = Vec::new();
    let mut passed = false;
    for (label, prior) in &priors {
        let rows = monte_carlo(&MonteCarloSpec {
            u: &p.u,
            model: &p.model,
            prior,
            forced_state: Some(omega_star_idx),
            horizons: vec![2000],
            n_runs: 2000,
            master_seed,
        })?;
        if *label == "uniform" {
            passed = rows[0].wrong_herd_ci.0 > 0.0;
        }
        rows_out.push(json!({ "prior": label, "rows": rows }));
    }
    Ok((
        passed,
        json!({ "computed": p.computed, "monte_carlo": rows_out }),
        Vec::new(),
    ))
}

fn g5_safe_action() -> Result<(bool, Value, Vec<PathBuf>)> {
    let p = setups::safe_action(20, 0.01, 0.5)?;
    let mut plan = ProbePlan::default();
    plan.include_tails = false; // expectation is scoped to the truncated window
    let stat = detect_stationary(&p.u, &p.prior, &p.model, &plan)?;
    let adq = adequate_knowledge(&p.u, &p.prior, TIE_TOL)?;
    let passed = stat.verdict == Verdict::Holds && !adq.holds;
    Ok((
        passed,
        json!({
            "computed": p.computed,
            "stationary": stat,
            "prior_adequate_knowledge": adq.holds,
            "note": "verdict is truncated-domain: beyond the window the edge states absorb extreme signals",
        }),
        Vec::new(),
    ))
}

fn g6_appendix_b_mixture() -> Result<(bool, Value, Vec<PathBuf>)> {
    let p = setups::appendix_b_mixture(50, 0.5)?;
    let fam = match &p.model {
        SignalModel::MixtureAtom(m) => m,
        _ => unreachable!(),
    };
    let zero_idx = p.space.index_of(0).unwrap();
    let m = 50i64;

    // pointwise: each fixed lower state's ratio dips below 1e-8 along
    // rising signals, stepping around that state's own atom
    let mut worst_pointwise = f64::NEG_INFINITY;
    for w in 0..p.space.len() {
        if w == zero_idx {
            continue;
        }
        let atom_signal = -p.space.state(w);
        let mut best = f64::INFINITY;
        for s in 1..=m {
            if s == atom_signal {
                continue;
            }
            best = best.min(fam.log_mass(s, w) - fam.log_mass(s, zero_idx));
        }
        worst_pointwise = worst_pointwise.max(best);
    }

    // prior-weighted lower-set ratio under μ(ω) ∝ e^ω explodes
    let mut best_weighted = f64::NEG_INFINITY;
    for s in 1..=m {
        let terms: Vec<f64> = (0..p.space.len())
            .filter(|&w| w != zero_idx)
            .map(|w| p.prior.mass(w).ln() + fam.log_mass(s, w))
            .collect();
        let num = crate::numeric::log_sum_exp(&terms);
        let den = p.prior.mass(zero_idx).ln() + fam.log_mass(s, zero_idx);
        best_weighted = best_weighted.max(num - den);
    }

    let pointwise_ok = worst_pointwise < (1e-8f64).ln();
    let weighted_ok = best_weighted > (1e8f64).ln();
    Ok((
        pointwise_ok && weighted_ok,
        json!({
            "computed": p.computed,
            "worst_pointwise_log_ratio": worst_pointwise,
            "max_weighted_log_ratio": best_weighted,
            "domain": "truncated",
        }),
        Vec::new(),
    ))
}

fn g7_fig6_lattice() -> Result<(bool, Value, Vec<PathBuf>)> {
    let sp = StateSpace::new(vec![1, 2, 3])?;
    let prior = Belief::uniform(&sp);
    let plan = ProbePlan::default();

    let entries: Vec<(&str, SignalModel, [Verdict; 4])> = vec![
        (
            "fig6a",
            SignalModel::Posteriors(figures::fig6a_structure(&prior)?),
            [Verdict::Holds, Verdict::Fails, Verdict::Holds, Verdict::Holds],
        ),
        (
            "fig6b",
            SignalModel::Posteriors(figures::fig6b_structure(&prior)?),
            [Verdict::Holds, Verdict::Holds, Verdict::Holds, Verdict::Holds],
        ),
        (
            "fig6c",
            SignalModel::Posteriors(figures::fig6c_structure(&prior)?),
            [Verdict::Fails, Verdict::Fails, Verdict::Holds, Verdict::Holds],
        ),
        (
            "normal",
            SignalModel::Location(crate::signal::LocationFamily::normal(&sp, 1.0)?),
            [Verdict::Fails, Verdict::Holds, Verdict::Holds, Verdict::Holds],
        ),
    ];

    let mut table = Vec::new();
    let mut passed = true;
    for (label, model, expected) in &entries {
        let got = [
            check_unbounded_beliefs(model, &plan)?.verdict,
            check_universal_dub(model, &plan)?.verdict,
            check_dub(model, &plan)?.verdict,
            check_pairwise_ub(model, &plan)?.verdict,
        ];
        let audit = implication_audit(model, &plan)?;
        let mlrp = match check_mlrp(model) {
            Ok(r) => json!(r.verdict),
            Err(_) => json!("unordered"),
        };
        let row_ok = got == *expected && audit.verdict == Verdict::Holds;
        passed &= row_ok;
        table.push(json!({
            "structure": label,
            "unbounded": got[0],
            "universal_dub": got[1],
            "dub": got[2],
            "pairwise": got[3],
            "mlrp": mlrp,
            "audit": audit.verdict,
            "matches_caption": row_ok,
        }));
    }
    Ok((passed, json!({ "verdict_table": table }), Vec::new()))
}

fn g8_fig_geometry(out_dir: Option<&Path>) -> Result<(bool, Value, Vec<PathBuf>)> {
    let sp = StateSpace::new(vec![1, 2, 3])?;
    let prior = Belief::uniform(&sp);
    let mut artifacts = Vec::new();

    // the normal-information posterior curve: dense signal sweep for
    // plotting, endpoints checked for vertex tangency
    let fam = crate::signal::LocationFamily::normal(&sp, 1.0)?;
    let model = SignalModel::Location(fam);
    let mut curve = String::from("s,mass_1,mass_2,mass_3\n");
    let mut tangency_ok = true;
    let (lo, hi) = (-14.0, 18.0);
    let n = 641;
    for i in 0..n {
        let s = lo + (hi - lo) * i as f64 / (n as f64 - 1.0);
        let post = model.bayes_update(&prior, s)?;
        let _ = writeln!(
            curve,
            "{s:.16e},{:.16e},{:.16e},{:.16e}",
            post.mass(0),
            post.mass(1),
            post.mass(2)
        );
        if i == 0 {
            // approaching vertex 1, the curve hugs the 1–2 edge
            tangency_ok &= post.mass(0) > 0.999 && post.mass(2) / post.mass(1) < 1e-3;
        }
        if i == n - 1 {
            tangency_ok &= post.mass(2) > 0.999 && post.mass(0) / post.mass(1) < 1e-3;
        }
    }

    // the midpoint-triangle structure: entry index and coordinates
    let tri = figures::triangle_structure(&prior)?;
    let mut tri_csv = String::from("entry,mass_1,mass_2,mass_3\n");
    for (i, (_, nu)) in tri.entries().iter().enumerate() {
        let _ = writeln!(
            tri_csv,
            "{},{:.16e},{:.16e},{:.16e}",
            i + 1,
            nu.mass(0),
            nu.mass(1),
            nu.mass(2)
        );
    }
    // deepest entries sit within 1e-6 of the three edge midpoints
    let n_entries = tri.entries().len();
    let deepest = &tri.entries()[n_entries - 3..];
    let targets = [[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]];
    let mut triangle_ok = true;
    for (entry, target) in deepest.iter().zip(&targets) {
        for w in 0..3 {
            triangle_ok &= (entry.1.mass(w) - target[w]).abs() < 1e-6;
        }
    }

    if let Some(dir) = out_dir {
        let p1 = dir.join("fig_normal_curve.csv");
        atomic_write(&p1, curve.as_bytes())?;
        artifacts.push(p1);
        let p2 = dir.join("fig3_triangle.csv");
        atomic_write(&p2, tri_csv.as_bytes())?;
        artifacts.push(p2);
    }

    Ok((
        tangency_ok && triangle_ok,
        json!({
            "curve_points": n,
            "tangency_at_vertices": tangency_ok,
            "triangle_accumulation": triangle_ok,
        }),
        artifacts,
    ))
}
