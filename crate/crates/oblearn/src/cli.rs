//! Command-line front door: JSON config ingestion, subcommand dispatch,
//! artifact emission.
//!
//! Exit codes are a stable contract: 0 success, 1 expectation violation,
//! 2 usage or validation error.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use crate::conditions::{
    check_dub, check_mlrp, check_pairwise_ub, check_pidd, check_scd, check_unbounded_beliefs,
    check_universal_dub, default_prior_sample, implication_audit, CheckReport, ProbePlan, Verdict,
};
use crate::dynamics::{simulate_run, stationary_scan};
use crate::error::{Error, Result};
use crate::experiments::artifacts::{atomic_write, write_json};
use crate::experiments::{run_gallery, SCENARIOS};
use crate::model::{Belief, StateSpace, UtilityTable};
use crate::numeric::derive_seed;
use crate::signal::{
    from_posteriors, FiniteMatrix, LocationFamily, MixtureAtomFamily, SignalModel,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EXPECTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

// ---------------------------------------------------------------------------
// config schema
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelDescriptor {
    /// Row-major by signal: `matrix[s][ω]`.
    Finite {
        states: Vec<i64>,
        signals: Vec<f64>,
        matrix: Vec<Vec<f64>>,
    },
    Location {
        family: String,
        #[serde(default)]
        params: LocationParams,
        state_window: [i64; 2],
        #[serde(default)]
        truncated_mass: Option<f64>,
    },
    PosteriorSequence {
        prior: Vec<f64>,
        entries: Vec<PosteriorEntry>,
        /// State labels; defaults to 1..=n.
        #[serde(default)]
        states: Option<Vec<i64>>,
    },
    MixtureAtom {
        lambda: f64,
        state_window: [i64; 2],
        #[serde(default)]
        truncated_mass: Option<f64>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocationParams {
    pub sigma: Option<f64>,
    pub scale: Option<f64>,
    pub df: Option<f64>,
    /// Exponent of the generalized-exponential custom density
    /// g(s) ∝ exp(−|s|^power).
    pub power: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosteriorEntry {
    pub q: f64,
    pub nu: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilityDescriptor {
    pub actions: Vec<String>,
    /// Indexed `[action][state]`.
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOptions {
    pub horizon: Option<usize>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub grid_step: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub probe_max_exponent: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelDescriptor,
    pub utility: Option<UtilityDescriptor>,
    pub prior: Option<Vec<f64>>,
    #[serde(default)]
    pub options: ConfigOptions,
}

pub struct BuiltConfig {
    pub space: Arc<StateSpace>,
    pub model: SignalModel,
    pub utility: Option<UtilityTable>,
    pub prior: Belief,
    pub options: ConfigOptions,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }

    pub fn build(self) -> Result<BuiltConfig> {
        let (space, model) = build_model(self.model)?;
        let utility = match self.utility {
            Some(d) => Some(UtilityTable::new(&space, d.actions, d.matrix)?),
            None => None,
        };
        let prior = match self.prior {
            Some(w) => Belief::from_weights(&space, &w)?,
            None => match &model {
                SignalModel::Posteriors(m) => m.prior().clone(),
                _ => Belief::uniform(&space),
            },
        };
        Ok(BuiltConfig {
            space,
            model,
            utility,
            prior,
            options: self.options,
        })
    }
}

fn build_model(desc: ModelDescriptor) -> Result<(Arc<StateSpace>, SignalModel)> {
    match desc {
        ModelDescriptor::Finite { states, signals, matrix } => {
            let space = StateSpace::new(states)?;
            let m = FiniteMatrix::new(&space, signals, matrix)?;
            Ok((space, SignalModel::Finite(m)))
        }
        ModelDescriptor::Location { family, params, state_window, truncated_mass } => {
            let space = match truncated_mass {
                Some(t) => StateSpace::truncated((state_window[0]..=state_window[1]).collect(), t)?,
                None => StateSpace::window(state_window[0], state_window[1])?,
            };
            let fam = match family.as_str() {
                "normal" => LocationFamily::normal(&space, params.sigma.unwrap_or(1.0))?,
                "laplace" => LocationFamily::laplace(&space, params.scale.unwrap_or(1.0))?,
                "student_t" => LocationFamily::student_t(
                    &space,
                    params.df.unwrap_or(5.0),
                    params.scale.unwrap_or(1.0),
                )?,
                "custom" => {
                    let power = params.power.ok_or_else(|| {
                        Error::InvalidConfig("custom family needs params.power".into())
                    })?;
                    LocationFamily::generalized_exponential(&space, power)?
                }
                other => {
                    return Err(Error::InvalidConfig(format!("unknown location family {other:?}")))
                }
            };
            Ok((space, SignalModel::Location(fam)))
        }
        ModelDescriptor::PosteriorSequence { prior, entries, states } => {
            let labels = states.unwrap_or_else(|| (1..=prior.len() as i64).collect());
            let space = StateSpace::new(labels)?;
            let prior = Belief::from_weights(&space, &prior)?;
            let entries: Vec<(f64, Belief)> = entries
                .into_iter()
                .map(|e| Ok((e.q, Belief::from_weights(&space, &e.nu)?)))
                .collect::<Result<_>>()?;
            let m = from_posteriors(&prior, &entries)?;
            Ok((space, SignalModel::Posteriors(m)))
        }
        ModelDescriptor::MixtureAtom { lambda, state_window, truncated_mass } => {
            let space = match truncated_mass {
                Some(t) => StateSpace::truncated((state_window[0]..=state_window[1]).collect(), t)?,
                None => StateSpace::window(state_window[0], state_window[1])?,
            };
            let m = MixtureAtomFamily::new(&space, lambda)?;
            Ok((space, SignalModel::MixtureAtom(m)))
        }
    }
}

// ---------------------------------------------------------------------------
// command line
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "oblearn",
    about = "Sequential observational-learning laboratory: condition checks, simulation, stationarity scans, and the experiment gallery"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Parser)]
pub struct CommonArgs {
    /// JSON config with model, utility, prior, and options.
    #[arg(long)]
    pub config: PathBuf,
    /// Master seed; stream seeds derive from it by counter.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Output directory for reports and CSVs.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every condition checker and the implication audit.
    Check(CommonArgs),
    /// Simulate seeded runs; one trajectory CSV per seed.
    Simulate(CommonArgs),
    /// Scan simplex faces for stationary beliefs without adequate knowledge.
    Scan(CommonArgs),
    /// Run a gallery scenario by name (no name lists the registry).
    Experiment {
        name: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List the gallery registry.
    GalleryList,
}

/// Entry point for the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Experiment { name, seed, out, jobs } => cmd_experiment(name, seed, out, jobs),
        Command::GalleryList => {
            print_registry();
            Ok(EXIT_OK)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn init_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn out_dir(args_out: &Option<PathBuf>, cfg_out: &Option<PathBuf>) -> PathBuf {
    args_out
        .clone()
        .or_else(|| cfg_out.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn print_registry() {
    println!("{:<4} {:<20} expectation", "id", "name");
    for s in &SCENARIOS {
        println!("{:<4} {:<20} {}", s.id, s.name, s.expectation);
    }
}

pub fn cmd_check(args: CommonArgs) -> Result<i32> {
    init_jobs(args.jobs);
    let built = RunConfig::load(&args.config)?.build()?;
    let mut plan = ProbePlan::default();
    if let Some(k) = built.options.probe_max_exponent {
        plan.max_exponent = k;
    }
    let seed = args.seed.or(built.options.seed).unwrap_or(0);

    let mut reports: Vec<CheckReport> = Vec::new();
    if let Some(u) = &built.utility {
        reports.push(check_scd(u));
    }
    match check_mlrp(&built.model) {
        Ok(r) => reports.push(r),
        Err(Error::Unsupported(msg)) => reports.push(CheckReport::new(
            "mlrp",
            Verdict::Inconclusive,
            json!({ "unsupported": msg }),
        )),
        Err(e) => return Err(e),
    }
    reports.push(check_dub(&built.model, &plan)?);
    reports.push(check_universal_dub(&built.model, &plan)?);
    reports.push(check_pairwise_ub(&built.model, &plan)?);
    reports.push(check_unbounded_beliefs(&built.model, &plan)?);
    let priors = default_prior_sample(&built.space, derive_seed(seed, 1), 8);
    reports.push(check_pidd(&built.model, &priors, &plan)?);
    let audit = implication_audit(&built.model, &plan)?;

    for r in reports.iter().chain(std::iter::once(&audit)) {
        println!("{:<28} {:?}", r.condition, r.verdict);
    }

    let dir = out_dir(&args.out, &built.options.out);
    let all: Vec<serde_json::Value> = reports
        .iter()
        .chain(std::iter::once(&audit))
        .map(|r| serde_json::to_value(r).unwrap())
        .collect();
    write_json(&dir.join("checks.json"), &json!(all))?;
    println!("reports written to {}", dir.join("checks.json").display());

    Ok(if audit.verdict == Verdict::Holds { EXIT_OK } else { EXIT_EXPECTATION })
}

pub fn cmd_simulate(args: CommonArgs) -> Result<i32> {
    init_jobs(args.jobs);
    let built = RunConfig::load(&args.config)?.build()?;
    let u = built
        .utility
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("simulate needs a utility table".into()))?;
    let horizon = args.horizon.or(built.options.horizon).unwrap_or(5000);
    if horizon == 0 {
        return Err(Error::InvalidConfig("horizon must be at least 1".into()));
    }
    let runs = args.runs.or(built.options.runs).unwrap_or(1);
    let seed = args.seed.or(built.options.seed).unwrap_or(0);
    let dir = out_dir(&args.out, &built.options.out);

    for i in 0..runs as u64 {
        let t = simulate_run(u, &built.model, &built.prior, horizon, derive_seed(seed, i))?;
        let mut buf = Vec::new();
        t.write_csv(&mut buf, u.actions(), built.space.states())?;
        let path = dir.join(format!("trajectory_seed{i}.csv"));
        atomic_write(&path, &buf)?;
        println!(
            "seed {i}: true state {}, {} steps, cascade_at {:?}, herd_at {:?} -> {}",
            built.space.state(t.true_state),
            t.steps.len(),
            t.cascade_at,
            t.herd_at,
            path.display()
        );
    }
    Ok(EXIT_OK)
}

pub fn cmd_scan(args: CommonArgs) -> Result<i32> {
    init_jobs(args.jobs);
    let built = RunConfig::load(&args.config)?.build()?;
    let u = built
        .utility
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("scan needs a utility table".into()))?;
    let grid_step = args.grid_step.or(built.options.grid_step).unwrap_or(0.02);
    let plan = ProbePlan::default();

    // all nonempty faces for small spaces; the full face otherwise
    let n = built.space.len();
    let faces: Vec<Vec<usize>> = if n <= 4 {
        (1..(1usize << n))
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    } else {
        vec![(0..n).collect()]
    };

    let mut face_reports = Vec::new();
    let mut total_hits = 0usize;
    for face in &faces {
        let scan = stationary_scan(u, &built.model, face, grid_step, &plan)?;
        total_hits += scan.hits.len();
        println!(
            "face {:?}: examined {}, hits {}",
            face.iter().map(|&i| built.space.state(i)).collect::<Vec<_>>(),
            scan.examined,
            scan.hits.len()
        );
        face_reports.push(json!({
            "face": face.iter().map(|&i| built.space.state(i)).collect::<Vec<_>>(),
            "examined": scan.examined,
            "hits": scan.hits,
        }));
    }

    let dir = out_dir(&args.out, &built.options.out);
    write_json(
        &dir.join("scan.json"),
        &json!({ "grid_step": grid_step, "total_hits": total_hits, "faces": face_reports }),
    )?;
    println!("total hits: {total_hits} -> {}", dir.join("scan.json").display());
    Ok(EXIT_OK)
}

pub fn cmd_experiment(
    name: Option<String>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    jobs: Option<usize>,
) -> Result<i32> {
    init_jobs(jobs);
    let name = match name {
        None => {
            print_registry();
            return Ok(EXIT_OK);
        }
        Some(n) if n.is_empty() => {
            print_registry();
            return Ok(EXIT_OK);
        }
        Some(n) => n,
    };
    let dir = out.unwrap_or_else(|| PathBuf::from("out"));
    let report = run_gallery(&name, Some(&dir), seed.unwrap_or(0))?;
    println!(
        "{}: {}",
        report.name,
        if report.passed { "expectation holds" } else { "EXPECTATION VIOLATED" }
    );
    for a in &report.artifacts {
        println!("  wrote {}", a.display());
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_EXPECTATION })
}
