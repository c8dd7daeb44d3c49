//! Simulating the sequential game, including an engineered information
//! cascade: the Laplace threshold construction whose prior is stationary
//! without adequate knowledge, so every run herds immediately on the
//! wrong action in the top state.
//!
//! ```bash
//! cargo run -p oblearn --example cascade_simulation
//! ```

use oblearn::conditions::ProbePlan;
use oblearn::dynamics::{detect_stationary, simulate_run};
use oblearn::experiments::setups;
use oblearn::model::{adequate_knowledge, TIE_TOL};
use oblearn::{Belief, LocationFamily, SignalModel, StateSpace, UtilityTable};

fn main() -> oblearn::Result<()> {
    // a healthy benchmark first: quadratic loss + normal signals learn
    let space = StateSpace::new(vec![1, 2, 3])?;
    let u = UtilityTable::quadratic_loss(&space);
    let model = SignalModel::Location(LocationFamily::normal(&space, 1.0)?);
    let prior = Belief::uniform(&space);
    let t = simulate_run(&u, &model, &prior, 400, 12)?;
    println!(
        "learning run: true state {}, {} steps, final belief {:?}",
        space.state(t.true_state),
        t.steps.len(),
        t.final_belief.masses().iter().map(|m| (m * 1e4).round() / 1e4).collect::<Vec<_>>()
    );
    println!("  cascade_at {:?}, herd_at {:?} (no cascade under normal information)\n", t.cascade_at, t.herd_at);

    // the engineered cascade
    let p = setups::thm1_3_laplace()?;
    println!("laplace threshold construction: computed values {}", p.computed);
    let stat = detect_stationary(&p.u, &p.prior, &p.model, &ProbePlan::default())?;
    let adq = adequate_knowledge(&p.u, &p.prior, TIE_TOL)?;
    println!("  prior stationary: {:?}; adequate knowledge: {}", stat.verdict, adq.holds);

    let mut wrong_in_top_state = 0;
    for seed in 0..20u64 {
        let t = simulate_run(&p.u, &p.model, &p.prior, 300, seed)?;
        assert_eq!(t.cascade_at, Some(1));
        if t.true_state == 2 {
            wrong_in_top_state += 1;
        }
        if seed < 3 {
            println!(
                "  seed {seed}: true state {}, action column constant at {:?}, stopped after {} steps",
                p.space.state(t.true_state),
                p.u.action_label(t.steps[0].action),
                t.steps.len(),
            );
        }
    }
    println!("  20/20 runs cascade at step 1; {wrong_in_top_state} of them had true state 2, where a' is wrong");

    // trajectory CSV for the first seed
    let t = simulate_run(&p.u, &p.model, &p.prior, 300, 0)?;
    let mut buf = Vec::new();
    t.write_csv(&mut buf, p.u.actions(), p.space.states())?;
    std::fs::create_dir_all("out")?;
    std::fs::write("out/cascade_seed0.csv", &buf)?;
    println!("  wrote out/cascade_seed0.csv");
    Ok(())
}
