//! The three signal backends and log-domain Bayes updating: finite
//! matrices, location families, and Bayes-plausible posterior sequences.
//!
//! ```bash
//! cargo run -p oblearn --example bayes_updating
//! ```

use oblearn::{from_posteriors, Belief, FiniteMatrix, LocationFamily, SignalModel, StateSpace};

fn main() -> oblearn::Result<()> {
    let space = StateSpace::new(vec![1, 2, 3])?;
    let uniform = Belief::uniform(&space);

    // finite matrix, row-major by signal
    let finite = SignalModel::Finite(FiniteMatrix::new(
        &space,
        vec![-1.0, 0.0, 1.0],
        vec![
            vec![0.6, 0.3, 0.1],
            vec![0.3, 0.4, 0.3],
            vec![0.1, 0.3, 0.6],
        ],
    )?);
    println!("finite backend, signal +1 from uniform:");
    println!("  posterior {:?}", finite.bayes_update(&uniform, 1.0)?.masses());

    // normal location family: deep-tail signals stay well-posed because
    // everything runs through log-sum-exp
    let normal = SignalModel::Location(LocationFamily::normal(&space, 1.0)?);
    for s in [1.5, 4.0, 60.0] {
        let post = normal.bayes_update(&uniform, s)?;
        println!("normal backend, s = {s:>5}: posterior {:?}", post.masses());
    }

    // posterior-sequence backend: declare the posteriors, get the signal
    // structure inducing them (residual computed from the balance equation)
    let nu = Belief::from_weights(&space, &[0.6, 0.25, 0.15])?;
    let seq = from_posteriors(&uniform, &[(0.3, nu)])?;
    let (q_res, res) = seq.residual();
    println!("posterior sequence: residual signal carries q = {q_res:.3}, ν = {:?}", res.masses());
    let model = SignalModel::Posteriors(seq);
    println!("  updating with signal 1 reproduces the declared posterior: {:?}",
        model.bayes_update(&uniform, 1.0)?.masses());

    // the change-of-prior identity: posterior odds factor through prior odds
    let skewed = Belief::from_weights(&space, &[0.7, 0.2, 0.1])?;
    let s = 2.3;
    let (a, b) = (normal.bayes_update(&uniform, s)?, normal.bayes_update(&skewed, s)?);
    let lhs = b.mass(0) / b.mass(2);
    let rhs = (a.mass(0) / a.mass(2)) * (skewed.mass(0) / skewed.mass(2))
        / (uniform.mass(0) / uniform.mass(2));
    println!("change-of-prior identity at s = {s}: {lhs:.12} = {rhs:.12}");
    Ok(())
}
