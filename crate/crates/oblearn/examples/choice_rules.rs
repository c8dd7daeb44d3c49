//! The core vocabulary: ordered state windows, beliefs with exact-zero
//! support, utility tables, the choice correspondence, and adequate
//! knowledge.
//!
//! ```bash
//! cargo run -p oblearn --example choice_rules
//! ```

use oblearn::{adequate_knowledge, choice_set, expected_difference, Belief, StateSpace, UtilityTable, TIE_TOL};

fn main() -> oblearn::Result<()> {
    let space = StateSpace::new(vec![1, 2, 3])?;
    let u = UtilityTable::quadratic_loss(&space);

    println!("quadratic loss on Ω = A = {{1,2,3}}");
    for (label, weights) in [
        ("point mass on 2", vec![0.0, 1.0, 0.0]),
        ("uniform on {1,3}", vec![1.0, 0.0, 1.0]),
        ("uniform on {1,2,3}", vec![1.0, 1.0, 1.0]),
    ] {
        let mu = Belief::from_weights(&space, &weights)?;
        let cs = choice_set(&u, &mu, TIE_TOL)?;
        let eus: Vec<f64> = (0..u.action_count()).map(|a| u.expected_utility(a, &mu)).collect();
        println!("  {label:<20} EUs {eus:>7.3?} -> optimal {:?}", pick(&u, &cs));
    }

    println!("\nadequate knowledge (an action optimal at every supported state):");
    for (label, weights) in [
        ("δ_2", vec![0.0, 1.0, 0.0]),
        ("uniform on {1,2,3}", vec![1.0, 1.0, 1.0]),
    ] {
        let mu = Belief::from_weights(&space, &weights)?;
        let adq = adequate_knowledge(&u, &mu, TIE_TOL)?;
        match adq.witness {
            Some(a) => println!("  {label:<20} holds, witness {}", u.action_label(a)),
            None => println!("  {label:<20} fails (per-state optima are disjoint)"),
        }
    }

    // a dominant action grants adequate knowledge on any support
    let dom = UtilityTable::from_difference(&space, "safe", "risky", &[-1.0, -1.0, -1.0])?;
    let mu = Belief::from_weights(&space, &[0.0, 1.0, 1.0])?;
    let adq = adequate_knowledge(&dom, &mu, TIE_TOL)?;
    println!("\ndominant-action table on support {{2,3}}: holds = {}", adq.holds);

    let d = expected_difference(&dom, 0, 1, &mu)?;
    println!("expected difference safe − risky under that belief: {d}");
    Ok(())
}

fn pick(u: &UtilityTable, cs: &[usize]) -> Vec<String> {
    cs.iter().map(|&a| u.action_label(a).to_string()).collect()
}
