//! Posterior geometry on the three-state simplex: the normal-information
//! curve and the separating posterior-sequence structures, with CSV
//! emission for external plotting.
//!
//! ```bash
//! cargo run -p oblearn --example posterior_geometry
//! ```

use oblearn::conditions::{
    check_dub, check_pairwise_ub, check_unbounded_beliefs, check_universal_dub, ProbePlan,
};
use oblearn::experiments::figures;
use oblearn::experiments::run_gallery;
use oblearn::{Belief, SignalModel, StateSpace};

fn main() -> oblearn::Result<()> {
    let space = StateSpace::new(vec![1, 2, 3])?;
    let prior = Belief::uniform(&space);
    let plan = ProbePlan::default();

    println!("separating structures and their lattice verdicts:\n");
    let structures = vec![
        ("fig6a: rays to all vertices", SignalModel::Posteriors(figures::fig6a_structure(&prior)?)),
        ("fig6b: tangential approaches", SignalModel::Posteriors(figures::fig6b_structure(&prior)?)),
        ("fig6c: two vertices, two edges", SignalModel::Posteriors(figures::fig6c_structure(&prior)?)),
        ("fig3: edge-midpoint triangle", SignalModel::Posteriors(figures::triangle_structure(&prior)?)),
    ];
    println!("{:<32} {:>8} {:>8} {:>8} {:>8}", "structure", "UB", "uDUB", "DUB", "pairUB");
    for (label, model) in &structures {
        println!(
            "{label:<32} {:>8} {:>8} {:>8} {:>8}",
            format!("{:?}", check_unbounded_beliefs(model, &plan)?.verdict),
            format!("{:?}", check_universal_dub(model, &plan)?.verdict),
            format!("{:?}", check_dub(model, &plan)?.verdict),
            format!("{:?}", check_pairwise_ub(model, &plan)?.verdict),
        );
    }

    // the geometry scenario writes the plot-ready CSVs
    let out = std::path::Path::new("out");
    let report = run_gallery("fig_geometry", Some(out), 0)?;
    println!("\ngeometry artifacts ({}):", if report.passed { "checks hold" } else { "CHECKS FAILED" });
    for a in &report.artifacts {
        println!("  {}", a.display());
    }
    println!("\ncolumns are barycentric masses; plot mass_1/mass_2/mass_3 on the simplex");
    Ok(())
}
