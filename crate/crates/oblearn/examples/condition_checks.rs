//! The condition checkers across signal families: MLRP, the
//! unbounded-beliefs lattice (unbounded / universal DUB / DUB /
//! pairwise), tail classification, and the implication audit.
//!
//! ```bash
//! cargo run -p oblearn --example condition_checks
//! ```

use oblearn::conditions::{
    check_dub, check_mlrp, check_pairwise_ub, check_unbounded_beliefs, check_universal_dub,
    implication_audit, tail_classify, ProbePlan,
};
use oblearn::{LocationFamily, SignalModel, StateSpace};

fn main() -> oblearn::Result<()> {
    let space = StateSpace::new(vec![1, 2, 3])?;
    let plan = ProbePlan::default();

    let families = vec![
        ("normal(1)", LocationFamily::normal(&space, 1.0)?),
        ("laplace(1)", LocationFamily::laplace(&space, 1.0)?),
        ("student_t(5)", LocationFamily::student_t(&space, 5.0, 1.0)?),
        ("gen_exp(1.5)", LocationFamily::generalized_exponential(&space, 1.5)?),
        ("gen_exp(0.5)", LocationFamily::generalized_exponential(&space, 0.5)?),
    ];

    println!(
        "{:<14} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}  tail",
        "family", "mlrp", "UB", "uDUB", "DUB", "pairUB", "audit"
    );
    for (label, fam) in families {
        let tails = tail_classify(&fam);
        let model = SignalModel::Location(fam);
        let row = [
            format!("{:?}", check_mlrp(&model)?.verdict),
            format!("{:?}", check_unbounded_beliefs(&model, &plan)?.verdict),
            format!("{:?}", check_universal_dub(&model, &plan)?.verdict),
            format!("{:?}", check_dub(&model, &plan)?.verdict),
            format!("{:?}", check_pairwise_ub(&model, &plan)?.verdict),
            format!("{:?}", implication_audit(&model, &plan)?.verdict),
        ];
        println!(
            "{label:<14} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}  {:?}",
            row[0], row[1], row[2], row[3], row[4], row[5], tails.class
        );
    }

    // the laplace DUB failure comes with its exact constancy certificate
    let laplace = SignalModel::Location(LocationFamily::laplace(&space, 1.0)?);
    let report = check_dub(&laplace, &plan)?;
    println!(
        "\nlaplace DUB witnesses: {}",
        serde_json::to_string_pretty(&report.witnesses["kind_certificate"]).unwrap()
    );
    Ok(())
}
