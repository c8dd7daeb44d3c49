//! Sequential Bayesian observational learning over ordered states: model
//! primitives, signal structures, preference/information condition
//! checkers, equilibrium dynamics, and a reproducible experiment gallery.
//!
//! Start from the `examples/` directory — each example is a runnable tour
//! of one capability. The `oblearn` binary exposes the same machinery as
//! `check` / `simulate` / `scan` / `experiment` subcommands driven by
//! JSON configs.

pub mod cli;
pub mod conditions;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod model;
pub mod numeric;
pub mod rng;
pub mod signal;

pub use conditions::{
    check_dub, check_mlrp, check_pairwise_ub, check_pidd, check_scd, check_unbounded_beliefs,
    check_universal_dub, distinguishability, implication_audit, scd_oracle, tail_classify,
    CheckReport, Comparison, ProbePlan, Verdict,
};
pub use error::{Error, Result};
pub use model::{
    adequate_knowledge, choice_set, expected_difference, Adequacy, Belief, StateSpace,
    UtilityTable, TIE_TOL,
};
pub use rng::{stream_for, RngStream};
pub use signal::{
    from_posteriors, CustomDensity, FiniteMatrix, LocationFamily, LocationKind,
    MixtureAtomFamily, PosteriorSequence, SignalModel, SignalSet, TailClass,
};
