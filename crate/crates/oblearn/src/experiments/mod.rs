//! Scenario gallery, Monte Carlo harness, and report emission.

pub mod artifacts;
pub mod figures;
mod gallery;
mod monte_carlo;
pub mod setups;

pub use gallery::{gallery_names, run_gallery, GalleryReport, ScenarioInfo, SCENARIOS};
pub use monte_carlo::{monte_carlo, McRow, MonteCarloSpec};
