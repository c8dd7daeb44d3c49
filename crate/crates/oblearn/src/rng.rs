//! Per-run random streams.
//!
//! Contract: one stream per simulated run, owned by the caller, never
//! shared. Concurrent sweeps derive independent streams from a single
//! master seed by counter, so one number reproduces an entire experiment.

use rand::SeedableRng;

use crate::numeric::derive_seed;

/// The stream type used everywhere sampling happens.
pub type RngStream = rand_pcg::Pcg64Mcg;

/// Stream for `counter` under `master`.
pub fn stream_for(master: u64, counter: u64) -> RngStream {
    RngStream::seed_from_u64(derive_seed(master, counter))
}
