//! Seeded Monte Carlo batches, artifact writing, the lower-bound
//! experiments and the command-line front end.
//!
//! Trial `i` of a batch started with seed `s` uses seed `s + i`. That seed
//! generates the trial's random graph; the protocol run uses
//! [`protocol_seed`] of it so graph and protocol randomness never share a
//! stream. Trials run in parallel and come back in trial order.

pub mod cli;
mod commands;
mod config;
mod lowerbound;

use rayon::prelude::*;

use crate::metrics::Trace;
use crate::Result;

pub use commands::{
    generate, run_batch, write_run_artifacts, BatchResult, RunReport, GenKind, TRACES_FILE,
    REPORT_FILE, SUMMARY_FILE,
};
pub use config::{DistSpec, GraphSource, SimConfig};
pub use lowerbound::{
    dumbbell_suite, lowerbound_suite, DumbbellReport, LowerBoundReport, StarStat,
};

const RUN_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of trial `i` in a batch started with `seed`.
pub fn trial_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add(i as u64)
}

/// Seed handed to the round engine for a trial.
pub fn protocol_seed(trial_seed: u64) -> u64 {
    trial_seed ^ RUN_SALT
}

/// Runs `trials` independent trials in parallel. `f` receives the trial
/// index and its seed; results keep trial order.
pub fn run_trials<F>(trials: usize, seed: u64, f: F) -> Result<Vec<Trace>>
where
    F: Fn(usize, u64) -> Result<Trace> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| f(i, trial_seed(seed, i)))
        .collect()
}
