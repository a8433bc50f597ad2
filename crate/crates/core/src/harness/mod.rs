//! Deterministic instance generation and suite execution.

pub mod chain;
pub mod gen;
pub mod rng;
mod runner;
mod suites;

pub use runner::{
    replay, run_suite, CellResult, FailureRecord, ReplayFile, SeedInfo, SuiteReport, SuiteResult,
    TrialConfig, MAX_COUNT, MAX_DIM, MAX_RECORDED_FAILURES, SCHEMA_VERSION,
};
pub use suites::{evaluate, generate, psd_violation, Instance, Metric, Suite, TrialOutcome, TrialRng};
