//! Trial configuration, suite execution and reports.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::suites::{evaluate, generate, Instance, Metric, Suite, TrialOutcome, TrialRng};
use crate::error::{invalid, Result};
use crate::tolerance::DEFAULT_TAU;

pub const SCHEMA_VERSION: u32 = 1;

/// Failing instances kept per suite in a report.
pub const MAX_RECORDED_FAILURES: usize = 5;

pub const MAX_DIM: usize = 32;
pub const MAX_COUNT: usize = 8;

/// What to run. Every grid cell `(dim, count)` runs `trials` trials of every suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    pub suites: Vec<Suite>,
    pub dims: Vec<usize>,
    pub counts: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub p_grid: Vec<f64>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            suites: Suite::ALL.to_vec(),
            dims: vec![1, 2, 4, 8],
            counts: vec![1, 2, 3, 6],
            trials: 250,
            seed: 42,
            tol: DEFAULT_TAU,
            p_grid: vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0],
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(invalid("no suites selected"));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d == 0 || d > MAX_DIM) {
            return Err(invalid(format!("dims must be non-empty and within 1..={MAX_DIM}")));
        }
        if self.counts.is_empty() || self.counts.iter().any(|&c| c == 0 || c > MAX_COUNT) {
            return Err(invalid(format!("counts must be non-empty and within 1..={MAX_COUNT}")));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be positive"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(invalid(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.p_grid.is_empty() || self.p_grid.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(invalid("p grid must be non-empty with positive entries"));
        }
        Ok(())
    }
}

/// Key material that regenerates an instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedInfo {
    pub seed: u64,
    pub dim: usize,
    pub count: usize,
    pub trial: u64,
    pub tol: f64,
}

/// Replay file: `{"suite": id, "instance": {...}, "seed_info": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayFile {
    pub suite: Suite,
    pub instance: Instance,
    pub seed_info: SeedInfo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub detail: String,
    pub replay: ReplayFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub dim: usize,
    pub count: usize,
    pub trials: u64,
    pub failures: u64,
    pub worst: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub id: Suite,
    pub anchor: String,
    pub metric: Metric,
    pub trials: u64,
    pub failures: u64,
    /// Largest residual or smallest normalized margin over all trials.
    pub worst: Option<f64>,
    pub passed: bool,
    pub cells: Vec<CellResult>,
    pub failing_instances: Vec<FailureRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub config: TrialConfig,
    pub suites: Vec<SuiteResult>,
    pub total_failures: u64,
    pub passed: bool,
    /// Unix time in milliseconds; excluded from determinism guarantees.
    pub started_at: u64,
    /// Excluded from determinism guarantees.
    pub wall_ms: u64,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "seed {}  trials/cell {}  dims {:?}  counts {:?}  tol {:e}",
            c.seed, c.trials, c.dims, c.counts, c.tol
        );
        for s in &self.suites {
            let label = match s.metric {
                Metric::MaxResidual => "max residual",
                Metric::MinMargin => "min margin",
            };
            let worst = s.worst.map_or_else(|| "n/a".to_string(), |w| format!("{w:.3e}"));
            let _ = writeln!(
                out,
                "{} {:<14} trials {:>6}  failures {:>4}  {label} {worst}  [{}]",
                if s.passed { "PASS" } else { "FAIL" },
                s.id.id(),
                s.trials,
                s.failures,
                s.anchor
            );
            for f in &s.failing_instances {
                let si = &f.replay.seed_info;
                let _ = writeln!(
                    out,
                    "     dim {} count {} trial {}: {}",
                    si.dim, si.count, si.trial, f.detail
                );
            }
        }
        let _ = writeln!(
            out,
            "{}: {} failure(s) in {} ms",
            if self.passed { "ALL PASS" } else { "FAILED" },
            self.total_failures,
            self.wall_ms
        );
        out
    }
}

fn worse(metric: Metric, a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(match metric {
            Metric::MaxResidual => x.max(y),
            Metric::MinMargin => x.min(y),
        }),
    }
}

struct TrialRecord {
    outcome: TrialOutcome,
    instance: Option<Instance>,
}

fn run_trial(suite: Suite, config: &TrialConfig, dim: usize, count: usize, trial: u64) -> TrialRecord {
    let ctx = TrialRng { seed: config.seed, suite: suite.id(), dim, count, trial };
    let instance = match generate(suite, &ctx, &config.p_grid) {
        Ok(i) => i,
        Err(e) => return TrialRecord { outcome: TrialOutcome::errored(&e), instance: None },
    };
    let outcome = evaluate(suite, &instance, config.tol).unwrap_or_else(|e| TrialOutcome::errored(&e));
    let instance = (!outcome.pass).then_some(instance);
    TrialRecord { outcome, instance }
}

fn run_one_suite(suite: Suite, config: &TrialConfig) -> SuiteResult {
    let mut result = SuiteResult {
        id: suite,
        anchor: suite.anchor().to_string(),
        metric: suite.metric(),
        trials: 0,
        failures: 0,
        worst: None,
        passed: true,
        cells: Vec::new(),
        failing_instances: Vec::new(),
    };
    for &dim in &config.dims {
        for &count in &config.counts {
            // collect() keeps trial order, so the reduction below is order-independent
            let records: Vec<TrialRecord> = (0..config.trials)
                .into_par_iter()
                .map(|t| run_trial(suite, config, dim, count, t))
                .collect();
            let mut cell = CellResult { dim, count, trials: config.trials, failures: 0, worst: None };
            for (trial, rec) in records.into_iter().enumerate() {
                cell.worst = worse(suite.metric(), cell.worst, rec.outcome.metric);
                if rec.outcome.pass {
                    continue;
                }
                cell.failures += 1;
                if result.failing_instances.len() < MAX_RECORDED_FAILURES {
                    if let Some(instance) = rec.instance {
                        result.failing_instances.push(FailureRecord {
                            detail: rec.outcome.detail.unwrap_or_default(),
                            replay: ReplayFile {
                                suite,
                                instance,
                                seed_info: SeedInfo {
                                    seed: config.seed,
                                    dim,
                                    count,
                                    trial: trial as u64,
                                    tol: config.tol,
                                },
                            },
                        });
                    }
                }
            }
            result.trials += cell.trials;
            result.failures += cell.failures;
            result.worst = worse(suite.metric(), result.worst, cell.worst);
            result.cells.push(cell);
        }
    }
    result.passed = result.failures == 0;
    result
}

/// Runs every configured suite over the full grid.
pub fn run_suite(config: &TrialConfig) -> Result<SuiteReport> {
    config.validate()?;
    let started = std::time::SystemTime::now();
    let clock = std::time::Instant::now();
    let suites: Vec<SuiteResult> = config.suites.iter().map(|&s| run_one_suite(s, config)).collect();
    let total_failures = suites.iter().map(|s| s.failures).sum();
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        suites,
        total_failures,
        passed: total_failures == 0,
        started_at: started
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0),
        wall_ms: clock.elapsed().as_millis() as u64,
    })
}

/// Re-evaluates one serialized instance.
pub fn replay(file: &ReplayFile, tol: Option<f64>) -> Result<TrialOutcome> {
    let tau = tol.unwrap_or(file.seed_info.tol);
    if !(tau.is_finite() && tau > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tau}")));
    }
    evaluate(file.suite, &file.instance, tau)
}
