//! `oplaw` command line: `verify`, `replay` and `list`.
//!
//! Exit codes: 0 all checks passed, 1 at least one verification failure,
//! 2 usage or configuration error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{invalid, Result};
use crate::harness::{replay, run_suite, ReplayFile, Suite, TrialConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "oplaw", version, about = "Verify operator parallelogram laws and norm inequalities on random matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification suites over a seeded random grid
    Verify(VerifyArgs),
    /// Re-run one serialized failing instance
    Replay(ReplayArgs),
    /// List suite ids
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Suite id, repeatable; `all` selects every suite
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Matrix dimension, repeatable
    #[arg(long = "dim")]
    dims: Vec<usize>,
    /// Family size n (or node count m), repeatable
    #[arg(long = "count")]
    counts: Vec<usize>,
    /// Trials per grid cell
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Residual / margin tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Schatten exponent for the Schatten suite, repeatable
    #[arg(long = "p")]
    p_grid: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with any of the config fields; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct ReplayArgs {
    file: PathBuf,
    /// Override the tolerance stored in the file
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// `--config` file contents. Same fields as the report's `config` object,
/// all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    suites: Option<Vec<String>>,
    dims: Option<Vec<usize>>,
    counts: Option<Vec<usize>>,
    trials: Option<u64>,
    seed: Option<u64>,
    tol: Option<f64>,
    p_grid: Option<Vec<f64>>,
}

fn parse_suites(ids: &[String]) -> Result<Vec<Suite>> {
    if ids.iter().any(|s| s == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    let mut suites = Vec::new();
    for id in ids {
        let suite: Suite = id.parse()?;
        if !suites.contains(&suite) {
            suites.push(suite);
        }
    }
    Ok(suites)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("malformed {what} {}: {e}", path.display())))
}

fn build_config(args: &VerifyArgs) -> Result<TrialConfig> {
    let file: ConfigFile = match &args.config {
        Some(path) => read_json(path, "config file")?,
        None => ConfigFile::default(),
    };
    let mut cfg = TrialConfig::default();
    if let Some(s) = &file.suites {
        cfg.suites = parse_suites(s)?;
    }
    if !args.suites.is_empty() {
        cfg.suites = parse_suites(&args.suites)?;
    }
    fn pick<T: Clone>(flag: &[T], file: Option<Vec<T>>, default: Vec<T>) -> Vec<T> {
        if !flag.is_empty() {
            flag.to_vec()
        } else {
            file.unwrap_or(default)
        }
    }
    cfg.dims = pick(&args.dims, file.dims, cfg.dims);
    cfg.counts = pick(&args.counts, file.counts, cfg.counts);
    cfg.p_grid = pick(&args.p_grid, file.p_grid, cfg.p_grid);
    cfg.trials = args.trials.or(file.trials).unwrap_or(cfg.trials);
    cfg.seed = args.seed.or(file.seed).unwrap_or(cfg.seed);
    cfg.tol = args.tol.or(file.tol).unwrap_or(cfg.tol);
    cfg.validate()?;
    Ok(cfg)
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = build_config(args)?;
    let report = run_suite(&cfg)?;
    let rendered = match args.format {
        Format::Text => report.render_text(),
        Format::Json => report.to_json() + "\n",
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, &rendered)
                .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
            let _ = writeln!(
                stdout,
                "{}: {} failure(s); report written to {}",
                if report.passed { "PASS" } else { "FAIL" },
                report.total_failures,
                path.display()
            );
        }
        None => {
            let _ = stdout.write_all(rendered.as_bytes());
        }
    }
    Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
}

fn replay_cmd(args: &ReplayArgs, stdout: &mut dyn Write) -> Result<i32> {
    let file: ReplayFile = read_json(&args.file, "replay file")?;
    let outcome = replay(&file, args.tol)?;
    match args.format {
        Format::Text => {
            let metric = outcome.metric.map_or_else(|| "n/a".into(), |m| format!("{m:.3e}"));
            let _ = writeln!(
                stdout,
                "{} {} metric {metric}{}",
                if outcome.pass { "PASS" } else { "FAIL" },
                file.suite,
                outcome.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
            );
        }
        Format::Json => {
            let value = serde_json::json!({
                "suite": file.suite,
                "pass": outcome.pass,
                "metric": outcome.metric,
                "detail": outcome.detail,
            });
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&value).expect("json value"));
        }
    }
    Ok(if outcome.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn list(format: Format, stdout: &mut dyn Write) {
    match format {
        Format::Text => {
            for s in Suite::ALL {
                let _ = writeln!(stdout, "{:<14}  {}", s.id(), s.anchor());
            }
        }
        Format::Json => {
            let rows: Vec<_> = Suite::ALL
                .iter()
                .map(|s| serde_json::json!({ "id": s.id(), "anchor": s.anchor() }))
                .collect();
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&rows).expect("json value"));
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Verify(args) => verify(args, stdout),
        Command::Replay(args) => replay_cmd(args, stdout),
        Command::List { format } => {
            list(*format, stdout);
            Ok(EXIT_PASS)
        }
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(stderr, "error: {e}");
        EXIT_USAGE
    })
}
