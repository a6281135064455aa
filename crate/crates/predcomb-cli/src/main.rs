//! Batch entry point.  Exit codes: 0 every assertion passed, 1 some
//! assertion failed, 2 usage or budget error.  Equal (command,
//! parameters, seed) give byte-identical output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use predcomb_cli::{demos, suites, tables};
use predcomb_core::EnumBudget;

/// Inclusive range argument: `3` or `1..3`.
#[derive(Debug, Clone)]
struct RangeArg {
    lo: usize,
    hi: usize,
}

impl RangeArg {
    fn values(&self) -> Vec<usize> {
        (self.lo..=self.hi).collect()
    }
}

impl FromStr for RangeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.parse::<usize>().map_err(|e| format!("{e}"));
        match s.split_once("..") {
            Some((a, b)) => {
                let (lo, hi) = (parse(a)?, parse(b)?);
                if lo > hi {
                    return Err(format!("empty range {s}"));
                }
                Ok(RangeArg { lo, hi })
            }
            None => {
                let v = parse(s)?;
                Ok(RangeArg { lo: v, hi: v })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "predcomb", version, about = "prediction-combinatorics workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Seed for randomized runs; recorded in the output.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration budget (items); defaults to $PREDCOMB_BUDGET or 2^22.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a named verification suite.
    Verify {
        /// One of: claim, main-theorem, halving, coverability, linked,
        /// sharpness, evasion, star.
        suite: String,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "H")]
        horizon: Option<usize>,
        #[arg(long)]
        m0: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit a quantitative table over a parameter grid.
    Table {
        /// One of: cover, maxcover, buckets.
        kind: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "1..3")]
        k: RangeArg,
        #[arg(long = "L")]
        len: Option<usize>,
        /// Bucket levels, e.g. `0..3`.
        #[arg(long, default_value = "0..3")]
        ell: RangeArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit a narrative end-to-end trace.
    Demo {
        /// One of: thm1, evader, extension.
        name: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long = "H", default_value_t = 60)]
        horizon: usize,
        #[arg(long, default_value_t = 1)]
        m0: usize,
        #[arg(long, default_value_t = 3)]
        predictors: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn budget_from(common: &CommonArgs) -> EnumBudget {
    let items = common
        .budget
        .or_else(|| std::env::var("PREDCOMB_BUDGET").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1 << 22);
    EnumBudget::new(items)
}

fn emit(common: &CommonArgs, text: String) -> std::io::Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn suite_to_csv(report: &suites::SuiteReport) -> String {
    let mut out = String::from("suite,seed,assertion,passed,detail\n");
    let seed = report.seed.map(|s| s.to_string()).unwrap_or_default();
    for a in &report.assertions {
        let detail = a.detail.replace(',', ";");
        let _ = writeln!(out, "{},{},{},{},{}", report.suite, seed, a.name, a.passed, detail);
    }
    out
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { suite, trials, n, k, horizon, m0, common } => {
            let budget = budget_from(&common);
            let report =
                suites::run_suite(&suite, common.seed, trials, n, k, horizon, m0, &budget)
                    .map_err(|e| format!("{e}"))?;
            let text = match common.format {
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&report).expect("reports serialize")
                }
                OutputFormat::Csv => suite_to_csv(&report),
            };
            emit(&common, text).map_err(|e| format!("{e}"))?;
            Ok(report.passed)
        }
        Command::Table { kind, n, k, len, ell, common } => {
            let budget = budget_from(&common);
            let text = match kind.as_str() {
                "maxcover" => {
                    let rows = tables::table_maxcover(n, &k.values(), &budget);
                    render_rows(&rows, common.format)
                }
                "cover" => {
                    let len = len.ok_or_else(|| "--L is required for the cover table".to_string())?;
                    let rows = tables::table_cover(n, len, &k.values(), &budget);
                    render_rows(&rows, common.format)
                }
                "buckets" => {
                    let rows =
                        tables::table_buckets(&ell.values(), &budget).map_err(|e| format!("{e}"))?;
                    render_rows(&rows, common.format)
                }
                other => return Err(format!("unknown table kind {other}")),
            };
            emit(&common, text).map_err(|e| format!("{e}"))?;
            Ok(true)
        }
        Command::Demo { name, n, k, horizon, m0, predictors, common } => {
            let text = match name.as_str() {
                "thm1" => serde_json::to_string_pretty(
                    &demos::demo_thm1(n, k, horizon, m0, common.seed)
                        .map_err(|e| format!("{e}"))?,
                ),
                "evader" => serde_json::to_string_pretty(
                    &demos::demo_evader(k, predictors, horizon, common.seed)
                        .map_err(|e| format!("{e}"))?,
                ),
                "extension" => serde_json::to_string_pretty(
                    &demos::demo_extension(k).map_err(|e| format!("{e}"))?,
                ),
                other => return Err(format!("unknown demo {other}")),
            }
            .expect("demos serialize");
            emit(&common, text).map_err(|e| format!("{e}"))?;
            Ok(true)
        }
    }
}

fn render_rows<T: serde::Serialize>(rows: &[T], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(rows).expect("tables serialize"),
        OutputFormat::Csv => tables::rows_to_csv(rows).expect("tables serialize"),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
