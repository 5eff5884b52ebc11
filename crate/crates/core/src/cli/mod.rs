//! Command-line driver: `attrib run`, `attrib demo example1`, `attrib synth`.

mod config;
mod demo;
mod run;

use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Parser, Subcommand, ValueEnum};

use crate::data::{generate_synthetic_panel, write_panel, Granularity, SyntheticSpec};
use crate::error::{AttribError, ErrorKind, Result};
use crate::result::Method;

pub use config::{Layout, RunConfig, SuOrders, SyntheticSource, YearRange};
pub use demo::{example1, render_example1, Example1};
pub use run::{
    compute, emit_diagnostics, load_panel, render, run, write_atomically, Diagnostic, RunReport, ASU_CHECK_TOLERANCE,
};

/// Environment variable overriding the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "ATTRIB_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "attrib",
    version,
    about = "Profit-and-loss attribution by OAT, SU and ASU decompositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose every configured business year and write report files.
    Run(RunArgs),
    /// Print a worked example.
    Demo {
        #[command(subcommand)]
        which: DemoCommand,
    },
    /// Write a seeded synthetic panel.
    Synth(SynthArgs),
}

#[derive(Debug, Subcommand)]
enum DemoCommand {
    /// FX-hedged S&P 500 position, business year 2003.
    Example1,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    panel: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Comma-separated subset of oat,su,asu.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Comma-separated subset of annual,quarterly,monthly,weekly,daily.
    #[arg(long, value_delimiter = ',')]
    granularities: Option<Vec<String>>,
    #[arg(long)]
    first_year: Option<i32>,
    #[arg(long)]
    last_year: Option<i32>,
    /// Seed for a synthetic panel; replaces any configured panel file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    layout: Option<LayoutArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LayoutArg {
    Combined,
    Split,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SynthModel {
    Bond,
    Hedged,
}

#[derive(Debug, clap::Args)]
struct SynthArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 252)]
    steps: usize,
    #[arg(long, default_value = "2002-12-31")]
    start_date: NaiveDate,
    /// Factor preset.
    #[arg(long, value_enum, default_value = "bond")]
    model: SynthModel,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Process exit code for an error.
pub fn exit_code(err: &AttribError) -> i32 {
    match err.kind() {
        ErrorKind::Config => 2,
        ErrorKind::Data => 3,
        ErrorKind::Domain => 4,
        ErrorKind::Other => 1,
    }
}

/// Loads the configuration file and applies flag and environment overrides.
/// Flags win over the environment, which wins over the file.
fn resolve_config(args: &RunArgs) -> Result<RunConfig> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| AttribError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut config = RunConfig::from_json(&text)?;
    if let Some(p) = &args.panel {
        config.panel = Some(p.clone());
        config.synthetic = None;
    }
    if let Some(seed) = args.seed {
        config.panel = None;
        match &mut config.synthetic {
            Some(s) => s.seed = seed,
            None => {
                config.synthetic =
                    Some(serde_json::from_value(serde_json::json!({ "seed": seed })).expect("defaults fill the rest"))
            }
        }
    }
    if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
        if !dir.is_empty() {
            config.output_dir = PathBuf::from(dir);
        }
    }
    if let Some(dir) = &args.output_dir {
        config.output_dir = dir.clone();
    }
    if let Some(m) = &args.methods {
        config.methods = m
            .iter()
            .map(|s| s.parse::<Method>())
            .collect::<Result<_>>()
            .map_err(|e| AttribError::Config(e.to_string()))?;
    }
    if let Some(g) = &args.granularities {
        config.granularities = g
            .iter()
            .map(|s| s.parse::<Granularity>())
            .collect::<Result<_>>()
            .map_err(|e| AttribError::Config(e.to_string()))?;
    }
    if args.first_year.is_some() || args.last_year.is_some() {
        let base = config.years;
        let first = args.first_year.or(base.map(|y| y.first));
        let last = args.last_year.or(base.map(|y| y.last));
        match (first, last) {
            (Some(first), Some(last)) => config.years = Some(YearRange { first, last }),
            _ => {
                return Err(AttribError::Config(
                    "--first-year and --last-year must be given together".into(),
                ))
            }
        }
    }
    if let Some(l) = args.layout {
        config.layout = match l {
            LayoutArg::Combined => Layout::Combined,
            LayoutArg::Split => Layout::Split,
        };
    }
    config.validate()?;
    Ok(config)
}

fn synth(args: &SynthArgs) -> Result<()> {
    let spec = match args.model {
        SynthModel::Bond => SyntheticSpec::bond_like(args.seed, args.steps, args.start_date),
        SynthModel::Hedged => SyntheticSpec::hedged_like(args.seed, args.steps, args.start_date),
    };
    let panel = generate_synthetic_panel(&spec)?;
    match &args.out {
        Some(path) => {
            let mut bytes = Vec::new();
            write_panel(&panel, &mut bytes)?;
            let dir = path
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .unwrap_or(std::path::Path::new("."));
            let name = path
                .file_name()
                .ok_or_else(|| AttribError::Config(format!("invalid output path {}", path.display())))?
                .to_string_lossy()
                .into_owned();
            write_atomically(dir, &[(name, bytes)])?;
        }
        None => write_panel(&panel, std::io::stdout().lock())?,
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let config = resolve_config(&args)?;
            for path in run(&config)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Demo {
            which: DemoCommand::Example1,
        } => {
            print!("{}", render_example1(&example1()?));
            Ok(())
        }
        Command::Synth(args) => synth(&args),
    }
}

/// Entry point of the `attrib` binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
