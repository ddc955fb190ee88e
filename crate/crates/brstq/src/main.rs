use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brstq::config::{ConfigError, ScenarioConfig, Stage};
use brstq::pipeline::{run_scenario, RunOptions};
use brstq::registry;
use brstq::report::Format;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "brstq", version, about = "Exact BRST reduction checks for quantized moment maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Built-in scenario name or path to a TOML scenario file.
    scenario: String,
    /// Truncation order N in the deformation parameter.
    #[arg(long)]
    order: Option<usize>,
    /// Degree bound d for the Koszul slices.
    #[arg(long)]
    degree: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Zero the wall-time fields so reports are reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenarios.
    List,
    /// Run every enabled stage of a scenario.
    Run(RunArgs),
    /// Run one stage (and its prerequisites silently).
    Check {
        stage: Stage,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Print a scenario as TOML.
    Show { scenario: String },
}

fn resolve(name: &str) -> Result<ScenarioConfig, ConfigError> {
    if let Some(c) = registry::lookup(name) {
        return Ok(c);
    }
    let path = Path::new(name);
    if path.exists() || name.ends_with(".toml") {
        return ScenarioConfig::from_path(path);
    }
    Err(ConfigError::Invalid(format!("`{name}` is neither a built-in scenario nor a file")))
}

fn run(args: RunArgs, only: Option<Stage>) -> Result<bool, ConfigError> {
    let config = resolve(&args.scenario)?;
    let opts = RunOptions { order: args.order, degree: args.degree, only };
    let mut report = run_scenario(&config, &opts)?;
    if args.no_timing {
        report = report.without_timing();
    }
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    match &args.report {
        Some(path) => report
            .emit(format, path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?,
        None => print!("{}", report.render(format)),
    }
    if args.report.is_some() {
        eprintln!("{}: {}", report.scenario, if report.passed() { "PASS" } else { "FAIL" });
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::List => {
            for c in registry::builtin() {
                println!("{:<24} {}", c.name, c.description);
            }
            Ok(true)
        }
        Command::Run(args) => run(args, None),
        Command::Check { stage, args } => run(args, Some(stage)),
        Command::Show { scenario } => resolve(&scenario).map(|c| {
            print!("{}", c.to_toml());
            true
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
