use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use verify_harness::config::{grid, Format, RawConfig};
use verify_harness::registry::{self, CHECKS};
use verify_harness::report::{EXIT_BUDGET, EXIT_CONFIG, EXIT_FAIL, EXIT_OK};
use verify_harness::runner::{describe, run_checks, run_grid};
use verify_harness::ConfigError;

#[derive(Parser)]
#[command(name = "verify", version, about = "Exact checks of the pro-p-Iwahori invariants of the universal supersingular module")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks over one model, or over a named grid of models.
    Run(RunArgs),
    /// Print every check id with its anchor phrase.
    List,
    /// Print the registry entry of one check as JSON.
    Describe { id: String },
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
    #[arg(long)]
    f: Option<u32>,
    /// Digits of precision kept in the local ring.
    #[arg(long)]
    prec: Option<u32>,
    /// Radius of the ball of cosets.
    #[arg(long)]
    ball: Option<u32>,
    /// `all` or a comma-separated list of check ids.
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Emit JSON instead of the text table.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    max_cutoff: Option<u32>,
    /// Verify every certificate and witness as it is produced.
    #[arg(long)]
    checked: Option<bool>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    memory_budget_mb: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Run a named grid (`default`) of models; prints one JSON report per line.
    #[arg(long)]
    grid: Option<String>,
}

impl RunArgs {
    fn raw(&self) -> Result<RawConfig, ConfigError> {
        let file = match &self.config {
            Some(path) => RawConfig::load(path)?,
            None => RawConfig::default(),
        };
        let flags = RawConfig {
            p: self.p,
            e: self.e,
            f: self.f,
            prec: self.prec,
            ball: self.ball,
            max_cutoff: self.max_cutoff,
            seed: self.seed,
            checks: self.checks.clone(),
            samples: self.samples,
            checked: self.checked,
            memory_budget_mb: self.memory_budget_mb,
            output: self.output.clone(),
            format: self.json.then_some(Format::Json),
        };
        Ok(file.merge(flags))
    }
}

fn write_output(output: Option<&PathBuf>, text: &str) -> Result<(), ConfigError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: &RunArgs) -> Result<i32, ConfigError> {
    let raw = args.raw()?;
    if let Some(name) = &args.grid {
        // the grid supplies (p, e, f, ball); the placeholder model only fills
        // the required keys before validation
        let placeholder = RawConfig { p: Some(2), e: Some(1), f: Some(1), ..RawConfig::default() };
        let base = placeholder.merge(raw.clone()).resolve()?;
        let reports = run_grid(&grid(name, &base)?)?;
        let text: String = reports.iter().map(|r| r.to_json_line() + "\n").collect();
        write_output(raw.output.as_ref(), &text)?;
        let codes: Vec<i32> = reports.iter().map(|r| r.summary.exit_code).collect();
        return Ok([EXIT_FAIL, EXIT_BUDGET].into_iter().find(|c| codes.contains(c)).unwrap_or(EXIT_OK));
    }
    let config = raw.resolve()?;
    let report = run_checks(&config)?;
    write_output(config.output.as_ref(), &report.render(config.format))?;
    Ok(report.summary.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::List => {
            for entry in CHECKS {
                println!("{:<36} {}", entry.id, entry.anchor);
            }
            EXIT_OK
        }
        Command::Describe { id } => match registry::find(&id) {
            Some(entry) => {
                println!("{}", serde_json::to_string_pretty(&describe(entry)).expect("registry entries serialize"));
                EXIT_OK
            }
            None => {
                eprintln!("error: {}", ConfigError::UnknownCheck(id));
                EXIT_CONFIG
            }
        },
        Command::Run(args) => match run(&args) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_CONFIG
            }
        },
    };
    ExitCode::from(u8::try_from(code).unwrap_or(EXIT_FAIL as u8))
}
