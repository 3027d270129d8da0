//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::{sweep_csv, timeseries_csv, width_report};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::validate::{SuiteRegistry, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(name = "centralspin", version, about = "Decoherence of a central spin coupled to an XY chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact F(t), D(t) and optional approximations on a time grid.
    Timeseries(ConfigArgs),
    /// F over a (t, lambda_i) or (t, temperature) grid in long format.
    Sweep(ConfigArgs),
    /// Gaussian widths from every route, weak or strong coupling.
    Width {
        #[command(flatten)]
        config: ConfigArgs,
        /// weak or strong
        #[arg(long)]
        regime: Option<String>,
        /// Skip the g >= 10 guard of the strong-coupling report.
        #[arg(long)]
        force: bool,
    },
    /// Run built-in self-checks; exit status 1 if any fails.
    Validate {
        /// identity, block, fock, thermal, widths or all
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Flags mirror config keys; they override values from `--config`.
#[derive(Args, Debug, Default, Clone)]
pub struct ConfigArgs {
    /// key=value file applied before the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_i: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_e: Option<String>,
    /// ground or thermal
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub temperature: Option<String>,
    #[arg(long)]
    pub t_max: Option<String>,
    #[arg(long)]
    pub t_steps: Option<String>,
    /// lambda_i or temperature
    #[arg(long)]
    pub axis2: Option<String>,
    /// start:stop:steps
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Comma-separated: weak, closed, envelope, strong_simplified
    #[arg(long)]
    pub approx: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<String>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let flags = [
            ("n", &self.n),
            ("gamma", &self.gamma),
            ("g", &self.g),
            ("lambda_i", &self.lambda_i),
            ("lambda_e", &self.lambda_e),
            ("init", &self.init),
            ("temperature", &self.temperature),
            ("t_max", &self.t_max),
            ("t_steps", &self.t_steps),
            ("axis2", &self.axis2),
            ("range", &self.range),
            ("approx", &self.approx),
            ("out", &self.out),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn execute(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Timeseries(args) => {
            let cfg = args.resolve()?;
            emit(cfg.out.as_deref(), &timeseries_csv(&cfg)?)?;
        }
        Command::Sweep(args) => {
            let cfg = args.resolve()?;
            emit(cfg.out.as_deref(), &sweep_csv(&cfg)?)?;
        }
        Command::Width { config, regime, force } => {
            let mut cfg = config.resolve()?;
            if let Some(r) = regime {
                cfg.set("regime", &r)?;
            }
            if force {
                cfg.force = true;
            }
            let report = width_report(&cfg)?;
            match cfg.out.as_deref() {
                Some(path) => {
                    emit(None, &report.text)?;
                    emit(Some(path), &report.csv)?;
                }
                None => emit(None, &report.text)?,
            }
        }
        Command::Validate { suite, seed } => {
            let registry = SuiteRegistry::builtin();
            let report = registry.run(&suite, seed).ok_or_else(|| {
                CliError::Config(format!("unknown suite '{suite}' (available: {}, all)", registry.names().join(", ")))
            })?;
            emit(None, &report.render())?;
            return Ok(if report.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Parse `args` (including the program name) and run; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
