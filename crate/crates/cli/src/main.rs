use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use adiabatic_kms_cli::commands::{self, Output};
use adiabatic_kms_cli::{CliError, Exit, RunConfig};
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "adiabatic-kms",
    version,
    about = "Adiabatic-limit thermal state experiments"
)]
struct Cli {
    /// JSON run configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV/JSON outputs.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Double the radial quadrature and the μ/horizon ladder density.
    #[arg(long, global = true)]
    refine: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eulerian rows from the recursion, checked against descent counts.
    Eulerian {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Skip the enumeration cross-check (allows larger n).
        #[arg(long)]
        recursive_only: bool,
    },
    /// Switching integrals along the μ ladder.
    Limits,
    /// Order-by-order resummation report.
    Series,
    /// Bogoliubov coefficients and NESS spectral data.
    Ness {
        /// Use the near-instantaneous switch from the config.
        #[arg(long)]
        sudden: bool,
    },
    /// Run the full acceptance suite.
    VerifyAll,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eulerian { .. } => "eulerian",
            Command::Limits => "limits",
            Command::Series => "series",
            Command::Ness { .. } => "ness",
            Command::VerifyAll => "verify-all",
        }
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    command: &'a str,
    version: &'a str,
    config: Option<String>,
    refine: bool,
    threads: usize,
    unix_time: u64,
}

fn run(cli: Cli) -> Result<Exit, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if cli.refine {
        cfg = cfg.refined();
    }
    let out = Output::new(cli.out.clone())?;
    if let Some(dir) = out.dir() {
        let meta = Metadata {
            command: cli.command.name(),
            version: env!("CARGO_PKG_VERSION"),
            config: cli.config.as_ref().map(|p| p.display().to_string()),
            refine: cli.refine,
            threads: rayon::current_num_threads(),
            unix_time: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        };
        adiabatic_kms_cli::formats::write_json(&dir.join("metadata.json"), &meta)?;
    }
    match cli.command {
        Command::Eulerian {
            n_max,
            recursive_only,
        } => commands::eulerian(n_max, recursive_only, &out),
        Command::Limits => commands::limits(&cfg, &out),
        Command::Series => commands::series(&cfg, &out),
        Command::Ness { sudden } => commands::ness(&cfg, sudden, &out),
        Command::VerifyAll => commands::verify_all(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exit = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit()
    });
    ExitCode::from(exit as u8)
}
