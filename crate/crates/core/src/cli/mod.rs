//! The `syncforge` command line: experiment manifests, the msf → synthesize
//! → simulate pipeline, and preset reproductions.

mod commands;
mod config;
mod presets;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_msf, cmd_simulate, cmd_synthesize, cmd_verify, coupling_eigenvalues, coupling_matrix, fit_decay_rate,
    load_laplacian, predicted_rate, resolve_spectrum, write_config, CliError, DecayFit, MsfRecord, SimulationSummary,
    SynthesisOutput, EXIT_NO_INTERVAL, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE,
};
pub use config::{
    CouplingSource, ExperimentConfig, IntegratorConfig, MsfConfig, Overrides, PerturbationConfig, SpectrumConfig,
};
pub use presets::{cmd_reproduce, Preset, Reproduction, RunRecord, Sym3x3Point, ROSSLER_INTERVAL};

#[derive(Debug, Parser)]
#[command(name = "syncforge", version, about = "Tridiagonal coupling design for synchronizing identical oscillators")]
pub struct Cli {
    /// Experiment manifest (JSON); flags override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed for the initial perturbation and tangent vector.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads for MSF scans.
    #[arg(long, global = true, value_name = "K", env = "SYNCFORGE_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan the master stability function; writes msf.csv and intervals.json.
    Msf,
    /// Build the coupling Laplacian; writes laplacian.json, laplacian.mtx and report.json.
    Synthesize,
    /// Simulate the perturbed network; writes sync.csv and summary.json.
    Simulate,
    /// Run a named experiment end to end.
    Reproduce {
        #[arg(value_enum)]
        preset: Preset,
    },
    /// Re-check a Laplacian file (default: <out>/laplacian.json).
    Verify {
        laplacian: Option<PathBuf>,
    },
}

fn load(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path).map_err(CliError::usage)?,
        None => ExperimentConfig::default(),
    };
    cfg.apply(&Overrides { out: cli.out.clone(), seed: cli.seed });
    Ok(cfg)
}

/// Runs one parsed invocation and returns its exit code.
pub fn execute(cli: Cli) -> i32 {
    let pool = match cli.threads {
        Some(0) => return report(Err(CliError::usage("--threads must be at least 1"))),
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => return report(Err(CliError::usage(format!("thread pool: {e}")))),
    };
    report(pool.install(|| dispatch(&cli)))
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let mut cfg = load(cli)?;
    match &cli.command {
        Command::Msf => {
            let r = cmd_msf(&cfg)?;
            let iv: Vec<String> = r.intervals.iter().map(|i| format!("[{:.4}, {:.4}]", i.lo, i.hi)).collect();
            Ok(format!("negative MSF intervals: {}", iv.join(", ")))
        }
        Command::Synthesize => {
            let o = cmd_synthesize(&cfg)?;
            Ok(format!("wrote {} (n = {}, max entry {:.4})", cfg.out.join("laplacian.json").display(), o.n, o.verification.max_entry))
        }
        Command::Simulate => {
            let s = cmd_simulate(&cfg)?;
            let fit = s.decay_fit.map_or("n/a".to_string(), |f| format!("{:.4}", f.rate));
            let pred = s.predicted_rate.map_or("n/a".to_string(), |p| format!("{p:.4}"));
            Ok(format!("final sync error {:e}, fitted rate {fit}, predicted {pred}", s.final_sync_error))
        }
        Command::Reproduce { preset } => {
            let r = cmd_reproduce(*preset, &cfg)?;
            Ok(format!("{}: {} run(s) written to {}", preset.name(), r.runs.len(), cfg.out.join(preset.name()).display()))
        }
        Command::Verify { laplacian } => {
            if let Some(p) = laplacian {
                cfg.laplacian = Some(p.clone());
            }
            let v = cmd_verify(&cfg)?;
            Ok(format!("ok: n = {}, max |row sum| {:e}", v.n, v.row_sum_residual))
        }
    }
}

fn report(result: Result<String, CliError>) -> i32 {
    match result {
        Ok(msg) => {
            println!("{msg}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Usage errors exit with [`EXIT_USAGE`].
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
