//! Experiment runner: compile the step circuits, execute them on the chosen
//! backends, and write tables, plots and circuit emissions.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinsim::io::{load_config, BackendChoice, ExperimentConfig};
use spinsim::runner;

#[derive(Parser)]
#[command(
    name = "spinsim",
    about = "Trotterized dynamics of a driven transverse-field Ising chain",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its result table.
    Run(RunArgs),
    /// Run a (qubits x drive-ratios) grid, one result table per combination.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Number of Trotter steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Time step in fs.
    #[arg(long)]
    dt_fs: Option<f64>,
    /// Exchange coupling in eV (sign selects ferro/antiferro).
    #[arg(long)]
    jz_ev: Option<f64>,
    /// Drive frequency in THz.
    #[arg(long)]
    f_thz: Option<f64>,
    /// Backend: statevector | noisy | sampled | all.
    #[arg(long)]
    backend: Option<String>,
    /// Shots per circuit for the sampled backend.
    #[arg(long)]
    shots: Option<u64>,
    /// Independent sampled runs to average.
    #[arg(long)]
    runs: Option<usize>,
    /// Master seed for shot sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Noise profile: built-in name (ideal, nisq-2019) or JSON file path.
    #[arg(long)]
    noise_profile: Option<String>,
}

impl CommonArgs {
    fn apply(&self, config: &mut ExperimentConfig) -> Result<(), String> {
        if let Some(s) = self.steps {
            config.n_steps = s;
        }
        if let Some(dt) = self.dt_fs {
            config.dt_fs = dt;
        }
        if let Some(j) = self.jz_ev {
            config.j_z_ev = j;
        }
        if let Some(f) = self.f_thz {
            config.f_ph_thz = f;
        }
        if let Some(b) = &self.backend {
            config.backend = b.parse::<BackendChoice>().map_err(|e| e.to_string())?;
        }
        if let Some(s) = self.shots {
            config.shots = s;
        }
        if let Some(r) = self.runs {
            config.runs = r;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(n) = &self.noise_profile {
            config.noise_profile = n.clone();
        }
        Ok(())
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file; inline flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Chain length N.
    #[arg(long)]
    qubits: Option<usize>,
    /// Drive amplitude as a ratio of the exchange coupling.
    #[arg(long)]
    eps_ratio: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
    /// Result table destination (.csv or .json).
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Optional SVG plot destination.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Directory for per-step OpenQASM emissions.
    #[arg(long)]
    emit_qasm: Option<PathBuf>,
    /// Directory for per-step Quil emissions.
    #[arg(long)]
    emit_quil: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated chain lengths, e.g. 2,3,4.
    #[arg(long, value_delimiter = ',', required = true)]
    qubits: Vec<usize>,
    /// Comma-separated drive ratios, e.g. 0.2,0.5,1,5.
    #[arg(long, value_delimiter = ',', required = true)]
    eps_ratios: Vec<f64>,
    #[command(flatten)]
    common: CommonArgs,
    /// Output directory for the per-combination CSV tables.
    #[arg(long, default_value = "sweep_out")]
    out_dir: PathBuf,
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig, String> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            load_config(&text).map_err(|e| e.to_string())?
        }
        None => {
            let (Some(q), Some(r)) = (args.qubits, args.eps_ratio) else {
                return Err("either --config or both --qubits and --eps-ratio are required".into());
            };
            ExperimentConfig::minimal(q, r)
        }
    };
    if let Some(q) = args.qubits {
        config.n_qubits = q;
    }
    if let Some(r) = args.eps_ratio {
        config.eps_ratio = r;
    }
    args.common.apply(&mut config)?;
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn run(args: &RunArgs) -> Result<ExitCode, ExitCode> {
    let mut config = build_config(args).map_err(config_error)?;
    config.out = Some(args.out.clone());
    if args.plot.is_some() {
        config.plot = args.plot.clone();
    }
    if args.emit_qasm.is_some() {
        config.emit_qasm = args.emit_qasm.clone();
    }
    if args.emit_quil.is_some() {
        config.emit_quil = args.emit_quil.clone();
    }
    config.validate().map_err(|e| config_error(e.to_string()))?;

    let table = runner::execute_and_write(&config).map_err(runtime_error)?;
    eprintln!(
        "wrote {} rows to {}",
        table.len(),
        config.out.as_ref().unwrap().display()
    );
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: &SweepArgs) -> Result<ExitCode, ExitCode> {
    let mut base = ExperimentConfig::minimal(
        *args.qubits.first().ok_or_else(|| config_error("--qubits list empty"))?,
        *args
            .eps_ratios
            .first()
            .ok_or_else(|| config_error("--eps-ratios list empty"))?,
    );
    args.common.apply(&mut base).map_err(config_error)?;
    base.validate().map_err(|e| config_error(e.to_string()))?;

    let entries = runner::run_sweep(&base, &args.qubits, &args.eps_ratios, Some(&args.out_dir))
        .map_err(runtime_error)?;
    for entry in &entries {
        eprintln!(
            "q={} eps_ratio={}: {} rows -> {}",
            entry.n_qubits,
            entry.eps_ratio,
            entry.table.len(),
            entry.out.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("config error: {msg}");
    ExitCode::from(1)
}

fn runtime_error(err: spinsim::Error) -> ExitCode {
    // setup-class failures discovered late still count as config errors
    match err {
        spinsim::Error::Config { .. } | spinsim::Error::InvalidNoiseProfile(_) => {
            eprintln!("config error: {err}");
            ExitCode::from(1)
        }
        other => {
            eprintln!("error: {other}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version print to stdout and exit cleanly
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(1);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Sweep(args) => sweep(args),
    };
    match result {
        Ok(code) => code,
        Err(code) => code,
    }
}
