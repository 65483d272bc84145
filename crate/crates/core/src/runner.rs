//! Experiment orchestration: compile, execute on the selected backends,
//! sample, aggregate and write outputs.
//!
//! Hardware-style protocol: the register cannot be reused after measurement,
//! so every time step n gets its own circuit, compiled from scratch and run
//! from the all-up initial state.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::backends::{average_magnetization, run_noisy_with, run_statevector, NoisyOptions};
use crate::compiler::{compile_circuit, lower_to_native};
use crate::error::{Error, Result};
use crate::io::config::ExperimentConfig;
use crate::io::emit::{emit_qasm, emit_quil};
use crate::io::plot::render_plot;
use crate::io::results::{write_results, ResultFormat, ResultRow, ResultTable};
use crate::oracle::magnetization_trace_exact_capped;
use crate::sampling::{
    aggregate_runs, derive_seed, magnetization_from_counts, magnetization_of_distribution,
    sample_shots,
};

/// Execute one experiment and return its result table (no file output).
pub fn execute(config: &ExperimentConfig) -> Result<ResultTable> {
    config.validate()?;
    let params = config.params();

    let exact = magnetization_trace_exact_capped(
        &params,
        crate::oracle::DEFAULT_SUBSTEPS_PER_DT,
        config.max_dense_qubits,
    )?;

    let noise = if config.backend.needs_noise_profile() {
        Some(config.noise()?)
    } else {
        None
    };
    let noisy_options = NoisyOptions {
        max_qubits: config.max_density_qubits,
        ..Default::default()
    };

    let mut rows = Vec::with_capacity(config.n_steps + 1);
    for n in 0..=config.n_steps {
        let circuit = compile_circuit(&params, n)?;
        let (state, _) = run_statevector(&circuit)?;
        let mz_trotter = average_magnetization(&state);

        let mut mz_noisy = None;
        let mut mz_sampled_mean = None;
        let mut mz_sampled_stderr = None;

        if let Some(noise) = &noise {
            let (_, probs) = run_noisy_with(&circuit, noise, noisy_options)?;
            let mz = magnetization_of_distribution(&probs, params.n_qubits);
            if config.backend.wants_noisy() {
                mz_noisy = Some(mz);
            }
            if config.backend.wants_sampled() {
                let mut values = Vec::with_capacity(config.runs);
                for run in 0..config.runs {
                    let seed = shot_seed(config, run, n);
                    let record = sample_shots(&probs, config.shots, seed)?;
                    values.push(magnetization_from_counts(&record)?);
                }
                let estimate = aggregate_runs(&values)?;
                mz_sampled_mean = Some(estimate.mean);
                mz_sampled_stderr = Some(estimate.std_error);
            }
        }

        rows.push(ResultRow {
            step: n,
            time_fs: n as f64 * params.dt,
            mz_exact: exact[n].1,
            mz_trotter,
            mz_noisy,
            mz_sampled_mean,
            mz_sampled_stderr,
        });
    }

    Ok(ResultTable::new(rows))
}

/// Stream seed for one (configuration, run, step) tuple. Keyed by the
/// combination's values rather than its position in a sweep, so a sweep
/// member and a standalone run with the same settings draw identical shots.
fn shot_seed(config: &ExperimentConfig, run: usize, step: usize) -> u64 {
    derive_seed(
        config.seed,
        &[
            config.n_qubits as u64,
            config.eps_ratio.to_bits(),
            run as u64,
            step as u64,
        ],
    )
}

/// Execute and write the configured outputs (table, plot, emissions).
pub fn execute_and_write(config: &ExperimentConfig) -> Result<ResultTable> {
    let table = execute(config)?;
    if let Some(out) = &config.out {
        write_results(&table, ResultFormat::from_path(out), out)?;
    }
    if let Some(plot) = &config.plot {
        render_plot(&table, plot)?;
    }
    if let Some(dir) = &config.emit_qasm {
        emit_circuits(config, dir, EmissionKind::Qasm)?;
    }
    if let Some(dir) = &config.emit_quil {
        emit_circuits(config, dir, EmissionKind::Quil)?;
    }
    Ok(table)
}

enum EmissionKind {
    Qasm,
    Quil,
}

fn emit_circuits(config: &ExperimentConfig, dir: &Path, kind: EmissionKind) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let params = config.params();
    for n in 0..=config.n_steps {
        let lowered = lower_to_native(&compile_circuit(&params, n)?);
        let (text, ext) = match kind {
            EmissionKind::Qasm => (emit_qasm(&lowered)?, "qasm"),
            EmissionKind::Quil => (emit_quil(&lowered)?, "quil"),
        };
        let path = dir.join(format!("step_{n:03}.{ext}"));
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// One sweep member: combination values, its table and the file it went to.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub n_qubits: usize,
    pub eps_ratio: f64,
    pub table: ResultTable,
    pub out: Option<PathBuf>,
}

/// Deterministic file stem for a sweep combination.
pub fn sweep_stem(n_qubits: usize, eps_ratio: f64) -> String {
    format!("q{n_qubits}_eps{eps_ratio}")
}

/// Run the full (qubits x ratios) grid. Combinations execute concurrently;
/// results are ordered by the grid, not completion order. When `out_dir` is
/// given, every combination's table is written as
/// `<out_dir>/q<N>_eps<ratio>.csv`.
pub fn run_sweep(
    base: &ExperimentConfig,
    qubit_counts: &[usize],
    eps_ratios: &[f64],
    out_dir: Option<&Path>,
) -> Result<Vec<SweepEntry>> {
    if qubit_counts.is_empty() || eps_ratios.is_empty() {
        return Err(Error::config(
            "sweep",
            "qubit and ratio lists must be non-empty",
        ));
    }
    let mut combos = Vec::new();
    for &n in qubit_counts {
        for &r in eps_ratios {
            combos.push((n, r));
        }
    }

    let mut entries: Vec<SweepEntry> = combos
        .par_iter()
        .map(|&(n_qubits, eps_ratio)| {
            let mut config = base.clone();
            config.n_qubits = n_qubits;
            config.eps_ratio = eps_ratio;
            config.out = None;
            config.plot = None;
            config.emit_qasm = None;
            config.emit_quil = None;
            let table = execute(&config)?;
            Ok(SweepEntry {
                n_qubits,
                eps_ratio,
                table,
                out: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for entry in &mut entries {
            let path = dir.join(format!("{}.csv", sweep_stem(entry.n_qubits, entry.eps_ratio)));
            write_results(&entry.table, ResultFormat::Csv, &path)?;
            entry.out = Some(path);
        }
    }
    Ok(entries)
}
