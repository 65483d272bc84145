//! Exact time-ordered propagator, the ground truth the Trotter circuits are
//! judged against.
//!
//! The propagator is approximated piecewise-constantly: every step interval
//! is split into `substeps` sub-intervals of width delta, and each advances
//! the state by `exp(-i H(t_mid) delta / hbar)` with the Hamiltonian frozen
//! at the sub-interval midpoint. Midpoint sampling makes the scheme second
//! order in delta, and each exponential comes from a Hermitian
//! eigendecomposition so it is unitary to floating point.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::backends::statevector::{average_magnetization, init_all_up, StateVector};
use crate::error::{Error, Result};
use crate::model::{build_h_capped, DenseOperator, SpinChainParams, DEFAULT_MAX_DENSE_QUBITS, HBAR_EV_FS};

/// Default sub-intervals per time step; traces double this until converged.
pub const DEFAULT_SUBSTEPS_PER_DT: usize = 64;

/// Self-convergence threshold for auto-doubled traces (max-norm).
pub const TRACE_CONVERGENCE_TOL: f64 = 1e-8;

const MAX_DOUBLINGS: usize = 20;

/// exp(-i H tau / hbar) for Hermitian H via eigendecomposition.
pub fn hermitian_propagator(h: &DenseOperator, tau_fs: f64) -> Result<DenseOperator> {
    let defect = h.hermiticity_defect();
    if defect > 1e-10 {
        return Err(Error::InvalidParams(format!(
            "propagator input not Hermitian: defect {defect:e}"
        )));
    }
    let eig = nalgebra::SymmetricEigen::new(h.matrix().clone());
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, -lambda * tau_fs / HBAR_EV_FS))
        .collect();
    let v = &eig.eigenvectors;
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
    DenseOperator::from_matrix(v * diag * v.adjoint())
}

fn advance(
    state: &mut StateVector,
    params: &SpinChainParams,
    t_start: f64,
    width: f64,
    substeps: usize,
    max_qubits: usize,
) -> Result<()> {
    let delta = width / substeps as f64;
    for s in 0..substeps {
        let t_mid = t_start + (s as f64 + 0.5) * delta;
        let h = build_h_capped(params, t_mid, max_qubits)?;
        let u = hermitian_propagator(&h, delta)?;
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        let next = u.matrix() * v;
        *state = StateVector::from_amplitudes(params.n_qubits, next.as_slice().to_vec())?;
    }
    Ok(())
}

/// Exact state at time `t_fs`, starting from all spins up.
///
/// Every full step of width `params.dt` uses `substeps_per_dt` sub-intervals;
/// a trailing partial step is subdivided the same number of times.
pub fn evolve_exact(
    params: &SpinChainParams,
    t_fs: f64,
    substeps_per_dt: usize,
) -> Result<StateVector> {
    if substeps_per_dt < 1 {
        return Err(Error::InvalidParams("substeps_per_dt must be >= 1".into()));
    }
    params.validate()?;
    if t_fs < 0.0 {
        return Err(Error::InvalidParams(format!("t = {t_fs} fs negative")));
    }
    let mut state = init_all_up(params.n_qubits);
    let full_steps = (t_fs / params.dt).floor() as usize;
    for j in 0..full_steps {
        advance(
            &mut state,
            params,
            j as f64 * params.dt,
            params.dt,
            substeps_per_dt,
            DEFAULT_MAX_DENSE_QUBITS,
        )?;
    }
    let remainder = t_fs - full_steps as f64 * params.dt;
    if remainder > 1e-12 * params.dt.max(1.0) {
        advance(
            &mut state,
            params,
            full_steps as f64 * params.dt,
            remainder,
            substeps_per_dt,
            DEFAULT_MAX_DENSE_QUBITS,
        )?;
    }
    Ok(state)
}

/// Exact states at every step boundary t = 0, dt, ..., n_steps*dt for a
/// fixed substep count.
pub fn evolve_states_trace(
    params: &SpinChainParams,
    substeps_per_dt: usize,
) -> Result<Vec<StateVector>> {
    evolve_states_trace_capped(params, substeps_per_dt, DEFAULT_MAX_DENSE_QUBITS)
}

pub fn evolve_states_trace_capped(
    params: &SpinChainParams,
    substeps_per_dt: usize,
    max_qubits: usize,
) -> Result<Vec<StateVector>> {
    params.validate()?;
    let mut state = init_all_up(params.n_qubits);
    let mut out = Vec::with_capacity(params.n_steps + 1);
    out.push(state.clone());
    for j in 0..params.n_steps {
        advance(
            &mut state,
            params,
            j as f64 * params.dt,
            params.dt,
            substeps_per_dt,
            max_qubits,
        )?;
        out.push(state.clone());
    }
    Ok(out)
}

fn magnetization_of_trace(states: &[StateVector]) -> Vec<f64> {
    states.iter().map(average_magnetization).collect()
}

/// Magnetization trace (t, mz) on the step grid, with the substep count
/// doubled from `initial_substeps` until two successive refinements differ
/// by less than [`TRACE_CONVERGENCE_TOL`] everywhere.
pub fn magnetization_trace_exact_from(
    params: &SpinChainParams,
    initial_substeps: usize,
) -> Result<Vec<(f64, f64)>> {
    magnetization_trace_exact_capped(params, initial_substeps, DEFAULT_MAX_DENSE_QUBITS)
}

/// Auto-converged trace with an explicit dense-dimension cap.
pub fn magnetization_trace_exact_capped(
    params: &SpinChainParams,
    initial_substeps: usize,
    max_qubits: usize,
) -> Result<Vec<(f64, f64)>> {
    if initial_substeps < 1 {
        return Err(Error::InvalidParams("initial_substeps must be >= 1".into()));
    }
    let mut substeps = initial_substeps;
    let mut current =
        magnetization_of_trace(&evolve_states_trace_capped(params, substeps, max_qubits)?);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        let refined = magnetization_of_trace(&evolve_states_trace_capped(
            params,
            substeps * 2,
            max_qubits,
        )?);
        residual = current
            .iter()
            .zip(refined.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        current = refined;
        substeps *= 2;
        if residual < TRACE_CONVERGENCE_TOL {
            let trace = current
                .iter()
                .enumerate()
                .map(|(n, &mz)| (n as f64 * params.dt, mz))
                .collect();
            return Ok(trace);
        }
    }
    Err(Error::OracleNotConverged {
        doublings: MAX_DOUBLINGS,
        residual,
    })
}

/// Magnetization trace with the default starting resolution.
pub fn magnetization_trace_exact(params: &SpinChainParams) -> Result<Vec<(f64, f64)>> {
    magnetization_trace_exact_from(params, DEFAULT_SUBSTEPS_PER_DT)
}
