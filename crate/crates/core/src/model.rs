//! Physical model of the driven spin chain.
//!
//! The chain Hamiltonian combines a nearest-neighbour Ising exchange along z
//! with an oscillating transverse field along x:
//!
//! ```text
//! H(t) = -J_z sum_i sigma^z_i sigma^z_{i+1}  -  J_X(t) sum_i sigma^x_i
//! J_X(t) = eps_ph * cos(2 pi f_ph t)
//! ```
//!
//! Working units are eV for energies, fs for times and THz for the drive
//! frequency, with hbar = 0.6582119569 eV fs. Every evolution phase is
//! E * dt / hbar.
//!
//! Basis convention: qubit `i` is bit `i` of the basis-state index, and bit
//! value 0 means spin up (sigma^z = +1). The all-zeros register is the fully
//! polarized "all spins up" state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant in eV fs.
pub const HBAR_EV_FS: f64 = 0.6582119569;

/// One THz is 1e-3 cycles per fs.
pub const THZ_TO_CYCLES_PER_FS: f64 = 1e-3;

/// Dense matrices are refused above this many qubits unless a caller
/// overrides the cap explicitly.
pub const DEFAULT_MAX_DENSE_QUBITS: usize = 12;

/// All physical and discretization parameters of one chain configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinChainParams {
    /// Number of spins N (open chain, N-1 bonds).
    pub n_qubits: usize,
    /// Exchange coupling in eV; positive is ferromagnetic, negative
    /// antiferromagnetic.
    pub j_z: f64,
    /// Drive amplitude in eV.
    pub eps_ph: f64,
    /// Drive frequency in THz.
    pub f_ph: f64,
    /// Time step in fs.
    pub dt: f64,
    /// Number of Trotter steps in the horizon.
    pub n_steps: usize,
}

impl SpinChainParams {
    pub fn new(
        n_qubits: usize,
        j_z: f64,
        eps_ph: f64,
        f_ph: f64,
        dt: f64,
        n_steps: usize,
    ) -> Result<Self> {
        let params = Self {
            n_qubits,
            j_z,
            eps_ph,
            f_ph,
            dt,
            n_steps,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 1 {
            return Err(Error::InvalidParams("n_qubits must be >= 1".into()));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParams(format!(
                "dt must be > 0 fs, got {}",
                self.dt
            )));
        }
        if !(self.f_ph >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "f_ph must be >= 0 THz, got {}",
                self.f_ph
            )));
        }
        for (name, v) in [("j_z", self.j_z), ("eps_ph", self.eps_ph)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Angular drive frequency in rad/fs.
    pub fn omega_rad_per_fs(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.f_ph * THZ_TO_CYCLES_PER_FS
    }

    /// Drive period in fs (infinite for a static field).
    pub fn drive_period_fs(&self) -> f64 {
        if self.f_ph > 0.0 {
            1.0 / (self.f_ph * THZ_TO_CYCLES_PER_FS)
        } else {
            f64::INFINITY
        }
    }

    /// Simulated horizon n_steps * dt in fs.
    pub fn horizon_fs(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    /// Hilbert-space dimension 2^N.
    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }
}

/// Instantaneous transverse-field amplitude J_X(t) in eV.
pub fn transverse_field(params: &SpinChainParams, t_fs: f64) -> f64 {
    params.eps_ph * (params.omega_rad_per_fs() * t_fs).cos()
}

/// Dense operator on the full register: 2^N x 2^N complex matrix.
///
/// Entries are in eV for Hamiltonians and dimensionless for unitaries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    mat: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidParams(format!(
                "operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { mat })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.mat.adjoint();
        (&self.mat - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest elementwise deviation from unitarity, max |U^dag U - I|.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.mat.adjoint() * &self.mat;
        let eye = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        (prod - eye).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest elementwise |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

fn check_dense_cap(n_qubits: usize, max_qubits: usize) -> Result<()> {
    if n_qubits > max_qubits {
        return Err(Error::DimensionOverflow {
            n_qubits,
            max_qubits,
        });
    }
    Ok(())
}

/// Sign of sigma^z for qubit `i` in basis state `b`: bit 0 is +1 (spin up).
#[inline]
pub fn z_sign(b: usize, i: usize) -> f64 {
    if (b >> i) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Static exchange part H_z = -J_z sum_i sigma^z_i sigma^z_{i+1}.
///
/// Diagonal in the computational basis; an N=1 chain has no bonds and yields
/// the zero operator.
pub fn build_hz(params: &SpinChainParams) -> Result<DenseOperator> {
    build_hz_capped(params, DEFAULT_MAX_DENSE_QUBITS)
}

pub fn build_hz_capped(params: &SpinChainParams, max_qubits: usize) -> Result<DenseOperator> {
    params.validate()?;
    check_dense_cap(params.n_qubits, max_qubits)?;
    let dim = params.dim();
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for b in 0..dim {
        let bonds: f64 = (0..params.n_qubits.saturating_sub(1))
            .map(|i| z_sign(b, i) * z_sign(b, i + 1))
            .sum();
        mat[(b, b)] = Complex64::new(-params.j_z * bonds, 0.0);
    }
    Ok(DenseOperator { mat })
}

/// Sum of single-qubit sigma^x embeddings, sum_i X_i.
pub fn sum_sigma_x(n_qubits: usize) -> DenseOperator {
    let dim = 1usize << n_qubits;
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    let one = Complex64::new(1.0, 0.0);
    for b in 0..dim {
        for i in 0..n_qubits {
            mat[(b ^ (1 << i), b)] += one;
        }
    }
    DenseOperator { mat }
}

/// Full Hamiltonian H(t) = H_z - J_X(t) sum_i X_i.
pub fn build_h(params: &SpinChainParams, t_fs: f64) -> Result<DenseOperator> {
    build_h_capped(params, t_fs, DEFAULT_MAX_DENSE_QUBITS)
}

pub fn build_h_capped(
    params: &SpinChainParams,
    t_fs: f64,
    max_qubits: usize,
) -> Result<DenseOperator> {
    let hz = build_hz_capped(params, max_qubits)?;
    let jx = transverse_field(params, t_fs);
    let sx = sum_sigma_x(params.n_qubits);
    let mat = hz.mat - sx.mat * Complex64::new(jx, 0.0);
    Ok(DenseOperator { mat })
}
