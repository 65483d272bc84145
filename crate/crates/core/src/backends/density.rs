//! Density-matrix backend with gate-attached noise channels.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::noise::{
    amplitude_damping, depolarizing_1q, depolarizing_2q, phase_damping, readout_adjust,
    relaxation_strengths, NoiseProfile,
};
use super::statevector::StateVector;
use super::{apply_local_op, LocalOp};
use crate::compiler::{Circuit, Gate};
use crate::error::{Error, Result};

/// Density matrices are refused above this many qubits unless the caller
/// raises the cap; memory grows as 4^N.
pub const DEFAULT_MAX_DENSITY_QUBITS: usize = 8;

/// Hermitian, trace-one, positive-semidefinite operator state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Pure all-spins-up state |0...0><0...0|.
    pub fn all_up(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut mat = DMatrix::zeros(dim, dim);
        mat[(0, 0)] = Complex64::new(1.0, 0.0);
        Self { n_qubits, mat }
    }

    /// Outer product |psi><psi| of a pure state.
    pub fn from_statevector(state: &StateVector) -> Self {
        let dim = state.dim();
        let amps = state.amplitudes();
        let mut mat = DMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                mat[(r, c)] = amps[r] * amps[c].conj();
            }
        }
        Self {
            n_qubits: state.n_qubits(),
            mat,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.diagonal().sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.mat - self.mat.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let eig = nalgebra::SymmetricEigen::new(self.mat.clone());
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Computational-basis outcome distribution, the real diagonal. Tiny
    /// negative entries from floating-point noise are clamped to zero.
    pub fn probabilities(&self) -> Vec<f64> {
        self.mat
            .diagonal()
            .iter()
            .map(|c| if c.re > 0.0 { c.re } else { 0.0 })
            .collect()
    }

    /// Check the state invariants: Hermiticity and unit trace within
    /// `tol`, minimum eigenvalue above `-eig_tol`.
    pub fn validate(&self, tol: f64, eig_tol: f64) -> Result<()> {
        let herm = self.hermiticity_defect();
        if herm > tol {
            return Err(Error::InvalidParams(format!(
                "density matrix not Hermitian: defect {herm:e}"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidParams(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -eig_tol {
            return Err(Error::InvalidParams(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }

    /// Conjugate by a unitary gate: rho -> U rho U^dag.
    pub fn apply_unitary(&mut self, gate: &Gate) -> Result<()> {
        if !gate.is_unitary() {
            return Err(Error::MeasureNotUnitary);
        }
        gate.validate(self.n_qubits)?;
        let op = super::local_op(gate)?;
        self.mat = sandwich(&self.mat, &op);
        Ok(())
    }

    fn apply_kraus_set(&mut self, ops: &[LocalOp]) {
        let dim = self.dim();
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        for op in ops {
            acc += sandwich(&self.mat, op);
        }
        self.mat = acc;
    }
}

/// K rho K^dag through the column kernels: apply K to every column, adjoint,
/// apply K again, adjoint back. Works for non-unitary K.
fn sandwich(rho: &DMatrix<Complex64>, op: &LocalOp) -> DMatrix<Complex64> {
    let dim = rho.nrows();
    let mut work = rho.clone();
    apply_to_columns(&mut work, op, dim);
    let mut work = work.adjoint();
    apply_to_columns(&mut work, op, dim);
    work.adjoint()
}

fn apply_to_columns(mat: &mut DMatrix<Complex64>, op: &LocalOp, dim: usize) {
    let data = mat.as_mut_slice(); // column-major
    for col in 0..dim {
        apply_local_op(&mut data[col * dim..(col + 1) * dim], op);
    }
}

fn local_ops_from_kraus(kraus: &[Vec<Complex64>], qubits: &[usize]) -> Result<Vec<LocalOp>> {
    let ldim = 1usize << qubits.len();
    let mut ops = Vec::with_capacity(kraus.len());
    for k in kraus {
        if k.len() != ldim * ldim {
            return Err(Error::InvalidGate(format!(
                "Kraus operator has {} entries, expected {}",
                k.len(),
                ldim * ldim
            )));
        }
        let op = match qubits {
            [q] => {
                let mut m = [[Complex64::default(); 2]; 2];
                for r in 0..2 {
                    for c in 0..2 {
                        m[r][c] = k[r * 2 + c];
                    }
                }
                LocalOp::One(m, *q)
            }
            [a, b] => {
                let mut m = [[Complex64::default(); 4]; 4];
                for r in 0..4 {
                    for c in 0..4 {
                        m[r][c] = k[r * 4 + c];
                    }
                }
                LocalOp::Two(m, *a, *b)
            }
            _ => {
                return Err(Error::InvalidGate(format!(
                    "channels support 1 or 2 qubits, got {}",
                    qubits.len()
                )))
            }
        };
        ops.push(op);
    }
    Ok(ops)
}

/// Largest deviation of sum(K^dag K) from the identity.
fn completeness_defect(kraus: &[Vec<Complex64>], ldim: usize) -> f64 {
    let mut sum = vec![Complex64::new(0.0, 0.0); ldim * ldim];
    for k in kraus {
        for r in 0..ldim {
            for c in 0..ldim {
                for m in 0..ldim {
                    sum[r * ldim + c] += k[m * ldim + r].conj() * k[m * ldim + c];
                }
            }
        }
    }
    let mut defect = 0.0f64;
    for r in 0..ldim {
        for c in 0..ldim {
            let want = if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            defect = defect.max((sum[r * ldim + c] - want).norm());
        }
    }
    defect
}

/// Apply a CPTP channel given by row-major local Kraus operators acting on
/// `qubits`. The completeness relation is checked to 1e-10 before applying.
pub fn apply_channel(
    rho: &DensityMatrix,
    kraus: &[Vec<Complex64>],
    qubits: &[usize],
) -> Result<DensityMatrix> {
    for &q in qubits {
        if q >= rho.n_qubits() {
            return Err(Error::InvalidGate(format!(
                "channel qubit {q} out of range for {} qubits",
                rho.n_qubits()
            )));
        }
    }
    if qubits.len() == 2 && qubits[0] == qubits[1] {
        return Err(Error::InvalidGate("channel uses a qubit twice".into()));
    }
    let ldim = 1usize << qubits.len();
    let defect = completeness_defect(kraus, ldim);
    if defect > 1e-10 {
        return Err(Error::NonCptpKraus { deviation: defect });
    }
    let ops = local_ops_from_kraus(kraus, qubits)?;
    let mut out = rho.clone();
    out.apply_kraus_set(&ops);
    Ok(out)
}

/// Options for the noisy backend.
#[derive(Debug, Clone, Copy)]
pub struct NoisyOptions {
    /// Register-size cap; 4^N memory makes large N impractical.
    pub max_qubits: usize,
    /// When set, qubits idle during a gate relax for the gate's duration too.
    pub idle_relaxation: bool,
}

impl Default for NoisyOptions {
    fn default() -> Self {
        Self {
            max_qubits: DEFAULT_MAX_DENSITY_QUBITS,
            idle_relaxation: false,
        }
    }
}

/// Noisy run with default options. See [`run_noisy_with`].
pub fn run_noisy(circuit: &Circuit, noise: &NoiseProfile) -> Result<(DensityMatrix, Vec<f64>)> {
    run_noisy_with(circuit, noise, NoisyOptions::default())
}

/// Evolve a density matrix through the circuit, attaching depolarizing and
/// thermal-relaxation channels after each gate on the qubits it touches,
/// then push the final diagonal through the readout confusion matrices.
pub fn run_noisy_with(
    circuit: &Circuit,
    noise: &NoiseProfile,
    options: NoisyOptions,
) -> Result<(DensityMatrix, Vec<f64>)> {
    noise.validate()?;
    let n = circuit.n_qubits();
    if n > options.max_qubits {
        return Err(Error::DimensionOverflow {
            n_qubits: n,
            max_qubits: options.max_qubits,
        });
    }
    let mut rho = DensityMatrix::all_up(n);
    let relax = noise.relaxation_enabled();

    for gate in circuit.unitary_gates() {
        rho.apply_unitary(gate)?;
        let touched = gate.qubits();
        let (depol, dur) = if touched.len() == 2 {
            (noise.depol_2q, noise.dur_2q_ns)
        } else {
            (noise.depol_1q, noise.dur_1q_ns)
        };

        if depol > 0.0 {
            if touched.len() == 2 {
                let ops = local_ops_from_kraus(&depolarizing_2q(depol), &touched)?;
                rho.apply_kraus_set(&ops);
            } else {
                let ops = local_ops_from_kraus(&depolarizing_1q(depol), &touched)?;
                rho.apply_kraus_set(&ops);
            }
        }

        if relax {
            let (gamma, lambda) = relaxation_strengths(noise, dur);
            let targets: Vec<usize> = if options.idle_relaxation {
                (0..n).collect()
            } else {
                touched.clone()
            };
            for q in targets {
                if gamma > 0.0 {
                    let ops = local_ops_from_kraus(&amplitude_damping(gamma), &[q])?;
                    rho.apply_kraus_set(&ops);
                }
                if lambda > 0.0 {
                    let ops = local_ops_from_kraus(&phase_damping(lambda), &[q])?;
                    rho.apply_kraus_set(&ops);
                }
            }
        }
    }

    let probs = readout_adjust(&rho.probabilities(), noise)?;
    Ok((rho, probs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::noise::ReadoutError;
    use crate::backends::statevector::{init_all_up, run_statevector};
    use crate::compiler::compile_circuit;
    use crate::model::SpinChainParams;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    fn random_circuit(n: usize, gates: usize, seed: u64) -> Circuit {
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let mut list = Vec::with_capacity(gates);
        for _ in 0..gates {
            let q = rng.gen_range(0..n);
            let angle = rng.gen_range(-3.0..3.0);
            let gate = match rng.gen_range(0..4) {
                0 => Gate::Rx { qubit: q, angle },
                1 => Gate::Rz { qubit: q, angle },
                2 => {
                    let r = (q + rng.gen_range(1..n)) % n;
                    Gate::Rzz { a: q, b: r, angle }
                }
                _ => {
                    let r = (q + rng.gen_range(1..n)) % n;
                    Gate::Cnot {
                        control: q,
                        target: r,
                    }
                }
            };
            list.push(gate);
        }
        Circuit::new(n, list).unwrap()
    }

    #[test]
    fn identity_channel_preserves_state() {
        let rho = DensityMatrix::all_up(2);
        let eye = vec![vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]];
        let out = apply_channel(&rho, &eye, &[0]).unwrap();
        assert_eq!(out.matrix(), rho.matrix());
    }

    #[test]
    fn full_depolarizing_yields_maximally_mixed_qubit() {
        let mut rho = DensityMatrix::all_up(1);
        rho.apply_unitary(&Gate::Rx {
            qubit: 0,
            angle: 0.7,
        })
        .unwrap();
        let out = apply_channel(&rho, &depolarizing_1q(1.0), &[0]).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                let want = if r == c { 0.5 } else { 0.0 };
                assert!((out.matrix()[(r, c)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn full_amplitude_damping_resets_excited_state() {
        let mut rho = DensityMatrix::all_up(1);
        rho.apply_unitary(&Gate::Rx {
            qubit: 0,
            angle: std::f64::consts::PI,
        })
        .unwrap();
        // now |1><1|
        assert!((rho.matrix()[(1, 1)].re - 1.0).abs() < 1e-12);
        let out = apply_channel(&rho, &amplitude_damping(1.0), &[0]).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(out.matrix()[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn non_cptp_set_is_rejected() {
        let rho = DensityMatrix::all_up(1);
        let bad = vec![vec![
            Complex64::new(0.9, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.9, 0.0),
        ]];
        assert!(matches!(
            apply_channel(&rho, &bad, &[0]),
            Err(Error::NonCptpKraus { .. })
        ));
    }

    #[test]
    fn zero_noise_matches_statevector_distribution() {
        let p = SpinChainParams::new(3, 0.01, 0.01, 4.8, 3.0, 40).unwrap();
        let c = compile_circuit(&p, 5).unwrap();
        let (_, sv_probs) = run_statevector(&c).unwrap();
        let (rho, dm_probs) = run_noisy(&c, &NoiseProfile::ideal()).unwrap();
        let tv: f64 = sv_probs
            .iter()
            .zip(dm_probs.iter())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 1e-10, "total variation {tv}");
        rho.validate(1e-9, 1e-8).unwrap();
    }

    #[test]
    fn unitary_evolution_tracks_pure_state_outer_product() {
        let c = random_circuit(3, 40, 11);
        let mut rho = DensityMatrix::all_up(3);
        let mut psi = init_all_up(3);
        for g in c.unitary_gates() {
            rho.apply_unitary(g).unwrap();
            psi.apply(g).unwrap();
        }
        let outer = DensityMatrix::from_statevector(&psi);
        let diff = (rho.matrix() - outer.matrix())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10, "max deviation {diff}");
    }

    #[test]
    fn cptp_invariants_hold_through_noisy_evolution() {
        let p = SpinChainParams::new(4, 0.01, 0.05, 4.8, 3.0, 40).unwrap();
        let c = compile_circuit(&p, 10).unwrap();
        let (rho, probs) = run_noisy(&c, &NoiseProfile::nisq_2019()).unwrap();
        rho.validate(1e-9, 1e-8).unwrap();
        let total: f64 = probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn readout_bias_shows_at_time_zero() {
        // measurement-only circuit, symmetric readout p: mz = 1 - 2p
        let p = SpinChainParams::new(3, 0.01, 0.01, 4.8, 3.0, 40).unwrap();
        let c = compile_circuit(&p, 0).unwrap();
        let mut noise = NoiseProfile::ideal();
        noise.readout = ReadoutError::symmetric(0.05);
        let (_, probs) = run_noisy(&c, &noise).unwrap();
        let mz = crate::sampling::magnetization_of_distribution(&probs, 3);
        assert!((mz - 0.9).abs() < 1e-10);

        let mut asym = NoiseProfile::ideal();
        asym.readout = ReadoutError { p01: 0.02, p10: 0.08 };
        let (_, probs) = run_noisy(&c, &asym).unwrap();
        let mz = crate::sampling::magnetization_of_distribution(&probs, 3);
        assert!((mz - 0.96).abs() < 1e-10);
    }

    #[test]
    fn register_cap_is_enforced() {
        let p = SpinChainParams::new(9, 0.01, 0.01, 4.8, 3.0, 1).unwrap();
        let c = compile_circuit(&p, 1).unwrap();
        assert!(matches!(
            run_noisy(&c, &NoiseProfile::ideal()),
            Err(Error::DimensionOverflow { .. })
        ));
        let opts = NoisyOptions {
            max_qubits: 9,
            ..Default::default()
        };
        assert!(run_noisy_with(&c, &NoiseProfile::ideal(), opts).is_ok());
    }

    #[test]
    fn idle_relaxation_decays_untouched_qubits() {
        let mut noise = NoiseProfile::ideal();
        noise.t1_ns = 100.0;
        noise.t2_ns = 100.0;
        noise.dur_1q_ns = 50.0;
        // excite qubit 1, then run a gate on qubit 0 only
        let gates = vec![
            Gate::Rx {
                qubit: 1,
                angle: std::f64::consts::PI,
            },
            Gate::Rx { qubit: 0, angle: 0.0 },
        ];
        let c = Circuit::new(2, gates).unwrap();
        let (rho_no_idle, _) = run_noisy(&c, &noise).unwrap();
        let (rho_idle, _) = run_noisy_with(
            &c,
            &noise,
            NoisyOptions {
                idle_relaxation: true,
                ..Default::default()
            },
        )
        .unwrap();
        // with idling noise the excited qubit decays further
        let p1_no_idle = rho_no_idle.matrix()[(2, 2)].re;
        let p1_idle = rho_idle.matrix()[(2, 2)].re;
        assert!(p1_idle < p1_no_idle);
    }

    #[test]
    fn readout_monotonically_shrinks_t0_magnetization() {
        let p = SpinChainParams::new(2, 0.01, 0.01, 4.8, 3.0, 40).unwrap();
        let c = compile_circuit(&p, 0).unwrap();
        let mut last = 1.0;
        for prob in [0.0, 0.02, 0.1, 0.3] {
            let mut noise = NoiseProfile::ideal();
            noise.readout = ReadoutError::symmetric(prob);
            let (_, probs) = run_noisy(&c, &noise).unwrap();
            let mz = crate::sampling::magnetization_of_distribution(&probs, 2);
            assert!((mz - (1.0 - 2.0 * prob)).abs() < 1e-12);
            if prob > 0.0 {
                assert!(mz < last);
            }
            last = mz;
        }
    }
}
