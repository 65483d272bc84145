//! Ideal pure-state backend.

use num_complex::Complex64;

use super::{apply_local_op, local_op};
use crate::compiler::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::model::z_sign;

/// Normalized complex amplitude vector over the 2^N computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// State with amplitude 1 on the given basis index.
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::InvalidParams(format!(
                "amplitude vector length {} does not match {} qubits",
                amps.len(),
                n_qubits
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Outcome probabilities |psi_b|^2.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply one unitary gate in place. Measurements are rejected: sampling
    /// from the final distribution is the sampling module's job.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        if !gate.is_unitary() {
            return Err(Error::MeasureNotUnitary);
        }
        gate.validate(self.n_qubits)?;
        apply_local_op(&mut self.amps, &local_op(gate)?);
        Ok(())
    }
}

/// Register prepared in the all-spins-up (all-zeros) configuration.
pub fn init_all_up(n_qubits: usize) -> StateVector {
    StateVector::basis_state(n_qubits, 0)
}

/// Expectation of sigma^z on qubit `i`.
pub fn expectation_sigma_z(state: &StateVector, i: usize) -> f64 {
    state
        .amps
        .iter()
        .enumerate()
        .map(|(b, a)| a.norm_sqr() * z_sign(b, i))
        .sum()
}

/// Average magnetization, the mean of sigma^z expectations over the chain.
pub fn average_magnetization(state: &StateVector) -> f64 {
    (0..state.n_qubits)
        .map(|i| expectation_sigma_z(state, i))
        .sum::<f64>()
        / state.n_qubits as f64
}

/// Execute a circuit's unitary part from the all-up state and return the
/// final state together with its outcome distribution.
pub fn run_statevector(circuit: &Circuit) -> Result<(StateVector, Vec<f64>)> {
    let mut state = init_all_up(circuit.n_qubits());
    for gate in circuit.unitary_gates() {
        state.apply(gate)?;
    }
    let probs = state.probabilities();
    Ok((state, probs))
}

/// Phase-insensitive distance min over phi of ||a - e^{i phi} b||_2.
pub fn phase_insensitive_distance(a: &StateVector, b: &StateVector) -> f64 {
    let overlap = a.inner(b).norm();
    (2.0 * (1.0 - overlap.min(1.0))).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile_circuit;
    use crate::model::SpinChainParams;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    #[test]
    fn all_up_state_is_all_zeros_register() {
        let s = init_all_up(2);
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
        assert_eq!(average_magnetization(&s), 1.0);
        let s1 = init_all_up(1);
        assert_eq!(s1.dim(), 2);
        assert_eq!(s1.amplitudes()[0], Complex64::new(1.0, 0.0));
        for n in 1..6 {
            assert_eq!(average_magnetization(&init_all_up(n)), 1.0);
        }
    }

    #[test]
    fn rx_pi_flips_a_qubit() {
        let mut s = init_all_up(1);
        s.apply(&Gate::Rx {
            qubit: 0,
            angle: std::f64::consts::PI,
        })
        .unwrap();
        // -i |1>
        assert!((s.amplitudes()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((expectation_sigma_z(&s, 0) - (-1.0)).abs() < 1e-15);
    }

    #[test]
    fn rx_half_pi_gives_balanced_superposition() {
        let mut s = init_all_up(1);
        s.apply(&Gate::Rx {
            qubit: 0,
            angle: std::f64::consts::FRAC_PI_2,
        })
        .unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - inv_sqrt2).abs() < 1e-15);
        assert!((s.amplitudes()[1].im - (-inv_sqrt2)).abs() < 1e-15);
        assert!(expectation_sigma_z(&s, 0).abs() < 1e-15);
    }

    #[test]
    fn rzz_on_basis_state_changes_no_probability() {
        let mut s = init_all_up(2);
        let before = s.probabilities();
        s.apply(&Gate::Rzz {
            a: 0,
            b: 1,
            angle: 1.234,
        })
        .unwrap();
        let after = s.probabilities();
        for (x, y) in before.iter().zip(after.iter()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn flipping_one_of_two_qubits_zeroes_magnetization() {
        let mut s = init_all_up(2);
        s.apply(&Gate::Rx {
            qubit: 0,
            angle: std::f64::consts::PI,
        })
        .unwrap();
        assert!((expectation_sigma_z(&s, 0) + 1.0).abs() < 1e-15);
        assert!((expectation_sigma_z(&s, 1) - 1.0).abs() < 1e-15);
        assert!(average_magnetization(&s).abs() < 1e-15);
    }

    #[test]
    fn superposition_has_zero_z_expectation() {
        let s = StateVector::from_amplitudes(
            1,
            vec![
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ],
        )
        .unwrap();
        assert!(expectation_sigma_z(&s, 0).abs() < 1e-15);
    }

    #[test]
    fn measurement_only_circuit_leaves_all_up() {
        let p = SpinChainParams::new(3, 0.01, 0.01, 4.8, 3.0, 40).unwrap();
        let c = compile_circuit(&p, 0).unwrap();
        let (state, probs) = run_statevector(&c).unwrap();
        assert_eq!(probs[0], 1.0);
        assert!((average_magnetization(&state) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weak_drive_keeps_magnetization_high() {
        // cross-checked against the exact propagator: at eps = 0.2 J_z the
        // two-qubit trace never dips below 0.9 over the 120 fs horizon
        let p = SpinChainParams::new(2, 0.01, 0.002, 4.8, 3.0, 40).unwrap();
        let mut min_mz = f64::INFINITY;
        for n in 0..=40 {
            let c = compile_circuit(&p, n).unwrap();
            let (state, _) = run_statevector(&c).unwrap();
            min_mz = min_mz.min(average_magnetization(&state));
        }
        assert!(min_mz > 0.9, "min mz {min_mz}");
    }

    #[test]
    fn probabilities_sum_to_one() {
        let p = SpinChainParams::new(4, 0.01, 0.01, 4.8, 3.0, 40).unwrap();
        let c = compile_circuit(&p, 10).unwrap();
        let (_, probs) = run_statevector(&c).unwrap();
        let total: f64 = probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn measure_application_is_rejected() {
        let mut s = init_all_up(1);
        assert!(matches!(
            s.apply(&Gate::Measure { qubit: 0 }),
            Err(Error::MeasureNotUnitary)
        ));
    }

    #[test]
    fn norm_survives_a_thousand_random_gates() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(0xC0FFEE);
        let n = 5;
        let mut s = init_all_up(n);
        for _ in 0..1000 {
            let angle = rng.gen_range(-3.0..3.0);
            let q = rng.gen_range(0..n);
            let gate = match rng.gen_range(0..4) {
                0 => Gate::Rx { qubit: q, angle },
                1 => Gate::Rz { qubit: q, angle },
                2 => {
                    let mut r = rng.gen_range(0..n);
                    if r == q {
                        r = (r + 1) % n;
                    }
                    Gate::Rzz { a: q, b: r, angle }
                }
                _ => {
                    let mut r = rng.gen_range(0..n);
                    if r == q {
                        r = (r + 1) % n;
                    }
                    Gate::Cnot {
                        control: q,
                        target: r,
                    }
                }
            };
            s.apply(&gate).unwrap();
        }
        assert!((s.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn phase_insensitive_distance_ignores_global_phase() {
        let s = init_all_up(2);
        let mut rotated = s.clone();
        let phase = Complex64::from_polar(1.0, 1.1);
        let amps: Vec<Complex64> = rotated.amplitudes().iter().map(|a| a * phase).collect();
        rotated = StateVector::from_amplitudes(2, amps).unwrap();
        assert!(phase_insensitive_distance(&s, &rotated) < 1e-15);
    }
}
