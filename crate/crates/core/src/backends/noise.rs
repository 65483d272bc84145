//! Noise model: readout confusion, depolarizing gate errors and thermal
//! relaxation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-qubit readout confusion probabilities.
///
/// `p01` is the chance of reading 1 when the qubit is in state 0, `p10` the
/// chance of reading 0 from state 1. The confusion matrix acting on the
/// (p_read0, p_read1) column is `[[1-p01, p10], [p01, 1-p10]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutError {
    pub p01: f64,
    pub p10: f64,
}

impl ReadoutError {
    pub const NONE: ReadoutError = ReadoutError { p01: 0.0, p10: 0.0 };

    pub fn symmetric(p: f64) -> Self {
        Self { p01: p, p10: p }
    }

    pub fn is_zero(&self) -> bool {
        self.p01 == 0.0 && self.p10 == 0.0
    }
}

/// Full noise description for a backend run.
///
/// Durations and decoherence times are in ns. Relaxation for a gate of
/// duration `dur` applies amplitude damping with gamma = 1 - exp(-dur/t1)
/// composed with pure dephasing at the excess rate 1/t2 - 1/(2 t1); the
/// degenerate case t2 = 2 t1 dephases through damping alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseProfile {
    /// Readout confusion applied to every qubit.
    #[serde(default = "ReadoutError::none")]
    pub readout: ReadoutError,
    /// Optional per-qubit readout overrides (indexed by qubit).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readout_per_qubit: Option<Vec<ReadoutError>>,
    /// Depolarizing probability after each single-qubit gate.
    #[serde(default)]
    pub depol_1q: f64,
    /// Depolarizing probability after each two-qubit gate.
    #[serde(default)]
    pub depol_2q: f64,
    /// Relaxation time T1 in ns (0 disables damping).
    #[serde(default)]
    pub t1_ns: f64,
    /// Dephasing time T2 in ns (0 disables dephasing).
    #[serde(default)]
    pub t2_ns: f64,
    /// Single-qubit gate duration in ns.
    #[serde(default)]
    pub dur_1q_ns: f64,
    /// Two-qubit gate duration in ns.
    #[serde(default)]
    pub dur_2q_ns: f64,
}

impl ReadoutError {
    fn none() -> Self {
        Self::NONE
    }
}

impl NoiseProfile {
    /// All channels disabled; run_noisy reproduces the statevector backend.
    pub fn ideal() -> Self {
        Self {
            readout: ReadoutError::NONE,
            readout_per_qubit: None,
            depol_1q: 0.0,
            depol_2q: 0.0,
            t1_ns: 0.0,
            t2_ns: 0.0,
            dur_1q_ns: 0.0,
            dur_2q_ns: 0.0,
        }
    }

    /// Representative 2019-era superconducting-device numbers.
    pub fn nisq_2019() -> Self {
        Self {
            readout: ReadoutError::symmetric(0.03),
            readout_per_qubit: None,
            depol_1q: 0.001,
            depol_2q: 0.02,
            t1_ns: 50_000.0,
            t2_ns: 60_000.0,
            dur_1q_ns: 50.0,
            dur_2q_ns: 300.0,
        }
    }

    /// Look up a built-in profile by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "ideal" => Some(Self::ideal()),
            "nisq-2019" => Some(Self::nisq_2019()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check_prob = |name: &str, p: f64| -> Result<()> {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidNoiseProfile(format!(
                    "{name} = {p} outside [0, 1]"
                )));
            }
            Ok(())
        };
        check_prob("readout.p01", self.readout.p01)?;
        check_prob("readout.p10", self.readout.p10)?;
        if let Some(list) = &self.readout_per_qubit {
            for (i, r) in list.iter().enumerate() {
                check_prob(&format!("readout_per_qubit[{i}].p01"), r.p01)?;
                check_prob(&format!("readout_per_qubit[{i}].p10"), r.p10)?;
            }
        }
        check_prob("depol_1q", self.depol_1q)?;
        check_prob("depol_2q", self.depol_2q)?;
        for (name, v) in [
            ("t1_ns", self.t1_ns),
            ("t2_ns", self.t2_ns),
            ("dur_1q_ns", self.dur_1q_ns),
            ("dur_2q_ns", self.dur_2q_ns),
        ] {
            if !(v >= 0.0) {
                return Err(Error::InvalidNoiseProfile(format!("{name} = {v} negative")));
            }
        }
        if self.t2_ns > 2.0 * self.t1_ns {
            return Err(Error::InvalidNoiseProfile(format!(
                "t2 = {} exceeds 2*t1 = {}",
                self.t2_ns,
                2.0 * self.t1_ns
            )));
        }
        Ok(())
    }

    /// Readout error for a specific qubit.
    pub fn readout_for(&self, qubit: usize) -> ReadoutError {
        self.readout_per_qubit
            .as_ref()
            .and_then(|v| v.get(qubit).copied())
            .unwrap_or(self.readout)
    }

    /// True when every channel is a no-op.
    pub fn is_noiseless(&self) -> bool {
        self.depol_1q == 0.0
            && self.depol_2q == 0.0
            && !self.relaxation_enabled()
            && self.readout.is_zero()
            && self
                .readout_per_qubit
                .as_ref()
                .is_none_or(|v| v.iter().all(|r| r.is_zero()))
    }

    pub(crate) fn relaxation_enabled(&self) -> bool {
        (self.t1_ns > 0.0 || self.t2_ns > 0.0) && (self.dur_1q_ns > 0.0 || self.dur_2q_ns > 0.0)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Kraus set of the single-qubit depolarizing channel,
/// rho -> (1-p) rho + p I/2: weights sqrt(1 - 3p/4) on I and sqrt(p/4) on
/// each Pauli, so p = 1 fully mixes any input.
pub fn depolarizing_1q(p: f64) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let k_i = c((1.0 - 3.0 * p / 4.0).sqrt());
    let k_p = c((p / 4.0).sqrt());
    vec![
        vec![k_i, zero, zero, k_i],          // sqrt(1-3p/4) I
        vec![zero, k_p, k_p, zero],          // sqrt(p/4) X
        vec![zero, -i * k_p, i * k_p, zero], // sqrt(p/4) Y
        vec![k_p, zero, zero, -k_p],         // sqrt(p/4) Z
    ]
}

/// Kraus set of the two-qubit depolarizing channel,
/// rho -> (1-p) rho + p I/4: the 16-element Pauli twirl with weight
/// sqrt(p/16) on every non-identity pair.
pub fn depolarizing_2q(p: f64) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let paulis: [[Complex64; 4]; 4] = [
        [c(1.0), zero, zero, c(1.0)],  // I
        [zero, c(1.0), c(1.0), zero],  // X
        [zero, -i, i, zero],           // Y
        [c(1.0), zero, zero, c(-1.0)], // Z
    ];
    let mut out = Vec::with_capacity(16);
    for pa in 0..4 {
        for pb in 0..4 {
            let weight = if pa == 0 && pb == 0 {
                (1.0 - 15.0 * p / 16.0).sqrt()
            } else {
                (p / 16.0).sqrt()
            };
            // kron with qubit a = local bit 0: element ((ra, rb), (ca, cb))
            let mut k = vec![zero; 16];
            for ra in 0..2 {
                for ca in 0..2 {
                    for rb in 0..2 {
                        for cb in 0..2 {
                            let row = ra + 2 * rb;
                            let col = ca + 2 * cb;
                            k[row * 4 + col] =
                                c(weight) * paulis[pa][ra * 2 + ca] * paulis[pb][rb * 2 + cb];
                        }
                    }
                }
            }
            out.push(k);
        }
    }
    out
}

/// Kraus set of amplitude damping toward |0> with strength `gamma`.
pub fn amplitude_damping(gamma: f64) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    vec![
        vec![c(1.0), zero, zero, c((1.0 - gamma).sqrt())],
        vec![zero, c(gamma.sqrt()), zero, zero],
    ]
}

/// Kraus set of pure dephasing with phase-flip weight `lambda`.
pub fn phase_damping(lambda: f64) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    vec![
        vec![c(1.0), zero, zero, c((1.0 - lambda).sqrt())],
        vec![zero, zero, zero, c(lambda.sqrt())],
    ]
}

/// Thermal-relaxation parameters for one gate duration: amplitude-damping
/// gamma then pure-dephasing lambda. Either may be zero.
pub(crate) fn relaxation_strengths(profile: &NoiseProfile, dur_ns: f64) -> (f64, f64) {
    if dur_ns <= 0.0 {
        return (0.0, 0.0);
    }
    let gamma = if profile.t1_ns > 0.0 {
        1.0 - (-dur_ns / profile.t1_ns).exp()
    } else {
        0.0
    };
    let lambda = if profile.t2_ns > 0.0 {
        let half_t1_rate = if profile.t1_ns > 0.0 {
            0.5 / profile.t1_ns
        } else {
            0.0
        };
        let excess = (1.0 / profile.t2_ns - half_t1_rate).max(0.0);
        1.0 - (-2.0 * dur_ns * excess).exp()
    } else {
        0.0
    };
    (gamma, lambda)
}

/// Push an outcome distribution through each qubit's confusion matrix.
pub fn readout_adjust(probs: &[f64], noise: &NoiseProfile) -> Result<Vec<f64>> {
    let dim = probs.len();
    if !dim.is_power_of_two() {
        return Err(Error::InvalidDistribution(format!(
            "length {dim} is not a power of two"
        )));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    let n_qubits = dim.trailing_zeros() as usize;
    let mut out = probs.to_vec();
    for q in 0..n_qubits {
        let r = noise.readout_for(q);
        if r.is_zero() {
            continue;
        }
        let bit = 1usize << q;
        let mut base = 0;
        while base < dim {
            for i in base..base + bit {
                let j = i | bit;
                let p0 = out[i];
                let p1 = out[j];
                out[i] = (1.0 - r.p01) * p0 + r.p10 * p1;
                out[j] = r.p01 * p0 + (1.0 - r.p10) * p1;
            }
            base += bit << 1;
        }
    }
    Ok(out)
}
