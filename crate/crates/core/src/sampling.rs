//! Finite-shot measurement simulation.
//!
//! Shots are drawn with a pinned, portable generator so records reproduce
//! bit-for-bit across platforms and across serial/parallel execution:
//! xoshiro256** seeded through rand's SplitMix64 expansion of a 64-bit seed.
//! Stream seeds for (combination, run, step) tuples come from
//! [`derive_seed`], a SplitMix64 hash chain over the master seed and the
//! tuple components, so adding configurations never shifts existing streams.
//!
//! Outcome keys are bit strings with qubit `i` at character position `i`
//! ('0' = spin up).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{Error, Result};

/// Counted outcomes of repeated measurement of one circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotRecord {
    counts: BTreeMap<String, u64>,
    shots: u64,
    seed: u64,
    n_qubits: usize,
}

impl ShotRecord {
    /// Build a record from existing counts (e.g. ingested hardware results).
    /// Keys must be equal-length bit strings; `seed` records provenance for
    /// synthetic records and is 0 for external data.
    pub fn from_counts(counts: BTreeMap<String, u64>, seed: u64) -> Result<Self> {
        let mut iter = counts.keys();
        let n_qubits = match iter.next() {
            Some(k) => k.len(),
            None => return Err(Error::InvalidSampling("no outcomes".into())),
        };
        for key in counts.keys() {
            if key.len() != n_qubits || !key.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::InvalidSampling(format!("malformed outcome key '{key}'")));
            }
        }
        let shots: u64 = counts.values().sum();
        if shots == 0 {
            return Err(Error::InvalidSampling("zero total shots".into()));
        }
        Ok(Self {
            counts,
            shots,
            seed,
            n_qubits,
        })
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
}

/// Mean with its standard error over independent runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithError {
    pub mean: f64,
    pub std_error: f64,
    pub n_runs: usize,
}

fn outcome_key(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|i| if (index >> i) & 1 == 0 { '0' } else { '1' })
        .collect()
}

fn validate_distribution(probs: &[f64]) -> Result<usize> {
    if !probs.len().is_power_of_two() || probs.is_empty() {
        return Err(Error::InvalidDistribution(format!(
            "length {} is not a power of two",
            probs.len()
        )));
    }
    let mut total = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        if !(p >= -1e-12) || !p.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} = {p} is negative or non-finite"
            )));
        }
        total += p.max(0.0);
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    Ok(probs.len().trailing_zeros() as usize)
}

/// Draw `shots` outcomes from the distribution by inverse-CDF with one
/// uniform per shot. Deterministic for a fixed `(probs, shots, seed)`.
pub fn sample_shots(probs: &[f64], shots: u64, seed: u64) -> Result<ShotRecord> {
    let n_qubits = validate_distribution(probs)?;
    if shots < 1 {
        return Err(Error::InvalidSampling("shots must be >= 1".into()));
    }
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    cdf[last] = 1.0;

    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.gen();
        let idx = cdf.partition_point(|&c| c <= u).min(last);
        *counts.entry(outcome_key(idx, n_qubits)).or_insert(0) += 1;
    }
    Ok(ShotRecord {
        counts,
        shots,
        seed,
        n_qubits,
    })
}

fn magnetization_of_key(key: &str) -> f64 {
    let n = key.len() as f64;
    key.chars()
        .map(|c| if c == '0' { 1.0 } else { -1.0 })
        .sum::<f64>()
        / n
}

/// Shot-estimated average magnetization of a record.
pub fn magnetization_from_counts(record: &ShotRecord) -> Result<f64> {
    if record.shots == 0 || record.counts.is_empty() {
        return Err(Error::InvalidSampling("empty shot record".into()));
    }
    let total: f64 = record
        .counts
        .iter()
        .map(|(key, &c)| magnetization_of_key(key) * c as f64)
        .sum();
    Ok(total / record.shots as f64)
}

/// Exact average magnetization of an outcome distribution.
pub fn magnetization_of_distribution(probs: &[f64], n_qubits: usize) -> f64 {
    let mut mz = 0.0;
    for (b, &p) in probs.iter().enumerate() {
        let z_sum: f64 = (0..n_qubits)
            .map(|i| if (b >> i) & 1 == 0 { 1.0 } else { -1.0 })
            .sum();
        mz += p * z_sum / n_qubits as f64;
    }
    mz
}

/// Mean and standard error of the mean over independent run values.
pub fn aggregate_runs(values: &[f64]) -> Result<EstimateWithError> {
    if values.is_empty() {
        return Err(Error::InvalidSampling("no run values to aggregate".into()));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    Ok(EstimateWithError {
        mean,
        std_error,
        n_runs: n,
    })
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic stream seed for a master seed plus an index tuple.
///
/// Each part feeds one SplitMix64 round, so streams for different tuples are
/// independent and inserting new tuples never alters existing ones.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for &p in parts {
        state ^= p;
        out = splitmix64(&mut state);
    }
    out
}
