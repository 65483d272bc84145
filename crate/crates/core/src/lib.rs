//! Trotterized quantum dynamics of a THz-driven transverse-field Ising
//! chain.
//!
//! A chain of exchange-coupled spins sits in an oscillating transverse
//! field. The time-evolution operator is Trotterized into one circuit per
//! time step (RZZ on each bond, then RX on each qubit, field sampled at the
//! step midpoint) and executed on three backends:
//!
//! * an ideal statevector simulator,
//! * a density-matrix simulator with readout, depolarizing and
//!   thermal-relaxation noise,
//! * a shot sampler reproducing the finite-measurement protocol of real
//!   hardware, with multi-run aggregation.
//!
//! An exact time-ordered propagator ([`oracle`]) provides ground truth for
//! the Trotter error, circuits emit to OpenQASM 2.0 / Quil text ([`io`]),
//! and [`runner`] ties everything into reproducible, seeded experiments.
//!
//! ```
//! use spinsim::io::ExperimentConfig;
//!
//! let mut config = ExperimentConfig::minimal(2, 0.5);
//! config.n_steps = 10;
//! let table = spinsim::runner::execute(&config).unwrap();
//! assert_eq!(table.len(), 11);
//! assert!((table.rows[0].mz_exact - 1.0).abs() < 1e-12);
//! ```

pub mod backends;
pub mod compiler;
pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod runner;
pub mod sampling;

pub use backends::{
    average_magnetization, expectation_sigma_z, init_all_up, run_noisy, run_statevector,
    DensityMatrix, NoiseProfile, StateVector,
};
pub use compiler::{compile_circuit, compile_step, gate_matrix, lower_to_native, Circuit, Gate};
pub use error::{Error, Result};
pub use model::{build_h, build_hz, transverse_field, DenseOperator, SpinChainParams};
pub use oracle::{evolve_exact, magnetization_trace_exact};
pub use sampling::{
    aggregate_runs, derive_seed, magnetization_from_counts, sample_shots, EstimateWithError,
    ShotRecord,
};
