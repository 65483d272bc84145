//! Experiment configuration, circuit emission and result serialization.

pub mod config;
pub mod emit;
pub mod plot;
pub mod results;

pub use config::{load_config, resolve_noise_profile, BackendChoice, ExperimentConfig};
pub use emit::{emit_qasm, emit_quil, normalize_angle};
pub use plot::{plot_svg, render_plot};
pub use results::{write_results, ResultFormat, ResultRow, ResultTable};
