//! Library side of the landscape-lab CLI: experiment orchestration and plot
//! data emission, reusable from tests.

pub mod emit;
pub mod experiment;

pub use emit::{emit_plot_data, read_bundle};
pub use experiment::{run_experiment, ExperimentConfig, ProblemSpec, ResultBundle};
