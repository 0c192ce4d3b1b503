//! Generators, experiment orchestration and oracle verification.

mod experiment;
mod generate;
mod verify;

pub use experiment::{
    read_csv, run_experiment, run_one, without_timing, write_csv, Algo, ExperimentConfig,
    RunOutput, RunRecord, RunResult, CSV_HEADER,
};
pub use generate::GraphSpec;
pub use verify::{verify_forest_edges, verify_labels, Verdict};
