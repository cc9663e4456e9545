//! Configuration, seeded runs, sweeps, CDFs and result files.

pub mod cdf;
pub mod config;
pub mod emit;
pub mod experiment;
pub mod sweep;

pub use cdf::{cdf_at, compute_cdf, empirical_cdf, CdfMetric};
pub use config::{load_config, ExperimentConfig, Profile, Schedule};
pub use emit::{fmt_sig, read_json_records, records_csv, write_csv, write_json};
pub use experiment::{run_experiment, run_seeds, RunRecord};
pub use sweep::{sweep, Axis, SweepResult, SweepRow, SweepSample};
