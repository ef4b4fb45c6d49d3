//! Experiment harness: reproducible numerical experiments with
//! machine-readable CSV/JSON output.
//!
//! An [`ExperimentConfig`] names one of the seven [`Experiment`]s plus
//! its numeric parameters; [`run`] executes it deterministically (the
//! seed fixes every byte of the output, independent of worker count)
//! and returns a [`ResultRecord`] of per-check rows and a pass/fail
//! summary.

pub mod config;
pub mod experiments;
pub mod output;

pub use config::{EnsembleChoice, Experiment, ExperimentConfig, OutputFormat};
pub use experiments::run;
pub use output::{ConfigEcho, ResultRecord, ResultRow, Summary};
