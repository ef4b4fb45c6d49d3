//! Experiment configuration: the named experiments, their shared
//! parameter set, uniform defaults, and validation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// The named experiments the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Monte-Carlo one-point density versus the semicircle law
    /// (L1 histogram distance), for either or both ensembles.
    Semicircle,
    /// Exact bulk-rescaled kernel (order 1) or two-point correlation
    /// (order 2) versus the sine-kernel limit on a t-grid, across a list
    /// of matrix dimensions.
    SineExact,
    /// Monte-Carlo pair-correlation estimate versus `1 - sinc^2`.
    SineMc,
    /// Chi-square mixture of a fixed-norm Monte-Carlo estimate versus
    /// the exact Gaussian one-point correlation.
    Disintegration,
    /// Fourier form of the mixture identity versus the characteristic
    /// function times the analytically continued correlation.
    FourierIdentity,
    /// Plancherel-Rotach bulk and exterior asymptotics versus the direct
    /// log-scaled recurrences.
    PrAsymptotics,
    /// Deterministic algebraic-identity suites at fixed tolerances.
    Identities,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Semicircle,
        Experiment::SineExact,
        Experiment::SineMc,
        Experiment::Disintegration,
        Experiment::FourierIdentity,
        Experiment::PrAsymptotics,
        Experiment::Identities,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Semicircle => "semicircle",
            Experiment::SineExact => "sine-exact",
            Experiment::SineMc => "sine-mc",
            Experiment::Disintegration => "disintegration",
            Experiment::FourierIdentity => "fourier-identity",
            Experiment::PrAsymptotics => "pr-asymptotics",
            Experiment::Identities => "identities",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown experiment {s:?}; expected one of: semicircle, sine-exact, \
                     sine-mc, disintegration, fourier-identity, pr-asymptotics, identities"
                ))
            })
    }
}

/// Serialization format of the emitted result file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown format {other:?}; expected csv or json"
            ))),
        }
    }
}

/// Which ensemble(s) a sampling experiment draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleChoice {
    Gue,
    Hse,
    Both,
}

impl fmt::Display for EnsembleChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnsembleChoice::Gue => "gue",
            EnsembleChoice::Hse => "hse",
            EnsembleChoice::Both => "both",
        })
    }
}

impl FromStr for EnsembleChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gue" => Ok(EnsembleChoice::Gue),
            "hse" => Ok(EnsembleChoice::Hse),
            "both" => Ok(EnsembleChoice::Both),
            other => Err(Error::Config(format!(
                "unknown ensemble {other:?}; expected gue, hse, or both"
            ))),
        }
    }
}

/// Full experiment configuration.  Round-trips losslessly through serde.
///
/// Defaults (identical for every experiment): one matrix dimension 200,
/// order 1, `u = 0`, window 3, 24 bins, 2 * 10^4 samples, seed 7, library
/// worker pool, scale `1/dimension`, both ensembles, JSON format, no
/// output file — sized so each experiment finishes in minutes on one
/// desktop core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Matrix dimension(s) N; list order is preserved and convergence
    /// ratios compare the last entries.
    pub matrix_dims: Vec<usize>,
    /// Correlation order n (sine-exact supports 1 and 2; mixture
    /// experiments support 1).
    pub order: u8,
    /// Bulk point for rescaled experiments; evaluation point for the
    /// mixture experiments; bulk coordinate z for the asymptotics.
    pub u: f64,
    /// Half-width A of the evaluation window / grid.
    pub window: f64,
    /// Number of histogram bins, or grid steps per axis (grids use the
    /// `bins + 1` nodes `-A, -A + 2A/bins, ..., A`).
    pub bins: usize,
    /// Monte-Carlo sample count.
    pub samples: u64,
    /// Random seed; the full RNG stream layout is derived from it.
    pub seed: u64,
    /// Worker threads (0 = library default).  Never affects results.
    pub workers: usize,
    /// Variance/scale parameter s; `None` means `1/dimension`.
    pub scale: Option<f64>,
    pub ensemble: EnsembleChoice,
    /// Output file; `None` returns the record without writing.
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    /// The default configuration for an experiment.
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            matrix_dims: vec![200],
            order: 1,
            u: 0.0,
            window: 3.0,
            bins: 24,
            samples: 20_000,
            seed: 7,
            workers: 0,
            scale: None,
            ensemble: EnsembleChoice::Both,
            output_path: None,
            format: OutputFormat::Json,
        }
    }

    /// The scale parameter for dimension `dim`: the configured `s`, or
    /// the bulk normalization `1/dim`.
    pub fn scale_for(&self, dim: usize) -> f64 {
        self.scale.unwrap_or(1.0 / dim as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.matrix_dims.is_empty() {
            return Err(Error::Config("at least one matrix dimension is required".into()));
        }
        if self.matrix_dims.iter().any(|&n| n == 0) {
            return Err(Error::Config("matrix dimensions must be >= 1".into()));
        }
        if !self.u.is_finite() {
            return Err(Error::Config(format!("u must be finite, got {}", self.u)));
        }
        if !(self.window.is_finite() && self.window > 0.0) {
            return Err(Error::Config(format!(
                "window half-width must be positive, got {}",
                self.window
            )));
        }
        if self.bins == 0 {
            return Err(Error::Config("bins must be >= 1".into()));
        }
        if let Some(s) = self.scale {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::Config(format!("scale must be positive, got {s}")));
            }
        }
        if self.order == 0 {
            return Err(Error::Config("correlation order must be >= 1".into()));
        }
        match self.experiment {
            Experiment::SineExact => {
                if !(self.order == 1 || self.order == 2) {
                    return Err(Error::Config(
                        "sine-exact supports correlation orders 1 and 2".into(),
                    ));
                }
                if self
                    .matrix_dims
                    .iter()
                    .any(|&n| n < self.order as usize)
                {
                    return Err(Error::Config(
                        "the correlation order cannot exceed the matrix dimension".into(),
                    ));
                }
                if self.u.abs() >= 2.0 {
                    return Err(Error::Config(format!(
                        "the bulk point must satisfy |u| < 2, got {}",
                        self.u
                    )));
                }
            }
            Experiment::SineMc => {
                if self.u.abs() >= 2.0 {
                    return Err(Error::Config(format!(
                        "the bulk point must satisfy |u| < 2, got {}",
                        self.u
                    )));
                }
            }
            Experiment::Disintegration | Experiment::FourierIdentity => {
                if self.order != 1 {
                    return Err(Error::Config(
                        "the mixture experiments reconstruct one-point correlations only"
                            .into(),
                    ));
                }
            }
            Experiment::PrAsymptotics => {
                // The bulk coordinate must stay away from the edges +-1.
                if !(self.u.abs() < 0.999) {
                    return Err(Error::Config(format!(
                        "the bulk coordinate must satisfy |z| < 0.999, got {}",
                        self.u
                    )));
                }
            }
            Experiment::Semicircle | Experiment::Identities => {}
        }
        let needs_samples = matches!(
            self.experiment,
            Experiment::Semicircle
                | Experiment::SineMc
                | Experiment::Disintegration
                | Experiment::FourierIdentity
        );
        if needs_samples && self.samples == 0 {
            return Err(Error::Config("sampling experiments need samples >= 1".into()));
        }
        Ok(())
    }
}
