//! Command-line front end for the experiment harness.
//!
//! Exit codes: 0 when every declared tolerance was met, 1 when at least
//! one check failed, 2 on configuration or runtime errors.

use clap::Parser;
use rmt::harness::{run, EnsembleChoice, Experiment, ExperimentConfig, OutputFormat};
use std::path::PathBuf;
use std::process::ExitCode;

/// Reproducible random-matrix experiments with CSV/JSON output.
///
/// Runs one named experiment and reports per-check rows plus a
/// pass/fail summary.  The record goes to --out when given, otherwise
/// to stdout; a one-line summary always goes to stderr.  Identical
/// configurations produce byte-identical records, whatever the worker
/// count.  Every flag falls back to its RMT_* environment variable,
/// then to the built-in default.
#[derive(Debug, Parser)]
#[command(name = "rmt", version)]
struct Cli {
    /// Experiment: semicircle | sine-exact | sine-mc | disintegration |
    /// fourier-identity | pr-asymptotics | identities
    experiment: Experiment,

    /// Matrix dimension(s) N, comma-separated (convergence experiments
    /// compare the entries in order) [default: 200]
    #[arg(long, env = "RMT_N", value_delimiter = ',', value_name = "N[,N...]")]
    n: Option<Vec<usize>>,

    /// Correlation order (sine-exact supports 1 and 2) [default: 1]
    #[arg(long, env = "RMT_ORDER")]
    order: Option<u8>,

    /// Bulk point (sine experiments), evaluation point (mixture
    /// experiments), or bulk coordinate z (asymptotics) [default: 0]
    #[arg(long, env = "RMT_U", allow_hyphen_values = true)]
    u: Option<f64>,

    /// Window half-width A of the evaluation grid [default: 3]
    #[arg(long, env = "RMT_WINDOW")]
    window: Option<f64>,

    /// Histogram bins, or grid steps per axis [default: 24]
    #[arg(long, env = "RMT_BINS")]
    bins: Option<usize>,

    /// Monte-Carlo sample count [default: 20000]
    #[arg(long, env = "RMT_SAMPLES")]
    samples: Option<u64>,

    /// Random seed; fixes every byte of the output [default: 7]
    #[arg(long, env = "RMT_SEED")]
    seed: Option<u64>,

    /// Worker threads; 0 means the library default.  Changes runtime
    /// only, never results [default: 0]
    #[arg(long, env = "RMT_WORKERS")]
    workers: Option<usize>,

    /// Variance scale s [default: 1/N]
    #[arg(long, env = "RMT_S", allow_hyphen_values = true)]
    s: Option<f64>,

    /// Ensemble(s) to sample: gue | hse | both [default: both]
    #[arg(long, env = "RMT_ENSEMBLE")]
    ensemble: Option<EnsembleChoice>,

    /// Output file [default: write the record to stdout]
    #[arg(long, env = "RMT_OUT", value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format: csv | json [default: json]
    #[arg(long, env = "RMT_FORMAT")]
    format: Option<OutputFormat>,
}

impl Cli {
    fn into_config(self) -> ExperimentConfig {
        let mut config = ExperimentConfig::new(self.experiment);
        if let Some(n) = self.n {
            config.matrix_dims = n;
        }
        if let Some(order) = self.order {
            config.order = order;
        }
        if let Some(u) = self.u {
            config.u = u;
        }
        if let Some(window) = self.window {
            config.window = window;
        }
        if let Some(bins) = self.bins {
            config.bins = bins;
        }
        if let Some(samples) = self.samples {
            config.samples = samples;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(workers) = self.workers {
            config.workers = workers;
        }
        config.scale = self.s;
        if let Some(ensemble) = self.ensemble {
            config.ensemble = ensemble;
        }
        config.output_path = self.out;
        if let Some(format) = self.format {
            config.format = format;
        }
        config
    }
}

fn main() -> ExitCode {
    let config = Cli::parse().into_config();
    match run(&config) {
        Ok(record) => {
            if config.output_path.is_none() {
                print!("{}", record.render(config.format));
            } else if let Some(path) = &config.output_path {
                eprintln!("rmt: wrote {}", path.display());
            }
            eprintln!(
                "rmt: {} {}: {} checked, {} failed, max error {:.3e}, {:.2} s",
                config.experiment,
                if record.summary.passed { "PASS" } else { "FAIL" },
                record.summary.checked,
                record.summary.failed,
                record.summary.max_abs_error,
                record.wall_clock_seconds,
            );
            if record.summary.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("rmt: error: {e}");
            ExitCode::from(2)
        }
    }
}
