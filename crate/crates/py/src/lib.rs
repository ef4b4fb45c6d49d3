//! Python bindings for the random-matrix toolkit: the exact kernel and
//! correlation functions as typed functions, one-draw spectra, and the
//! experiment harness returning its JSON record as a string.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rmt::ensembles::{eigenvalues, gue_sample, hse_sample, GaussianSource, RngStream};
use rmt::harness::{EnsembleChoice, Experiment, ExperimentConfig, OutputFormat};

fn err(e: rmt::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Christoffel-Darboux kernel of order `n` at complex points and scale.
#[pyfunction]
#[pyo3(signature = (n, x, y, s=Complex64::new(1.0, 0.0)))]
fn kernel(n: usize, x: Complex64, y: Complex64, s: Complex64) -> PyResult<Complex64> {
    rmt::kernels::kernel_cd(n, x, y, s).map_err(err)
}

/// Sine kernel `sin(pi(t1 - t2)) / (pi(t1 - t2))`.
#[pyfunction]
fn sine_kernel(t1: f64, t2: f64) -> f64 {
    rmt::kernels::sine_kernel(t1, t2)
}

/// Determinant `det[sine_kernel(t_i, t_j)]` over a point list.
#[pyfunction]
fn sine_det(points: Vec<f64>) -> f64 {
    rmt::correlations::sine_det(&points)
}

/// Orthonormal Hermite function `phi_n` at a complex point.
#[pyfunction]
fn hermite_phi(n: usize, x: Complex64) -> PyResult<Complex64> {
    rmt::hermite::phi(n, x).map_err(err)
}

/// Exact Gaussian-ensemble correlation of order `len(points)` for
/// dimension `n` at (complex) variance scale `s`.
#[pyfunction]
#[pyo3(signature = (points, n, s))]
fn gue_correlation(points: Vec<f64>, n: usize, s: Complex64) -> PyResult<Complex64> {
    let query = rmt::correlations::CorrelationQuery::new(points, n, s).map_err(err)?;
    rmt::correlations::gue_correlation(&query).map_err(err)
}

/// Characteristic function of the squared-norm law at frequency `p`.
#[pyfunction]
fn char_fn(n: usize, p: f64) -> Complex64 {
    rmt::correlations::char_fn(n, p)
}

/// Eigenvalues of one matrix draw ("gue" or "hse") at dimension `dim`
/// and scale `s`, ascending.  The same seed always returns the same
/// spectrum.
#[pyfunction]
#[pyo3(signature = (ensemble, dim, s, seed=7))]
fn sample_spectrum(ensemble: &str, dim: usize, s: f64, seed: u64) -> PyResult<Vec<f64>> {
    let mut src = GaussianSource::new(RngStream::new(seed, 0));
    let matrix = match ensemble {
        "gue" => gue_sample(dim, s, &mut src),
        "hse" => hse_sample(dim, s, &mut src),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown ensemble {other:?}; expected \"gue\" or \"hse\""
            )))
        }
    }
    .map_err(err)?;
    Ok(eigenvalues(&matrix).map_err(err)?.values().to_vec())
}

/// Run a named experiment and return the full result record as a JSON
/// string (parse with `json.loads`).  Arguments mirror the `rmt` CLI;
/// omitted ones use the same defaults.
#[pyfunction]
#[pyo3(signature = (experiment, *, n=None, order=None, u=None, window=None,
                    bins=None, samples=None, seed=None, workers=None, s=None,
                    ensemble=None, out=None, format=None))]
#[allow(clippy::too_many_arguments)]
fn run_experiment_json(
    experiment: &str,
    n: Option<Vec<usize>>,
    order: Option<u8>,
    u: Option<f64>,
    window: Option<f64>,
    bins: Option<usize>,
    samples: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
    s: Option<f64>,
    ensemble: Option<&str>,
    out: Option<String>,
    format: Option<&str>,
) -> PyResult<String> {
    let experiment: Experiment = experiment.parse().map_err(err)?;
    let mut config = ExperimentConfig::new(experiment);
    if let Some(n) = n {
        config.matrix_dims = n;
    }
    if let Some(order) = order {
        config.order = order;
    }
    if let Some(u) = u {
        config.u = u;
    }
    if let Some(window) = window {
        config.window = window;
    }
    if let Some(bins) = bins {
        config.bins = bins;
    }
    if let Some(samples) = samples {
        config.samples = samples;
    }
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(workers) = workers {
        config.workers = workers;
    }
    config.scale = s;
    if let Some(ensemble) = ensemble {
        config.ensemble = ensemble.parse::<EnsembleChoice>().map_err(err)?;
    }
    config.output_path = out.map(Into::into);
    if let Some(format) = format {
        config.format = format.parse::<OutputFormat>().map_err(err)?;
    }
    let record = rmt::harness::run(&config).map_err(err)?;
    Ok(record.to_json())
}

/// Random-matrix toolkit bindings.
#[pymodule]
fn rmt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(sine_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(sine_det, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_phi, m)?)?;
    m.add_function(wrap_pyfunction!(gue_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(char_fn, m)?)?;
    m.add_function(wrap_pyfunction!(sample_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment_json, m)?)?;
    Ok(())
}
