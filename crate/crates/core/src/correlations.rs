//! Exact eigenvalue correlation functions and mixture identities.
//!
//! The Gaussian ensemble's n-point correlation function is the n x n
//! determinant of the two-point kernel; this module evaluates it for real
//! and complex variance parameters, together with the pieces that tie the
//! Gaussian and fixed-norm ensembles to each other: the chi-square mixing
//! density of the squared norm, the characteristic function of the
//! recentered trace statistic, sine-kernel determinants (the bulk limit),
//! and quadrature mixtures that integrate a Monte-Carlo fixed-norm
//! estimate against the chi-square weight to reproduce the exact Gaussian
//! answer — pointwise (`disintegration_rhs`) and in Fourier form
//! (`trace_fourier_mixture` versus `fourier_rhs`).

use crate::ensembles::{CorrelationEstimate, Ensemble};
use crate::error::{Error, Result};
use crate::geometry::{d_scale, SLIT_EPS};
use crate::kernels::{kernel_cd, sine_kernel};
use crate::quad;
use crate::special::{chi_square_log_density, ln_gamma};
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

/// Gauss-Legendre resolution of the mixture quadratures.
const MIXTURE_NODES: usize = 400;

/// Largest tolerated chi-square weight falling outside the estimate's
/// grid where the estimate should have had support.
const MIXTURE_OUTSIDE_TOL: f64 = 1e-3;

fn require_off_cut(s: Complex64, what: &str) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("{what} must be finite, got {s}")));
    }
    if s.im.abs() <= SLIT_EPS && s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "{what} must avoid the closed negative real axis, got {s}"
        )));
    }
    Ok(())
}

/// Determinant by partial-pivot LU; consumes the buffer.
fn det_in_place(a: &mut [Complex64], n: usize) -> Complex64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let (pivot, pnorm) = (col..n)
            .map(|r| (r, a[r * n + col].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite pivots"))
            .expect("non-empty pivot range");
        if pnorm == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in (col + 1)..n {
            let f = a[r * n + col] / p;
            for j in col..n {
                let v = a[col * n + j];
                a[r * n + j] -= f * v;
            }
        }
    }
    det
}

/// A request for an exact n-point correlation of the Gaussian ensemble:
/// evaluation points, matrix dimension, and (complex) entry variance.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationQuery {
    points: Vec<f64>,
    matrix_dim: usize,
    scale: Complex64,
}

impl CorrelationQuery {
    pub fn new(points: Vec<f64>, matrix_dim: usize, scale: Complex64) -> Result<Self> {
        if matrix_dim == 0 {
            return Err(Error::Domain("matrix dimension must be >= 1".into()));
        }
        if points.is_empty() {
            return Err(Error::Domain(
                "a correlation query needs at least one point".into(),
            ));
        }
        if points.len() > matrix_dim {
            return Err(Error::Domain(format!(
                "correlation order {} exceeds the matrix dimension {}",
                points.len(),
                matrix_dim
            )));
        }
        if !points.iter().all(|x| x.is_finite()) {
            return Err(Error::Domain("correlation points must be finite".into()));
        }
        require_off_cut(scale, "variance parameter")?;
        Ok(CorrelationQuery {
            points,
            matrix_dim,
            scale,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn matrix_dim(&self) -> usize {
        self.matrix_dim
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }
}

/// Determinant of the kernel matrix over arbitrary complex points.
fn correlation_det(points: &[Complex64], matrix_dim: usize, s: Complex64) -> Result<Complex64> {
    let n = points.len();
    let mut mat = Vec::with_capacity(n * n);
    for &x in points {
        for &y in points {
            mat.push(kernel_cd(matrix_dim, x, y, s)?);
        }
    }
    Ok(det_in_place(&mut mat, n))
}

/// Exact n-point correlation function of the Gaussian ensemble:
/// `det [ K(x_i, x_j) ]` with the dimension-n Christoffel-Darboux kernel
/// at the query's variance.
pub fn gue_correlation(query: &CorrelationQuery) -> Result<Complex64> {
    let points: Vec<Complex64> = query
        .points()
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    correlation_det(&points, query.matrix_dim(), query.scale())
}

/// The same correlation analytically continued in the variance,
/// `s = 1 / ((1 + iH) dim)`, evaluated through the contour-dilation
/// identity: the value equals `d(H)^n det[K(x_i d, x_j d)]` at variance
/// `1/dim`, with `d(H)` the principal square root of `1 + iH`.
pub fn gue_correlation_complex_h(points: &[f64], matrix_dim: usize, h: f64) -> Result<Complex64> {
    if matrix_dim == 0 {
        return Err(Error::Domain("matrix dimension must be >= 1".into()));
    }
    if points.is_empty() || points.len() > matrix_dim {
        return Err(Error::Domain(format!(
            "correlation order must lie in 1..={matrix_dim}, got {}",
            points.len()
        )));
    }
    if !points.iter().all(|x| x.is_finite()) {
        return Err(Error::Domain("correlation points must be finite".into()));
    }
    if !h.is_finite() {
        return Err(Error::Domain(format!(
            "imaginary-part parameter must be finite, got {h}"
        )));
    }
    let d = d_scale(h);
    let s = Complex64::new(1.0 / matrix_dim as f64, 0.0);
    let dilated: Vec<Complex64> = points.iter().map(|&x| x * d).collect();
    let det = correlation_det(&dilated, matrix_dim, s)?;
    Ok(d.powu(points.len() as u32) * det)
}

/// Degrees of freedom and (complex) scale of a chi-square mixing density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareSpec {
    dof: u64,
    scale: Complex64,
}

impl ChiSquareSpec {
    pub fn new(dof: u64, scale: Complex64) -> Result<Self> {
        if dof == 0 {
            return Err(Error::Domain("degrees of freedom must be >= 1".into()));
        }
        require_off_cut(scale, "chi-square scale")?;
        Ok(ChiSquareSpec { dof, scale })
    }

    pub fn dof(&self) -> u64 {
        self.dof
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }
}

/// Scaled chi-square density with principal branch powers:
/// `u^{m/2-1} exp(-u/2s) / ((2s)^{m/2} Gamma(m/2))` for `u > 0`, zero for
/// `u < 0`.  At `u = 0` the value is `1/(2s)` for `m = 2`, zero for
/// `m > 2`, and an error for `m = 1`, where the density diverges.
pub fn chi_density(spec: &ChiSquareSpec, u: f64) -> Result<Complex64> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("density argument must be finite, got {u}")));
    }
    let s = spec.scale();
    let half = spec.dof() as f64 / 2.0;
    if u < 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if u == 0.0 {
        return match spec.dof() {
            1 => Err(Error::Domain(
                "the one-dof chi-square density diverges at the origin".into(),
            )),
            2 => Ok(0.5 / s),
            _ => Ok(Complex64::new(0.0, 0.0)),
        };
    }
    let log = Complex64::new((half - 1.0) * u.ln() - ln_gamma(half), 0.0)
        - u / (2.0 * s)
        - half * (2.0 * s).ln();
    if log.re > 700.0 {
        return Err(Error::Overflow(format!(
            "chi-square density overflows at u = {u}"
        )));
    }
    Ok(log.exp())
}

/// Characteristic function of the recentered trace statistic
/// `(tr X^2 - dim) / sqrt(2)` at variance `1/dim`:
/// `exp(-i p dim / sqrt 2) (1 - i p sqrt 2 / dim)^{-dim^2 / 2}` with the
/// principal branch (the base has real part 1, so it is never on a cut).
pub fn char_fn(matrix_dim: usize, p: f64) -> Complex64 {
    assert!(matrix_dim >= 1, "matrix dimension must be >= 1");
    assert!(p.is_finite(), "frequency must be finite");
    let nd = matrix_dim as f64;
    let base = Complex64::new(1.0, -p * SQRT_2 / nd);
    let power = crate::geometry::principal_pow(base, -nd * nd / 2.0)
        .expect("base has positive real part");
    Complex64::from_polar(1.0, -p * nd / SQRT_2) * power
}

/// Determinant of the sine kernel over the given points: the universal
/// bulk n-point correlation, always in [0, 1].
pub fn sine_det(points: &[f64]) -> f64 {
    assert!(!points.is_empty(), "sine determinant needs points");
    assert!(
        points.iter().all(|t| t.is_finite()),
        "sine determinant needs finite points"
    );
    let n = points.len();
    let mut mat = Vec::with_capacity(n * n);
    for &a in points {
        for &b in points {
            mat.push(Complex64::new(sine_kernel(a, b), 0.0));
        }
    }
    det_in_place(&mut mat, n).re
}

/// Fourier transform of the mixture identity evaluated on the exact
/// (Gaussian) side: the trace characteristic function times the
/// correlation continued to `H = -p sqrt(2) / dim`.
pub fn fourier_rhs(p: f64, points: &[f64], matrix_dim: usize) -> Result<Complex64> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("frequency must be finite, got {p}")));
    }
    if matrix_dim == 0 {
        return Err(Error::Domain("matrix dimension must be >= 1".into()));
    }
    let h = -p * SQRT_2 / matrix_dim as f64;
    Ok(char_fn(matrix_dim, p) * gue_correlation_complex_h(points, matrix_dim, h)?)
}

/// Value and standard error of a mixture quadrature against a
/// Monte-Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureEstimate {
    value: Complex64,
    std_error: f64,
}

impl MixtureEstimate {
    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn std_error(&self) -> f64 {
        self.std_error
    }

    /// Real part with the standard error, for real-valued mixtures.
    pub fn real(&self) -> (f64, f64) {
        (self.value.re, self.std_error)
    }
}

/// Integration window for the chi-square weight with `m = dim^2` degrees
/// of freedom: `m +- 12 dim` (about 8.5 standard deviations), clipped at
/// zero.
fn mixture_support(matrix_dim: usize) -> (f64, f64) {
    let nd = matrix_dim as f64;
    let m = nd * nd;
    ((m - 12.0 * nd).max(0.0), m + 12.0 * nd)
}

/// Gauss-Legendre mass of the chi-square mixing weight over the window
/// used by the mixture quadratures; a diagnostic that should be 1 up to
/// truncation and quadrature error.
pub fn mixture_weight_mass(matrix_dim: usize) -> f64 {
    assert!(matrix_dim >= 1);
    let m = (matrix_dim * matrix_dim) as u64;
    let (vlo, vhi) = mixture_support(matrix_dim);
    let (nodes, weights) = quad::gauss_legendre(MIXTURE_NODES);
    let half = 0.5 * (vhi - vlo);
    let mid = 0.5 * (vhi + vlo);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&t, &w)| w * half * chi_square_log_density(m, mid + half * t).exp())
        .sum()
}

/// Quadrature breakpoints in `v` for the mixture integral over
/// `[vlo, vhi]`: a uniform refinement fine enough for the chi-square
/// weight, plus the image of every interpolation kink of the estimate
/// (bin centers and grid edges) under `v = x^2 dim^2 / (s xi^2)`.
/// Between consecutive breakpoints the integrand is smooth — the
/// interpolant restricted to such a panel is a single linear piece — so
/// a low-order Gauss rule per panel integrates it to near machine
/// precision.  Without the kink alignment, a global rule systematically
/// mis-samples the narrow spikes that binned near-singular densities
/// (the inverse-square-root edges of small-dimension sphere laws)
/// produce under the change of variables.
fn mixture_breakpoints(
    x: f64,
    matrix_dim: usize,
    s: f64,
    hse: &CorrelationEstimate,
) -> Vec<f64> {
    let (vlo, vhi) = mixture_support(matrix_dim);
    let width = vhi - vlo;
    let uniform = 64usize;
    let mut marks: Vec<f64> = (0..=uniform)
        .map(|i| vlo + width * i as f64 / uniform as f64)
        .collect();
    if x != 0.0 {
        let nd = matrix_dim as f64;
        let grid = hse.grid();
        let v_of = |xi: f64| x * x * nd * nd / (s * xi * xi);
        let mut push = |xi: f64| {
            if xi != 0.0 && xi.signum() == x.signum() {
                let v = v_of(xi);
                if v > vlo && v < vhi {
                    marks.push(v);
                }
            }
        };
        for b in 0..grid.bins() {
            push(grid.center(b));
        }
        push(grid.edge(0));
        push(grid.edge(grid.bins()));
    }
    marks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    marks.dedup_by(|a, b| (*a - *b).abs() <= width * 1e-14);
    // A chi-square weight with m < 4 degrees of freedom is singular or
    // kinked at v = 0: refine the first panel geometrically toward it.
    if vlo == 0.0 && (matrix_dim * matrix_dim) < 4 && marks.len() >= 2 {
        let first = marks[1];
        let mut refined = vec![0.0];
        for k in (0..48).rev() {
            refined.push(first * 0.5f64.powi(k + 1));
        }
        refined.extend_from_slice(&marks[1..]);
        marks = refined;
    }
    marks
}

/// Core mixture quadrature: integrates
/// `phase(u) * R^{fixed-norm, u/dim^2}(x)` against the chi-square weight
/// (in the substituted variable `v = u/s`, whose law is chi-square with
/// `dim^2` degrees of freedom), reading the fixed-norm correlation off a
/// unit-scale Monte-Carlo estimate through the sphere scaling relation
/// `R^{sigma}(x) = sigma^{-1/2} R^{1}(x sigma^{-1/2})`.
///
/// The rule is composite Gauss-Legendre on the panels of
/// [`mixture_breakpoints`].  Per-bin coefficients are accumulated first,
/// so the standard error correctly accounts for every quadrature node
/// that reads the same bin.
fn sphere_mixture<P>(
    x: f64,
    matrix_dim: usize,
    s: f64,
    hse: &CorrelationEstimate,
    phase: P,
) -> Result<MixtureEstimate>
where
    P: Fn(f64) -> Complex64,
{
    if matrix_dim == 0 {
        return Err(Error::Domain("matrix dimension must be >= 1".into()));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!("scale must be positive, got {s}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("point must be finite, got {x}")));
    }
    if hse.ensemble() != Ensemble::Hse {
        return Err(Error::Mismatch(
            "mixture quadrature needs a fixed-norm (sphere) estimate".into(),
        ));
    }
    if hse.order() != 1 {
        return Err(Error::Mismatch(
            "mixture quadrature needs a one-point density estimate".into(),
        ));
    }
    if hse.matrix_dim() != matrix_dim {
        return Err(Error::Mismatch(format!(
            "estimate is for dimension {}, query is for {}",
            hse.matrix_dim(),
            matrix_dim
        )));
    }
    if hse.scale() != 1.0 {
        return Err(Error::Mismatch(
            "mixture quadrature needs the sphere estimate at unit scale".into(),
        ));
    }
    if hse.samples() == 0 {
        return Err(Error::Domain("the sphere estimate holds no samples".into()));
    }

    let nd = matrix_dim as f64;
    let m = (matrix_dim * matrix_dim) as u64;
    let marks = mixture_breakpoints(x, matrix_dim, s, hse);
    let (nodes, weights) = quad::gauss_legendre(8);

    let bins = hse.grid().bins();
    let mut coefs = vec![Complex64::new(0.0, 0.0); bins];
    let mut outside_weight = 0.0f64;
    for panel in marks.windows(2) {
        let half = 0.5 * (panel[1] - panel[0]);
        if half <= 0.0 {
            continue;
        }
        let mid = 0.5 * (panel[1] + panel[0]);
        for (&t, &w) in nodes.iter().zip(&weights) {
            let v = mid + half * t;
            let gamma = chi_square_log_density(m, v).exp();
            if gamma == 0.0 {
                continue;
            }
            let wv = w * half * gamma;
            // Shell scale sigma = u / dim^2 with u = s v.
            let inv = (nd * nd / (s * v)).sqrt();
            let xi = x * inv;
            match hse.interpolation_weights(xi) {
                Some((b, theta)) => {
                    let amp = wv * inv * nd * phase(s * v);
                    coefs[b] += amp * (1.0 - theta);
                    if theta > 0.0 {
                        coefs[b + 1] += amp * theta;
                    }
                }
                None => {
                    // Beyond the sphere radius the density is exactly
                    // zero; only misses inside |xi| <= dim indicate a
                    // too-narrow grid.
                    if xi.abs() <= nd {
                        outside_weight += wv;
                    }
                }
            }
        }
    }
    if outside_weight > MIXTURE_OUTSIDE_TOL {
        return Err(Error::Domain(format!(
            "{outside_weight:.3e} of the mixing weight falls where the estimate's \
             grid has no bins; widen the grid"
        )));
    }

    let mut value = Complex64::new(0.0, 0.0);
    let mut variance = 0.0f64;
    for (b, &coef) in coefs.iter().enumerate() {
        if coef != Complex64::new(0.0, 0.0) {
            value += coef * hse.density(b);
            let se = hse.std_error(b);
            variance += coef.norm_sqr() * se * se;
        }
    }
    Ok(MixtureEstimate {
        value,
        std_error: variance.sqrt(),
    })
}

/// Monte-Carlo side of the disintegration identity: the one-point
/// Gaussian correlation at variance `s` reconstructed by mixing the
/// unit-scale fixed-norm estimate over the chi-square law of the squared
/// norm.  The exact counterpart is `gue_correlation` at the same point.
pub fn disintegration_rhs(
    points: &[f64],
    matrix_dim: usize,
    s: f64,
    hse: &CorrelationEstimate,
) -> Result<MixtureEstimate> {
    if points.len() != 1 {
        return Err(Error::Domain(
            "the mixture reconstruction is implemented for one-point correlations; \
             higher orders would need a joint sphere estimate"
                .into(),
        ));
    }
    sphere_mixture(points[0], matrix_dim, s, hse, |_| Complex64::new(1.0, 0.0))
}

/// Fourier transform of the norm-resolved correlation: integrates the
/// sphere estimate against the chi-square weight at scale `1/dim` with
/// the oscillating factor `exp(i p (u - dim)/sqrt 2)`.  Its exact
/// counterpart is [`fourier_rhs`]; at `p = 0` it reduces to
/// [`disintegration_rhs`] at `s = 1/dim`.
pub fn trace_fourier_mixture(
    p: f64,
    x: f64,
    matrix_dim: usize,
    hse: &CorrelationEstimate,
) -> Result<MixtureEstimate> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("frequency must be finite, got {p}")));
    }
    if matrix_dim == 0 {
        return Err(Error::Domain("matrix dimension must be >= 1".into()));
    }
    let nd = matrix_dim as f64;
    sphere_mixture(x, matrix_dim, 1.0 / nd, hse, |u| {
        Complex64::from_polar(1.0, p * (u - nd) / SQRT_2)
    })
}
