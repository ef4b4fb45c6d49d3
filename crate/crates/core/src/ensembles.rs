//! Matrix ensembles and Monte-Carlo spectral estimation.
//!
//! Two ensembles are sampled: the Gaussian unitary ensemble at entry
//! variance `s` (density proportional to `exp(-tr A^2 / 2s)`), and the
//! fixed-norm ensemble obtained by conditioning the Gaussian on the sphere
//! `tr Y^2 = s n^2` — realized exactly by radial projection, which is
//! independent of the direction for a Gaussian vector.
//!
//! Eigenvalues come from a dense Hermitian solver (unitary Householder
//! reduction to a real symmetric tridiagonal, then implicit-shift QL), and
//! the estimators bin them into [`CorrelationEstimate`] histograms: the
//! one-point density on a fixed grid, and the two-point correlation of
//! unit-spacing rescaled eigenvalue pairs around a bulk point.
//!
//! Reproducibility contract: samples are partitioned into fixed chunks of
//! [`CHUNK_SAMPLES`]; chunk `c` always draws from RNG stream
//! `base.child(c)`, and chunk results merge by integer addition.  The
//! estimate is therefore bit-identical for any number of worker threads,
//! and an estimate over `k` chunks equals the merge of the per-chunk
//! estimates.

use crate::error::{Error, Result};
use crate::geometry::wigner_density;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Fixed Monte-Carlo chunk size; part of the determinism contract.
pub const CHUNK_SAMPLES: u64 = 256;

/// Address of a deterministic random stream: a seed identifying the run
/// and a stream index separating independent consumers of that seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngStream { seed, stream }
    }

    /// The stream `offset` places after this one, same seed.
    pub fn child(&self, offset: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream: self.stream.wrapping_add(offset),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Standard-normal source over one [`RngStream`], via Box-Muller with the
/// second variate cached.
pub struct GaussianSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(stream: RngStream) -> Self {
        GaussianSource {
            rng: stream.rng(),
            spare: None,
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        // u1 in (0, 1] keeps the logarithm finite.
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (sin, cos) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * sin);
        r * cos
    }
}

/// Dense Hermitian matrix stored as real diagonal plus strict upper
/// triangle (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    diag: Vec<f64>,
    upper: Vec<Complex64>,
}

fn upper_len(dim: usize) -> usize {
    dim * (dim - 1) / 2
}

impl HermitianMatrix {
    /// Build from a real diagonal and strict upper triangle listed
    /// row-major: `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
    pub fn from_parts(diag: Vec<f64>, upper: Vec<Complex64>) -> Result<Self> {
        let dim = diag.len();
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be >= 1".into()));
        }
        if upper.len() != upper_len(dim) {
            return Err(Error::Domain(format!(
                "upper triangle of a {dim}x{dim} Hermitian matrix has {} entries, got {}",
                upper_len(dim),
                upper.len()
            )));
        }
        if !diag.iter().all(|v| v.is_finite())
            || !upper.iter().all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(HermitianMatrix { dim, diag, upper })
    }

    /// Build from a dense row-major complex matrix, verifying Hermitian
    /// symmetry to absolute tolerance `tol` (scaled by the largest entry).
    pub fn from_dense(dim: usize, data: &[Complex64], tol: f64) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::Domain(format!(
                "dense storage of a {dim}x{dim} matrix needs {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        let scale = data
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        let mut diag = Vec::with_capacity(dim);
        let mut upper = Vec::with_capacity(upper_len(dim));
        for i in 0..dim {
            let z = data[i * dim + i];
            if z.im.abs() > tol * scale {
                return Err(Error::Domain(format!(
                    "diagonal entry ({i},{i}) = {z} is not real"
                )));
            }
            diag.push(z.re);
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let a = data[i * dim + j];
                let b = data[j * dim + i];
                if (a - b.conj()).norm() > tol * scale {
                    return Err(Error::Domain(format!(
                        "entries ({i},{j}) and ({j},{i}) are not conjugate: {a} vs {b}"
                    )));
                }
                upper.push(a);
            }
        }
        HermitianMatrix::from_parts(diag, upper)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn upper(&self) -> &[Complex64] {
        &self.upper
    }

    fn upper_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.dim);
        // Row i starts after rows 0..i, which hold (n-1) + ... + (n-i) entries.
        i * self.dim - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Equal => Complex64::new(self.diag[i], 0.0),
            Ordering::Less => self.upper[self.upper_index(i, j)],
            Ordering::Greater => self.upper[self.upper_index(j, i)].conj(),
        }
    }

    /// Dense row-major expansion.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.entry(i, j);
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Squared Hilbert-Schmidt norm `tr M^2 = sum |m_ij|^2`.
    pub fn hs_norm_sq(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|v| v * v).sum();
        let u: f64 = self.upper.iter().map(|z| z.norm_sqr()).sum();
        d + 2.0 * u
    }

    fn scale_entries(&mut self, factor: f64) {
        for v in &mut self.diag {
            *v *= factor;
        }
        for z in &mut self.upper {
            *z *= factor;
        }
    }
}

/// One Gaussian-unitary sample at entry variance `s`: diagonal entries
/// `N(0, s)`, off-diagonal real and imaginary parts `N(0, s/2)`.  Draw
/// order is fixed (diagonal first, then upper rows), part of the
/// reproducibility contract.
pub fn gue_sample(dim: usize, s: f64, src: &mut GaussianSource) -> Result<HermitianMatrix> {
    if dim == 0 {
        return Err(Error::Domain("matrix dimension must be >= 1".into()));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!("variance must be positive, got {s}")));
    }
    let sd = s.sqrt();
    let sh = (s / 2.0).sqrt();
    let diag: Vec<f64> = (0..dim).map(|_| sd * src.standard_normal()).collect();
    let upper: Vec<Complex64> = (0..upper_len(dim))
        .map(|_| {
            let re = sh * src.standard_normal();
            let im = sh * src.standard_normal();
            Complex64::new(re, im)
        })
        .collect();
    HermitianMatrix::from_parts(diag, upper)
}

/// One fixed-norm sample: a Gaussian draw projected radially onto the
/// sphere `tr Y^2 = s dim^2` (exact per sample, up to rounding).  The
/// direction of a Gaussian matrix is independent of its norm, so this is
/// the uniform measure on the sphere.
pub fn hse_sample(dim: usize, s: f64, src: &mut GaussianSource) -> Result<HermitianMatrix> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!("scale must be positive, got {s}")));
    }
    let mut x = gue_sample(dim, 1.0, src)?;
    let t = x.hs_norm_sq();
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(
            "degenerate Gaussian sample with zero norm".into(),
        ));
    }
    let target = s * (dim * dim) as f64;
    x.scale_entries((target / t).sqrt());
    Ok(x)
}

/// Sorted eigenvalues of a Hermitian matrix, validated against the trace
/// and Hilbert-Schmidt invariants at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Householder reduction of a dense Hermitian matrix to a real symmetric
/// tridiagonal with the same spectrum.  Returns (diagonal, subdiagonal);
/// the subdiagonal is stored in entries `0..n-1` with a trailing 0.
///
/// Each step reflects one column to `alpha e_1`; taking `|alpha|` as the
/// subdiagonal entry amounts to a further diagonal-unitary similarity,
/// which leaves eigenvalues untouched.
fn tridiagonalize(a: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut e = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let norm_sq: f64 = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum();
        let norm = norm_sq.sqrt();
        e[k] = norm;
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        // Reflection vector v = (x - alpha e_1) / |...| over rows k+1..n.
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        v[0] -= alpha;
        let vn_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn_sq <= f64::MIN_POSITIVE {
            // Column already aligned with e_1; nothing to rotate.
            continue;
        }
        let vn = vn_sq.sqrt();
        for z in v.iter_mut() {
            *z /= vn;
        }
        // Rank-2 update of the trailing block B: with w = B v and
        // q = w - (v* w) v, the reflected block is B - 2 v q* - 2 q v*.
        let m = n - (k + 1);
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            let row = (k + 1 + i) * n + (k + 1);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m {
                acc += a[row + j] * v[j];
            }
            w[i] = acc;
        }
        let beta: Complex64 = v.iter().zip(&w).map(|(vi, wi)| vi.conj() * wi).sum();
        let q: Vec<Complex64> = w.iter().zip(&v).map(|(wi, vi)| wi - beta * vi).collect();
        for i in 0..m {
            let row = (k + 1 + i) * n + (k + 1);
            for j in 0..m {
                let delta = v[i] * q[j].conj() + q[i] * v[j].conj();
                a[row + j] -= 2.0 * delta;
            }
        }
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + (n - 2)].norm();
    }
    let d: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    (d, e)
}

/// Implicit-shift QL sweep for a real symmetric tridiagonal, eigenvalues
/// only.  `e` holds subdiagonal entries in `0..n-1` plus a trailing
/// scratch slot.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find the first negligible coupling at or after l.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NonConvergence(
                    "eigenvalue iteration exceeded 60 sweeps".into(),
                ));
            }
            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let rs = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + rs);
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut clean = true;
            for iu in (l..m).rev() {
                let f = s * e[iu];
                let b = c * e[iu];
                r = f.hypot(g);
                e[iu + 1] = r;
                if r == 0.0 {
                    // Underflow guard: recover and restart the sweep.
                    d[iu + 1] -= p;
                    e[m] = 0.0;
                    clean = false;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[iu + 1] - p;
                let t = (d[iu] - g) * s + 2.0 * c * b;
                p = s * t;
                d[iu + 1] = g + p;
                g = c * t - b;
            }
            if !clean {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.  The computed
/// spectrum is validated against `sum = trace` and
/// `sum of squares = Hilbert-Schmidt norm` at 1e-9 relative.
pub fn eigenvalues(m: &HermitianMatrix) -> Result<Spectrum> {
    let n = m.dim();
    let mut values = if n == 1 {
        vec![m.diag[0]]
    } else {
        let mut dense = m.to_dense();
        let (mut d, mut e) = tridiagonalize(&mut dense, n);
        ql_implicit(&mut d, &mut e)?;
        d
    };
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    let sum: f64 = values.iter().sum();
    let sum_sq: f64 = values.iter().map(|v| v * v).sum();
    let abs_sum: f64 = values.iter().map(|v| v.abs()).sum();
    let trace = m.trace();
    let hs = m.hs_norm_sq();
    if (sum - trace).abs() > 1e-9 * abs_sum.max(1.0) {
        return Err(Error::Mismatch(format!(
            "eigenvalue sum {sum} disagrees with trace {trace}"
        )));
    }
    if (sum_sq - hs).abs() > 1e-9 * hs.max(1.0) {
        return Err(Error::Mismatch(format!(
            "eigenvalue square sum {sum_sq} disagrees with HS norm {hs}"
        )));
    }
    Ok(Spectrum { values })
}

/// Uniform binning grid on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    lo: f64,
    hi: f64,
    bins: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!(
                "grid needs finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        if bins == 0 {
            return Err(Error::Domain("grid needs at least one bin".into()));
        }
        Ok(GridSpec { lo, hi, bins })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    /// Bin index for `x`, `None` outside `[lo, hi]`; the right endpoint
    /// joins the last bin.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x <= self.hi) {
            return None;
        }
        let raw = ((x - self.lo) / self.bin_width()) as usize;
        Some(raw.min(self.bins - 1))
    }

    /// Center of bin `b`.
    pub fn center(&self, b: usize) -> f64 {
        debug_assert!(b < self.bins);
        self.lo + (b as f64 + 0.5) * self.bin_width()
    }

    /// Lower edge of bin `b`.
    pub fn edge(&self, b: usize) -> f64 {
        self.lo + b as f64 * self.bin_width()
    }
}

/// Which ensemble an estimate was sampled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    Gue,
    Hse,
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ensemble::Gue => write!(f, "gue"),
            Ensemble::Hse => write!(f, "hse"),
        }
    }
}

/// Binned Monte-Carlo estimate of a spectral correlation function.
///
/// Order 1: counts of eigenvalues per grid bin; `density(b)` is
/// `counts / (samples * dim * bin_width)`, normalized so that it estimates
/// `dim^{-1} R_1` (a probability density when nothing falls outside).
///
/// Order 2: counts of ordered rescaled eigenvalue pairs, tallied by
/// separation `tau` under the window rule `|xi_i| <= A - |tau|` (grid is
/// `[-A, A]`); `density(b)` divides by the per-bin admissible measure
/// `G(hi) - G(lo)` with `G(tau) = 2 A tau - tau |tau|`, so it estimates
/// the pair correlation `1 - sinc^2` in the bulk limit.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    ensemble: Ensemble,
    matrix_dim: usize,
    scale: f64,
    order: u8,
    grid: GridSpec,
    counts: Vec<u64>,
    outside: u64,
    samples: u64,
}

impl CorrelationEstimate {
    pub fn ensemble(&self) -> Ensemble {
        self.ensemble
    }

    pub fn matrix_dim(&self) -> usize {
        self.matrix_dim
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn outside(&self) -> u64 {
        self.outside
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Documented normalization divisor for bin `b`: the estimate's
    /// density is `counts[b] / normalization(b)`.
    pub fn normalization(&self, b: usize) -> f64 {
        debug_assert!(b < self.grid.bins());
        let s = self.samples as f64;
        match self.order {
            1 => s * self.matrix_dim as f64 * self.grid.bin_width(),
            2 => {
                let a = self.grid.hi();
                let g = |t: f64| 2.0 * a * t - t * t.abs();
                let lo = self.grid.edge(b);
                let hi = self.grid.edge(b + 1);
                s * (g(hi) - g(lo))
            }
            _ => unreachable!("orders are restricted at construction"),
        }
    }

    /// Estimated density in bin `b`.
    pub fn density(&self, b: usize) -> f64 {
        self.counts[b] as f64 / self.normalization(b)
    }

    /// Poisson standard error for bin `b` (conservative for rigid
    /// spectra): `sqrt(max(counts, 1)) / normalization`.
    pub fn std_error(&self, b: usize) -> f64 {
        (self.counts[b] as f64).max(1.0).sqrt() / self.normalization(b)
    }

    /// Linear-interpolation weights at `x`: bin index `b` and fraction
    /// `theta` such that the interpolated density is
    /// `(1-theta) * density(b) + theta * density(b+1)`.  `None` outside
    /// the grid; the half-bin margins clamp to the edge bins.
    pub fn interpolation_weights(&self, x: f64) -> Option<(usize, f64)> {
        if !(x >= self.grid.lo() && x <= self.grid.hi()) {
            return None;
        }
        let last = self.grid.bins() - 1;
        let first_center = self.grid.center(0);
        let last_center = self.grid.center(last);
        if x <= first_center {
            return Some((0, 0.0));
        }
        if x >= last_center {
            return Some((last, 0.0));
        }
        let pos = (x - first_center) / self.grid.bin_width();
        let b = (pos as usize).min(last - 1);
        Some((b, pos - b as f64))
    }

    /// Linearly interpolated density at `x`, `None` outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let (b, theta) = self.interpolation_weights(x)?;
        if theta == 0.0 {
            return Some(self.density(b));
        }
        Some((1.0 - theta) * self.density(b) + theta * self.density(b + 1))
    }

    /// Fraction of tallied items that landed inside the grid (order 1:
    /// eigenvalues per sample per dimension).
    pub fn inside_mass(&self) -> f64 {
        let total: u64 = self.counts.iter().sum();
        total as f64 / (self.samples as f64 * self.matrix_dim as f64)
    }

    /// Fraction of tallied items that fell outside the grid.
    pub fn outside_mass(&self) -> f64 {
        self.outside as f64 / (self.samples as f64 * self.matrix_dim as f64)
    }

    /// Merge two estimates of the same quantity (identical metadata):
    /// counts add.  Merging the results of disjoint chunk ranges equals
    /// running one estimate over their union.
    pub fn merge(&self, other: &CorrelationEstimate) -> Result<CorrelationEstimate> {
        if self.ensemble != other.ensemble
            || self.matrix_dim != other.matrix_dim
            || self.scale != other.scale
            || self.order != other.order
            || self.grid != other.grid
        {
            return Err(Error::Mismatch(
                "estimates describe different quantities and cannot merge".into(),
            ));
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CorrelationEstimate {
            counts,
            outside: self.outside + other.outside,
            samples: self.samples + other.samples,
            ..self.clone()
        })
    }

    /// An empty estimate with this estimate's metadata: the identity for
    /// [`CorrelationEstimate::merge`].
    pub fn empty_like(&self) -> CorrelationEstimate {
        CorrelationEstimate {
            counts: vec![0; self.counts.len()],
            outside: 0,
            samples: 0,
            ..self.clone()
        }
    }

    /// Test support: an estimate with prescribed counts, keeping this
    /// estimate's metadata.
    #[cfg(test)]
    pub(crate) fn with_synthetic_counts(self, counts: Vec<u64>, samples: u64) -> CorrelationEstimate {
        assert_eq!(counts.len(), self.counts.len());
        CorrelationEstimate {
            counts,
            samples,
            ..self
        }
    }
}

/// Merge a sequence of compatible estimates.
pub fn merge_estimates(estimates: &[CorrelationEstimate]) -> Result<CorrelationEstimate> {
    let (first, rest) = estimates
        .split_first()
        .ok_or_else(|| Error::Domain("nothing to merge".into()))?;
    let mut acc = first.clone();
    for e in rest {
        acc = acc.merge(e)?;
    }
    Ok(acc)
}

/// Chunked deterministic Monte-Carlo driver: runs `per_sample` for every
/// sample, with chunk `c` drawing from `base.child(c)`, accumulating bin
/// counts and an outside counter.  Results are independent of the rayon
/// worker count.
fn run_chunks<F>(bins: usize, samples: u64, base: RngStream, per_sample: F) -> Result<(Vec<u64>, u64)>
where
    F: Fn(&mut GaussianSource, &mut [u64], &mut u64) -> Result<()> + Sync,
{
    let n_chunks = samples.div_ceil(CHUNK_SAMPLES);
    let partials: Vec<(Vec<u64>, u64)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut src = GaussianSource::new(base.child(c));
            let mut counts = vec![0u64; bins];
            let mut outside = 0u64;
            let in_chunk = CHUNK_SAMPLES.min(samples - c * CHUNK_SAMPLES);
            for _ in 0..in_chunk {
                per_sample(&mut src, &mut counts, &mut outside)?;
            }
            Ok((counts, outside))
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; bins];
    let mut outside = 0u64;
    for (pc, po) in partials {
        for (acc, v) in counts.iter_mut().zip(&pc) {
            *acc += v;
        }
        outside += po;
    }
    Ok((counts, outside))
}

/// Monte-Carlo one-point density: eigenvalues of `samples` draws binned
/// on `grid`.  `density(b)` estimates `dim^{-1} R_1` for the requested
/// ensemble at variance/scale `s`.
pub fn estimate_density(
    ensemble: Ensemble,
    dim: usize,
    s: f64,
    samples: u64,
    grid: GridSpec,
    base: RngStream,
) -> Result<CorrelationEstimate> {
    if dim == 0 {
        return Err(Error::Domain("matrix dimension must be >= 1".into()));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!("scale must be positive, got {s}")));
    }
    let per_sample = |src: &mut GaussianSource, counts: &mut [u64], outside: &mut u64| {
        let m = match ensemble {
            Ensemble::Gue => gue_sample(dim, s, src)?,
            Ensemble::Hse => hse_sample(dim, s, src)?,
        };
        let spectrum = eigenvalues(&m)?;
        for &v in spectrum.values() {
            match grid.bin_of(v) {
                Some(b) => counts[b] += 1,
                None => *outside += 1,
            }
        }
        Ok(())
    };
    let (counts, outside) = run_chunks(grid.bins(), samples, base, per_sample)?;
    Ok(CorrelationEstimate {
        ensemble,
        matrix_dim: dim,
        scale: s,
        order: 1,
        grid,
        counts,
        outside,
        samples,
    })
}

/// Monte-Carlo pair correlation around the bulk point `u` at variance
/// `1/dim`: eigenvalues are rescaled to unit mean spacing,
/// `xi = (lambda - u) * dim * w(u)`, and ordered pair separations
/// `tau = xi_i - xi_j` are tallied when `|xi_i| <= window - |tau|`.  The
/// resulting density estimates the bulk pair correlation, which tends to
/// `1 - sinc^2(tau)` for the Gaussian and fixed-norm ensembles alike.
pub fn estimate_pair_correlation(
    ensemble: Ensemble,
    dim: usize,
    u: f64,
    window: f64,
    bins: usize,
    samples: u64,
    base: RngStream,
) -> Result<CorrelationEstimate> {
    if dim == 0 {
        return Err(Error::Domain("matrix dimension must be >= 1".into()));
    }
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::Domain(format!(
            "window half-width must be positive, got {window}"
        )));
    }
    let density_scale = dim as f64 * wigner_density(u);
    if !(density_scale > 0.0) {
        return Err(Error::Domain(format!(
            "pair correlation needs a bulk point with positive density, got u = {u}"
        )));
    }
    let grid = GridSpec::new(-window, window, bins)?;
    let s = 1.0 / dim as f64;
    let per_sample = |src: &mut GaussianSource, counts: &mut [u64], outside: &mut u64| {
        let m = match ensemble {
            Ensemble::Gue => gue_sample(dim, s, src)?,
            Ensemble::Hse => hse_sample(dim, s, src)?,
        };
        let spectrum = eigenvalues(&m)?;
        let rescaled: Vec<f64> = spectrum
            .values()
            .iter()
            .map(|&v| (v - u) * density_scale)
            .filter(|xi| xi.abs() <= window)
            .collect();
        for (i, &xi) in rescaled.iter().enumerate() {
            for (j, &xj) in rescaled.iter().enumerate() {
                if i == j {
                    continue;
                }
                let tau = xi - xj;
                if xi.abs() <= window - tau.abs() {
                    match grid.bin_of(tau) {
                        Some(b) => counts[b] += 1,
                        // Unreachable: admissibility forces |tau| <= window.
                        None => *outside += 1,
                    }
                }
            }
        }
        Ok(())
    };
    let (counts, outside) = run_chunks(bins, samples, base, per_sample)?;
    Ok(CorrelationEstimate {
        ensemble,
        matrix_dim: dim,
        scale: s,
        order: 2,
        grid,
        counts,
        outside,
        samples,
    })
}
