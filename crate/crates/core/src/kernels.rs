//! Reproducing kernels of the Hermite families and their universal bulk
//! limit.
//!
//! The central object is the variance-`s` Christoffel-Darboux kernel
//!
//! `K_n(x, y, s) = sum_{k=0}^{n-1} phi_k(x, s) phi_k(y, s)
//!              = sqrt(n) s^{1/2}
//!                (phi_n(x,s) phi_{n-1}(y,s) - phi_{n-1}(x,s) phi_n(y,s))
//!                / (x - y)`,
//!
//! whose determinants produce the eigenvalue correlation functions in
//! [`crate::correlations`].  Both closed forms are implemented
//! independently — the two-term quotient ([`kernel_cd`]) as the production
//! route and the plain spectral sum ([`kernel_sum`]) as its cross-check —
//! together with the confluent diagonal, an integral representation used
//! as a further identity check, and the bulk rescaling that exposes the
//! sine-kernel limit.

use crate::error::{Error, Result};
use crate::geometry::{d_scale, principal_pow, wigner_density, wigner_density_complex};
use crate::hermite::{self, phi_pair, phi_scaled_pair};
use crate::quad;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative separation below which [`kernel_cd`] switches from the
/// two-term quotient to the confluent diagonal form at the midpoint.
/// The expansion about the midpoint is symmetric, so the switch is
/// second-order accurate in the separation while the quotient loses
/// roughly six digits to cancellation at this scale.
const CONFLUENT_SWITCH: f64 = 1e-6;

fn finite_or_overflow(mantissa: Complex64, log_scale: f64, what: &str) -> Result<Complex64> {
    let v = hermite::recombine(mantissa, log_scale);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} exceeds f64 range")))
    }
}

/// Variance-`s` kernel through the two-term Christoffel-Darboux quotient,
/// with the confluent midpoint form taking over for nearly coincident
/// arguments.  `s` must avoid the branch cut `(-inf, 0]`; `n = 0` gives
/// the empty kernel 0.
pub fn kernel_cd(n: usize, x: Complex64, y: Complex64, s: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let diff = x - y;
    if diff.norm() <= CONFLUENT_SWITCH * x.norm().max(1.0) {
        return kernel_diag(n, (x + y) / 2.0, s);
    }
    let px = phi_scaled_pair(n, x, s)?;
    let py = phi_scaled_pair(n, y, s)?;
    let numerator = px.upper * py.lower - px.lower * py.upper;
    let log_scale = px.log_scale + py.log_scale;
    let prefactor = (n as f64).sqrt() * principal_pow(s, 0.5)? / diff;
    finite_or_overflow(prefactor * numerator, log_scale, "kernel value")
}

/// Variance-`s` kernel as the plain spectral sum
/// `sum_{k<n} phi_k(x, s) phi_k(y, s)`, computed by two log-carried
/// recurrences in lockstep.  Independent of [`kernel_cd`]; the two must
/// agree to near machine precision wherever both are finite.
pub fn kernel_sum(n: usize, x: Complex64, y: Complex64, s: Complex64) -> Result<Complex64> {
    crate::geometry::require_finite(x, "kernel argument")?;
    crate::geometry::require_finite(y, "kernel argument")?;
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let inv_sqrt = principal_pow(s, -0.5)?;
    let a = x * inv_sqrt;
    let b = y * inv_sqrt;

    let seed = |u: Complex64| -> (Complex64, Complex64, f64) {
        let w = -u * u / 4.0;
        let f0 = Complex64::from_polar((2.0 * PI).powf(-0.25), w.im);
        (Complex64::new(0.0, 0.0), f0, w.re)
    };
    let (mut a_lo, mut a_hi, mut a_log) = seed(a);
    let (mut b_lo, mut b_hi, mut b_log) = seed(b);

    // Log-aligned accumulator for sum of mantissa * exp(log) terms.
    let mut acc = Complex64::new(0.0, 0.0);
    let mut acc_log = f64::NEG_INFINITY;
    let mut push = |m: Complex64, log: f64| {
        if m.norm() == 0.0 {
            return;
        }
        if acc.norm() == 0.0 {
            acc = m;
            acc_log = log;
        } else if log > acc_log {
            acc = acc * (acc_log - log).exp() + m;
            acc_log = log;
        } else {
            acc += m * (log - acc_log).exp();
        }
        let norm = acc.norm();
        if norm > hermite::RESCALE_HI || (norm > 0.0 && norm < hermite::RESCALE_LO) {
            acc /= norm;
            acc_log += norm.ln();
        }
    };

    push(a_hi * b_hi, a_log + b_log);
    for k in 0..n - 1 {
        let kf = k as f64;
        let root = (kf + 1.0).sqrt();
        let a_next = (a * a_hi - kf.sqrt() * a_lo) / root;
        a_lo = a_hi;
        a_hi = a_next;
        let b_next = (b * b_hi - kf.sqrt() * b_lo) / root;
        b_lo = b_hi;
        b_hi = b_next;
        let rescale = |lo: &mut Complex64, hi: &mut Complex64, log: &mut f64| {
            let m = lo.norm().max(hi.norm());
            if m > hermite::RESCALE_HI || (m > 0.0 && m < hermite::RESCALE_LO) {
                let l = m.ln();
                let inv = m.recip();
                *lo *= inv;
                *hi *= inv;
                *log += l;
            }
        };
        rescale(&mut a_lo, &mut a_hi, &mut a_log);
        rescale(&mut b_lo, &mut b_hi, &mut b_log);
        push(a_hi * b_hi, a_log + b_log);
    }
    finite_or_overflow(inv_sqrt * acc, acc_log, "kernel sum")
}

/// Confluent (equal-argument) kernel value
/// `K_n(x, x, s) = s^{-1/2} [ n (phi_n(u)^2 + phi_{n-1}(u)^2)
///                            - sqrt(n) u phi_n(u) phi_{n-1}(u) ]`
/// with `u = x s^{-1/2}`.  On the real line with `s > 0` this is the
/// one-point eigenvalue density of the Gaussian ensemble of dimension `n`.
pub fn kernel_diag(n: usize, x: Complex64, s: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let inv_sqrt = principal_pow(s, -0.5)?;
    let u = x * inv_sqrt;
    let p = phi_pair(n, u)?;
    let nf = n as f64;
    let d = nf * (p.upper * p.upper + p.lower * p.lower) - nf.sqrt() * u * p.upper * p.lower;
    finite_or_overflow(inv_sqrt * d, 2.0 * p.log_scale, "diagonal kernel value")
}

/// Integral representation of the variance-1 kernel on the real line:
/// `K_n(x, y, 1) = (sqrt(n)/2) * integral_0^inf
///     (phi_n(x+t) phi_{n-1}(y+t) + phi_{n-1}(x+t) phi_n(y+t)) dt`.
///
/// The integrand decays like the Gaussian weight once `x + t` passes the
/// spectral edge near `2 sqrt(n)`, so the integral is truncated at
/// `2 sqrt(n) + 30 - min(x, y, 0)` where it is below `1e-190` of the peak.
pub fn kernel_integral_repr(n: usize, x: f64, y: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("integral representation needs n >= 1".into()));
    }
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!(
            "integral representation needs finite arguments, got ({x}, {y})"
        )));
    }
    let t_max = 2.0 * (n as f64).sqrt() + 30.0 - x.min(y).min(0.0);
    let value = quad::integrate_real(
        |t| {
            let px = phi_pair(n, Complex64::new(x + t, 0.0)).expect("finite argument");
            let py = phi_pair(n, Complex64::new(y + t, 0.0)).expect("finite argument");
            let term = px.upper * py.lower + px.lower * py.upper;
            hermite::recombine(term, px.log_scale + py.log_scale).re
        },
        0.0,
        t_max,
        1e-10,
        1e-13,
    )?;
    Ok(0.5 * (n as f64).sqrt() * value)
}

/// The sine kernel `sin(pi (t1 - t2)) / (pi (t1 - t2))`, the universal
/// bulk limit of the rescaled Hermite kernels; 1 on the diagonal.
pub fn sine_kernel(t1: f64, t2: f64) -> f64 {
    let a = PI * (t1 - t2);
    if a.abs() < 1e-8 {
        1.0 - a * a / 6.0
    } else {
        a.sin() / a
    }
}

/// `sin(z) / z` for complex `z`, with the series taking over near 0.
fn sinc_c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-8 {
        Complex64::new(1.0, 0.0) - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// Bulk rescaling around a point `u` in the open bulk `(-2, 2)` of the
/// dimension-`n` spectrum at variance `1/n`: unit mean spacing is achieved
/// by measuring distances in `1 / (n w(u))` with `w` the semicircle
/// density, under which the kernel tends to [`sine_kernel`].
#[derive(Debug, Clone, Copy)]
pub struct BulkRescaling {
    u: f64,
    n: usize,
}

impl BulkRescaling {
    pub fn new(u: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("bulk rescaling needs n >= 1".into()));
        }
        if !u.is_finite() || u.abs() >= 2.0 {
            return Err(Error::Domain(format!(
                "bulk rescaling needs u in (-2, 2), got {u}"
            )));
        }
        Ok(BulkRescaling { u, n })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Local density `n w(u)`: the factor converting unit-spacing
    /// coordinates to spectral ones.
    pub fn density_scale(&self) -> f64 {
        self.n as f64 * wigner_density(self.u)
    }

    /// Spectral location of the unit-spacing coordinate `xi`.
    pub fn spectral_point(&self, xi: f64) -> f64 {
        self.u + xi / self.density_scale()
    }

    /// Rescaled kernel `K_n(x(xi), x(eta), 1/n) / (n w(u))`, which
    /// converges to `sine_kernel(xi, eta)` as `n` grows.
    pub fn kernel(&self, xi: f64, eta: f64) -> Result<f64> {
        let s = Complex64::new(1.0 / self.n as f64, 0.0);
        let x = Complex64::new(self.spectral_point(xi), 0.0);
        let y = Complex64::new(self.spectral_point(eta), 0.0);
        let v = kernel_cd(self.n, x, y, s)?;
        debug_assert!(v.im.abs() <= 1e-10 * v.re.abs().max(1.0));
        Ok(v.re / self.density_scale())
    }

    /// Rescaled kernel along the complex dilation path: both spectral
    /// points are rotated by the unit-hyperbola factor `d(h)` before the
    /// kernel is evaluated, probing the continuation of the bulk limit
    /// off the real axis.  `h = 0` reduces exactly to [`Self::kernel`].
    pub fn kernel_complex_path(&self, t1: f64, t2: f64, h: f64) -> Result<Complex64> {
        if !(t1.is_finite() && t2.is_finite() && h.is_finite()) {
            return Err(Error::Domain(format!(
                "complex-path kernel needs finite arguments, got ({t1}, {t2}, {h})"
            )));
        }
        let d = d_scale(h);
        let s = Complex64::new(1.0 / self.n as f64, 0.0);
        let x = self.spectral_point(t1) * d;
        let y = self.spectral_point(t2) * d;
        Ok(kernel_cd(self.n, x, y, s)? / self.density_scale())
    }

    /// Large-`n` limit of [`Self::kernel_complex_path`]: with
    /// `rho = w(u d(h)) / w(u)` (semicircle density continued to the
    /// dilated point) the limit is
    /// `rho * sinc(pi (t1 - t2) d(h) rho)`, which collapses to the sine
    /// kernel at `h = 0` and to the density ratio on the diagonal.
    pub fn complex_path_limit(&self, t1: f64, t2: f64, h: f64) -> Result<Complex64> {
        if !(t1.is_finite() && t2.is_finite() && h.is_finite()) {
            return Err(Error::Domain(format!(
                "complex-path limit needs finite arguments, got ({t1}, {t2}, {h})"
            )));
        }
        let d = d_scale(h);
        let rho = wigner_density_complex(self.u * d)? / wigner_density(self.u);
        let z = PI * (t1 - t2) * d;
        Ok(rho * sinc_c(z * rho))
    }
}
