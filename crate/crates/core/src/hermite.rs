//! Hermite machinery in the probabilists' normalization used throughout
//! this crate: the weight is `exp(-x^2/4)`, the orthonormal functions
//! `phi_n` satisfy `integral phi_m phi_n dx = delta_{mn}` on the real
//! line, and the variance-scaled family is
//! `phi_n(x, s) = s^{-1/4} phi_n(x s^{-1/2})` (principal roots for
//! complex `s`).
//!
//! Everything is driven by the three-term recurrence
//! `phi_{k+1} = (x phi_k - sqrt(k) phi_{k-1}) / sqrt(k+1)`, seeded with
//! `phi_0 = (2 pi)^{-1/4} exp(-x^2/4)` and `phi_1 = x phi_0`.  The same
//! recurrence without the weight generates the orthonormal polynomials
//! `p_n`, and `H_{k+1} = x H_k - s k H_{k-1}` generates the monic
//! variance-`s` family.  Off the real axis the values grow or decay like
//! `exp(|Im x|^2/4)`-type factors, so every sweep runs behind a log-scale
//! carrier: the stored pair is rescaled whenever its magnitude leaves
//! `[1e-100, 1e100]`, and the accumulated logarithm travels alongside.
//!
//! The module also provides the two large-`n` asymptotic regimes for the
//! scaled family (oscillatory bulk on `(-1, 1)` in units of `sqrt(2n)`,
//! and growth off `[-2, 2]` in units of `sqrt(n)`), used by the harness
//! to measure how fast the exact functions approach their limits.

use crate::error::{Error, Result};
use crate::geometry::{self, joukowski_root, principal_pow, principal_sqrt, SLIT_EPS};
use crate::quad;
use num_complex::Complex64;
use std::f64::consts::PI;

pub(crate) const RESCALE_HI: f64 = 1e100;
pub(crate) const RESCALE_LO: f64 = 1e-100;

fn inv_quartic_two_pi() -> f64 {
    (2.0 * PI).powf(-0.25)
}

/// A complex value stored as `exp(log_magnitude) * exp(i * phase)`,
/// usable far beyond f64 exponent range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaledValue {
    pub log_magnitude: f64,
    pub phase: f64,
}

impl LogScaledValue {
    pub fn from_scaled(mantissa: Complex64, log_scale: f64) -> Self {
        LogScaledValue {
            log_magnitude: log_scale + mantissa.norm().ln(),
            phase: mantissa.arg(),
        }
    }

    /// The plain complex value; overflows to infinity (or flushes to zero)
    /// outside f64 range.
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    /// Phase reduced to `(-pi, pi]`.
    pub fn principal_phase(&self) -> f64 {
        wrap_phase(self.phase)
    }

    /// The unit-modulus factor `exp(i * phase)`.
    pub fn phase_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phase)
    }
}

/// Reduce an angle to `(-pi, pi]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut p = theta.rem_euclid(two_pi);
    if p > PI {
        p -= two_pi;
    }
    p
}

/// Consecutive values `(f_{n-1}, f_n)` of one of the Hermite families,
/// stored as mantissas against a shared log scale:
/// true value = mantissa * exp(log_scale).
///
/// The pair is what the Christoffel-Darboux kernels consume; `lower` is
/// zero when `order == 0`.
#[derive(Debug, Clone, Copy)]
pub struct HermitePair {
    pub order: usize,
    pub lower: Complex64,
    pub upper: Complex64,
    pub log_scale: f64,
}

impl HermitePair {
    pub fn upper_value(&self) -> Complex64 {
        scaled_value(self.upper, self.log_scale)
    }

    pub fn lower_value(&self) -> Complex64 {
        scaled_value(self.lower, self.log_scale)
    }

    pub fn upper_log(&self) -> LogScaledValue {
        LogScaledValue::from_scaled(self.upper, self.log_scale)
    }

    pub fn lower_log(&self) -> LogScaledValue {
        LogScaledValue::from_scaled(self.lower, self.log_scale)
    }
}

pub(crate) fn recombine(mantissa: Complex64, log_scale: f64) -> Complex64 {
    scaled_value(mantissa, log_scale)
}

fn scaled_value(mantissa: Complex64, log_scale: f64) -> Complex64 {
    let s = log_scale.exp();
    if s.is_finite() && s > 0.0 {
        mantissa * s
    } else {
        // exp over/underflowed on its own; recombine in log form, where the
        // mantissa magnitude (within [1e-100, 1e100]) can still bring the
        // product back into range.
        LogScaledValue::from_scaled(mantissa, log_scale).value()
    }
}

fn rescale(lo: &mut Complex64, hi: &mut Complex64, log_scale: &mut f64) {
    let m = lo.norm().max(hi.norm());
    if m > RESCALE_HI || (m > 0.0 && m < RESCALE_LO) {
        let l = m.ln();
        let inv = m.recip();
        *lo *= inv;
        *hi *= inv;
        *log_scale += l;
    }
}

fn orthonormal_pair(n: usize, x: Complex64, f0: Complex64, seed_log: f64) -> HermitePair {
    if n == 0 {
        return HermitePair {
            order: 0,
            lower: Complex64::new(0.0, 0.0),
            upper: f0,
            log_scale: seed_log,
        };
    }
    let mut log_scale = seed_log;
    let mut lo = f0;
    let mut hi = x * f0;
    for k in 1..n {
        let next = (x * hi - (k as f64).sqrt() * lo) / ((k + 1) as f64).sqrt();
        lo = hi;
        hi = next;
        rescale(&mut lo, &mut hi, &mut log_scale);
    }
    HermitePair {
        order: n,
        lower: lo,
        upper: hi,
        log_scale,
    }
}

/// Pair `(phi_{n-1}(x), phi_n(x))` of orthonormal Hermite functions
/// (weight `exp(-x^2/4)` included), log-scaled.
pub fn phi_pair(n: usize, x: Complex64) -> Result<HermitePair> {
    geometry::require_finite(x, "hermite function argument")?;
    let w = -x * x / 4.0;
    let f0 = Complex64::from_polar(inv_quartic_two_pi(), w.im);
    Ok(orthonormal_pair(n, x, f0, w.re))
}

/// Orthonormal Hermite function `phi_n(x)` as a plain complex value.
pub fn phi(n: usize, x: Complex64) -> Result<Complex64> {
    Ok(phi_pair(n, x)?.upper_value())
}

/// Pair `(p_{n-1}(x), p_n(x))` of orthonormal Hermite polynomials (no
/// weight), log-scaled.
pub fn poly_pair(n: usize, x: Complex64) -> Result<HermitePair> {
    geometry::require_finite(x, "hermite polynomial argument")?;
    let f0 = Complex64::new(inv_quartic_two_pi(), 0.0);
    Ok(orthonormal_pair(n, x, f0, 0.0))
}

/// Pair `(H_{n-1}(x, s), H_n(x, s))` of monic variance-`s` Hermite
/// polynomials, from `H_{k+1} = x H_k - s k H_{k-1}`.
pub fn monic_pair(n: usize, x: Complex64, s: Complex64) -> Result<HermitePair> {
    geometry::require_finite(x, "monic hermite argument")?;
    geometry::require_finite(s, "monic hermite scale")?;
    if n == 0 {
        return Ok(HermitePair {
            order: 0,
            lower: Complex64::new(0.0, 0.0),
            upper: Complex64::new(1.0, 0.0),
            log_scale: 0.0,
        });
    }
    let mut log_scale = 0.0;
    let mut lo = Complex64::new(1.0, 0.0);
    let mut hi = x;
    for k in 1..n {
        let next = x * hi - s * (k as f64) * lo;
        lo = hi;
        hi = next;
        rescale(&mut lo, &mut hi, &mut log_scale);
    }
    Ok(HermitePair {
        order: n,
        lower: lo,
        upper: hi,
        log_scale,
    })
}

/// Monic variance-`s` Hermite polynomial `H_n(x, s)` as a plain value;
/// errors if it exceeds f64 range.
pub fn monic_hermite(n: usize, x: Complex64, s: Complex64) -> Result<Complex64> {
    let v = monic_pair(n, x, s)?.upper_value();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!(
            "monic hermite value out of f64 range at n = {n}, x = {x}"
        )))
    }
}

/// Pair of variance-scaled orthonormal functions
/// `(phi_{n-1}(x, s), phi_n(x, s))` with
/// `phi_n(x, s) = s^{-1/4} phi_n(x s^{-1/2})`, principal roots; `s` must
/// avoid the branch cut `(-inf, 0]`.
pub fn phi_scaled_pair(n: usize, x: Complex64, s: Complex64) -> Result<HermitePair> {
    geometry::require_finite(x, "scaled hermite argument")?;
    let inv_sqrt = principal_pow(s, -0.5)?;
    let quarter = principal_pow(s, -0.25)?;
    let mut pair = phi_pair(n, x * inv_sqrt)?;
    pair.lower *= quarter;
    pair.upper *= quarter;
    rescale(&mut pair.lower, &mut pair.upper, &mut pair.log_scale);
    Ok(pair)
}

/// Variance-scaled orthonormal function `phi_n(x, s)` as a plain value.
pub fn phi_scaled(n: usize, x: Complex64, s: Complex64) -> Result<Complex64> {
    Ok(phi_scaled_pair(n, x, s)?.upper_value())
}

/// Principal arcsine `-i Log(iz + sqrt(1 - z^2))`, defined off the real
/// rays `|Re z| > 1` (the endpoints `z = +-1` themselves are fine).
pub fn arcsin_c(z: Complex64) -> Result<Complex64> {
    geometry::require_finite(z, "arcsin argument")?;
    let w = principal_sqrt(Complex64::new(1.0, 0.0) - z * z)?;
    let t = Complex64::i() * z + w;
    Ok(-Complex64::i() * t.ln())
}

/// Phase integral of the bulk asymptotic: `integral_1^z psi(y) dy` for the
/// semicircle-normalized phase density `psi(y) = (2/pi) sqrt(1-y) sqrt(1+y)`.
///
/// Evaluated through the substitution `y = 1 - (1 - z) q^2`, which removes
/// the square-root vanishing at the right edge and leaves the analytic
/// integrand `-(4/pi) (1-z)^{3/2} q^2 sqrt(2 - (1-z) q^2)` on `q` in
/// `[0, 1]`.  Defined for `z` near the open interval `(-1, 1)`; real
/// arguments beyond either edge are rejected.
pub fn pr_phase_integral(z: Complex64) -> Result<Complex64> {
    geometry::require_finite(z, "phase integral argument")?;
    if z.im.abs() <= SLIT_EPS {
        if z.re == 1.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if z.re > 1.0 || z.re <= -1.0 {
            return Err(Error::Domain(format!(
                "phase integral is defined near (-1, 1], got z = {z}"
            )));
        }
    }
    let w = Complex64::new(1.0, 0.0) - z;
    let prefactor = principal_pow(w, 1.5)?;
    // 2 - w q^2 runs along the segment from 2 to 1 + z, which stays off the
    // cut (-inf, 0] for every z admitted above, so the raw half-angle root
    // agrees with the principal branch throughout.
    let integral = quad::integrate(
        |q| {
            let q2 = q * q;
            q2 * geometry::sqrt_raw(Complex64::new(2.0, 0.0) - w * q2)
        },
        0.0,
        1.0,
        1e-13,
        1e-15,
    )?;
    Ok(-(4.0 / PI) * prefactor * integral)
}

/// Oscillatory bulk asymptotic for the scaled Hermite function at
/// variance 1/2: approximates `phi_n(sqrt(2n) z, 1/2)` for `z` in the open
/// bulk `(-1, 1)` by
///
/// `sqrt(2 / (pi sqrt(2n))) (1-z^2)^{-1/4}
///     cos(n pi * integral_1^z psi + arcsin(z)/2)`.
///
/// Points within `1e-3` of either edge are rejected: the error blows up
/// there and a different (Airy) regime takes over.  Real arguments outside
/// `(-1, 1)` are rejected by the phase integral; complex `z` near the open
/// interval is accepted and the formula continues analytically.
pub fn pr_bulk_asymptotic(n: u64, z: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Domain("bulk asymptotic needs n >= 1".into()));
    }
    geometry::require_finite(z, "bulk asymptotic argument")?;
    if (z - 1.0).norm() < 1e-3 || (z + 1.0).norm() < 1e-3 {
        return Err(Error::Domain(format!(
            "bulk asymptotic is valid only at distance >= 1e-3 from the edges +-1, got z = {z}"
        )));
    }
    let nf = n as f64;
    let phase_integral = pr_phase_integral(z)?;
    let phase = nf * PI * phase_integral + 0.5 * arcsin_c(z)?;
    let amplitude = (2.0 / (PI * (2.0 * nf).sqrt())).sqrt()
        * principal_pow(1.0 - z, -0.25)?
        * principal_pow(1.0 + z, -0.25)?;
    Ok(amplitude * phase.cos())
}

/// Convenience wrapper for [`pr_bulk_asymptotic`] at real `z`, where the
/// approximation (to the real function `phi~_n(sqrt(2n) z, 1/2)`) is real.
pub fn pr_bulk_asymptotic_real(n: u64, z: f64) -> Result<f64> {
    Ok(pr_bulk_asymptotic(n, Complex64::new(z, 0.0))?.re)
}

/// Exterior growth asymptotic for the orthonormal Hermite polynomial:
/// approximates `p_n(z sqrt(n))` for `z` off `[-2, 2]` by
///
/// `(((z-2)/(z+2))^{1/4} + ((z+2)/(z-2))^{1/4})
///     * exp(n (1 + x^2)/2) / (2 sqrt(2 pi) n^{1/4} x^n)`,
///
/// where `x = x(z)` is the Joukowski root with `|x| < 1`.  Returned in log
/// form, since the value overflows f64 almost immediately.  Arguments with
/// `|x(z)| > 0.999` are rejected as too close to the spectral interval.
pub fn pr_exterior_asymptotic(n: u64, z: Complex64) -> Result<LogScaledValue> {
    if n == 0 {
        return Err(Error::Domain("exterior asymptotic needs n >= 1".into()));
    }
    let x = joukowski_root(z)?;
    if x.norm() > 0.999 {
        return Err(Error::Domain(format!(
            "exterior asymptotic needs |x(z)| <= 0.999, got |x| = {} at z = {z}",
            x.norm()
        )));
    }
    let zm = z - 2.0;
    let zp = z + 2.0;
    let u = principal_pow(zm / zp, 0.25)? + principal_pow(zp / zm, 0.25)?;
    let nf = n as f64;
    let x2 = x * x;
    let log_magnitude = u.norm().ln() + nf * (1.0 + x2.re) / 2.0
        - (2.0 * (2.0 * PI).sqrt()).ln()
        - 0.25 * nf.ln()
        - nf * x.norm().ln();
    let phase = u.arg() + nf * x2.im / 2.0 - nf * x.arg();
    Ok(LogScaledValue {
        log_magnitude,
        phase,
    })
}
