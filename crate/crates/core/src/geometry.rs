//! Complex-plane groundwork: principal branch powers, the variance-rotation
//! scale `d(H) = sqrt(1 + iH)`, the semicircle density and its analytic
//! continuation, and the regions (strips, ellipse exteriors) on which the
//! asymptotic machinery of the other modules is valid.
//!
//! Branch conventions, fixed once here and inherited everywhere else:
//! `z^a = exp(a Log z)` with the principal logarithm on `C \ (-inf, 0]`,
//! extended by `sqrt(0) = 0`.  Points whose imaginary part is within
//! `1e-300` of zero are treated as lying on the real axis for every cut
//! test, so signed zeros and denormal noise cannot smuggle an argument
//! across a slit.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Half-width of every branch-cut / slit membership test.
pub const SLIT_EPS: f64 = 1e-300;

pub(crate) fn require_finite(z: Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {z}")))
    }
}

fn on_negative_real_axis(z: Complex64) -> bool {
    z.im.abs() <= SLIT_EPS && z.re <= SLIT_EPS
}

/// Square root with the `atan2` half-angle convention, no cut policing.
///
/// On the negative real axis this returns the limit from the side the
/// signed zero of `im` points to; callers that need a genuine two-sided
/// continuation (the Joukowski root below) rely on products in which the
/// one-sided jumps cancel.
pub(crate) fn sqrt_raw(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let half = 0.5 * z.im.atan2(z.re);
    Complex64::from_polar(r.sqrt(), half)
}

/// Principal-branch power `z^alpha = exp(alpha Log z)` on `C \ (-inf, 0]`,
/// extended by `0^(1/2) = 0`.
///
/// Arguments on the cut (imaginary part within [`SLIT_EPS`] of zero and
/// non-positive real part) are rejected, except the origin when
/// `alpha = 1/2`.
pub fn principal_pow(z: Complex64, alpha: f64) -> Result<Complex64> {
    require_finite(z, "principal_pow argument")?;
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("exponent must be finite, got {alpha}")));
    }
    if on_negative_real_axis(z) {
        if z.re.abs() <= SLIT_EPS && alpha == 0.5 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::Domain(format!(
            "principal power undefined on the branch cut (-inf, 0]: z = {z}"
        )));
    }
    let theta = z.im.atan2(z.re);
    Ok(Complex64::from_polar(z.norm().powf(alpha), alpha * theta))
}

/// Principal square root, with the same domain policy as
/// [`principal_pow`] at `alpha = 1/2`.
pub fn principal_sqrt(z: Complex64) -> Result<Complex64> {
    principal_pow(z, 0.5)
}

/// `d(H) = sqrt(1 + iH)` for real `H`, via the cancellation-free closed
/// form `Re d = sqrt((q + 1)/2)`, `Im d = H / sqrt(2(q + 1))` with
/// `q = sqrt(1 + H^2)`.
///
/// This is the factor by which spectra stretch and rotate when the variance
/// scale moves from `s` to `s / (1 + iH)`; it satisfies `d(H)^2 = 1 + iH`,
/// `|d(H)| = (1 + H^2)^{1/4}`, and `(Re d)^2 - (Im d)^2 = 1` identically.
pub fn d_scale(h: f64) -> Complex64 {
    assert!(h.is_finite(), "d_scale requires finite H, got {h}");
    let q = h.hypot(1.0);
    let re = ((q + 1.0) / 2.0).sqrt();
    let im = h / (2.0 * (q + 1.0)).sqrt();
    Complex64::new(re, im)
}

/// The largest `|H|` for which `|Im d(H)| <= b`: inverts the imaginary
/// part of [`d_scale`] as `H_b = 2 b sqrt(1 + b^2)`.
pub fn h_bound(b: f64) -> Result<f64> {
    if !b.is_finite() || b < 0.0 {
        return Err(Error::Domain(format!(
            "h_bound is defined for b >= 0, got {b}"
        )));
    }
    Ok(2.0 * b * (1.0 + b * b).sqrt())
}

/// Semicircle density `w(u) = (2 pi)^{-1} sqrt((4 - u^2)_+)` on the real
/// line; identically zero outside `[-2, 2]`.
pub fn wigner_density(u: f64) -> f64 {
    assert!(u.is_finite(), "wigner_density requires finite u, got {u}");
    (4.0 - u * u).max(0.0).sqrt() / (2.0 * std::f64::consts::PI)
}

/// Analytic continuation of the semicircle density to
/// `C \ ((-inf, -2] U [2, inf))`:
/// `w(z) = (2 pi)^{-1} (2 - z)^{1/2} (2 + z)^{1/2}` with principal roots.
///
/// Each factor's branch cut lands exactly on one of the two excluded slits,
/// so the product is analytic on the doubly-slit plane and positive on the
/// open interval `(-2, 2)` where it agrees with [`wigner_density`].
pub fn wigner_density_complex(z: Complex64) -> Result<Complex64> {
    require_finite(z, "wigner_density_complex argument")?;
    if z.im.abs() <= SLIT_EPS && z.re.abs() >= 2.0 {
        return Err(Error::Domain(format!(
            "semicircle continuation undefined on the slits (-inf, -2] and [2, inf): z = {z}"
        )));
    }
    let a = principal_sqrt(Complex64::new(2.0, 0.0) - z)?;
    let b = principal_sqrt(Complex64::new(2.0, 0.0) + z)?;
    Ok(a * b / (2.0 * std::f64::consts::PI))
}

/// Open strip `{ |Re z| < 2 - alpha, |Im z| < beta }` (closure available
/// through the `closed` flag of [`in_strip`]).  Requires
/// `alpha` in `(0, 2)` and `beta > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripSpec {
    alpha: f64,
    beta: f64,
}

impl StripSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) || alpha <= 0.0 || alpha >= 2.0 || beta <= 0.0 {
            return Err(Error::Domain(format!(
                "strip parameters need alpha in (0, 2) and beta > 0, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(StripSpec { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Strip membership; `closed` selects the closure (non-strict
/// inequalities).
pub fn in_strip(z: Complex64, spec: &StripSpec, closed: bool) -> bool {
    let half_width = 2.0 - spec.alpha;
    if closed {
        z.re.abs() <= half_width && z.im.abs() <= spec.beta
    } else {
        z.re.abs() < half_width && z.im.abs() < spec.beta
    }
}

/// Ellipse with foci `±2` and Joukowski parameter `r` in `(0, 1)`:
/// semi-axes `1/r + r` (real) and `1/r - r` (imaginary).  `E_r` denotes the
/// closed exterior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseSpec {
    r: f64,
}

impl EllipseSpec {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r <= 0.0 || r >= 1.0 {
            return Err(Error::Domain(format!(
                "ellipse parameter needs r in (0, 1), got {r}"
            )));
        }
        Ok(EllipseSpec { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (1.0 / self.r + self.r, 1.0 / self.r - self.r)
    }
}

/// Membership in the closed ellipse exterior `E_r` (boundary included).
///
/// Equivalent to `|x(z)| <= r` for the Joukowski root off `[-2, 2]`; the
/// quadratic form below also covers the slit itself (which is interior to
/// every such ellipse).
pub fn in_ellipse_exterior(z: Complex64, spec: &EllipseSpec) -> bool {
    let (a, b) = spec.semi_axes();
    let q = (z.re / a).powi(2) + (z.im / b).powi(2);
    q >= 1.0
}

/// The root `x(z)` of `x + 1/x = z` with `|x| < 1`, analytic on
/// `C \ [-2, 2]`:
/// `x(z) = (z - kappa(z)) / 2` where `kappa(z) = sqrt(z - 2) sqrt(z + 2)`
/// continues `sqrt(z^2 - 4)` with `kappa(t) > 0` for `t > 2`.
///
/// Implementation notes: `kappa` switches to `z sqrt(1 - 4/z^2)` for
/// `|z| > 4` (same branch, no subtractive cancellation), and the root is
/// evaluated as `2 / (z + kappa(z))`, algebraically identical to
/// `(z - kappa)/2` but stable for large `|z|`.
pub fn joukowski_root(z: Complex64) -> Result<Complex64> {
    require_finite(z, "joukowski_root argument")?;
    if z.im.abs() <= SLIT_EPS && z.re.abs() <= 2.0 {
        return Err(Error::Domain(format!(
            "Joukowski root undefined on the segment [-2, 2]: z = {z}"
        )));
    }
    let kappa = if z.norm() > 4.0 {
        z * sqrt_raw(Complex64::new(1.0, 0.0) - 4.0 / (z * z))
    } else {
        // The half-angle jumps of the two factors cancel on (-inf, -2), so
        // the product is the genuine two-sided continuation there.
        sqrt_raw(z - 2.0) * sqrt_raw(z + 2.0)
    };
    let x = 2.0 / (z + kappa);
    debug_assert!(x.norm() < 1.0 + 1e-12, "root escaped the unit disc: {x}");
    Ok(x)
}
