//! Numerical toolkit for two families of Hermitian random matrices: the
//! Gaussian unitary ensemble (GUE) at an arbitrary variance scale, and the
//! ensemble obtained by conditioning the Hilbert-Schmidt norm to a fixed
//! value (uniform measure on the sphere `tr A^2 = s N^2`, called HSE here).
//!
//! The exact side of the toolkit works with Hermite functions and their
//! Christoffel-Darboux kernels: GUE correlation functions of every order are
//! determinants of such kernels, and remain meaningful for complex variance
//! parameters off the branch cut `(-inf, 0]`, which is what connects the two
//! ensembles.  The probabilistic side draws matrices, extracts spectra, and
//! accumulates binned correlation estimates whose parallel evaluation is
//! bit-for-bit reproducible.  The [`harness`] module packages both sides into
//! named experiments behind the `rmt` command-line binary: semicircle laws,
//! sine-kernel universality in the spectral bulk (exact and Monte Carlo),
//! the chi-square disintegration that ties HSE to GUE, a Fourier identity
//! for the fixed-norm radius, Plancherel-Rotach asymptotics, and a battery
//! of deterministic identities.
//!
//! Numerical conventions used throughout:
//!
//! * complex powers are principal-branch powers on `C \ (-inf, 0]`;
//! * Hermite functions carry the weight `exp(-x^2/4)` and are orthonormal
//!   with respect to Lebesgue measure; scaled variants
//!   `phi~_k(x, s) = s^{-1/4} phi_k(x s^{-1/2})` use principal powers of `s`;
//! * magnitudes beyond `1e100` travel in log-scaled form (see
//!   [`hermite::LogScaledValue`]) so growth regimes never overflow silently.

pub mod correlations;
pub mod ensembles;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod hermite;
pub mod kernels;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
