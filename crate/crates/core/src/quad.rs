//! Quadrature utilities: adaptive Gauss-Kronrod panels for complex-valued
//! integrands on a real interval, and Gauss-Legendre rules of arbitrary
//! order for fixed-node integration.

use crate::error::{Error, Result};
use num_complex::Complex64;

// 15-point Kronrod nodes (positive half, descending) with the embedded
// 7-point Gauss rule.  Standard QUADPACK values.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_96,
    0.063_092_092_629_978_553_29,
    0.104_790_010_322_250_183_8,
    0.140_653_259_715_525_918_7,
    0.169_004_726_639_267_902_8,
    0.190_350_578_064_785_409_9,
    0.204_432_940_075_298_892_4,
    0.209_482_141_084_727_828_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_3,
    0.279_705_391_489_276_667_9,
    0.381_830_050_505_118_944_9,
    0.417_959_183_673_469_387_8,
];

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let lo = f(c - h * XGK[j]);
        let hi = f(c + h * XGK[j]);
        kronrod += WGK[j] * (lo + hi);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }
    kronrod *= h;
    gauss *= h;
    (kronrod, (kronrod - gauss).norm())
}

/// Integrate `f` over `[a, b]` by adaptive bisection of Gauss-Kronrod 15/7
/// panels until each panel's error estimate fits its share of `abs_tol`
/// plus `rel_tol` of the running total.
///
/// The panel budget is generous (4096); exceeding it reports
/// [`Error::NonConvergence`] rather than returning a value of unknown
/// quality.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Complex64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("quadrature endpoints must be finite".into()));
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let total_len = (b - a).abs();
    let mut stack = vec![(a, b)];
    let mut value = Complex64::new(0.0, 0.0);
    let mut rough = {
        let (k, _) = gk15(&mut f, a, b);
        k.norm()
    };
    let mut panels = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        panels += 1;
        if panels > 4096 {
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature on [{a}, {b}] exceeded its panel budget"
            )));
        }
        let (k, err) = gk15(&mut f, lo, hi);
        let share = abs_tol * ((hi - lo).abs() / total_len) + rel_tol * rough.max(k.norm());
        let width_floor = (hi - lo).abs() <= total_len * 1e-14;
        if err <= share.max(f64::MIN_POSITIVE) || width_floor {
            value += k;
            rough = rough.max(value.norm());
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    Ok(value)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, rel_tol, abs_tol).map(|v| v.re)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
