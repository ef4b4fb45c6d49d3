//! Property-based and statistical integration tests: randomized
//! algebraic invariants (proptest) plus fixed-seed goodness-of-fit
//! checks that tie the samplers to the exact kernel formulas.

use num_complex::Complex64;
use proptest::prelude::*;
use rmt::ensembles::{
    eigenvalues, estimate_density, Ensemble, GridSpec, HermitianMatrix, RngStream,
};
use rmt::hermite::{phi, pr_bulk_asymptotic_real};
use rmt::kernels::{kernel_cd, kernel_diag, kernel_sum, sine_kernel};
use rmt::correlations::{char_fn, sine_det};
use rmt::geometry::d_scale;
use rmt::special::chi_square_log_density;
use rmt::quad;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real(x: f64) -> Complex64 {
    c(x, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Three-term recurrence of the orthonormal Hermite functions.
    #[test]
    fn phi_three_term_recurrence(n in 1usize..60, x in -8.0f64..8.0) {
        let x = real(x);
        let km1 = phi(n - 1, x).unwrap();
        let k0 = phi(n, x).unwrap();
        let kp1 = phi(n + 1, x).unwrap();
        let nf = (n + 1) as f64;
        let combined = x / nf.sqrt() * k0 - (n as f64 / nf).sqrt() * km1;
        let scale = kp1.norm().max(k0.norm()).max(1e-12);
        prop_assert!(
            (kp1 - combined).norm() <= 1e-11 * scale,
            "n={n}, residual {}", (kp1 - combined).norm()
        );
    }

    /// Derivative identity phi_n' = sqrt(n) phi_{n-1} - (x/2) phi_n,
    /// checked against a central finite difference.
    #[test]
    fn phi_derivative_identity(n in 1usize..40, x in -6.0f64..6.0) {
        let h = 1e-5;
        let fd = (phi(n, real(x + h)).unwrap() - phi(n, real(x - h)).unwrap()) / (2.0 * h);
        let exact = (n as f64).sqrt() * phi(n - 1, real(x)).unwrap()
            - 0.5 * x * phi(n, real(x)).unwrap();
        // Central differences carry an O(h^2 f''') truncation error;
        // the third derivative grows like n^(3/2).
        let budget = 1e-9 * (n as f64).powf(1.5) + 1e-9;
        prop_assert!(
            (fd - exact).norm() <= budget,
            "n={n}, x={x}: fd {} vs exact {}", fd, exact
        );
    }

    /// Parity: phi_n(-x) = (-1)^n phi_n(x).
    #[test]
    fn phi_parity(n in 0usize..80, x in -10.0f64..10.0) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = phi(n, real(-x)).unwrap();
        let rhs = sign * phi(n, real(x)).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm().max(1e-300));
    }

    /// The kernel is symmetric in its two points, and the sum and
    /// Christoffel-Darboux forms agree off the diagonal.
    #[test]
    fn kernel_symmetry_and_forms(
        n in 1usize..20,
        x in -4.0f64..4.0,
        y in -4.0f64..4.0,
        sre in 0.3f64..2.0,
        sim in -1.0f64..1.0,
    ) {
        let s = c(sre, sim);
        let k_xy = kernel_cd(n, real(x), real(y), s).unwrap();
        let k_yx = kernel_cd(n, real(y), real(x), s).unwrap();
        prop_assert!((k_xy - k_yx).norm() <= 1e-12 * k_xy.norm().max(1.0));
        let direct = kernel_sum(n, real(x), real(y), s).unwrap();
        prop_assert!(
            (k_xy - direct).norm() <= 1e-10 * direct.norm().max(1.0),
            "n={n}: cd {} vs sum {}", k_xy, direct
        );
    }

    /// The kernel parameter dependence is complex-analytic off the
    /// branch cut: finite-difference Cauchy-Riemann in s.
    #[test]
    fn kernel_is_analytic_in_the_scale(
        n in 1usize..10,
        x in -2.0f64..2.0,
        y in -2.0f64..2.0,
        sre in 0.5f64..1.5,
        sim in -1.0f64..1.0,
    ) {
        let s = c(sre, sim);
        let h = 1e-5;
        let k = |sq: Complex64| kernel_cd(n, real(x), real(y), sq).unwrap();
        let d_re = (k(s + c(h, 0.0)) - k(s - c(h, 0.0))) / (2.0 * h);
        let d_im = (k(s + c(0.0, h)) - k(s - c(0.0, h))) / (c(0.0, 2.0) * h);
        let scale = d_re.norm().max(d_im.norm()).max(1e-6);
        prop_assert!(
            (d_re - d_im).norm() <= 1e-4 * scale,
            "CR residual {} at n={n}", (d_re - d_im).norm()
        );
    }

    /// Eigenvalues of a random Hermitian matrix come back sorted and
    /// satisfy the trace and Hilbert-Schmidt invariants.
    #[test]
    fn eigenvalues_sorted_with_exact_invariants(
        dim in 1usize..12,
        seed in 0u64..1000,
    ) {
        let mut src = rmt::ensembles::GaussianSource::new(RngStream::new(seed, 0));
        let m = rmt::ensembles::gue_sample(dim, 1.0, &mut src).unwrap();
        let spec = eigenvalues(&m).unwrap();
        let vals = spec.values();
        prop_assert_eq!(vals.len(), dim);
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = vals.iter().sum();
        let sq: f64 = vals.iter().map(|v| v * v).sum();
        let boundk = 1e-9 * (1.0 + m.hs_norm_sq());
        prop_assert!((sum - m.trace()).abs() <= boundk);
        prop_assert!((sq - m.hs_norm_sq()).abs() <= boundk);
    }

    /// Grid binning: every bin center lands in its own bin, edges bin
    /// rightward except the last.
    #[test]
    fn grid_bins_are_consistent(
        lo in -10.0f64..0.0,
        width in 0.5f64..20.0,
        bins in 1usize..64,
    ) {
        let grid = GridSpec::new(lo, lo + width, bins).unwrap();
        for b in 0..bins {
            prop_assert_eq!(grid.bin_of(grid.center(b)), Some(b));
        }
        prop_assert_eq!(grid.bin_of(lo), Some(0));
        prop_assert_eq!(grid.bin_of(lo + width), Some(bins - 1));
        prop_assert_eq!(grid.bin_of(lo - 1e-9), None);
        prop_assert_eq!(grid.bin_of(lo + width + 1e-9), None);
    }

    /// The two-point sine determinant equals 1 - sinc^2 of the gap.
    #[test]
    fn sine_det_pair_closed_form(t in -20.0f64..20.0) {
        prop_assume!(t.abs() > 1e-6);
        let det = sine_det(&[0.0, t]);
        let sc = (PI * t).sin() / (PI * t);
        prop_assert!((det - (1.0 - sc * sc)).abs() <= 1e-12);
        // And the diagonal kernel is the density 1.
        prop_assert!((sine_kernel(t, t) - 1.0).abs() <= 1e-15);
    }

    /// Dilation square identity and characteristic-function conjugate
    /// symmetry.
    #[test]
    fn dilation_and_char_fn_symmetries(h in -40.0f64..40.0, dim in 1usize..30) {
        let d = d_scale(h);
        prop_assert!((d * d - c(1.0, h)).norm() <= 1e-12 * (1.0 + h.abs()));
        prop_assert!(d.re > 0.0);
        let p = h / 3.0;
        let plus = char_fn(dim, p);
        let minus = char_fn(dim, -p);
        prop_assert!((plus - minus.conj()).norm() <= 1e-13 * plus.norm().max(1e-300));
        prop_assert!(plus.norm() <= 1.0 + 1e-12);
    }
}

/// Orthonormality of the Hermite functions under adaptive quadrature.
#[test]
fn phi_orthonormality_by_quadrature() {
    for &(i, j) in &[(0usize, 0usize), (1, 1), (4, 4), (0, 2), (3, 4), (2, 6)] {
        let want = if i == j { 1.0 } else { 0.0 };
        // Mass beyond |x| = 15 is ~1e-24 for these orders; a wider
        // interval would start the adaptive rule on all-zero samples.
        let val = quad::integrate_real(
            |x| (phi(i, real(x)).unwrap() * phi(j, real(x)).unwrap()).re,
            -15.0,
            15.0,
            1e-10,
            1e-12,
        )
        .unwrap();
        assert!(
            (val - want).abs() <= 1e-8,
            "<phi_{i}, phi_{j}> = {val}, want {want}"
        );
    }
}

/// The kernel is a projection: integrating K(x,t)K(t,y) over t
/// reproduces K(x,y).
#[test]
fn kernel_reproduces_itself_under_quadrature() {
    let one = real(1.0);
    for &n in &[1usize, 4, 8] {
        let limit = 2.0 * (n as f64).sqrt() + 10.0;
        for &(x, y) in &[(0.0, 0.0), (0.7, -0.3), (1.5, 2.2)] {
            let direct = kernel_cd(n, real(x), real(y), one).unwrap().re;
            let reproduced = quad::integrate_real(
                |t| {
                    (kernel_cd(n, real(x), real(t), one).unwrap()
                        * kernel_cd(n, real(t), real(y), one).unwrap())
                    .re
                },
                -limit,
                limit,
                1e-9,
                1e-11,
            )
            .unwrap();
            assert!(
                (reproduced - direct).abs() <= 1e-6 * direct.abs().max(1.0),
                "n={n}, (x,y)=({x},{y}): {reproduced} vs {direct}"
            );
        }
    }
}

/// Chi-square log densities integrate to one.
#[test]
fn chi_square_density_normalization() {
    for m in [1u64, 2, 3, 4, 9, 16] {
        let sigma = (2.0 * m as f64).sqrt();
        let split = m as f64 + 6.0 * sigma;
        let hi = m as f64 + 30.0 * sigma + 30.0;
        let density = |v: f64| chi_square_log_density(m, v).exp();
        let mass = quad::integrate_real(density, 0.0, split, 1e-10, 1e-12).unwrap()
            + quad::integrate_real(density, split, hi, 1e-10, 1e-12).unwrap();
        // The m=1 density has an integrable endpoint singularity that
        // caps what panel bisection alone can resolve.
        let tol = if m == 1 { 1e-5 } else { 1e-8 };
        assert!((mass - 1.0).abs() <= tol, "m={m}: mass {mass}");
    }
}

/// The exact finite-N one-point density tracks the semicircle law in
/// the bulk at N=400.
#[test]
fn exact_density_approaches_the_semicircle() {
    let n = 400usize;
    let s = c(1.0 / n as f64, 0.0);
    let mut x = -1.5f64;
    while x <= 1.5 {
        let exact = kernel_diag(n, real(x), s).unwrap().re / n as f64;
        let semicircle = (4.0 - x * x).sqrt() / (2.0 * PI);
        assert!(
            (exact - semicircle).abs() <= 0.01,
            "x={x}: {exact} vs {semicircle}"
        );
        x += 0.25;
    }
}

/// Pearson goodness of fit of the Gaussian-ensemble sampler against
/// the exact finite-N density: 20 bins over [-1.5, 1.5], N=20 at
/// s=1/20, 1e4 samples, fixed seed.  The statistic is compared with
/// the 0.999 chi-square quantile at 20 degrees of freedom; expected
/// counts come from quadrature of the exact kernel density, pinned
/// here by its midpoint value.
#[test]
fn sampler_matches_exact_density_in_distribution() {
    let n = 20usize;
    let s = 1.0 / n as f64;
    // Frozen reference for the exact density at the window center.
    let mid = kernel_cd(n, real(0.7), real(0.7), real(s)).unwrap().re;
    assert!(
        (mid / n as f64 - 0.3012230345207094609754).abs() <= 1e-12,
        "exact density pin moved: {mid}"
    );

    let samples = 10_000u64;
    let bins = 20usize;
    let grid = GridSpec::new(-1.5, 1.5, bins).unwrap();
    let est = estimate_density(
        Ensemble::Gue,
        n,
        s,
        samples,
        grid,
        RngStream::new(20260816, 0),
    )
    .unwrap();

    let mut chi2 = 0.0f64;
    for b in 0..bins {
        let expected = samples as f64
            * quad::integrate_real(
                |x| kernel_diag(n, real(x), real(s)).unwrap().re,
                grid.edge(b),
                grid.edge(b + 1),
                1e-10,
                1e-12,
            )
            .unwrap();
        let observed = est.density(b) * samples as f64 * n as f64 * grid.bin_width();
        chi2 += (observed - expected).powi(2) / expected;
        assert!(expected > 100.0, "bin {b} too thin for Pearson: {expected}");
    }
    // 0.999 quantile of chi-square with 20 degrees of freedom.
    assert!(
        chi2 <= 45.3147466181,
        "goodness-of-fit statistic {chi2} exceeds the 0.999 quantile"
    );
}

/// The eigenvalue histogram of a 1x1 Gaussian ensemble is standard
/// normal after scaling: Kolmogorov-Smirnov against the error
/// function at a fixed seed, plus a mean/variance sanity window.
#[test]
fn scalar_ensemble_is_gaussian() {
    let samples = 4000usize;
    let mut src = rmt::ensembles::GaussianSource::new(RngStream::new(99, 0));
    let mut values: Vec<f64> = (0..samples)
        .map(|_| {
            let m = rmt::ensembles::gue_sample(1, 1.0, &mut src).unwrap();
            eigenvalues(&m).unwrap().values()[0]
        })
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let normal_cdf = |x: f64| {
        // Abramowitz-Stegun 7.1.26 rational erf approximation.
        let t = 1.0 / (1.0 + 0.3275911 * (x.abs() / std::f64::consts::SQRT_2));
        let poly = t
            * (0.254829592
                + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
        let erf = 1.0 - poly * (-x * x / 2.0).exp();
        if x >= 0.0 {
            0.5 * (1.0 + erf)
        } else {
            0.5 * (1.0 - erf)
        }
    };
    let mut ks = 0.0f64;
    for (i, &v) in values.iter().enumerate() {
        let f = normal_cdf(v);
        ks = ks
            .max((f - i as f64 / samples as f64).abs())
            .max(((i + 1) as f64 / samples as f64 - f).abs());
    }
    // 1% critical value 1.63/sqrt(n), plus the erf approximation's
    // 1.5e-7 bias budget.
    assert!(
        ks <= 1.63 / (samples as f64).sqrt() + 1e-5,
        "KS statistic {ks}"
    );
}

/// Bulk asymptotics inherit the function's parity in the bulk
/// coordinate for even orders.
#[test]
fn bulk_asymptotic_is_even_in_z_for_even_orders() {
    for &n in &[50u64, 120] {
        for &z in &[0.1f64, 0.35, 0.6] {
            let plus = pr_bulk_asymptotic_real(n, z).unwrap();
            let minus = pr_bulk_asymptotic_real(n, -z).unwrap();
            assert!(
                (plus - minus).abs() <= 1e-9 * plus.abs().max(1e-9),
                "n={n}, z={z}: {plus} vs {minus}"
            );
        }
    }
}

/// Merging two half-size estimates reproduces the full-size run:
/// the chunked sampling protocol is associative.
#[test]
fn estimate_merge_matches_single_run() {
    let grid = GridSpec::new(-2.5, 2.5, 16).unwrap();
    let base = RngStream::new(5, 0);
    let full = estimate_density(Ensemble::Hse, 6, 1.0 / 6.0, 512, grid, base).unwrap();
    let first = estimate_density(Ensemble::Hse, 6, 1.0 / 6.0, 256, grid, base).unwrap();
    let second =
        estimate_density(Ensemble::Hse, 6, 1.0 / 6.0, 256, grid, base.child(1)).unwrap();
    let merged = first.merge(&second).unwrap();
    for b in 0..16 {
        assert_eq!(full.density(b), merged.density(b), "bin {b}");
    }
    assert_eq!(full.outside_mass(), merged.outside_mass());
}

/// A matrix assembled from a known spectrum returns exactly that
/// spectrum (diagonal case) and survives dense round-trips.
#[test]
fn known_spectra_round_trip() {
    let m = HermitianMatrix::from_parts(
        vec![2.0, -1.0, 0.5],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
    )
    .unwrap();
    let spec = eigenvalues(&m).unwrap();
    let got = spec.values();
    let want = [-1.0, 0.5, 2.0];
    for (g, w) in got.iter().zip(want.iter()) {
        assert!((g - w).abs() <= 1e-12);
    }

    let dense = m.to_dense();
    let back = HermitianMatrix::from_dense(3, &dense, 0.0).unwrap();
    assert_eq!(back.trace(), m.trace());
    assert_eq!(back.hs_norm_sq(), m.hs_norm_sq());
}
