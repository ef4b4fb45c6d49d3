//! Acceptance suite: ten pinned end-to-end checks with fixed
//! configurations and tolerances, one test per check.  Each test prints
//! one `ACCEPTANCE <id> ...: PASS` line with its headline numbers (a
//! failed assertion is the FAIL case and carries the same numbers).

use rmt::harness::{
    run, Experiment, ExperimentConfig, OutputFormat, ResultRecord, ResultRow,
};

fn base(experiment: Experiment) -> ExperimentConfig {
    ExperimentConfig::new(experiment)
}

fn decision<'a>(record: &'a ResultRecord, label: &str) -> &'a ResultRow {
    record
        .rows
        .iter()
        .find(|r| r.label == label)
        .unwrap_or_else(|| panic!("missing row {label:?}"))
}

/// Exact sine-kernel convergence of the bulk-rescaled kernel: at
/// u in {0, 0.5, 1.0} on the t-grid [-3,3]^2 with step 0.25, the
/// max deviation at N=400 is at most 0.05 and improves on N=100.
#[test]
fn a01_sine_kernel_exact_convergence() {
    let mut worst: f64 = 0.0;
    for u in [0.0, 0.5, 1.0] {
        let mut cfg = base(Experiment::SineExact);
        cfg.matrix_dims = vec![100, 400];
        cfg.u = u;
        let rec = run(&cfg).expect("sine-exact run");
        let err400 = decision(&rec, "max-error N=400").computed;
        let err100 = decision(&rec, "max-error N=100").computed;
        assert!(
            err400 <= 0.05 && err400 < err100,
            "u={u}: err(400)={err400:.3e}, err(100)={err100:.3e}"
        );
        assert!(rec.summary.passed, "u={u}: {:?}", rec.summary);
        worst = worst.max(err400);
    }
    println!(
        "ACCEPTANCE 01 exact sine-kernel convergence: PASS \
         (worst err(400) = {worst:.3e} <= 5.0e-2 and err(400) < err(100), u in {{0, 0.5, 1}})"
    );
}

/// Two-point determinantal convergence: on the same grid, the rescaled
/// two-point correlation is within 0.1 of the sine-kernel determinant
/// at N=400.
#[test]
fn a02_two_point_determinantal_convergence() {
    let mut worst: f64 = 0.0;
    for u in [0.0, 0.5, 1.0] {
        let mut cfg = base(Experiment::SineExact);
        cfg.matrix_dims = vec![400];
        cfg.order = 2;
        cfg.u = u;
        let rec = run(&cfg).expect("sine-exact order-2 run");
        let err = decision(&rec, "max-error N=400").computed;
        assert!(err <= 0.1, "u={u}: err(400)={err:.3e}");
        assert!(rec.summary.passed, "u={u}: {:?}", rec.summary);
        worst = worst.max(err);
    }
    println!(
        "ACCEPTANCE 02 two-point determinantal convergence: PASS \
         (worst err(400) = {worst:.3e} <= 1.0e-1, u in {{0, 0.5, 1}})"
    );
}

/// Semicircle law: both ensembles at N=100 with 200 samples land
/// within 0.05 of the semicircle in L1 histogram distance.
#[test]
fn a03_semicircle_l1_distance() {
    let mut cfg = base(Experiment::Semicircle);
    cfg.matrix_dims = vec![100];
    cfg.samples = 200;
    let rec = run(&cfg).expect("semicircle run");
    let gue = decision(&rec, "gue N=100 L1-distance").computed;
    let hse = decision(&rec, "hse N=100 L1-distance").computed;
    assert!(rec.summary.passed, "{:?}", rec.summary);
    println!(
        "ACCEPTANCE 03 semicircle law: PASS \
         (L1 distance {gue:.3e} gue / {hse:.3e} hse <= 5.0e-2, N=100, 200 samples)"
    );
}

/// Fixed-norm bulk universality, statistically: the pair-correlation
/// estimate at N=100 with 2e4 samples stays within 0.1 of 1 - sinc^2
/// in every width-0.25 bin over |tau| <= 3, at u in {0, 1}, for the
/// fixed-norm ensemble and for the Gaussian control group.
#[test]
fn a04_pair_correlation_universality() {
    let mut worst: f64 = 0.0;
    for u in [0.0, 1.0] {
        let mut cfg = base(Experiment::SineMc);
        cfg.matrix_dims = vec![100];
        cfg.u = u;
        let rec = run(&cfg).expect("sine-mc run");
        assert!(rec.summary.passed, "u={u}: {:?}", rec.summary);
        worst = worst.max(rec.summary.max_abs_error);
    }
    println!(
        "ACCEPTANCE 04 pair-correlation universality: PASS \
         (max bin deviation {worst:.3e} <= 1.0e-1, gue+hse, N=100, u in {{0, 1}}, 2e4 samples)"
    );
}

/// Disintegration identity: the chi-square mixture of the fixed-norm
/// Monte-Carlo estimate reconstructs the exact Gaussian one-point
/// correlation within 3 estimated standard errors at every point of
/// the x-grid [-3,3] step 0.5, at N=2, s=1/2, 1e5 samples.
#[test]
fn a05_disintegration_identity() {
    let mut cfg = base(Experiment::Disintegration);
    cfg.matrix_dims = vec![2];
    cfg.scale = Some(0.5);
    cfg.samples = 100_000;
    cfg.bins = 12;
    let rec = run(&cfg).expect("disintegration run");
    assert_eq!(rec.rows.len(), 13);
    assert!(rec.summary.passed, "{:#?}", rec.rows);
    let worst_sigmas = rec
        .rows
        .iter()
        .map(|r| r.abs_error / r.std_error.unwrap())
        .fold(0.0f64, f64::max);
    println!(
        "ACCEPTANCE 05 disintegration identity: PASS \
         (all 13 x-points within 3 sigma; worst deviation {worst_sigmas:.2} sigma, \
         N=2, s=1/2, 1e5 samples)"
    );
}

/// Fourier identity at p=0: integrating the norm-resolved density
/// against the chi-square weight matches the exact correlation at
/// x=0 within 3 sigma for N=2.
#[test]
fn a06_fourier_identity_at_zero_frequency() {
    let mut cfg = base(Experiment::FourierIdentity);
    cfg.matrix_dims = vec![2];
    cfg.samples = 100_000;
    let rec = run(&cfg).expect("fourier-identity run");
    let row = decision(&rec, "N=2 p=0");
    assert_eq!(row.pass, Some(true), "{row:?}");
    let sigmas = row.abs_error / row.std_error.unwrap();
    println!(
        "ACCEPTANCE 06 zero-frequency mixture identity: PASS \
         (|mixture - exact| = {:.3e} = {sigmas:.2} sigma <= 3 sigma, N=2, x=0)",
        row.abs_error
    );
}

/// Deterministic identity suites at fixed tolerances: kernel CD vs sum
/// form (1e-10 relative, N <= 50), kernel scaling and reflection
/// (1e-12), dilation square and bound round-trip (1e-10), analytic
/// continuation consistency (1e-10, |H| <= 5, N <= 20), the
/// characteristic-function modulus law (1e-12), and total mass = N
/// (1e-4, N <= 10).
#[test]
fn a07_identity_suites() {
    let rec = run(&base(Experiment::Identities)).expect("identities run");
    for label in [
        "kernel-cd-vs-sum",
        "kernel-scaling",
        "kernel-reflection",
        "dilation-square",
        "dilation-bound-round-trip",
        "continuation-consistency",
        "char-fn-modulus",
        "total-mass",
    ] {
        let row = decision(&rec, label);
        assert_eq!(
            row.pass,
            Some(true),
            "{label}: dev {:.3e} > tol {:.3e}",
            row.computed,
            row.tolerance
        );
    }
    let worst = rec
        .rows
        .iter()
        .filter(|r| r.label != "integral-representation")
        .map(|r| r.computed / r.tolerance)
        .fold(0.0f64, f64::max);
    println!(
        "ACCEPTANCE 07 identity suites: PASS \
         (8 suites, worst deviation at {worst:.2e} of its tolerance)"
    );
}

/// Asymptotic regimes: the bulk approximation's relative error at
/// z=0.3 shrinks with a ratio err(400)/err(200) inside [0.2, 0.9],
/// and the exterior approximation's log-magnitude matches the direct
/// log-scaled recurrence to 1e-3 relative at z in {2.5, 1+1.5i} for
/// N=100.
#[test]
fn a08_asymptotic_convergence() {
    let mut cfg = base(Experiment::PrAsymptotics);
    cfg.matrix_dims = vec![100, 200, 400];
    cfg.u = 0.3;
    let rec = run(&cfg).expect("pr-asymptotics run");
    assert!(rec.summary.passed, "{:#?}", rec.rows);
    let ratio = decision(&rec, "bulk error-ratio N=400 over N=200").computed;
    assert!((0.2..=0.9).contains(&ratio), "ratio {ratio}");
    let e1 = decision(&rec, "exterior N=100 z=2.5+0i log-magnitude").abs_error;
    let e2 = decision(&rec, "exterior N=100 z=1+1.5i log-magnitude").abs_error;
    assert!(e1 <= 1e-3 && e2 <= 1e-3, "exterior {e1:.3e} / {e2:.3e}");
    println!(
        "ACCEPTANCE 08 asymptotic convergence: PASS \
         (bulk ratio {ratio:.3} in [0.2, 0.9] at z=0.3; exterior rel. err {e1:.2e} and \
         {e2:.2e} <= 1e-3 at N=100)"
    );
}

/// Integral representation of the kernel: the quadrature form matches
/// the Christoffel-Darboux form to 1e-6 at 20 seeded random real
/// points, N <= 10.
#[test]
fn a09_integral_representation() {
    let rec = run(&base(Experiment::Identities)).expect("identities run");
    let row = decision(&rec, "integral-representation");
    assert_eq!(
        row.pass,
        Some(true),
        "dev {:.3e} > tol {:.3e}",
        row.computed,
        row.tolerance
    );
    println!(
        "ACCEPTANCE 09 integral representation: PASS \
         (max relative deviation {:.3e} <= 1.0e-6 over 20 random points, N <= 10)",
        row.computed
    );
}

/// Determinism: identical configurations yield byte-identical output
/// files for worker counts 1 and 8, in both formats, and across
/// reruns.
#[test]
fn a10_byte_identical_reruns() {
    let dir = tempfile::tempdir().expect("tempdir");
    let mut cfg = base(Experiment::SineMc);
    cfg.matrix_dims = vec![24];
    cfg.samples = 2000;
    cfg.bins = 12;
    cfg.window = 2.0;

    let emit = |workers: usize, format: OutputFormat, name: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        let mut c = cfg.clone();
        c.workers = workers;
        c.format = format;
        c.output_path = Some(path.clone());
        run(&c).expect("sine-mc run");
        std::fs::read(&path).expect("read emitted file")
    };

    let csv_1 = emit(1, OutputFormat::Csv, "w1.csv");
    let csv_8 = emit(8, OutputFormat::Csv, "w8.csv");
    let csv_8_again = emit(8, OutputFormat::Csv, "w8-again.csv");
    assert_eq!(csv_1, csv_8, "csv differs between 1 and 8 workers");
    assert_eq!(csv_8, csv_8_again, "csv differs between reruns");

    let json_1 = emit(1, OutputFormat::Json, "w1.json");
    let json_8 = emit(8, OutputFormat::Json, "w8.json");
    assert_eq!(json_1, json_8, "json differs between 1 and 8 workers");

    println!(
        "ACCEPTANCE 10 determinism: PASS \
         ({}-byte csv and {}-byte json identical for workers 1 and 8 and across reruns)",
        csv_1.len(),
        json_1.len()
    );
}
