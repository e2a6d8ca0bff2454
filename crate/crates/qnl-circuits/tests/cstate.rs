use qnl_circuits::{cstate_ensemble, CStateParams};
use qnl_ensemble::Execution;
use qnl_math::Complex64;
use qnl_points::{band_noise, estimate_spectrum_with, Ensemble};

fn source() -> CStateParams {
    // about 4.8e3 events per second
    CStateParams::new(Complex64::new(6e-7, 8e-7), 1e-3, 2e15, 10.0).unwrap()
}

fn low_band_noise(ens: &Ensemble) -> (f64, f64) {
    let s = estimate_spectrum_with(ens, None, 1, 40, Execution::from_env()).unwrap();
    band_noise(&s, 1, 41).unwrap()
}

#[test]
fn photocounts_have_shot_noise_only() {
    let p = source();
    let (ens, negative) = cstate_ensemble(&p, 40, 11, Execution::from_env()).unwrap();
    assert!(negative < 1e-3);
    let d = p.rate();
    assert!(((ens.rate() - d) / d).abs() < 0.01);
    let (n, se) = low_band_noise(&ens);
    assert!(n.abs() <= 3.0 * se, "N = {n} +- {se}, 1/D = {}", 1.0 / d);
    // a doubly stochastic stream driven by the same rate would sit at 1/D
    assert!((n - 1.0 / d).abs() > 10.0 * se);
}

#[test]
fn noise_does_not_depend_on_the_carrier_phase() {
    let p = source();
    let (base, _) = cstate_ensemble(&p, 40, 12, Execution::from_env()).unwrap();
    let (n0, s0) = low_band_noise(&base);
    for &phase in &[
        std::f64::consts::FRAC_PI_3,
        std::f64::consts::FRAC_PI_2,
        2.5,
    ] {
        let (ens, _) = cstate_ensemble(&p.rotated(phase), 40, 13, Execution::from_env()).unwrap();
        let (n, s) = low_band_noise(&ens);
        assert!(
            (n - n0).abs() <= 3.0 * s.hypot(s0),
            "phase {phase}: {n} vs {n0}"
        );
        assert!(n.abs() <= 3.0 * s);
    }
}

#[test]
fn window_counts_pass_the_dispersion_test() {
    let p = source();
    let (ens, _) = cstate_ensemble(&p, 40, 14, Execution::from_env()).unwrap();
    let per_run = 10;
    let window = p.duration / per_run as f64;
    let mut counts = Vec::new();
    for run in &ens.runs {
        let mut c = vec![0.0; per_run];
        for &t in run.times() {
            c[((t / window) as usize).min(per_run - 1)] += 1.0;
        }
        counts.extend(c);
    }
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sigma = (2.0 / (n - 1.0)).sqrt();
    assert!(
        (var / mean - 1.0).abs() <= 3.0 * sigma,
        "dispersion {} (sigma {sigma})",
        var / mean
    );
}

#[test]
fn ensemble_is_reproducible_across_executions() {
    let p = source();
    let (a, _) = cstate_ensemble(&p, 6, 99, Execution::Sequential).unwrap();
    let (b, _) = cstate_ensemble(&p, 6, 99, Execution::from_env()).unwrap();
    assert_eq!(a, b);
}
