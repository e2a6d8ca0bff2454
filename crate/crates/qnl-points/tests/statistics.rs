//! Monte Carlo checks of the generators and estimators against closed forms.
//! "Within 3 sigma" uses the estimator's own jackknife error over runs.

use qnl_ensemble::{Execution, Streams};
use qnl_math::{heaviside_invert, renewal_correlation, solve_cubic, Complex64, RenewalLaw};
use qnl_points::{
    band_noise, correlation_from_noise, estimate_g_with, estimate_spectrum_with,
    estimate_variance_curve_with, gen_darkroom, gen_inhomogeneous, gen_poisson, gen_quiet_laser,
    gen_renewal, noise_from_correlation, noise_from_histogram, relative_noise, split_blocks,
    superpose, thin, Ensemble, EventSeries,
};

fn exec() -> Execution {
    Execution::from_env()
}

#[track_caller]
fn within_3_sigma(label: &str, est: f64, se: f64, target: f64) {
    assert!(se.is_finite() && se > 0.0, "{label}: bad stderr {se}");
    assert!(
        (est - target).abs() <= 3.0 * se,
        "{label}: {est} vs {target} (sigma {se}, z = {:.2})",
        (est - target) / se
    );
}

/// `w(p) = gamma / (p^3 + 2(1+a) gamma p^2 + (4 a gamma^2 + 1) p + gamma)`
/// at `gamma = 2`, `2a = 1`.
fn rabi_law() -> RenewalLaw {
    let roots = solve_cubic(6.0, 9.0, 2.0);
    heaviside_invert(&roots, Complex64::new(2.0, 0.0)).unwrap()
}

#[test]
fn poisson_is_flat_in_every_estimator() {
    let ens = Ensemble::generate(60, 1, "poisson", exec(), |rng, _| {
        gen_poisson(1.0, 2000.0, rng)
    })
    .unwrap();
    let (rate, se) =
        qnl_ensemble::mean_stderr(&ens.runs.iter().map(EventSeries::rate).collect::<Vec<_>>());
    within_3_sigma("rate", rate, se, 1.0);

    let s = estimate_spectrum_with(&ens, None, 1, 30, exec()).unwrap();
    for (i, (v, e)) in s.spectrum.iter().zip(&s.stderr).enumerate() {
        within_3_sigma(&format!("S at n = {}", i + 1), *v, *e, 1.0);
    }
    for p in relative_noise(&s).unwrap() {
        within_3_sigma(&format!("N at {}", p.omega), p.value, p.stderr, 0.0);
    }
    let g = estimate_g_with(&ens, 0.5, 5.0, exec()).unwrap();
    for (b, (v, e)) in g.g.iter().zip(&g.stderr).enumerate() {
        within_3_sigma(&format!("g bin {b}"), *v, *e, 1.0);
    }
    for v in estimate_variance_curve_with(&ens, &[1.0, 5.0, 20.0], exec()).unwrap() {
        within_3_sigma(&format!("V({})", v.window), v.value, v.stderr, 0.0);
    }
}

#[test]
fn single_run_time_average_via_blocks() {
    let mut rng = Streams::new(2, "single").rng(0);
    let long = gen_poisson(1.0, 1e5, &mut rng).unwrap();
    let ens = Ensemble::new(split_blocks(&long, 50).unwrap(), 2).unwrap();
    for v in estimate_variance_curve_with(&ens, &[2.0, 10.0], exec()).unwrap() {
        within_3_sigma(&format!("V({})", v.window), v.value, v.stderr, 0.0);
    }
}

#[test]
fn inhomogeneous_first_event_matches_closed_form() {
    // intensity 2 gamma sin^2(t/2) = gamma (1 - cos t); the first-event law has
    // CDF 1 - exp(-gamma (t - sin t))
    let gamma = 1.0;
    let samples = 100_000;
    let streams = Streams::new(3, "first-event");
    let mut first: Vec<f64> = exec().map(samples, |k| {
        let mut rng = streams.rng(k as u64);
        let s = gen_inhomogeneous(|t| gamma * (1.0 - t.cos()), 20.0, 1.0, &mut rng).unwrap();
        s.times()[0]
    });
    first.sort_by(f64::total_cmp);
    let cdf = |t: f64| 1.0 - (-gamma * (t - t.sin())).exp();
    let n = samples as f64;
    let ks = first
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let f = cdf(t);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.01, "KS distance {ks}");
}

#[test]
fn constant_intensity_mean_interval() {
    let mut rng = Streams::new(4, "constant").rng(0);
    let s = gen_inhomogeneous(|_| 2.5, 4e4, 50.0, &mut rng).unwrap();
    let gaps: Vec<f64> = s.times().windows(2).map(|w| w[1] - w[0]).collect();
    let (m, se) = qnl_ensemble::mean_stderr(&gaps);
    within_3_sigma("mean interval", m, se, 0.4);
}

#[test]
fn renewal_rate_and_correlation() {
    let law = rabi_law();
    let big_g = renewal_correlation(&law).unwrap();
    let d = big_g.limit();
    assert!((d - 2.0 / 9.0).abs() < 1e-12);
    let ens = Ensemble::generate(40, 5, "renewal", exec(), |rng, _| {
        gen_renewal(&law, 5000.0, 50.0, rng)
    })
    .unwrap();
    let counts: Vec<f64> = ens.runs.iter().map(EventSeries::rate).collect();
    let (rate, se) = qnl_ensemble::mean_stderr(&counts);
    within_3_sigma("rate", rate, se, 2.0 / 9.0);

    let bin = 0.5;
    let g = estimate_g_with(&ens, bin, 10.0, exec()).unwrap();
    for (b, c) in g.centers().iter().enumerate() {
        // bin average of G / G(inf) by Simpson's rule
        let (lo, hi) = (c - 0.5 * bin, c + 0.5 * bin);
        let want = (big_g.value(lo) + 4.0 * big_g.value(*c) + big_g.value(hi)) / (6.0 * d);
        within_3_sigma(&format!("g({c})"), g.g[b], g.stderr[b], want);
    }
}

#[test]
fn darkroom_correlation_spectrum_and_variance() {
    let tau_r = 50.0;
    let k = 10_000;
    let ens = Ensemble::generate(60, 6, "darkroom", exec(), |rng, _| {
        gen_darkroom(tau_r, k, rng)
    })
    .unwrap();

    let bin = 2.0;
    let g = estimate_g_with(&ens, bin, 80.0, exec()).unwrap();
    for (b, &c) in g.centers().iter().enumerate() {
        let want = if c < tau_r {
            1.0 - (tau_r - c) / (tau_r * tau_r)
        } else {
            1.0
        };
        within_3_sigma(&format!("g({c})"), g.g[b], g.stderr[b], want);
    }

    let s = estimate_spectrum_with(&ens, None, 1, 200, exec()).unwrap();
    // the density is exactly 1 per run, so N = S - 1
    let sp = |n: usize| {
        let x = std::f64::consts::TAU * n as f64 / k as f64 * tau_r;
        1.0 + (x.cos() - 1.0) / (0.5 * x * x)
    };
    for lo in (1..=200).step_by(10) {
        let (v, e) = band_noise(&s, lo, lo + 10).unwrap();
        let want = (lo..lo + 10).map(sp).sum::<f64>() / 10.0 - 1.0;
        within_3_sigma(&format!("band S - 1 at n = {lo}"), v, e, want);
    }
    // S(0+) -> 0
    assert!(
        s.spectrum[0] < 0.01,
        "S at the lowest harmonic: {}",
        s.spectrum[0]
    );

    let windows = [5.0, 20.0, 40.0, 50.0, 100.0, 200.0];
    for v in estimate_variance_curve_with(&ens, &windows, exec()).unwrap() {
        let t = v.window;
        let want = if t < tau_r {
            -t / tau_r + t * t / (3.0 * tau_r * tau_r)
        } else {
            -1.0 + tau_r / (3.0 * t)
        };
        within_3_sigma(&format!("V({t})"), v.value, v.stderr, want);
    }
}

#[test]
fn quiet_laser_noise_and_correlation() {
    let tau_p = 5.0;
    let ens = Ensemble::generate(60, 7, "laser", exec(), |rng, _| {
        gen_quiet_laser(tau_p, 10_000, rng)
    })
    .unwrap();
    let s = estimate_spectrum_with(&ens, None, 1, 300, exec()).unwrap();
    let noise = relative_noise(&s).unwrap();
    let qq = |n: usize| -1.0 / (1.0 + (std::f64::consts::TAU * n as f64 / 1e4 * tau_p).powi(2));
    for lo in (1..=300).step_by(10) {
        let (v, e) = band_noise(&s, lo, lo + 10).unwrap();
        let want = (lo..lo + 10).map(qq).sum::<f64>() / 10.0;
        within_3_sigma(&format!("band N at n = {lo}"), v, e, want);
    }
    // unit bins average out the lattice ripple
    let g = estimate_g_with(&ens, 1.0, 30.0, exec()).unwrap();
    for (b, &c) in g.centers().iter().enumerate() {
        let lo = c - 0.5;
        let want = 1.0 - 0.5 * ((-lo / tau_p).exp() - (-(lo + 1.0) / tau_p).exp());
        within_3_sigma(&format!("g({c})"), g.g[b], g.stderr[b], want);
    }
    // cosine transform of the measured g against the measured spectrum
    let omegas: Vec<f64> = noise.iter().take(20).map(|p| p.omega).collect();
    let from_g = noise_from_histogram(g.bin, &g.g, &g.stderr, &omegas);
    for (p, (v, e)) in noise.iter().zip(from_g) {
        let se = (p.stderr.powi(2) + e * e).sqrt();
        within_3_sigma(&format!("transform at {}", p.omega), v, se, p.value);
    }
}

#[test]
fn thinning_keeps_g_for_three_families() {
    let keep = 0.5;
    let law = rabi_law();
    let big_g = renewal_correlation(&law).unwrap();
    let d = big_g.limit();
    let thinned =
        |tag: &str, make: &(dyn Fn(&mut qnl_ensemble::ChaCha8Rng) -> EventSeries + Sync)| {
            Ensemble::generate(40, 8, tag, exec(), |rng, _| thin(&make(rng), keep, rng)).unwrap()
        };

    let ens = thinned("thin-poisson", &|rng| {
        gen_poisson(2.0, 2000.0, rng).unwrap()
    });
    let g = estimate_g_with(&ens, 0.5, 5.0, exec()).unwrap();
    for (b, v) in g.g.iter().enumerate() {
        within_3_sigma(&format!("poisson g bin {b}"), *v, g.stderr[b], 1.0);
    }

    let ens = thinned("thin-darkroom", &|rng| {
        gen_darkroom(50.0, 10_000, rng).unwrap()
    });
    let g = estimate_g_with(&ens, 5.0, 80.0, exec()).unwrap();
    for (b, &c) in g.centers().iter().enumerate() {
        let want = if c < 50.0 {
            1.0 - (50.0 - c) / 2500.0
        } else {
            1.0
        };
        within_3_sigma(&format!("darkroom g({c})"), g.g[b], g.stderr[b], want);
    }

    let ens = thinned("thin-rabi", &|rng| {
        gen_renewal(&law, 5000.0, 50.0, rng).unwrap()
    });
    let g = estimate_g_with(&ens, 0.5, 8.0, exec()).unwrap();
    for (b, &c) in g.centers().iter().enumerate() {
        let want =
            (big_g.value(c - 0.25) + 4.0 * big_g.value(c) + big_g.value(c + 0.25)) / (6.0 * d);
        within_3_sigma(&format!("renewal g({c})"), g.g[b], g.stderr[b], want);
    }
}

#[test]
fn superposition_dilutes_correlation() {
    let law = rabi_law();
    let big_g = renewal_correlation(&law).unwrap();
    let d = big_g.limit();
    let m = 10;
    let streams = Streams::new(9, "merge");
    let ens = Ensemble::generate(20, 9, "merge", exec(), |_, run| {
        let parts: Vec<EventSeries> = (0..m)
            .map(|j| {
                let mut rng = streams.child(j as u64).rng(run as u64);
                gen_renewal(&law, 1000.0, 50.0, &mut rng).unwrap()
            })
            .collect();
        superpose(&parts)
    })
    .unwrap();
    let g = estimate_g_with(&ens, 0.1, 3.0, exec()).unwrap();
    for (b, &c) in g.centers().iter().enumerate() {
        let single =
            (big_g.value(c - 0.05) + 4.0 * big_g.value(c) + big_g.value(c + 0.05)) / (6.0 * d);
        let want = 1.0 + (single - 1.0) / m as f64;
        within_3_sigma(&format!("merged g({c})"), g.g[b], g.stderr[b], want);
    }
}

#[test]
fn heavy_superposition_is_nearly_poisson() {
    let law = rabi_law();
    let m = 200;
    let streams = Streams::new(10, "merge-200");
    let ens = Ensemble::generate(20, 10, "merge-200", exec(), |_, run| {
        let parts: Vec<EventSeries> = (0..m)
            .map(|j| {
                let mut rng = streams.child(j as u64).rng(run as u64);
                gen_renewal(&law, 200.0, 50.0, &mut rng).unwrap()
            })
            .collect();
        superpose(&parts)
    })
    .unwrap();
    let s = estimate_spectrum_with(&ens, None, 1, 5, exec()).unwrap();
    let noise = relative_noise(&s).unwrap();
    within_3_sigma("merged N(0+)", noise[0].value, noise[0].stderr, 0.0);
}

#[test]
fn transform_pairs_of_closed_forms() {
    let tau_p = 2.0;
    let dtau = 0.005;
    let g: Vec<f64> = (0..=16_000)
        .map(|i| 1.0 - (-(i as f64) * dtau / tau_p).exp() / (2.0 * tau_p))
        .collect();
    let n = noise_from_correlation(dtau, &g);
    assert!(!n.insufficient_decay);
    for (w, v) in n.grid.iter().zip(&n.values).take(400) {
        let want = -1.0 / (1.0 + (w * tau_p).powi(2));
        assert!((v - want).abs() < 1e-3, "N({w}) = {v} vs {want}");
    }

    let ones = vec![1.0; 100];
    assert!(noise_from_correlation(0.1, &ones)
        .values
        .iter()
        .all(|v| *v == 0.0));

    let tau_r = 10.0;
    let dtau = 0.01;
    let g: Vec<f64> = (0..=4000)
        .map(|i| {
            let t = i as f64 * dtau;
            if t < tau_r {
                1.0 - (tau_r - t) / (tau_r * tau_r)
            } else {
                1.0
            }
        })
        .collect();
    let n = noise_from_correlation(dtau, &g);
    for (w, v) in n.grid.iter().zip(&n.values).skip(1).take(300) {
        let x = w * tau_r;
        let want = (x.cos() - 1.0) / (0.5 * x * x);
        assert!((v - want).abs() < 1e-3, "dark-room N({w}) = {v} vs {want}");
    }
    let back = correlation_from_noise(n.grid[1], &n.values, 0.0);
    for (a, b) in g.iter().zip(&back.values) {
        assert!((a - b).abs() < 1e-3);
    }
}
