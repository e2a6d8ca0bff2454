use qnl_cavity::{
    binned_spectrum, drift, jump_rates, langevin_spectrum, langevin_variance, log_band_means,
    moments, partition, simulate, stationary_distribution, statistical_weight, total_variation,
    CavityState, SimOptions,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn weights_and_partition() {
    for atoms in 0..=60 {
        let sum: u128 = (0..=atoms)
            .map(|n| statistical_weight(atoms, n).unwrap())
            .sum();
        assert_eq!(sum, partition(atoms).unwrap());
        assert_eq!(sum, 1u128 << atoms);
    }
    // central weight against 2^N sqrt(2 / pi N)
    let w = statistical_weight(100, 50).unwrap() as f64;
    let approx = 2f64.powi(100) * (2.0 / (std::f64::consts::PI * 100.0)).sqrt();
    assert!((w / approx - 1.0).abs() < 0.02);
}

#[test]
fn binomial_law_matches_the_weights() {
    for atoms in [1, 2, 7, 30, 60] {
        let pr = stationary_distribution(atoms).unwrap();
        let z = partition(atoms).unwrap() as f64;
        for (m, p) in pr.iter().enumerate() {
            let exact = statistical_weight(atoms, m).unwrap() as f64 / z;
            assert!((p - exact).abs() <= 1e-13 * exact, "N={atoms} m={m}");
        }
    }
    for atoms in 1..=200 {
        let (mean, var) = moments(&stationary_distribution(atoms).unwrap());
        assert!((mean - atoms as f64 / 2.0).abs() < 1e-9 * atoms as f64);
        assert!((var / mean - 0.5).abs() < 1e-9, "N={atoms}");
    }
}

#[test]
fn detailed_balance_is_exact() {
    for atoms in 1..=30 {
        for m in 0..atoms {
            let lo = jump_rates(CavityState::with_photons(atoms, m).unwrap(), atoms).unwrap();
            let hi = jump_rates(CavityState::with_photons(atoms, m + 1).unwrap(), atoms).unwrap();
            let left = statistical_weight(atoms, m + 1).unwrap() * hi.absorption as u128;
            let right = statistical_weight(atoms, m).unwrap() * lo.emission as u128;
            assert_eq!(left, right, "N={atoms} m={m}");
        }
        assert_eq!(
            jump_rates(CavityState::initial(atoms), atoms)
                .unwrap()
                .absorption,
            0
        );
        let full = CavityState::with_photons(atoms, atoms).unwrap();
        assert_eq!(jump_rates(full, atoms).unwrap().emission, 0);
    }
}

#[test]
fn twenty_atoms_reach_the_binomial_law() {
    let atoms = 20;
    let exact = stationary_distribution(atoms).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let sim = simulate(atoms, &SimOptions::new(10_000_000), &mut rng).unwrap();
    let pr = sim.distribution();
    assert!(total_variation(&pr, &exact) < 0.01);
    let (mean, var) = moments(&pr);
    assert!((mean / 10.0 - 1.0).abs() < 0.02, "mean {mean}");
    assert!((var / 5.0 - 1.0).abs() < 0.02, "var {var}");

    // drift R_e - R_a = N m - 2 m^2 + N - m, as a chi-square over visited states
    let (mut chi2, mut chi2_without_m, mut k) = (0.0, 0.0, 0.0f64);
    for m in 0..=atoms {
        if let Some((d, se)) = sim.empirical_drift(m) {
            if sim.ups[m] + sim.downs[m] < 1000 {
                continue;
            }
            let exact = drift(m, atoms).unwrap() as f64;
            let mf = m as f64;
            assert_eq!(exact, 20.0 * mf - 2.0 * mf * mf + 20.0 - mf);
            chi2 += ((d - exact) / se).powi(2);
            chi2_without_m += ((d - exact - mf) / se).powi(2);
            k += 1.0;
        }
    }
    assert!(k >= 10.0);
    assert!(
        chi2 < k + 5.0 * (2.0 * k).sqrt(),
        "chi2 {chi2} over {k} states"
    );
    assert!(chi2_without_m > 100.0 * k);
}

#[test]
fn starting_state_is_forgotten() {
    let atoms = 20;
    let exact = stationary_distribution(atoms).unwrap();
    let mut a = ChaCha8Rng::seed_from_u64(21);
    let mut b = ChaCha8Rng::seed_from_u64(22);
    let empty = simulate(atoms, &SimOptions::new(10_000_000), &mut a).unwrap();
    let full = simulate(
        atoms,
        &SimOptions {
            start_m: atoms,
            ..SimOptions::new(10_000_000)
        },
        &mut b,
    )
    .unwrap();
    assert!(total_variation(&empty.distribution(), &full.distribution()) < 0.01);
    assert!(total_variation(&full.distribution(), &exact) < 0.01);
}

#[test]
fn small_cavities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let two = simulate(2, &SimOptions::new(1_000_000), &mut rng).unwrap();
    assert!((two.distribution()[0] - 0.25).abs() < 0.01);

    let jumps = 1_000_000;
    let one = simulate(1, &SimOptions::new(jumps), &mut rng).unwrap();
    // each holding time is Exp(1), so pr(0) - 1/2 has sigma 1 / (2 sqrt J)
    let sigma = 0.5 / (jumps as f64).sqrt();
    assert!((one.distribution()[0] - 0.5).abs() < 3.0 * sigma);
}

#[test]
fn langevin_spectrum_integrates_to_the_exact_variance() {
    // int (N^2/2)/(N^2 + w^2) dw / 2 pi over the real line, with w = N tan(u)
    for atoms in [10usize, 100, 1000] {
        let n = atoms as f64;
        let steps = 200_000;
        let h = std::f64::consts::PI / steps as f64;
        let integral: f64 = (0..steps)
            .map(|i| {
                let u = -std::f64::consts::FRAC_PI_2 + (i as f64 + 0.5) * h;
                let w = n * u.tan();
                langevin_spectrum(atoms, w) * n / u.cos().powi(2) * h
            })
            .sum::<f64>()
            / std::f64::consts::TAU;
        assert!((integral / langevin_variance(atoms) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn simulated_fluctuations_follow_the_langevin_spectrum() {
    let atoms = 100;
    let bin = 2.5e-4;
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let sim = simulate(
        atoms,
        &SimOptions {
            bin: Some(bin),
            ..SimOptions::new(8_000_000)
        },
        &mut rng,
    )
    .unwrap();
    let points = binned_spectrum(&[sim.path], bin, 32_768).unwrap();
    let n = atoms as f64;
    let bands = log_band_means(&points, 0.1 * n, 10.0 * n, 10, |w| {
        langevin_spectrum(atoms, w)
    });
    assert_eq!(bands.len(), 10);
    for b in bands {
        assert!(
            (b.ratio() - 1.0).abs() < 0.1,
            "Omega in [{}, {}): {} vs {} (stderr {})",
            b.omega_lo,
            b.omega_hi,
            b.value,
            b.model,
            b.stderr
        );
    }
}
