use qnl_ensemble::{mean_stderr, Execution};
use qnl_pendulum::{
    band_spectrum, derived_quantities, exact_mean_height, log_bands, simulate_ensemble,
    DissipationRecord, PendulumParams,
};

/// Lifetime 10^4 periods, with pr and m/M still at the percent level.
fn small() -> PendulumParams {
    PendulumParams {
        small_mass: 0.01,
        ..PendulumParams::reference()
    }
}

#[track_caller]
fn within_3_sigma(label: &str, (est, se): (f64, f64), target: f64) {
    assert!(
        (est - target).abs() <= 3.0 * se,
        "{label}: {est} vs {target} (sigma {se})"
    );
}

fn per_run(records: &[DissipationRecord], f: impl Fn(&DissipationRecord) -> f64) -> (f64, f64) {
    mean_stderr(&records.iter().map(f).collect::<Vec<_>>())
}

#[test]
fn averages_match_the_power_balance() {
    let p = small();
    let d = derived_quantities(&p).unwrap();
    let recs = simulate_ensemble(&p, 10_000_000, 40, 1, Execution::from_env()).unwrap();

    let mean_mark = per_run(&recs, |r| {
        r.dissipated_energy() / r.marks.len() as f64 / d.epsilon
    });
    within_3_sigma("mean mark / epsilon", mean_mark, 1.0);

    let spacing = per_run(&recs, |r| {
        let k = &r.periods;
        (k[k.len() - 1] - k[0]) as f64 / (k.len() - 1) as f64
    });
    within_3_sigma("mean spacing", spacing, 1.0 / p.pr);

    let power = per_run(&recs, |r| {
        r.dissipated_energy() / (r.horizon as f64 * p.period)
    });
    within_3_sigma("dissipated power", power, d.mean_power);

    // the exact map carries a factor 1 + m/M over the leading-order <E>
    let energy = per_run(&recs, |r| p.big_mass * p.gravity * r.time_mean_height());
    within_3_sigma(
        "time-mean energy",
        energy,
        p.big_mass * p.gravity * exact_mean_height(&p),
    );
    assert!((energy.0 / d.mean_energy - 1.0).abs() < 2.0 * p.small_mass / p.big_mass);
}

#[test]
fn spectrum_follows_the_lorentzian_dip() {
    let p = small();
    let d = derived_quantities(&p).unwrap();
    let k = 10_000_000;
    let recs = simulate_ensemble(&p, k, 60, 2, Execution::from_env()).unwrap();
    let bands = log_bands(d.tau_p, k, 0.2, 20.0, 32);
    for b in band_spectrum(&p, &recs, &bands, Execution::from_env()).unwrap() {
        assert!(
            (b.ratio() - 1.0).abs() < 0.1,
            "Omega tau_p = {:.3}: sim/analytic = {:.4} (stderr {:.4})",
            b.omega * d.tau_p,
            b.ratio(),
            b.stderr / b.analytic
        );
        // the linearized exact map also accounts for the O(pr, m/M) terms
        assert!(
            (b.sim - b.exact_map).abs() < 3.0 * b.stderr + 0.03 * b.exact_map,
            "Omega tau_p = {:.3}: {} vs exact map {}",
            b.omega * d.tau_p,
            b.sim,
            b.exact_map
        );
    }
}
