use qnl_circuits::constants::{BOLTZMANN, HBAR};
use qnl_circuits::{
    admittance_derivative_identity, average_oscillator_energy, half_power_width, infer_alpha,
    nyquist_classical_check, nyquist_closed_form, riccati_check, thermal_balance, Network,
    TunedCircuit,
};
use qnl_math::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn half_power_width_is_g_over_c() {
    for &(l, c, g) in &[
        (1e-6, 1e-9, 1e-3),
        (2.0, 0.5, 0.7),
        (1.0, 1.0, 1e-5),
        (3e-3, 2e-8, 4e-2),
    ] {
        let circuit = TunedCircuit::new(l, c, g).unwrap();
        let w = half_power_width(&circuit).unwrap();
        assert!(rel(w, g / c) < 1e-9, "L={l} C={c} G={g}: {w} vs {}", g / c);
    }
}

#[test]
fn susceptance_is_odd_to_leading_order() {
    // C omega - 1/(L omega) = C omega_o (2e - e^2 + e^3 - ...) at omega = omega_o (1 + e)
    let c = TunedCircuit::new(4e-4, 2.5e-6, 1e-2).unwrap();
    let w0 = c.omega_o();
    for &e in &[1e-2, 3e-3, 1e-3] {
        let plus = c.admittance(w0 * (1.0 + e)).unwrap().im;
        let minus = c.admittance(w0 * (1.0 - e)).unwrap().im;
        let even = (plus + minus) / (c.c * w0);
        assert!(
            (even - 2.0 * e * e).abs() < 3.0 * e.powi(4),
            "e={e}: {even}"
        );
        assert!((plus + minus).abs() < 1.01 * e * plus.abs());
    }
}

#[test]
fn small_loss_form_tracks_the_exact_response() {
    let c = TunedCircuit::from_resonance(1.0, 1e3).unwrap();
    assert!((c.g / (c.c * c.omega_o()) - 1e-3).abs() < 1e-15);
    let amp = Complex64::new(0.2, 0.1);
    let tau = c.tau_p().unwrap();
    for i in -30..=30 {
        let x = i as f64 / 10.0;
        let w = c.omega_o() + x / (2.0 * tau);
        let s = c.spectrum(amp, w).unwrap();
        assert!(rel(s.power_small_loss, s.power) < 0.01, "x={x}");
        assert!(rel(s.energy_small_loss, s.energy) < 0.01, "x={x}");
        // E = (tau_p |amp|^2 / G) / (1 + x^2)
        let lorentz = tau * amp.norm_sqr() / c.g / (1.0 + x * x);
        assert!(rel(s.energy_small_loss, lorentz) < 1e-12);
    }
    let peak = c.spectrum(amp, c.omega_o()).unwrap();
    assert!(rel(peak.power, amp.norm_sqr() / c.g) < 1e-12);
}

#[test]
fn stored_energy_integrates_to_a_quarter_over_g() {
    let amp = Complex64::new(1e-3, -2e-3);
    for &(l, c, g) in &[
        (1.0, 1.0, 1e-3),
        (1e-6, 1e-9, 1e-3),
        (2.0, 3.0, 0.5),
        (1.0, 1.0, 3.0),
    ] {
        let circuit = TunedCircuit::new(l, c, g).unwrap();
        let target = amp.norm_sqr() / (4.0 * g);
        let exact = circuit.integrated_energy(amp).unwrap();
        assert!(
            rel(exact, target) < 1e-6,
            "exact L={l} C={c} G={g}: {exact} vs {target}"
        );
        let lorentz = circuit.integrated_energy_small_loss(amp).unwrap();
        assert!(
            rel(lorentz, target) < 1e-6,
            "small loss: {lorentz} vs {target}"
        );
    }
}

fn assert_identity(net: &Network, omega: f64, v: Complex64, tol: f64) {
    let (lhs, rhs) = admittance_derivative_identity(net, omega, v).unwrap();
    let scale = lhs
        .norm()
        .max(rhs.norm())
        .max(v.norm_sqr() * net.admittance(omega).unwrap().norm() / omega);
    assert!(
        (lhs - rhs).norm() <= tol * scale,
        "{net:?} at {omega}: {lhs} vs {rhs}"
    );
}

#[test]
fn derivative_identity_on_small_networks() {
    let v = Complex64::new(0.8, -0.3);
    let lr = Network::Series(vec![Network::Inductance(2e-3), Network::Conductance(5.0)]);
    let cg = Network::Parallel(vec![Network::Capacitance(1e-6), Network::Conductance(0.02)]);
    for &w in &[1e2, 1e3, 1e4] {
        assert_identity(&lr, w, v, 1e-10);
        assert_identity(&cg, w, v, 1e-10);
    }
}

fn random_element(rng: &mut ChaCha8Rng) -> Network {
    let value = 10f64.powf(rng.random_range(-1.0..1.0));
    match rng.random_range(0..3) {
        0 => Network::Conductance(value),
        1 => Network::Capacitance(value),
        _ => Network::Inductance(value),
    }
}

#[test]
fn derivative_identity_on_random_ladders() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1add);
    for _ in 0..200 {
        let mut net = random_element(&mut rng);
        for k in 0..4 {
            let e = random_element(&mut rng);
            net = if k % 2 == 0 {
                Network::Parallel(vec![e, net])
            } else {
                Network::Series(vec![e, net])
            };
        }
        assert_eq!(net.elements(), 5);
        let omega = 10f64.powf(rng.random_range(-0.5..0.5));
        let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        assert_identity(&net, omega, v, 1e-8);
    }
}

/// `<E>` from the Boltzmann-weighted levels `(m + 1/2) hbar omega`.
fn boltzmann_sum(omega: f64, t: f64, levels: usize) -> f64 {
    let y = HBAR * omega / (BOLTZMANN * t);
    let (mut num, mut den) = (0.0, 0.0);
    for m in 0..=levels {
        let w = (-(m as f64) * y).exp();
        num += (m as f64 + 0.5) * w;
        den += w;
    }
    HBAR * omega * num / den
}

fn temperature_grid(omega: f64) -> Vec<f64> {
    // k T / hbar omega from 0.01 to 100
    (0..=16)
        .map(|i| 10f64.powf(-2.0 + 0.25 * i as f64) * HBAR * omega / BOLTZMANN)
        .collect()
}

#[test]
fn oscillator_energy_is_the_boltzmann_average() {
    let omega = 3e14;
    for t in temperature_grid(omega) {
        let closed = average_oscillator_energy(omega, t).unwrap();
        let sum = boltzmann_sum(omega, t, 10_000);
        assert!(rel(closed, sum) < 1e-10, "T={t}: {closed} vs {sum}");
    }
    let hot = 100.0 * HBAR * omega / BOLTZMANN;
    assert!(
        rel(
            average_oscillator_energy(omega, hot).unwrap(),
            BOLTZMANN * hot
        ) < 1e-3
    );
    let cold = 0.01 * HBAR * omega / BOLTZMANN;
    assert!(
        rel(
            average_oscillator_energy(omega, cold).unwrap(),
            0.5 * HBAR * omega
        ) < 1e-40f64.max(1e-15)
    );
}

#[test]
fn reduced_energy_solves_the_riccati_equation() {
    for i in 0..=40 {
        let y = 10f64.powf(-2.0 + 0.1 * i as f64);
        let r = riccati_check(y).unwrap();
        assert!(r.abs() < 1e-10, "y={y}: residual {r}");
    }
}

#[test]
fn thermal_balance_reproduces_planck_with_zero_point() {
    let omega = 1.2e15;
    let alpha = HBAR * omega;
    for t in temperature_grid(omega) {
        let ratio = (HBAR * omega / (BOLTZMANN * t)).exp();
        let e = thermal_balance(ratio, 1.0, alpha).unwrap();
        let planck = average_oscillator_energy(omega, t).unwrap();
        assert!(rel(e, planck) < 1e-9, "T={t}: {e} vs {planck}");
        // any other noise constant misses it
        let off = thermal_balance(ratio, 1.0, 1.01 * alpha).unwrap();
        assert!(rel(off, planck) > 5e-3);
    }
}

#[test]
fn inferred_noise_constant_is_hbar_omega() {
    let omegas = [1e12, 3e13, 1e14, 5e14, 2e15];
    let temps = [3.0, 300.0];
    let mut checked = 0;
    for &w in &omegas {
        for &t in &temps {
            let a = infer_alpha(w, t).unwrap();
            assert!(rel(a, HBAR * w) < 1e-9, "omega={w} T={t}: {a}");
            checked += 1;
        }
    }
    assert_eq!(checked, 10);
}

#[test]
fn classical_stored_energy_is_half_kt() {
    let t = 290.0;
    let target = 0.5 * BOLTZMANN * t;
    for &(g, c) in &[(1e-3, 1e-12), (50.0, 2e-6), (1.0, 1.0)] {
        let q = nyquist_classical_check(g, c, t).unwrap();
        assert!(rel(q, target) < 1e-6, "G={g} C={c}: {q}");
        let closed = nyquist_closed_form(g, c, t).unwrap();
        assert!(rel(q, closed) < 1e-9);
    }
}
