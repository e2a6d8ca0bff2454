//! Thermal equilibrium of a tuned circuit.
//!
//! A resonator whose conductance splits into an absorbing part `G_a` and an
//! emitting part `G_e` holds `<E> = (alpha / 2)(G_a + G_e)/(G_a - G_e)` when
//! each part carries a current source of density `alpha |G|`. Equilibrium at
//! temperature `T_m` with the Boltzmann ratio `G_a / G_e = exp(hbar omega / k T_m)`
//! reproduces the Planck law with its zero-point term only for `alpha = hbar omega`.

use std::f64::consts::TAU;

use qnl_math::quad::{integrate_real_line, QuadOptions};
use qnl_math::Complex64;

use crate::constants::{BOLTZMANN, HBAR};
use crate::{CircuitError, Result};

fn check_temperature(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(CircuitError::Domain(format!(
            "temperature must be >= 0, got {t}"
        )))
    }
}

/// `(hbar omega / 2) coth(hbar omega / 2 k T)`, tending to `hbar omega / 2` at
/// `T = 0` and to `k T` when `k T >> hbar omega`.
pub fn average_oscillator_energy(omega: f64, t: f64) -> Result<f64> {
    check_temperature(t)?;
    if !(omega > 0.0) {
        return Err(CircuitError::Domain(format!("need omega > 0, got {omega}")));
    }
    let quantum = HBAR * omega;
    if t == 0.0 {
        return Ok(0.5 * quantum);
    }
    Ok(0.5 * quantum / (quantum / (2.0 * BOLTZMANN * t)).tanh())
}

/// Residual of `phi' + phi^2 - 1/4` for the reduced energy
/// `phi(y) = <E> / hbar omega = coth(y / 2) / 2`, `y = hbar omega / k T`.
///
/// With `x = omega / k T` and `f = <E> / omega = hbar phi` this is the
/// equation `df/dx + f^2 = (hbar / 2)^2`, scaled free of `hbar`. The
/// derivative is taken by the complex step, so only rounding remains.
pub fn riccati_check(y: f64) -> Result<f64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(CircuitError::Domain(format!("need y > 0, got {y}")));
    }
    let phi = |z: Complex64| 0.5 / (0.5 * z).tanh();
    let h = 1e-30 * y.max(1.0);
    let dphi = phi(Complex64::new(y, h)).im / h;
    let p = phi(Complex64::new(y, 0.0)).re;
    Ok(dphi + p * p - 0.25)
}

/// `(alpha / 2)(r + 1)/(r - 1)` with `r = G_a / G_e`.
pub fn thermal_balance(g_a: f64, g_e: f64, alpha: f64) -> Result<f64> {
    if !(g_e > 0.0) {
        return Err(CircuitError::Domain(format!("need G_e > 0, got {g_e}")));
    }
    if g_a <= g_e {
        return Err(CircuitError::NonDissipative { g_a, g_e });
    }
    let r = g_a / g_e;
    Ok(0.5 * alpha * (r + 1.0) / (r - 1.0))
}

/// The noise constant `alpha` for which the thermal balance at
/// `G_a / G_e = exp(hbar omega / k T)` equals the oscillator energy.
///
/// The balance is linear in `alpha`; its unit-`alpha` value
/// `(r + 1) / 2(r - 1)` is evaluated as `1 / (2 tanh(y / 2))` so that large
/// `y` does not overflow `r`.
pub fn infer_alpha(omega: f64, t: f64) -> Result<f64> {
    let energy = average_oscillator_energy(omega, t)?;
    if t == 0.0 {
        return Ok(2.0 * energy);
    }
    let y = HBAR * omega / (BOLTZMANN * t);
    let unit = 0.5 / (0.5 * y).tanh();
    Ok(energy / unit)
}

/// Classical stored energy `int C S_j / (2 (G^2 + C^2 omega^2)) d omega / 2 pi`
/// over the real line with `S_j = 2 k T G`, by quadrature in `u = C omega / G`.
/// Should equal `k T / 2` whatever `G` and `C`.
pub fn nyquist_classical_check(g: f64, c: f64, t: f64) -> Result<f64> {
    check_temperature(t)?;
    if !(g > 0.0 && c > 0.0) {
        return Err(CircuitError::Domain(format!("need G, C > 0, got {g}, {c}")));
    }
    let s_j = 2.0 * BOLTZMANN * t * g;
    // omega = (G / C) u turns the integrand into (S_j / 2G) / (1 + u^2) du
    let r = integrate_real_line(|u| 1.0 / (1.0 + u * u), QuadOptions::tight());
    if !r.converged {
        return Err(CircuitError::Quadrature(r.error));
    }
    Ok(s_j / (2.0 * g) * r.value / TAU)
}

/// The same integral from the residue `int d omega / (G^2 + C^2 omega^2) = pi / (G C)`.
pub fn nyquist_closed_form(g: f64, c: f64, t: f64) -> Result<f64> {
    check_temperature(t)?;
    if !(g > 0.0 && c > 0.0) {
        return Err(CircuitError::Domain(format!("need G, C > 0, got {g}, {c}")));
    }
    let s_j = 2.0 * BOLTZMANN * t * g;
    Ok(0.5 * c * s_j * std::f64::consts::PI / (g * c) / TAU)
}
