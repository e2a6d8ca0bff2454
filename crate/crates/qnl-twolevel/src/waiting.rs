//! Waiting-time densities between successive downward transitions
//! (`Omega_R = 1`).
//!
//! The exact law is the renewal partner of `G(t) = 2 gamma rho_22(t)`:
//!
//! ```text
//! w(p) = gamma / (p^3 + 2 (1 + a) gamma p^2 + (4 a gamma^2 + 1) p + gamma)
//! ```
//!
//! inverted pole by pole. For `2a = 1` the poles are `-gamma` and
//! `-gamma +- alpha` with `alpha = sqrt(gamma^2 - 1)`, which merge at
//! `gamma = 1`; there the law is expanded in powers of `alpha^2` instead.

use qnl_math::quad::{integrate_panels, QuadOptions};
use qnl_math::{heaviside_invert, solve_cubic, Complex64, RenewalLaw, Term};

use crate::{Result, TwoLevelError};

/// Half-width of the window around `gamma = 1` handled by the series.
pub const CONFLUENT_WINDOW: f64 = 1e-4;
const SERIES_TERMS: u32 = 5;

/// Intuitive law: transitions at rate `gamma (1 - cos(Omega_R t))` after a
/// reset, `W(t) = gamma (1 - cos t) exp(-gamma (t - sin t))` in Rabi units.
pub fn waiting_time_approx(t: f64, gamma: f64, omega_r: f64) -> f64 {
    let phase = omega_r * t;
    gamma * (1.0 - phase.cos()) * (-gamma * (t - phase.sin() / omega_r)).exp()
}

fn check(gamma: f64, a: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) || !(a >= 0.0 && a.is_finite()) {
        return Err(TwoLevelError::Domain(format!(
            "need gamma > 0 and a >= 0, got gamma = {gamma}, a = {a}"
        )));
    }
    Ok(())
}

/// Cubic `p^3 + a2 p^2 + a1 p + a0` in the denominator of `w(p)`, as
/// `(a2, a1, a0)`.
pub fn denominator(gamma: f64, a: f64) -> (f64, f64, f64) {
    (
        2.0 * (1.0 + a) * gamma,
        4.0 * a * gamma * gamma + 1.0,
        gamma,
    )
}

/// Exact waiting-time density for decay rate `gamma` and decoherence `a`.
pub fn waiting_time_exact(gamma: f64, a: f64) -> Result<RenewalLaw> {
    check(gamma, a)?;
    if a == 0.5 && (gamma - 1.0).abs() < CONFLUENT_WINDOW {
        return Ok(confluent_law(gamma));
    }
    let (a2, a1, a0) = denominator(gamma, a);
    let roots = solve_cubic(a2, a1, a0);
    Ok(heaviside_invert(&roots, Complex64::new(gamma, 0.0))?)
}

/// `w = (gamma / alpha^2) e^{-gamma t} (cosh(alpha t) - 1)
///    = gamma e^{-gamma t} sum_k alpha^{2k-2} t^{2k} / (2k)!`.
fn confluent_law(gamma: f64) -> RenewalLaw {
    let alpha2 = gamma * gamma - 1.0;
    let mut terms = Vec::with_capacity(SERIES_TERMS as usize);
    let mut factorial = 1.0;
    let mut weight = gamma;
    for k in 1..=SERIES_TERMS {
        factorial *= f64::from(2 * k - 1) * f64::from(2 * k);
        terms.push(Term {
            weight: Complex64::new(weight / factorial, 0.0),
            pole: Complex64::new(-gamma, 0.0),
            power: 2 * k,
        });
        weight *= alpha2;
    }
    RenewalLaw::new(terms)
}

/// Slowest decay rate among the poles of `w`.
fn slowest_rate(w: &RenewalLaw) -> f64 {
    w.terms
        .iter()
        .map(|t| -t.pole.re)
        .fold(f64::INFINITY, f64::min)
}

/// `Delta(a) = 10^6 <tau> int_0^inf (w(t; a) - W(t))^2 dt`, the squared
/// distance between the exact and intuitive laws weighted by the mean wait.
pub fn waiting_distance(a: f64, gamma: f64) -> Result<f64> {
    let w = waiting_time_exact(gamma, a)?;
    let tau = w.mean();
    let horizon = 40.0 / slowest_rate(&w).min(gamma);
    // panels one half Rabi period wide keep each piece non-oscillatory
    let n = (horizon / std::f64::consts::PI).ceil() as usize;
    let edges: Vec<f64> = (0..=n).map(|k| k as f64 * std::f64::consts::PI).collect();
    let opts = QuadOptions {
        abs_tol: 1e-22,
        rel_tol: 1e-11,
        max_intervals: 200,
    };
    let r = integrate_panels(
        |t| {
            let d = w.value(t) - waiting_time_approx(t, gamma, 1.0);
            d * d
        },
        &edges,
        opts,
    );
    if !r.converged {
        return Err(TwoLevelError::Quadrature(r.error));
    }
    Ok(1e6 * tau * r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confluent_law_is_normalized_with_the_right_mean() {
        for gamma in [1.0, 1.0 + 5e-5, 1.0 - 9e-5] {
            let w = waiting_time_exact(gamma, 0.5).unwrap();
            assert!((w.total_mass() - 1.0).abs() < 1e-12);
            assert!((w.mean() - (1.0 + 2.0 * gamma * gamma) / gamma).abs() < 1e-10);
        }
        let at_one = waiting_time_exact(1.0, 0.5).unwrap();
        for t in [0.1, 1.0, 4.0] {
            assert!((at_one.value(t) - 0.5 * t * t * (-t).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn series_and_poles_agree_across_the_window_edge() {
        let inside = waiting_time_exact(1.0 + 0.99 * CONFLUENT_WINDOW, 0.5).unwrap();
        let outside = waiting_time_exact(1.0 + 1.01 * CONFLUENT_WINDOW, 0.5).unwrap();
        for t in [0.5, 2.0, 6.0, 15.0] {
            assert!((inside.value(t) - outside.value(t)).abs() < 1e-6);
        }
    }

    #[test]
    fn intuitive_law_integrates_to_one() {
        let gamma = 1.0 / 7.0;
        let edges: Vec<f64> = (0..=400).map(|k| k as f64 * 0.5).collect();
        let r = integrate_panels(
            |t| waiting_time_approx(t, gamma, 1.0),
            &edges,
            QuadOptions::default(),
        );
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
    }
}
