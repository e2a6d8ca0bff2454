//! Closed forms for an electron that decays only downward (`gamma_1 = 0`),
//! in units where `Omega_R = 1`.
//!
//! Starting from the absorbing state, `rho_22` obeys
//!
//! ```text
//! rho_22'' + 2 (1 + a) gamma rho_22' + (1 + 4 a gamma^2) rho_22 = 1/2
//! ```
//!
//! so with `mu = (1 + a) gamma` and `kappa^2 = (1 - a)^2 gamma^2 - 1`
//!
//! ```text
//! rho_22(t) = rho_inf [1 - e^{-mu t} (cosh(kappa t) + mu sinh(kappa t) / kappa)]
//! ```
//!
//! which is real whatever the sign of `kappa^2`. Writing it through `kappa^2`
//! avoids both complex arithmetic and the `kappa = 0` singularity of the
//! two-exponential form (at `gamma = 2` for `2a = 1`).

use qnl_math::{solve_quadratic_real, ComplexRoots};

use crate::{Result, TwoLevelError};

/// `(e^{-mu t} cosh(kappa t), e^{-mu t} sinh(kappa t) / kappa)` as functions
/// of `kappa^2`.
fn damped_pair(mu: f64, kappa2: f64, t: f64) -> (f64, f64) {
    let decay = (-mu * t).exp();
    let s = kappa2 * t * t;
    if s.abs() < 1e-6 {
        let c = 1.0 + s / 2.0 + s * s / 24.0;
        let sh = t * (1.0 + s / 6.0 + s * s / 120.0);
        return (decay * c, decay * sh);
    }
    if kappa2 > 0.0 {
        let k = kappa2.sqrt();
        let up = ((k - mu) * t).exp();
        let down = ((-k - mu) * t).exp();
        (0.5 * (up + down), 0.5 * (up - down) / k)
    } else {
        let k = (-kappa2).sqrt();
        (decay * (k * t).cos(), decay * (k * t).sin() / k)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(TwoLevelError::Domain(format!(
            "gamma must be > 0, got {gamma}"
        )))
    }
}

/// `rho_22(inf) = 1 / (2 + 8 a gamma^2)`.
pub fn rho22_limit(gamma: f64, a: f64) -> f64 {
    1.0 / (2.0 + 8.0 * a * gamma * gamma)
}

/// Upper-state population at time `t` after leaving the absorbing state.
pub fn rho22_closed(t: f64, gamma: f64, a: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let mu = (1.0 + a) * gamma;
    let kappa2 = (1.0 - a).powi(2) * gamma * gamma - 1.0;
    let (c, s) = damped_pair(mu, kappa2, t);
    Ok(rho22_limit(gamma, a) * (1.0 - c - mu * s))
}

/// Event density `G(t) = 2 gamma rho_22(t)` given an event at `t = 0`.
pub fn event_density(t: f64, gamma: f64, a: f64) -> Result<f64> {
    Ok(2.0 * gamma * rho22_closed(t, gamma, a)?)
}

/// `G(inf) = gamma / (1 + 4 a gamma^2)`, the mean event rate.
pub fn event_rate(gamma: f64, a: f64) -> f64 {
    gamma / (1.0 + 4.0 * a * gamma * gamma)
}

/// `G(t)` in physical time for `2a = 1`, with `gamma_o = gamma / Omega_R`.
pub fn event_density_scaled(t: f64, gamma_o: f64, omega_r: f64) -> Result<f64> {
    Ok(omega_r * event_density(omega_r * t, gamma_o, 0.5)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationModel {
    pub gamma: f64,
    pub a: f64,
}

impl CorrelationModel {
    /// `2a = 1`.
    pub fn new(gamma_o: f64) -> Result<Self> {
        Self::with_a(gamma_o, 0.5)
    }

    pub fn with_a(gamma: f64, a: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self { gamma, a })
    }

    fn mu(&self) -> f64 {
        (1.0 + self.a) * self.gamma
    }

    fn kappa2(&self) -> f64 {
        (1.0 - self.a).powi(2) * self.gamma * self.gamma - 1.0
    }

    /// Normalized correlation `g(tau) = G(tau) / G(inf)`.
    pub fn g(&self, tau: f64) -> f64 {
        let (c, s) = damped_pair(self.mu(), self.kappa2(), tau);
        1.0 - c - self.mu() * s
    }

    /// Relative noise `N(Omega) = 2 int_0^inf (g - 1) cos(Omega tau) d tau`.
    ///
    /// The Laplace transform of `g - 1` is `-(p + 2 mu) / ((p + mu)^2 - kappa^2)`.
    pub fn noise(&self, omega: f64) -> f64 {
        let p = qnl_math::Complex64::new(0.0, omega);
        let mu = self.mu();
        let l = -(p + 2.0 * mu) / ((p + mu).powu(2) - self.kappa2());
        2.0 * l.re
    }

    /// `N(0) = -4 (1 + a) gamma / (1 + 4 a gamma^2)`; `-6 gamma / (1 + 2 gamma^2)`
    /// when `2a = 1`.
    pub fn noise_at_zero(&self) -> f64 {
        -4.0 * self.mu() / (1.0 + 4.0 * self.a * self.gamma * self.gamma)
    }
}

/// `N(0)` in physical units, `-(1/Omega_R) 6 gamma_o / (1 + 2 gamma_o^2)`.
pub fn noise_at_zero_scaled(gamma_o: f64, omega_r: f64) -> Result<f64> {
    Ok(CorrelationModel::new(gamma_o)?.noise_at_zero() / omega_r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturatedConductance {
    /// `G(inf) = gamma_o Omega_R / (1 + 2 gamma_o^2)`, events per second.
    pub rate: f64,
    /// Large-`gamma` rate `Omega_R^2 / (2 gamma)`.
    pub linear_rate: f64,
    /// `linear_rate * hbar omega_o`.
    pub linear_power: f64,
    /// `rho_11 - rho_22 = 2 gamma_o^2 / (1 + 2 gamma_o^2)`.
    pub saturation: f64,
}

/// Event rate and absorbed power for a driven electron with decay rate
/// `gamma = gamma_o Omega_R`, taking `hbar omega_o` in joules.
pub fn saturated_conductance(
    gamma_o: f64,
    omega_r: f64,
    hbar_omega_o: f64,
) -> Result<SaturatedConductance> {
    check_gamma(gamma_o)?;
    let den = 1.0 + 2.0 * gamma_o * gamma_o;
    let linear_rate = omega_r / (2.0 * gamma_o);
    Ok(SaturatedConductance {
        rate: gamma_o * omega_r / den,
        linear_rate,
        linear_power: linear_rate * hbar_omega_o,
        saturation: 2.0 * gamma_o * gamma_o / den,
    })
}

/// `gamma_{1,2} = varpi exp(+-(eU - hbar omega_o) / (hbar varpi))`, with the
/// detuning given in angular-frequency units.
pub fn detuned_rates(varpi: f64, detuning: f64) -> (f64, f64) {
    let x = detuning / varpi;
    (varpi * x.exp(), varpi * (-x).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualGammaPoint {
    pub y: f64,
    pub z: f64,
    /// `varpi z`: absorption minus emission density.
    pub net_density: f64,
}

/// Characteristic roots of `lambda^2 + 2 varpi lambda + 1`.
pub fn equal_gamma_eigenvalues(varpi: f64) -> Result<ComplexRoots> {
    Ok(solve_quadratic_real(1.0, 2.0 * varpi, 1.0)?)
}

/// `dy/dt = -z`, `dz/dt = y - 2 varpi z` from `y = 0`, `z = -1` (an absorption
/// at `t = 0`). Then `z'' + 2 varpi z' + z = 0` with `z'(0) = 2 varpi`, so
/// `z = -e^{-varpi t}(cosh(kt) - varpi sinh(kt)/k)`, `k^2 = varpi^2 - 1`.
pub fn equal_gamma_dynamics(varpi: f64, t: f64) -> Result<EqualGammaPoint> {
    if !(varpi >= 0.0 && varpi.is_finite()) {
        return Err(TwoLevelError::Domain(format!(
            "varpi must be >= 0, got {varpi}"
        )));
    }
    let k2 = varpi * varpi - 1.0;
    let (c, s) = damped_pair(varpi, k2, t);
    let z = -(c - varpi * s);
    // using c' = k2 s - varpi c and s' = c - varpi s
    let dz = 2.0 * varpi * c - (k2 + varpi * varpi) * s;
    let y = dz + 2.0 * varpi * z;
    Ok(EqualGammaPoint {
        y,
        z,
        net_density: varpi * z,
    })
}
