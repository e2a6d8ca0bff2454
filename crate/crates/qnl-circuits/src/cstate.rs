//! Photocounts from a potential source across a noisy conductance.
//!
//! A potential `V = V' + i V''` across a conductance `G` dissipates
//! `P(t) = G |V|^2 + V' C'(t) + V'' C''(t)`, where `C'`, `C''` are the
//! quadratures of the conductance's current source, white with density
//! `hbar omega G`. So `S_dP = hbar omega P` whatever the phase of `V`.
//!
//! Each step of the time grid draws the step averages of `C'` and `C''`
//! as independent normals of variance `hbar omega G / dt`. The
//! dissipated energy counted in quanta, `Phi(t) = int P dt / hbar omega`,
//! is piecewise linear on the grid, and an event is recorded each time
//! `Phi` reaches a new integer. Counts in a window then fluctuate as
//! `Phi` does, with the variance of a Poisson count. Feeding `P / hbar omega`
//! as the rate of an inhomogeneous Poisson generator would instead add
//! the rate noise on top of the shot noise and double the spectrum.

use qnl_ensemble::{Execution, Streams};
use qnl_math::Complex64;
use qnl_points::{Ensemble, EventSeries};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::constants::HBAR;
use crate::{CircuitError, Result};

/// Largest tolerated fraction of grid steps with `P < 0`.
pub const MAX_NEGATIVE_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CStateParams {
    /// Complex potential across the conductance (V).
    pub v: Complex64,
    /// Conductance (S).
    pub g: f64,
    /// Photon energy `hbar omega_o` (J).
    pub hbar_omega: f64,
    /// Observation time (s).
    pub duration: f64,
    /// Mean number of events per grid step.
    pub events_per_step: f64,
}

impl CStateParams {
    pub fn new(v: Complex64, g: f64, omega_o: f64, duration: f64) -> Result<Self> {
        let p = Self {
            v,
            g,
            hbar_omega: HBAR * omega_o,
            duration,
            events_per_step: 20.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(CircuitError::Domain(format!("need G > 0, got {}", self.g)));
        }
        if !(self.hbar_omega > 0.0 && self.duration > 0.0 && self.events_per_step > 0.0) {
            return Err(CircuitError::Domain(
                "photon energy, duration and events per step must be > 0".into(),
            ));
        }
        if !(self.v.re.is_finite() && self.v.im.is_finite()) {
            return Err(CircuitError::Domain("potential must be finite".into()));
        }
        Ok(())
    }

    /// Mean dissipated power `G |V|^2`.
    pub fn power(&self) -> f64 {
        self.g * self.v.norm_sqr()
    }

    /// Mean event rate `G |V|^2 / hbar omega`.
    pub fn rate(&self) -> f64 {
        self.power() / self.hbar_omega
    }

    pub fn expected_events(&self) -> f64 {
        self.rate() * self.duration
    }

    /// The same source with its carrier phase advanced by `phase`.
    pub fn rotated(&self, phase: f64) -> Self {
        Self {
            v: self.v * Complex64::from_polar(1.0, phase),
            ..*self
        }
    }
}

/// `S_dP = V'^2 S_C' + V''^2 S_C'' = G |V|^2 hbar omega`.
pub fn power_fluctuation_density(v: Complex64, g: f64, hbar_omega: f64) -> f64 {
    let s = hbar_omega * g;
    v.re * v.re * s + v.im * v.im * s
}

#[derive(Debug, Clone, PartialEq)]
pub struct CStateRun {
    pub series: EventSeries,
    pub steps: usize,
    pub negative_steps: usize,
}

impl CStateRun {
    pub fn negative_fraction(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.negative_steps as f64 / self.steps as f64
        }
    }
}

/// One realization on `(0, duration]`. Errors if more than
/// [`MAX_NEGATIVE_FRACTION`] of the steps carry a negative power.
pub fn cstate_montecarlo<R: Rng + ?Sized>(p: &CStateParams, rng: &mut R) -> Result<CStateRun> {
    p.validate()?;
    let mean = p.expected_events();
    if mean == 0.0 {
        return Ok(CStateRun {
            series: EventSeries::empty(p.duration),
            steps: 0,
            negative_steps: 0,
        });
    }
    let steps = (mean / p.events_per_step).ceil().max(1.0) as usize;
    let dt = p.duration / steps as f64;
    let sigma = (p.hbar_omega * p.g / dt).sqrt();
    let quanta = dt / p.hbar_omega;
    let p0 = p.power();

    let mut times = Vec::with_capacity(mean as usize + 16);
    let mut phi: f64 = rng.random();
    let mut next = 1.0;
    let mut negative_steps = 0;
    for k in 0..steps {
        let c1: f64 = StandardNormal.sample(rng);
        let c2: f64 = StandardNormal.sample(rng);
        let power = p0 + sigma * (p.v.re * c1 + p.v.im * c2);
        if power < 0.0 {
            negative_steps += 1;
        }
        let dphi = power * quanta;
        let end = phi + dphi;
        while end >= next {
            let frac = (next - phi) / dphi;
            times.push(((k as f64 + frac) * dt).min(p.duration));
            next += 1.0;
        }
        phi = end;
    }
    let run = CStateRun {
        series: EventSeries::new(times, p.duration)?,
        steps,
        negative_steps,
    };
    if run.negative_fraction() > MAX_NEGATIVE_FRACTION {
        return Err(CircuitError::NegativeRate {
            fraction: run.negative_fraction(),
        });
    }
    Ok(run)
}

/// `runs` realizations, run `r` drawing from stream `r` of `(seed, "cstate")`.
/// Also returns the largest negative-step fraction met.
pub fn cstate_ensemble(
    p: &CStateParams,
    runs: usize,
    seed: u64,
    exec: Execution,
) -> Result<(Ensemble, f64)> {
    let streams = Streams::new(seed, "cstate");
    let out: Vec<Result<CStateRun>> = exec.map(runs, |r| {
        let mut rng = streams.rng(r as u64);
        cstate_montecarlo(p, &mut rng)
    });
    let mut series = Vec::with_capacity(runs);
    let mut worst: f64 = 0.0;
    for r in out {
        let r = r?;
        worst = worst.max(r.negative_fraction());
        series.push(r.series);
    }
    Ok((Ensemble::new(series, seed)?, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(v: Complex64) -> CStateParams {
        CStateParams::new(v, 1e-3, 2e15, 1.0).unwrap()
    }

    #[test]
    fn zero_potential_gives_no_events() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let run = cstate_montecarlo(&params(Complex64::new(0.0, 0.0)), &mut rng).unwrap();
        assert!(run.series.is_empty());
    }

    #[test]
    fn density_of_the_power_fluctuations() {
        let p = params(Complex64::new(3e-6, -4e-6));
        let s = power_fluctuation_density(p.v, p.g, p.hbar_omega);
        assert!((s / (p.power() * p.hbar_omega) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coarse_grid_is_reported() {
        let mut p = params(Complex64::new(1e-6, 0.0));
        p.events_per_step = 0.5;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(matches!(
            cstate_montecarlo(&p, &mut rng),
            Err(CircuitError::NegativeRate { .. })
        ));
    }
}
