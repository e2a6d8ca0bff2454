//! Stationary point processes on `(0, T]` and the second-order statistics the
//! rest of the workspace is checked against.
//!
//! Generators live in [`generate`]; [`estimate`] holds the periodogram, the
//! pair-correlation histogram and the count-variance curve, each with
//! jackknife standard errors over runs; [`transform`] implements the cosine
//! pair linking `g(tau) - 1` and the relative noise `N(Omega)`.

pub mod estimate;
pub mod generate;
pub mod transform;

use qnl_ensemble::{ChaCha8Rng, Execution, Streams};
use thiserror::Error;

pub use estimate::{
    band_noise, estimate_g, estimate_g_with, estimate_spectrum, estimate_spectrum_with,
    estimate_variance_curve, estimate_variance_curve_with, lattice_window_sum, periodogram,
    relative_noise, CorrelationEstimate, NoisePoint, SpectrumEstimate, VariancePoint,
};
pub use generate::{
    gen_darkroom, gen_delayed_lattice, gen_inhomogeneous, gen_poisson, gen_quiet_laser,
    gen_renewal, split_blocks, superpose, thin, Exponential, UniformDelay, WaitingTime,
};
pub use transform::{
    correlation_from_noise, noise_at, noise_from_correlation, noise_from_histogram, Transformed,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointError {
    #[error("event times must be strictly increasing (index {0})")]
    NotIncreasing(usize),
    #[error("event time {0} lies outside (0, {1}]")]
    OutsideHorizon(f64, f64),
    #[error("negative rate {rate} at t = {t}")]
    NegativeRate { t: f64, rate: f64 },
    #[error("horizons differ: {0} vs {1}")]
    HorizonMismatch(f64, f64),
    #[error("ensemble has no runs")]
    EmptyEnsemble,
    #[error("zero event rate")]
    ZeroRate,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, PointError>;

/// Ordered event times on `(0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSeries {
    times: Vec<f64>,
    horizon: f64,
}

impl EventSeries {
    pub fn new(times: Vec<f64>, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(PointError::InvalidParameter(format!("horizon {horizon}")));
        }
        for (i, w) in times.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(PointError::NotIncreasing(i + 1));
            }
        }
        if let Some(&t) = times.iter().find(|&&t| t <= 0.0 || t > horizon) {
            return Err(PointError::OutsideHorizon(t, horizon));
        }
        Ok(Self { times, horizon })
    }

    pub fn empty(horizon: f64) -> Self {
        Self {
            times: Vec::new(),
            horizon,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Empirical density `d(T) / T`.
    pub fn rate(&self) -> f64 {
        self.times.len() as f64 / self.horizon
    }

    pub fn into_times(self) -> Vec<f64> {
        self.times
    }
}

/// Independent runs sharing one horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub runs: Vec<EventSeries>,
    pub seed: u64,
}

impl Ensemble {
    pub fn new(runs: Vec<EventSeries>, seed: u64) -> Result<Self> {
        let first = runs.first().ok_or(PointError::EmptyEnsemble)?.horizon;
        if let Some(r) = runs.iter().find(|r| r.horizon != first) {
            return Err(PointError::HorizonMismatch(first, r.horizon));
        }
        Ok(Self { runs, seed })
    }

    /// Runs `0..runs` generated by `make(rng, run)`, where each run owns the
    /// RNG stream `run` of `(seed, tag)`.
    pub fn generate<F>(runs: usize, seed: u64, tag: &str, exec: Execution, make: F) -> Result<Self>
    where
        F: Fn(&mut ChaCha8Rng, usize) -> Result<EventSeries> + Sync + Send,
    {
        let streams = Streams::new(seed, tag);
        let out: Vec<Result<EventSeries>> = exec.map(runs, |r| {
            let mut rng = streams.rng(r as u64);
            make(&mut rng, r)
        });
        let runs = out.into_iter().collect::<Result<Vec<_>>>()?;
        Self::new(runs, seed)
    }

    pub fn horizon(&self) -> f64 {
        self.runs[0].horizon
    }

    pub fn total_events(&self) -> usize {
        self.runs.iter().map(EventSeries::len).sum()
    }

    /// Pooled density `sum d / (R T)`.
    pub fn rate(&self) -> f64 {
        self.total_events() as f64 / (self.runs.len() as f64 * self.horizon())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_validation() {
        assert!(EventSeries::new(vec![0.5, 1.0, 2.0], 2.0).is_ok());
        assert_eq!(
            EventSeries::new(vec![0.5, 0.5], 2.0),
            Err(PointError::NotIncreasing(1))
        );
        assert_eq!(
            EventSeries::new(vec![0.0], 2.0),
            Err(PointError::OutsideHorizon(0.0, 2.0))
        );
        assert_eq!(
            EventSeries::new(vec![2.5], 2.0),
            Err(PointError::OutsideHorizon(2.5, 2.0))
        );
    }

    #[test]
    fn ensemble_rejects_mixed_horizons() {
        let runs = vec![EventSeries::empty(1.0), EventSeries::empty(2.0)];
        assert_eq!(
            Ensemble::new(runs, 0),
            Err(PointError::HorizonMismatch(1.0, 2.0))
        );
        assert_eq!(Ensemble::new(vec![], 0), Err(PointError::EmptyEnsemble));
    }
}
