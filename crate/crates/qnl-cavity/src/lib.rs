//! An isolated single-mode cavity holding `N` two-level atoms.
//!
//! With `n` atoms excited and `m` photons, `n + m = N` is conserved. Time is
//! measured in units where the emission and absorption coefficients are 1, so
//! `R_e = n (m + 1)` and `R_a = (N - n) m = m^2`.
//!
//! * [`stationary`]: statistical weights and the binomial photon-number law
//! * [`chain`]: exact-jump Markov simulation with time-weighted statistics
//! * [`langevin`]: the linearized noise spectrum and a periodogram of simulated paths

pub mod chain;
pub mod langevin;
pub mod stationary;

pub use chain::{
    drift, jump_rates, pooled_distribution, simulate, simulate_ensemble, total_variation,
    CavityState, JumpRates, SimOptions, Simulation,
};
pub use langevin::{
    binned_spectrum, langevin_spectrum, langevin_variance, log_band_means, Band, SpectrumPoint,
};
pub use stationary::{moments, partition, stationary_distribution, statistical_weight};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CavityError {
    #[error("need at least one atom")]
    NoAtoms,
    #[error("{n} lies outside 0..={atoms}")]
    OutOfRange { n: usize, atoms: usize },
    #[error("exact integer weights are limited to N <= {max}, got {atoms}")]
    TooManyAtoms { atoms: usize, max: usize },
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CavityError>;

/// Atom count and the rate unit of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    pub atoms: usize,
    /// Rate unit in 1/s; the model itself is written with it set to 1.
    pub rate_scale: f64,
}

impl CavityParams {
    pub fn new(atoms: usize) -> Result<Self> {
        if atoms == 0 {
            return Err(CavityError::NoAtoms);
        }
        Ok(Self {
            atoms,
            rate_scale: 1.0,
        })
    }
}
