//! A single electron in a square well, driven resonantly between its two
//! lowest states.
//!
//! * [`well`]: levels, transition element, oscillator strength, Rabi frequency
//! * [`rabi`]: pure Rabi oscillation and the generalized Rabi equations with
//!   spontaneous transitions, integrated on the Bloch vector
//! * [`closed`]: event density, correlation, noise and conductance for pure
//!   downward decay
//! * [`waiting`]: exact and intuitive waiting-time laws and their distance
//!
//! Everything in [`closed`] and [`waiting`] uses `Omega_R = 1`; the `*_scaled`
//! helpers restore physical time.

pub mod closed;
pub mod rabi;
pub mod waiting;
pub mod well;

pub use closed::{
    detuned_rates, equal_gamma_dynamics, equal_gamma_eigenvalues, event_density,
    event_density_scaled, event_rate, noise_at_zero_scaled, rho22_closed, rho22_limit,
    saturated_conductance, CorrelationModel, EqualGammaPoint, SaturatedConductance,
};
pub use rabi::{
    admissibility, half_period, integrate_amplitudes, integrate_generalized_rabi,
    interaction_energy_and_conductance, pure_rabi, steady_state, Admissibility, BlochState,
    InitialState, Interaction, PureRabi, RabiParams, Trajectory,
};
pub use waiting::{waiting_distance, waiting_time_approx, waiting_time_exact};
pub use well::{
    constants, momentum_element_over_hbar, oscillator_strength, rabi_coefficient, rabi_frequency,
    transition_element, transition_frequency, well_levels, SquareWell,
};

use qnl_math::MathError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwoLevelError {
    #[error("only levels 1 and 2 are modelled, got {0}")]
    UnsupportedLevel(u32),
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("2a = {two_a} is below the purity bound {bound}")]
    Inadmissible { two_a: f64, bound: f64 },
    #[error("ODE integration failed: {0}")]
    Integration(String),
    #[error("quadrature did not converge (error estimate {0})")]
    Quadrature(f64),
    #[error(transparent)]
    Math(#[from] MathError),
}

pub type Result<T> = std::result::Result<T, TwoLevelError>;
