//! Linear circuits at optical frequencies.
//!
//! Complex amplitudes follow the `exp(-i omega t)` convention, so a
//! capacitance has admittance `-i C omega` and an inductance `i / (L omega)`.
//! Each conductance `G` carries a current source whose two quadratures are
//! uncorrelated with double-sided spectral density `hbar omega_o |G|`.
//!
//! * [`tuned`]: the parallel `L C G` resonator, its width and stored energy
//! * [`network`]: series/parallel networks and the frequency-derivative identity
//! * [`thermal`]: oscillator energy, the thermal balance that fixes the noise
//!   constant, and the classical Nyquist check
//! * [`cstate`]: photocounts from a potential source driving a noisy conductance

pub mod cstate;
pub mod network;
pub mod thermal;
pub mod tuned;

pub use cstate::{
    cstate_ensemble, cstate_montecarlo, power_fluctuation_density, CStateParams, CStateRun,
    MAX_NEGATIVE_FRACTION,
};
pub use network::{admittance_derivative, admittance_derivative_identity, Network};
pub use thermal::{
    average_oscillator_energy, infer_alpha, nyquist_classical_check, nyquist_closed_form,
    riccati_check, thermal_balance,
};
pub use tuned::{fabry_perot_lifetime, half_power_width, NoiseSource, Spectrum, TunedCircuit};

use thiserror::Error;

/// Rounded values used throughout the circuit formulas (SI).
pub mod constants {
    pub const HBAR: f64 = 1.05e-34;
    pub const BOLTZMANN: f64 = 1.38e-23;
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("admittance is undefined at zero frequency")]
    ZeroFrequency,
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("no net dissipation: G_a = {g_a} must exceed G_e = {g_e}")]
    NonDissipative { g_a: f64, g_e: f64 },
    #[error("noise drove the rate negative on {fraction} of the steps; refine the grid")]
    NegativeRate { fraction: f64 },
    #[error("quadrature did not converge (error estimate {0})")]
    Quadrature(f64),
    #[error(transparent)]
    Points(#[from] qnl_points::PointError),
}

pub type Result<T> = std::result::Result<T, CircuitError>;
