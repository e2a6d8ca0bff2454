//! Numerical core shared by every physics crate in the workspace.
//!
//! * [`poly`]: quadratic and cubic roots (Cardano with an explicit branch rule)
//! * [`laplace`]: waiting-time densities as sums of `weight * t^k * exp(pole * t)`,
//!   Heaviside inversion and the renewal correlation `G = w / (1 - w)`
//! * [`bicomplex`]: Segre's bi-complex numbers for modulated signals
//! * [`quad`]: adaptive Gauss-Kronrod quadrature on finite and infinite ranges
//! * [`integrals`]: closed-form reference integrals and their quadrature twins

pub mod bicomplex;
pub mod integrals;
pub mod laplace;
pub mod poly;
pub mod quad;

pub use bicomplex::{bicomplex_invert, bicomplex_multiply, modulated_response, BiComplex};
pub use integrals::{reference_integral, reference_integral_quadrature};
pub use laplace::{heaviside_invert, mean_waiting_time, renewal_correlation, RenewalLaw, Term};
pub use num_complex::Complex64;
pub use poly::{solve_cubic, solve_quadratic, solve_quadratic_real, ComplexRoots};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MathError {
    #[error("leading coefficient is zero")]
    DegenerateLeadingCoefficient,
    #[error("roots {0} and {1} are not distinct enough for Heaviside inversion")]
    RepeatedRoot(Complex64, Complex64),
    #[error("waiting-time density integrates to {0}, expected 1")]
    NotNormalized(f64),
    #[error("bi-complex number is not invertible (A = {a}, B = {b})")]
    NotInvertible { a: f64, b: f64 },
    #[error("no tabulated closed form for I_{m}{n}")]
    UnsupportedIndex { m: u32, n: u32 },
    #[error("parameter out of domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, MathError>;
