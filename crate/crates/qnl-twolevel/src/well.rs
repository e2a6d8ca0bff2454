//! The infinite square well of width `d` and its two lowest states.
//!
//! ```text
//! psi_1(x) = sqrt(2/d) cos(pi x / d)      psi_2(x) = sqrt(2/d) sin(2 pi x / d)
//! E_n = pi^2 hbar^2 n^2 / (2 m d^2)
//! ```

use std::f64::consts::PI;

use crate::{Result, TwoLevelError};

/// CODATA 2018 values, SI units.
pub mod constants {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
}

use constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWell {
    /// Width `d` in meters.
    pub width: f64,
}

impl SquareWell {
    pub fn new(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(TwoLevelError::Domain(format!(
                "well width must be > 0, got {width}"
            )));
        }
        Ok(Self { width })
    }

    /// Stationary wave function `psi_n(x)` on `[-d/2, d/2]`, zero outside.
    pub fn wave_function(&self, n: u32, x: f64) -> Result<f64> {
        let d = self.width;
        let norm = (2.0 / d).sqrt();
        if x.abs() > 0.5 * d {
            check_level(n)?;
            return Ok(0.0);
        }
        match n {
            1 => Ok(norm * (PI * x / d).cos()),
            2 => Ok(norm * (2.0 * PI * x / d).sin()),
            _ => Err(TwoLevelError::UnsupportedLevel(n)),
        }
    }

    /// `d psi_n / dx`.
    pub fn wave_function_derivative(&self, n: u32, x: f64) -> Result<f64> {
        let d = self.width;
        let norm = (2.0 / d).sqrt();
        if x.abs() > 0.5 * d {
            check_level(n)?;
            return Ok(0.0);
        }
        match n {
            1 => Ok(-norm * PI / d * (PI * x / d).sin()),
            2 => Ok(norm * 2.0 * PI / d * (2.0 * PI * x / d).cos()),
            _ => Err(TwoLevelError::UnsupportedLevel(n)),
        }
    }
}

fn check_level(n: u32) -> Result<()> {
    if n == 1 || n == 2 {
        Ok(())
    } else {
        Err(TwoLevelError::UnsupportedLevel(n))
    }
}

/// `E_n` in joules for `n` in {1, 2}.
pub fn well_levels(w: &SquareWell, n: u32) -> Result<f64> {
    check_level(n)?;
    let n = f64::from(n);
    Ok(PI * PI * HBAR * HBAR * n * n / (2.0 * ELECTRON_MASS * w.width * w.width))
}

/// `omega_o = (E_2 - E_1) / hbar = 3 pi^2 hbar / (2 m d^2)`.
pub fn transition_frequency(w: &SquareWell) -> f64 {
    3.0 * PI * PI * HBAR / (2.0 * ELECTRON_MASS * w.width * w.width)
}

/// `x_12 = int x psi_1 psi_2 dx = 16 d / (9 pi^2)`.
///
/// With `u = pi x / d` the integral is `(2 d / pi^2) int_{-pi/2}^{pi/2} u cos u sin 2u du`
/// and the last integral is `8/9`.
pub fn transition_element(w: &SquareWell) -> f64 {
    16.0 * w.width / (9.0 * PI * PI)
}

/// `f = 2 m omega_o x_12^2 / hbar = 256 / (27 pi^2)`, the same for every width.
pub fn oscillator_strength(w: &SquareWell) -> f64 {
    2.0 * ELECTRON_MASS * transition_frequency(w) * transition_element(w).powi(2) / HBAR
}

/// `hbar Omega_R / (e sqrt(2) V) = x_12 / d = 16 / (9 pi^2)`.
pub fn rabi_coefficient() -> f64 {
    16.0 / (9.0 * PI * PI)
}

/// Rabi frequency (rad/s) for an optical potential of rms value `v` volts:
/// `hbar Omega_R = e sqrt(2) V x_12 / d`.
pub fn rabi_frequency(w: &SquareWell, v: f64) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(TwoLevelError::Domain(format!(
            "rms potential must be >= 0, got {v}"
        )));
    }
    Ok(ELEMENTARY_CHARGE * 2f64.sqrt() * v * transition_element(w) / (w.width * HBAR))
}

/// `p_12 / hbar = -i m omega_o x_12 / hbar`, returned as the real factor
/// multiplying `-i`.
pub fn momentum_element_over_hbar(w: &SquareWell) -> f64 {
    ELECTRON_MASS * transition_frequency(w) * transition_element(w) / HBAR
}
