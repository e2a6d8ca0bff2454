//! The tuned circuit: `L`, `C` and a net conductance `G` in parallel, driven
//! by a current source `amp` of fixed complex amplitude.

use std::f64::consts::TAU;

use qnl_math::quad::{integrate_panels, integrate_real_line, integrate_to_infinity, QuadOptions};
use qnl_math::Complex64;

use crate::{constants, CircuitError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunedCircuit {
    pub l: f64,
    pub c: f64,
    pub g: f64,
}

impl TunedCircuit {
    pub fn new(l: f64, c: f64, g: f64) -> Result<Self> {
        if !(l > 0.0 && c > 0.0 && l.is_finite() && c.is_finite() && g.is_finite()) {
            return Err(CircuitError::Domain(format!(
                "need L, C > 0 and finite G, got L = {l}, C = {c}, G = {g}"
            )));
        }
        Ok(Self { l, c, g })
    }

    /// Circuit with resonance `omega_o` and lifetime `tau_p = C / G`, for `C = 1`.
    pub fn from_resonance(omega_o: f64, tau_p: f64) -> Result<Self> {
        Self::new(1.0 / (omega_o * omega_o), 1.0, 1.0 / tau_p)
    }

    pub fn omega_o(&self) -> f64 {
        1.0 / (self.l * self.c).sqrt()
    }

    /// Photon lifetime `C / G`.
    pub fn tau_p(&self) -> Result<f64> {
        if self.g > 0.0 {
            Ok(self.c / self.g)
        } else {
            Err(CircuitError::Domain("photon lifetime needs G > 0".into()))
        }
    }

    /// `Y = G - i (C omega - 1 / (L omega))`.
    pub fn admittance(&self, omega: f64) -> Result<Complex64> {
        if omega == 0.0 {
            return Err(CircuitError::ZeroFrequency);
        }
        Ok(Complex64::new(
            self.g,
            -(self.c * omega - 1.0 / (self.l * omega)),
        ))
    }

    /// `V = amp / Y`.
    pub fn voltage(&self, amp: Complex64, omega: f64) -> Result<Complex64> {
        Ok(amp / self.admittance(omega)?)
    }

    /// Dissipated power and stored energy at `omega`, exact and in the
    /// small-loss form.
    pub fn spectrum(&self, amp: Complex64, omega: f64) -> Result<Spectrum> {
        let v2 = self.voltage(amp, omega)?.norm_sqr();
        let a2 = amp.norm_sqr();
        let detune = omega - self.omega_o();
        let den = self.g * self.g + 4.0 * self.c * self.c * detune * detune;
        Ok(Spectrum {
            power: self.g * v2,
            energy: self.c * v2,
            power_small_loss: self.g * a2 / den,
            energy_small_loss: self.c * a2 / den,
        })
    }

    /// Nyquist-like source of the conductance at the resonance frequency.
    pub fn noise_source(&self) -> NoiseSource {
        NoiseSource {
            density: constants::HBAR * self.omega_o() * self.g.abs(),
        }
    }
}

impl TunedCircuit {
    /// `int_0^inf C |V|^2 d omega / 2 pi` for the exact response, by
    /// quadrature in `s = omega / omega_o`.
    pub fn integrated_energy(&self, amp: Complex64) -> Result<f64> {
        let q = self.quality()?;
        let unit = amp.norm_sqr() / (4.0 * self.g);
        let f = |s: f64| {
            let x = s - 1.0 / s;
            4.0 * q / TAU / (1.0 + q * q * x * x)
        };
        let mut edges = vec![0.0];
        let mut below = Vec::new();
        let mut above = Vec::new();
        let mut k = 1.0 / q;
        while k < 0.5 {
            below.push(1.0 - k);
            above.push(1.0 + k);
            k *= 2.0;
        }
        edges.extend(below.iter().rev());
        edges.push(1.0);
        edges.extend(above.iter());
        edges.push(2.0);
        let opts = QuadOptions::tight();
        let near = integrate_panels(f, &edges, opts);
        let tail = integrate_to_infinity(f, 2.0, opts);
        if !(near.converged && tail.converged) {
            return Err(CircuitError::Quadrature(near.error + tail.error));
        }
        Ok(unit * (near.value + tail.value))
    }

    /// Same integral for the small-loss Lorentzian over the whole real line.
    pub fn integrated_energy_small_loss(&self, amp: Complex64) -> Result<f64> {
        let q = self.quality()?;
        let unit = amp.norm_sqr() / (4.0 * self.g);
        let f = |u: f64| 4.0 * q / TAU / (1.0 + 4.0 * q * q * u * u);
        let r = integrate_real_line(f, QuadOptions::tight());
        if !r.converged {
            return Err(CircuitError::Quadrature(r.error));
        }
        Ok(unit * r.value)
    }

    /// `C omega_o / G`.
    fn quality(&self) -> Result<f64> {
        if self.g > 0.0 {
            Ok(self.c * self.omega_o() / self.g)
        } else {
            Err(CircuitError::Domain("energy integral needs G > 0".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    /// `G |V|^2`.
    pub power: f64,
    /// `C |V|^2`.
    pub energy: f64,
    /// `G |amp|^2 / (G^2 + 4 C^2 (omega - omega_o)^2)`.
    pub power_small_loss: f64,
    /// `C |amp|^2 / (G^2 + 4 C^2 (omega - omega_o)^2)`, which is
    /// `(tau_p |amp|^2 / G) / (1 + x^2)` with `x = 2 tau_p (omega - omega_o)`.
    pub energy_small_loss: f64,
}

/// Quadrature densities of a conductance's noise current, `S_C' = S_C''`,
/// with zero cross-spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSource {
    pub density: f64,
}

/// Full width at half power of the exact `G |V|^2`, by bisection on each
/// flank. Equal to `G / C` for every `L`.
pub fn half_power_width(c: &TunedCircuit) -> Result<f64> {
    if !(c.g > 0.0) {
        return Err(CircuitError::Domain("width needs G > 0".into()));
    }
    let w0 = c.omega_o();
    let amp = Complex64::new(1.0, 0.0);
    let peak = c.spectrum(amp, w0)?.power;
    let excess = |w: f64| c.spectrum(amp, w).map(|s| s.power - 0.5 * peak);
    let bisect = |mut inside: f64, mut outside: f64| -> Result<f64> {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if excess(mid)? > 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(0.5 * (inside + outside))
    };
    // walk outwards until the power has dropped below half
    let mut step = c.g / c.c;
    while excess(w0 + step)? > 0.0 {
        step *= 2.0;
    }
    let upper = bisect(w0, w0 + step)?;
    let mut low = (w0 - c.g / c.c).max(0.5 * w0);
    while excess(low)? > 0.0 {
        low *= 0.5;
    }
    let lower = bisect(w0, low)?;
    Ok(upper - lower)
}

/// `tau_p` of a Fabry-Perot resonator, `1 / tau_p = (T_1 + T_2) / (2 L / v)`.
pub fn fabry_perot_lifetime(t1: f64, t2: f64, length: f64, group_velocity: f64) -> Result<f64> {
    if !(t1 >= 0.0 && t2 >= 0.0 && t1 + t2 > 0.0 && t1 + t2 < 1.0) {
        return Err(CircuitError::Domain(format!(
            "mirror transmissions must be small and non-negative, got {t1}, {t2}"
        )));
    }
    if !(length > 0.0 && group_velocity > 0.0) {
        return Err(CircuitError::Domain(
            "length and velocity must be > 0".into(),
        ));
    }
    Ok(2.0 * length / group_velocity / (t1 + t2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonance_is_purely_conductive() {
        let c = TunedCircuit::new(2e-3, 5e-6, 0.1).unwrap();
        let y = c.admittance(c.omega_o()).unwrap();
        assert!((y.re - 0.1).abs() < 1e-15);
        assert!(y.im.abs() < 1e-12);
        assert_eq!(c.admittance(0.0), Err(CircuitError::ZeroFrequency));
        let amp = Complex64::new(0.3, -0.4);
        let s = c.spectrum(amp, c.omega_o()).unwrap();
        assert!((s.power - 0.25 / 0.1).abs() < 1e-12);
    }

    #[test]
    fn fabry_perot_examples() {
        let tau = fabry_perot_lifetime(0.01, 0.01, 0.15, 3e8).unwrap();
        assert!((tau - 50e-9).abs() < 1e-20);
        let one_sided = fabry_perot_lifetime(0.01, 0.0, 0.15, 3e8).unwrap();
        assert!((one_sided / tau - 2.0).abs() < 1e-14);
        let longer = fabry_perot_lifetime(0.01, 0.01, 0.45, 3e8).unwrap();
        assert!((longer / tau - 3.0).abs() < 1e-14);
        assert!(fabry_perot_lifetime(0.0, 0.0, 1.0, 1.0).is_err());
    }
}
