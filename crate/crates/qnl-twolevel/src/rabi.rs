//! Resonant driving of the two-level electron.
//!
//! The density matrix is carried as the Bloch vector
//! `x = 2 Re rho_12`, `y = 2 Im rho_12`, `z = rho_22 - rho_11`, so the unit
//! trace and Hermiticity hold structurally. With spontaneous rates `gamma_1`
//! (1 -> 2) and `gamma_2` (2 -> 1), `gamma = gamma_1 + gamma_2`,
//! `b gamma = gamma_1 - gamma_2`:
//!
//! ```text
//! dx/dt = -2 a gamma x
//! dy/dt = -Omega_R z - 2 a gamma y
//! dz/dt =  Omega_R y - 2 gamma z + 2 b gamma
//! ```
//!
//! In this convention an electron starting in the absorbing state has
//! `y = sin(Omega_R t) >= 0` while it takes energy from the field. The
//! amplitude form `C_1 = cos(Omega_R t / 2)`, `C_2 = i sin(Omega_R t / 2)`
//! has the opposite phase for `Im(C_1 C_2*)`; [`PureRabi`] reports both.

use std::f64::consts::PI;

use ode_solvers::{Dop853, OutputType, SVector, System, Vector3, Vector4};

use crate::well::{constants, transition_element, transition_frequency, SquareWell};
use crate::{Result, TwoLevelError};

const PURITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochState {
    /// Electron in the absorbing (lower) state.
    pub const ABSORBING: Self = Self {
        x: 0.0,
        y: 0.0,
        z: -1.0,
    };
    /// Electron in the emitting (upper) state.
    pub const EMITTING: Self = Self {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let s = Self { x, y, z };
        if s.purity() > 1.0 + PURITY_SLACK {
            return Err(TwoLevelError::Domain(format!(
                "Bloch vector ({x}, {y}, {z}) lies outside the unit ball"
            )));
        }
        Ok(s)
    }

    pub fn rho22(&self) -> f64 {
        0.5 * (1.0 + self.z)
    }

    pub fn rho11(&self) -> f64 {
        0.5 * (1.0 - self.z)
    }

    pub fn rho12_imag(&self) -> f64 {
        0.5 * self.y
    }

    pub fn rho12_real(&self) -> f64 {
        0.5 * self.x
    }

    /// `x^2 + y^2 + z^2 = 2 tr(rho^2) - 1`, equal to 1 for a pure state.
    pub fn purity(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiParams {
    pub omega_r: f64,
    /// Upward spontaneous rate, 1 -> 2.
    pub gamma1: f64,
    /// Downward spontaneous rate, 2 -> 1.
    pub gamma2: f64,
    pub a: f64,
}

impl RabiParams {
    /// `Omega_R = 1`, downward decay only, `2a = 1`.
    pub fn decay(gamma: f64) -> Self {
        Self {
            omega_r: 1.0,
            gamma1: 0.0,
            gamma2: gamma,
            a: 0.5,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma1 + self.gamma2
    }

    /// `b = (gamma_1 - gamma_2) / (gamma_1 + gamma_2)`, zero without decay.
    pub fn b(&self) -> f64 {
        let g = self.gamma();
        if g > 0.0 {
            (self.gamma1 - self.gamma2) / g
        } else {
            0.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega_r, self.gamma1, self.gamma2, self.a]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.gamma1 < 0.0 || self.gamma2 < 0.0 || self.a < 0.0 || self.omega_r < 0.0 {
            return Err(TwoLevelError::Domain(format!(
                "invalid Rabi parameters {self:?}"
            )));
        }
        if self.gamma() > 0.0 {
            let adm = admissibility(self.gamma1, self.gamma2, self.a)?;
            if !adm.admissible {
                return Err(TwoLevelError::Inadmissible {
                    two_a: 2.0 * self.a,
                    bound: adm.bound,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// Smallest allowed `2a`, `1 - sqrt(1 - b^2)`.
    pub bound: f64,
    /// `(sqrt(gamma_1) - sqrt(gamma_2))^2 / (gamma_1 + gamma_2)`, the `2a` of the
    /// least decoherent model.
    pub minimal_two_a: f64,
}

/// Whether the purity can never grow: `(a - 1) z^2 + b z - a <= 0` on `|z| <= 1`,
/// which is `2a >= 1 - sqrt(1 - b^2)`.
pub fn admissibility(gamma1: f64, gamma2: f64, a: f64) -> Result<Admissibility> {
    let g = gamma1 + gamma2;
    if !(g > 0.0) || gamma1 < 0.0 || gamma2 < 0.0 {
        return Err(TwoLevelError::Domain(format!(
            "rates must be >= 0 with a positive sum, got {gamma1}, {gamma2}"
        )));
    }
    let b = (gamma1 - gamma2) / g;
    let bound = 1.0 - (1.0 - b * b).max(0.0).sqrt();
    let minimal_two_a = (gamma1.sqrt() - gamma2.sqrt()).powi(2) / g;
    Ok(Admissibility {
        admissible: 2.0 * a >= bound - 1e-12,
        bound,
        minimal_two_a,
    })
}

/// Which state the electron occupies at `t = 0`; it fixes the sign of the
/// power exchanged with the optical source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    Absorbing,
    Emitting,
}

impl InitialState {
    fn sign(self) -> f64 {
        match self {
            Self::Absorbing => 1.0,
            Self::Emitting => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureRabi {
    pub rho22: f64,
    /// `Im(C_1 C_2*)` for `C_1 = cos(Omega_R t/2)`, `C_2 = i sin(Omega_R t/2)`.
    pub rho12_imag: f64,
    pub bloch: BlochState,
}

/// Undamped Rabi oscillation from the absorbing state.
pub fn pure_rabi(t: f64, omega_r: f64) -> PureRabi {
    let phase = omega_r * t;
    PureRabi {
        rho22: (0.5 * phase).sin().powi(2),
        rho12_imag: -0.5 * phase.sin(),
        bloch: BlochState {
            x: 0.0,
            y: phase.sin(),
            z: -phase.cos(),
        },
    }
}

/// `dC_1/dt = i (Omega_R/2) C_2`, `dC_2/dt = i (Omega_R/2) C_1` with
/// `C = (Re C_1, Im C_1, Re C_2, Im C_2)`.
#[derive(Clone, Copy)]
struct Amplitudes {
    omega_r: f64,
}

impl System<f64, Vector4<f64>> for Amplitudes {
    fn system(&self, _t: f64, c: &Vector4<f64>, dc: &mut Vector4<f64>) {
        let h = 0.5 * self.omega_r;
        dc[0] = -h * c[3];
        dc[1] = h * c[2];
        dc[2] = -h * c[1];
        dc[3] = h * c[0];
    }
}

/// Integrates the amplitude equations from `C_1 = 1, C_2 = 0` and returns
/// `(t, C_1, C_2)` samples as `(t, [Re C_1, Im C_1, Re C_2, Im C_2])`.
pub fn integrate_amplitudes(omega_r: f64, t_end: f64, dt: f64) -> Result<Vec<(f64, [f64; 4])>> {
    check_grid(t_end, dt)?;
    Ok(integrate_grid(
        Amplitudes { omega_r },
        Vector4::new(1.0, 0.0, 0.0, 0.0),
        t_end,
        dt,
    )?
    .into_iter()
    .map(|(t, c)| (t, [c[0], c[1], c[2], c[3]]))
    .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interaction {
    /// Cycle-averaged power delivered by the optical source (W).
    pub power: f64,
    /// Energy delivered since `t = 0` (J).
    pub energy: f64,
    /// Conductance `<i>/v` seen by the source (S).
    pub conductance: f64,
    /// The small-time form `e^2 t / (2 m d^2)` with unit oscillator strength.
    pub conductance_small_time: f64,
}

/// Power, energy and conductance for an electron driven at rms potential `v`
/// with no spontaneous decay, as functions of the interaction time `t`.
pub fn interaction_energy_and_conductance(
    t: f64,
    w: &SquareWell,
    v: f64,
    start: InitialState,
) -> Result<Interaction> {
    let omega_r = crate::well::rabi_frequency(w, v)?;
    let omega_o = transition_frequency(w);
    let quantum = constants::HBAR * omega_o;
    let s = start.sign();
    let ratio = transition_element(w) / w.width;
    let e2 = constants::ELEMENTARY_CHARGE.powi(2);
    // sin(Omega t)/Omega, continuous at Omega = 0
    let sinc_t = if omega_r * t == 0.0 {
        t
    } else {
        (omega_r * t).sin() / omega_r
    };
    Ok(Interaction {
        power: s * quantum * omega_r * 0.5 * (omega_r * t).sin(),
        energy: s * quantum * (0.5 * omega_r * t).sin().powi(2),
        conductance: s * omega_o * e2 / constants::HBAR * ratio * ratio * sinc_t,
        conductance_small_time: s * e2 * t / (2.0 * constants::ELECTRON_MASS * w.width * w.width),
    })
}

const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-13;
const MAX_STEPS: u32 = 1_000_000;

fn check_grid(t_end: f64, dt: f64) -> Result<()> {
    if !(t_end > 0.0 && dt > 0.0 && t_end.is_finite()) {
        return Err(TwoLevelError::Domain(format!(
            "need t_end > 0 and dt > 0, got {t_end}, {dt}"
        )));
    }
    Ok(())
}

/// Samples at `0, dt, 2 dt, ..., t_end`. Each interval is a separate sparse
/// DOP853 run ending exactly on the grid point: the solver's dense output
/// loses accuracy once the output spacing exceeds its step size.
fn integrate_grid<S, const N: usize>(
    system: S,
    y0: SVector<f64, N>,
    t_end: f64,
    dt: f64,
) -> Result<Vec<(f64, SVector<f64, N>)>>
where
    S: System<f64, SVector<f64, N>> + Copy,
{
    let steps = (t_end / dt).round().max(1.0) as usize;
    let mut out = Vec::with_capacity(steps + 1);
    out.push((0.0, y0));
    let mut y = y0;
    for k in 0..steps {
        let t0 = k as f64 * dt;
        let t1 = if k + 1 == steps {
            t_end
        } else {
            (k + 1) as f64 * dt
        };
        let mut solver = Dop853::from_param(
            system,
            t0,
            t1,
            0.0,
            y,
            RTOL,
            ATOL,
            0.9,
            0.0,
            0.333,
            6.0,
            t1 - t0,
            0.0,
            MAX_STEPS,
            1000,
            OutputType::Sparse,
        );
        solver
            .integrate()
            .map_err(|e| TwoLevelError::Integration(e.to_string()))?;
        y = *solver.y_out().last().expect("solver records the end point");
        out.push((t1, y));
    }
    Ok(out)
}

#[derive(Clone, Copy)]
struct Bloch {
    p: RabiParams,
}

impl System<f64, Vector3<f64>> for Bloch {
    fn system(&self, _t: f64, s: &Vector3<f64>, ds: &mut Vector3<f64>) {
        let g = self.p.gamma();
        let om = self.p.omega_r;
        let dephase = 2.0 * self.p.a * g;
        ds[0] = -dephase * s[0];
        ds[1] = -om * s[2] - dephase * s[1];
        ds[2] = om * s[1] - 2.0 * g * s[2] + 2.0 * (self.p.gamma1 - self.p.gamma2);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlochState>,
}

/// Integrates the generalized Rabi equations with an embedded 8(5,3)
/// Runge-Kutta pair, returning the state every `dt` up to `t_end`.
pub fn integrate_generalized_rabi(
    p: &RabiParams,
    initial: BlochState,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    p.validate()?;
    check_grid(t_end, dt)?;
    let samples = integrate_grid(
        Bloch { p: *p },
        Vector3::new(initial.x, initial.y, initial.z),
        t_end,
        dt,
    )?;
    Ok(Trajectory {
        times: samples.iter().map(|(t, _)| *t).collect(),
        states: samples
            .iter()
            .map(|(_, s)| BlochState {
                x: s[0],
                y: s[1],
                z: s[2],
            })
            .collect(),
    })
}

/// Fixed point of the generalized Rabi equations.
pub fn steady_state(p: &RabiParams) -> Result<BlochState> {
    p.validate()?;
    let g = p.gamma();
    if !(g > 0.0) {
        return Err(TwoLevelError::Domain(
            "no unique steady state without spontaneous transitions".into(),
        ));
    }
    let b = p.b();
    let om = p.omega_r;
    let den = om * om + 4.0 * p.a * g * g;
    Ok(BlochState {
        x: 0.0,
        y: -2.0 * b * g * om / den,
        z: 4.0 * p.a * b * g * g / den,
    })
}

/// Time at which the Rabi population first reaches the emitting state.
pub fn half_period(omega_r: f64) -> f64 {
    PI / omega_r
}
