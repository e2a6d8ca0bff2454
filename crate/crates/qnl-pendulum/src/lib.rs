//! A pendulum kept going by a falling weight and slowed by molecules that it
//! picks up at random, simulated as a marked Poisson process on the integer
//! periods.
//!
//! At each period the weight raises the pendulum mass by `dz`. With
//! probability `pr` a molecule of mass `m` is picked up; the collision divides
//! the height by `1 + m/M` and the molecule carries away the energy
//! `mu = m g h / (1 + m/M)`, which is the mark. Between two events the marks
//! obey the exact linear recursion
//!
//! ```text
//! mu_i = mu_{i-1} / (1 + m/M) + (m g / (1 + m/M)) dz (k_i - k_{i-1})
//! ```
//!
//! which is what the simulator iterates. Gaps `k_i - k_{i-1}` are geometric,
//! the same law as independent per-period draws.

use qnl_ensemble::{mean_stderr, ChaCha8Rng, Execution, Streams};
use qnl_points::periodogram;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PendulumError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, PendulumError>;

/// Physical inputs (SI units). The period is the time unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumParams {
    /// Pendulum mass, equal to the driving weight.
    pub big_mass: f64,
    /// Molecule mass.
    pub small_mass: f64,
    /// Pick-up probability per period.
    pub pr: f64,
    /// Drop of the weight per period.
    pub dz: f64,
    pub gravity: f64,
    pub period: f64,
}

impl PendulumParams {
    /// Reference setup: 1 kg, 1 g, 1 %, 1 um, 1 s period.
    pub fn reference() -> Self {
        Self {
            big_mass: 1.0,
            small_mass: 1e-3,
            pr: 0.01,
            dz: 1e-6,
            gravity: 9.81,
            period: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("M", self.big_mass),
            ("m", self.small_mass),
            ("pr", self.pr),
            ("dz", self.dz),
            ("g", self.gravity),
            ("period", self.period),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(PendulumError::InvalidParameter(format!("{name} = {v}")));
            }
        }
        if self.pr > 1.0 {
            return Err(PendulumError::InvalidParameter(format!(
                "pr = {} > 1",
                self.pr
            )));
        }
        Ok(())
    }

    fn ratio(&self) -> f64 {
        self.small_mass / self.big_mass
    }
}

/// Averages following from the power balance, to leading order in `m/M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derived {
    pub mean_height: f64,
    /// Mean energy carried away per event.
    pub epsilon: f64,
    /// Energy lifetime, in periods.
    pub tau_p: f64,
    pub mean_power: f64,
    pub mean_energy: f64,
}

pub fn derived_quantities(p: &PendulumParams) -> Result<Derived> {
    p.validate()?;
    let mean_height = p.big_mass * p.dz / (p.small_mass * p.pr);
    Ok(Derived {
        mean_height,
        epsilon: p.small_mass * p.gravity * mean_height,
        tau_p: p.big_mass / (p.pr * p.small_mass),
        mean_power: p.big_mass * p.gravity * p.dz / p.period,
        mean_energy: p.big_mass * p.gravity * mean_height,
    })
}

/// Stationary mean of the height at the start of a period under the exact
/// (non-linearized) map: `dz (1 + m/M) / (pr m/M)`.
pub fn exact_mean_height(p: &PendulumParams) -> f64 {
    let r = p.ratio();
    p.dz * (1.0 + r) / (p.pr * r)
}

/// Constant term of the mark recursion per elapsed period.
pub fn mark_increment(p: &PendulumParams) -> f64 {
    p.small_mass * p.gravity / (1.0 + p.ratio()) * p.dz
}

/// One step of the mark recursion.
#[inline]
pub fn next_mark(p: &PendulumParams, previous: f64, gap: u64) -> f64 {
    previous / (1.0 + p.ratio()) + mark_increment(p) * gap as f64
}

/// `(Omega tau_p)^2 / (1 + (Omega tau_p)^2) * epsilon * <P_d>`.
pub fn analytic_spectrum(omega: f64, tau_p: f64, epsilon: f64, mean_power: f64) -> f64 {
    let x2 = (omega * tau_p).powi(2);
    x2 / (1.0 + x2) * epsilon * mean_power
}

/// Spectrum of the exact per-period map, linearized around its mean:
/// with `q = (m/M) / (1 + m/M)` and `a = q pr`,
///
/// ```text
/// S(Omega) = pr (1 - pr) (q <E>)^2 |e^{i Omega} - 1|^2 / |e^{i Omega} - 1 + a|^2
/// ```
///
/// (per period, `<E>` the exact stationary energy). It reduces to
/// [`analytic_spectrum`] when `pr` and `m/M` go to zero.
pub fn exact_map_spectrum(p: &PendulumParams, omega: f64) -> f64 {
    let r = p.ratio();
    let q = r / (1.0 + r);
    let a = q * p.pr;
    let energy = p.big_mass * p.gravity * exact_mean_height(p);
    let w = omega * p.period;
    let num = 4.0 * (0.5 * w).sin().powi(2);
    let den = (w.cos() - 1.0 + a).powi(2) + w.sin().powi(2);
    p.pr * (1.0 - p.pr) * (q * energy).powi(2) * num / den / p.period
}

/// Events of one run on periods `1..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipationRecord {
    pub periods: Vec<u64>,
    pub marks: Vec<f64>,
    pub horizon: u64,
    /// Mark of the last event before the record (from the burn-in).
    pub initial_mark: f64,
    /// Period of that event, counted backwards from period 0.
    pub initial_gap_offset: u64,
    /// Sum of the start-of-period heights over the record.
    pub height_sum: f64,
}

impl DissipationRecord {
    pub fn time_mean_height(&self) -> f64 {
        self.height_sum / self.horizon as f64
    }

    pub fn dissipated_energy(&self) -> f64 {
        self.marks.iter().sum()
    }

    pub fn times(&self) -> Vec<f64> {
        self.periods.iter().map(|&k| k as f64).collect()
    }
}

/// Default burn-in: ten lifetimes, and never less than `10 / pr` periods.
pub fn default_burn_in(p: &PendulumParams) -> Result<u64> {
    let d = derived_quantities(p)?;
    Ok((10.0 * d.tau_p).max(10.0 / p.pr).ceil() as u64)
}

/// Simulates `K` periods after a burn-in that starts at height `<h>`.
pub fn simulate<R: Rng + ?Sized>(
    p: &PendulumParams,
    periods: u64,
    burn_in: u64,
    rng: &mut R,
) -> Result<DissipationRecord> {
    p.validate()?;
    if periods == 0 {
        return Err(PendulumError::InvalidParameter(
            "K must be at least 1".into(),
        ));
    }
    let geom = Geometric::new(p.pr).map_err(|e| PendulumError::InvalidParameter(e.to_string()))?;
    let mg = p.small_mass * p.gravity;
    let h0 = derived_quantities(p)?.mean_height;
    // a virtual event at period -burn_in leaving post-collision height h0 - dz
    let mut k: i64 = -(burn_in as i64);
    let mut mark = mg * (h0 - p.dz);
    let mut periods_out = Vec::new();
    let mut marks = Vec::new();
    let mut height_sum = 0.0;
    let mut initial = (mark, burn_in);
    let horizon = periods as i64;
    loop {
        let gap = geom.sample(rng) + 1;
        let next = k + gap as i64;
        // start-of-period heights y + dz (q - k) for q in (k, next], clipped to [1, K]
        let (a, b) = ((k + 1).max(1), next.min(horizon));
        if a <= b {
            let y = mark / mg;
            let n = (b - a + 1) as f64;
            let first = (a - k) as f64;
            let last = (b - k) as f64;
            height_sum += n * y + p.dz * 0.5 * n * (first + last);
        }
        if next > horizon {
            break;
        }
        mark = next_mark(p, mark, gap);
        if next >= 1 {
            periods_out.push(next as u64);
            marks.push(mark);
        } else {
            initial = (mark, (-next) as u64);
        }
        k = next;
    }
    Ok(DissipationRecord {
        periods: periods_out,
        marks,
        horizon: periods,
        initial_mark: initial.0,
        initial_gap_offset: initial.1,
        height_sum,
    })
}

/// Runs `0..runs` on the RNG streams of `(seed, "pendulum")`.
pub fn simulate_ensemble(
    p: &PendulumParams,
    periods: u64,
    runs: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<DissipationRecord>> {
    let burn = default_burn_in(p)?;
    let streams = Streams::new(seed, "pendulum");
    exec.map(runs, |r| {
        let mut rng: ChaCha8Rng = streams.rng(r as u64);
        simulate(p, periods, burn, &mut rng)
    })
    .into_iter()
    .collect()
}

/// Mark-weighted periodogram averaged over a block of harmonics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub n_lo: usize,
    pub n_hi: usize,
    /// Mean angular frequency of the band.
    pub omega: f64,
    pub sim: f64,
    pub analytic: f64,
    /// Band mean of [`exact_map_spectrum`].
    pub exact_map: f64,
    pub stderr: f64,
}

impl BandPoint {
    pub fn ratio(&self) -> f64 {
        self.sim / self.analytic
    }
}

/// Band means of `(1/K) |sum mu_i exp(i Omega_n k_i)|^2` over runs, next to the
/// band mean of the analytic spectrum at the same harmonics.
pub fn band_spectrum(
    p: &PendulumParams,
    records: &[DissipationRecord],
    bands: &[(usize, usize)],
    exec: Execution,
) -> Result<Vec<BandPoint>> {
    let d = derived_quantities(p)?;
    let first = records
        .first()
        .ok_or_else(|| PendulumError::InvalidParameter("no runs".into()))?;
    let horizon = first.horizon;
    if records.iter().any(|r| r.horizon != horizon) {
        return Err(PendulumError::InvalidParameter(
            "runs differ in length".into(),
        ));
    }
    if let Some(b) = bands.iter().find(|(lo, hi)| *lo == 0 || hi < lo) {
        return Err(PendulumError::InvalidParameter(format!("band {b:?}")));
    }
    let t = horizon as f64 * p.period;
    let per_run: Vec<Vec<f64>> = exec.map(records.len(), |r| {
        let rec = &records[r];
        let times = rec.times();
        bands
            .iter()
            .map(|&(lo, hi)| {
                let s = periodogram(&times, Some(&rec.marks), horizon as f64, lo, hi);
                // periodogram divides by K periods; convert to the time unit
                s.iter().sum::<f64>() / s.len() as f64 / p.period
            })
            .collect()
    });
    Ok(bands
        .iter()
        .enumerate()
        .map(|(j, &(lo, hi))| {
            let vals: Vec<f64> = per_run.iter().map(|v| v[j]).collect();
            let (sim, stderr) = mean_stderr(&vals);
            let omegas = (lo..=hi).map(|n| std::f64::consts::TAU * n as f64 / t);
            let count = (hi - lo + 1) as f64;
            let analytic = omegas
                .clone()
                .map(|w| analytic_spectrum(w, d.tau_p * p.period, d.epsilon, d.mean_power))
                .sum::<f64>()
                / count;
            let exact_map = (lo..=hi)
                .map(|n| exact_map_spectrum(p, std::f64::consts::TAU * n as f64 / t))
                .sum::<f64>()
                / count;
            BandPoint {
                exact_map,
                n_lo: lo,
                n_hi: hi,
                omega: omegas.sum::<f64>() / count,
                sim,
                analytic,
                stderr,
            }
        })
        .collect())
}

/// Bands of `width` consecutive harmonics starting at `Omega tau_p = x_lo`
/// and stepping by factors of 2 up to `x_hi`, for records of `K` periods.
pub fn log_bands(
    tau_p: f64,
    periods: u64,
    x_lo: f64,
    x_hi: f64,
    width: usize,
) -> Vec<(usize, usize)> {
    let n_of = |x: f64| (x * periods as f64 / (std::f64::consts::TAU * tau_p)).round() as usize;
    let (n_min, n_max) = (n_of(x_lo).max(1), n_of(x_hi).max(1));
    let mut out = Vec::new();
    let mut n = n_min;
    while n + width - 1 <= n_max {
        out.push((n, n + width - 1));
        n *= 2;
    }
    if out.last().map_or(true, |&(_, hi)| hi < n_max) && n_max + 1 >= n_min + width {
        out.push((n_max + 1 - width, n_max));
    }
    out
}
