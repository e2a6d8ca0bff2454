//! Event-series generators and the two closure operations (thinning and
//! superposition).

use std::cell::Cell;

use qnl_math::quad::{integrate, QuadOptions};
use qnl_math::RenewalLaw;
use rand::Rng;

use crate::{EventSeries, PointError, Result};

/// A law for i.i.d. inter-event durations.
pub trait WaitingTime {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64;
    fn mean(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    pub rate: f64,
}

impl WaitingTime for Exponential {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        -(1.0 - rng.random::<f64>()).ln() / self.rate
    }

    fn mean(&self) -> f64 {
        1.0 / self.rate
    }
}

/// Inverse-survival sampling of an exponential-sum density.
impl WaitingTime for RenewalLaw {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.survival_quantile(1.0 - rng.random::<f64>())
    }

    fn mean(&self) -> f64 {
        RenewalLaw::mean(self)
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(PointError::InvalidParameter(format!(
            "{name} must be positive, got {x}"
        )))
    }
}

/// Homogeneous Poisson process of density `rate` on `(0, horizon]`.
pub fn gen_poisson<R: Rng + ?Sized>(rate: f64, horizon: f64, rng: &mut R) -> Result<EventSeries> {
    check_positive("rate", rate)?;
    check_positive("horizon", horizon)?;
    gen_renewal(&Exponential { rate }, horizon, 0.0, rng)
}

/// Ordinary renewal process `t_k = sum tau_i` started at `-burn_in`; only the
/// events falling in `(0, horizon]` are kept.
pub fn gen_renewal<W: WaitingTime, R: Rng + ?Sized>(
    law: &W,
    horizon: f64,
    burn_in: f64,
    rng: &mut R,
) -> Result<EventSeries> {
    check_positive("horizon", horizon)?;
    let mut times = Vec::with_capacity((horizon / law.mean()).ceil() as usize + 16);
    let mut t = -burn_in.max(0.0);
    loop {
        let tau = law.sample(rng);
        if !(tau > 0.0) {
            // a zero draw would break orderliness; it has probability ~2^-53
            continue;
        }
        t += tau;
        if t > horizon {
            break;
        }
        if t > 0.0 {
            times.push(t);
        }
    }
    EventSeries::new(times, horizon)
}

/// Inhomogeneous Poisson process of intensity `rate(t)` by time rescaling:
/// unit-rate arrivals `s_k` are mapped back through `Lambda(t) = int_0^t rate`.
///
/// `Lambda` is tabulated on cells of width `cell` with Gauss-Kronrod; inside
/// a cell the crossing is found by safeguarded Newton. Any negative rate seen
/// at a quadrature node is an error.
pub fn gen_inhomogeneous<F, R>(rate: F, horizon: f64, cell: f64, rng: &mut R) -> Result<EventSeries>
where
    F: Fn(f64) -> f64,
    R: Rng + ?Sized,
{
    check_positive("horizon", horizon)?;
    check_positive("cell", cell)?;
    let worst = Cell::new((0.0f64, f64::INFINITY));
    let lam = |t: f64| {
        let v = rate(t);
        if v < worst.get().1 {
            worst.set((t, v));
        }
        v
    };
    let opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_intervals: 200,
    };
    let n_cells = (horizon / cell).ceil() as usize;
    let mut edges = Vec::with_capacity(n_cells + 1);
    let mut cum = Vec::with_capacity(n_cells + 1);
    edges.push(0.0);
    cum.push(0.0);
    for i in 0..n_cells {
        let a = i as f64 * cell;
        let b = ((i + 1) as f64 * cell).min(horizon);
        let area = integrate(lam, a, b, opts).value;
        edges.push(b);
        cum.push(cum[i] + area);
    }
    let (t_min, v_min) = worst.get();
    if v_min < 0.0 {
        return Err(PointError::NegativeRate {
            t: t_min,
            rate: v_min,
        });
    }
    let total = *cum.last().expect("at least one cell");
    let mut times = Vec::new();
    let mut s = 0.0;
    loop {
        s += -(1.0 - rng.random::<f64>()).ln();
        if s >= total {
            break;
        }
        let i = cum.partition_point(|&c| c <= s) - 1;
        let (a, b) = (edges[i], edges[i + 1]);
        let target = s - cum[i];
        let (mut lo, mut hi) = (a, b);
        let mut t = a + (b - a) * target / (cum[i + 1] - cum[i]);
        for _ in 0..100 {
            let f = integrate(&rate, a, t, opts).value - target;
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            if f.abs() < 1e-13 * (1.0 + target) || hi - lo < 1e-14 * (1.0 + hi) {
                break;
            }
            let r = rate(t);
            let newton = t - f / r;
            t = if r > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        if times.last().is_some_and(|&last| t <= last) || t <= 0.0 {
            continue;
        }
        times.push(t);
    }
    EventSeries::new(times, horizon)
}

/// Independent deletion: each event survives with probability `keep`.
pub fn thin<R: Rng + ?Sized>(series: &EventSeries, keep: f64, rng: &mut R) -> Result<EventSeries> {
    if !(keep > 0.0 && keep <= 1.0) {
        return Err(PointError::InvalidParameter(format!(
            "keep probability {keep}"
        )));
    }
    let times = series
        .times()
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() < keep)
        .collect();
    EventSeries::new(times, series.horizon())
}

/// Merge of series sharing one horizon.
pub fn superpose(parts: &[EventSeries]) -> Result<EventSeries> {
    let first = parts.first().ok_or(PointError::EmptyEnsemble)?;
    let horizon = first.horizon();
    if let Some(p) = parts.iter().find(|p| p.horizon() != horizon) {
        return Err(PointError::HorizonMismatch(horizon, p.horizon()));
    }
    let mut times: Vec<f64> = parts
        .iter()
        .flat_map(|p| p.times().iter().copied())
        .collect();
    times.sort_by(f64::total_cmp);
    EventSeries::new(times, horizon)
}

/// Uniform delay on `[0, width)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformDelay {
    pub width: f64,
}

impl WaitingTime for UniformDelay {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.width * rng.random::<f64>()
    }

    fn mean(&self) -> f64 {
        0.5 * self.width
    }
}

/// A quiet pump feeding a store: `t_k = k + phi + delay_k`, `k = 1..=K`,
/// with i.i.d. delays, wrapped onto a circle of circumference `K`.
///
/// The wrap removes the edge effects of a finite window, so the process is
/// exactly stationary on `(0, K]` with unit density. The common phase `phi`,
/// uniform on `[0, 1)`, removes the lattice's preferred origin. At the
/// harmonics `2 pi n / K` (n not a multiple of K) the spectrum is exactly
/// `1 - |chi(Omega)|^2`, `chi` being the characteristic function of the delay.
pub fn gen_delayed_lattice<W: WaitingTime, R: Rng + ?Sized>(
    delay: &W,
    k_events: usize,
    rng: &mut R,
) -> Result<EventSeries> {
    if k_events == 0 {
        return Err(PointError::InvalidParameter("K must be at least 1".into()));
    }
    let horizon = k_events as f64;
    let phi: f64 = rng.random();
    let mut times: Vec<f64> = (1..=k_events)
        .map(|k| {
            let x = (k as f64 + phi + delay.sample(rng)).rem_euclid(horizon);
            if x == 0.0 {
                horizon
            } else {
                x
            }
        })
        .collect();
    times.sort_by(f64::total_cmp);
    EventSeries::new(times, horizon)
}

/// Dark-room process: the delayed lattice with delays uniform on `[0, tau_r)`.
pub fn gen_darkroom<R: Rng + ?Sized>(
    tau_r: f64,
    k_events: usize,
    rng: &mut R,
) -> Result<EventSeries> {
    if !(tau_r >= 0.0 && tau_r.is_finite()) {
        return Err(PointError::InvalidParameter(format!("tau_r {tau_r}")));
    }
    gen_delayed_lattice(&UniformDelay { width: tau_r }, k_events, rng)
}

/// Quiet-laser process: the delayed lattice with exponential delays of mean
/// `tau_p` (each pumped quantum leaves the store after an exponential time).
/// Its relative noise is `-1 / (1 + (Omega tau_p)^2)` and, averaged over unit
/// bins, `g(tau) = 1 - exp(-tau / tau_p) / (2 tau_p)`.
pub fn gen_quiet_laser<R: Rng + ?Sized>(
    tau_p: f64,
    k_events: usize,
    rng: &mut R,
) -> Result<EventSeries> {
    check_positive("tau_p", tau_p)?;
    gen_delayed_lattice(&Exponential { rate: 1.0 / tau_p }, k_events, rng)
}

/// Cuts one long run into `blocks` consecutive sub-runs, re-based at zero, so
/// that single-run time averages get block-jackknife errors.
pub fn split_blocks(series: &EventSeries, blocks: usize) -> Result<Vec<EventSeries>> {
    if blocks == 0 {
        return Err(PointError::InvalidParameter(
            "blocks must be at least 1".into(),
        ));
    }
    let width = series.horizon() / blocks as f64;
    let mut out = vec![Vec::new(); blocks];
    for &t in series.times() {
        let b = (((t / width).ceil() as usize).max(1) - 1).min(blocks - 1);
        let local = t - b as f64 * width;
        if local > 0.0 && local <= width {
            out[b].push(local);
        }
    }
    out.into_iter()
        .map(|times| EventSeries::new(times, width))
        .collect()
}
