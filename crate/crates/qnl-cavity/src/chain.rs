//! Exact-jump simulation of the photon number.
//!
//! From state `m` the chain waits an exponential time of rate `R_e + R_a`
//! and then emits (`m + 1`) or absorbs (`m - 1`) in proportion to the two
//! rates. Occupancies are weighted by holding time, which is what converges
//! to the stationary law of a continuous-time chain.

use qnl_ensemble::{Execution, Streams};
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::{CavityError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CavityState {
    /// Photons in the mode.
    pub m: usize,
    /// Excited atoms.
    pub n: usize,
}

impl CavityState {
    /// All atoms excited, empty cavity.
    pub fn initial(atoms: usize) -> Self {
        Self { m: 0, n: atoms }
    }

    pub fn with_photons(atoms: usize, m: usize) -> Result<Self> {
        if m > atoms {
            return Err(CavityError::OutOfRange { n: m, atoms });
        }
        Ok(Self { m, n: atoms - m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpRates {
    /// `R_e = n (m + 1)`.
    pub emission: u64,
    /// `R_a = (N - n) m`.
    pub absorption: u64,
}

impl JumpRates {
    pub fn total(&self) -> u64 {
        self.emission + self.absorption
    }
}

pub fn jump_rates(s: CavityState, atoms: usize) -> Result<JumpRates> {
    if s.m + s.n != atoms {
        return Err(CavityError::Invalid(format!(
            "state m = {}, n = {} does not hold N = {atoms}",
            s.m, s.n
        )));
    }
    Ok(JumpRates {
        emission: (s.n * (s.m + 1)) as u64,
        absorption: ((atoms - s.n) * s.m) as u64,
    })
}

/// Mean rate of change of `m` in state `m`: `R_e - R_a = N m - 2 m^2 + N - m`.
pub fn drift(m: usize, atoms: usize) -> Result<i64> {
    let r = jump_rates(CavityState::with_photons(atoms, m)?, atoms)?;
    Ok(r.emission as i64 - r.absorption as i64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// Jumps recorded after the burn-in.
    pub jumps: u64,
    /// Jumps discarded first; `None` means `10 N`.
    pub burn_in: Option<u64>,
    /// Photon number at `t = 0`.
    pub start_m: usize,
    /// Width of the time bins of `m(t)`, if a sampled path is wanted.
    pub bin: Option<f64>,
}

impl SimOptions {
    pub fn new(jumps: u64) -> Self {
        Self {
            jumps,
            burn_in: None,
            start_m: 0,
            bin: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub atoms: usize,
    /// Time spent in each `m` after the burn-in.
    pub occupancy: Vec<f64>,
    /// Upward and downward jumps out of each `m`.
    pub ups: Vec<u64>,
    pub downs: Vec<u64>,
    pub total_time: f64,
    /// Bin averages of `m(t)` over complete bins, when requested.
    pub path: Vec<f64>,
    pub final_state: CavityState,
}

impl Simulation {
    /// Time-weighted empirical `pr(m)`.
    pub fn distribution(&self) -> Vec<f64> {
        self.occupancy.iter().map(|t| t / self.total_time).collect()
    }

    /// Empirical drift `(ups - downs) / time` in state `m`, with its
    /// standard error from the jump counts.
    pub fn empirical_drift(&self, m: usize) -> Option<(f64, f64)> {
        let t = *self.occupancy.get(m)?;
        if t == 0.0 {
            return None;
        }
        let (u, d) = (self.ups[m] as f64, self.downs[m] as f64);
        Some(((u - d) / t, (u + d).sqrt() / t))
    }
}

/// Accumulates `m(t)` into bins of fixed width.
struct Binner {
    width: f64,
    edge: f64,
    acc: f64,
    out: Vec<f64>,
}

impl Binner {
    fn hold(&mut self, m: f64, mut t: f64, mut dt: f64) {
        while t + dt >= self.edge {
            let part = self.edge - t;
            self.acc += m * part;
            self.out.push(self.acc / self.width);
            self.acc = 0.0;
            dt -= part;
            t = self.edge;
            self.edge += self.width;
        }
        self.acc += m * dt;
    }
}

pub fn simulate<R: Rng + ?Sized>(
    atoms: usize,
    opts: &SimOptions,
    rng: &mut R,
) -> Result<Simulation> {
    if atoms == 0 {
        return Err(CavityError::NoAtoms);
    }
    if let Some(b) = opts.bin {
        if !(b > 0.0 && b.is_finite()) {
            return Err(CavityError::Invalid(format!("bin width {b}")));
        }
    }
    let mut state = CavityState::with_photons(atoms, opts.start_m)?;
    let burn_in = opts.burn_in.unwrap_or(10 * atoms as u64);

    let step = |state: &mut CavityState, rng: &mut R| -> (f64, bool) {
        let r = jump_rates(*state, atoms).expect("state conserves N");
        let total = r.total() as f64;
        let e: f64 = Exp1.sample(rng);
        let hold = e / total;
        let up = rng.random::<f64>() * total < r.emission as f64;
        if up {
            state.m += 1;
            state.n -= 1;
        } else {
            state.m -= 1;
            state.n += 1;
        }
        assert_eq!(state.m + state.n, atoms);
        (hold, up)
    };

    for _ in 0..burn_in {
        step(&mut state, rng);
    }

    let mut occupancy = vec![0.0; atoms + 1];
    let mut ups = vec![0; atoms + 1];
    let mut downs = vec![0; atoms + 1];
    let mut binner = opts.bin.map(|width| Binner {
        width,
        edge: width,
        acc: 0.0,
        out: Vec::new(),
    });
    let mut time = 0.0;
    for _ in 0..opts.jumps {
        let m = state.m;
        let (hold, up) = step(&mut state, rng);
        occupancy[m] += hold;
        if up {
            ups[m] += 1;
        } else {
            downs[m] += 1;
        }
        if let Some(b) = binner.as_mut() {
            b.hold(m as f64, time, hold);
        }
        time += hold;
    }
    Ok(Simulation {
        atoms,
        total_time: occupancy.iter().sum(),
        occupancy,
        ups,
        downs,
        path: binner.map(|b| b.out).unwrap_or_default(),
        final_state: state,
    })
}

/// Independent trajectories, run `r` on stream `r` of `(seed, "cavity")`.
pub fn simulate_ensemble(
    atoms: usize,
    opts: &SimOptions,
    runs: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Simulation>> {
    let streams = Streams::new(seed, "cavity");
    exec.map(runs, |r| simulate(atoms, opts, &mut streams.rng(r as u64)))
        .into_iter()
        .collect()
}

/// Time-weighted `pr(m)` pooled over several trajectories.
pub fn pooled_distribution(sims: &[Simulation]) -> Vec<f64> {
    let len = sims.iter().map(|s| s.occupancy.len()).max().unwrap_or(0);
    let mut occ = vec![0.0; len];
    let mut total = 0.0;
    for s in sims {
        for (o, t) in occ.iter_mut().zip(&s.occupancy) {
            *o += t;
        }
        total += s.total_time;
    }
    occ.iter().map(|t| t / total).collect()
}

/// `(1/2) sum |p - q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    (0..len)
        .map(|i| (p.get(i).unwrap_or(&0.0) - q.get(i).unwrap_or(&0.0)).abs())
        .sum::<f64>()
        / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn edge_rates() {
        let r = jump_rates(CavityState::initial(5), 5).unwrap();
        assert_eq!(
            r,
            JumpRates {
                emission: 5,
                absorption: 0
            }
        );
        let full = jump_rates(CavityState::with_photons(5, 5).unwrap(), 5).unwrap();
        assert_eq!(full.emission, 0);
        assert!(jump_rates(CavityState { m: 1, n: 1 }, 5).is_err());
    }

    #[test]
    fn bins_average_the_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let opts = SimOptions {
            bin: Some(0.01),
            ..SimOptions::new(20_000)
        };
        let sim = simulate(10, &opts, &mut rng).unwrap();
        assert_eq!(sim.path.len(), (sim.total_time / 0.01) as usize);
        let covered = sim.path.len() as f64 * 0.01;
        let path_mean = sim.path.iter().sum::<f64>() * 0.01 / covered;
        let occ_mean: f64 = sim
            .distribution()
            .iter()
            .enumerate()
            .map(|(m, p)| m as f64 * p)
            .sum();
        assert!((path_mean - occ_mean).abs() < 0.05);
    }
}
