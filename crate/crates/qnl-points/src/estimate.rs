//! Second-order estimators over an ensemble of runs.
//!
//! Each estimator reduces a run to a short vector of additive statistics and
//! forms the final ratio from their ensemble means, with delete-one jackknife
//! errors over runs.

use qnl_ensemble::{jackknife, Execution};

use crate::{Ensemble, PointError, Result};

/// Fourier amplitudes `sum_k m_k exp(i Omega_n t_k)` at `Omega_n = 2 pi n / T`,
/// `n = n_lo..=n_hi`, returned as `|.|^2 / T`.
///
/// One `sincos` per event; higher harmonics follow by complex rotation.
pub fn periodogram(
    times: &[f64],
    marks: Option<&[f64]>,
    horizon: f64,
    n_lo: usize,
    n_hi: usize,
) -> Vec<f64> {
    assert!(n_lo <= n_hi, "empty harmonic range");
    let width = n_hi - n_lo + 1;
    let mut re = vec![0.0; width];
    let mut im = vec![0.0; width];
    for (k, &t) in times.iter().enumerate() {
        let m = marks.map_or(1.0, |m| m[k]);
        let frac = t / horizon;
        let (bs, bc) = (std::f64::consts::TAU * frac).sin_cos();
        let (zs, zc) = (std::f64::consts::TAU * (frac * n_lo as f64).fract()).sin_cos();
        let (mut zr, mut zi) = (m * zc, m * zs);
        for (r, i) in re.iter_mut().zip(im.iter_mut()) {
            *r += zr;
            *i += zi;
            let nr = zr * bc - zi * bs;
            zi = zr * bs + zi * bc;
            zr = nr;
        }
    }
    re.iter()
        .zip(&im)
        .map(|(r, i)| (r * r + i * i) / horizon)
        .collect()
}

/// `2 sum_{i=1..T} (1 - i/T) cos(2 pi i n / T) + 1`.
///
/// The expected periodogram of a unit lattice observed over `T` periods is
/// this sum times the lattice spectrum; it vanishes at every harmonic `n`
/// that is not a multiple of `T`, which is why the comb has no power between
/// its lines.
pub fn lattice_window_sum(periods: usize, n: usize) -> f64 {
    let t = periods as f64;
    let s: f64 = (1..=periods)
        .map(|i| {
            let phase = ((i * n) % periods) as f64 / t;
            (1.0 - i as f64 / t) * (std::f64::consts::TAU * phase).cos()
        })
        .sum();
    2.0 * s + 1.0
}

/// Ensemble periodogram at the harmonics `Omega_n = 2 pi n / T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub harmonics: Vec<usize>,
    pub omega: Vec<f64>,
    pub spectrum: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Per run: the periodogram values followed by `d(T) / T`.
    pub per_run: Vec<Vec<f64>>,
}

/// Relative noise `N(Omega) = S(Omega) / D^2 - 1 / D` at one harmonic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisePoint {
    pub omega: f64,
    pub value: f64,
    pub stderr: f64,
}

/// Binned pair correlation `g(tau)` on `[0, tau_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    pub bin: f64,
    pub g: Vec<f64>,
    pub stderr: Vec<f64>,
    pub pairs: Vec<u64>,
}

impl CorrelationEstimate {
    pub fn centers(&self) -> Vec<f64> {
        (0..self.g.len())
            .map(|b| (b as f64 + 0.5) * self.bin)
            .collect()
    }
}

/// Relative count variance `V(T') = <dd^2>/<d> - 1` for one window length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariancePoint {
    pub window: f64,
    pub value: f64,
    pub stderr: f64,
    pub windows: usize,
}

pub fn estimate_spectrum(ens: &Ensemble, n_lo: usize, n_hi: usize) -> Result<SpectrumEstimate> {
    estimate_spectrum_with(ens, None, n_lo, n_hi, Execution::from_env())
}

/// Periodogram of the (optionally marked) runs. `marks[r][k]` weights event
/// `k` of run `r`.
pub fn estimate_spectrum_with(
    ens: &Ensemble,
    marks: Option<&[Vec<f64>]>,
    n_lo: usize,
    n_hi: usize,
    exec: Execution,
) -> Result<SpectrumEstimate> {
    if n_lo == 0 || n_hi < n_lo {
        return Err(PointError::InvalidParameter(format!(
            "harmonics {n_lo}..={n_hi}"
        )));
    }
    if let Some(m) = marks {
        if m.len() != ens.runs.len() || m.iter().zip(&ens.runs).any(|(m, r)| m.len() != r.len()) {
            return Err(PointError::InvalidParameter(
                "marks do not match the runs".into(),
            ));
        }
    }
    let horizon = ens.horizon();
    let per_run: Vec<Vec<f64>> = exec.map(ens.runs.len(), |r| {
        let run = &ens.runs[r];
        let mut v = periodogram(
            run.times(),
            marks.map(|m| m[r].as_slice()),
            horizon,
            n_lo,
            n_hi,
        );
        v.push(run.rate());
        v
    });
    let width = n_hi - n_lo + 1;
    let (est, se) = jackknife(&per_run, |m| m[..width].to_vec());
    let harmonics: Vec<usize> = (n_lo..=n_hi).collect();
    Ok(SpectrumEstimate {
        omega: harmonics
            .iter()
            .map(|&n| std::f64::consts::TAU * n as f64 / horizon)
            .collect(),
        harmonics,
        spectrum: est,
        stderr: se,
        per_run,
    })
}

/// `N = S / D^2 - 1 / D` with the density `D` taken from the same runs.
pub fn relative_noise(s: &SpectrumEstimate) -> Result<Vec<NoisePoint>> {
    let width = s.harmonics.len();
    let (est, se) = jackknife(&s.per_run, |m| {
        let d = m[width];
        m[..width].iter().map(|x| x / (d * d) - 1.0 / d).collect()
    });
    if s.per_run.iter().map(|r| r[width]).sum::<f64>() == 0.0 {
        return Err(PointError::ZeroRate);
    }
    Ok((0..width)
        .map(|i| NoisePoint {
            omega: s.omega[i],
            value: est[i],
            stderr: se[i],
        })
        .collect())
}

/// Mean of `N(Omega_n)` over a block of harmonics, with its jackknife error.
pub fn band_noise(s: &SpectrumEstimate, from: usize, to: usize) -> Result<(f64, f64)> {
    let width = s.harmonics.len();
    let idx: Vec<usize> = (0..width)
        .filter(|&i| s.harmonics[i] >= from && s.harmonics[i] < to)
        .collect();
    if idx.is_empty() {
        return Err(PointError::InvalidParameter(format!(
            "no harmonics in [{from}, {to})"
        )));
    }
    let (est, se) = jackknife(&s.per_run, |m| {
        let d = m[width];
        let sum: f64 = idx.iter().map(|&i| m[i] / (d * d) - 1.0 / d).sum();
        vec![sum / idx.len() as f64]
    });
    Ok((est[0], se[0]))
}

pub fn estimate_g(ens: &Ensemble, bin: f64, tau_max: f64) -> Result<CorrelationEstimate> {
    estimate_g_with(ens, bin, tau_max, Execution::from_env())
}

/// Pair correlation from the histogram of forward differences.
///
/// Only first members with `t_i <= T - tau_max` are counted, so every pair
/// window lies inside the record and no edge correction is needed:
/// `g_b = <c_b> / (<n_1> D bin)`.
pub fn estimate_g_with(
    ens: &Ensemble,
    bin: f64,
    tau_max: f64,
    exec: Execution,
) -> Result<CorrelationEstimate> {
    let horizon = ens.horizon();
    if !(bin > 0.0 && tau_max >= bin && tau_max < horizon) {
        return Err(PointError::InvalidParameter(format!(
            "bin {bin}, tau_max {tau_max}, T {horizon}"
        )));
    }
    let nb = (tau_max / bin).floor() as usize;
    let reach = nb as f64 * bin;
    let per_run: Vec<Vec<f64>> = exec.map(ens.runs.len(), |r| {
        let t = ens.runs[r].times();
        let mut v = vec![0.0; nb + 2];
        let last = horizon - reach;
        let mut n1 = 0usize;
        for i in 0..t.len() {
            if t[i] > last {
                break;
            }
            n1 += 1;
            for &tj in &t[i + 1..] {
                let b = ((tj - t[i]) / bin) as usize;
                if b >= nb {
                    break;
                }
                v[b] += 1.0;
            }
        }
        v[nb] = n1 as f64;
        v[nb + 1] = ens.runs[r].rate();
        v
    });
    if per_run.iter().all(|v| v[nb + 1] == 0.0) {
        return Err(PointError::ZeroRate);
    }
    let (g, se) = jackknife(&per_run, |m| {
        let norm = m[nb] * m[nb + 1] * bin;
        m[..nb].iter().map(|c| c / norm).collect()
    });
    let pairs = (0..nb)
        .map(|b| per_run.iter().map(|v| v[b]).sum::<f64>() as u64)
        .collect();
    Ok(CorrelationEstimate {
        bin,
        g,
        stderr: se,
        pairs,
    })
}

pub fn estimate_variance_curve(ens: &Ensemble, windows: &[f64]) -> Result<Vec<VariancePoint>> {
    estimate_variance_curve_with(ens, windows, Execution::from_env())
}

/// Counts in consecutive windows `((j-1) T', j T']` tiling each run; the
/// pooled variance over all windows and runs gives `V(T')`.
pub fn estimate_variance_curve_with(
    ens: &Ensemble,
    windows: &[f64],
    exec: Execution,
) -> Result<Vec<VariancePoint>> {
    let horizon = ens.horizon();
    if let Some(&w) = windows.iter().find(|&&w| !(w > 0.0 && w <= horizon)) {
        return Err(PointError::InvalidParameter(format!(
            "window {w} outside (0, {horizon}]"
        )));
    }
    let per_run: Vec<Vec<f64>> = exec.map(ens.runs.len(), |r| {
        let t = ens.runs[r].times();
        let mut out = Vec::with_capacity(3 * windows.len());
        for &w in windows {
            let nw = (horizon / w).floor() as usize;
            let mut counts = vec![0u64; nw];
            for &x in t {
                let j = ((x / w).ceil() as usize).max(1) - 1;
                if j < nw {
                    counts[j] += 1;
                }
            }
            let s1: f64 = counts.iter().map(|&c| c as f64).sum();
            let s2: f64 = counts.iter().map(|&c| (c * c) as f64).sum();
            out.extend([s1, s2, nw as f64]);
        }
        out
    });
    let (v, se) = jackknife(&per_run, |m| {
        (0..windows.len())
            .map(|i| {
                let (s1, s2, n) = (m[3 * i], m[3 * i + 1], m[3 * i + 2]);
                let mean = s1 / n;
                let nt = n * per_run.len() as f64;
                // unbiased over the pooled window population
                let var = (s2 / n - mean * mean) * nt / (nt - 1.0);
                var / mean - 1.0
            })
            .collect()
    });
    if per_run
        .iter()
        .all(|v| v.iter().step_by(3).all(|&s| s == 0.0))
    {
        return Err(PointError::ZeroRate);
    }
    Ok(windows
        .iter()
        .enumerate()
        .map(|(i, &w)| VariancePoint {
            window: w,
            value: v[i],
            stderr: se[i],
            windows: (horizon / w).floor() as usize * ens.runs.len(),
        })
        .collect())
}
