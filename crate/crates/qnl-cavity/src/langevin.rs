//! Linearized fluctuations of the photon number.
//!
//! Around `m = N/2` the drift `N m - 2 m^2` relaxes `dm` at rate `N`, and
//! the jumps occur at total rate `R_e + R_a ~ N^2 / 2`, giving
//! `S(Omega) = (beta N^2 / 2) / (N^2 + Omega^2)` with `beta = 1`, and
//! variance `N / 4`, as the exact law requires.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::{CavityError, Result};

/// Double-sided spectral density of `dm(t)` at `omega`.
pub fn langevin_spectrum(atoms: usize, omega: f64) -> f64 {
    let n = atoms as f64;
    0.5 * n * n / (n * n + omega * omega)
}

/// `int S d Omega / 2 pi = N / 4`.
pub fn langevin_variance(atoms: usize) -> f64 {
    atoms as f64 / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub omega: f64,
    pub value: f64,
    pub stderr: f64,
}

/// Averaged periodogram of bin-averaged paths, split into segments of
/// `segment` bins of width `bin`, each with its own mean removed.
/// Returns the positive frequencies `2 pi k / (segment bin)`, `k >= 1`,
/// below the Nyquist frequency.
pub fn binned_spectrum(paths: &[Vec<f64>], bin: f64, segment: usize) -> Result<Vec<SpectrumPoint>> {
    if segment < 4 || !(bin > 0.0) {
        return Err(CavityError::Invalid(format!(
            "segment {segment}, bin {bin}"
        )));
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(segment);
    let half = segment / 2;
    let mut sum = vec![0.0; half];
    let mut sum_sq = vec![0.0; half];
    let mut count = 0usize;
    let mut buf = vec![Complex::new(0.0, 0.0); segment];
    for path in paths {
        for chunk in path.chunks_exact(segment) {
            let mean = chunk.iter().sum::<f64>() / segment as f64;
            for (b, x) in buf.iter_mut().zip(chunk) {
                *b = Complex::new(x - mean, 0.0);
            }
            fft.process(&mut buf);
            for k in 1..half {
                let p = buf[k].norm_sqr() * bin / segment as f64;
                sum[k] += p;
                sum_sq[k] += p * p;
            }
            count += 1;
        }
    }
    if count < 2 {
        return Err(CavityError::Invalid(format!(
            "need at least two segments of {segment} bins"
        )));
    }
    let c = count as f64;
    let span = segment as f64 * bin;
    Ok((1..half)
        .map(|k| {
            let mean = sum[k] / c;
            let var = (sum_sq[k] / c - mean * mean).max(0.0) * c / (c - 1.0);
            SpectrumPoint {
                omega: std::f64::consts::TAU * k as f64 / span,
                value: mean,
                stderr: (var / c).sqrt(),
            }
        })
        .collect())
}

/// A logarithmic band of periodogram points and the model averaged over
/// the same points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub value: f64,
    pub stderr: f64,
    pub model: f64,
}

impl Band {
    pub fn ratio(&self) -> f64 {
        self.value / self.model
    }
}

/// Splits `[lo, hi)` into `bands` logarithmic bands, skipping empty ones.
/// The model is averaged point by point, since a curved spectrum averaged
/// over a wide band differs from its value at the band centre.
pub fn log_band_means<F: Fn(f64) -> f64>(
    points: &[SpectrumPoint],
    lo: f64,
    hi: f64,
    bands: usize,
    model: F,
) -> Vec<Band> {
    let step = (hi / lo).ln() / bands as f64;
    (0..bands)
        .filter_map(|b| {
            let (a, z) = (
                lo * (step * b as f64).exp(),
                lo * (step * (b + 1) as f64).exp(),
            );
            let inside: Vec<&SpectrumPoint> = points
                .iter()
                .filter(|p| p.omega >= a && p.omega < z)
                .collect();
            if inside.is_empty() {
                return None;
            }
            let k = inside.len() as f64;
            Some(Band {
                omega_lo: a,
                omega_hi: z,
                value: inside.iter().map(|p| p.value).sum::<f64>() / k,
                stderr: inside
                    .iter()
                    .map(|p| p.stderr * p.stderr)
                    .sum::<f64>()
                    .sqrt()
                    / k,
                model: inside.iter().map(|p| model(p.omega)).sum::<f64>() / k,
            })
        })
        .collect()
}
