//! Cosine-transform pair between the pair correlation and the relative noise:
//!
//! ```text
//! N(Omega)   = 2 int_0^inf (g(tau) - 1) cos(Omega tau) dtau
//! g(tau) - 1 = (1/pi) int_0^inf N(Omega) cos(Omega tau) dOmega
//! ```
//!
//! On a grid `tau_i = i dtau`, `i = 0..=M`, the trapezoid rule evaluated at
//! `Omega_k = pi k / (M dtau)` is a type-I discrete cosine transform, and the
//! matching inverse on the `Omega_k` grid returns the samples exactly.

/// Samples on a uniform grid plus a flag raised when the input had not
/// settled to its asymptote by the end of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformed {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub insufficient_decay: bool,
}

/// Tail tolerance for the decay warning.
pub const DECAY_TOLERANCE: f64 = 1e-3;

fn dct1(x: &[f64]) -> Vec<f64> {
    let m = x.len() - 1;
    let w = |i: usize| if i == 0 || i == m { 0.5 } else { 1.0 };
    (0..=m)
        .map(|k| {
            (0..=m)
                .map(|i| {
                    // reduce i k mod 2M before scaling to keep the phase exact
                    let phase = ((i * k) % (2 * m)) as f64 * std::f64::consts::PI / m as f64;
                    w(i) * x[i] * phase.cos()
                })
                .sum()
        })
        .collect()
}

fn check_grid(samples: &[f64], step: f64) {
    assert!(samples.len() >= 2, "need at least two samples");
    assert!(step > 0.0, "grid step must be positive");
}

/// `N(Omega_k)` from `g(i dtau)`, `i = 0..=M`.
pub fn noise_from_correlation(dtau: f64, g: &[f64]) -> Transformed {
    check_grid(g, dtau);
    let m = g.len() - 1;
    let excess: Vec<f64> = g.iter().map(|v| v - 1.0).collect();
    let values = dct1(&excess).into_iter().map(|v| 2.0 * dtau * v).collect();
    Transformed {
        grid: (0..=m)
            .map(|k| std::f64::consts::PI * k as f64 / (m as f64 * dtau))
            .collect(),
        values,
        insufficient_decay: excess[m].abs() > DECAY_TOLERANCE,
    }
}

/// `g(tau_i)` from `N(k dOmega)`, `k = 0..=M`. The tail check compares the
/// last sample with `asymptote` (for example `-1 / D`).
pub fn correlation_from_noise(domega: f64, noise: &[f64], asymptote: f64) -> Transformed {
    check_grid(noise, domega);
    let m = noise.len() - 1;
    let values = dct1(noise)
        .into_iter()
        .map(|v| 1.0 + domega / std::f64::consts::PI * v)
        .collect();
    Transformed {
        grid: (0..=m)
            .map(|i| std::f64::consts::PI * i as f64 / (m as f64 * domega))
            .collect(),
        values,
        insufficient_decay: (noise[m] - asymptote).abs() > DECAY_TOLERANCE,
    }
}

/// Trapezoid evaluation of `N(Omega)` at arbitrary frequencies.
pub fn noise_at(dtau: f64, g: &[f64], omegas: &[f64]) -> Vec<f64> {
    check_grid(g, dtau);
    let m = g.len() - 1;
    omegas
        .iter()
        .map(|&w| {
            let s: f64 = g
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let wt = if i == 0 || i == m { 0.5 } else { 1.0 };
                    wt * (v - 1.0) * (w * i as f64 * dtau).cos()
                })
                .sum();
            2.0 * dtau * s
        })
        .collect()
}

/// Midpoint-rule `N(Omega)` from a histogram `g_b` on bins `[b w, (b+1) w)`,
/// with the error propagated from independent per-bin errors.
pub fn noise_from_histogram(
    bin: f64,
    g: &[f64],
    stderr: &[f64],
    omegas: &[f64],
) -> Vec<(f64, f64)> {
    omegas
        .iter()
        .map(|&w| {
            let (mut v, mut var) = (0.0, 0.0);
            for (b, (gb, sb)) in g.iter().zip(stderr).enumerate() {
                let c = (w * (b as f64 + 0.5) * bin).cos();
                v += (gb - 1.0) * c;
                var += (sb * c).powi(2);
            }
            (2.0 * bin * v, 2.0 * bin * var.sqrt())
        })
        .collect()
}
