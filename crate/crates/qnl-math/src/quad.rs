//! Globally adaptive 15-point Gauss-Kronrod quadrature.
//!
//! Infinite ranges are mapped onto finite ones (`x = a + t/(1-t)` and
//! `x = t/(1-t^2)`), so no truncation point has to be chosen; the Kronrod
//! nodes never touch the mapped endpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// nodes and weights to the digits of the standard tables
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-12,
            max_intervals: 20_000,
        }
    }
}

impl QuadOptions {
    pub fn tight() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_intervals: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        resk += WGK[j] * pair;
        if j % 2 == 1 {
            resg += WG[j / 2] * pair;
        }
    }
    (resk * h, ((resk - resg) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// `int_a^b f(x) dx` on a finite interval.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            converged: true,
        };
    }
    let (v, e) = kronrod(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a,
        b,
        value: v,
        error: e,
    });
    let (mut total, mut err) = (v, e);
    while err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        if heap.len() >= opts.max_intervals {
            return QuadResult {
                value: total,
                error: err,
                intervals: heap.len(),
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            heap.push(worst);
            return QuadResult {
                value: total,
                error: err,
                intervals: heap.len(),
                converged: false,
            };
        }
        let (v1, e1) = kronrod(&mut f, worst.a, mid);
        let (v2, e2) = kronrod(&mut f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed the drift of the running updates
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    QuadResult {
        value,
        error,
        intervals: heap.len(),
        converged: true,
    }
}

/// `int_a^inf f(x) dx`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    opts: QuadOptions,
) -> QuadResult {
    integrate(
        |t| {
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        },
        0.0,
        1.0,
        opts,
    )
}

/// `int_{-inf}^{inf} f(x) dx`.
pub fn integrate_real_line<F: FnMut(f64) -> f64>(mut f: F, opts: QuadOptions) -> QuadResult {
    integrate(
        |t| {
            let s = 1.0 - t * t;
            f(t / s) * (1.0 + t * t) / (s * s)
        },
        -1.0,
        1.0,
        opts,
    )
}

/// Sum of adaptive integrals over consecutive panels `[x_k, x_{k+1}]`, for
/// long oscillatory integrands where one global mapping would need too many
/// subdivisions.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    edges: &[f64],
    opts: QuadOptions,
) -> QuadResult {
    let mut out = QuadResult {
        value: 0.0,
        error: 0.0,
        intervals: 0,
        converged: true,
    };
    for w in edges.windows(2) {
        let r = integrate(&mut f, w[0], w[1], opts);
        out.value += r.value;
        out.error += r.error;
        out.intervals += r.intervals;
        out.converged &= r.converged;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_is_exact_for_degree_22() {
        for k in 0..=22 {
            let (v, _) = kronrod(&mut |x: f64| x.powi(k), -1.0, 1.0);
            let want = if k % 2 == 0 {
                2.0 / (k as f64 + 1.0)
            } else {
                0.0
            };
            assert!((v - want).abs() < 1e-14, "degree {k}: {v}");
        }
    }

    #[test]
    fn gauss_weights_sum_to_two() {
        let s: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lorentzian_over_real_line() {
        let r = integrate_real_line(|x| 1.0 / (1.0 + x * x), QuadOptions::tight());
        assert!(r.converged);
        assert!((r.value - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn exponential_tail() {
        let r = integrate_to_infinity(|x| (-x).exp(), 2.0, QuadOptions::tight());
        assert!((r.value - (-2f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn sharp_peak() {
        let eps = 1e-3;
        let r = integrate(
            |x| eps / (eps * eps + x * x),
            -1.0,
            1.0,
            QuadOptions::tight(),
        );
        let want = 2.0 * (1.0 / eps).atan();
        assert!((r.value - want).abs() < 1e-11);
    }
}
