//! Roots of quadratics and cubics, plus a small general-degree root finder used
//! internally by the renewal algebra.

use num_complex::Complex64;

use crate::{MathError, Result};

/// Roots ordered by real part (descending), ties broken by imaginary part
/// (descending).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRoots {
    pub roots: Vec<Complex64>,
}

impl ComplexRoots {
    pub fn new(mut roots: Vec<Complex64>) -> Self {
        roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        Self { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.roots.iter()
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }
}

/// Evaluates a polynomial given by ascending coefficients.
pub fn eval_asc(coeffs: &[Complex64], p: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * p + c)
}

fn eval_with_derivative(coeffs: &[Complex64], p: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut f = zero;
    let mut df = zero;
    for &c in coeffs.iter().rev() {
        df = df * p + f;
        f = f * p + c;
    }
    (f, df)
}

/// A few Newton steps, kept only while they reduce the residual.
fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut best = eval_asc(coeffs, z).norm();
    for _ in 0..4 {
        let (f, df) = eval_with_derivative(coeffs, z);
        if df.norm() == 0.0 || f.norm() == 0.0 {
            break;
        }
        let cand = z - f / df;
        let r = eval_asc(coeffs, cand).norm();
        if r < best {
            best = r;
            z = cand;
        } else {
            break;
        }
    }
    z
}

/// Roots of `a p^2 + b p + c`.
///
/// The root of larger modulus comes from the cancellation-free half of the
/// textbook formula and the other one from the product of roots `c / a`.
pub fn solve_quadratic(a: Complex64, b: Complex64, c: Complex64) -> Result<ComplexRoots> {
    if a.norm() == 0.0 {
        return Err(MathError::DegenerateLeadingCoefficient);
    }
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign so that b and the root of the discriminant add up
    let sgn = if (b.conj() * disc).re >= 0.0 {
        1.0
    } else {
        -1.0
    };
    let q = -0.5 * (b + sgn * disc);
    let (r1, r2) = if q.norm() == 0.0 {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (q / a, c / q)
    };
    Ok(ComplexRoots::new(vec![r1, r2]))
}

/// Real-coefficient convenience wrapper around [`solve_quadratic`].
pub fn solve_quadratic_real(a: f64, b: f64, c: f64) -> Result<ComplexRoots> {
    solve_quadratic(a.into(), b.into(), c.into())
}

/// Roots of the monic cubic `p^3 + a2 p^2 + a1 p + a0` by Cardano's formulas.
///
/// With `q = a1/3 - a2^2/9`, `r = a1 a2/6 - a0/2 - a2^3/27`, `s = sqrt(q^3 + r^2)`
/// the roots are
///
/// ```text
/// p1 = s1 + s2 - a2/3
/// p2 = s1 e^{2i pi/3} - s2 e^{i pi/3} - a2/3
/// p3 = -s1 e^{i pi/3} + s2 e^{2i pi/3} - a2/3
/// s1 = (s - r)^{1/3} e^{i pi/3},  s2 = (s + r)^{1/3} e^{2i pi/3}
/// ```
///
/// The phase factors put a minus sign on each cube, so `s1^3 + s2^3 = 2r`
/// requires `s - r` under `s1` and `s + r` under `s2`. With the two swapped,
/// the formulas return the roots of the cubic with `r` negated.
///
/// Branch rule: the principal cube root is taken for whichever of `s + r`,
/// `s - r` has the larger modulus, and the other cube root is fixed by
/// `(s + r)^{1/3} (s - r)^{1/3} = q`. When `s +- r > 0` this is the ordinary
/// pair of real cube roots. Each root then gets a few Newton polishing steps
/// and, since the coefficients are real, complex roots are snapped to exact
/// conjugate pairs.
pub fn solve_cubic(a2: f64, a1: f64, a0: f64) -> ComplexRoots {
    let q = a1 / 3.0 - a2 * a2 / 9.0;
    let r = a1 * a2 / 6.0 - a0 / 2.0 - a2.powi(3) / 27.0;
    let s = Complex64::new(q.powi(3) + r * r, 0.0).sqrt();
    let plus = s + r;
    let minus = s - r;
    let qc = Complex64::new(q, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (cp, cm) = if plus.norm() >= minus.norm() {
        let cp = principal_cbrt(plus);
        let cm = if cp.norm() == 0.0 { zero } else { qc / cp };
        (cp, cm)
    } else {
        let cm = principal_cbrt(minus);
        let cp = if cm.norm() == 0.0 { zero } else { qc / cm };
        (cp, cm)
    };
    let e1 = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let e2 = Complex64::from_polar(1.0, 2.0 * std::f64::consts::FRAC_PI_3);
    let s1 = cm * e1;
    let s2 = cp * e2;
    let shift = Complex64::new(a2 / 3.0, 0.0);
    let raw = [
        s1 + s2 - shift,
        s1 * e2 - s2 * e1 - shift,
        -s1 * e1 + s2 * e2 - shift,
    ];
    let coeffs = [a0, a1, a2, 1.0].map(|c| Complex64::new(c, 0.0));
    let mut roots: Vec<Complex64> = raw.iter().map(|&z| polish(&coeffs, z)).collect();
    snap_real_cubic(&mut roots, q.powi(3) + r * r);
    ComplexRoots::new(roots)
}

fn principal_cbrt(z: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        return z;
    }
    Complex64::from_polar(z.norm().cbrt(), z.arg() / 3.0)
}

/// A real cubic has either three real roots (`q^3 + r^2 <= 0`) or one real
/// root and a conjugate pair.
fn snap_real_cubic(roots: &mut [Complex64], disc: f64) {
    if disc <= 0.0 {
        for z in roots.iter_mut() {
            z.im = 0.0;
        }
        return;
    }
    let (ir, _) = roots
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.im.abs().total_cmp(&b.1.im.abs()))
        .expect("three roots");
    roots[ir].im = 0.0;
    let others: Vec<usize> = (0..3).filter(|&i| i != ir).collect();
    let (i, j) = (others[0], others[1]);
    let re = 0.5 * (roots[i].re + roots[j].re);
    let im = 0.5 * (roots[i].im.abs() + roots[j].im.abs());
    roots[i] = Complex64::new(re, im);
    roots[j] = Complex64::new(re, -im);
}

/// All roots of a polynomial with ascending complex coefficients, by the
/// Aberth-Ehrlich simultaneous iteration followed by Newton polishing.
pub(crate) fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    for z in c.iter_mut() {
        *z /= lead;
    }
    // Fujiwara-style radius for the initial circle
    let radius = (0..n)
        .map(|k| c[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (f, df) = eval_with_derivative(&c, z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / df;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                worst = worst.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z.into_iter().map(|r| polish(&c, r)).collect()
}
