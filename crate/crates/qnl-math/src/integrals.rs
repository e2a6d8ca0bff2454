//! Reference integrals with known closed forms, each paired with a quadrature
//! evaluation of its defining integral.

use std::f64::consts::PI;

use crate::quad::{integrate, integrate_real_line, integrate_to_infinity, QuadOptions};
use crate::{MathError, Result};

/// Index pairs `(m, n)` with a tabulated closed form for `I_mn`.
pub const TABULATED: [(u32, u32); 9] = [
    (1, 0),
    (1, 2),
    (2, 0),
    (2, 1),
    (3, 0),
    (3, 1),
    (3, 2),
    (3, 3),
    (3, 4),
];

/// Lorentzian weight `((g-1)/pi) / ((g-1)^2 + x^2)`; tends to a delta as `g -> 1`.
pub fn broadening_weight(g: f64, x: f64) -> f64 {
    let h = g - 1.0;
    (h / PI) / (h * h + x * x)
}

fn check_g(g: f64) -> Result<()> {
    if g > 1.0 && g.is_finite() {
        Ok(())
    } else {
        Err(MathError::Domain(format!("weight needs g > 1, got {g}")))
    }
}

/// Closed form of `I_mn = 8 (g^2 + y^2)^m int w(x - y) x^n / (1 + x^2)^m dx`.
pub fn reference_integral(m: u32, n: u32, g: f64, y: f64) -> Result<f64> {
    check_g(g)?;
    let (y2, y4) = (y * y, y.powi(4));
    let g2 = g * g;
    let g3 = g2 * g;
    let v = match (m, n) {
        (1, 0) => 8.0 * g,
        (1, 2) => 8.0 * y2 + 8.0 * g * (g - 1.0),
        (2, 0) => 4.0 * y2 * (g - 1.0) + 4.0 * g2 * (g + 1.0),
        (2, 1) => 8.0 * g * y,
        (3, 0) => {
            3.0 * (g - 1.0) * y4 + 6.0 * g * (g2 - 1.0) * y2 + g3 * (3.0 * g2 + 3.0 * g + 2.0)
        }
        (3, 1) => 2.0 * y * (y2 * (g - 1.0) + g2 * (g + 3.0)),
        (3, 2) => (g - 1.0) * y4 + 2.0 * g * (g2 + 3.0) * y2 + g3 * (g - 1.0) * (g + 2.0),
        (3, 3) => 2.0 * y * ((3.0 * g + 1.0) * y2 + 3.0 * g2 * (g - 1.0)),
        (3, 4) => {
            (3.0 * g + 5.0) * y4 + 6.0 * g * (g2 - 1.0) * y2 + g3 * (3.0 * g - 2.0) * (g - 1.0)
        }
        _ => return Err(MathError::UnsupportedIndex { m, n }),
    };
    Ok(v)
}

/// Quadrature of the defining integral of `I_mn`, for any `m >= 1`, `n <= 2m`.
pub fn reference_integral_quadrature(m: u32, n: u32, g: f64, y: f64) -> Result<f64> {
    check_g(g)?;
    if m == 0 || n > 2 * m {
        return Err(MathError::Domain(format!("I_{m}{n} diverges")));
    }
    let f = |x: f64| broadening_weight(g, x - y) * x.powi(n as i32) / (1.0 + x * x).powi(m as i32);
    // split at the Lorentzian centre so both halves see a smooth mapped integrand
    let opts = QuadOptions::tight();
    let right = integrate_to_infinity(f, y, opts).value;
    let left = integrate_to_infinity(|x| f(-x), -y, opts).value;
    Ok(8.0 * (g * g + y * y).powi(m as i32) * (left + right))
}

/// `int dx / (1 + x^2) = pi` by quadrature.
pub fn lorentz_integral_quadrature() -> f64 {
    integrate_real_line(|x| 1.0 / (1.0 + x * x), QuadOptions::tight()).value
}

/// Both integrals `(1/pi) int dx/((1 - a x^2)^2 + x^2)` and
/// `(1/pi) int a x^2 dx/((1 - a x^2)^2 + x^2)`; each equals 1 for `a > 0`.
///
/// For `a < 0` the first one is `1/sqrt(1 + 4|a|)` instead, so the identity
/// is restricted to positive `a`.
pub fn first_integral_quadrature(a: f64) -> Result<(f64, f64)> {
    if a <= 0.0 || !a.is_finite() {
        return Err(MathError::Domain(format!("identity needs a > 0, got {a}")));
    }
    let den = |x: f64| (1.0 - a * x * x).powi(2) + x * x;
    let opts = QuadOptions::tight();
    // the integrand peaks near x = 1/sqrt(a); split there
    let cuts = [0.0, 1.0 / a.sqrt()];
    let last = *cuts.last().expect("non-empty");
    let piece = |h: &dyn Fn(f64) -> f64| {
        let mut s = 0.0;
        for w in cuts.windows(2) {
            s += integrate(h, w[0], w[1], opts).value;
        }
        s + integrate_to_infinity(h, last, opts).value
    };
    let i1 = 2.0 * piece(&|x| 1.0 / den(x)) / PI;
    let i2 = 2.0 * piece(&|x| a * x * x / den(x)) / PI;
    Ok((i1, i2))
}

/// `(1/pi) int_0^inf sqrt(x) dx / ((x + 1)(x - a))`: `1/(1 + sqrt(-a))` for
/// `a < 0`, and the principal value `1/(1 + a)` for `a > 0`.
pub fn sqrt_gain_integral(a: f64) -> Result<f64> {
    if a == 0.0 || !a.is_finite() {
        return Err(MathError::Domain("sqrt-gain integral needs a != 0".into()));
    }
    Ok(if a < 0.0 {
        1.0 / (1.0 + (-a).sqrt())
    } else {
        1.0 / (1.0 + a)
    })
}

/// Quadrature twin of [`sqrt_gain_integral`], after `x = s^2` removes the
/// square-root endpoint. For `a > 0` the pole at `s = b = sqrt(a)` is handled
/// by subtracting the residue term on the symmetric interval `[0, 2b]`.
pub fn sqrt_gain_integral_quadrature(a: f64) -> Result<f64> {
    sqrt_gain_integral(a)?;
    let opts = QuadOptions::tight();
    let v = if a < 0.0 {
        integrate_to_infinity(|s| 2.0 * s * s / ((s * s + 1.0) * (s * s - a)), 0.0, opts).value
    } else {
        let b = a.sqrt();
        let h = |s: f64| 2.0 * s * s / ((s * s + 1.0) * (s + b));
        let hb = h(b);
        let near = integrate(
            |s| if s == b { 0.0 } else { (h(s) - hb) / (s - b) },
            0.0,
            2.0 * b,
            opts,
        )
        .value;
        let far = integrate_to_infinity(|s| h(s) / (s - b), 2.0 * b, opts).value;
        near + far
    };
    Ok(v / PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentz_is_pi() {
        assert!((lorentz_integral_quadrature() - PI).abs() < 1e-12);
    }

    #[test]
    fn tabulated_examples() {
        assert_eq!(reference_integral(1, 0, 2.0, 0.5).unwrap(), 16.0);
        assert_eq!(reference_integral(2, 1, 2.0, 0.5).unwrap(), 8.0);
        let q = reference_integral_quadrature(1, 0, 2.0, 0.5).unwrap();
        assert!((q - 16.0).abs() < 1e-9);
    }

    #[test]
    fn unsupported_index() {
        assert_eq!(
            reference_integral(2, 2, 2.0, 0.0),
            Err(MathError::UnsupportedIndex { m: 2, n: 2 })
        );
    }

    #[test]
    fn weight_needs_g_above_one() {
        assert!(reference_integral(1, 0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sqrt_gain_negative_a() {
        assert!((sqrt_gain_integral(-4.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let q = sqrt_gain_integral_quadrature(-4.0).unwrap();
        assert!((q - 1.0 / 3.0).abs() < 1e-10, "{q}");
    }

    #[test]
    fn sqrt_gain_principal_value() {
        for a in [0.25, 1.0, 3.0] {
            let q = sqrt_gain_integral_quadrature(a).unwrap();
            assert!((q - 1.0 / (1.0 + a)).abs() < 1e-9, "a={a}: {q}");
        }
    }

    #[test]
    fn first_integral_is_one() {
        for a in [0.3, 1.0, 5.0, 1e-3] {
            let (i1, i2) = first_integral_quadrature(a).unwrap();
            assert!((i1 - 1.0).abs() < 1e-9, "a={a}: {i1}");
            assert!((i2 - 1.0).abs() < 1e-9, "a={a}: {i2}");
        }
    }

    #[test]
    fn first_integral_negative_a_differs() {
        assert!(first_integral_quadrature(-2.0).is_err());
    }
}
