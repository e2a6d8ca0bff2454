//! Bi-complex numbers `a + b i1 + c i2 + d j` with `i1^2 = i2^2 = -1`,
//! `i1 i2 = i2 i1 = j` and `j^2 = 1`.
//!
//! `i1` carries the optical carrier (`i1 = -i`, `p1 = i1 omega`) and `i2` the
//! baseband modulation (`p2 = i2 Omega`).

use std::ops::{Add, Mul, Neg, Sub};

use crate::{Complex64, MathError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BiComplex {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl BiComplex {
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I1: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const I2: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn real(x: f64) -> Self {
        Self::new(x, 0.0, 0.0, 0.0)
    }

    /// `a - b i1 - c i2 + d j`; multiplying by it leaves `A + B j`.
    pub fn conj_both(self) -> Self {
        Self::new(self.a, -self.b, -self.c, self.d)
    }

    /// `(A, B) = (a^2 + b^2 + c^2 + d^2, 2(ad - bc))`.
    pub fn invariants(self) -> (f64, f64) {
        let Self { a, b, c, d } = self;
        (a * a + b * b + c * c + d * d, 2.0 * (a * d - b * c))
    }

    pub fn is_invertible(self) -> bool {
        let (a, b) = self.invariants();
        a != b && a != -b
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.a, k * self.b, k * self.c, k * self.d)
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Add for BiComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for BiComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for BiComplex {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for BiComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        bicomplex_multiply(self, o)
    }
}

pub fn bicomplex_multiply(u: BiComplex, v: BiComplex) -> BiComplex {
    BiComplex::new(
        u.a * v.a - u.b * v.b - u.c * v.c + u.d * v.d,
        u.a * v.b + u.b * v.a - u.c * v.d - u.d * v.c,
        u.a * v.c + u.c * v.a - u.b * v.d - u.d * v.b,
        u.a * v.d + u.d * v.a + u.b * v.c + u.c * v.b,
    )
}

/// `u^{-1} = conj_both(u) (A - B j) / (A^2 - B^2)`, evaluated on the
/// idempotents `(1 +- j)/2`, where `u` splits into the ordinary complex
/// numbers `z1 = (a + d) + (b - c) i` and `z2 = (a - d) + (b + c) i` with
/// `|z1|^2 = A + B` and `|z2|^2 = A - B`. Inverting `z1` and `z2` separately
/// avoids forming `A^2 - B^2`, which cancels badly when `|B|` is close to `A`.
pub fn bicomplex_invert(u: BiComplex) -> Result<BiComplex> {
    let (a, b) = u.invariants();
    if !u.is_invertible() {
        return Err(MathError::NotInvertible { a, b });
    }
    let z1 = Complex64::new(u.a + u.d, u.b - u.c);
    let z2 = Complex64::new(u.a - u.d, u.b + u.c);
    if z1 == Complex64::new(0.0, 0.0) || z2 == Complex64::new(0.0, 0.0) {
        return Err(MathError::NotInvertible { a, b });
    }
    let (w1, w2) = (z1.inv(), z2.inv());
    Ok(BiComplex::new(
        0.5 * (w1.re + w2.re),
        0.5 * (w1.im + w2.im),
        0.5 * (w2.im - w1.im),
        0.5 * (w1.re - w2.re),
    ))
}

/// Horner evaluation of a real polynomial (ascending coefficients) at a
/// bi-complex argument.
pub fn eval_poly(coeffs: &[f64], p: BiComplex) -> BiComplex {
    coeffs
        .iter()
        .rev()
        .fold(BiComplex::default(), |acc, &c| acc * p + BiComplex::real(c))
}

/// Response `Y(p1 + p2) V` of a linear system with rational admittance
/// `Y = num / den` to the modulated source `V`, with `p1 = i1 omega` and
/// `p2 = i2 Omega`.
pub fn modulated_response(
    num: &[f64],
    den: &[f64],
    omega: f64,
    big_omega: f64,
    v: BiComplex,
) -> Result<BiComplex> {
    let p = BiComplex::new(0.0, omega, big_omega, 0.0);
    let y = eval_poly(num, p) * bicomplex_invert(eval_poly(den, p))?;
    Ok(y * v)
}
