//! Waiting-time densities and their Laplace-domain algebra.
//!
//! A [`RenewalLaw`] is a finite sum of terms `weight * t^power * exp(pole * t)`.
//! Plain exponential sums (`power = 0`) come out of Heaviside inversion; the
//! polynomial factors show up when the renewal correlation has a repeated pole,
//! or for the confluent waiting-time law at critical damping.
//!
//! Laplace transform of one term: `weight * k! / (p - pole)^(k+1)`.

use num_complex::Complex64;

use crate::poly::{eval_asc, poly_roots, ComplexRoots};
use crate::{MathError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub weight: Complex64,
    pub pole: Complex64,
    pub power: u32,
}

impl Term {
    pub fn exp(weight: Complex64, pole: Complex64) -> Self {
        Self {
            weight,
            pole,
            power: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RenewalLaw {
    pub terms: Vec<Term>,
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

impl RenewalLaw {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    /// `rate * exp(-rate t)`.
    pub fn exponential(rate: f64) -> Self {
        Self::new(vec![Term::exp(rate.into(), (-rate).into())])
    }

    pub fn value_complex(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| term.weight * t.powi(term.power as i32) * (term.pole * t).exp())
            .sum()
    }

    /// `w(t)`; the imaginary part cancels between conjugate terms.
    pub fn value(&self, t: f64) -> f64 {
        self.value_complex(t).re
    }

    /// `w(p)`.
    pub fn laplace(&self, p: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| term.weight * factorial(term.power) / (p - term.pole).powu(term.power + 1))
            .sum()
    }

    /// `w(p = 0)`, the total mass over `[0, inf)`. Constant terms (pole at the
    /// origin) are excluded since they do not integrate.
    pub fn total_mass(&self) -> f64 {
        self.decaying()
            .map(|term| term.weight * factorial(term.power) / (-term.pole).powu(term.power + 1))
            .sum::<Complex64>()
            .re
    }

    /// `-dw/dp` at `p = 0`.
    pub fn mean(&self) -> f64 {
        self.decaying()
            .map(|term| term.weight * factorial(term.power + 1) / (-term.pole).powu(term.power + 2))
            .sum::<Complex64>()
            .re
    }

    /// Sum of the weights on the pole at the origin: the `t -> inf` limit of a
    /// correlation built by [`renewal_correlation`].
    pub fn limit(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.pole.norm() == 0.0 && t.power == 0)
            .map(|t| t.weight.re)
            .sum()
    }

    fn decaying(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter().filter(|t| t.pole.norm() != 0.0)
    }

    /// `int_t^inf w(s) ds`, from the recursion
    /// `J_k = -t^k e^{pole t}/pole - (k/pole) J_{k-1}`.
    pub fn survival(&self, t: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for term in self.decaying() {
            let lam = term.pole;
            let e = (lam * t).exp();
            let mut j = -e / lam;
            for k in 1..=term.power {
                j = -t.powi(k as i32) * e / lam - (f64::from(k) / lam) * j;
            }
            acc += term.weight * j;
        }
        acc.re
    }

    pub fn cdf(&self, t: f64) -> f64 {
        1.0 - self.survival(t)
    }

    /// Solves `survival(t) = u` for `u` in `(0, 1]`: inverse-CDF sampling.
    pub fn survival_quantile(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return 0.0;
        }
        let mut lo = 0.0;
        let mut hi = self.mean().max(1e-12);
        while self.survival(hi) > u {
            lo = hi;
            hi *= 2.0;
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.survival(t) - u;
            if f > 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            if f.abs() < 1e-15 || hi - lo <= 1e-14 * hi {
                break;
            }
            let w = self.value(t);
            let newton = t + f / w;
            t = if w > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        t
    }

    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let mass = self.total_mass();
        if (mass - 1.0).abs() > tol || !mass.is_finite() {
            return Err(MathError::NotNormalized(mass));
        }
        Ok(())
    }
}

/// `sum_k exp(p_k t) / f'(p_k)` for `f(p) = prod (p - p_k)`, times `numerator`.
pub fn heaviside_invert(roots: &ComplexRoots, numerator: Complex64) -> Result<RenewalLaw> {
    let scale = roots.max_modulus();
    for (i, a) in roots.iter().enumerate() {
        for b in roots.roots.iter().skip(i + 1) {
            if (a - b).norm() <= 1e-8 * scale {
                return Err(MathError::RepeatedRoot(*a, *b));
            }
        }
    }
    let terms = roots
        .iter()
        .enumerate()
        .map(|(k, &pk)| {
            let fprime: Complex64 = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &pj)| pk - pj)
                .product();
            Term::exp(numerator / fprime, pk)
        })
        .collect();
    Ok(RenewalLaw::new(terms))
}

/// Average waiting time `<t> = -dw/dp (0)`.
pub fn mean_waiting_time(w: &RenewalLaw) -> f64 {
    w.mean()
}

/// Coefficients of `(p - r)^m` in ascending order.
fn binomial_poly(r: Complex64, m: u32) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..m {
        c = mul_linear(&c, r);
    }
    c
}

fn mul_linear(c: &[Complex64], r: Complex64) -> Vec<Complex64> {
    let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
    for (k, &ck) in c.iter().enumerate() {
        next[k + 1] += ck;
        next[k] -= ck * r;
    }
    next
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &mut Vec<Complex64>, b: &[Complex64]) {
    if a.len() < b.len() {
        a.resize(b.len(), Complex64::new(0.0, 0.0));
    }
    for (x, &y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// Coefficients of `c(r + u)` in powers of `u`.
fn taylor_shift(c: &[Complex64], r: Complex64) -> Vec<Complex64> {
    let mut c = c.to_vec();
    let n = c.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let add = r * c[j + 1];
            c[j] += add;
        }
    }
    c
}

/// First `m` coefficients of the power series `a / b`.
fn series_div(a: &[Complex64], b: &[Complex64], m: usize) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or(zero);
    let mut out = vec![zero; m];
    for k in 0..m {
        let mut acc = get(a, k);
        for j in 0..k {
            acc -= out[j] * get(b, k - j);
        }
        out[k] = acc / b[0];
    }
    out
}

/// Groups terms whose poles coincide. Returns `(pole, multiplicity, terms)`.
fn group_poles(law: &RenewalLaw) -> Vec<(Complex64, u32, Vec<Term>)> {
    let scale = law
        .terms
        .iter()
        .map(|t| t.pole.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut groups: Vec<(Complex64, u32, Vec<Term>)> = Vec::new();
    for &term in &law.terms {
        match groups
            .iter_mut()
            .find(|g| (g.0 - term.pole).norm() <= 1e-13 * scale)
        {
            Some(g) => {
                g.1 = g.1.max(term.power + 1);
                g.2.push(term);
            }
            None => groups.push((term.pole, term.power + 1, vec![term])),
        }
    }
    groups
}

/// Partial fractions of `num / den` given the clustered roots of `den`.
fn partial_fractions(
    num: &[Complex64],
    den: &[Complex64],
    clusters: &[(Complex64, u32)],
) -> Vec<Term> {
    let lead = *den.last().expect("non-empty denominator");
    let mut terms = Vec::new();
    for (ci, &(r, m)) in clusters.iter().enumerate() {
        let m_us = m as usize;
        let nser = taylor_shift(num, r);
        // Q(r + u) = lead * prod over the other clusters of (r - r' + u)^m'
        let mut qser = vec![lead];
        for (cj, &(r2, m2)) in clusters.iter().enumerate() {
            if cj == ci {
                continue;
            }
            for _ in 0..m2 {
                qser = mul_linear(&qser, r2 - r);
                qser.truncate(m_us);
            }
        }
        let h = series_div(&nser, &qser, m_us);
        for j in 0..m {
            let c = h[(m - 1 - j) as usize];
            terms.push(Term {
                weight: c / factorial(j),
                pole: r,
                power: j,
            });
        }
    }
    terms
}

/// Clusters numerically repeated roots and averages each cluster.
fn cluster_roots(roots: &[Complex64], rel_tol: f64) -> Vec<(Complex64, u32)> {
    let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max).max(1.0);
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![roots[i]];
        used[i] = true;
        for j in i + 1..roots.len() {
            if !used[j] && (roots[i] - roots[j]).norm() < rel_tol * scale {
                members.push(roots[j]);
                used[j] = true;
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push((mean, members.len() as u32));
    }
    out
}

/// Event density `G(t)` of the renewal process with waiting-time law `w`:
/// the inverse transform of `w(p) / (1 - w(p))`.
///
/// The result has a pole at the origin whose weight is `G(inf) = 1 / <t>`.
/// Repeated poles of `G` (they occur, e.g., for the Rabi law at `gamma = 2`)
/// are resolved into `t^k exp(pole t)` terms.
pub fn renewal_correlation(w: &RenewalLaw) -> Result<RenewalLaw> {
    w.check_normalized(1e-6)?;
    let groups = group_poles(w);
    // w(p) = N(p) / D(p) with D = prod (p - pole)^m
    let mut den = vec![Complex64::new(1.0, 0.0)];
    for g in &groups {
        den = poly_mul(&den, &binomial_poly(g.0, g.1));
    }
    let mut num = vec![Complex64::new(0.0, 0.0)];
    for (gi, g) in groups.iter().enumerate() {
        let mut rest = vec![Complex64::new(1.0, 0.0)];
        for (gj, other) in groups.iter().enumerate() {
            if gj != gi {
                rest = poly_mul(&rest, &binomial_poly(other.0, other.1));
            }
        }
        for term in &g.2 {
            let k = term.power;
            let piece = binomial_poly(g.0, g.1 - k - 1);
            let scaled: Vec<Complex64> = poly_mul(&piece, &rest)
                .into_iter()
                .map(|c| c * term.weight * factorial(k))
                .collect();
            poly_add(&mut num, &scaled);
        }
    }
    // G = N / (D - N)
    let mut diff = den.clone();
    for (d, &n) in diff.iter_mut().zip(&num) {
        *d -= n;
    }
    let mut roots = poly_roots(&diff);
    // normalization puts one root at the origin; pin it there exactly
    if let Some(i0) = (0..roots.len()).min_by(|&a, &b| roots[a].norm().total_cmp(&roots[b].norm()))
    {
        roots[i0] = Complex64::new(0.0, 0.0);
    }
    let clusters = cluster_roots(&roots, 1e-6);
    let mut terms = partial_fractions(&num, &diff, &clusters);
    // exact zero weights can appear from cancelling numerators; drop them
    terms.retain(|t| t.weight.norm() > 0.0);
    Ok(RenewalLaw::new(terms))
}

/// Evaluates a polynomial with real ascending coefficients at a complex point.
pub fn eval_real_poly(coeffs: &[f64], p: Complex64) -> Complex64 {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| x.into()).collect();
    eval_asc(&c, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::solve_cubic;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn single_root_gives_exponential() {
        let law = heaviside_invert(&ComplexRoots::new(vec![c(-1.0)]), c(1.0)).unwrap();
        for t in [0.0, 0.5, 3.0] {
            assert!((law.value(t) - (-t).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn roots_zero_and_minus_one() {
        let law = heaviside_invert(&ComplexRoots::new(vec![c(0.0), c(-1.0)]), c(1.0)).unwrap();
        for t in [0.0, 0.5, 3.0] {
            assert!((law.value(t) - (1.0 - (-t).exp())).abs() < 1e-15);
        }
    }

    #[test]
    fn repeated_roots_rejected() {
        let r = ComplexRoots::new(vec![c(-1.0), c(-1.0 - 1e-12)]);
        assert!(matches!(
            heaviside_invert(&r, c(1.0)),
            Err(MathError::RepeatedRoot(..))
        ));
    }

    #[test]
    fn rabi_law_at_gamma_two() {
        let roots = solve_cubic(6.0, 9.0, 2.0);
        let law = heaviside_invert(&roots, c(2.0)).unwrap();
        let s3 = 3f64.sqrt();
        for i in 0..50 {
            let t = 0.2 * i as f64;
            let want =
                ((-(2.0 - s3) * t).exp() + (-(2.0 + s3) * t).exp() - 2.0 * (-2.0 * t).exp()) / 3.0;
            assert!((law.value(t) - want).abs() < 1e-14);
        }
        assert!((law.total_mass() - 1.0).abs() < 1e-13);
        assert!((1.0 / law.mean() - 2.0 / 9.0).abs() < 1e-13);
    }

    #[test]
    fn poisson_correlation_is_flat() {
        let g = renewal_correlation(&RenewalLaw::exponential(1.0)).unwrap();
        for t in [0.0, 0.1, 1.0, 10.0] {
            assert!((g.value(t) - 1.0).abs() < 1e-13, "{}", g.value(t));
        }
        assert!((g.limit() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn double_pole_correlation() {
        let law = heaviside_invert(&solve_cubic(6.0, 9.0, 2.0), c(2.0)).unwrap();
        let g = renewal_correlation(&law).unwrap();
        for i in 0..40 {
            let t = 0.1 * i as f64;
            let want = 2.0 * (1.0 - (1.0 + 3.0 * t) * (-3.0 * t).exp()) / 9.0;
            assert!(
                (g.value(t) - want).abs() < 1e-9,
                "t={t} {} {}",
                g.value(t),
                want
            );
        }
        assert!((g.limit() - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_law_rejected() {
        let law = RenewalLaw::new(vec![Term::exp(c(2.0), c(-1.0))]);
        assert!(matches!(
            renewal_correlation(&law),
            Err(MathError::NotNormalized(_))
        ));
    }

    #[test]
    fn survival_and_quantile_agree() {
        let law = RenewalLaw::new(vec![
            Term {
                weight: c(0.5),
                pole: c(-1.0),
                power: 1,
            },
            Term::exp(c(0.25), c(-0.5)),
        ]);
        // 0.5 * 1 + 0.25 / 0.5 = 1
        assert!((law.total_mass() - 1.0).abs() < 1e-15);
        assert!((law.survival(0.0) - 1.0).abs() < 1e-15);
        for u in [0.9, 0.5, 0.1, 1e-6] {
            let t = law.survival_quantile(u);
            assert!((law.survival(t) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn taylor_shift_matches_direct() {
        let p = [c(1.0), c(-2.0), c(0.5), c(3.0)];
        let r = Complex64::new(0.3, -0.7);
        let shifted = taylor_shift(&p, r);
        let u = Complex64::new(0.11, 0.05);
        assert!((eval_asc(&shifted, u) - eval_asc(&p, r + u)).norm() < 1e-14);
    }
}
