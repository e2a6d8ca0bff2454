//! Stationary photon statistics of the isolated cavity.

use crate::{CavityError, Result};

/// Largest `N` whose weights and partition fit a `u128`.
pub const MAX_EXACT_ATOMS: usize = 127;

/// Number of ways `W(n)` of picking the `n` excited atoms out of `N`.
pub fn statistical_weight(atoms: usize, n: usize) -> Result<u128> {
    if atoms > MAX_EXACT_ATOMS {
        return Err(CavityError::TooManyAtoms {
            atoms,
            max: MAX_EXACT_ATOMS,
        });
    }
    if n > atoms {
        return Err(CavityError::OutOfRange { n, atoms });
    }
    let k = n.min(atoms - n) as u128;
    let mut w: u128 = 1;
    for i in 0..k {
        // exact at every step: w * (N - i) is divisible by i + 1
        w = w * (atoms as u128 - i) / (i + 1);
    }
    Ok(w)
}

/// `Z = sum_n W(n) = 2^N`.
pub fn partition(atoms: usize) -> Result<u128> {
    if atoms > MAX_EXACT_ATOMS {
        return Err(CavityError::TooManyAtoms {
            atoms,
            max: MAX_EXACT_ATOMS,
        });
    }
    Ok(1u128 << atoms)
}

/// `pr(m) = N! / (2^N m! (N - m)!)` for `m = 0..=N`, built in logarithms so
/// that large `N` does not overflow.
pub fn stationary_distribution(atoms: usize) -> Result<Vec<f64>> {
    if atoms == 0 {
        return Err(CavityError::NoAtoms);
    }
    let n = atoms as f64;
    let mut log = -n * std::f64::consts::LN_2;
    let mut pr = Vec::with_capacity(atoms + 1);
    for m in 0..=atoms {
        pr.push(log.exp());
        log += ((n - m as f64) / (m as f64 + 1.0)).ln();
    }
    Ok(pr)
}

/// Mean and variance of a table `pr(m)`, `m = 0, 1, ...`.
pub fn moments(pr: &[f64]) -> (f64, f64) {
    let total: f64 = pr.iter().sum();
    let mean = pr
        .iter()
        .enumerate()
        .map(|(m, p)| m as f64 * p)
        .sum::<f64>()
        / total;
    let var = pr
        .iter()
        .enumerate()
        .map(|(m, p)| (m as f64 - mean).powi(2) * p)
        .sum::<f64>()
        / total;
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_atoms() {
        let w: Vec<u128> = (0..=2).map(|n| statistical_weight(2, n).unwrap()).collect();
        assert_eq!(w, vec![1, 2, 1]);
        assert_eq!(partition(2).unwrap(), 4);
        let pr = stationary_distribution(2).unwrap();
        assert!((pr[0] - 0.25).abs() < 1e-15);
        assert_eq!(
            statistical_weight(2, 3),
            Err(CavityError::OutOfRange { n: 3, atoms: 2 })
        );
    }

    #[test]
    fn forty_atoms() {
        let pr = stationary_distribution(40).unwrap();
        let (mean, var) = moments(&pr);
        assert!((mean - 20.0).abs() < 1e-12);
        assert!((var - 10.0).abs() < 1e-11);
        assert!((pr[0] / 4f64.powi(-20) - 1.0).abs() < 1e-12);
    }
}
