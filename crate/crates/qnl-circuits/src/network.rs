//! Series/parallel networks of `G`, `C` and `L` elements.
//!
//! For any such network driven by a potential `V`, the frequency derivative
//! of the input admittance obeys
//! `i V^2 dY/d omega = sum_k (C_k V_k^2 - L_k I_k^2)`
//! where `V_k`, `I_k` are the complex element potentials and currents and the
//! squares are complex squares, not moduli.

use qnl_math::Complex64;

use crate::{CircuitError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Network {
    Conductance(f64),
    Capacitance(f64),
    Inductance(f64),
    Series(Vec<Network>),
    Parallel(Vec<Network>),
}

impl Network {
    pub fn admittance(&self, omega: f64) -> Result<Complex64> {
        if omega == 0.0 {
            return Err(CircuitError::ZeroFrequency);
        }
        Ok(match self {
            Network::Conductance(g) => Complex64::new(*g, 0.0),
            Network::Capacitance(c) => Complex64::new(0.0, -c * omega),
            Network::Inductance(l) => Complex64::new(0.0, 1.0 / (l * omega)),
            Network::Parallel(parts) => {
                let mut y = Complex64::new(0.0, 0.0);
                for p in parts {
                    y += p.admittance(omega)?;
                }
                y
            }
            Network::Series(parts) => {
                let mut z = Complex64::new(0.0, 0.0);
                for p in parts {
                    z += p.admittance(omega)?.inv();
                }
                z.inv()
            }
        })
    }

    /// Adds `C_k V_k^2 - L_k I_k^2` of every element below `self`, with `v`
    /// the potential across `self`.
    fn reactive_sum(&self, omega: f64, v: Complex64, acc: &mut Complex64) -> Result<()> {
        match self {
            Network::Conductance(_) => {}
            Network::Capacitance(c) => *acc += *c * v * v,
            Network::Inductance(l) => {
                let i = self.admittance(omega)? * v;
                *acc -= *l * i * i;
            }
            Network::Parallel(parts) => {
                for p in parts {
                    p.reactive_sum(omega, v, acc)?;
                }
            }
            Network::Series(parts) => {
                let i = self.admittance(omega)? * v;
                for p in parts {
                    p.reactive_sum(omega, i / p.admittance(omega)?, acc)?;
                }
            }
        }
        Ok(())
    }

    /// Number of `G`, `C`, `L` elements.
    pub fn elements(&self) -> usize {
        match self {
            Network::Series(p) | Network::Parallel(p) => p.iter().map(Network::elements).sum(),
            _ => 1,
        }
    }
}

/// Relative size of the first step in [`admittance_derivative`].
pub const INITIAL_STEP: f64 = 1e-3;

/// `dY / d omega` by Ridders' extrapolation of central differences.
///
/// The step shrinks by 1.4 per stage from `omega * INITIAL_STEP`, or from a
/// tenth of `|Y / Y'|` when that is smaller. A single
/// fixed step cannot serve every network: lossless ladders have real poles
/// arbitrarily close to `omega`, where wide steps truncate badly, while far
/// from them a narrow step leaves a rounding floor near `eps / step`.
pub fn admittance_derivative(net: &Network, omega: f64) -> Result<Complex64> {
    const SHRINK: f64 = 1.4;
    const STAGES: usize = 16;
    let central = |h0: f64| -> Result<Complex64> {
        // a step whose multiples add to omega without rounding
        let h = (omega + h0) - omega;
        Ok((net.admittance(omega + h)? - net.admittance(omega - h)?) / (2.0 * h))
    };
    // near a pole p of Y, |Y / Y'| is |omega - p|; start well inside it
    let y0 = net.admittance(omega)?.norm();
    let slope = central(omega * 1e-8)?.norm();
    let mut h = omega * INITIAL_STEP;
    if slope > 0.0 {
        h = h.min(0.1 * y0 / slope);
    }
    let mut table = vec![vec![Complex64::new(0.0, 0.0); STAGES]; STAGES];
    table[0][0] = central(h)?;
    let mut best = table[0][0];
    let mut err = f64::INFINITY;
    for i in 1..STAGES {
        h /= SHRINK;
        table[0][i] = central(h)?;
        let mut fac = SHRINK * SHRINK;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= SHRINK * SHRINK;
            let e = (table[j][i] - table[j - 1][i])
                .norm()
                .max((table[j][i] - table[j - 1][i - 1]).norm());
            if e <= err {
                err = e;
                best = table[j][i];
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).norm() >= 2.0 * err {
            break;
        }
    }
    Ok(best)
}

/// Both sides of the derivative identity: `i V^2 dY/d omega`, with the
/// derivative from [`admittance_derivative`], and
/// `sum_k (C_k V_k^2 - L_k I_k^2)`.
pub fn admittance_derivative_identity(
    net: &Network,
    omega: f64,
    v: Complex64,
) -> Result<(Complex64, Complex64)> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(CircuitError::Domain(format!("need omega > 0, got {omega}")));
    }
    let lhs = Complex64::i() * v * v * admittance_derivative(net, omega)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    net.reactive_sum(omega, v, &mut rhs)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_capacitance() {
        let net = Network::Capacitance(2.5);
        let v = Complex64::new(0.3, 0.7);
        let (lhs, rhs) = admittance_derivative_identity(&net, 3.0, v).unwrap();
        assert!((lhs - rhs).norm() < 1e-9 * rhs.norm());
        assert!((rhs - 2.5 * v * v).norm() < 1e-15);
    }

    #[test]
    fn conductances_carry_no_reactive_term() {
        let net = Network::Series(vec![Network::Conductance(1.0), Network::Conductance(3.0)]);
        let (lhs, rhs) =
            admittance_derivative_identity(&net, 1.0, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(rhs, Complex64::new(0.0, 0.0));
        assert!(lhs.norm() < 1e-12);
        assert_eq!(net.elements(), 2);
    }
}
