use clap::Parser;
use qnl_ensemble::Streams;
use qnl_math::integrals::TABULATED;
use qnl_math::{
    bicomplex_invert, reference_integral, reference_integral_quadrature, solve_cubic, BiComplex,
};
use rand::Rng;
use serde::Serialize;

use crate::report::params_of;
use crate::{Common, Metric, Outcome, Report, Result, Table};

#[derive(Debug, Clone, Parser, Serialize)]
pub struct IntegralsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Random cubics and bi-complex numbers checked
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
}

const G_GRID: [f64; 5] = [1.1, 1.5, 2.0, 3.0, 4.0];
const Y_GRID: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

pub fn run(args: &IntegralsArgs) -> Result<Outcome> {
    let mut report = Report::new("integrals", params_of(args));
    let mut table = Table::new(&["m", "n", "g", "y", "closed", "quadrature"]);
    let mut worst = 0.0f64;
    for &(m, n) in &TABULATED {
        for &g in &G_GRID {
            for &y in &Y_GRID {
                let closed = reference_integral(m, n, g, y)?;
                let quad = reference_integral_quadrature(m, n, g, y)?;
                worst = worst.max((closed - quad).abs() / closed.abs().max(1.0));
                table.push(vec![
                    f64::from(m).into(),
                    f64::from(n).into(),
                    g.into(),
                    y.into(),
                    closed.into(),
                    quad.into(),
                ]);
            }
        }
    }
    report.push(Metric::within(
        "max I_mn closed form vs quadrature",
        worst,
        0.0,
        1e-6,
    ));

    let streams = Streams::new(args.common.seed, "integrals");
    let mut rng = streams.rng(0);
    let mut cubic = 0.0f64;
    for _ in 0..args.cases {
        let (a2, a1, a0) = (
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
        );
        let scale = 1f64.max(f64::abs(a2)).max(f64::abs(a1)).max(f64::abs(a0));
        for z in solve_cubic(a2, a1, a0).iter() {
            cubic = cubic.max((((z + a2) * z + a1) * z + a0).norm() / scale);
        }
    }
    report.push(Metric::within(
        "max scaled cubic residual",
        cubic,
        0.0,
        1e-10,
    ));

    let mut rng = streams.rng(1);
    let mut round = 0.0f64;
    let mut checked = 0;
    while checked < args.cases {
        let u = BiComplex::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
        );
        let (a, b) = u.invariants();
        if (a * a - b * b).abs() <= 1e-2 {
            continue;
        }
        round = round.max((bicomplex_invert(u)? * u).max_abs_diff(BiComplex::ONE));
        checked += 1;
    }
    report.push(Metric::within(
        "max bi-complex inverse round-trip error",
        round,
        0.0,
        1e-12,
    ));
    Ok(Outcome { report, table })
}
