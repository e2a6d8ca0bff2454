use clap::Parser;
use qnl_math::quad::{integrate_panels, QuadOptions};
use qnl_twolevel::{
    event_rate, integrate_generalized_rabi, rho22_closed, rho22_limit, steady_state,
    waiting_distance, waiting_time_approx, waiting_time_exact, BlochState, RabiParams,
};
use serde::Serialize;

use crate::report::params_of;
use crate::{CliError, Common, Metric, Outcome, Report, Result, Table};

#[derive(Debug, Clone, Parser, Serialize)]
pub struct RabiArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Decay rates in units of the Rabi frequency
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,2,10")]
    pub gamma: Vec<f64>,
    /// Decoherence parameter 2a
    #[arg(long, default_value_t = 1.0)]
    pub two_a: f64,
    #[arg(long, default_value_t = 50.0)]
    pub t_end: f64,
    /// Output grid of the trajectory
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
}

/// Slowest relaxation rate of the Bloch equations with downward decay only.
fn slowest_rate(gamma: f64, a: f64) -> f64 {
    let d = gamma * gamma * (1.0 - a) * (1.0 - a) - 1.0;
    gamma * (1.0 + a) - if d > 0.0 { d.sqrt() } else { 0.0 }
}

pub fn run_rabi(args: &RabiArgs) -> Result<Outcome> {
    let a = 0.5 * args.two_a;
    let mut report = Report::new("rabi", params_of(args));
    let mut table = Table::new(&["gamma", "t", "rho22", "rho22_closed", "G"]);
    for &gamma in &args.gamma {
        let p = RabiParams {
            a,
            ..RabiParams::decay(gamma)
        };
        let traj = integrate_generalized_rabi(&p, BlochState::ABSORBING, args.t_end, args.dt)?;
        let mut worst = 0.0f64;
        for (&t, s) in traj.times.iter().zip(&traj.states) {
            let closed = rho22_closed(t, gamma, a)?;
            worst = worst.max((s.rho22() - closed).abs());
            table.push(vec![
                gamma.into(),
                t.into(),
                s.rho22().into(),
                closed.into(),
                (gamma * s.rho22()).into(),
            ]);
        }
        report.push(Metric::within(
            format!("max |rho22 - closed form|, gamma = {gamma}"),
            worst,
            0.0,
            1e-8,
        ));

        let t_long = (40.0 / slowest_rate(gamma, a)).ceil();
        let long = integrate_generalized_rabi(&p, BlochState::ABSORBING, t_long, t_long / 4.0)?;
        let last = long
            .states
            .last()
            .ok_or_else(|| CliError::Param("empty trajectory".into()))?;
        let fixed = steady_state(&p)?;
        report.push(Metric::within(
            format!("steady rho22, gamma = {gamma}"),
            last.rho22(),
            rho22_limit(gamma, a),
            1e-10,
        ));
        report.push(Metric::within(
            format!("steady Im rho12, gamma = {gamma}"),
            last.rho12_imag(),
            fixed.rho12_imag(),
            1e-10,
        ));
    }
    Ok(Outcome { report, table })
}

#[derive(Debug, Clone, Parser, Serialize)]
pub struct WaitingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Decay rates in units of the Rabi frequency
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.5,2,50")]
    pub gamma: Vec<f64>,
    /// Decoherence parameter 2a
    #[arg(long, default_value_t = 1.0)]
    pub two_a: f64,
    /// End of the tabulated interval
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    /// Also tabulate the squared distance between the exact and intuitive laws
    #[arg(long)]
    pub delta_table: bool,
    /// Decay rate used for the distance table
    #[arg(long, default_value_t = 0.001)]
    pub delta_gamma: f64,
}

/// Scan of the distance table: (2a, reference value).
pub const DELTA_TABLE: [(f64, f64); 4] = [(0.996, 1.6), (0.998, 0.066), (1.0, 0.1), (1.04, 3.2)];

pub fn run_waiting(args: &WaitingArgs) -> Result<Outcome> {
    if args.points < 2 {
        return Err(CliError::Param("--points must be at least 2".into()));
    }
    let a = 0.5 * args.two_a;
    let mut report = Report::new("waiting", params_of(args));
    let mut table = Table::new(&["gamma", "t", "W", "w_exact"]);
    for &gamma in &args.gamma {
        let w = waiting_time_exact(gamma, a)?;
        let horizon = 60.0 / gamma.min(1.0 / gamma);
        let edges: Vec<f64> = (0..=2000).map(|k| horizon * k as f64 / 2000.0).collect();
        let q = integrate_panels(|t| w.value(t), &edges, QuadOptions::default());
        report.push(Metric::within(
            format!("integral of w, gamma = {gamma}"),
            q.value,
            1.0,
            1e-9,
        ));
        report.push(Metric::within(
            format!("1/<tau> vs G(inf), gamma = {gamma}"),
            1.0 / w.mean(),
            event_rate(gamma, a),
            1e-9,
        ));
        for k in 0..args.points {
            let t = args.t_max * k as f64 / (args.points - 1) as f64;
            table.push(vec![
                gamma.into(),
                t.into(),
                waiting_time_approx(t, gamma, 1.0).into(),
                w.value(t).into(),
            ]);
        }
    }

    if args.two_a == 1.0 && args.gamma.contains(&2.0) {
        // (1/3) e^{-(2-sqrt3) t} + (1/3) e^{-(2+sqrt3) t} - (2/3) e^{-2t}
        let s3 = 3f64.sqrt();
        let want = [
            (1.0 / 3.0, -(2.0 - s3)),
            (1.0 / 3.0, -(2.0 + s3)),
            (-2.0 / 3.0, -2.0),
        ];
        let w = waiting_time_exact(2.0, 0.5)?;
        for (weight, pole) in want {
            let hit = w.terms.iter().filter(|t| t.power == 0).min_by(|x, y| {
                (x.pole.re - pole)
                    .abs()
                    .total_cmp(&(y.pole.re - pole).abs())
            });
            let (dw, dp) = hit.map_or((f64::NAN, f64::NAN), |t| {
                ((t.weight - weight).norm(), (t.pole - pole).norm())
            });
            report.push(Metric::within(
                format!("|pole - ({pole})|, gamma = 2"),
                dp,
                0.0,
                1e-9,
            ));
            report.push(Metric::within(
                format!("|weight - ({weight})| at pole {pole}, gamma = 2"),
                dw,
                0.0,
                1e-9,
            ));
        }
        let extra = w.terms.iter().filter(|t| t.weight.norm() > 1e-12).count();
        report.push(Metric::holds(
            "gamma = 2 law has exactly three terms",
            extra == 3,
        ));
    }

    if args.delta_table {
        let mut got = Vec::with_capacity(DELTA_TABLE.len());
        for (two_a, reference) in DELTA_TABLE {
            let d = waiting_distance(0.5 * two_a, args.delta_gamma)?;
            got.push(d);
            // within a factor of two means |log2(ratio)| <= 1
            report.push(
                Metric::within(
                    format!("log2(Delta / reference), 2a = {two_a}"),
                    (d / reference).log2(),
                    0.0,
                    1.0,
                )
                .with_stderr(0.0),
            );
        }
        let order = |v: &[f64]| {
            let mut idx: Vec<usize> = (0..v.len()).collect();
            idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
            idx
        };
        let reference: Vec<f64> = DELTA_TABLE.iter().map(|p| p.1).collect();
        report.push(Metric::holds(
            "Delta ordering over 2a matches the reference ordering",
            order(&got) == order(&reference),
        ));
    }
    Ok(Outcome { report, table })
}
