use clap::Parser;
use qnl_ensemble::{mean_stderr, Execution};
use qnl_pendulum::{
    band_spectrum, derived_quantities, log_bands, simulate_ensemble, PendulumParams,
};
use serde::Serialize;

use crate::report::params_of;
use crate::{parse_count, CliError, Common, Metric, Outcome, Report, Result, Table};

#[derive(Debug, Clone, Parser, Serialize)]
pub struct PendulumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Periods per run
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    pub periods: u64,
    /// Pendulum mass M (kg)
    #[arg(long, default_value_t = 1.0)]
    pub big_mass: f64,
    /// Molecule mass m (kg)
    #[arg(long, default_value_t = 1e-3)]
    pub small_mass: f64,
    /// Pick-up probability per period
    #[arg(long, default_value_t = 0.01)]
    pub pr: f64,
    /// Drop of the weight per period (m)
    #[arg(long, default_value_t = 1e-6)]
    pub dz: f64,
    /// Lowest Omega tau_p of the comparison
    #[arg(long, default_value_t = 0.2)]
    pub x_lo: f64,
    /// Highest Omega tau_p of the comparison
    #[arg(long, default_value_t = 20.0)]
    pub x_hi: f64,
    /// Harmonics averaged per band
    #[arg(long, default_value_t = 32)]
    pub width: usize,
    /// Allowed relative deviation of each band from the Lorentzian dip
    #[arg(long, default_value_t = 0.1)]
    pub tolerance: f64,
}

pub fn run(args: &PendulumArgs, exec: Execution) -> Result<Outcome> {
    let runs = args.common.runs_or(100)?;
    let p = PendulumParams {
        big_mass: args.big_mass,
        small_mass: args.small_mass,
        pr: args.pr,
        dz: args.dz,
        ..PendulumParams::reference()
    };
    let d = derived_quantities(&p)?;
    let records = simulate_ensemble(&p, args.periods, runs, args.common.seed, exec)?;
    let bands = log_bands(d.tau_p, args.periods, args.x_lo, args.x_hi, args.width);
    if bands.is_empty() {
        return Err(CliError::Param(format!(
            "no band of {} harmonics fits in Omega tau_p = [{}, {}]; raise --periods",
            args.width, args.x_lo, args.x_hi
        )));
    }
    let points = band_spectrum(&p, &records, &bands, exec)?;

    let mut params = params_of(args);
    params.insert("runs".into(), runs.into());
    let mut report = Report::new("pendulum", params);
    if p == PendulumParams::reference() {
        // quoted round numbers: 1e5 s, about 1 mJ and about 10 uW
        report.push(Metric::relative("tau_p (s)", d.tau_p, 1e5, 1e-9));
        report.push(Metric::relative("epsilon (J)", d.epsilon, 1e-3, 0.05));
        report.push(Metric::relative("<P_d> (W)", d.mean_power, 1e-5, 0.05));
    }
    let power: Vec<f64> = records
        .iter()
        .map(|r| r.dissipated_energy() / (r.horizon as f64 * p.period))
        .collect();
    let (pw, se) = mean_stderr(&power);
    report.push(Metric::sigma3(
        "mean dissipated power",
        pw,
        se,
        d.mean_power,
    ));

    let mut table = Table::new(&[
        "n_lo",
        "n_hi",
        "omega",
        "omega_tau_p",
        "sim",
        "stderr",
        "analytic",
        "exact_map",
    ]);
    for b in &points {
        report.push(
            Metric::within(
                format!("S/S_analytic at Omega tau_p = {:.3}", b.omega * d.tau_p),
                b.ratio(),
                1.0,
                args.tolerance,
            )
            .with_stderr(b.stderr / b.analytic),
        );
        table.push(vec![
            b.n_lo.into(),
            b.n_hi.into(),
            b.omega.into(),
            (b.omega * d.tau_p).into(),
            b.sim.into(),
            b.stderr.into(),
            b.analytic.into(),
            b.exact_map.into(),
        ]);
    }
    Ok(Outcome { report, table })
}
