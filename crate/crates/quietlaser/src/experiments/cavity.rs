use clap::Parser;
use qnl_cavity::{
    binned_spectrum, jump_rates, langevin_spectrum, langevin_variance, log_band_means, moments,
    pooled_distribution, simulate_ensemble, stationary_distribution, statistical_weight,
    total_variation, CavityState, SimOptions,
};
use qnl_ensemble::Execution;
use qnl_math::quad::{integrate_real_line, QuadOptions};
use serde::Serialize;

use crate::report::params_of;
use crate::{parse_count, CliError, Common, Metric, Outcome, Report, Result, Table};

/// Largest cavity for which detailed balance is checked in exact integers.
const EXACT_BALANCE_MAX: usize = 30;

#[derive(Debug, Clone, Parser, Serialize)]
pub struct CavityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Number of two-level atoms N
    #[arg(long, default_value_t = 20)]
    pub atoms: usize,
    /// Jumps recorded per run, after the burn-in
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    pub jumps: u64,
    /// Photons at the start of each run
    #[arg(long, default_value_t = 0)]
    pub start_m: usize,
    /// Compare the fluctuation spectrum of m(t) with the Langevin form
    #[arg(long)]
    pub langevin: bool,
    /// Sampling interval of m(t) for the spectrum
    #[arg(long, default_value_t = 2.5e-4)]
    pub bin: f64,
    /// Samples per periodogram segment
    #[arg(long, default_value_t = 32768)]
    pub segment: usize,
}

pub fn run(args: &CavityArgs, exec: Execution) -> Result<Outcome> {
    let runs = args.common.runs_or(1)?;
    let n = args.atoms;
    let opts = SimOptions {
        start_m: args.start_m,
        bin: args.langevin.then_some(args.bin),
        ..SimOptions::new(args.jumps)
    };
    let sims = simulate_ensemble(n, &opts, runs, args.common.seed, exec)?;
    let pr = pooled_distribution(&sims);
    let exact = stationary_distribution(n)?;

    let mut params = params_of(args);
    params.insert("runs".into(), runs.into());
    let mut report = Report::new("cavity", params);
    let mut table = Table::new(&["m", "pr_empirical", "pr_exact"]);
    for m in 0..=n {
        table.push(vec![m.into(), pr[m].into(), exact[m].into()]);
    }

    let nf = n as f64;
    report.push(Metric::within(
        "total variation to the binomial law",
        total_variation(&pr, &exact),
        0.0,
        0.01,
    ));
    let (mean, var) = moments(&pr);
    report.push(Metric::relative("<m>", mean, 0.5 * nf, 0.02));
    report.push(Metric::relative("var m", var, 0.25 * nf, 0.02));
    if n == 2 {
        report.push(Metric::within("pr(0)", pr[0], 0.25, 0.01));
    }
    if n <= EXACT_BALANCE_MAX {
        let mut balanced = true;
        for m in 0..n {
            let lo = jump_rates(CavityState::with_photons(n, m)?, n)?;
            let hi = jump_rates(CavityState::with_photons(n, m + 1)?, n)?;
            balanced &= statistical_weight(n, m + 1)? * u128::from(hi.absorption)
                == statistical_weight(n, m)? * u128::from(lo.emission);
        }
        report.push(Metric::holds(
            "detailed balance in exact integers",
            balanced,
        ));
    }

    let q = integrate_real_line(|w| langevin_spectrum(n, w), QuadOptions::tight());
    report.push(Metric::relative(
        "integral of the Langevin spectrum d Omega / 2 pi vs N/4",
        q.value / std::f64::consts::TAU,
        langevin_variance(n),
        1e-9,
    ));

    if args.langevin {
        let paths: Vec<Vec<f64>> = sims.into_iter().map(|s| s.path).collect();
        let points = binned_spectrum(&paths, args.bin, args.segment)?;
        let bands = log_band_means(&points, 0.1 * nf, 10.0 * nf, 10, |w| {
            langevin_spectrum(n, w)
        });
        if bands.is_empty() {
            return Err(CliError::Param(
                "no periodogram points between 0.1 N and 10 N; adjust --bin or --segment".into(),
            ));
        }
        for b in bands {
            report.push(
                Metric::relative(
                    format!(
                        "S(Omega) / Langevin on [{:.4}, {:.4})",
                        b.omega_lo, b.omega_hi
                    ),
                    b.value,
                    b.model,
                    0.1,
                )
                .with_stderr(b.stderr),
            );
        }
    }
    Ok(Outcome { report, table })
}
