use std::f64::consts::TAU;

use clap::{Parser, ValueEnum};
use qnl_ensemble::{mean_stderr, Execution, Streams};
use qnl_points::{
    band_noise, estimate_g_with, estimate_spectrum_with, estimate_variance_curve_with,
    gen_darkroom, gen_poisson, gen_renewal, superpose, thin, Ensemble, EventSeries,
};
use qnl_twolevel::{event_rate, waiting_time_exact, CorrelationModel};
use serde::Serialize;

use crate::report::params_of;
use crate::{parse_count, CliError, Common, Metric, Outcome, Report, Result, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    /// Homogeneous Poisson process of density --rate
    Poisson,
    /// Unit lattice with uniform delays on [0, --tau-r)
    Darkroom,
    /// Renewal process with the exact two-level waiting-time law
    Renewal,
}

#[derive(Debug, Clone, Parser, Serialize)]
pub struct PointsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Process::Poisson)]
    pub process: Process,
    /// Observation time per run (Poisson and renewal)
    #[arg(long, default_value_t = 2000.0)]
    pub horizon: f64,
    /// Events per run for the dark room; also its horizon
    #[arg(long, value_parser = parse_count, default_value = "10000")]
    pub events: u64,
    /// Poisson density
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    /// Dark-room delay spread
    #[arg(long, default_value_t = 50.0)]
    pub tau_r: f64,
    /// Spontaneous decay rate, in units of the Rabi frequency
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
    /// Decoherence parameter 2a
    #[arg(long, default_value_t = 1.0)]
    pub two_a: f64,
    /// Keep probability of an independent deletion
    #[arg(long, default_value_t = 1.0)]
    pub keep: f64,
    /// Number of independent copies merged into each run
    #[arg(long, default_value_t = 1)]
    pub merge: usize,
    /// Width of the g(tau) bins
    #[arg(long, default_value_t = 0.5)]
    pub bin: f64,
    /// Range of the g(tau) histogram
    #[arg(long, default_value_t = 8.0)]
    pub tau_max: f64,
    /// Highest harmonic 2 pi n / T of the spectrum
    #[arg(long, default_value_t = 40)]
    pub harmonics: usize,
    /// Harmonics per band of the relative noise
    #[arg(long, default_value_t = 10)]
    pub band: usize,
}

/// Second-order model of one unmerged, unthinned copy.
struct Model {
    rate: f64,
    g: Box<dyn Fn(f64) -> f64>,
    noise: Box<dyn Fn(f64) -> f64>,
}

fn darkroom_g(tau_r: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        if t < tau_r {
            1.0 - (tau_r - t) / (tau_r * tau_r)
        } else {
            1.0
        }
    }
}

/// `N(Omega) = -|chi(Omega)|^2` for uniform delays on `[0, tau_r)`.
fn darkroom_noise(tau_r: f64) -> impl Fn(f64) -> f64 {
    move |w: f64| {
        let x = w * tau_r;
        if x.abs() < 1e-4 {
            -1.0 + x * x / 12.0
        } else {
            (x.cos() - 1.0) / (0.5 * x * x)
        }
    }
}

/// Composite Simpson average over a bin, accurate for the kinked dark-room g.
fn bin_mean(f: &dyn Fn(f64) -> f64, c: f64, h: f64) -> f64 {
    let pieces = 8;
    let w = h / pieces as f64;
    (0..pieces)
        .map(|k| super::bin_average(f, c - 0.5 * h + (k as f64 + 0.5) * w, w))
        .sum::<f64>()
        / pieces as f64
}

fn model(args: &PointsArgs) -> Result<Model> {
    Ok(match args.process {
        Process::Poisson => Model {
            rate: args.rate,
            g: Box::new(|_| 1.0),
            noise: Box::new(|_| 0.0),
        },
        Process::Darkroom => Model {
            rate: 1.0,
            g: Box::new(darkroom_g(args.tau_r)),
            noise: Box::new(darkroom_noise(args.tau_r)),
        },
        Process::Renewal => {
            let a = 0.5 * args.two_a;
            let m = CorrelationModel::with_a(args.gamma, a)?;
            Model {
                rate: event_rate(args.gamma, a),
                g: Box::new(move |t| m.g(t)),
                noise: Box::new(move |w| m.noise(w)),
            }
        }
    })
}

fn generate(args: &PointsArgs, runs: usize, exec: Execution) -> Result<Ensemble> {
    if args.merge == 0 {
        return Err(CliError::Param("--merge must be at least 1".into()));
    }
    let law = match args.process {
        Process::Renewal => Some(waiting_time_exact(args.gamma, 0.5 * args.two_a)?),
        _ => None,
    };
    let tag = "points";
    let streams = Streams::new(args.common.seed, tag);
    let one = |rng: &mut qnl_ensemble::ChaCha8Rng| -> qnl_points::Result<EventSeries> {
        match args.process {
            Process::Poisson => gen_poisson(args.rate, args.horizon, rng),
            Process::Darkroom => gen_darkroom(args.tau_r, args.events as usize, rng),
            Process::Renewal => gen_renewal(law.as_ref().expect("law"), args.horizon, 50.0, rng),
        }
    };
    Ok(Ensemble::generate(
        runs,
        args.common.seed,
        tag,
        exec,
        |rng, run| {
            let merged = if args.merge == 1 {
                one(rng)?
            } else {
                let parts = (0..args.merge)
                    .map(|j| one(&mut streams.child(j as u64).rng(run as u64)))
                    .collect::<qnl_points::Result<Vec<_>>>()?;
                superpose(&parts)?
            };
            if args.keep < 1.0 {
                thin(&merged, args.keep, rng)
            } else {
                Ok(merged)
            }
        },
    )?)
}

pub fn run_points(args: &PointsArgs, exec: Execution) -> Result<Outcome> {
    let runs = args.common.runs_or(60)?;
    if args.band == 0 || args.harmonics < args.band {
        return Err(CliError::Param("need 1 <= --band <= --harmonics".into()));
    }
    let m = model(args)?;
    let copies = args.merge as f64;
    let ens = generate(args, runs, exec)?;

    let mut params = params_of(args);
    params.insert("runs".into(), runs.into());
    let mut report = Report::new("points", params);
    let mut table = Table::new(&["quantity", "x", "estimate", "stderr", "model"]);

    let rates: Vec<f64> = ens.runs.iter().map(EventSeries::rate).collect();
    let (rate, se) = mean_stderr(&rates);
    let want_rate = m.rate * copies * args.keep;
    report.push(Metric::sigma3("rate", rate, se, want_rate));
    table.push(vec![
        "rate".into(),
        0.0.into(),
        rate.into(),
        se.into(),
        want_rate.into(),
    ]);

    // merging M copies scales g - 1 and N by 1/M; thinning leaves both alone
    let g = estimate_g_with(&ens, args.bin, args.tau_max, exec)?;
    for (b, &c) in g.centers().iter().enumerate() {
        let want = 1.0 + (bin_mean(&*m.g, c, args.bin) - 1.0) / copies;
        report.push(Metric::sigma3(format!("g({c})"), g.g[b], g.stderr[b], want));
        table.push(vec![
            "g".into(),
            c.into(),
            g.g[b].into(),
            g.stderr[b].into(),
            want.into(),
        ]);
    }

    let horizon = ens.horizon();
    let s = estimate_spectrum_with(&ens, None, 1, args.harmonics, exec)?;
    let omega = |n: usize| TAU * n as f64 / horizon;
    for lo in (1..=args.harmonics - args.band + 1).step_by(args.band) {
        let hi = lo + args.band;
        let (v, e) = band_noise(&s, lo, hi)?;
        let want = (lo..hi).map(|n| (m.noise)(omega(n))).sum::<f64>() / args.band as f64 / copies;
        let mid = 0.5 * (omega(lo) + omega(hi - 1));
        report.push(Metric::sigma3(
            format!("N band {lo}..{}", hi - 1),
            v,
            e,
            want,
        ));
        table.push(vec![
            "N".into(),
            mid.into(),
            v.into(),
            e.into(),
            want.into(),
        ]);
        if lo == 1 && args.process == Process::Renewal {
            let zero = (m.noise)(0.0) / copies;
            report.push(Metric::sigma3("N(0+) vs closed-form N(0)", v, e, zero));
        }
    }
    Ok(Outcome { report, table })
}

#[derive(Debug, Clone, Parser, Serialize)]
pub struct DarkroomArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Events per run (the horizon, in units of the mean spacing)
    #[arg(long, value_parser = parse_count, default_value = "10000")]
    pub events: u64,
    /// Spread of the uniform delays
    #[arg(long, default_value_t = 50.0)]
    pub tau_r: f64,
    #[arg(long, default_value_t = 2.0)]
    pub bin: f64,
    #[arg(long, default_value_t = 80.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 200)]
    pub harmonics: usize,
    #[arg(long, default_value_t = 10)]
    pub band: usize,
    /// Counting windows of the variance curve
    #[arg(long, value_delimiter = ',', default_value = "5,20,40,50,100,200")]
    pub windows: Vec<f64>,
}

pub fn run_darkroom(args: &DarkroomArgs, exec: Execution) -> Result<Outcome> {
    let runs = args.common.runs_or(60)?;
    if args.band == 0 || args.harmonics < args.band {
        return Err(CliError::Param("need 1 <= --band <= --harmonics".into()));
    }
    let k = args.events as usize;
    let tau_r = args.tau_r;
    let ens = Ensemble::generate(runs, args.common.seed, "darkroom", exec, |rng, _| {
        gen_darkroom(tau_r, k, rng)
    })?;

    let mut params = params_of(args);
    params.insert("runs".into(), runs.into());
    let mut report = Report::new("darkroom", params);
    let mut table = Table::new(&["quantity", "x", "estimate", "stderr", "model"]);

    let g_model = darkroom_g(tau_r);
    let g = estimate_g_with(&ens, args.bin, args.tau_max, exec)?;
    for (b, &c) in g.centers().iter().enumerate() {
        let want = bin_mean(&g_model, c, args.bin);
        report.push(Metric::sigma3(format!("g({c})"), g.g[b], g.stderr[b], want));
        table.push(vec![
            "g".into(),
            c.into(),
            g.g[b].into(),
            g.stderr[b].into(),
            want.into(),
        ]);
    }

    let horizon = ens.horizon();
    let noise = darkroom_noise(tau_r);
    let s = estimate_spectrum_with(&ens, None, 1, args.harmonics, exec)?;
    let omega = |n: usize| TAU * n as f64 / horizon;
    for (i, &n) in s.harmonics.iter().enumerate() {
        let want = 1.0 + noise(omega(n));
        table.push(vec![
            "S".into(),
            omega(n).into(),
            s.spectrum[i].into(),
            s.stderr[i].into(),
            want.into(),
        ]);
    }
    for lo in (1..=args.harmonics - args.band + 1).step_by(args.band) {
        let hi = lo + args.band;
        let (v, e) = band_noise(&s, lo, hi)?;
        let want = (lo..hi).map(|n| noise(omega(n))).sum::<f64>() / args.band as f64;
        report.push(Metric::sigma3(
            format!("N band {lo}..{}", hi - 1),
            v,
            e,
            want,
        ));
    }
    let s1_model = 1.0 + noise(omega(1));
    report.push(Metric::sigma3(
        "S at the lowest harmonic",
        s.spectrum[0],
        s.stderr[0],
        s1_model,
    ));
    report.push(Metric::within(
        "S(Omega -> 0) below 0.01",
        s.spectrum[0],
        0.0,
        0.01,
    ));

    for v in estimate_variance_curve_with(&ens, &args.windows, exec)? {
        let t = v.window;
        let want = if t < tau_r {
            -t / tau_r + t * t / (3.0 * tau_r * tau_r)
        } else {
            -1.0 + tau_r / (3.0 * t)
        };
        report.push(Metric::sigma3(format!("V({t})"), v.value, v.stderr, want));
        table.push(vec![
            "V".into(),
            t.into(),
            v.value.into(),
            v.stderr.into(),
            want.into(),
        ]);
    }
    Ok(Outcome { report, table })
}
