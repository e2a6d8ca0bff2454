use clap::Parser;
use qnl_circuits::constants::{BOLTZMANN, HBAR};
use qnl_circuits::{
    admittance_derivative_identity, cstate_ensemble, half_power_width, infer_alpha,
    nyquist_classical_check, CStateParams, Network, TunedCircuit, MAX_NEGATIVE_FRACTION,
};
use qnl_ensemble::{Execution, Streams};
use qnl_math::Complex64;
use qnl_points::{band_noise, estimate_spectrum_with};
use rand::Rng;
use serde::Serialize;

use crate::report::params_of;
use crate::{CliError, Common, Metric, Outcome, Report, Result, Table};

#[derive(Debug, Clone, Parser, Serialize)]
pub struct CircuitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Inductance
    #[arg(long = "L", default_value_t = 1e-6)]
    pub l: f64,
    /// Capacitance
    #[arg(long = "C", default_value_t = 1e-9)]
    pub c: f64,
    /// Conductance
    #[arg(long = "G", default_value_t = 1e-3)]
    pub g: f64,
    /// Tabulated band `lo,hi` (default: resonance +- 10 G/C)
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub omega_range: Option<Vec<f64>>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Temperature of the classical Nyquist check
    #[arg(long, default_value_t = 300.0)]
    pub temperature: f64,
    /// Random five-element ladders for the derivative identity
    #[arg(long, default_value_t = 200)]
    pub ladders: usize,
}

fn random_element<R: Rng>(rng: &mut R) -> Network {
    let value = 10f64.powf(rng.random_range(-1.0..1.0));
    match rng.random_range(0..3) {
        0 => Network::Conductance(value),
        1 => Network::Capacitance(value),
        _ => Network::Inductance(value),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn run_circuit(args: &CircuitArgs) -> Result<Outcome> {
    let circuit = TunedCircuit::new(args.l, args.c, args.g)?;
    let w0 = circuit.omega_o();
    let width = args.g / args.c;
    let (lo, hi) = match args.omega_range.as_deref() {
        Some(&[lo, hi]) if 0.0 < lo && lo < hi => (lo, hi),
        Some(_) => return Err(CliError::Param("--omega-range needs 0 < lo < hi".into())),
        None => ((w0 - 10.0 * width).max(0.01 * w0), w0 + 10.0 * width),
    };
    if args.points < 2 {
        return Err(CliError::Param("--points must be at least 2".into()));
    }
    let mut report = Report::new("circuit", params_of(args));
    let amp = Complex64::new(1.0, 0.0);
    let mut table = Table::new(&["omega", "P", "E", "Y_re", "Y_im"]);
    for k in 0..args.points {
        let w = lo + (hi - lo) * k as f64 / (args.points - 1) as f64;
        let s = circuit.spectrum(amp, w)?;
        let y = circuit.admittance(w)?;
        table.push(vec![
            w.into(),
            s.power.into(),
            s.energy.into(),
            y.re.into(),
            y.im.into(),
        ]);
    }

    report.push(Metric::relative(
        "full width at half power vs G/C",
        half_power_width(&circuit)?,
        width,
        1e-9,
    ));
    let target = amp.norm_sqr() / (4.0 * args.g);
    report.push(Metric::relative(
        "integral of E d omega / 2 pi vs |amp|^2/4G",
        circuit.integrated_energy(amp)?,
        target,
        1e-6,
    ));

    let streams = Streams::new(args.common.seed, "ladders");
    let mut rng = streams.rng(0);
    let mut worst = 0.0f64;
    for _ in 0..args.ladders {
        let mut net = random_element(&mut rng);
        for k in 0..4 {
            let e = random_element(&mut rng);
            net = if k % 2 == 0 {
                Network::Parallel(vec![e, net])
            } else {
                Network::Series(vec![e, net])
            };
        }
        let omega = 10f64.powf(rng.random_range(-0.5..0.5));
        let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (lhs, rhs) = admittance_derivative_identity(&net, omega, v)?;
        worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1e-300));
    }
    report.push(Metric::within(
        "max relative error of the dY/d omega identity on random ladders",
        worst,
        0.0,
        1e-8,
    ));

    let half_kt = 0.5 * BOLTZMANN * args.temperature;
    report.push(Metric::relative(
        "classical stored energy vs kT/2",
        nyquist_classical_check(args.g, args.c, args.temperature)?,
        half_kt,
        1e-6,
    ));

    let mut worst = 0.0f64;
    for &w in &[1e12, 3e13, 1e14, 5e14, 2e15] {
        for &t in &[3.0, 300.0] {
            worst = worst.max(rel(infer_alpha(w, t)?, HBAR * w));
        }
    }
    report.push(Metric::within(
        "max relative error of the inferred noise constant vs hbar omega",
        worst,
        0.0,
        1e-9,
    ));
    Ok(Outcome { report, table })
}

#[derive(Debug, Clone, Parser, Serialize)]
pub struct CStateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Real part of the source amplitude
    #[arg(long, default_value_t = 6e-7, allow_hyphen_values = true)]
    pub v_re: f64,
    /// Imaginary part of the source amplitude
    #[arg(long, default_value_t = 8e-7, allow_hyphen_values = true)]
    pub v_im: f64,
    /// Load conductance
    #[arg(long, default_value_t = 1e-3)]
    pub g: f64,
    /// Carrier frequency
    #[arg(long, default_value_t = 2e15)]
    pub omega: f64,
    /// Observation time per run
    #[arg(long, default_value_t = 10.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 40)]
    pub harmonics: usize,
    /// Carrier phase rotations; the first one is the reference
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "0,1.0471975511965976,1.5707963267948966,2.5"
    )]
    pub phases: Vec<f64>,
}

pub fn run_cstate(args: &CStateArgs, exec: Execution) -> Result<Outcome> {
    let runs = args.common.runs_or(40)?;
    if args.phases.is_empty() || args.harmonics == 0 {
        return Err(CliError::Param(
            "need at least one phase and one harmonic".into(),
        ));
    }
    let base = CStateParams::new(
        Complex64::new(args.v_re, args.v_im),
        args.g,
        args.omega,
        args.duration,
    )?;
    let mut params = params_of(args);
    params.insert("runs".into(), runs.into());
    let mut report = Report::new("cstate", params);
    let mut table = Table::new(&["phase", "omega", "S", "stderr", "D"]);
    let mut reference: Option<(f64, f64)> = None;
    for (k, &phase) in args.phases.iter().enumerate() {
        let p = base.rotated(phase);
        let (ens, negative) = cstate_ensemble(&p, runs, args.common.seed + k as u64, exec)?;
        let s = estimate_spectrum_with(&ens, None, 1, args.harmonics, exec)?;
        for (i, &w) in s.omega.iter().enumerate() {
            table.push(vec![
                phase.into(),
                w.into(),
                s.spectrum[i].into(),
                s.stderr[i].into(),
                p.rate().into(),
            ]);
        }
        let (n, se) = band_noise(&s, 1, args.harmonics + 1)?;
        report.push(Metric::sigma3(format!("N, phase {phase}"), n, se, 0.0));
        report.push(Metric::within(
            format!("negative-rate step fraction, phase {phase}"),
            negative,
            0.0,
            MAX_NEGATIVE_FRACTION,
        ));
        match reference {
            None => reference = Some((n, se)),
            Some((n0, s0)) => {
                let joint = se.hypot(s0);
                report.push(
                    Metric::within(
                        format!("N(phase {phase}) - N(phase {})", args.phases[0]),
                        n - n0,
                        0.0,
                        3.0 * joint,
                    )
                    .with_stderr(joint),
                );
            }
        }
    }
    Ok(Outcome { report, table })
}
