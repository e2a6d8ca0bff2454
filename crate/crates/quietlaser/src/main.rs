use std::process::ExitCode;

use clap::Parser;
use quietlaser::{emit, Cli, Execution};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command.run(Execution::from_env()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    if let Err(e) = emit(&outcome, cli.command.common()) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    let r = &outcome.report;
    let passed = r.metrics.iter().filter(|m| m.pass).count();
    eprintln!("{}: {passed}/{} checks pass", r.experiment, r.metrics.len());
    for m in r.failures() {
        eprintln!(
            "  FAIL {}: {} vs {} (tolerance {})",
            m.name, m.estimate, m.target, m.tolerance
        );
    }
    if r.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
