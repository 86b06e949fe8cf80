//! Command-line front end: Poincaré polynomials, stability checks, vortex
//! solves and a self-test, with machine-readable output.

mod betti;
mod report;
mod selftest;
mod stability;
mod vortex;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::{Failure, Format, Output};

#[derive(Debug, Parser)]
#[command(name = "higgspair", version, about = "Betti numbers, stability and vortex solutions for rank-2 Higgs pairs")]
struct Cli {
    /// Output format. csv is available for betti and strata only.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Report errors as JSON on stdout instead of text on stderr.
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Poincaré polynomial of the moduli space with its stratum breakdown.
    Betti(betti::BettiArgs),
    /// Critical-set descriptors of the Morse stratification.
    Strata(betti::ModuliArgs),
    /// Stability of split models and of parameter choices.
    #[command(subcommand)]
    Stability(StabilityCommand),
    /// Numerical solution of the coupled vortex equations.
    #[command(subcommand)]
    Vortex(VortexCommand),
    /// Runs the built-in invariant suite.
    Selftest {
        /// Seed for the randomized groups.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt the energy to confirm the suite catches it.
        #[arg(long, value_enum)]
        inject_fault: Option<selftest::InjectFault>,
    },
}

#[derive(Debug, Subcommand)]
enum StabilityCommand {
    /// Decide τ-stability of a split model read from a JSON file.
    Check {
        /// File with {g, k, dL, psi_nonzero, theta_zero, s_placement, tau_bar}.
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
    },
    /// Check the standing assumptions on (g, k, tau_bar).
    Validate(betti::ModuliArgs),
}

#[derive(Debug, Subcommand)]
enum VortexCommand {
    /// Gradient flow of the residual functional from a seeded start.
    Solve(vortex::SolveArgs),
}

/// Runs one command. The note, if any, goes to stderr.
fn run(cli: &Cli) -> Result<(Output, Option<String>), Failure> {
    match &cli.command {
        Command::Betti(args) => {
            let out = betti::betti(args)?;
            let note = betti::golden(args, &out.render(cli.format)?)?;
            Ok((out, note))
        }
        Command::Strata(args) => Ok((betti::strata(args)?, None)),
        Command::Stability(StabilityCommand::Check { model }) => Ok((stability::check(model)?, None)),
        Command::Stability(StabilityCommand::Validate(args)) => {
            let (out, valid) = stability::validate(args)?;
            if valid {
                Ok((out, None))
            } else {
                print!("{}", out.render(cli.format)?);
                Err(Failure::Validation("parameters violate the standing assumptions".into()))
            }
        }
        Command::Vortex(VortexCommand::Solve(args)) => Ok((vortex::solve_cmd(args)?, None)),
        Command::Selftest { seed, inject_fault } => {
            let (out, pass) = selftest::selftest(*seed, *inject_fault);
            if pass {
                Ok((out, None))
            } else {
                print!("{}", out.render(cli.format)?);
                Err(Failure::Integrity("selftest failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|(out, note)| Ok((out.render(cli.format)?, note)));
    match result {
        Ok((text, note)) => {
            print!("{text}");
            if let Some(n) = note {
                eprintln!("{n}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if cli.json_errors {
                println!("{}", f.to_json());
            } else {
                eprintln!("error: {f}");
            }
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
