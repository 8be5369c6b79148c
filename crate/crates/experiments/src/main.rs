use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use poincare_core::poincare::Strategy;
use poincare_core::solver::{PointSolver, SolverConfig};
use poincare_experiments::runs::{angle_scan, fixed_cases, run_cases, van_der_pol_cases, varying_cases};
use poincare_experiments::spec::decades;
use poincare_experiments::suite::run_property_suite;
use poincare_experiments::{csv, CaseResult, ExperimentError, SectionMode};

#[derive(Parser)]
#[command(name = "poincare", version, about = "Validated Poincaré-map experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Taylor order of the validated solver.
    #[arg(long, global = true, default_value_t = 20)]
    order: usize,
    /// Local error target of the validated solver.
    #[arg(long, global = true, default_value_t = 1e-16)]
    tol: f64,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Crossing-time tables for the van der Pol orbit.
    Vdp {
        #[arg(long, value_parser = ["orthogonal", "cto"])]
        section: String,
        #[arg(long, value_delimiter = ',', default_values_t = decades(-9..=-1))]
        deltas: Vec<f64>,
    },
    /// Poincaré map on the catalog section under one coordinate strategy.
    Fixed {
        #[arg(long)]
        system: String,
        #[arg(long)]
        strategy: Strategy,
        #[arg(long, value_delimiter = ',', default_values_t = decades(-10..=-2))]
        sizes: Vec<f64>,
    },
    /// Poincaré map on a section rebuilt through the orbit, diag+flowdir frame.
    Varying {
        #[arg(long)]
        system: String,
        #[arg(long, value_parser = ["orthogonal", "cto", "max-angle-cto"])]
        section: String,
        #[arg(long, value_delimiter = ',', default_values_t = decades(-10..=-2))]
        sizes: Vec<f64>,
    },
    /// Angle between the flow and the local CTO normal along the orbit.
    Angles {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Runs the property suite and reports pass/fail per check.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

enum Failure {
    Assertion,
    Usage(String),
    Solver(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::InvalidSpec(_) | ExperimentError::Core(poincare_core::Error::InvalidInput(_)) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Solver(e.to_string()),
        }
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => Ok(Box::new(File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?)),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn emit(results: &[CaseResult], out: &Option<PathBuf>) -> Result<(), Failure> {
    csv::write_rows(output(out)?, &csv::rows(results))?;
    let failed: Vec<String> = results
        .iter()
        .filter(|r| r.asserted())
        .filter_map(|r| r.outcome.as_ref().err().map(|e| format!("s = {:e}: {e}", r.case.s)))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Solver(failed.join("; ")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let c = &cli.common;
    let solver = SolverConfig::default().with_order(c.order).with_tol(c.tol);
    let jobs = c.jobs.unwrap_or_else(rayon::current_num_threads).max(1);
    let point = PointSolver::default();
    match cli.command {
        Command::Vdp { section, deltas } => {
            let mode: SectionMode = section.parse()?;
            emit(&run_cases(van_der_pol_cases(mode, &deltas, &point)?, &solver, jobs)?, &c.out)
        }
        Command::Fixed { system, strategy, sizes } => {
            emit(&run_cases(fixed_cases(&system, strategy, &sizes, &point)?, &solver, jobs)?, &c.out)
        }
        Command::Varying { system, section, sizes } => {
            let mode: SectionMode = section.parse()?;
            emit(&run_cases(varying_cases(&system, mode, &sizes, &point)?, &solver, jobs)?, &c.out)
        }
        Command::Angles { system, samples } => {
            let scan = angle_scan(&system, samples, &point)?;
            csv::write_angles(output(&c.out)?, &system, &scan)?;
            Ok(())
        }
        Command::Verify { seed } => {
            let report = run_property_suite(seed, &solver, jobs)?;
            output(&c.out)?
                .write_all(report.to_csv()?.as_bytes())
                .map_err(|e| Failure::Solver(e.to_string()))?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Assertion)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(3)
        }
    }
}
