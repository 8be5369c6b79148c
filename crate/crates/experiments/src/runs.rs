//! Building and executing experiment rows.

use poincare_core::poincare::{cto_angle_scan, Strategy};
use poincare_core::solver::{PointSolver, SolverConfig};
use rayon::prelude::*;

use crate::error::{ExperimentError, Result};
use crate::setup::{section_cases, vdp_cases, Case, Orbit, Outcome, SectionSetup};
use crate::spec::{check_sizes, ExperimentSpec, SectionMode};

/// Rows with `s` at or above this are reported but never asserted.
pub const ASSERTED_BELOW: f64 = 1e-2;

pub const FIXED_SYSTEMS: [&str; 4] = ["michelson", "falkner-skan", "rossler-h", "rossler-pd"];

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub case: Case,
    pub outcome: Result<Outcome, poincare_core::Error>,
}

impl CaseResult {
    pub fn asserted(&self) -> bool {
        self.case.s < ASSERTED_BELOW
    }
}

/// Rows of a fixed-section (`Standard`) or varying-section experiment.
pub fn spec_cases(spec: &ExperimentSpec, solver: &PointSolver) -> Result<Vec<Case>> {
    spec.validate()?;
    if !FIXED_SYSTEMS.contains(&spec.system.as_str()) {
        return Err(ExperimentError::InvalidSpec(format!("`{}` is not a section experiment system", spec.system)));
    }
    let orbit = Orbit::new(&spec.system, solver)?;
    let setup = SectionSetup::new(&orbit, spec.section, solver)?;
    section_cases(&orbit, &setup, spec.strategy, &spec.sizes)
}

pub fn fixed_cases(system: &str, strategy: Strategy, sizes: &[f64], solver: &PointSolver) -> Result<Vec<Case>> {
    spec_cases(&ExperimentSpec::new(system, strategy, SectionMode::Standard, sizes.to_vec()), solver)
}

pub fn varying_cases(system: &str, mode: SectionMode, sizes: &[f64], solver: &PointSolver) -> Result<Vec<Case>> {
    if mode == SectionMode::Standard {
        return Err(ExperimentError::InvalidSpec("varying sections are orthogonal, cto or max-angle-cto".into()));
    }
    spec_cases(&ExperimentSpec::new(system, Strategy::DiagFlowdir, mode, sizes.to_vec()), solver)
}

pub fn van_der_pol_cases(mode: SectionMode, deltas: &[f64], solver: &PointSolver) -> Result<Vec<Case>> {
    check_sizes(deltas)?;
    let orbit = Orbit::new("van-der-pol", solver)?;
    vdp_cases(&orbit, mode, deltas, solver)
}

/// Runs the cases on a pool of `jobs` workers; results keep the case order.
pub fn run_cases(cases: Vec<Case>, solver: &SolverConfig, jobs: usize) -> Result<Vec<CaseResult>> {
    solver.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ExperimentError::InvalidSpec(format!("worker pool: {e}")))?;
    Ok(pool.install(|| {
        cases
            .into_par_iter()
            .map(|case| {
                let outcome = case.run(solver);
                CaseResult { case, outcome }
            })
            .collect()
    }))
}

/// `(t, cos gamma(t))` over one period of the catalog orbit.
pub fn angle_scan(system: &str, samples: usize, solver: &PointSolver) -> Result<Vec<(f64, f64)>> {
    let orbit = Orbit::new(system, solver)?;
    let scan = cto_angle_scan(&orbit.entry.field, solver, &orbit.point, orbit.period, samples)?;
    Ok(scan.into_iter().map(|(t, c, _, _)| (t, c)).collect())
}

