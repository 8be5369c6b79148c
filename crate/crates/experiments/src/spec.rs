use std::fmt;
use std::str::FromStr;

use poincare_core::poincare::Strategy;
use poincare_core::solver::SolverConfig;

use crate::error::{ExperimentError, Result};

/// Which section the Poincaré map is taken on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SectionMode {
    /// The catalog section of the system.
    Standard,
    /// Through the periodic point, orthogonal to the flow there.
    Orthogonal,
    /// Crossing-time optimal section through the periodic point.
    Cto,
    /// CTO section at the orbit point where it is closest to tangent to the flow.
    MaxAngleCto,
}

impl SectionMode {
    pub fn name(self) -> &'static str {
        match self {
            SectionMode::Standard => "standard",
            SectionMode::Orthogonal => "orthogonal",
            SectionMode::Cto => "cto",
            SectionMode::MaxAngleCto => "max-angle-cto",
        }
    }
}

impl fmt::Display for SectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SectionMode {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(SectionMode::Standard),
            "orthogonal" => Ok(SectionMode::Orthogonal),
            "cto" => Ok(SectionMode::Cto),
            "max-angle-cto" => Ok(SectionMode::MaxAngleCto),
            _ => Err(ExperimentError::InvalidSpec(format!("unknown section mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub system: String,
    pub strategy: Strategy,
    pub section: SectionMode,
    pub sizes: Vec<f64>,
    pub solver: SolverConfig,
}

impl ExperimentSpec {
    pub fn new(system: &str, strategy: Strategy, section: SectionMode, sizes: Vec<f64>) -> Self {
        ExperimentSpec { system: system.to_string(), strategy, section, sizes, solver: SolverConfig::default() }
    }

    pub fn with_solver(mut self, solver: SolverConfig) -> Self {
        self.solver = solver;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_sizes(&self.sizes)?;
        self.solver.validate()?;
        match (self.section, self.strategy) {
            (SectionMode::Standard, Strategy::Cartesian | Strategy::DiagNormal | Strategy::DiagFlowdir) => Ok(()),
            (SectionMode::Standard, s) => Err(ExperimentError::InvalidSpec(format!("strategy {s} is not an experiment"))),
            (_, Strategy::DiagFlowdir) => Ok(()),
            (m, s) => Err(ExperimentError::InvalidSpec(format!("{m} sections are only run with diag+flowdir, not {s}"))),
        }
    }
}

/// Sizes must be positive and strictly increasing.
pub fn check_sizes(sizes: &[f64]) -> Result<()> {
    if sizes.is_empty() {
        return Err(ExperimentError::InvalidSpec("no sizes given".into()));
    }
    if sizes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(ExperimentError::InvalidSpec("sizes must be positive".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::InvalidSpec("sizes must be strictly increasing".into()));
    }
    Ok(())
}

/// `10^k` for each exponent.
pub fn decades(exponents: impl IntoIterator<Item = i32>) -> Vec<f64> {
    exponents.into_iter().map(|k| format!("1e{k}").parse().expect("valid literal")).collect()
}
