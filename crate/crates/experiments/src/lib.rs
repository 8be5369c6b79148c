//! Poincaré-map experiments: van der Pol crossing-time tables, fixed and
//! varying section runs, CTO angle scans and a property suite.

pub mod csv;
pub mod error;
pub mod runs;
pub mod sampling;
pub mod setup;
pub mod spec;
pub mod suite;

pub use error::{ExperimentError, Result};
pub use runs::{run_cases, CaseResult};
pub use setup::{Case, Orbit, Outcome};
pub use spec::{ExperimentSpec, SectionMode};
