//! Case-study vector fields and their reference periodic orbits.

mod catalog;
mod fields;

pub use catalog::{catalog, entry, parse_catalog, BenchmarkField, CatalogEntry};
pub use fields::{FalknerSkan, Harmonic, Linear, Michelson, Rossler4D, Transport, VanDerPol};
