pub mod error;
pub mod interval;
pub mod jets;
pub mod linalg;
pub mod poincare;
pub mod sets;
pub mod solver;
pub mod systems;

pub use error::{Error, Result};
pub use interval::{verified_inverse, Interval, IntervalMatrix, IntervalVector};
