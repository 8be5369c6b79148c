use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalVector};
use crate::jets::{Dual, Expr, Scalar};
use crate::sets::SmoothMap;

/// Required sign of `d/dt alpha(x(t))` at an accepted crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingDirection {
    /// `alpha` goes from negative to positive.
    Increasing,
    /// `alpha` goes from positive to negative.
    Decreasing,
    Any,
}

impl CrossingDirection {
    pub fn flipped(self) -> Self {
        match self {
            CrossingDirection::Increasing => CrossingDirection::Decreasing,
            CrossingDirection::Decreasing => CrossingDirection::Increasing,
            CrossingDirection::Any => CrossingDirection::Any,
        }
    }

    /// Whether a crossing with `alpha` moving from `before` to `after` sign
    /// is admissible.
    pub fn admits(self, increasing: bool) -> bool {
        match self {
            CrossingDirection::Increasing => increasing,
            CrossingDirection::Decreasing => !increasing,
            CrossingDirection::Any => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    /// `alpha(x) = w . (x - anchor)`.
    Affine { normal: Vec<f64>, anchor: Vec<f64> },
    Polynomial(Expr),
}

/// Zero set of a scalar function `alpha` with a crossing-direction constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    dim: usize,
    kind: Kind,
    direction: CrossingDirection,
}

impl Section {
    /// Hyperplane through `anchor` with normal `normal`.
    pub fn affine(normal: Vec<f64>, anchor: Vec<f64>, direction: CrossingDirection) -> Result<Self> {
        if normal.len() != anchor.len() {
            return Err(Error::DimensionMismatch { expected: normal.len(), found: anchor.len() });
        }
        if normal.iter().all(|&w| w == 0.0) || normal.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput("section normal must be finite and nonzero".into()));
        }
        Ok(Section { dim: normal.len(), kind: Kind::Affine { normal, anchor }, direction })
    }

    /// Coordinate hyperplane `x_i = value`.
    pub fn coordinate(dim: usize, i: usize, value: f64, direction: CrossingDirection) -> Result<Self> {
        if i >= dim {
            return Err(Error::InvalidInput(format!("coordinate {i} out of range")));
        }
        let mut normal = vec![0.0; dim];
        normal[i] = 1.0;
        let mut anchor = vec![0.0; dim];
        anchor[i] = value;
        Section::affine(normal, anchor, direction)
    }

    /// Zero set of a polynomial in the state variables.
    pub fn polynomial(dim: usize, alpha: Expr, direction: CrossingDirection) -> Self {
        Section { dim, kind: Kind::Polynomial(alpha), direction }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn direction(&self) -> CrossingDirection {
        self.direction
    }

    pub fn with_direction(&self, direction: CrossingDirection) -> Section {
        Section { direction, ..self.clone() }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.kind, Kind::Affine { .. })
    }

    /// Normal vector of an affine section.
    pub fn normal(&self) -> Option<DVector<f64>> {
        match &self.kind {
            Kind::Affine { normal, .. } => Some(DVector::from_column_slice(normal)),
            Kind::Polynomial(_) => None,
        }
    }

    pub fn anchor(&self) -> Option<&[f64]> {
        match &self.kind {
            Kind::Affine { anchor, .. } => Some(anchor),
            Kind::Polynomial(_) => None,
        }
    }

    pub fn value<S: Scalar>(&self, x: &[S]) -> S {
        match &self.kind {
            Kind::Affine { normal, anchor } => normal
                .iter()
                .zip(anchor)
                .zip(x)
                .filter(|((w, _), _)| **w != 0.0)
                .fold(S::zero(), |acc, ((&w, &a), &xi)| {
                    acc + S::from_f64(w) * (xi - S::from_f64(a))
                }),
            Kind::Polynomial(e) => e.eval(x),
        }
    }

    pub fn gradient<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        match &self.kind {
            Kind::Affine { normal, .. } => normal.iter().map(|&w| S::from_f64(w)).collect(),
            Kind::Polynomial(e) => (0..self.dim)
                .map(|j| {
                    let xd: Vec<Dual<S>> = x
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| {
                            Dual::new(v, if i == j { S::from_f64(1.0) } else { S::zero() })
                        })
                        .collect();
                    e.eval(&xd).du
                })
                .collect(),
        }
    }

    /// Sign of `alpha` certified on a box: `Some(true)` for positive,
    /// `Some(false)` for negative, `None` when the box may meet the section.
    pub fn sign_on(value: Interval) -> Option<bool> {
        if value.lo() > 0.0 {
            Some(true)
        } else if value.hi() < 0.0 {
            Some(false)
        } else {
            None
        }
    }
}

/// `alpha` as a scalar smooth map, for representation-aware evaluation.
pub(crate) struct SectionMap<'a>(pub &'a Section);

impl SmoothMap for SectionMap<'_> {
    fn dim_in(&self) -> usize {
        self.0.dim
    }

    fn dim_out(&self) -> usize {
        1
    }

    fn eval_box(&self, x: &IntervalVector) -> IntervalVector {
        IntervalVector::new(vec![self.0.value(x)])
    }

    fn jacobian_box(&self, x: &IntervalVector) -> Option<crate::interval::IntervalMatrix> {
        let g = self.0.gradient(x);
        Some(crate::interval::IntervalMatrix::from_fn(1, self.0.dim, |_, j| g[j]))
    }
}
