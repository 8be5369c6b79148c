//! Affine coordinate frames `z = A (x - y)` near a point of a section, and
//! crossing-time optimal sections.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::interval::{verified_inverse, IntervalMatrix};
use crate::jets::VectorField;
use crate::linalg::{eigenvalues, null_vector, orthonormal_complement, real_eigen};
use crate::solver::PointSolver;

use super::section::{CrossingDirection, Section};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Cartesian,
    /// Section basis diagonalizing `DP(u)`, transverse vector normal to the section.
    DiagNormal,
    /// Section basis diagonalizing `DP(u)`, transverse vector along `f(u)`.
    DiagFlowdir,
    Custom,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Cartesian => "cartesian",
            Strategy::DiagNormal => "diag+normal",
            Strategy::DiagFlowdir => "diag+flowdir",
            Strategy::Custom => "custom",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cartesian" => Ok(Strategy::Cartesian),
            "diag+normal" => Ok(Strategy::DiagNormal),
            "diag+flowdir" => Ok(Strategy::DiagFlowdir),
            "custom" => Ok(Strategy::Custom),
            _ => Err(Error::InvalidInput(format!("unknown strategy `{s}`"))),
        }
    }
}

/// `z = A (x - y)` with `A` a verified enclosure of `B^-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateFrame {
    pub anchor: Vec<f64>,
    pub b: DMatrix<f64>,
    pub a: IntervalMatrix,
    pub strategy: Strategy,
}

impl CoordinateFrame {
    pub fn new(anchor: Vec<f64>, b: DMatrix<f64>, strategy: Strategy) -> Result<Self> {
        let n = anchor.len();
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.ncols() });
        }
        let a = verified_inverse(&IntervalMatrix::from_point(&b))?;
        Ok(CoordinateFrame { anchor, b, a, strategy })
    }

    /// `A = Id`, `y = 0`.
    pub fn cartesian(n: usize) -> Self {
        CoordinateFrame {
            anchor: vec![0.0; n],
            b: DMatrix::identity(n, n),
            a: IntervalMatrix::identity(n),
            strategy: Strategy::Cartesian,
        }
    }

    /// `A = Id` centred at `y`.
    pub fn translated(anchor: Vec<f64>) -> Self {
        let n = anchor.len();
        CoordinateFrame {
            anchor,
            b: DMatrix::identity(n, n),
            a: IntervalMatrix::identity(n),
            strategy: Strategy::Custom,
        }
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }
}

/// Derivative of the Poincaré map of an affine section at a fixed point,
/// from the monodromy `m` of the return: `(I - f w^T / (w f)) m`.
pub fn section_derivative(m: &DMatrix<f64>, f: &DVector<f64>, w: &DVector<f64>) -> Result<DMatrix<f64>> {
    let wf = w.dot(f);
    if wf == 0.0 || !wf.is_finite() {
        return Err(Error::TangencyRisk { time: 0.0 });
    }
    let n = m.nrows();
    Ok((DMatrix::identity(n, n) - f * w.transpose() / wf) * m)
}

/// Builds the frame of `strategy` at the point `u` of an affine section.
/// `monodromy` is `D_x phi` over one return of the Poincaré map at `u`.
pub fn build_coordinates<F: VectorField>(
    strategy: Strategy,
    field: &F,
    section: &Section,
    u: &[f64],
    monodromy: &DMatrix<f64>,
) -> Result<CoordinateFrame> {
    let n = field.dim();
    if u.len() != n || monodromy.nrows() != n || section.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.len() });
    }
    if strategy == Strategy::Cartesian {
        return Ok(CoordinateFrame::cartesian(n));
    }
    let w = section.normal().ok_or(Error::UnsupportedSection)?;
    let f = DVector::from_vec(field.eval(u));
    let tangent = orthonormal_complement(&w)?;
    let dp = section_derivative(monodromy, &f, &w)?;
    let reduced = tangent.transpose() * dp * &tangent;
    let eig = real_eigen(&reduced)?;
    let m = DMatrix::from_columns(&eig.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>());
    let v1 = match strategy {
        Strategy::DiagNormal => w.normalize(),
        Strategy::DiagFlowdir => f.normalize(),
        _ => return Err(Error::InvalidInput(format!("cannot build a {strategy} frame"))),
    };
    let mut b = DMatrix::zeros(n, n);
    b.set_column(0, &v1);
    let section_part = &tangent * m;
    for j in 1..n {
        b.set_column(j, &section_part.column(j - 1));
    }
    CoordinateFrame::new(u.to_vec(), b, strategy)
}

/// Normal of the crossing-time optimal section: the left eigenvector of the
/// monodromy for the multiplier 1, with its relative residual.
pub fn cto_normal(monodromy: &DMatrix<f64>) -> Result<(DVector<f64>, f64)> {
    let n = monodromy.nrows();
    let mut dist: Vec<f64> = eigenvalues(monodromy)
        .iter()
        .map(|&(re, im)| ((re - 1.0).powi(2) + im * im).sqrt())
        .collect();
    dist.sort_by(f64::total_cmp);
    if n < 2 || dist[1] <= 0.1 {
        return Err(Error::DegenerateMultiplier { distance: dist.get(1).copied().unwrap_or(0.0) });
    }
    let shifted = monodromy.transpose() - DMatrix::identity(n, n);
    let w = null_vector(&shifted)?;
    let residual = (monodromy.transpose() * &w - &w).norm() / w.norm();
    Ok((w, residual))
}

/// Affine section through the periodic point `x0` (period `period`) whose
/// normal is the left eigenvector of the monodromy for the multiplier 1,
/// oriented so that the flow crosses it increasingly.
pub fn cto_section<F: VectorField>(
    field: &F,
    solver: &PointSolver,
    x0: &[f64],
    period: f64,
) -> Result<Section> {
    let (_, m) = solver.flow_with_monodromy(field, x0, period)?;
    cto_section_from(field, x0, &m)
}

pub(crate) fn cto_section_from<F: VectorField>(
    field: &F,
    x0: &[f64],
    monodromy: &DMatrix<f64>,
) -> Result<Section> {
    let (w, _) = cto_normal(monodromy)?;
    let f = DVector::from_vec(field.eval(x0));
    let w = if w.dot(&f) < 0.0 { -w } else { w };
    Section::affine(w.as_slice().to_vec(), x0.to_vec(), CrossingDirection::Increasing)
}

/// Affine section through `x0` orthogonal to the flow there.
pub fn orthogonal_section<F: VectorField>(field: &F, x0: &[f64]) -> Result<Section> {
    let f = DVector::from_vec(field.eval(x0)).normalize();
    Section::affine(f.as_slice().to_vec(), x0.to_vec(), CrossingDirection::Increasing)
}

/// `cos` of the angle between the flow and the CTO normal at a point of the orbit.
pub fn cto_angle<F: VectorField>(field: &F, section: &Section, x: &[f64]) -> f64 {
    let w = section.normal().expect("CTO sections are affine");
    let f = DVector::from_vec(field.eval(x));
    w.dot(&f) / (w.norm() * f.norm())
}

/// Point of the orbit through `x0` where the flow makes the smallest angle
/// with the normal of the local CTO section.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxAngleCto {
    pub time: f64,
    pub point: Vec<f64>,
    pub section: Section,
    pub cos_gamma: f64,
}

/// `(t_i, cos gamma(t_i))` at `samples` equally spaced times over one period.
pub fn cto_angle_scan<F: VectorField>(
    field: &F,
    solver: &PointSolver,
    x0: &[f64],
    period: f64,
    samples: usize,
) -> Result<Vec<(f64, f64, Vec<f64>, Section)>> {
    if samples == 0 {
        return Err(Error::InvalidInput("at least one sample is required".into()));
    }
    let mut out = Vec::with_capacity(samples);
    let mut x = x0.to_vec();
    let mut t_prev = 0.0;
    for i in 0..samples {
        let t = period * i as f64 / samples as f64;
        x = solver.flow(field, &x, t - t_prev)?;
        t_prev = t;
        let section = cto_section(field, solver, &x, period)?;
        out.push((t, cto_angle(field, &section, &x), x.clone(), section));
    }
    Ok(out)
}

/// Relative difference below which two angles count as a tie.
const ANGLE_TIE: f64 = 1e-9;

/// Ties go to the earliest sample.
pub fn max_angle_cto_point<F: VectorField>(
    field: &F,
    solver: &PointSolver,
    x0: &[f64],
    period: f64,
    samples: usize,
) -> Result<MaxAngleCto> {
    if samples < 100 {
        return Err(Error::InvalidInput(format!("{samples} samples are too few to locate the angle maximum")));
    }
    let scan = cto_angle_scan(field, solver, x0, period, samples)?;
    let mut best: Option<MaxAngleCto> = None;
    for (time, c, point, section) in scan {
        if best.as_ref().map_or(true, |b| c.abs() > b.cos_gamma.abs() * (1.0 + ANGLE_TIE)) {
            best = Some(MaxAngleCto { time, point, section, cos_gamma: c });
        }
    }
    Ok(best.expect("scan is nonempty"))
}
