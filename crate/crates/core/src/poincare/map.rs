//! Enclosures of `A (P(X) - y)`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalVector};
use crate::jets::{IntervalField, VectorField};
use crate::sets::{affine_transform, eval, parse_records, RepresentableSet, ScaledField, TextWriter};

use super::crossing::{
    detect_crossing, refine_return_time, CrossingBracket, CrossingConfig, PoincareMap, WindowPass,
};
use super::frame::CoordinateFrame;
use super::section::Section;

#[derive(Clone, Debug, PartialEq)]
pub struct PoincareEnclosure {
    pub return_time: Interval,
    /// Encloses `A (P(X) - y)`.
    pub z: IntervalVector,
    /// `affineTransform(X0, A, y)`.
    pub y0: IntervalVector,
    /// `A f(X0) dt`.
    pub y: IntervalVector,
    /// `A Df(e) f(e) dt^2 / 2`.
    pub dy: IntervalVector,
}

/// Encloses `A (P(X) - y)` from a bracket of the return time.
pub fn enclose_map<F: VectorField>(
    field: &F,
    bracket: &CrossingBracket,
    frame: &CoordinateFrame,
    cfg: &CrossingConfig,
) -> Result<PoincareEnclosure> {
    let n = field.dim();
    if frame.dim() != n || bracket.x1.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: frame.dim() });
    }
    let pass = WindowPass::run(field, &bracket.x1, bracket.window, &cfg.solver)?;
    let dt = bracket.window - Interval::point(pass.t0);
    let x0 = RepresentableSet::Doubleton(pass.x0);
    let e = &pass.tube;

    let y0 = affine_transform(&x0, &frame.a, &frame.anchor)?;
    let y = eval(&x0, &ScaledField { a: &frame.a, field })?.scale(dt);
    let half_dt2 = dt.sqr() * Interval::point(0.5);
    let df_f = field.jacobian_box(e).mat_vec(&field.eval_box(e))?;
    let dy = frame.a.mat_vec(&df_f)?.scale(half_dt2);
    let crude = frame.a.mat_vec(&e.sub_point(&frame.anchor))?;
    let z = (&(&y0 + &y) + &dy).intersect(&crude)?;
    Ok(PoincareEnclosure { return_time: bracket.time(), z, y0, y, dy })
}

/// Crossing detection, return-time refinement and the map enclosure.
pub fn compute_poincare_map<F: VectorField>(
    field: &F,
    x: &RepresentableSet,
    map: &PoincareMap,
    frame: &CoordinateFrame,
    cfg: &CrossingConfig,
) -> Result<PoincareEnclosure> {
    let bracket = detect_crossing(field, x, map, cfg)?;
    let refined = refine_return_time(field, &map.target(), &bracket, cfg)?;
    enclose_map(field, &refined, frame, cfg)
}

/// `(0, z_2, ..., z_n)`: with the frame anchored on an affine section and
/// columns `2..n` of `B` spanning it, `P(X) ⊆ y + B (0, z_2, ..., z_n)`.
pub fn project_to_section(enc: &PoincareEnclosure, section: &Section) -> Result<IntervalVector> {
    if !section.is_affine() {
        return Err(Error::UnsupportedSection);
    }
    let mut z = enc.z.clone();
    z[0] = Interval::ZERO;
    Ok(z)
}

impl PoincareEnclosure {
    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    /// `y + dy`, the part of `z` driven by the spread of crossing times.
    pub fn sliding(&self) -> IntervalVector {
        &self.y + &self.dy
    }

    pub fn to_text(&self) -> String {
        let mut w = TextWriter::new();
        w.field("kind", "poincare-enclosure")
            .field("dim", self.dim())
            .interval("return_time", self.return_time)
            .vector("z", &self.z)
            .vector("y0", &self.y0)
            .vector("y", &self.y)
            .vector("dy", &self.dy);
        w.finish()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let r = parse_records(text)?;
        if r.get("kind")? != "poincare-enclosure" {
            return Err(Error::InvalidInput("not a Poincaré map enclosure".into()));
        }
        let n = r.usize("dim")?;
        Ok(PoincareEnclosure {
            return_time: r.interval("return_time")?,
            z: r.vector("z", n)?,
            y0: r.vector("y0", n)?,
            y: r.vector("y", n)?,
            dy: r.vector("dy", n)?,
        })
    }

    /// CSV header matching [`PoincareEnclosure::csv_row`].
    pub fn csv_header(n: usize) -> String {
        let mut out = String::from("s,strategy,t_lo,t_hi");
        for i in 0..n {
            let _ = write!(out, ",z{i}_lo,z{i}_hi");
        }
        out
    }

    pub fn csv_row(&self, s: f64, strategy: &str) -> String {
        let mut out = format!(
            "{s:.16e},{strategy},{:.16e},{:.16e}",
            self.return_time.lo(),
            self.return_time.hi()
        );
        for v in self.z.iter() {
            let _ = write!(out, ",{:.16e},{:.16e}", v.lo(), v.hi());
        }
        out
    }
}
