use std::collections::BTreeMap;

use serde::Deserialize;

use super::{FalknerSkan, Michelson, Rossler4D, VanDerPol};
use crate::error::{Error, Result};
use crate::jets::{Scalar, VectorField};
use crate::poincare::{CrossingDirection, Section};
use crate::solver::{PeriodicOrbit, PointSolver};

const CATALOG: &str = include_str!("../../data/catalog.toml");

/// One of the case-study vector fields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BenchmarkField {
    Michelson(Michelson),
    FalknerSkan(FalknerSkan),
    Rossler(Rossler4D),
    VanDerPol(VanDerPol),
}

impl VectorField for BenchmarkField {
    fn dim(&self) -> usize {
        match self {
            BenchmarkField::Michelson(f) => f.dim(),
            BenchmarkField::FalknerSkan(f) => f.dim(),
            BenchmarkField::Rossler(f) => f.dim(),
            BenchmarkField::VanDerPol(f) => f.dim(),
        }
    }

    fn jet_coeff<S: Scalar>(&self, x: &[Vec<S>], k: usize, out: &mut [S]) {
        match self {
            BenchmarkField::Michelson(f) => f.jet_coeff(x, k, out),
            BenchmarkField::FalknerSkan(f) => f.jet_coeff(x, k, out),
            BenchmarkField::Rossler(f) => f.jet_coeff(x, k, out),
            BenchmarkField::VanDerPol(f) => f.jet_coeff(x, k, out),
        }
    }
}

/// A reference periodic orbit with its standard section.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub field: BenchmarkField,
    /// Reference point on the orbit, lying on the standard section.
    pub point: Vec<f64>,
    /// The standard section is `x_i = 0` for this coordinate.
    pub section_coordinate: usize,
    /// Directions of the successive crossings that make up one return.
    pub schedule: Vec<CrossingDirection>,
    /// Period of the orbit (non-rigorous, from shooting).
    pub period: f64,
    /// Nontrivial Floquet multipliers.
    pub multipliers: Vec<f64>,
    /// Whether a Newton shooting polish is applied before experiments.
    pub polish: bool,
}

impl CatalogEntry {
    pub fn dim(&self) -> usize {
        self.point.len()
    }

    /// The standard section, with the crossing direction of the final return.
    pub fn section(&self) -> Section {
        let last = *self.schedule.last().unwrap_or(&CrossingDirection::Any);
        Section::coordinate(self.dim(), self.section_coordinate, 0.0, last)
            .expect("catalog section is valid")
    }

    /// Periodic point: the reference point, Newton-polished when configured.
    pub fn periodic_orbit(&self, solver: &PointSolver) -> Result<PeriodicOrbit> {
        let iterations = if self.polish { 8 } else { 0 };
        solver.polish_periodic(
            &self.field,
            &self.point,
            &self.section(),
            &self.schedule,
            2.0 * self.period,
            iterations,
        )
    }
}

#[derive(Deserialize)]
struct RawCatalog {
    system: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    field: String,
    params: BTreeMap<String, String>,
    point: Vec<String>,
    section_coordinate: usize,
    schedule: Vec<String>,
    period: String,
    multipliers: Vec<String>,
    #[serde(default)]
    polish: bool,
}

fn number(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad number `{s}` in catalog")))
}

fn param(p: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    number(p.get(key).ok_or_else(|| Error::InvalidInput(format!("missing parameter `{key}`")))?)
}

fn direction(s: &str) -> Result<CrossingDirection> {
    match s {
        "increasing" => Ok(CrossingDirection::Increasing),
        "decreasing" => Ok(CrossingDirection::Decreasing),
        "any" => Ok(CrossingDirection::Any),
        _ => Err(Error::InvalidInput(format!("unknown crossing direction `{s}`"))),
    }
}

fn convert(raw: RawEntry) -> Result<CatalogEntry> {
    let p = &raw.params;
    let field = match raw.field.as_str() {
        "michelson" => BenchmarkField::Michelson(Michelson { c: param(p, "c")? }),
        "falkner-skan" => BenchmarkField::FalknerSkan(FalknerSkan { c: param(p, "c")? }),
        "rossler4d" => BenchmarkField::Rossler(Rossler4D {
            a: param(p, "a")?,
            b: param(p, "b")?,
            c: param(p, "c")?,
            d: param(p, "d")?,
        }),
        "van-der-pol" => BenchmarkField::VanDerPol(VanDerPol { mu: param(p, "mu")? }),
        other => return Err(Error::InvalidInput(format!("unknown field `{other}`"))),
    };
    let point = raw.point.iter().map(|s| number(s)).collect::<Result<Vec<_>>>()?;
    if point.len() != field.dim() || raw.section_coordinate >= point.len() {
        return Err(Error::InvalidInput(format!("inconsistent dimensions for `{}`", raw.name)));
    }
    Ok(CatalogEntry {
        name: raw.name,
        field,
        point,
        section_coordinate: raw.section_coordinate,
        schedule: raw.schedule.iter().map(|s| direction(s)).collect::<Result<_>>()?,
        period: number(&raw.period)?,
        multipliers: raw.multipliers.iter().map(|s| number(s)).collect::<Result<_>>()?,
        polish: raw.polish,
    })
}

/// Parses a catalog in the shipped TOML format.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let raw: RawCatalog =
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("catalog: {e}")))?;
    raw.system.into_iter().map(convert).collect()
}

/// The built-in case studies.
pub fn catalog() -> Vec<CatalogEntry> {
    parse_catalog(CATALOG).expect("shipped catalog parses")
}

/// Looks up a catalog entry by name.
pub fn entry(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown system `{name}`")))
}
