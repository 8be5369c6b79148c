//! Plain-text serialization: one `name = value` entry per line, where values
//! are either bare tokens or intervals `[lo, hi]` written with round-trip
//! decimal endpoints.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::{Doubleton, RepresentableSet, Tripleton};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalVector};

#[derive(Debug, Default)]
pub struct TextWriter {
    out: String,
}

impl TextWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(&mut self, name: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.out, "{name} = {value}");
        self
    }

    pub fn interval(&mut self, name: &str, v: Interval) -> &mut Self {
        let _ = writeln!(self.out, "{name} = [{:e}, {:e}]", v.lo(), v.hi());
        self
    }

    pub fn vector(&mut self, name: &str, v: &[Interval]) -> &mut Self {
        for (i, &e) in v.iter().enumerate() {
            self.interval(&format!("{name}[{i}]"), e);
        }
        self
    }

    pub fn point_vector(&mut self, name: &str, v: &[f64]) -> &mut Self {
        for (i, &e) in v.iter().enumerate() {
            self.interval(&format!("{name}[{i}]"), Interval::point(e));
        }
        self
    }

    pub fn matrix(&mut self, name: &str, m: &DMatrix<f64>) -> &mut Self {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                self.interval(&format!("{name}[{i}][{j}]"), Interval::point(m[(i, j)]));
            }
        }
        self
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Parsed `name = value` entries.
#[derive(Debug, Default)]
pub struct Records {
    entries: BTreeMap<String, String>,
}

pub fn parse_records(text: &str) -> Result<Records> {
    let mut entries = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, value) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("line {}: expected `name = value`", lineno + 1)))?;
        entries.insert(name.trim().to_string(), value.trim().to_string());
    }
    Ok(Records { entries })
}

impl Records {
    pub fn get(&self, name: &str) -> Result<&str> {
        self.entries
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidInput(format!("missing entry `{name}`")))
    }

    pub fn usize(&self, name: &str) -> Result<usize> {
        self.get(name)?
            .parse()
            .map_err(|_| Error::InvalidInput(format!("`{name}` is not a count")))
    }

    pub fn interval(&self, name: &str) -> Result<Interval> {
        let v = self.get(name)?;
        let inner = v
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidInput(format!("`{name}` is not an interval")))?;
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| Error::InvalidInput(format!("`{name}` is not an interval")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad endpoint in `{name}`")))
        };
        Interval::new(parse(lo)?, parse(hi)?)
    }

    pub fn vector(&self, name: &str, n: usize) -> Result<IntervalVector> {
        (0..n).map(|i| self.interval(&format!("{name}[{i}]"))).collect::<Result<Vec<_>>>().map(IntervalVector::new)
    }

    pub fn point_vector(&self, name: &str, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|i| self.point(&format!("{name}[{i}]"))).collect()
    }

    pub fn matrix(&self, name: &str, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self.point(&format!("{name}[{i}][{j}]"))?;
            }
        }
        Ok(m)
    }

    fn point(&self, name: &str) -> Result<f64> {
        let v = self.interval(name)?;
        if v.is_point() {
            Ok(v.lo())
        } else {
            Err(Error::InvalidInput(format!("`{name}` must be a point interval")))
        }
    }
}

fn write_doubleton(w: &mut TextWriter, d: &Doubleton) {
    w.point_vector("x", d.center())
        .matrix("C", d.c())
        .vector("r0", d.r0())
        .matrix("Q", d.q_matrix())
        .vector("q", d.q());
}

fn read_doubleton(r: &Records, n: usize) -> Result<Doubleton> {
    let m = r.usize("params").unwrap_or(n);
    Doubleton::new(
        r.point_vector("x", n)?,
        r.matrix("C", n, m)?,
        r.vector("r0", m)?,
        r.matrix("Q", n, n)?,
        r.vector("q", n)?,
    )
}

impl RepresentableSet {
    pub fn to_text(&self) -> String {
        let mut w = TextWriter::new();
        match self {
            RepresentableSet::Box(b) => {
                w.field("kind", "box").field("dim", b.dim()).vector("x", b);
            }
            RepresentableSet::Doubleton(d) => {
                w.field("kind", "doubleton").field("dim", d.dim()).field("params", d.r0().dim());
                write_doubleton(&mut w, d);
            }
            RepresentableSet::Tripleton(t) => {
                let d = t.base();
                w.field("kind", "tripleton").field("dim", d.dim()).field("params", d.r0().dim());
                write_doubleton(&mut w, d);
                w.matrix("B", t.b()).vector("r", t.r());
            }
        }
        w.finish()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let r = parse_records(text)?;
        let n = r.usize("dim")?;
        match r.get("kind")? {
            "box" => Ok(RepresentableSet::Box(r.vector("x", n)?)),
            "doubleton" => Ok(RepresentableSet::Doubleton(read_doubleton(&r, n)?)),
            "tripleton" => Ok(RepresentableSet::Tripleton(Tripleton::new(
                read_doubleton(&r, n)?,
                r.matrix("B", n, n)?,
                r.vector("r", n)?,
            )?)),
            other => Err(Error::InvalidInput(format!("unknown set kind `{other}`"))),
        }
    }
}
