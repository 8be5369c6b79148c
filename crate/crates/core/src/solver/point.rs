//! Non-rigorous floating-point Taylor integration: trajectories, monodromy
//! matrices, section crossings and periodic-orbit polishing. Used only to set
//! up frames and sections, never for enclosures.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jets::{horner, solution_jet, variational_jet, VectorField};
use crate::linalg::orthonormal_complement;
use crate::poincare::{CrossingDirection, Section};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointSolver {
    pub order: usize,
    /// Local error target relative to `max(1, |x|)`.
    pub tol: f64,
    pub max_step: f64,
    /// Number of steps after which integration is abandoned.
    pub max_steps: usize,
}

impl Default for PointSolver {
    fn default() -> Self {
        PointSolver { order: 24, tol: 1e-17, max_step: 1.0, max_steps: 2_000_000 }
    }
}

/// A trajectory point on a section.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCrossing {
    pub time: f64,
    pub point: Vec<f64>,
    /// `D_x phi(time, x0)`, when requested.
    pub monodromy: Option<DMatrix<f64>>,
    pub increasing: bool,
}

/// Periodic orbit through a point of an affine section.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicOrbit {
    pub point: Vec<f64>,
    pub period: f64,
    pub monodromy: DMatrix<f64>,
    /// Distance `|P(u) - u|` after polishing.
    pub residual: f64,
}

struct State {
    t: f64,
    x: Vec<f64>,
    m: Option<DMatrix<f64>>,
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

impl PointSolver {
    /// Step size from the last two Taylor coefficients of the solution and,
    /// when tracked, of the variational matrix, whose linearization can be
    /// much stiffer than the solution itself.
    fn step_size(&self, coeffs: &[Vec<f64>], var: &Option<Vec<DMatrix<f64>>>, x: &[f64]) -> f64 {
        let p = self.order;
        let mut h = self.max_step;
        let mut limit = |scale: f64, c: f64, k: usize| {
            if c > 0.0 {
                h = h.min((scale / c).powf(1.0 / k as f64));
            }
        };
        let scale = self.tol * max_norm(x).max(1.0);
        for k in [p - 1, p] {
            limit(scale, max_norm(&coeffs[k]), k);
        }
        if let Some(v) = var {
            let scale = self.tol * v[0].amax().max(1.0);
            for k in [p - 1, p] {
                limit(scale, v[k].amax(), k);
            }
        }
        h
    }

    /// Series at the current state: solution coefficients and, if tracked,
    /// the coefficients of `D_x phi(t, x) M`.
    fn series<F: VectorField>(
        &self,
        field: &F,
        s: &State,
    ) -> Result<(Vec<Vec<f64>>, Option<Vec<DMatrix<f64>>>)> {
        match &s.m {
            None => Ok((solution_jet(field, &s.x, self.order)?, None)),
            Some(m) => {
                let n = field.dim();
                let v0: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).iter().copied().collect()).collect();
                let (c, v) = variational_jet(field, &s.x, &v0, self.order)?;
                let vm = v
                    .iter()
                    .map(|vk| DMatrix::from_fn(n, m.ncols(), |i, j| vk[i][j]))
                    .collect();
                Ok((c, Some(vm)))
            }
        }
    }

    fn advance(
        c: &[Vec<f64>],
        v: &Option<Vec<DMatrix<f64>>>,
        h: f64,
    ) -> (Vec<f64>, Option<DMatrix<f64>>) {
        let x = horner(c, h);
        let m = v.as_ref().map(|vk| {
            let mut acc = vk[vk.len() - 1].clone();
            for term in vk.iter().rev().skip(1) {
                acc = acc * h + term;
            }
            acc
        });
        (x, m)
    }

    fn check(&self, s: &State, steps: usize) -> Result<()> {
        if s.x.iter().any(|v| !v.is_finite()) || steps > self.max_steps {
            Err(Error::Divergence { time: s.t })
        } else {
            Ok(())
        }
    }

    /// `phi(t, x0)`.
    pub fn flow<F: VectorField>(&self, field: &F, x0: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.run(field, x0, None, t)?.x)
    }

    /// `phi(t, x0)` and `D_x phi(t, x0)`.
    pub fn flow_with_monodromy<F: VectorField>(
        &self,
        field: &F,
        x0: &[f64],
        t: f64,
    ) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let n = field.dim();
        let s = self.run(field, x0, Some(DMatrix::identity(n, n)), t)?;
        Ok((s.x, s.m.expect("monodromy tracked")))
    }

    fn run<F: VectorField>(
        &self,
        field: &F,
        x0: &[f64],
        m0: Option<DMatrix<f64>>,
        t_end: f64,
    ) -> Result<State> {
        if x0.len() != field.dim() {
            return Err(Error::DimensionMismatch { expected: field.dim(), found: x0.len() });
        }
        let backward = t_end < 0.0;
        let mut s = State { t: 0.0, x: x0.to_vec(), m: m0 };
        let mut steps = 0;
        while s.t < t_end.abs() {
            let (c, v) = self.series(field, &s)?;
            let h = self.step_size(&c, &v, &s.x).min(t_end.abs() - s.t);
            let (x, m) = Self::advance(&c, &v, if backward { -h } else { h });
            s = State { t: s.t + h, x, m };
            steps += 1;
            self.check(&s, steps)?;
        }
        if backward {
            s.t = -s.t;
        }
        Ok(s)
    }

    /// Equally spaced samples `(t_i, phi(t_i, x0))`, `t_i = i t / samples`,
    /// `i = 0..samples`.
    pub fn sample<F: VectorField>(
        &self,
        field: &F,
        x0: &[f64],
        t: f64,
        samples: usize,
    ) -> Result<Vec<(f64, Vec<f64>)>> {
        let mut out = Vec::with_capacity(samples);
        for i in 0..samples {
            let ti = t * i as f64 / samples as f64;
            out.push((ti, self.flow(field, x0, ti)?));
        }
        Ok(out)
    }

    /// First crossing of `section` (respecting its direction) at a time in
    /// `(min_time, max_time]`.
    pub fn next_crossing<F: VectorField>(
        &self,
        field: &F,
        x0: &[f64],
        section: &Section,
        min_time: f64,
        max_time: f64,
        with_monodromy: bool,
    ) -> Result<PointCrossing> {
        let n = field.dim();
        let mut s = State {
            t: 0.0,
            x: x0.to_vec(),
            m: with_monodromy.then(|| DMatrix::identity(n, n)),
        };
        let mut steps = 0;
        let mut g0: f64 = section.value(&s.x);
        while s.t < max_time {
            let (c, v) = self.series(field, &s)?;
            let h = self.step_size(&c, &v, &s.x);
            let x1 = horner(&c, h);
            let g1: f64 = section.value(&x1);
            let inc = g0 < 0.0 && g1 >= 0.0;
            let dec = g0 > 0.0 && g1 <= 0.0;
            if (inc || dec) && section.direction().admits(inc) {
                let tau = locate_root(&c, section, h, g0);
                if s.t + tau > min_time {
                    let (x, m) = Self::advance(&c, &v, tau);
                    return Ok(PointCrossing { time: s.t + tau, point: x, monodromy: m, increasing: inc });
                }
            }
            let (x, m) = Self::advance(&c, &v, h);
            s = State { t: s.t + h, x, m };
            g0 = g1;
            steps += 1;
            self.check(&s, steps)?;
        }
        Err(Error::NoCrossing { time: max_time })
    }

    /// Follows consecutive crossings of `section` with the given directions;
    /// returns the last one with the accumulated time.
    pub fn return_map<F: VectorField>(
        &self,
        field: &F,
        x0: &[f64],
        section: &Section,
        schedule: &[CrossingDirection],
        max_time: f64,
        with_monodromy: bool,
    ) -> Result<PointCrossing> {
        let mut x = x0.to_vec();
        let mut t = 0.0;
        let mut m: Option<DMatrix<f64>> = None;
        let mut last = None;
        for &d in schedule {
            let c = self.next_crossing(field, &x, &section.with_direction(d), 0.0, max_time - t, with_monodromy)?;
            t += c.time;
            x = c.point.clone();
            m = match (m, &c.monodromy) {
                (Some(acc), Some(step)) => Some(step * acc),
                (None, Some(step)) => Some(step.clone()),
                _ => None,
            };
            last = Some(c);
        }
        let last = last.ok_or_else(|| Error::InvalidInput("empty crossing schedule".into()))?;
        Ok(PointCrossing { time: t, point: x, monodromy: m, increasing: last.increasing })
    }

    /// Crossings of `section` in either direction up to `t_end`, as
    /// `(time, increasing)`.
    pub fn crossings<F: VectorField>(
        &self,
        field: &F,
        x0: &[f64],
        section: &Section,
        t_end: f64,
    ) -> Result<Vec<(f64, bool)>> {
        let any = section.with_direction(CrossingDirection::Any);
        let mut out = Vec::new();
        let mut x = x0.to_vec();
        let mut t = 0.0;
        loop {
            match self.next_crossing(field, &x, &any, 0.0, t_end - t, false) {
                Ok(c) => {
                    t += c.time;
                    out.push((t, c.increasing));
                    x = c.point;
                }
                Err(Error::NoCrossing { .. }) => return Ok(out),
                Err(e) => return Err(e),
            }
        }
    }

    /// Newton shooting for a periodic point `u` on an affine section with
    /// `P(u) = u`, where `P` follows `schedule`.
    pub fn polish_periodic<F: VectorField>(
        &self,
        field: &F,
        u0: &[f64],
        section: &Section,
        schedule: &[CrossingDirection],
        max_time: f64,
        iterations: usize,
    ) -> Result<PeriodicOrbit> {
        let w = section.normal().ok_or(Error::UnsupportedSection)?;
        let tangent = orthonormal_complement(&w)?;
        let n = field.dim();
        let mut u = DVector::from_column_slice(u0);
        let mut best: Option<PeriodicOrbit> = None;
        for _ in 0..=iterations {
            let c = self.return_map(field, u.as_slice(), section, schedule, max_time, true)?;
            let pu = DVector::from_vec(c.point.clone());
            let g = &pu - &u;
            let residual = g.norm();
            let m = c.monodromy.expect("monodromy tracked");
            let improved = best.as_ref().map_or(true, |b| residual < b.residual);
            if improved {
                best = Some(PeriodicOrbit {
                    point: u.as_slice().to_vec(),
                    period: c.time,
                    monodromy: m.clone(),
                    residual,
                });
            }
            if !improved || residual < 1e-15 * u.norm().max(1.0) {
                break;
            }
            let f = DVector::from_vec(field.eval(&c.point));
            let wf = w.dot(&f);
            let dp = (DMatrix::identity(n, n) - &f * w.transpose() / wf) * &m;
            let reduced = tangent.transpose() * (dp - DMatrix::identity(n, n)) * &tangent;
            let rhs = -(tangent.transpose() * &g);
            let da = reduced.lu().solve(&rhs).ok_or(Error::SingularMatrix)?;
            u += &tangent * da;
        }
        best.ok_or(Error::SingularMatrix)
    }
}

/// Bisection for the zero of `alpha` along the Taylor polynomial on `[0, h]`.
/// Returns the right end of the final bracket, on the far side of the section.
fn locate_root(c: &[Vec<f64>], section: &Section, h: f64, g0: f64) -> f64 {
    let (mut a, mut b) = (0.0, h);
    let sign0 = g0 > 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm: f64 = section.value(&horner(c, m));
        if (gm > 0.0) == sign0 && gm != 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    b
}
