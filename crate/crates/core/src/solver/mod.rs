//! Validated Taylor integration of doubletons (Lohner's method with QR
//! reorganization of the accumulated error).

mod point;

pub use point::{PeriodicOrbit, PointCrossing, PointSolver};

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::interval::round::two_sum;
use crate::interval::{verified_inverse, Interval, IntervalMatrix, IntervalVector};
use crate::jets::{solution_jet, variational_jet, IntervalField, VectorField};
use crate::sets::{Doubleton, RepresentableSet};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub order: usize,
    /// Local error target relative to `max(1, |x|)`.
    pub tol: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Radius growth factor per failed a-priori validation attempt.
    pub inflation: f64,
    pub max_validation_attempts: usize,
    pub max_rejections: usize,
    /// Enclosures whose hull is wider than this are reported as divergent.
    pub max_width: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            order: 20,
            tol: 1e-16,
            min_step: 1e-12,
            max_step: 1.0,
            inflation: 1.5,
            max_validation_attempts: 8,
            max_rejections: 40,
            max_width: 1e3,
        }
    }
}

impl SolverConfig {
    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=40).contains(&self.order) {
            return Err(Error::InvalidInput(format!("order {} out of range", self.order)));
        }
        if !(self.min_step > 0.0 && self.min_step <= self.max_step) {
            return Err(Error::InvalidInput("require 0 < min_step <= max_step".into()));
        }
        if !(self.tol > 0.0 && self.inflation > 1.0) {
            return Err(Error::InvalidInput("tolerance and inflation must be positive".into()));
        }
        Ok(())
    }
}

/// Result of one validated step of length `step`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepResult {
    /// Encloses `phi(step, X)`.
    pub set: Doubleton,
    /// Encloses `phi([0, step], X)`.
    pub tube: IntervalVector,
    pub step: f64,
}

/// Enclosure of the trajectory over a time interval.
#[derive(Clone, Debug, PartialEq)]
pub struct TubeSegment {
    pub t_lo: f64,
    pub t_hi: f64,
    pub enclosure: IntervalVector,
}

/// A-priori enclosure: a box `E` with `phi([0, h], x) ∈ E` for all `x ∈ X`,
/// validated by `X + [0, h] f(E) ⊆ E`. Returns the Picard image, which is
/// itself such an enclosure.
pub fn apriori_enclosure<F: VectorField>(
    field: &F,
    x: &IntervalVector,
    h: f64,
    cfg: &SolverConfig,
) -> Result<IntervalVector> {
    if !(h >= 0.0) {
        return Err(Error::InvalidInput("step must be nonnegative".into()));
    }
    let seed = match solution_jet(field, x, cfg.order) {
        Ok(c) => taylor_range(&c, h),
        Err(_) => x.clone(),
    };
    validate_enclosure(field, x, h, seed, cfg).ok_or(Error::StepRejected { time: 0.0, step: h })
}

fn validate_enclosure<F: VectorField>(
    field: &F,
    x: &IntervalVector,
    h: f64,
    seed: IntervalVector,
    cfg: &SolverConfig,
) -> Option<IntervalVector> {
    let span = Interval::new(0.0, h).ok()?;
    let mut e = seed.hull(x).ok()?;
    for _ in 0..cfg.max_validation_attempts {
        let z = &field.eval_box(&e).scale(span) + x;
        if !z.is_finite() {
            return None;
        }
        if z.subset_of(&e) {
            return Some(z);
        }
        let grown = e.hull(&z).ok()?;
        e = grown.iter().map(|c| c.inflate(cfg.inflation, f64::EPSILON * c.mag())).collect();
    }
    None
}

/// Hull of `sum_k c_k [0, h]^k`.
fn taylor_range(c: &[Vec<Interval>], h: f64) -> IntervalVector {
    let n = c[0].len();
    let mut acc = IntervalVector::new(c[0].clone());
    let mut hk = Interval::ONE;
    let span = Interval::new(0.0, h).unwrap_or(Interval::ZERO);
    for ck in &c[1..] {
        hk = hk * span;
        for i in 0..n {
            acc[i] += ck[i] * hk;
        }
    }
    acc
}

/// A step not exceeding `h` such that `t + step` is exactly representable,
/// so that accumulated times carry no rounding error. For `t > 0` the step is
/// capped at `t`, which makes the difference `fl(t + h) - t` exact.
pub fn exact_step(t: f64, h: f64) -> f64 {
    let h = if t > 0.0 { h.min(t) } else { h };
    let mut t1 = t + h;
    let mut hs = t1 - t;
    if hs > h {
        t1 = t1.next_down();
        hs = t1 - t;
    }
    hs
}

/// Validated integrator state: a doubleton at an exact time.
#[derive(Clone, Debug)]
pub struct Integrator<'a, F> {
    field: &'a F,
    cfg: SolverConfig,
    set: Doubleton,
    time: f64,
    last_step: Option<f64>,
}

impl<'a, F: VectorField> Integrator<'a, F> {
    pub fn new(field: &'a F, set: &RepresentableSet, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        if set.dim() != field.dim() {
            return Err(Error::DimensionMismatch { expected: field.dim(), found: set.dim() });
        }
        Ok(Integrator { field, cfg, set: set.to_doubleton()?, time: 0.0, last_step: None })
    }

    /// Like [`Integrator::new`], with the set given at the absolute time `time`.
    pub fn starting_at(
        field: &'a F,
        set: &RepresentableSet,
        time: f64,
        cfg: SolverConfig,
    ) -> Result<Self> {
        if !time.is_finite() {
            return Err(Error::InvalidInput("start time must be finite".into()));
        }
        let mut it = Integrator::new(field, set, cfg)?;
        it.time = time;
        Ok(it)
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Caps subsequent steps at `max_step`.
    pub fn set_max_step(&mut self, max_step: f64) {
        self.cfg.max_step = max_step.max(self.cfg.min_step);
        self.last_step = self.last_step.map(|h| h.min(self.cfg.max_step));
    }

    pub fn set(&self) -> &Doubleton {
        &self.set
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Advances by one step, not beyond the absolute time `target`.
    pub fn step(&mut self, target: f64) -> Result<StepResult> {
        if !(target > self.time) {
            return Err(Error::InvalidInput("step target must lie ahead".into()));
        }
        let res = one_step_at(self.field, &self.set, target, self.time, self.last_step, &self.cfg)?;
        self.time += res.step;
        self.last_step = Some(res.step);
        self.set = res.set.clone();
        Ok(res)
    }

    /// Integrates to the absolute time `t`, returning the tube.
    pub fn advance_to(&mut self, t: f64) -> Result<Vec<TubeSegment>> {
        let mut tube = Vec::new();
        while self.time < t {
            let t0 = self.time;
            let r = self.step(t)?;
            tube.push(TubeSegment { t_lo: t0, t_hi: self.time, enclosure: r.tube });
        }
        Ok(tube)
    }
}

/// One validated step from time 0 with the step chosen by the solver.
pub fn one_step<F: VectorField>(
    field: &F,
    set: &RepresentableSet,
    cfg: &SolverConfig,
) -> Result<StepResult> {
    cfg.validate()?;
    one_step_at(field, &set.to_doubleton()?, cfg.max_step, 0.0, None, cfg)
}

fn one_step_at<F: VectorField>(
    field: &F,
    x: &Doubleton,
    target: f64,
    time: f64,
    previous: Option<f64>,
    cfg: &SolverConfig,
) -> Result<StepResult> {
    let hull = x.enclose();
    if !hull.is_finite() || hull.max_diam() > cfg.max_width {
        return Err(Error::Divergence { time });
    }
    let center = IntervalVector::from_point(x.center());
    let center_jet = solution_jet(field, &center, cfg.order).map_err(|_| Error::Divergence { time })?;
    let mut h = predicted_step(&center_jet, x.center(), cfg);
    if let Some(prev) = previous {
        // limit growth to avoid oscillating rejections
        h = h.min(4.0 * prev);
    }
    let mut rejections = 0;
    loop {
        let hs = step_towards(time, target, h);
        match try_step(field, x, &hull, &center_jet, hs, cfg) {
            Some(r) => return r.map_err(|e| with_time(e, time)),
            None => {
                rejections += 1;
                if rejections > cfg.max_rejections || hs / 2.0 < cfg.min_step {
                    return Err(Error::StepRejected { time, step: hs });
                }
                h = hs / 2.0;
            }
        }
    }
}

/// Step of length at most `h` from `time`, landing exactly on `target` when
/// it is within reach.
fn step_towards(time: f64, target: f64, h: f64) -> f64 {
    let d = target - time;
    if h >= d {
        let (s, e) = two_sum(time, d);
        if s == target && e == 0.0 {
            return d;
        }
        return exact_step(time, 0.5 * d);
    }
    exact_step(time, h)
}

fn with_time(e: Error, time: f64) -> Error {
    match e {
        Error::Divergence { .. } => Error::Divergence { time },
        other => other,
    }
}

fn predicted_step(c: &[Vec<Interval>], x: &[f64], cfg: &SolverConfig) -> f64 {
    let p = cfg.order;
    let scale = cfg.tol * x.iter().fold(1.0f64, |a, b| a.max(b.abs()));
    let mut h = cfg.max_step;
    for k in [p - 1, p] {
        let m = c[k].iter().fold(0.0f64, |a, v| a.max(v.mag()));
        if m > 0.0 {
            h = h.min((scale / m).powf(1.0 / k as f64));
        }
    }
    h.max(cfg.min_step)
}

/// Returns `None` when the a-priori enclosure cannot be validated for `h`.
fn try_step<F: VectorField>(
    field: &F,
    x: &Doubleton,
    hull: &IntervalVector,
    center_jet: &[Vec<Interval>],
    h: f64,
    cfg: &SolverConfig,
) -> Option<Result<StepResult>> {
    let n = field.dim();
    let p = cfg.order;
    let hi = Interval::point(h);
    let span = Interval::new(0.0, h).ok()?;

    let id: Vec<Vec<Interval>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Interval::ONE } else { Interval::ZERO }).collect())
        .collect();
    let (hull_jet, var_jet) = match variational_jet(field, hull, &id, p) {
        Ok(r) => r,
        Err(e) => return Some(Err(e)),
    };
    let seed = taylor_range(&hull_jet, h);
    let e = validate_enclosure(field, hull, h, seed, cfg)?;
    let e_jet = solution_jet(field, &e, p + 1).ok()?;
    let rem_coeff = &e_jet[p + 1];

    // value at t = h: center polynomial plus remainder
    let mut hk = Interval::ONE;
    let mut y: Vec<Interval> = center_jet[0].clone();
    for ck in &center_jet[1..] {
        hk = hk * hi;
        for i in 0..n {
            y[i] += ck[i] * hk;
        }
    }
    let hp1 = hk * hi;
    for i in 0..n {
        y[i] += rem_coeff[i] * hp1;
    }
    let y = IntervalVector::new(y);

    // Jacobian of the Taylor polynomial over the hull
    let mut jac = IntervalMatrix::from_fn(n, n, |i, j| var_jet[p][i][j]);
    for vk in var_jet.iter().rev().skip(1) {
        jac = jac.scale(hi).add(&IntervalMatrix::from_fn(n, n, |i, j| vk[i][j])).ok()?;
    }

    // tube over [0, h]
    let mut tube = taylor_range(&hull_jet, h);
    let span_p1 = span.powi((p + 1) as u32);
    for i in 0..n {
        tube[i] += rem_coeff[i] * span_p1;
    }
    let tube = match tube.intersect(&e) {
        Ok(t) => t,
        Err(err) => return Some(Err(err)),
    };

    Some(lohner_update(x, &y, &jac, tube, h))
}

fn lohner_update(
    x: &Doubleton,
    y: &IntervalVector,
    jac: &IntervalMatrix,
    tube: IntervalVector,
    h: f64,
) -> Result<StepResult> {
    let n = y.dim();
    let jc = jac.mat_mul_point(x.c())?;
    let c_new = jc.mid();
    let delta_c = jc.sub_point(&c_new)?;
    let x_new = y.mid();
    let s = y.sub_point(&x_new);

    let jq = jac.mat_mul_point(x.q_matrix())?;
    let q_new = orthogonal_basis(&jq.mid(), x.q());
    let q_inv = verified_inverse(&IntervalMatrix::from_point(&q_new))?;
    let q_part = &(&q_inv.mat_vec(&s)? + &q_inv.mat_mul(&delta_c)?.mat_vec(x.r0())?)
        + &q_inv.mat_mul(&jq)?.mat_vec(x.q())?;
    if !q_part.is_finite() {
        return Err(Error::Divergence { time: f64::NAN });
    }
    debug_assert_eq!(q_part.dim(), n);
    let set = Doubleton::from_parts(x_new, c_new, x.r0().clone(), q_new, q_part);
    Ok(StepResult { set, tube, step: h })
}

/// Orthogonal factor of the QR decomposition of `m` with columns taken in
/// order of decreasing `|m_j| diam(q_j)`, signs fixed so that `R` has a
/// nonnegative diagonal. Falls back to `m` itself when `m` is singular.
fn orthogonal_basis(m: &DMatrix<f64>, q: &IntervalVector) -> DMatrix<f64> {
    let n = m.ncols();
    let mut order: Vec<usize> = (0..n).collect();
    let weight: Vec<f64> = (0..n).map(|j| m.column(j).norm() * q[j].diam()).collect();
    order.sort_by(|&a, &b| weight[b].total_cmp(&weight[a]).then(a.cmp(&b)));
    let permuted = DMatrix::from_columns(&order.iter().map(|&j| m.column(j)).collect::<Vec<_>>());
    let qr = permuted.qr();
    let (mut qm, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            qm.column_mut(j).neg_mut();
        }
    }
    if (0..n).any(|j| r[(j, j)].abs() < 1e-300) || qm.iter().any(|v| !v.is_finite()) {
        return DMatrix::identity(n, n);
    }
    qm
}

/// Integrates `set` to time `t`, returning `phi(t, set)` and the tube over `[0, t]`.
pub fn integrate_to<F: VectorField>(
    field: &F,
    set: &RepresentableSet,
    t: f64,
    cfg: &SolverConfig,
) -> Result<(Doubleton, Vec<TubeSegment>)> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput("integration time must be nonnegative".into()));
    }
    let mut it = Integrator::new(field, set, *cfg)?;
    let tube = it.advance_to(t)?;
    Ok((it.set, tube))
}

/// Encloses `phi([0, tau], set)`.
pub fn eval_over_time_range<F: VectorField>(
    field: &F,
    set: &RepresentableSet,
    tau: f64,
    cfg: &SolverConfig,
) -> Result<IntervalVector> {
    let mut hull = set.enclose()?;
    if tau > 0.0 {
        let (_, tube) = integrate_to(field, set, tau, cfg)?;
        for seg in &tube {
            hull = hull.hull(&seg.enclosure)?;
        }
    }
    Ok(hull)
}

/// CSV rendering of a tube: `t_lo,t_hi,x0_lo,x0_hi,...`.
pub fn tube_to_csv(tube: &[TubeSegment]) -> String {
    let mut out = String::new();
    if let Some(first) = tube.first() {
        out.push_str("t_lo,t_hi");
        for i in 0..first.enclosure.dim() {
            let _ = write!(out, ",x{i}_lo,x{i}_hi");
        }
        out.push('\n');
    }
    for seg in tube {
        let _ = write!(out, "{:.17e},{:.17e}", seg.t_lo, seg.t_hi);
        for v in seg.enclosure.iter() {
            let _ = write!(out, ",{:.17e},{:.17e}", v.lo(), v.hi());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{Harmonic, Linear, Transport};

    #[test]
    fn exact_steps_sum_exactly() {
        let mut t = 0.0;
        for h in [0.1, 0.3, 1e-3, 0.7, 1.0 / 3.0] {
            let hs = exact_step(t, h);
            let cap = if t > 0.0 { h.min(t) } else { h };
            assert!(hs <= h && hs > 0.99 * cap);
            let (s, e) = two_sum(t, hs);
            assert_eq!(e, 0.0);
            t = s;
        }
    }

    #[test]
    fn zero_field_keeps_the_set() {
        let f = Linear::diagonal(&[0.0, 0.0]);
        let b = IntervalVector::from_bounds(&[0.0, 1.0], &[0.5, 1.5]).unwrap();
        let r = one_step(&f, &RepresentableSet::from(b.clone()), &SolverConfig::default()).unwrap();
        let e = r.set.enclose();
        for i in 0..2 {
            assert!(b[i].subset_of(&e[i]));
            assert!(e[i].diam() - b[i].diam() < 1e-15);
        }
    }

    #[test]
    fn apriori_for_constant_transport() {
        let f = Transport { velocity: vec![1.0, 0.0] };
        let e = apriori_enclosure(&f, &IntervalVector::zeros(2), 1.0, &SolverConfig::default()).unwrap();
        assert!(e[0].lo() <= 0.0 && e[0].hi() >= 1.0);
        assert_eq!(e[1], Interval::ZERO);
    }

    #[test]
    fn transport_to_unit_time() {
        let f = Transport { velocity: vec![1.0, 0.0] };
        let x = RepresentableSet::from(IntervalVector::from_point(&[0.0, 2.5]));
        let (xt, tube) = integrate_to(&f, &x, 1.0, &SolverConfig::default()).unwrap();
        let e = xt.enclose();
        assert!(e.contains_point(&[1.0, 2.5]));
        assert!(e.max_diam() < 1e-13);
        assert!(tube[0].enclosure[0].lo() <= 0.0);
        let hull = eval_over_time_range(&f, &x, 1.0, &SolverConfig::default()).unwrap();
        assert!(hull[0].lo() <= 0.0 && hull[0].hi() >= 1.0);
        assert!(hull[1].diam() < 1e-13);
    }

    #[test]
    fn diagonal_linear_step() {
        let f = Linear::diagonal(&[1.0, -2.0]);
        let x = RepresentableSet::from(IntervalVector::from_point(&[1.0, 1.0]));
        let (xt, _) = integrate_to(&f, &x, 0.1, &SolverConfig::default()).unwrap();
        let e = xt.enclose();
        assert!(e.contains_point(&[0.1f64.exp(), (-0.2f64).exp()]));
        assert!(e.max_diam() < 1e-12);
    }

    #[test]
    fn harmonic_full_period() {
        let x = RepresentableSet::from(IntervalVector::from_point(&[1.0, 0.0]));
        let (xt, _) = integrate_to(&Harmonic, &x, 2.0 * std::f64::consts::PI, &SolverConfig::default()).unwrap();
        let e = xt.enclose();
        // 2 pi in binary64 differs from the true period by about 2.4e-16
        assert!(e.contains_point(&[1.0, 2.449_293_598_294_706_4e-16]));
        assert!(e.max_diam() < 1e-8);
    }

    #[test]
    fn tube_csv_has_header_and_rows() {
        let f = Transport { velocity: vec![1.0] };
        let (_, tube) = integrate_to(
            &f,
            &RepresentableSet::from(IntervalVector::from_point(&[0.0])),
            2.5,
            &SolverConfig::default(),
        )
        .unwrap();
        let csv = tube_to_csv(&tube);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t_lo,t_hi,x0_lo,x0_hi");
        assert_eq!(lines.len(), tube.len() + 1);
    }
}
