//! Rigorous detection of section crossings and interval-Newton refinement of
//! the return time.

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalVector};
use crate::jets::VectorField;
use crate::sets::{eval, Doubleton, RepresentableSet};
use crate::solver::{Integrator, PointSolver, SolverConfig};

use super::section::{CrossingDirection, Section, SectionMap};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingConfig {
    pub solver: SolverConfig,
    /// Integration horizon; no crossing before it is reported as `NoCrossing`.
    pub max_time: f64,
    /// Minimum flight time. Crossings before it are ignored and the set at
    /// this time must lie strictly on one side of the section. When `None`,
    /// a set starting on the section must leave it monotonically instead.
    pub min_flight: Option<f64>,
    /// How many times a non-transversal zone is re-integrated with a step
    /// cap reduced four-fold.
    pub max_subdivisions: usize,
    /// Attempts at the narrow bracket, its half-width growing four-fold each time.
    pub bracket_retries: usize,
    pub newton_iterations: usize,
}

impl Default for CrossingConfig {
    fn default() -> Self {
        CrossingConfig {
            solver: SolverConfig::default(),
            max_time: 100.0,
            min_flight: None,
            max_subdivisions: 4,
            bracket_retries: 6,
            newton_iterations: 5,
        }
    }
}

impl CrossingConfig {
    pub fn with_solver(mut self, solver: SolverConfig) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_max_time(mut self, max_time: f64) -> Self {
        self.max_time = max_time;
        self
    }
}

/// A Poincaré map: the crossing of `section` reached after following the
/// crossing directions in `schedule`. Crossings whose direction differs from
/// the next scheduled one are passed through.
#[derive(Clone, Debug, PartialEq)]
pub struct PoincareMap {
    section: Section,
    schedule: Vec<CrossingDirection>,
}

impl PoincareMap {
    pub fn new(section: Section, schedule: Vec<CrossingDirection>) -> Result<Self> {
        if schedule.is_empty() {
            return Err(Error::InvalidInput("empty crossing schedule".into()));
        }
        Ok(PoincareMap { section, schedule })
    }

    /// First return to `section` under its own crossing direction.
    pub fn first_return(section: Section) -> Self {
        let d = section.direction();
        PoincareMap { section, schedule: vec![d] }
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn schedule(&self) -> &[CrossingDirection] {
        &self.schedule
    }

    /// The section constrained to the final crossing direction.
    pub fn target(&self) -> Section {
        self.section.with_direction(*self.schedule.last().expect("schedule is nonempty"))
    }
}

/// The return time is contained in `t1 + window`; `x1` encloses `phi(t1, X)`.
/// Along every trajectory from `X` the section function is strictly monotone
/// over the window and changes sign in it.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossingBracket {
    pub t1: f64,
    pub x1: RepresentableSet,
    /// Offsets from `t1`, inside `[0, t2 - t1]`.
    pub window: Interval,
    pub transversal: bool,
    pub increasing: bool,
}

impl CrossingBracket {
    /// Absolute enclosure of the return time.
    pub fn time(&self) -> Interval {
        Interval::point(self.t1) + self.window
    }

    pub fn with_window(&self, window: Interval) -> Self {
        CrossingBracket { window, ..self.clone() }
    }
}

fn alpha_on_set(section: &Section, set: &Doubleton) -> Result<Interval> {
    Ok(eval(&RepresentableSet::Doubleton(set.clone()), &SectionMap(section))?[0])
}

/// `d/dt alpha` along the flow, over a box.
pub(crate) fn alpha_rate<F: VectorField>(field: &F, section: &Section, b: &IntervalVector) -> Interval {
    let grad = section.gradient(b);
    let f = field.eval(b);
    grad.iter().zip(&f).fold(Interval::ZERO, |acc, (&g, &fi)| acc + g * fi)
}

/// A maximal run of steps whose tubes may meet the section.
struct Zone {
    start_time: f64,
    start: Doubleton,
    /// Sign of `alpha` before the zone; `None` when starting on the section.
    entry: Option<bool>,
    rate: Interval,
}

/// `crossing` is set when every trajectory crosses exactly once in the zone.
struct Outcome {
    exit: bool,
    crossing: bool,
}

struct Detector<'a, F> {
    field: &'a F,
    section: &'a Section,
    cfg: &'a CrossingConfig,
}

impl<'a, F: VectorField> Detector<'a, F> {
    /// Integrates the zone from its start until the set is certified on one
    /// side of the section, checking transversality on every tube. Returns the
    /// integrator positioned at the zone exit, the exit sign and the rate hull.
    fn traverse(
        &self,
        zone_start: &Doubleton,
        t_start: f64,
        max_step: f64,
    ) -> Result<Option<(Integrator<'a, F>, bool, Interval)>> {
        let mut it = Integrator::starting_at(
            self.field,
            &RepresentableSet::Doubleton(zone_start.clone()),
            t_start,
            self.cfg.solver,
        )?;
        it.set_max_step(max_step);
        let mut rate: Option<Interval> = None;
        loop {
            if it.time() >= self.cfg.max_time {
                return Err(Error::NoCrossing { time: it.time() });
            }
            let step = it.step(self.cfg.max_time)?;
            let g = alpha_rate(self.field, self.section, &step.tube);
            if g.contains(0.0) {
                return Ok(None);
            }
            let merged = rate.map_or(g, |r| r.hull(&g));
            if merged.contains(0.0) {
                return Ok(None);
            }
            rate = Some(merged);
            if let Some(sign) = Section::sign_on(alpha_on_set(self.section, it.set())?) {
                return Ok(Some((it, sign, merged)));
            }
        }
    }

    /// Crosses a zone, subdividing when transversality cannot be verified.
    fn cross(&self, zone: &mut Zone, max_step: f64) -> Result<(Integrator<'a, F>, Outcome)> {
        let mut cap = max_step;
        for _ in 0..=self.cfg.max_subdivisions {
            if let Some((it, exit, rate)) = self.traverse(&zone.start, zone.start_time, cap)? {
                zone.rate = rate;
                let crossing = zone.entry.is_some_and(|entry| entry != exit);
                // leaving the section, or crossing it, follows the sign of the rate
                if (crossing || zone.entry.is_none()) && exit != (rate.lo() > 0.0) {
                    return Err(Error::SignAmbiguous { time: zone.start_time });
                }
                return Ok((it, Outcome { exit, crossing }));
            }
            cap /= 4.0;
        }
        Err(Error::TangencyRisk { time: zone.start_time })
    }

    /// Narrows the crossing in a transversal zone to `[t1, t2]` around the
    /// crossing of the centre trajectory, with half-width twice the estimated
    /// spread of crossing times.
    fn narrow(&self, zone: &Zone, t_exit: f64) -> Result<CrossingBracket> {
        let entry = zone.entry.expect("crossing zones start off the section");
        let full = (Interval::point(t_exit) - Interval::point(zone.start_time)).hi();
        let coarse = || CrossingBracket {
            t1: zone.start_time,
            x1: RepresentableSet::Doubleton(zone.start.clone()),
            window: Interval::new(0.0, full).expect("zone has positive length"),
            transversal: true,
            increasing: !entry,
        };
        let span = t_exit - zone.start_time;
        let point = PointSolver::default();
        let any = self.section.with_direction(CrossingDirection::Any);
        let centre = zone.start.center();
        let Ok(hit) = point.next_crossing(self.field, centre, &any, 0.0, 2.0 * span, false) else {
            return Ok(coarse());
        };
        let tau = hit.time.min(span);
        let t_mid = zone.start_time + tau;
        if !(t_mid > zone.start_time && t_mid < t_exit) {
            return Ok(coarse());
        }
        let start = RepresentableSet::Doubleton(zone.start.clone());
        let mut it = Integrator::starting_at(self.field, &start, zone.start_time, self.cfg.solver)?;
        it.advance_to(t_mid)?;
        let spread = alpha_on_set(self.section, it.set())?.rad();
        let speed = alpha_rate(self.field, self.section, &IntervalVector::from_point(&hit.point)).mag();
        let floor = 8.0 * f64::EPSILON * t_mid.abs().max(1.0);
        let mut m = 2.0 * spread / speed + floor;
        for _ in 0..self.cfg.bracket_retries {
            let t1 = (t_mid - m).max(zone.start_time);
            let t2 = (t_mid + m).min(t_exit);
            if let Some(b) = self.certify(zone, entry, t1, t2)? {
                return Ok(b);
            }
            m *= 4.0;
        }
        Ok(coarse())
    }

    fn certify(&self, zone: &Zone, entry: bool, t1: f64, t2: f64) -> Result<Option<CrossingBracket>> {
        let start = RepresentableSet::Doubleton(zone.start.clone());
        let mut it = Integrator::starting_at(self.field, &start, zone.start_time, self.cfg.solver)?;
        if t1 > zone.start_time {
            it.advance_to(t1)?;
        }
        if Section::sign_on(alpha_on_set(self.section, it.set())?) != Some(entry) {
            return Ok(None);
        }
        let x1 = it.set().clone();
        it.advance_to(t2)?;
        if Section::sign_on(alpha_on_set(self.section, it.set())?) != Some(!entry) {
            return Ok(None);
        }
        let width = Interval::point(t2) - Interval::point(t1);
        Ok(Some(CrossingBracket {
            t1,
            x1: RepresentableSet::Doubleton(x1),
            window: Interval::new(0.0, width.hi())?,
            transversal: true,
            increasing: !entry,
        }))
    }
}

/// Encloses the time at which trajectories from `x` complete `map`'s
/// schedule of crossings.
pub fn detect_crossing<F: VectorField>(
    field: &F,
    x: &RepresentableSet,
    map: &PoincareMap,
    cfg: &CrossingConfig,
) -> Result<CrossingBracket> {
    if x.dim() != field.dim() || map.section().dim() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), found: x.dim() });
    }
    let det = Detector { field, section: map.section(), cfg };
    let mut it = Integrator::new(field, x, cfg.solver)?;
    if let Some(delta) = cfg.min_flight {
        if delta > 0.0 {
            it.advance_to(delta)?;
        }
    }
    let mut pending = map.schedule();
    let mut side = Section::sign_on(alpha_on_set(map.section(), it.set())?);
    loop {
        if it.time() >= cfg.max_time {
            return Err(Error::NoCrossing { time: it.time() });
        }
        let (t0, x0) = (it.time(), it.set().clone());
        let step = it.step(cfg.max_time)?;
        let tube_sign = Section::sign_on(map.section().value(&step.tube));
        if tube_sign.is_some() && side.is_some() {
            side = tube_sign;
            continue;
        }
        if side.is_none() && cfg.min_flight.is_some() && t0 > 0.0 {
            return Err(Error::SignAmbiguous { time: t0 });
        }
        // the tube may meet the section: re-cross this zone carefully
        let mut zone = Zone { start_time: t0, start: x0, entry: side, rate: Interval::ZERO };
        let (next, outcome) = det.cross(&mut zone, cfg.solver.max_step)?;
        if outcome.crossing && pending[0].admits(outcome.exit) {
            if pending.len() == 1 {
                return det.narrow(&zone, next.time());
            }
            pending = &pending[1..];
        }
        side = Some(outcome.exit);
        let t = next.time();
        it = Integrator::starting_at(field, &RepresentableSet::Doubleton(next.set().clone()), t, cfg.solver)?;
    }
}

/// One interval-Newton step on `window`, with the set at its midpoint and the
/// tube over it computed from `bracket.x1`.
fn newton_step<F: VectorField>(
    field: &F,
    section: &Section,
    bracket: &CrossingBracket,
    window: Interval,
    cfg: &SolverConfig,
) -> Result<Interval> {
    let pass = WindowPass::run(field, &bracket.x1, window, cfg)?;
    let g0 = eval(&RepresentableSet::Doubleton(pass.x0), &SectionMap(section))?[0];
    let g = alpha_rate(field, section, &pass.tube);
    if g.contains(0.0) {
        return Err(Error::TangencyRisk { time: bracket.t1 });
    }
    let n = Interval::point(pass.t0) - g0.checked_div(g)?;
    window.intersect(&n)
}

/// The set at the window midpoint and the tube over the window, both
/// integrated from `x1` at relative time 0.
pub(crate) struct WindowPass {
    pub t0: f64,
    pub x0: Doubleton,
    pub tube: IntervalVector,
}

impl WindowPass {
    pub(crate) fn run<F: VectorField>(
        field: &F,
        x1: &RepresentableSet,
        window: Interval,
        cfg: &SolverConfig,
    ) -> Result<Self> {
        let (a, b) = (window.lo(), window.hi());
        let t0 = 0.5 * (a + b);
        let mut it = Integrator::new(field, x1, *cfg)?;
        if a > 0.0 {
            it.advance_to(a)?;
        }
        let mut tube = it.set().enclose();
        for seg in it.advance_to(t0)? {
            tube = tube.hull(&seg.enclosure)?;
        }
        let x0 = it.set().clone();
        for seg in it.advance_to(b)? {
            tube = tube.hull(&seg.enclosure)?;
        }
        Ok(WindowPass { t0, x0, tube })
    }
}

/// Interval-Newton refinement of the bracket's window. Stops after
/// `iterations` rounds or once a round shrinks the window by less than 10%.
pub fn refine_return_time<F: VectorField>(
    field: &F,
    section: &Section,
    bracket: &CrossingBracket,
    cfg: &CrossingConfig,
) -> Result<CrossingBracket> {
    let mut window = bracket.window;
    for _ in 0..cfg.newton_iterations {
        let next = newton_step(field, section, bracket, window, &cfg.solver)?;
        let shrunk = next.diam() < 0.9 * window.diam();
        window = next;
        if !shrunk {
            break;
        }
    }
    Ok(bracket.with_window(window))
}

/// A single Newton round on the current window, for fixed-point checks.
pub fn newton_round<F: VectorField>(
    field: &F,
    section: &Section,
    bracket: &CrossingBracket,
    cfg: &CrossingConfig,
) -> Result<CrossingBracket> {
    Ok(bracket.with_window(newton_step(field, section, bracket, bracket.window, &cfg.solver)?))
}
