//! Periodic orbits, sections, frames and initial sets for the experiments.

use nalgebra::DMatrix;
use poincare_core::interval::{Interval, IntervalVector};
use poincare_core::poincare::{
    build_coordinates, compute_poincare_map, cto_section, max_angle_cto_point, orthogonal_section,
    CoordinateFrame, CrossingConfig, CrossingDirection, PoincareMap, Section, Strategy,
};
use poincare_core::sets::{Doubleton, RepresentableSet};
use poincare_core::solver::{PointSolver, SolverConfig};
use poincare_core::systems::{entry, BenchmarkField, CatalogEntry};
use rand::Rng;

use crate::error::{ExperimentError, Result};
use crate::spec::SectionMode;

/// Scan resolution used to locate the max-angle CTO point.
pub const ANGLE_SAMPLES: usize = 200;

/// A catalog orbit after the optional Newton polish.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub entry: CatalogEntry,
    pub point: Vec<f64>,
    pub period: f64,
    pub monodromy: DMatrix<f64>,
}

impl Orbit {
    pub fn new(system: &str, solver: &PointSolver) -> Result<Self> {
        let entry = entry(system)?;
        let orb = entry.periodic_orbit(solver)?;
        Ok(Orbit { entry, point: orb.point, period: orb.period, monodromy: orb.monodromy })
    }
}

/// A section through a point of the orbit, with the crossing schedule that
/// makes one full period and the monodromy over it.
#[derive(Clone, Debug)]
pub struct SectionSetup {
    pub mode: SectionMode,
    pub map: PoincareMap,
    pub point: Vec<f64>,
    pub monodromy: DMatrix<f64>,
}

impl SectionSetup {
    pub fn new(orbit: &Orbit, mode: SectionMode, solver: &PointSolver) -> Result<Self> {
        let field = &orbit.entry.field;
        let (section, point, monodromy) = match mode {
            SectionMode::Standard => {
                let map = PoincareMap::new(orbit.entry.section(), orbit.entry.schedule.clone())?;
                return Ok(SectionSetup {
                    mode,
                    map,
                    point: orbit.point.clone(),
                    monodromy: orbit.monodromy.clone(),
                });
            }
            SectionMode::Orthogonal => {
                (orthogonal_section(field, &orbit.point)?, orbit.point.clone(), orbit.monodromy.clone())
            }
            SectionMode::Cto => {
                (cto_section(field, solver, &orbit.point, orbit.period)?, orbit.point.clone(), orbit.monodromy.clone())
            }
            SectionMode::MaxAngleCto => {
                let best = max_angle_cto_point(field, solver, &orbit.point, orbit.period, ANGLE_SAMPLES)?;
                let (_, m) = solver.flow_with_monodromy(field, &best.point, orbit.period)?;
                (best.section, best.point, m)
            }
        };
        let schedule = period_schedule(field, solver, &section, &point, orbit.period)?;
        Ok(SectionSetup { mode, map: PoincareMap::new(section, schedule)?, point, monodromy })
    }

    pub fn section(&self) -> &Section {
        self.map.section()
    }
}

/// Directions of the crossings of `section` along one period of the orbit
/// through `point`, ending with the return to `point`.
fn period_schedule(
    field: &BenchmarkField,
    solver: &PointSolver,
    section: &Section,
    point: &[f64],
    period: f64,
) -> Result<Vec<CrossingDirection>> {
    let slack = 1e-6 * period;
    let crossings = solver.crossings(field, point, section, period + slack)?;
    let mut schedule = Vec::new();
    for (t, increasing) in crossings.into_iter().filter(|(t, _)| *t > slack) {
        schedule.push(if increasing { CrossingDirection::Increasing } else { CrossingDirection::Decreasing });
        if (t - period).abs() <= slack {
            return Ok(schedule);
        }
    }
    Err(ExperimentError::InvalidSpec("orbit does not return to the section within one period".into()))
}

/// `center + G r` with `r_i` ranging over `[-radii_i, radii_i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialSet {
    pub center: Vec<f64>,
    pub generators: DMatrix<f64>,
    pub radii: Vec<f64>,
}

impl InitialSet {
    pub fn to_set(&self) -> Result<RepresentableSet, poincare_core::Error> {
        let r = IntervalVector::new(self.radii.iter().map(|&r| Interval::symmetric(r)).collect());
        Ok(Doubleton::affine(self.center.clone(), self.generators.clone(), r)?.into())
    }

    /// A point of the set with uniformly drawn parameters.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let r: Vec<f64> = self.radii.iter().map(|&r| if r > 0.0 { r * rng.gen_range(-1.0..=1.0) } else { 0.0 }).collect();
        let n = self.center.len();
        (0..n)
            .map(|i| self.center[i] + (0..r.len()).map(|j| self.generators[(i, j)] * r[j]).sum::<f64>())
            .collect()
    }
}

/// One experiment row: a Poincaré map enclosure for one set size.
#[derive(Clone, Debug)]
pub struct Case {
    pub system: String,
    pub strategy: Strategy,
    pub section: SectionMode,
    pub s: f64,
    pub field: BenchmarkField,
    pub map: PoincareMap,
    /// Frame the map is enclosed in.
    pub frame: CoordinateFrame,
    /// Frame the coordinates are reported in; differs from `frame` only for
    /// cartesian runs, which are transformed afterwards.
    pub report: CoordinateFrame,
    pub initial: InitialSet,
    pub max_time: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub return_time: Interval,
    /// Encloses `A (P(X) - y)` in the reporting frame.
    pub z: IntervalVector,
    /// `y + dy` in the enclosing frame.
    pub sliding: IntervalVector,
}

impl Case {
    pub fn run(&self, solver: &SolverConfig) -> Result<Outcome, poincare_core::Error> {
        let cfg = CrossingConfig::default().with_solver(*solver).with_max_time(self.max_time);
        let x = self.initial.to_set()?;
        let enc = compute_poincare_map(&self.field, &x, &self.map, &self.frame, &cfg)?;
        let z = if self.frame.strategy == Strategy::Cartesian {
            self.report.a.mat_vec(&enc.z.sub_point(&self.report.anchor))?
        } else {
            enc.z.clone()
        };
        Ok(Outcome { return_time: enc.return_time, z, sliding: enc.sliding() })
    }
}

/// `u + B r` with `r = s/2 (0, [-1, 1], ..., [-1, 1])`.
fn section_set(u: &[f64], b: &DMatrix<f64>, s: f64) -> InitialSet {
    let radii = (0..u.len()).map(|i| if i == 0 { 0.0 } else { 0.5 * s }).collect();
    InitialSet { center: u.to_vec(), generators: b.clone(), radii }
}

/// Cases for the catalog section (`SectionMode::Standard`) or a section
/// rebuilt through the orbit.
pub fn section_cases(
    orbit: &Orbit,
    setup: &SectionSetup,
    strategy: Strategy,
    sizes: &[f64],
) -> Result<Vec<Case>> {
    let field = orbit.entry.field;
    let u = &setup.point;
    let flowdir = build_coordinates(Strategy::DiagFlowdir, &field, setup.section(), u, &setup.monodromy)?;
    let (frame, report, generators) = match strategy {
        Strategy::DiagFlowdir => (flowdir.clone(), flowdir.clone(), flowdir.b.clone()),
        Strategy::DiagNormal => {
            let normal = build_coordinates(strategy, &field, setup.section(), u, &setup.monodromy)?;
            (normal.clone(), normal.clone(), normal.b)
        }
        // columns 2..n of both diagonal frames agree, so the sets coincide
        Strategy::Cartesian => (CoordinateFrame::cartesian(u.len()), flowdir.clone(), flowdir.b.clone()),
        Strategy::Custom => return Err(ExperimentError::InvalidSpec("custom frames are not an experiment".into())),
    };
    Ok(sizes
        .iter()
        .map(|&s| Case {
            system: orbit.entry.name.clone(),
            strategy,
            section: setup.mode,
            s,
            field,
            map: setup.map.clone(),
            frame: frame.clone(),
            report: report.clone(),
            initial: section_set(u, &generators, s),
            max_time: 2.0 * orbit.period,
        })
        .collect())
}

/// Van der Pol cases. `Orthogonal` is the section `y = 0` with `A = Id`,
/// `y = u0` and the initial segment `u0 + ([-d, d], 0)`; `Cto` uses the CTO
/// section with the diag+flowdir frame and `u0 + B (0, [-d, d])`.
pub fn vdp_cases(orbit: &Orbit, mode: SectionMode, deltas: &[f64], solver: &PointSolver) -> Result<Vec<Case>> {
    let field = orbit.entry.field;
    let u0 = &orbit.point;
    let (map, frame, strategy, generators, radius_at) = match mode {
        SectionMode::Orthogonal => {
            let map = PoincareMap::new(orbit.entry.section(), orbit.entry.schedule.clone())?;
            (map, CoordinateFrame::translated(u0.clone()), Strategy::Custom, DMatrix::identity(2, 2), 0)
        }
        SectionMode::Cto => {
            let section = cto_section(&field, solver, u0, orbit.period)?;
            let frame = build_coordinates(Strategy::DiagFlowdir, &field, &section, u0, &orbit.monodromy)?;
            let b = frame.b.clone();
            (PoincareMap::first_return(section), frame, Strategy::DiagFlowdir, b, 1)
        }
        m => return Err(ExperimentError::InvalidSpec(format!("van der Pol tables use orthogonal or cto sections, not {m}"))),
    };
    if deltas.iter().any(|d| !(1e-9..=1e-1).contains(d)) {
        return Err(ExperimentError::InvalidSpec("deltas must lie in [1e-9, 1e-1]".into()));
    }
    Ok(deltas
        .iter()
        .map(|&d| {
            let mut radii = vec![0.0; 2];
            radii[radius_at] = d;
            Case {
                system: orbit.entry.name.clone(),
                strategy,
                section: mode,
                s: d,
                field,
                map: map.clone(),
                frame: frame.clone(),
                report: frame.clone(),
                initial: InitialSet { center: u0.clone(), generators: generators.clone(), radii },
                max_time: 2.0 * orbit.period,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_stay_in_the_parameter_box() {
        let set = InitialSet {
            center: vec![1.0, 2.0],
            generators: DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
            radii: vec![0.0, 0.5],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = set.sample(&mut rng);
            assert!((p[0] - 1.0).abs() <= 0.5);
            assert_eq!(p[1], 2.0);
        }
        let hull = set.to_set().unwrap().enclose().unwrap();
        assert!(hull[0].contains(1.5) && hull[1].contains(2.0));
    }
}
