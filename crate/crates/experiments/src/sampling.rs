//! Sampled containment check: `A (P(x) - y) ∈ z` and `t(x) ∈ T` for points
//! of the initial set, integrated by the floating-point solver.

use poincare_core::interval::{Interval, IntervalVector};
use poincare_core::solver::PointSolver;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::setup::{Case, Outcome};

/// Absolute tolerance for the error of the floating-point samples themselves.
pub const SAMPLE_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    pub samples: usize,
    pub violations: usize,
    /// Largest distance of a sampled value outside its enclosure.
    pub worst_excess: f64,
}

/// Return time and image of `x` under the case's map.
pub fn sampled_image(case: &Case, x: &[f64], solver: &PointSolver) -> Result<(f64, Vec<f64>)> {
    let section = case.map.section();
    // points of the initial set lie on the section up to rounding
    let min_time = 1e-9 * case.max_time;
    let mut t = 0.0;
    let mut p = x.to_vec();
    for &d in case.map.schedule() {
        let c = solver.next_crossing(&case.field, &p, &section.with_direction(d), min_time, case.max_time - t, false)?;
        t += c.time;
        p = c.point;
    }
    Ok((t, p))
}

fn excess(v: Interval, p: Interval) -> f64 {
    (p.lo() - v.hi()).max(v.lo() - p.hi()).max(0.0)
}

pub fn check_containment(
    case: &Case,
    outcome: &Outcome,
    samples: usize,
    seed: u64,
    solver: &PointSolver,
) -> Result<Containment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = case.initial.sample(&mut rng);
        let (t, p) = sampled_image(case, &x, solver)?;
        let diff: Vec<f64> = p.iter().zip(&case.report.anchor).map(|(a, b)| a - b).collect();
        let zp = case.report.a.mat_vec(&IntervalVector::from_point(&diff))?;
        let mut e = excess(outcome.return_time, Interval::point(t));
        for (v, q) in outcome.z.iter().zip(zp.iter()) {
            e = e.max(excess(*v, *q));
        }
        if e > SAMPLE_SLACK {
            violations += 1;
        }
        worst = worst.max(e);
    }
    Ok(Containment { samples, violations, worst_excess: worst })
}
