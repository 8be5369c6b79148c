use poincare_core::jets::VectorField;
use poincare_core::linalg::eigenvalues;
use poincare_core::poincare::{cto_normal, CrossingDirection};
use poincare_core::solver::PointSolver;
use poincare_core::systems::{catalog, entry};
use poincare_oracle::{Direction, Dopri5};

fn oracle_dir(d: CrossingDirection) -> Direction {
    match d {
        CrossingDirection::Increasing => Direction::Increasing,
        CrossingDirection::Decreasing => Direction::Decreasing,
        CrossingDirection::Any => Direction::Any,
    }
}

#[test]
fn reference_points_return_to_themselves() {
    let oracle = Dopri5::with_tolerances(1e-13, 1e-15);
    for e in catalog() {
        let i = e.section_coordinate;
        let sched: Vec<Direction> = e.schedule.iter().map(|&d| oracle_dir(d)).collect();
        let ev = oracle
            .return_map(&|x: &[f64]| e.field.eval(x), &|x: &[f64]| x[i], &e.point, &sched, 3.0 * e.period)
            .unwrap();
        let dist = ev.point.iter().zip(&e.point).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(dist < 1e-6, "{}: {dist}", e.name);
        assert!((ev.time - e.period).abs() < 1e-8, "{}: {} vs {}", e.name, ev.time, e.period);
    }
}

#[test]
fn monodromy_multipliers_match_reference_values() {
    let ps = PointSolver::default();
    for e in catalog() {
        let orb = e.periodic_orbit(&ps).unwrap();
        let mut ev: Vec<f64> = eigenvalues(&orb.monodromy).iter().map(|&(re, im)| {
            assert!(im.abs() < 1e-8, "{}: complex multiplier", e.name);
            re
        }).collect();
        let one = ev.iter().enumerate().min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs())).unwrap().0;
        assert!((ev[one] - 1.0).abs() < 1e-4, "{}: {ev:?}", e.name);
        ev.remove(one);
        for &lam in &e.multipliers {
            let hit = ev.iter().any(|&m| if lam.abs() < 1e-6 { (m - lam).abs() < 1e-8 } else { (m / lam - 1.0).abs() < 1e-2 });
            assert!(hit, "{}: {lam} not among {ev:?}", e.name);
        }
    }
}

#[test]
fn cto_normals_are_left_eigenvectors() {
    let ps = PointSolver::default();
    for name in ["van-der-pol", "michelson", "rossler-h", "rossler-pd"] {
        let orb = entry(name).unwrap().periodic_orbit(&ps).unwrap();
        let (w, residual) = cto_normal(&orb.monodromy).unwrap();
        assert!(residual < 1e-8, "{name}: {residual}");
        let lhs = orb.monodromy.transpose() * &w;
        assert!((lhs - &w).norm() < 1e-8 * w.norm());
    }
}

#[test]
fn fields_are_nonzero_on_their_sections() {
    for e in catalog() {
        assert_eq!(e.point[e.section_coordinate], 0.0);
        assert!(e.field.eval(&e.point)[e.section_coordinate] != 0.0, "{}", e.name);
    }
}
