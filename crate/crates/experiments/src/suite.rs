//! Property suite run by `verify`: sampled containment, CSV invariants,
//! scaling slopes, the cartesian cross-check, angle bounds and determinism.

use poincare_core::poincare::Strategy;
use poincare_core::solver::{PointSolver, SolverConfig};

use crate::csv;
use crate::error::Result;
use crate::runs::{angle_scan, fixed_cases, run_cases, van_der_pol_cases, CaseResult};
use crate::sampling::check_containment;
use crate::spec::{decades, SectionMode};

pub const SAMPLES_PER_ROW: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `check,status,detail` lines.
    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = ::csv::Writer::from_writer(Vec::new());
        wtr.write_record(["check", "status", "detail"])?;
        for c in &self.checks {
            wtr.write_record([c.name.as_str(), if c.passed { "PASS" } else { "FAIL" }, c.detail.as_str()])?;
        }
        let bytes = wtr.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("report is ASCII"))
    }
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Slope of `log diam` against `log s` for the value picked from each row.
pub fn log_slope(results: &[CaseResult], pick: impl Fn(&crate::setup::Outcome) -> f64) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in results {
        let d = pick(r.outcome.as_ref().ok()?);
        xs.push(r.case.s.ln());
        ys.push(d.ln());
    }
    Some(least_squares_slope(&xs, &ys))
}

fn row_label(r: &CaseResult) -> String {
    format!("{}/{}/{}/s={:e}", r.case.system, r.case.strategy, r.case.section, r.case.s)
}

/// One containment check per row; a failed row is a failed check.
pub fn containment_checks(results: &[CaseResult], samples: usize, seed: u64, solver: &PointSolver) -> Vec<Check> {
    results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let name = format!("containment {}", row_label(r));
            match &r.outcome {
                Err(e) => Check::new(name, false, format!("enclosure failed: {e}")),
                Ok(o) => match check_containment(&r.case, o, samples, seed.wrapping_add(i as u64), solver) {
                    Ok(c) => Check::new(
                        name,
                        c.violations == 0,
                        format!("{} of {} samples outside; worst excess {:e}", c.violations, c.samples, c.worst_excess),
                    ),
                    Err(e) => Check::new(name, false, format!("sampling failed: {e}")),
                },
            }
        })
        .collect()
}

fn csv_invariants(results: &[CaseResult]) -> Check {
    let rows = csv::rows(results);
    let bad = rows.iter().filter(|r| !r.is_error() && !(r.lo <= r.hi && r.ratio >= 0.0)).count();
    Check::new("csv lo<=hi and ratio>=0", bad == 0, format!("{bad} of {} rows violate", rows.len()))
}

fn slope_check(name: &str, slope: Option<f64>, target: f64, tol: f64) -> Check {
    match slope {
        Some(k) => Check::new(name, (k - target).abs() <= tol, format!("slope {k:.4} target {target} +- {tol}")),
        None => Check::new(name, false, "a row of the fit failed"),
    }
}

/// Whether every coordinate of `outer` contains the one of `inner`.
fn contains_all(outer: &crate::setup::Outcome, inner: &crate::setup::Outcome) -> bool {
    outer.z.iter().zip(inner.z.iter()).all(|(o, i)| i.subset_of(o))
}

pub fn run_property_suite(seed: u64, solver: &SolverConfig, jobs: usize) -> Result<Report> {
    let point = PointSolver::default();
    let mut checks = Vec::new();

    let sliding_sizes = decades(-6..=-3);
    let michelson = run_cases(fixed_cases("michelson", Strategy::DiagFlowdir, &sliding_sizes, &point)?, solver, jobs)?;
    let cartesian = run_cases(fixed_cases("michelson", Strategy::Cartesian, &[1e-6], &point)?, solver, jobs)?;
    let rossler = run_cases(fixed_cases("rossler-pd", Strategy::DiagFlowdir, &[1e-6], &point)?, solver, jobs)?;
    let fs = run_cases(fixed_cases("falkner-skan", Strategy::DiagFlowdir, &[1e-10], &point)?, solver, jobs)?;
    let vdp_orth = run_cases(van_der_pol_cases(SectionMode::Orthogonal, &[1e-6], &point)?, solver, jobs)?;
    let vdp_cto = run_cases(van_der_pol_cases(SectionMode::Cto, &decades(-5..=-3), &point)?, solver, jobs)?;

    let all: Vec<CaseResult> =
        [&michelson, &cartesian, &rossler, &fs, &vdp_orth, &vdp_cto].into_iter().flatten().cloned().collect();
    checks.extend(containment_checks(&all, SAMPLES_PER_ROW, seed, &point));
    checks.push(csv_invariants(&all));

    let n = 3;
    for i in 1..n {
        let k = log_slope(&michelson, |o| o.sliding[i].diam());
        checks.push(slope_check(&format!("michelson sliding slope slide{}", i + 1), k, 2.0, 0.3));
    }
    checks.push(slope_check("van-der-pol cto return-time slope", log_slope(&vdp_cto, |o| o.return_time.diam()), 2.0, 0.3));

    match (&cartesian[0].outcome, &michelson[0].outcome) {
        (Ok(c), Ok(f)) => checks.push(Check::new(
            "michelson cartesian z contains diag+flowdir z",
            contains_all(c, f),
            format!("max diam {:e} vs {:e}", c.z.max_diam(), f.z.max_diam()),
        )),
        _ => checks.push(Check::new("michelson cartesian z contains diag+flowdir z", false, "a row failed")),
    }

    let m_scan = angle_scan("michelson", crate::setup::ANGLE_SAMPLES, &point)?;
    let fs_scan = angle_scan("falkner-skan", crate::setup::ANGLE_SAMPLES, &point)?;
    let max_abs = |s: &[(f64, f64)]| s.iter().fold(0.0f64, |a, (_, c)| a.max(c.abs()));
    let bounded = m_scan.iter().chain(&fs_scan).all(|(_, c)| c.abs() <= 1.0);
    checks.push(Check::new("angle scans |cos| <= 1", bounded, format!("{} samples", m_scan.len() + fs_scan.len())));
    let (mm, mf) = (max_abs(&m_scan), max_abs(&fs_scan));
    checks.push(Check::new("falkner-skan max |cos| below michelson", mf < mm, format!("{mf:.6} vs {mm:.6}")));

    let again = run_cases(fixed_cases("michelson", Strategy::DiagFlowdir, &[1e-6], &point)?, solver, jobs.max(2))?;
    let same = csv::to_string(&csv::rows(&again))? == csv::to_string(&csv::rows(&michelson[..1]))?;
    checks.push(Check::new("determinism across worker counts", same, "michelson s=1e-6 CSV"));

    Ok(Report { seed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let x: Vec<f64> = (1..5).map(|k| (k as f64).ln()).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 0.3).collect();
        assert!((least_squares_slope(&x, &y) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn report_lists_every_check() {
        let r = Report {
            seed: 42,
            checks: vec![Check::new("a", true, "x, y"), Check::new("b", false, "z")],
        };
        assert!(!r.passed());
        assert_eq!(r.to_csv().unwrap(), "check,status,detail\na,PASS,\"x, y\"\nb,FAIL,z\n");
    }
}
