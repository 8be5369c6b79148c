//! Adaptive Dormand–Prince 5(4) integration with event location. Plain
//! floating point, no enclosures; meant as an independent reference for tests.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("step budget exhausted at t = {0}")]
    TooManySteps(f64),
    #[error("no event before t = {0}")]
    NoEvent(f64),
    #[error("state is not finite at t = {0}")]
    NonFinite(f64),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Sign constraint on the event function at the crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
    Any,
}

impl Direction {
    fn admits(self, before: f64, after: f64) -> bool {
        match self {
            Direction::Increasing => before < 0.0 && after >= 0.0,
            Direction::Decreasing => before > 0.0 && after <= 0.0,
            Direction::Any => (before < 0.0 && after >= 0.0) || (before > 0.0 && after <= 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub point: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 { rtol: 1e-12, atol: 1e-14, max_step: 0.05, max_steps: 10_000_000 }
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

impl Dopri5 {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Dopri5 { rtol, atol, ..Dopri5::default() }
    }

    /// One step of length `h`: the fifth-order value and the error estimate.
    fn step<F: Fn(&[f64]) -> Vec<f64>>(&self, f: &F, x: &[f64], h: f64) -> (Vec<f64>, f64) {
        let n = x.len();
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
        for s in 0..7 {
            let xs: Vec<f64> = (0..n)
                .map(|i| x[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>())
                .collect();
            k.push(f(&xs));
        }
        let x5: Vec<f64> = (0..n).map(|i| x[i] + h * (0..7).map(|j| B5[j] * k[j][i]).sum::<f64>()).collect();
        let mut err = 0.0f64;
        for i in 0..n {
            let e = h * (0..7).map(|j| (B5[j] - B4[j]) * k[j][i]).sum::<f64>();
            let scale = self.atol + self.rtol * x[i].abs().max(x5[i].abs());
            err = err.max((e / scale).abs());
        }
        (x5, err)
    }

    /// Adaptive step from `x` with trial size `h`; returns the accepted step
    /// length, the new state and the next trial size.
    fn adaptive<F: Fn(&[f64]) -> Vec<f64>>(
        &self,
        f: &F,
        x: &[f64],
        t: f64,
        h: f64,
    ) -> Result<(f64, Vec<f64>, f64)> {
        let mut h = h.min(self.max_step);
        loop {
            let (x5, err) = self.step(f, x, h);
            if err <= 1.0 && x5.iter().all(|v| v.is_finite()) {
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                return Ok((h, x5, (h * grow).min(self.max_step)));
            }
            let shrink = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.5) } else { 0.1 };
            h *= shrink;
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(OracleError::StepUnderflow(t));
            }
        }
    }

    /// `phi(t, x0)` for `t >= 0`.
    pub fn flow<F: Fn(&[f64]) -> Vec<f64>>(&self, f: &F, x0: &[f64], t_end: f64) -> Result<Vec<f64>> {
        let mut x = x0.to_vec();
        let mut t = 0.0;
        let mut h = self.max_step.min(t_end).max(1e-6);
        let mut steps = 0;
        while t < t_end {
            let (taken, xn, next) = self.adaptive(f, &x, t, h.min(t_end - t))?;
            t = if taken >= t_end - t { t_end } else { t + taken };
            x = xn;
            h = next;
            steps += 1;
            if steps > self.max_steps {
                return Err(OracleError::TooManySteps(t));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(OracleError::NonFinite(t));
            }
        }
        Ok(x)
    }

    /// First zero of `g` along the trajectory of `x0` matching `dir`, at a
    /// time in `(0, t_max]`. A start exactly on the zero set is not an event.
    pub fn next_event<F, G>(&self, f: &F, g: &G, x0: &[f64], dir: Direction, t_max: f64) -> Result<Event>
    where
        F: Fn(&[f64]) -> Vec<f64>,
        G: Fn(&[f64]) -> f64,
    {
        let mut x = x0.to_vec();
        let mut t = 0.0;
        let mut gx = g(&x);
        let mut h = self.max_step.min(1e-3);
        let mut steps = 0;
        while t < t_max {
            let (taken, xn, next) = self.adaptive(f, &x, t, h)?;
            let gn = g(&xn);
            if gx != 0.0 && dir.admits(gx, gn) {
                return Ok(self.locate(f, g, &x, t, taken, gx));
            }
            x = xn;
            gx = gn;
            t += taken;
            h = next;
            steps += 1;
            if steps > self.max_steps {
                return Err(OracleError::TooManySteps(t));
            }
        }
        Err(OracleError::NoEvent(t_max))
    }

    /// Bisection on the step length for the sign change of `g` within one
    /// accepted step starting at `(t, x)`.
    fn locate<F, G>(&self, f: &F, g: &G, x: &[f64], t: f64, h: f64, g0: f64) -> Event
    where
        F: Fn(&[f64]) -> Vec<f64>,
        G: Fn(&[f64]) -> f64,
    {
        let (mut lo, mut hi) = (0.0, h);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (xm, _) = self.step(f, x, mid);
            if (g(&xm) > 0.0) == (g0 > 0.0) && g(&xm) != 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (point, _) = self.step(f, x, hi);
        Event { time: t + hi, point }
    }

    /// Chains events with the given directions, each one starting from the
    /// previous event point.
    pub fn return_map<F, G>(&self, f: &F, g: &G, x0: &[f64], schedule: &[Direction], t_max: f64) -> Result<Event>
    where
        F: Fn(&[f64]) -> Vec<f64>,
        G: Fn(&[f64]) -> f64,
    {
        let mut ev = Event { time: 0.0, point: x0.to_vec() };
        for &dir in schedule {
            let next = self.next_event(f, g, &ev.point, dir, t_max - ev.time)?;
            ev = Event { time: ev.time + next.time, point: next.point };
        }
        Ok(ev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn harmonic(x: &[f64]) -> Vec<f64> {
        vec![x[1], -x[0]]
    }

    #[test]
    fn harmonic_flow_matches_rotation() {
        let x = Dopri5::default().flow(&harmonic, &[1.0, 0.0], 1.0).unwrap();
        assert!((x[0] - 1f64.cos()).abs() < 1e-11);
        assert!((x[1] + 1f64.sin()).abs() < 1e-11);
    }

    #[test]
    fn exponential_decay() {
        let x = Dopri5::default().flow(&|x: &[f64]| vec![-2.0 * x[0]], &[3.0], 2.0).unwrap();
        assert!((x[0] - 3.0 * (-4.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_half_turn_event() {
        let ev = Dopri5::default()
            .next_event(&harmonic, &|x: &[f64]| x[1], &[1.0, 0.0], Direction::Increasing, 10.0)
            .unwrap();
        assert!((ev.time - PI).abs() < 1e-11, "{}", ev.time);
        assert!((ev.point[0] + 1.0).abs() < 1e-11);
    }

    #[test]
    fn schedule_chains_events() {
        let sched = [Direction::Increasing, Direction::Decreasing];
        let ev = Dopri5::default().return_map(&harmonic, &|x: &[f64]| x[1], &[1.0, 0.0], &sched, 10.0).unwrap();
        assert!((ev.time - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn missing_event_is_reported() {
        let r = Dopri5::default().next_event(&|_: &[f64]| vec![1.0], &|x: &[f64]| x[0] + 1.0, &[0.0], Direction::Any, 1.0);
        assert!(matches!(r, Err(OracleError::NoEvent(_))));
    }
}
