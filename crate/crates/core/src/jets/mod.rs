//! Truncated Taylor series of ODE solutions.
//!
//! A vector field supplies the `k`-th Taylor coefficient of `f(x(t))` given
//! the coefficients `0..=k` of `x(t)`; the solution coefficients then follow
//! from `x_{k+1} = f(x)_k / (k + 1)`. The recursion is generic over the
//! scalar type so the same field code runs in floating point, in interval
//! arithmetic and on dual numbers (for variational equations).

mod expr;

pub use expr::{Expr, ExprField};

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};

/// Ring operations needed by jet recurrences.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(c: f64) -> Self;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn div_usize(self, k: usize) -> Self;
    fn is_finite(&self) -> bool;
}

impl Scalar for f64 {
    fn from_f64(c: f64) -> Self {
        c
    }
    fn div_usize(self, k: usize) -> Self {
        self / k as f64
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Scalar for Interval {
    fn from_f64(c: f64) -> Self {
        Interval::point(c)
    }
    fn div_usize(self, k: usize) -> Self {
        Interval::div_usize(self, k)
    }
    fn is_finite(&self) -> bool {
        Interval::is_finite(self)
    }
}

/// Dual number `re + eps * du` with `eps^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<S> {
    pub re: S,
    pub du: S,
}

impl<S: Scalar> Dual<S> {
    pub fn new(re: S, du: S) -> Self {
        Dual { re, du }
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual { re: self.re + rhs.re, du: self.du + rhs.du }
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual { re: self.re - rhs.re, du: self.du - rhs.du }
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual { re: self.re * rhs.re, du: self.re * rhs.du + self.du * rhs.re }
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { re: -self.re, du: -self.du }
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    fn from_f64(c: f64) -> Self {
        Dual { re: S::from_f64(c), du: S::zero() }
    }
    fn div_usize(self, k: usize) -> Self {
        Dual { re: self.re.div_usize(k), du: self.du.div_usize(k) }
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }
}

/// `k`-th coefficient of the Cauchy product of two series.
#[inline]
pub fn cauchy<S: Scalar>(u: &[S], v: &[S], k: usize) -> S {
    let mut acc = u[0] * v[k];
    for j in 1..=k {
        acc = acc + u[j] * v[k - j];
    }
    acc
}

/// `k`-th coefficient of the square of a series, using symmetry.
#[inline]
pub fn cauchy_sqr<S: Scalar>(u: &[S], k: usize) -> S {
    let half = (k + 1) / 2;
    let mut acc = S::zero();
    for j in 0..half {
        acc = acc + u[j] * u[k - j];
    }
    acc = acc + acc;
    if k % 2 == 0 {
        acc = acc + u[k / 2] * u[k / 2];
    }
    acc
}

/// An autonomous polynomial vector field `x' = f(x)`.
pub trait VectorField: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes the `k`-th Taylor coefficient of `f(x(t))` into `out`, where
    /// `x[i]` holds at least the coefficients `0..=k` of component `i`.
    fn jet_coeff<S: Scalar>(&self, x: &[Vec<S>], k: usize, out: &mut [S]);

    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let xs: Vec<Vec<S>> = x.iter().map(|&v| vec![v]).collect();
        let mut out = vec![S::zero(); self.dim()];
        self.jet_coeff(&xs, 0, &mut out);
        out
    }

    /// Row-major Jacobian `jac[i][j] = d f_i / d x_j`.
    fn jacobian<S: Scalar>(&self, x: &[S]) -> Vec<Vec<S>> {
        let n = self.dim();
        let mut jac = vec![vec![S::zero(); n]; n];
        for j in 0..n {
            let xd: Vec<Dual<S>> = x
                .iter()
                .enumerate()
                .map(|(i, &v)| Dual::new(v, if i == j { S::from_f64(1.0) } else { S::zero() }))
                .collect();
            let fd = self.eval(&xd);
            for i in 0..n {
                jac[i][j] = fd[i].du;
            }
        }
        jac
    }

    fn divergence<S: Scalar>(&self, x: &[S]) -> S {
        let jac = self.jacobian(x);
        (0..self.dim()).fold(S::zero(), |acc, i| acc + jac[i][i])
    }
}

/// Interval helpers shared by the solver and the Poincaré engine.
pub trait IntervalField: VectorField {
    fn eval_box(&self, x: &IntervalVector) -> IntervalVector {
        IntervalVector::new(self.eval(x))
    }

    fn jacobian_box(&self, x: &IntervalVector) -> IntervalMatrix {
        let jac = self.jacobian(x);
        IntervalMatrix::from_fn(self.dim(), self.dim(), |i, j| jac[i][j])
    }
}

impl<F: VectorField + ?Sized> IntervalField for F {}

/// Taylor coefficients `c[k][i]`, `k = 0..=order`, of the solution through `x0`.
pub fn solution_jet<F: VectorField, S: Scalar>(
    field: &F,
    x0: &[S],
    order: usize,
) -> Result<Vec<Vec<S>>> {
    let series = solution_series(field, x0, order)?;
    Ok(transpose(&series, order))
}

/// Per-component series `x[i][k]`.
pub(crate) fn solution_series<F: VectorField, S: Scalar>(
    field: &F,
    x0: &[S],
    order: usize,
) -> Result<Vec<Vec<S>>> {
    let n = field.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
    }
    let mut x: Vec<Vec<S>> = x0
        .iter()
        .map(|&v| {
            let mut s = vec![S::zero(); order + 1];
            s[0] = v;
            s
        })
        .collect();
    let mut out = vec![S::zero(); n];
    for k in 0..order {
        field.jet_coeff(&x, k, &mut out);
        for i in 0..n {
            let c = out[i].div_usize(k + 1);
            if !c.is_finite() {
                return Err(Error::Divergence { time: f64::NAN });
            }
            x[i][k + 1] = c;
        }
    }
    Ok(x)
}

fn transpose<S: Scalar>(series: &[Vec<S>], order: usize) -> Vec<Vec<S>> {
    (0..=order).map(|k| series.iter().map(|s| s[k]).collect()).collect()
}

/// Solution and variational Taylor coefficients.
///
/// Returns `(c, v)` with `c[k][i]` the solution coefficients and `v[k][i][j]`
/// the coefficients of `V(t) = D_x phi(t, x0) V0`, where `v0[i][j]` is the
/// initial matrix (`n x m`).
pub fn variational_jet<F: VectorField, S: Scalar>(
    field: &F,
    x0: &[S],
    v0: &[Vec<S>],
    order: usize,
) -> Result<(Vec<Vec<S>>, Vec<Vec<Vec<S>>>)> {
    let n = field.dim();
    if v0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v0.len() });
    }
    let m = v0.first().map_or(0, Vec::len);
    let mut v = vec![vec![vec![S::zero(); m]; n]; order + 1];
    let mut c = None;
    for j in 0..m {
        let xd: Vec<Dual<S>> = (0..n).map(|i| Dual::new(x0[i], v0[i][j])).collect();
        let series = solution_series(field, &xd, order)?;
        for k in 0..=order {
            for i in 0..n {
                v[k][i][j] = series[i][k].du;
            }
        }
        if c.is_none() {
            c = Some((0..=order).map(|k| series.iter().map(|s| s[k].re).collect()).collect());
        }
    }
    let c = match c {
        Some(c) => c,
        None => solution_jet(field, x0, order)?,
    };
    Ok((c, v))
}

/// Evaluates `sum_k c[k] h^k` by Horner's scheme.
pub fn horner<S: Scalar>(coeffs: &[Vec<S>], h: S) -> Vec<S> {
    let n = coeffs[0].len();
    let mut acc = coeffs[coeffs.len() - 1].clone();
    for c in coeffs.iter().rev().skip(1) {
        for i in 0..n {
            acc[i] = acc[i] * h + c[i];
        }
    }
    acc
}
