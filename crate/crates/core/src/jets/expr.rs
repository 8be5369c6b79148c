use std::ops::{Add, Mul, Neg, Sub};

use super::{cauchy, Scalar, VectorField};
use crate::error::{Error, Result};

/// Polynomial expression in the state variables.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) => None,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
            Expr::Neg(a) => a.max_var(),
        }
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> S {
        match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => S::from_f64(*c),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Neg(a) => -a.eval(x),
        }
    }

    /// Coefficients `0..=k` of this expression along the series `x`.
    fn series<S: Scalar>(&self, x: &[Vec<S>], k: usize) -> Vec<S> {
        match self {
            Expr::Var(i) => x[*i][..=k].to_vec(),
            Expr::Const(c) => {
                let mut s = vec![S::zero(); k + 1];
                s[0] = S::from_f64(*c);
                s
            }
            Expr::Add(a, b) => {
                let (a, b) = (a.series(x, k), b.series(x, k));
                a.iter().zip(&b).map(|(&u, &v)| u + v).collect()
            }
            Expr::Sub(a, b) => {
                let (a, b) = (a.series(x, k), b.series(x, k));
                a.iter().zip(&b).map(|(&u, &v)| u - v).collect()
            }
            Expr::Mul(a, b) => {
                let (a, b) = (a.series(x, k), b.series(x, k));
                (0..=k).map(|j| cauchy(&a, &b, j)).collect()
            }
            Expr::Neg(a) => a.series(x, k).into_iter().map(|u| -u).collect(),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// A vector field given by one polynomial expression per component.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprField {
    components: Vec<Expr>,
}

impl ExprField {
    pub fn new(components: Vec<Expr>) -> Result<Self> {
        let n = components.len();
        if let Some(i) = components.iter().filter_map(Expr::max_var).max() {
            if i >= n {
                return Err(Error::InvalidInput(format!(
                    "variable x{i} used in a {n}-dimensional field"
                )));
            }
        }
        Ok(ExprField { components })
    }
}

impl VectorField for ExprField {
    fn dim(&self) -> usize {
        self.components.len()
    }

    fn jet_coeff<S: Scalar>(&self, x: &[Vec<S>], k: usize, out: &mut [S]) {
        for (o, e) in out.iter_mut().zip(&self.components) {
            *o = e.series(x, k)[k];
        }
    }
}
