use crate::jets::{cauchy, cauchy_sqr, Scalar, VectorField};

#[inline]
fn delta0<S: Scalar>(k: usize, c: S) -> S {
    if k == 0 {
        c
    } else {
        S::zero()
    }
}

/// `x' = y, y' = z, z' = c^2 - y - x^2 / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Michelson {
    pub c: f64,
}

impl VectorField for Michelson {
    fn dim(&self) -> usize {
        3
    }

    fn jet_coeff<S: Scalar>(&self, x: &[Vec<S>], k: usize, out: &mut [S]) {
        let c = S::from_f64(self.c);
        out[0] = x[1][k];
        out[1] = x[2][k];
        out[2] = delta0(k, c * c) - x[1][k] - S::from_f64(0.5) * cauchy_sqr(&x[0], k);
    }
}

/// `x' = y, y' = z, z' = c (y^2 - 1) - x z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FalknerSkan {
    pub c: f64,
}

impl VectorField for FalknerSkan {
    fn dim(&self) -> usize {
        3
    }

    fn jet_coeff<S: Scalar>(&self, x: &[Vec<S>], k: usize, out: &mut [S]) {
        let c = S::from_f64(self.c);
        out[0] = x[1][k];
        out[1] = x[2][k];
        out[2] = c * (cauchy_sqr(&x[1], k) - delta0(k, S::from_f64(1.0)))
            - cauchy(&x[0], &x[2], k);
    }
}

/// Four-dimensional Rössler system
/// `x' = -y - w, y' = x + a y + z, z' = d z + c w, w' = x w + b`,
/// with the state stored in the order `(y, x, z, w)` so that the standard
/// section `y = 0` is the first coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rossler4D {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl VectorField for Rossler4D {
    fn dim(&self) -> usize {
        4
    }

    fn jet_coeff<S: Scalar>(&self, s: &[Vec<S>], k: usize, out: &mut [S]) {
        let (y, x, z, w) = (&s[0], &s[1], &s[2], &s[3]);
        out[0] = x[k] + S::from_f64(self.a) * y[k] + z[k];
        out[1] = -y[k] - w[k];
        out[2] = S::from_f64(self.d) * z[k] + S::from_f64(self.c) * w[k];
        out[3] = cauchy(x, w, k) + delta0(k, S::from_f64(self.b));
    }
}

/// `x' = y, y' = mu y (1 - x^2) - x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VanDerPol {
    pub mu: f64,
}

impl VectorField for VanDerPol {
    fn dim(&self) -> usize {
        2
    }

    fn jet_coeff<S: Scalar>(&self, s: &[Vec<S>], k: usize, out: &mut [S]) {
        let (x, y) = (&s[0], &s[1]);
        let x2: Vec<S> = (0..=k).map(|j| cauchy_sqr(x, j)).collect();
        let mu = S::from_f64(self.mu);
        out[0] = y[k];
        out[1] = mu * (y[k] - cauchy(y, &x2, k)) - x[k];
    }
}

/// `x' = y, y' = -x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Harmonic;

impl VectorField for Harmonic {
    fn dim(&self) -> usize {
        2
    }

    fn jet_coeff<S: Scalar>(&self, s: &[Vec<S>], k: usize, out: &mut [S]) {
        out[0] = s[1][k];
        out[1] = -s[0][k];
    }
}

/// `x' = A x` for a row-major matrix `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct Linear {
    n: usize,
    a: Vec<f64>,
}

impl Linear {
    pub fn new(n: usize, a: Vec<f64>) -> Self {
        assert_eq!(a.len(), n * n, "matrix must be n x n");
        Linear { n, a }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut a = vec![0.0; n * n];
        for (i, &v) in d.iter().enumerate() {
            a[i * n + i] = v;
        }
        Linear { n, a }
    }
}

impl VectorField for Linear {
    fn dim(&self) -> usize {
        self.n
    }

    fn jet_coeff<S: Scalar>(&self, s: &[Vec<S>], k: usize, out: &mut [S]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            *o = row
                .iter()
                .zip(s)
                .filter(|(a, _)| **a != 0.0)
                .fold(S::zero(), |acc, (&a, x)| acc + S::from_f64(a) * x[k]);
        }
    }
}

/// `x' = v`, uniform transport with constant velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct Transport {
    pub velocity: Vec<f64>,
}

impl VectorField for Transport {
    fn dim(&self) -> usize {
        self.velocity.len()
    }

    fn jet_coeff<S: Scalar>(&self, _s: &[Vec<S>], k: usize, out: &mut [S]) {
        for (o, &v) in out.iter_mut().zip(&self.velocity) {
            *o = delta0(k, S::from_f64(v));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn michelson_at_reference_point() {
        let y = 1.328_258_661_085_692_9;
        let f = Michelson { c: 0.8 }.eval(&[0.0, y, 0.0]);
        assert_eq!(f[0], y);
        assert_eq!(f[1], 0.0);
        assert!((f[2] - (0.64 - y)).abs() < 1e-15);
    }

    #[test]
    fn van_der_pol_on_axis() {
        let x0 = 2.000_413_678_992_090_5;
        assert_eq!(VanDerPol { mu: 0.2 }.eval(&[x0, 0.0]), vec![0.0, -x0]);
    }

    #[test]
    fn rossler_divergence() {
        // d/dy (x + a y + z) + d/dx (-y - w) + d/dz (d z + c w) + d/dw (x w + b) = a + d + x
        let r = Rossler4D { a: 0.25, b: 3.0, c: -0.5, d: 0.05 };
        let div: f64 = r.divergence(&[0.3, -2.0, 1.0, 0.7]);
        assert!((div - (0.25 + 0.05 - 2.0)).abs() < 1e-15);
    }
}
