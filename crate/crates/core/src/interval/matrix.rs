use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use super::vector::check_dim;
use super::{Interval, IntervalVector};
use crate::error::Result;

/// Dense row-major matrix of intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntervalMatrix { rows, cols, data: vec![Interval::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntervalMatrix { rows, cols, data }
    }

    pub fn from_point(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| Interval::point(m[(i, j)]))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mid())
    }

    /// Largest entry diameter.
    pub fn max_diam(&self) -> f64 {
        self.data.iter().map(Interval::diam).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(Interval::is_finite)
    }

    pub fn contains_point(&self, m: &DMatrix<f64>) -> bool {
        m.nrows() == self.rows
            && m.ncols() == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)].contains(m[(i, j)])))
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntervalVector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> IntervalMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn intersect(&self, other: &IntervalMatrix) -> Result<IntervalMatrix> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.intersect(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mat_vec(&self, v: &[Interval]) -> Result<IntervalVector> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(Interval::ZERO, |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn mat_vec_point(&self, v: &[f64]) -> Result<IntervalVector> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Interval::ZERO, |acc, (&a, &b)| acc + a * b))
            .collect())
    }

    pub fn mat_mul(&self, other: &IntervalMatrix) -> Result<IntervalMatrix> {
        check_dim(self.cols, other.rows)?;
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Interval::ZERO, |acc, k| acc + self[(i, k)] * other[(k, j)])
        }))
    }

    pub fn mat_mul_point(&self, other: &DMatrix<f64>) -> Result<IntervalMatrix> {
        check_dim(self.cols, other.nrows())?;
        Ok(Self::from_fn(self.rows, other.ncols(), |i, j| {
            (0..self.cols).fold(Interval::ZERO, |acc, k| acc + self[(i, k)] * other[(k, j)])
        }))
    }

    /// `lhs * self` for a point matrix on the left.
    pub fn point_mul(lhs: &DMatrix<f64>, rhs: &IntervalMatrix) -> Result<IntervalMatrix> {
        check_dim(lhs.ncols(), rhs.rows)?;
        Ok(Self::from_fn(lhs.nrows(), rhs.cols, |i, j| {
            (0..lhs.ncols()).fold(Interval::ZERO, |acc, k| acc + rhs[(k, j)] * lhs[(i, k)])
        }))
    }

    pub fn add(&self, other: &IntervalMatrix) -> Result<IntervalMatrix> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Ok(IntervalMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub_point(&self, other: &DMatrix<f64>) -> Result<IntervalMatrix> {
        check_dim(self.rows, other.nrows())?;
        check_dim(self.cols, other.ncols())?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)]))
    }

    pub fn scale(&self, c: Interval) -> IntervalMatrix {
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * c).collect(),
        }
    }

    /// Upper bound of the infinity norm (max row sum of magnitudes).
    pub fn norm_inf_up(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(0.0, |acc, a| super::round::add_up(acc, a.mag()))
            })
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntervalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn identity_times_vector() {
        let v = IntervalVector::from_bounds(&[0.1, -2.0, 3.0], &[0.2, -1.0, 3.5]).unwrap();
        let r = IntervalMatrix::identity(3).mat_vec(&v).unwrap();
        assert_eq!(r, v);
    }

    #[test]
    fn rotation_times_unit_vector() {
        let m = IntervalMatrix::from_point(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let r = m.mat_vec_point(&[1.0, 0.0]).unwrap();
        assert_eq!(r, IntervalVector::from_point(&[0.0, -1.0]));
    }

    #[test]
    fn mismatched_product_fails() {
        let m = IntervalMatrix::identity(3);
        assert_eq!(
            m.mat_vec_point(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }
}
