use std::ops::{Add, Deref, DerefMut, Index, IndexMut, Sub};

use nalgebra::DVector;

use super::round::{add_up, mul_up};
use super::Interval;
use crate::error::{Error, Result};

/// A box in `R^n`: the Cartesian product of its entries.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(entries: Vec<Interval>) -> Self {
        IntervalVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        IntervalVector(vec![Interval::ZERO; n])
    }

    pub fn from_point(x: &[f64]) -> Self {
        IntervalVector(x.iter().map(|&v| Interval::point(v)).collect())
    }

    pub fn from_dvector(x: &DVector<f64>) -> Self {
        Self::from_point(x.as_slice())
    }

    /// Box `[lo_i, hi_i]`; fails on reversed bounds.
    pub fn from_bounds(lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        lo.iter()
            .zip(hi)
            .map(|(&l, &h)| Interval::new(l, h))
            .collect::<Result<Vec<_>>>()
            .map(IntervalVector)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<Interval> {
        self.0
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(Interval::mid).collect()
    }

    pub fn mid_dvector(&self) -> DVector<f64> {
        DVector::from_vec(self.mid())
    }

    pub fn diam(&self) -> Vec<f64> {
        self.0.iter().map(Interval::diam).collect()
    }

    pub fn rad(&self) -> Vec<f64> {
        self.0.iter().map(Interval::rad).collect()
    }

    pub fn max_diam(&self) -> f64 {
        self.0.iter().map(Interval::diam).fold(0.0, f64::max)
    }

    /// Upper bound of the max-norm.
    pub fn mag(&self) -> f64 {
        self.0.iter().map(Interval::mag).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Interval::is_finite)
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.0.iter().zip(x).all(|(i, &v)| i.contains(v))
    }

    pub fn contains_zero(&self) -> bool {
        self.0.iter().all(Interval::contains_zero)
    }

    pub fn subset_of(&self, other: &IntervalVector) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a.subset_of(b))
    }

    pub fn interior_subset_of(&self, other: &IntervalVector) -> bool {
        self.dim() == other.dim()
            && self.0.iter().zip(&other.0).all(|(a, b)| a.interior_subset_of(b))
    }

    pub fn hull(&self, other: &IntervalVector) -> Result<IntervalVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(IntervalVector(self.0.iter().zip(&other.0).map(|(a, b)| a.hull(b)).collect()))
    }

    pub fn hull_point(&self, x: &[f64]) -> IntervalVector {
        IntervalVector(
            self.0.iter().zip(x).map(|(a, &v)| a.hull(&Interval::point(v))).collect(),
        )
    }

    /// Componentwise intersection; `EmptyIntersection` if any component is empty.
    pub fn intersect(&self, other: &IntervalVector) -> Result<IntervalVector> {
        check_dim(self.dim(), other.dim())?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(b))
            .collect::<Result<Vec<_>>>()
            .map(IntervalVector)
    }

    pub fn scale(&self, c: Interval) -> IntervalVector {
        IntervalVector(self.0.iter().map(|&a| a * c).collect())
    }

    /// Interval inner product with a point row vector.
    pub fn dot_point(&self, w: &[f64]) -> Interval {
        self.0.iter().zip(w).fold(Interval::ZERO, |acc, (&a, &b)| acc + a * b)
    }

    pub fn dot(&self, other: &IntervalVector) -> Interval {
        self.0.iter().zip(&other.0).fold(Interval::ZERO, |acc, (&a, &b)| acc + a * b)
    }

    /// Upper bound of the Euclidean norm.
    pub fn norm_up(&self) -> f64 {
        let s = self.0.iter().fold(0.0, |acc, a| add_up(acc, mul_up(a.mag(), a.mag())));
        super::round::sqrt_up(s)
    }

    /// Subtracts a point vector.
    pub fn sub_point(&self, y: &[f64]) -> IntervalVector {
        IntervalVector(self.0.iter().zip(y).map(|(&a, &b)| a - b).collect())
    }

    pub fn add_point(&self, y: &[f64]) -> IntervalVector {
        IntervalVector(self.0.iter().zip(y).map(|(&a, &b)| a + b).collect())
    }

    /// Widens each component: `mid ± (factor * rad + absolute)`.
    pub fn inflate(&self, factor: f64, absolute: f64) -> IntervalVector {
        IntervalVector(self.0.iter().map(|a| a.inflate(factor, absolute)).collect())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl Deref for IntervalVector {
    type Target = [Interval];
    fn deref(&self) -> &[Interval] {
        &self.0
    }
}

impl DerefMut for IntervalVector {
    fn deref_mut(&mut self) -> &mut [Interval] {
        &mut self.0
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

impl FromIterator<Interval> for IntervalVector {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IntervalVector(iter.into_iter().collect())
    }
}

impl Add for &IntervalVector {
    type Output = IntervalVector;
    fn add(self, rhs: &IntervalVector) -> IntervalVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in vector sum");
        self.0.iter().zip(&rhs.0).map(|(&a, &b)| a + b).collect()
    }
}

impl Sub for &IntervalVector {
    type Output = IntervalVector;
    fn sub(self, rhs: &IntervalVector) -> IntervalVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in vector difference");
        self.0.iter().zip(&rhs.0).map(|(&a, &b)| a - b).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_mid_intersect() {
        let a = IntervalVector::from_bounds(&[0.0, -1.0], &[1.0, 3.0]).unwrap();
        let b = IntervalVector::from_bounds(&[2.0, 1.0], &[3.0, 2.0]).unwrap();
        let h = a.hull(&b).unwrap();
        assert_eq!(h, IntervalVector::from_bounds(&[0.0, -1.0], &[3.0, 3.0]).unwrap());
        assert_eq!(a.mid(), vec![0.5, 1.0]);
        assert_eq!(a.intersect(&b), Err(Error::EmptyIntersection));
        let c = IntervalVector::from_bounds(&[0.5, 0.0], &[2.0, 5.0]).unwrap();
        assert_eq!(
            a.intersect(&c).unwrap(),
            IntervalVector::from_bounds(&[0.5, 0.0], &[1.0, 3.0]).unwrap()
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = IntervalVector::zeros(2);
        let b = IntervalVector::zeros(3);
        assert_eq!(a.hull(&b), Err(Error::DimensionMismatch { expected: 2, found: 3 }));
    }
}
