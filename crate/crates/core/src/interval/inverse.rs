use super::round::{div_up, mul_up, sub_down};
use super::{Interval, IntervalMatrix};
use crate::error::{Error, Result};

const REFINEMENT_SWEEPS: usize = 5;

/// Encloses the inverses of all matrices in `b`.
///
/// An approximate inverse `R` of the midpoint is computed in floating point.
/// With `E = I - R b` evaluated in interval arithmetic and `|E| < 1`, every
/// inverse lies in `R + [-d, d]` where `d = |E| |R| / (1 - |E|)` (infinity
/// norms). The enclosure is then tightened with the fixed-point relation
/// `b^-1 = R + E b^-1`.
pub fn verified_inverse(b: &IntervalMatrix) -> Result<IntervalMatrix> {
    let n = b.nrows();
    if b.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.ncols() });
    }
    if !b.is_finite() {
        return Err(Error::SingularMatrix);
    }
    let r = b.mid().try_inverse().ok_or(Error::SingularMatrix)?;
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix);
    }
    let rb = IntervalMatrix::point_mul(&r, b)?;
    let e = IntervalMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { Interval::ONE } else { Interval::ZERO };
        id - rb[(i, j)]
    });
    let e_norm = e.norm_inf_up();
    if !(e_norm < 1.0) {
        return Err(Error::SingularMatrix);
    }
    let r_iv = IntervalMatrix::from_point(&r);
    let r_norm = r_iv.norm_inf_up();
    let d = div_up(mul_up(e_norm, r_norm), sub_down(1.0, e_norm));
    if !d.is_finite() {
        return Err(Error::SingularMatrix);
    }
    let mut x = IntervalMatrix::from_fn(n, n, |i, j| r_iv[(i, j)] + Interval::symmetric(d));
    for _ in 0..REFINEMENT_SWEEPS {
        let next = r_iv.add(&e.mat_mul(&x)?)?.intersect(&x)?;
        let improved = next.max_diam() < 0.9 * x.max_diam();
        x = next;
        if !improved {
            break;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn encloses_exact_inverse() {
        // inverse of [[2, 1], [1, 1]] is [[1, -1], [-1, 2]]
        let b = IntervalMatrix::from_point(&DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]));
        let x = verified_inverse(&b).unwrap();
        let exact = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 2.0]);
        assert!(x.contains_point(&exact));
        assert!(x.max_diam() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let b = IntervalMatrix::from_point(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]));
        assert_eq!(verified_inverse(&b), Err(Error::SingularMatrix));
    }

    #[test]
    fn interval_matrix_containing_singular_is_rejected() {
        let b = IntervalMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Interval::new(-1.0, 1.0).unwrap(),
            (1, 1) => Interval::ONE,
            _ => Interval::ZERO,
        });
        assert!(verified_inverse(&b).is_err());
    }
}
