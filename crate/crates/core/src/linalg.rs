//! Floating-point linear algebra used for (non-rigorous) setup of frames and
//! sections.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Unit vector spanning the numerical null space of `m` (right singular
/// vector of the smallest singular value), with its first entry of largest
/// magnitude made positive.
pub fn null_vector(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    let n = m.ncols();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    // Work on the square matrix m^T m padded to n x n rows so that SVD
    // always yields n right singular vectors.
    let sq = if m.nrows() >= n { m.clone() } else { pad_rows(m, n) };
    let svd = sq.svd(false, true);
    let vt = svd.v_t.ok_or(Error::SingularMatrix)?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::SingularMatrix)?;
    let v: DVector<f64> = vt.row(imin).transpose();
    Ok(normalize_sign(v))
}

fn pad_rows(m: &DMatrix<f64>, rows: usize) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(rows, m.ncols());
    p.rows_mut(0, m.nrows()).copy_from(m);
    p
}

/// Scales `v` to unit length with its first nonzero entry positive.
pub fn normalize_sign(v: DVector<f64>) -> DVector<f64> {
    let norm = v.norm();
    let mut v = if norm > 0.0 { v / norm } else { v };
    let tiny = 1e-12;
    if let Some(&first) = v.iter().find(|x| x.abs() > tiny) {
        if first < 0.0 {
            v.neg_mut();
        }
    }
    v
}

/// Orthonormal basis (as columns, `n x (n-1)`) of the orthogonal complement
/// of `w`. For a coordinate direction `e_i` the basis is the remaining unit
/// vectors in increasing order.
pub fn orthonormal_complement(w: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = w.len();
    let norm = w.norm();
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("zero normal vector".into()));
    }
    let nonzero: Vec<usize> = (0..n).filter(|&i| w[i] != 0.0).collect();
    if nonzero.len() == 1 {
        let k = nonzero[0];
        let mut s = DMatrix::zeros(n, n - 1);
        let mut col = 0;
        for i in (0..n).filter(|&i| i != k) {
            s[(i, col)] = 1.0;
            col += 1;
        }
        return Ok(s);
    }
    // Gram-Schmidt of the unit vectors against w, dropping the one most
    // aligned with w.
    let u = w / norm;
    let drop = (0..n).max_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs())).unwrap_or(0);
    let mut basis: Vec<DVector<f64>> = vec![u.clone()];
    for i in (0..n).filter(|&i| i != drop) {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        for b in &basis {
            let p = b.dot(&e);
            e -= b * p;
        }
        for b in &basis {
            let p = b.dot(&e);
            e -= b * p;
        }
        basis.push(e.normalize());
    }
    let cols: Vec<DVector<f64>> = basis.into_iter().skip(1).collect();
    Ok(DMatrix::from_columns(&cols))
}

/// Real eigenpairs sorted by decreasing modulus. Eigenvectors are unit
/// length with their first nonzero entry positive.
pub fn real_eigen(m: &DMatrix<f64>) -> Result<Vec<(f64, DVector<f64>)>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
    }
    let ev = m.complex_eigenvalues();
    let scale = m.norm().max(1.0);
    let mut vals = Vec::with_capacity(n);
    for z in ev.iter() {
        if z.im.abs() > 1e-9 * scale.max(z.re.abs()) {
            return Err(Error::ComplexEigenvalues);
        }
        vals.push(z.re);
    }
    vals.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let id = DMatrix::<f64>::identity(n, n);
    vals.into_iter()
        .map(|l| null_vector(&(m - &id * l)).map(|v| (l, v)))
        .collect()
}

/// Eigenvalues as complex numbers `(re, im)`, sorted by decreasing modulus.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = m.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    v.sort_by(|a, b| b.0.hypot(b.1).total_cmp(&a.0.hypot(a.1)));
    v
}
