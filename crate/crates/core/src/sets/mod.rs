//! Set representations: interval boxes, doubletons `x + C r0 + Q q` and
//! tripletons (`x + C r0 + Q q` intersected with `x + C r0 + B r`).

mod text;

pub use text::{parse_records, Records, TextWriter};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::interval::{verified_inverse, Interval, IntervalMatrix, IntervalVector};
use crate::jets::{IntervalField, VectorField};

/// A map `R^n -> R^m` with interval extensions of itself and (optionally)
/// its Jacobian.
pub trait SmoothMap {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn eval_box(&self, x: &IntervalVector) -> IntervalVector;
    fn jacobian_box(&self, x: &IntervalVector) -> Option<IntervalMatrix>;
}

/// A vector field viewed as a map.
pub struct FieldMap<'a, F>(pub &'a F);

impl<F: VectorField> SmoothMap for FieldMap<'_, F> {
    fn dim_in(&self) -> usize {
        self.0.dim()
    }
    fn dim_out(&self) -> usize {
        self.0.dim()
    }
    fn eval_box(&self, x: &IntervalVector) -> IntervalVector {
        self.0.eval_box(x)
    }
    fn jacobian_box(&self, x: &IntervalVector) -> Option<IntervalMatrix> {
        Some(self.0.jacobian_box(x))
    }
}

/// `x -> A f(x)`.
pub struct ScaledField<'a, F> {
    pub a: &'a IntervalMatrix,
    pub field: &'a F,
}

impl<F: VectorField> SmoothMap for ScaledField<'_, F> {
    fn dim_in(&self) -> usize {
        self.field.dim()
    }
    fn dim_out(&self) -> usize {
        self.a.nrows()
    }
    fn eval_box(&self, x: &IntervalVector) -> IntervalVector {
        self.a.mat_vec(&self.field.eval_box(x)).expect("frame matrix matches field dimension")
    }
    fn jacobian_box(&self, x: &IntervalVector) -> Option<IntervalMatrix> {
        self.a.mat_mul(&self.field.jacobian_box(x)).ok()
    }
}

/// Parallelepiped-plus-remainder set `x + C r0 + Q q`.
///
/// `0 ∈ r0` and `0 ∈ q`, so `x` belongs to the set; `Q` is invertible.
#[derive(Clone, Debug, PartialEq)]
pub struct Doubleton {
    x: Vec<f64>,
    c: DMatrix<f64>,
    r0: IntervalVector,
    q_mat: DMatrix<f64>,
    q: IntervalVector,
}

impl Doubleton {
    pub fn new(
        x: Vec<f64>,
        c: DMatrix<f64>,
        r0: IntervalVector,
        q_mat: DMatrix<f64>,
        q: IntervalVector,
    ) -> Result<Self> {
        let n = x.len();
        check(c.nrows() == n, n, c.nrows())?;
        check(c.ncols() == r0.dim(), c.ncols(), r0.dim())?;
        check(q_mat.nrows() == n && q_mat.ncols() == n, n, q_mat.ncols())?;
        check(q.dim() == n, n, q.dim())?;
        if !r0.contains_zero() || !q.contains_zero() {
            return Err(Error::InvalidInput("r0 and q must contain zero".into()));
        }
        Ok(Doubleton { x, c, r0, q_mat, q })
    }

    pub(crate) fn from_parts(
        x: Vec<f64>,
        c: DMatrix<f64>,
        r0: IntervalVector,
        q_mat: DMatrix<f64>,
        q: IntervalVector,
    ) -> Self {
        debug_assert!(r0.contains_zero() && q.contains_zero());
        Doubleton { x, c, r0, q_mat, q }
    }

    /// `x + C r`, with an identity remainder factor.
    pub fn affine(x: Vec<f64>, c: DMatrix<f64>, r: IntervalVector) -> Result<Self> {
        let n = x.len();
        Doubleton::new(x, c, r, DMatrix::identity(n, n), IntervalVector::zeros(n))
    }

    /// The box as a degenerate doubleton `mid + Id (box - mid)`.
    pub fn from_box(b: &IntervalVector) -> Self {
        let n = b.dim();
        let x = b.mid();
        let r0 = b.sub_point(&x);
        Doubleton::from_parts(
            x,
            DMatrix::identity(n, n),
            r0,
            DMatrix::identity(n, n),
            IntervalVector::zeros(n),
        )
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
    pub fn center(&self) -> &[f64] {
        &self.x
    }
    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }
    pub fn r0(&self) -> &IntervalVector {
        &self.r0
    }
    pub fn q_matrix(&self) -> &DMatrix<f64> {
        &self.q_mat
    }
    pub fn q(&self) -> &IntervalVector {
        &self.q
    }

    /// Interval hull of `x + C r0 + Q q`.
    pub fn enclose(&self) -> IntervalVector {
        let cr = point_mat_vec(&self.c, &self.r0);
        let qq = point_mat_vec(&self.q_mat, &self.q);
        (&cr + &qq).add_point(&self.x)
    }
}

/// Intersection of `x + C r0 + Q q` and `x + C r0 + B r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tripleton {
    base: Doubleton,
    b: DMatrix<f64>,
    r: IntervalVector,
}

impl Tripleton {
    pub fn new(base: Doubleton, b: DMatrix<f64>, r: IntervalVector) -> Result<Self> {
        let n = base.dim();
        check(b.nrows() == n && b.ncols() == n, n, b.ncols())?;
        check(r.dim() == n, n, r.dim())?;
        if !r.contains_zero() {
            return Err(Error::InvalidInput("r must contain zero".into()));
        }
        Ok(Tripleton { base, b, r })
    }

    pub fn base(&self) -> &Doubleton {
        &self.base
    }
    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }
    pub fn r(&self) -> &IntervalVector {
        &self.r
    }

    fn b_doubleton(&self) -> Doubleton {
        Doubleton::from_parts(
            self.base.x.clone(),
            self.base.c.clone(),
            self.base.r0.clone(),
            self.b.clone(),
            self.r.clone(),
        )
    }

    pub fn enclose(&self) -> Result<IntervalVector> {
        self.base.enclose().intersect(&self.b_doubleton().enclose())
    }

    /// Doubleton containing the tripleton. The `(B, r)` factor is folded into
    /// `q` as `q ∩ (Q^-1 C (r0 - r0') + Q^-1 B r)` with `r0, r0'` ranging
    /// over `r0` independently.
    pub fn reduce(&self) -> Result<Doubleton> {
        let q_inv = verified_inverse(&IntervalMatrix::from_point(&self.base.q_mat))?;
        let spread = IntervalVector::new(self.base.r0.iter().map(|v| Interval::symmetric(v.diam())).collect());
        let via_b = &q_inv.mat_mul_point(&self.base.c)?.mat_vec(&spread)?
            + &q_inv.mat_mul_point(&self.b)?.mat_vec(&self.r)?;
        let q = self.base.q.intersect(&via_b)?;
        Ok(Doubleton { q, ..self.base.clone() })
    }
}

/// Any of the supported set representations.
#[derive(Clone, Debug, PartialEq)]
pub enum RepresentableSet {
    Box(IntervalVector),
    Doubleton(Doubleton),
    Tripleton(Tripleton),
}

impl From<IntervalVector> for RepresentableSet {
    fn from(b: IntervalVector) -> Self {
        RepresentableSet::Box(b)
    }
}

impl From<Doubleton> for RepresentableSet {
    fn from(d: Doubleton) -> Self {
        RepresentableSet::Doubleton(d)
    }
}

impl From<Tripleton> for RepresentableSet {
    fn from(t: Tripleton) -> Self {
        RepresentableSet::Tripleton(t)
    }
}

impl RepresentableSet {
    pub fn dim(&self) -> usize {
        match self {
            RepresentableSet::Box(b) => b.dim(),
            RepresentableSet::Doubleton(d) => d.dim(),
            RepresentableSet::Tripleton(t) => t.base.dim(),
        }
    }

    /// Interval hull of the represented set.
    pub fn enclose(&self) -> Result<IntervalVector> {
        match self {
            RepresentableSet::Box(b) => Ok(b.clone()),
            RepresentableSet::Doubleton(d) => Ok(d.enclose()),
            RepresentableSet::Tripleton(t) => t.enclose(),
        }
    }

    /// A doubleton containing the set (the solver's working representation).
    pub fn to_doubleton(&self) -> Result<Doubleton> {
        match self {
            RepresentableSet::Box(b) => Ok(Doubleton::from_box(b)),
            RepresentableSet::Doubleton(d) => Ok(d.clone()),
            RepresentableSet::Tripleton(t) => t.reduce(),
        }
    }
}

/// Enclosure of `g(X)`: the direct evaluation `[g](hull X)` intersected with
/// the mean-value forms `[g](x) + ([Dg](hull X) C) r0 + ([Dg](hull X) Q) q`
/// (and the analogous `B`-form for tripletons).
pub fn eval(set: &RepresentableSet, g: &dyn SmoothMap) -> Result<IntervalVector> {
    if set.dim() != g.dim_in() {
        return Err(Error::DimensionMismatch { expected: g.dim_in(), found: set.dim() });
    }
    let hull = set.enclose()?;
    let direct = g.eval_box(&hull);
    let Some(dg) = g.jacobian_box(&hull) else {
        return Ok(direct);
    };
    let doubleton;
    let (d, extra) = match set {
        RepresentableSet::Box(b) => {
            doubleton = Doubleton::from_box(b);
            (&doubleton, None)
        }
        RepresentableSet::Doubleton(d) => (d, None),
        RepresentableSet::Tripleton(t) => (&t.base, Some((&t.b, &t.r))),
    };
    let gx = g.eval_box(&IntervalVector::from_point(&d.x));
    let dgc = dg.mat_mul_point(&d.c)?.mat_vec(&d.r0)?;
    let q_form = &(&gx + &dgc) + &dg.mat_mul_point(&d.q_mat)?.mat_vec(&d.q)?;
    let mut result = direct.intersect(&q_form)?;
    if let Some((b, r)) = extra {
        let b_form = &(&gx + &dgc) + &dg.mat_mul_point(b)?.mat_vec(r)?;
        result = result.intersect(&b_form)?;
    }
    Ok(result)
}

/// Enclosure of `A (X - y)`: `hull(A ((x - y) + C r0 + Q q))` intersected
/// with `A (x - y) + (A C) r0 + (A Q) q` (and the `B`-form for tripletons).
pub fn affine_transform(
    set: &RepresentableSet,
    a: &IntervalMatrix,
    y: &[f64],
) -> Result<IntervalVector> {
    let n = set.dim();
    check(a.ncols() == n, a.ncols(), n)?;
    check(y.len() == n, n, y.len())?;
    match set {
        RepresentableSet::Box(b) => a.mat_vec(&b.sub_point(y)),
        RepresentableSet::Doubleton(d) => doubleton_affine(d, None, a, y),
        RepresentableSet::Tripleton(t) => doubleton_affine(&t.base, Some((&t.b, &t.r)), a, y),
    }
}

fn doubleton_affine(
    d: &Doubleton,
    extra: Option<(&DMatrix<f64>, &IntervalVector)>,
    a: &IntervalMatrix,
    y: &[f64],
) -> Result<IntervalVector> {
    let shift = IntervalVector::from_point(&d.x).sub_point(y);
    let cr = point_mat_vec(&d.c, &d.r0);
    let qq = point_mat_vec(&d.q_mat, &d.q);
    let hull_form = a.mat_vec(&(&shift + &(&cr + &qq)))?;
    let a_shift = a.mat_vec(&shift)?;
    let ac_r0 = a.mat_mul_point(&d.c)?.mat_vec(&d.r0)?;
    let q_form = &(&a_shift + &ac_r0) + &a.mat_mul_point(&d.q_mat)?.mat_vec(&d.q)?;
    let mut result = hull_form.intersect(&q_form)?;
    if let Some((b, r)) = extra {
        let b_form = &(&a_shift + &ac_r0) + &a.mat_mul_point(b)?.mat_vec(r)?;
        result = result.intersect(&b_form)?;
    }
    Ok(result)
}

/// `M v` for a point matrix and an interval vector.
pub fn point_mat_vec(m: &DMatrix<f64>, v: &IntervalVector) -> IntervalVector {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .filter(|&j| m[(i, j)] != 0.0)
                .fold(Interval::ZERO, |acc, j| acc + v[j] * m[(i, j)])
        })
        .collect()
}

fn check(ok: bool, expected: usize, found: usize) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
