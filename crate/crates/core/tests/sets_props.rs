use nalgebra::DMatrix;
use poincare_core::interval::{verified_inverse, Interval, IntervalMatrix, IntervalVector};
use poincare_core::jets::{IntervalField, VectorField};
use poincare_core::sets::{affine_transform, eval, Doubleton, FieldMap, RepresentableSet, Tripleton};
use poincare_core::systems::VanDerPol;
use proptest::prelude::*;

fn rotation(theta: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}

/// A random planar doubleton and a random member point.
fn doubleton_and_member() -> impl Strategy<Value = (Doubleton, Vec<f64>)> {
    (
        prop::collection::vec(-2.0f64..2.0, 2),
        prop::collection::vec(-1.0f64..1.0, 4),
        prop::collection::vec(0.0f64..0.1, 2),
        0.0f64..6.3,
        prop::collection::vec(0.0f64..0.01, 2),
        prop::collection::vec(-1.0f64..=1.0, 4),
    )
        .prop_map(|(x, c, r0, theta, q, t)| {
            let c = DMatrix::from_row_slice(2, 2, &c);
            let q_mat = rotation(theta);
            let r0v = IntervalVector::new(r0.iter().map(|&r| Interval::symmetric(r)).collect());
            let qv = IntervalVector::new(q.iter().map(|&r| Interval::symmetric(r)).collect());
            let d = Doubleton::new(x.clone(), c.clone(), r0v, q_mat.clone(), qv).unwrap();
            let rr = [t[0] * r0[0], t[1] * r0[1]];
            let qq = [t[2] * q[0], t[3] * q[1]];
            let p: Vec<f64> = (0..2)
                .map(|i| {
                    x[i] + c[(i, 0)] * rr[0] + c[(i, 1)] * rr[1] + q_mat[(i, 0)] * qq[0] + q_mat[(i, 1)] * qq[1]
                })
                .collect();
            (d, p)
        })
}

/// Point rounding in the member construction is far below this slack.
fn near(i: Interval, x: f64) -> bool {
    i.inflate(1.0, 1e-12).contains(x)
}

proptest! {
    #[test]
    fn doubleton_hull_contains_members((d, p) in doubleton_and_member()) {
        let h = d.enclose();
        prop_assert!(near(h[0], p[0]) && near(h[1], p[1]));
    }

    #[test]
    fn eval_contains_image_of_members((d, p) in doubleton_and_member()) {
        let f = VanDerPol { mu: 0.7 };
        let image = eval(&RepresentableSet::from(d), &FieldMap(&f)).unwrap();
        let fp = f.eval(&p);
        prop_assert!(near(image[0], fp[0]) && near(image[1], fp[1]), "{:?} {:?}", image, fp);
    }

    #[test]
    fn eval_is_no_wider_than_hull_evaluation((d, _) in doubleton_and_member()) {
        let f = VanDerPol { mu: 0.7 };
        let direct = f.eval_box(&d.enclose());
        let image = eval(&RepresentableSet::from(d), &FieldMap(&f)).unwrap();
        for i in 0..2 {
            prop_assert!(image[i].subset_of(&direct[i]));
        }
    }

    #[test]
    fn affine_transform_contains_members(
        (d, p) in doubleton_and_member(),
        m in prop::collection::vec(-1.0f64..1.0, 4),
        y in prop::collection::vec(-1.0f64..1.0, 2),
    ) {
        let mut b = DMatrix::from_row_slice(2, 2, &m);
        b[(0, 0)] += 3.0;
        b[(1, 1)] += 3.0;
        let a = verified_inverse(&IntervalMatrix::from_point(&b)).unwrap();
        let z = affine_transform(&RepresentableSet::from(d), &a, &y).unwrap();
        let bi = b.try_inverse().unwrap();
        let zp: Vec<f64> = (0..2).map(|i| bi[(i, 0)] * (p[0] - y[0]) + bi[(i, 1)] * (p[1] - y[1])).collect();
        prop_assert!(near(z[0], zp[0]) && near(z[1], zp[1]));
    }

    #[test]
    fn tripleton_reduction_keeps_members((d, p) in doubleton_and_member()) {
        // the tripleton's B-part repeats the remainder part, so every member is kept
        let t = Tripleton::new(d.clone(), d.q_matrix().clone(), d.q().clone()).unwrap();
        let reduced = t.reduce().unwrap();
        let h = reduced.enclose();
        prop_assert!(near(h[0], p[0]) && near(h[1], p[1]));
    }
}

fn remark_set(eps: f64) -> Doubleton {
    Doubleton::new(
        vec![1.0 + eps, 1.0],
        DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0]),
        IntervalVector::new(vec![Interval::symmetric(1.0), Interval::ZERO]),
        DMatrix::identity(2, 2),
        IntervalVector::zeros(2),
    )
    .unwrap()
}

/// `(x, y) -> x - y`.
struct Difference;

impl poincare_core::sets::SmoothMap for Difference {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        1
    }
    fn eval_box(&self, x: &IntervalVector) -> IntervalVector {
        IntervalVector::new(vec![x[0] - x[1]])
    }
    fn jacobian_box(&self, _x: &IntervalVector) -> Option<IntervalMatrix> {
        Some(IntervalMatrix::from_point(&DMatrix::from_row_slice(1, 2, &[1.0, -1.0])))
    }
}

#[test]
fn difference_on_the_sheared_set_is_sharp() {
    let eps = 1e-15;
    let d = remark_set(eps);
    let hull = d.enclose();
    let sharp = eval(&RepresentableSet::from(d), &Difference).unwrap()[0];
    assert!(sharp.diam() <= 1e-14 && !sharp.contains(0.0), "{sharp:?}");
    // the represented set has x - y = fl(1 + eps) - 1 exactly
    assert!(sharp.contains((1.0 + eps) - 1.0));
    let naive = hull[0] - hull[1];
    assert!(naive.diam() >= 3.9 && naive.contains(0.0), "{naive:?}");
}
