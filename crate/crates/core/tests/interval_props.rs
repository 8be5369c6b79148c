use nalgebra::DMatrix;
use poincare_core::interval::{verified_inverse, Interval, IntervalMatrix, IntervalVector};
use proptest::prelude::*;

fn interval() -> impl Strategy<Value = Interval> {
    (-1e3f64..1e3, 0.0f64..10.0).prop_map(|(c, r)| Interval::new(c - r, c + r).unwrap())
}

/// An interval together with a point inside it.
fn member() -> impl Strategy<Value = (Interval, f64)> {
    interval().prop_flat_map(|i| (Just(i), i.lo()..=i.hi()))
}

proptest! {
    #[test]
    fn arithmetic_contains_pointwise_results((a, x) in member(), (b, y) in member()) {
        prop_assert!((a + b).contains(x + y));
        prop_assert!((a - b).contains(x - y));
        prop_assert!((a * b).contains(x * y));
        prop_assert!((-a).contains(-x));
        prop_assert!(a.sqr().contains(x * x));
        if !b.contains_zero() {
            prop_assert!(a.checked_div(b).unwrap().contains(x / y));
        } else {
            prop_assert!(a.checked_div(b).is_err());
        }
    }

    #[test]
    fn powers_and_roots_contain_pointwise_results((a, x) in member(), n in 0u32..7) {
        prop_assert!(a.powi(n).contains(x.powi(n as i32)));
        let s = a.abs();
        prop_assert!(s.contains(x.abs()));
        prop_assert!(s.sqrt().unwrap().contains(x.abs().sqrt()));
    }

    #[test]
    fn exp_contains_pointwise_result(c in -30.0f64..30.0, r in 0.0f64..1.0, t in 0.0f64..=1.0) {
        let a = Interval::new(c - r, c + r).unwrap();
        let x = a.lo() + t * (a.hi() - a.lo());
        let e = a.exp();
        // f64::exp is faithful, not correctly rounded: allow one ulp
        prop_assert!(e.lo() <= x.exp() * (1.0 + f64::EPSILON) && x.exp() * (1.0 - f64::EPSILON) <= e.hi());
    }

    #[test]
    fn operations_are_inclusion_isotone((a, _) in member(), (b, _) in member(), w in 0.0f64..5.0) {
        let aa = a.inflate(1.0, w);
        let bb = b.inflate(1.0, w);
        prop_assert!((a + b).subset_of(&(aa + bb)));
        prop_assert!((a * b).subset_of(&(aa * bb)));
        prop_assert!((a - b).subset_of(&(aa - bb)));
        prop_assert!(a.sqr().subset_of(&aa.sqr()));
    }

    #[test]
    fn hull_and_intersection((a, x) in member(), (b, y) in member()) {
        let h = a.hull(&b);
        prop_assert!(h.contains(x) && h.contains(y));
        match a.intersect(&b) {
            Ok(i) => prop_assert!(i.subset_of(&a) && i.subset_of(&b)),
            Err(_) => prop_assert!(a.hi() < b.lo() || b.hi() < a.lo()),
        }
    }

    #[test]
    fn matrix_vector_product_contains_point_product(
        m in prop::collection::vec(-5.0f64..5.0, 9),
        v in prop::collection::vec(-5.0f64..5.0, 3),
        r in 0.0f64..0.1,
    ) {
        let pm = DMatrix::from_row_slice(3, 3, &m);
        let boxed = IntervalVector::from_point(&v).inflate(1.0, r);
        let out = IntervalMatrix::from_point(&pm).mat_vec(&boxed).unwrap();
        let exact = &pm * nalgebra::DVector::from_column_slice(&v);
        prop_assert!(out.contains_point(exact.as_slice()));
    }

    #[test]
    fn verified_inverse_contains_float_inverse(
        m in prop::collection::vec(-1.0f64..1.0, 9),
    ) {
        // diagonally dominant, hence well conditioned
        let mut pm = DMatrix::from_row_slice(3, 3, &m);
        for i in 0..3 {
            pm[(i, i)] += 4.0;
        }
        let inv = verified_inverse(&IntervalMatrix::from_point(&pm)).unwrap();
        let approx = pm.clone().try_inverse().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = inv.row(i)[j];
                prop_assert!((e.mid() - approx[(i, j)]).abs() < 1e-13);
                prop_assert!(e.diam() < 1e-12);
            }
        }
        // A B contains the identity
        let prod = inv.mat_mul(&IntervalMatrix::from_point(&pm)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!(prod.row(i)[j].contains(id));
            }
        }
    }
}

#[test]
fn singular_matrix_has_no_verified_inverse() {
    let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
    assert!(verified_inverse(&IntervalMatrix::from_point(&m)).is_err());
}
