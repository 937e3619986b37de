use hbl::bfunc::{delta3, BFunction, Rectangle3};
use hbl::rational::{rat, RationalMatrix};
use hbl::subspace::Subspace;
use proptest::prelude::*;

fn subspace(d: usize) -> impl Strategy<Value = Subspace> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, d), 0..=d).prop_map(move |rows| {
        let rows = rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect();
        Subspace::from_vectors(d, rows).unwrap()
    })
}

fn pair(max_d: usize) -> impl Strategy<Value = (Subspace, Subspace)> {
    (1..=max_d).prop_flat_map(|d| (subspace(d), subspace(d)))
}

proptest! {
    #[test]
    fn dimension_formula((u, w) in pair(4)) {
        let s = u.sum(&w).unwrap();
        let i = u.intersect(&w).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        prop_assert!(i.is_subspace_of(&u) && i.is_subspace_of(&w));
        prop_assert!(u.is_subspace_of(&s) && w.is_subspace_of(&s));
    }

    #[test]
    fn canonical_form_is_idempotent(u in (1usize..=4).prop_flat_map(subspace), k in -4i64..=4) {
        let again = Subspace::canonicalize(u.ambient_dim(), &u.basis_matrix()).unwrap();
        prop_assert_eq!(&again, &u);
        // Any other spanning set of the same space canonicalizes identically.
        let mut rows = u.basis().to_vec();
        if rows.len() >= 2 {
            let extra: Vec<_> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a + b * rat(k)).collect();
            rows.push(extra);
            rows.swap(0, 1);
        }
        let m = RationalMatrix::from_rows(rows, u.ambient_dim()).unwrap();
        prop_assert_eq!(Subspace::canonicalize(u.ambient_dim(), &m).unwrap(), u);
    }

    #[test]
    fn delta3_is_additive_in_f(
        s1 in prop::array::uniform3(0.05f64..1.0),
        s2 in prop::array::uniform3(0.05f64..1.0),
        c in prop::array::uniform6(0.1f64..5.0),
    ) {
        let r = Rectangle3::new(c[0], c[0] + c[1], c[2], c[2] + c[3], c[4], c[4] + c[5]).unwrap();
        let f = BFunction::monomial(&s1).unwrap();
        let g = BFunction::monomial(&s2).unwrap();
        let sum = BFunction::Sum(vec![f.clone(), g.clone()]);
        let (a, b, ab) = (delta3(&f, &r), delta3(&g, &r), delta3(&sum, &r));
        let scale = 1.0 + a.abs() + b.abs() + 8.0 * 5f64.powi(3);
        prop_assert!((ab - a - b).abs() <= 1e-12 * scale);
    }

    #[test]
    fn delta3_is_additive_over_rectangle_splits(
        s in prop::array::uniform3(0.05f64..1.0),
        c in prop::array::uniform6(0.1f64..5.0),
        cut in 0.0f64..1.0,
        axis in 0usize..3,
    ) {
        let mut lo = [c[0], c[2], c[4]];
        let hi = [c[0] + c[1], c[2] + c[3], c[4] + c[5]];
        let f = BFunction::monomial(&s).unwrap();
        let rect = |lo: [f64; 3], hi: [f64; 3]| Rectangle3::new(lo[0], hi[0], lo[1], hi[1], lo[2], hi[2]).unwrap();
        let whole = delta3(&f, &rect(lo, hi));
        let mid = lo[axis] + cut * (hi[axis] - lo[axis]);
        let mut left_hi = hi;
        left_hi[axis] = mid;
        let left = delta3(&f, &rect(lo, left_hi));
        lo[axis] = mid;
        let right = delta3(&f, &rect(lo, hi));
        prop_assert!((whole - left - right).abs() <= 1e-11 * (1.0 + 8.0 * 10f64.powi(3)));
    }
}
