use num_bigint::BigInt;
use proptest::prelude::*;

use dioph_core::catalogue::builtin;
use dioph_core::ideal::{num_den, Ideal};
use dioph_core::{Field, NFElement};

fn el(f: &Field, c: &[i64]) -> NFElement {
    NFElement::from_ib(f, &c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
}

fn coords(d: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, d).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn principal_ideals_multiply(a in coords(3), b in coords(3)) {
        let f = builtin("cbrt2").unwrap();
        let (x, y) = (el(&f, &a), el(&f, &b));
        let (ix, iy) = (Ideal::principal(&x).unwrap(), Ideal::principal(&y).unwrap());
        let prod = ix.mul(&iy).unwrap();
        prop_assert_eq!(&prod, &Ideal::principal(&(&x * &y)).unwrap());
        prop_assert_eq!(prod.norm(), ix.norm() * iy.norm());
        prop_assert!(ix.divides(&prod).unwrap());
        // IJ is inside I cap J
        prop_assert!(ix.intersect(&iy).unwrap().divides(&prod).unwrap());
    }

    #[test]
    fn sum_and_intersection_bracket_both(a in coords(2), b in coords(2)) {
        let f = builtin("sqrt5").unwrap();
        let (i, j) = (Ideal::principal(&el(&f, &a)).unwrap(), Ideal::principal(&el(&f, &b)).unwrap());
        let (s, n) = (i.sum(&j).unwrap(), i.intersect(&j).unwrap());
        prop_assert!(s.divides(&i).unwrap() && s.divides(&j).unwrap());
        prop_assert!(i.divides(&n).unwrap() && j.divides(&n).unwrap());
        // Dedekind domain: (I + J)(I cap J) = IJ
        prop_assert_eq!(s.mul(&n).unwrap(), i.mul(&j).unwrap());
    }

    #[test]
    fn num_den_reconstructs(a in coords(2), b in coords(2)) {
        let f = builtin("gauss").unwrap();
        let q = el(&f, &a).div(&el(&f, &b)).unwrap();
        let (n, d) = num_den(&q).unwrap();
        prop_assert!(n.coprime(&d).unwrap());
        // num(1/q) = den(q) and den(1/q) = num(q)
        let (n2, d2) = num_den(&q.inverse().unwrap()).unwrap();
        prop_assert_eq!(n2, d);
        prop_assert_eq!(d2, n);
    }
}
