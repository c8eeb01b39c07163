//! Shared fixtures for the benchmarks.

use dioph_core::catalogue::Catalogue;
use dioph_core::ec::EllipticCurveData;
use dioph_core::ideal::Ideal;
use dioph_core::{Field, NFElement};

pub fn field(name: &str) -> Field {
    Catalogue::with_builtins().field(name).expect("built-in field")
}

pub fn element(f: &Field, coords: &[i64]) -> NFElement {
    let v: Vec<num_bigint::BigInt> = coords.iter().map(|&c| c.into()).collect();
    NFElement::from_ib(f, &v)
}

/// Two ideals of cbrt2 with several prime factors each.
pub fn cbrt2_pair() -> (Ideal, Ideal) {
    let f = field("cbrt2");
    let a = Ideal::from_gens(&f, &[element(&f, &[7, -3, 2]), element(&f, &[30, 0, 0])]).unwrap();
    let b = Ideal::from_gens(&f, &[element(&f, &[-4, 5, 1]), element(&f, &[21, 0, 0])]).unwrap();
    (a, b)
}

pub fn mordell() -> EllipticCurveData {
    let cat = Catalogue::with_builtins();
    EllipticCurveData::from_entry(&cat, cat.curve("mordell_m2").unwrap()).unwrap()
}
