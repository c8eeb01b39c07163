//! Built-in fields and curves, and JSON catalogue files.
//!
//! A field file holds a list of `{name, defining_poly, integral_basis}` with
//! the polynomial ascending and basis rows as exact rationals in the power
//! basis. A curve file holds `{name, field_name, a, b, generator: {x, y},
//! rank_note}` where each value is either one rational or a list of
//! integral-basis coordinates.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::int::{factor_bigint, fmt_rat, parse_rat, rat};
use crate::arith::matrix::QMat;
use crate::arith::poly::discriminant;
use crate::error::{Error, Result};
use crate::nf::{Field, NFElement, NumberField};

/// Environment variable naming the default catalogue directory.
pub const CATALOGUE_ENV: &str = "DIOPH_CATALOGUE";

struct Entry {
    name: &'static str,
    poly: &'static [i64],
    // None: the power basis
    basis: Option<&'static [&'static [(i64, i64)]]>,
}

const ENTRIES: &[Entry] = &[
    Entry { name: "Q", poly: &[-1, 1], basis: None },
    Entry { name: "gauss", poly: &[1, 0, 1], basis: None },
    Entry { name: "eisenstein", poly: &[1, 1, 1], basis: None },
    Entry { name: "sqrt2", poly: &[-2, 0, 1], basis: None },
    Entry { name: "sqrt3", poly: &[-3, 0, 1], basis: None },
    Entry { name: "sqrt5", poly: &[-5, 0, 1], basis: Some(&[&[(1, 1), (0, 1)], &[(1, 2), (1, 2)]]) },
    Entry { name: "cbrt2", poly: &[-2, 0, 0, 1], basis: None },
    Entry { name: "zeta9plus", poly: &[1, -3, 0, 1], basis: None },
    Entry { name: "zeta5", poly: &[1, 1, 1, 1, 1], basis: None },
    // Q(i, sqrt 2)
    Entry { name: "zeta8", poly: &[1, 0, 0, 0, 1], basis: None },
    // Q(i, sqrt 3)
    Entry { name: "zeta12", poly: &[1, 0, -1, 0, 1], basis: None },
    // Q(sqrt 2, sqrt 3), theta = sqrt2 + sqrt3; basis 1, sqrt2, sqrt3, (sqrt2 + sqrt6)/2
    // with sqrt2 = (theta^3 - 9 theta)/2, sqrt3 = (11 theta - theta^3)/2, sqrt6 = (theta^2 - 5)/2.
    Entry {
        name: "sqrt2_sqrt3",
        poly: &[1, 0, -10, 0, 1],
        basis: Some(&[
            &[(1, 1), (0, 1), (0, 1), (0, 1)],
            &[(0, 1), (-9, 2), (0, 1), (1, 2)],
            &[(0, 1), (11, 2), (0, 1), (-1, 2)],
            &[(-5, 4), (-9, 4), (1, 4), (1, 4)],
        ]),
    },
];

fn entry_basis(e: &Entry) -> QMat {
    let d = e.poly.len() - 1;
    match e.basis {
        Some(rows) => rows.iter().map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect()).collect(),
        None => power_basis(d),
    }
}

fn power_basis(d: usize) -> QMat {
    (0..d).map(|i| (0..d).map(|j| if i == j { rat(1, 1) } else { rat(0, 1) }).collect()).collect()
}

/// Integral basis for x^2 + b x + c. With D = b^2 - 4c = m^2 D0, D0 squarefree,
/// sqrt(D0) = (2 theta + b)/m and the ring of integers is Z[omega] with
/// omega = (1 + sqrt D0)/2 when D0 = 1 mod 4, else sqrt D0.
fn quadratic_basis(b: &BigInt, c: &BigInt) -> Result<QMat> {
    let disc = b * b - BigInt::from(4) * c;
    let mut m = BigInt::one();
    for (p, e) in factor_bigint(&disc)? {
        m *= BigInt::from(p).pow(e / 2);
    }
    let d0 = &disc / (&m * &m);
    let two = BigInt::from(2);
    let omega: Vec<BigRational> = if d0.mod_floor(&BigInt::from(4)) == BigInt::one() {
        // (m + b + 2 theta) / (2m)
        vec![BigRational::new(&m + b, &two * &m), BigRational::new(two.clone(), &two * &m)]
    } else {
        vec![BigRational::new(b.clone(), m.clone()), BigRational::new(two, m.clone())]
    };
    Ok(vec![vec![rat(1, 1), rat(0, 1)], omega])
}

/// The integral basis and catalogue name for a defining polynomial.
pub fn builtin_basis(poly: &[BigInt]) -> Result<(QMat, String)> {
    let d = poly.len() - 1;
    let as_ints: Option<Vec<i64>> = poly.iter().map(|c| i64::try_from(c).ok()).collect();
    if let Some(p) = &as_ints {
        if let Some(e) = ENTRIES.iter().find(|e| e.poly == p.as_slice()) {
            return Ok((entry_basis(e), e.name.to_string()));
        }
    }
    let name = crate::arith::poly::QPoly::from_ints(poly).to_string();
    match d {
        1 => Ok((power_basis(1), name)),
        2 => Ok((quadratic_basis(&poly[1], &poly[0])?, name)),
        _ => {
            let disc = discriminant(poly);
            let squarefree = factor_bigint(&disc).map(|f| f.iter().all(|&(_, e)| e == 1)).unwrap_or(false);
            if squarefree {
                Ok((power_basis(d), name))
            } else {
                Err(Error::NonCatalogueField(name))
            }
        }
    }
}

fn builtins() -> &'static BTreeMap<&'static str, Field> {
    static CELL: OnceLock<BTreeMap<&'static str, Field>> = OnceLock::new();
    CELL.get_or_init(|| {
        ENTRIES
            .iter()
            .map(|e| {
                let poly = e.poly.iter().map(|&x| BigInt::from(x)).collect();
                let f = NumberField::new(Some(e.name), poly, Some(entry_basis(e)))
                    .unwrap_or_else(|err| panic!("built-in field {} failed verification: {err}", e.name));
                (e.name, f)
            })
            .collect()
    })
}

/// A built-in field by name.
pub fn builtin(name: &str) -> Result<Field> {
    builtins().get(name).cloned().ok_or_else(|| Error::UnknownField(name.to_string()))
}

pub fn builtin_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldEntry {
    pub name: String,
    pub defining_poly: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral_basis: Option<Vec<Vec<String>>>,
}

impl FieldEntry {
    pub fn build(&self) -> Result<Field> {
        let poly = self
            .defining_poly
            .iter()
            .map(|s| {
                let q = parse_rat(s)?;
                q.is_integer().then(|| q.to_integer()).ok_or_else(|| Error::NotMonic(self.defining_poly.join(",")))
            })
            .collect::<Result<Vec<_>>>()?;
        let basis = match &self.integral_basis {
            None => None,
            Some(rows) => Some(rows.iter().map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?),
        };
        NumberField::new(Some(&self.name), poly, basis)
    }

    pub fn from_field(f: &NumberField) -> Self {
        FieldEntry {
            name: f.name().to_string(),
            defining_poly: f.poly().iter().map(|c| c.to_string()).collect(),
            integral_basis: Some(f.basis().iter().map(|r| r.iter().map(fmt_rat).collect()).collect()),
        }
    }
}

/// A value in K: one rational, or integral-basis coordinates.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum KValue {
    Rational(String),
    Coords(Vec<String>),
}

impl KValue {
    pub fn to_element(&self, field: &Field) -> Result<NFElement> {
        match self {
            KValue::Rational(s) => Ok(NFElement::from_rational(field, parse_rat(s)?)),
            KValue::Coords(v) => {
                if v.len() != field.degree() {
                    return Err(Error::Parse(format!("expected {} coordinates, got {}", field.degree(), v.len())));
                }
                let q = v.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
                Ok(NFElement::from_ib_rat(field, &q))
            }
        }
    }

    pub fn from_element(a: &NFElement) -> Self {
        match a.as_rational() {
            Some(q) if a.field().degree() == 1 => KValue::Rational(fmt_rat(&q)),
            _ => KValue::Coords(a.ib_strings()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointEntry {
    pub x: KValue,
    pub y: KValue,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveEntry {
    pub name: String,
    pub field_name: String,
    pub a: KValue,
    pub b: KValue,
    pub generator: PointEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_note: Option<String>,
}

/// The built-in curve y^2 = x^3 - 2 over Q with generator (3, 5).
pub fn builtin_curves() -> Vec<CurveEntry> {
    vec![CurveEntry {
        name: "mordell_m2".into(),
        field_name: "Q".into(),
        a: KValue::Rational("0".into()),
        b: KValue::Rational("-2".into()),
        generator: PointEntry { x: KValue::Rational("3".into()), y: KValue::Rational("5".into()) },
        rank_note: Some("rank 1 over Q; rank over extensions is user-supplied data".into()),
    }]
}

/// Fields and curves available by name: built-ins plus any loaded files.
#[derive(Clone, Default)]
pub struct Catalogue {
    fields: BTreeMap<String, Field>,
    curves: BTreeMap<String, CurveEntry>,
}

impl Catalogue {
    pub fn with_builtins() -> Self {
        let mut c = Catalogue::default();
        for (n, f) in builtins() {
            c.fields.insert(n.to_string(), f.clone());
        }
        for e in builtin_curves() {
            c.curves.insert(e.name.clone(), e);
        }
        c
    }

    pub fn add_field_entries(&mut self, entries: &[FieldEntry]) -> Result<()> {
        for e in entries {
            let f = e.build()?;
            self.fields.insert(e.name.clone(), f);
        }
        Ok(())
    }

    pub fn add_curve_entries(&mut self, entries: Vec<CurveEntry>) {
        for e in entries {
            self.curves.insert(e.name.clone(), e);
        }
    }

    /// Loads `fields.json` and `curves.json` from a directory when present.
    pub fn load_dir(&mut self, dir: &Path) -> Result<()> {
        let read = |name: &str| -> Result<Option<String>> {
            let p = dir.join(name);
            if !p.exists() {
                return Ok(None);
            }
            std::fs::read_to_string(&p).map(Some).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
        };
        if let Some(s) = read("fields.json")? {
            let entries: Vec<FieldEntry> = serde_json::from_str(&s).map_err(|e| Error::Parse(format!("fields.json: {e}")))?;
            self.add_field_entries(&entries)?;
        }
        if let Some(s) = read("curves.json")? {
            let entries: Vec<CurveEntry> = serde_json::from_str(&s).map_err(|e| Error::Parse(format!("curves.json: {e}")))?;
            self.add_curve_entries(entries);
        }
        Ok(())
    }

    pub fn field(&self, name: &str) -> Result<Field> {
        self.fields.get(name).cloned().ok_or_else(|| Error::UnknownField(name.to_string()))
    }

    pub fn curve(&self, name: &str) -> Result<&CurveEntry> {
        self.curves.get(name).ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn field_names(&self) -> Vec<String> {
        self.fields.keys().cloned().collect()
    }

    pub fn curve_names(&self) -> Vec<String> {
        self.curves.keys().cloned().collect()
    }

    /// A field by name, or the field whose defining polynomial is given.
    pub fn field_by_poly(&self, poly: &[BigInt]) -> Option<Field> {
        self.fields.values().find(|f| f.poly() == poly).cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn every_builtin_verifies() {
        for n in builtin_names() {
            let f = builtin(n).unwrap();
            assert_eq!(f.name(), n);
        }
        assert_eq!(builtin("sqrt2_sqrt3").unwrap().discriminant(), &BigInt::from(2304));
        assert_eq!(builtin("zeta5").unwrap().discriminant(), &BigInt::from(125));
        assert_eq!(builtin("cbrt2").unwrap().discriminant(), &BigInt::from(-108));
    }

    #[test]
    fn quadratic_formula() {
        // x^2 - 12: D = 48 = 4^2 * 3, sqrt 3 = theta / 2
        let (b, _) = builtin_basis(&[BigInt::from(-12), BigInt::zero(), BigInt::one()]).unwrap();
        assert_eq!(b[1], vec![rat(0, 1), rat(1, 2)]);
        let f = NumberField::new(None, vec![BigInt::from(-12), BigInt::zero(), BigInt::one()], None).unwrap();
        assert_eq!(f.discriminant(), &BigInt::from(12));
        // x^2 + x - 1: D = 5, omega = (1 + 1 + 2 theta)/2 = 1 + theta
        let f = NumberField::new(None, vec![BigInt::from(-1), BigInt::one(), BigInt::one()], None).unwrap();
        assert_eq!(f.discriminant(), &BigInt::from(5));
    }

    #[test]
    fn non_catalogue_field_needs_a_basis() {
        // x^3 - 4: disc -432 = -2^4 3^3, not squarefree
        let r = NumberField::new(None, vec![BigInt::from(-4), BigInt::zero(), BigInt::zero(), BigInt::one()], None);
        assert!(matches!(r, Err(Error::NonCatalogueField(_))));
    }

    #[test]
    fn json_round_trip() {
        let f = builtin("sqrt5").unwrap();
        let e = FieldEntry::from_field(&f);
        let s = serde_json::to_string(&e).unwrap();
        let back: FieldEntry = serde_json::from_str(&s).unwrap();
        assert_eq!(&*back.build().unwrap(), &*f);
        let c = &builtin_curves()[0];
        let s = serde_json::to_string(c).unwrap();
        let back: CurveEntry = serde_json::from_str(&s).unwrap();
        assert_eq!(back.generator.x, KValue::Rational("3".into()));
    }
}
