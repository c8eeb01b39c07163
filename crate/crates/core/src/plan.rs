//! Reduction of "Z is diophantine in O_F" for Galois F to a totally real base
//! field E plus one degree-2 step F^sigma in F per complex conjugation sigma.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::int::fmt_rat;
use crate::arith::matrix::{intersect_spans, nullspace, rank, transpose, QMat};
use crate::catalogue::Catalogue;
use crate::error::{Error, Result};
use crate::nf::{automorphisms, roots_in_field, Automorphism, Field, NFElement, NumberField};

/// The odd part of L0 = Q(sqrt -1, sqrt 5, sqrt 7, ..., sqrt 19) as radicands.
pub const L0_RADICANDS: [i64; 7] = [-1, 5, 7, 11, 13, 17, 19];

fn require_galois(f: &Field) -> Result<Vec<Automorphism>> {
    let auts = automorphisms(f)?;
    if auts.len() != f.degree() {
        return Err(Error::NotGalois { found: auts.len(), degree: f.degree() });
    }
    Ok(auts)
}

/// One automorphism per nonreal embedding rho: rho^-1 . conj . rho, matched
/// numerically and admitted after an exact order-2 check. Duplicates removed.
pub fn complex_conjugations(f: &Field) -> Result<Vec<Automorphism>> {
    let auts = require_galois(f)?;
    let roots = f.root_values();
    let mut out: Vec<Automorphism> = Vec::new();
    for z in roots.iter().filter(|z| z.im > 0.0) {
        let target = z.conj();
        let mut dists: Vec<(f64, usize)> =
            auts.iter().enumerate().map(|(i, a)| ((a.image_of_generator().embed(*z) - target).norm(), i)).collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0));
        let sep = roots_separation(&roots);
        if dists[0].0 > sep / 4.0 || dists.get(1).is_some_and(|d| d.0 < sep / 4.0) {
            return Err(Error::PrecisionCap(53));
        }
        let sigma = auts[dists[0].1].clone();
        if sigma.is_identity() || !sigma.compose(&sigma).is_identity() {
            return Err(Error::NotAnInvolution);
        }
        if !out.contains(&sigma) {
            out.push(sigma);
        }
    }
    Ok(out)
}

fn roots_separation(r: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            m = m.min((r[i] - r[j]).norm());
        }
    }
    if m.is_finite() {
        m
    } else {
        1.0
    }
}

/// A subfield of F: a Q-subspace (rows of power coordinates) closed under
/// multiplication, with a primitive element and its minimal polynomial.
#[derive(Clone, Debug)]
pub struct Subfield {
    pub field: Field,
    pub basis: QMat,
    pub generator: NFElement,
    pub minpoly: Vec<BigInt>,
}

impl Subfield {
    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    /// Abstract field with the generator's minimal polynomial.
    pub fn abstract_field(&self, cat: Option<&Catalogue>) -> Result<Field> {
        if let Some(f) = cat.and_then(|c| c.field_by_poly(&self.minpoly)) {
            return Ok(f);
        }
        NumberField::new(None, self.minpoly.clone(), None)
    }

    pub fn is_totally_real(&self) -> Result<bool> {
        Ok(self.abstract_field(None)?.is_totally_real())
    }

    pub fn contains(&self, a: &NFElement) -> bool {
        let mut rows = self.basis.clone();
        rows.push(a.power_coords().to_vec());
        rank(&rows) == self.basis.len()
    }

    pub fn to_json(&self, cat: Option<&Catalogue>) -> SubfieldJson {
        let name = cat.and_then(|c| c.field_by_poly(&self.minpoly)).map(|f| f.name().to_string());
        SubfieldJson {
            degree: self.degree(),
            name,
            minpoly: self.minpoly.iter().map(|c| c.to_string()).collect(),
            generator: self.generator.ib_strings(),
            basis: self.basis.iter().map(|r| r.iter().map(fmt_rat).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SubfieldJson {
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub minpoly: Vec<String>,
    pub generator: Vec<String>,
    pub basis: Vec<Vec<String>>,
}

fn integer_minpoly(a: &NFElement) -> Option<Vec<BigInt>> {
    let m = a.minpoly();
    m.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
}

/// Search small integer combinations of the basis (widening) for an integral
/// element whose minimal polynomial has full degree.
fn present(field: &Field, basis: QMat) -> Subfield {
    let d = basis.len();
    if d == 1 {
        return Subfield {
            field: field.clone(),
            basis,
            generator: NFElement::one(field),
            minpoly: vec![BigInt::from(-1), BigInt::one()],
        };
    }
    let elems: Vec<NFElement> = basis.iter().map(|r| NFElement::from_power(field, r.clone())).collect();
    let order = |k: i64| if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) };
    let mut bound = 1i64;
    loop {
        let side = (2 * bound + 1) as u64;
        for idx in 0..side.pow(d as u32) {
            let mut t = idx;
            let mut g = NFElement::zero(field);
            for e in &elems {
                let c = order((t % side) as i64);
                t /= side;
                g = &g + &e.scale(&BigRational::from_integer(c.into()));
            }
            if g.is_zero() {
                continue;
            }
            let g = g.scale(&BigRational::from_integer(g.denominator()));
            if g.minpoly().len() == d + 1 {
                if let Some(mp) = integer_minpoly(&g) {
                    return Subfield { field: field.clone(), basis, generator: g, minpoly: mp };
                }
            }
        }
        bound += 1;
    }
}

/// F^sigma for an automorphism of order 2.
pub fn fixed_field(sigma: &Automorphism) -> Result<Subfield> {
    if sigma.is_identity() || !sigma.compose(sigma).is_identity() {
        return Err(Error::NotAnInvolution);
    }
    let f = sigma.field();
    let n = f.degree();
    // rows: sigma(theta^i) - theta^i
    let mut m: QMat = Vec::with_capacity(n);
    let theta = NFElement::theta(f);
    for i in 0..n {
        let p = theta.pow(i as u32);
        m.push((&sigma.apply(&p) - &p).power_coords().to_vec());
    }
    let basis = nullspace(&transpose(&m));
    Ok(present(f, basis))
}

/// Intersection of subfields of F; the empty list gives F itself.
pub fn intersect_subfields(f: &Field, subs: &[Subfield]) -> Result<Subfield> {
    let n = f.degree();
    let mut basis: QMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for s in subs {
        if !s.field.same(f) {
            return Err(Error::ParentMismatch(f.name().into(), s.field.name().into()));
        }
        basis = intersect_spans(&basis, &s.basis);
    }
    if subs.len() == 1 {
        return Ok(subs[0].clone());
    }
    Ok(present(f, basis))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PlanStep {
    pub kind: String,
    pub statement: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub satisfied: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Invariant {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReductionPlan {
    pub field: String,
    pub degree: usize,
    pub conjugations: Vec<Vec<String>>,
    pub fixed_fields: Vec<SubfieldJson>,
    pub intersection: SubfieldJson,
    pub intersection_totally_real: bool,
    pub index: usize,
    pub steps: Vec<PlanStep>,
    pub invariants: Vec<Invariant>,
    pub l0_variant: bool,
}

impl ReductionPlan {
    pub fn ascent_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.kind == "ascent").count()
    }

    pub fn verified(&self) -> bool {
        self.invariants.iter().all(|i| i.holds)
    }
}

fn describe(s: &SubfieldJson) -> String {
    s.name.clone().unwrap_or_else(|| format!("Q[x]/({})", s.minpoly.join(",")))
}

fn build_plan(f: &Field, cat: Option<&Catalogue>, l0: bool) -> Result<ReductionPlan> {
    let conj = complex_conjugations(f)?;
    let fixed = conj.iter().map(fixed_field).collect::<Result<Vec<_>>>()?;
    let e = intersect_subfields(f, &fixed)?;
    let e_real = e.is_totally_real()?;
    let n = f.degree();
    let mut inv = Vec::new();
    let mut push = |name: String, holds: bool| inv.push(Invariant { name, holds });
    for (i, (s, fx)) in conj.iter().zip(&fixed).enumerate() {
        push(format!("sigma{i} has order 2"), !s.is_identity() && s.compose(s).is_identity());
        push(format!("[F : F^sigma{i}] = 2"), 2 * fx.degree() == n);
        push(format!("F^sigma{i} is fixed by sigma{i}"), fx.basis.iter().all(|r| {
            let a = NFElement::from_power(f, r.clone());
            s.apply(&a) == a
        }));
        push(format!("E inside F^sigma{i}"), e.basis.iter().all(|r| fx.contains(&NFElement::from_power(f, r.clone()))));
    }
    let mut all = Vec::new();
    let mut cur: Option<QMat> = None;
    for fx in &fixed {
        cur = Some(match cur {
            None => fx.basis.clone(),
            Some(b) => intersect_spans(&b, &fx.basis),
        });
    }
    let dim = cur.map_or(n, |b| b.len());
    push("dim E equals the subspace intersection dimension".into(), dim == e.degree());
    push("E is closed under multiplication".into(), {
        let g = &e.generator;
        (0..e.degree()).all(|k| e.contains(&g.pow(k as u32)))
    });
    push("E is totally real".into(), e_real);
    push("[F : E] is an integer".into(), n.is_multiple_of(e.degree()));
    let ej = e.to_json(cat);
    let mut steps = vec![PlanStep {
        kind: "base".into(),
        statement: format!("Z is diophantine in the ring of integers of the totally real field E = {}", describe(&ej)),
        status: "ASSUMED".into(),
        degree: None,
        constraints: Vec::new(),
    }];
    if fixed.len() > 1 {
        steps.push(PlanStep {
            kind: "intersection".into(),
            statement: "O_E is the intersection of the rings O_{F^sigma}, each diophantine in O_F".into(),
            status: "VERIFIED".into(),
            degree: None,
            constraints: Vec::new(),
        });
    }
    let f_contains_l0: Vec<(i64, bool)> = L0_RADICANDS
        .iter()
        .map(|&c| {
            let poly = vec![NFElement::from_int(f, -c), NFElement::zero(f), NFElement::one(f)];
            (c, roots_in_field(&poly).map(|r| !r.is_empty()).unwrap_or(false))
        })
        .collect();
    for (i, fx) in fixed.iter().enumerate() {
        let fj = fx.to_json(cat);
        all.push(fj.clone());
        let mut constraints = vec![Constraint {
            name: "rank-stable abelian variety for F^sigma in F".into(),
            satisfied: true,
            note: "ASSUMED input".into(),
        }];
        if l0 {
            constraints.push(Constraint {
                name: "K real".into(),
                satisfied: true,
                note: format!("F^sigma{i} is real under the embedding defining sigma{i}"),
            });
            constraints.push(Constraint { name: "L Galois over Q".into(), satisfied: true, note: "checked by automorphism count".into() });
            let missing: Vec<String> = f_contains_l0.iter().filter(|(_, ok)| !ok).map(|(c, _)| format!("sqrt({c})")).collect();
            constraints.push(Constraint {
                name: "L contains L0".into(),
                satisfied: missing.is_empty(),
                note: if missing.is_empty() {
                    "all square roots present".into()
                } else {
                    format!("missing {}; requires enlarging F by L0 (compositum not constructed)", missing.join(", "))
                },
            });
        }
        steps.push(PlanStep {
            kind: "ascent".into(),
            statement: format!("O_{{F^sigma{i}}} = O_{{{}}} is diophantine in O_F", describe(&fj)),
            status: "STEP".into(),
            degree: Some(n / fx.degree()),
            constraints,
        });
    }
    Ok(ReductionPlan {
        field: f.name().into(),
        degree: n,
        conjugations: conj.iter().map(|s| s.image_of_generator().ib_strings()).collect(),
        fixed_fields: all,
        intersection: ej,
        intersection_totally_real: e_real,
        index: n / e.degree(),
        steps,
        invariants: inv,
        l0_variant: l0,
    })
}

pub fn plan(f: &Field, cat: Option<&Catalogue>) -> Result<ReductionPlan> {
    build_plan(f, cat, false)
}

pub fn plan_l0_variant(f: &Field, cat: Option<&Catalogue>) -> Result<ReductionPlan> {
    build_plan(f, cat, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::builtin;

    #[test]
    fn conjugations() {
        assert!(complex_conjugations(&builtin("sqrt2").unwrap()).unwrap().is_empty());
        let g = builtin("gauss").unwrap();
        let c = complex_conjugations(&g).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(*c[0].image_of_generator(), -NFElement::theta(&g));
        let z8 = builtin("zeta8").unwrap();
        let c = complex_conjugations(&z8).unwrap();
        assert_eq!(c.len(), 1);
        let t = NFElement::theta(&z8);
        let sqrt2 = &t - &t.pow(3);
        assert_eq!(c[0].apply(&sqrt2), sqrt2);
        assert_eq!(c[0].apply(&t.pow(2)), -t.pow(2));
        assert!(matches!(complex_conjugations(&builtin("cbrt2").unwrap()), Err(Error::NotGalois { .. })));
    }

    #[test]
    fn fixed_fields_and_intersections() {
        let cat = Catalogue::with_builtins();
        let g = builtin("gauss").unwrap();
        let s = fixed_field(&complex_conjugations(&g).unwrap()[0]).unwrap();
        assert_eq!(s.degree(), 1);
        let z8 = builtin("zeta8").unwrap();
        let s = fixed_field(&complex_conjugations(&z8).unwrap()[0]).unwrap();
        assert_eq!(s.to_json(Some(&cat)).name.as_deref(), Some("sqrt2"));
        assert!(matches!(fixed_field(&Automorphism::identity(&z8)), Err(Error::NotAnInvolution)));
        let f = builtin("sqrt2_sqrt3").unwrap();
        let auts = automorphisms(&f).unwrap();
        let subs: Vec<Subfield> = auts[1..].iter().map(|a| fixed_field(a).unwrap()).collect();
        let (a, b) = (subs[0].clone(), subs[1].clone());
        assert_eq!(intersect_subfields(&f, &[a.clone(), b]).unwrap().degree(), 1);
        assert_eq!(intersect_subfields(&f, std::slice::from_ref(&a)).unwrap().degree(), 2);
        assert_eq!(intersect_subfields(&f, &[]).unwrap().degree(), 4);
    }

    #[test]
    fn plans() {
        let cat = Catalogue::with_builtins();
        let p = plan(&builtin("gauss").unwrap(), Some(&cat)).unwrap();
        assert_eq!((p.intersection.name.as_deref(), p.ascent_steps()), (Some("Q"), 1));
        assert!(p.verified());
        let p = plan(&builtin("zeta8").unwrap(), Some(&cat)).unwrap();
        assert_eq!((p.intersection.name.as_deref(), p.ascent_steps()), (Some("sqrt2"), 1));
        assert!(p.intersection_totally_real && p.verified());
        let p = plan(&builtin("sqrt2_sqrt3").unwrap(), Some(&cat)).unwrap();
        assert_eq!((p.ascent_steps(), p.index), (0, 1));
        assert!(p.intersection_totally_real);
        let p = plan_l0_variant(&builtin("zeta8").unwrap(), Some(&cat)).unwrap();
        let c = &p.steps[1].constraints;
        assert!(c.iter().any(|c| c.name == "L contains L0" && !c.satisfied));
    }
}
