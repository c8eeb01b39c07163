//! Emitters for the nonzero lemma and the ideal predicates written through
//! two-generator representations, plus native witness construction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::poly::{MPoly, PolySystem, Witness};
use crate::error::{Error, Result};
use crate::ideal::{express_in_gens, nonzero_witness, num_den, FieldExtension, Ideal};
use crate::nf::{Field, NFElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PredicateKind {
    IdealMembership,
    IdealDivides,
    IdealEqual,
    Coprime,
    PrincipalRatio,
    IsNum,
    Congruence,
}

impl PredicateKind {
    pub const ALL: [PredicateKind; 7] = [
        PredicateKind::IdealMembership,
        PredicateKind::IdealDivides,
        PredicateKind::IdealEqual,
        PredicateKind::Coprime,
        PredicateKind::PrincipalRatio,
        PredicateKind::IsNum,
        PredicateKind::Congruence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PredicateKind::IdealMembership => "ideal_membership",
            PredicateKind::IdealDivides => "ideal_divides",
            PredicateKind::IdealEqual => "ideal_equal",
            PredicateKind::Coprime => "coprime",
            PredicateKind::PrincipalRatio => "principal_ratio",
            PredicateKind::IsNum => "is_num",
            PredicateKind::Congruence => "congruence",
        }
    }
}

impl fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PredicateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PredicateKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown predicate `{s}`")))
    }
}

// Gadgets: each appends existentials named `{p}...` and equations to `s`.

/// a in (i1, i2): a = x i1 + y i2.
pub fn gadget_member(s: &mut PolySystem, p: &str, a: &MPoly, i1: &MPoly, i2: &MPoly) {
    let x = s.add_existential(&format!("{p}x"));
    let y = s.add_existential(&format!("{p}y"));
    s.push(a.sub(&x.mul(i1)).sub(&y.mul(i2)));
}

/// (j1, j2) | (i1, i2): both i's lie in J.
pub fn gadget_divides(s: &mut PolySystem, p: &str, j: (&MPoly, &MPoly), i: (&MPoly, &MPoly)) {
    gadget_member(s, &format!("{p}1"), i.0, j.0, j.1);
    gadget_member(s, &format!("{p}2"), i.1, j.0, j.1);
}

/// (i1, i2) + (j1, j2) = (1).
pub fn gadget_coprime(s: &mut PolySystem, p: &str, i: (&MPoly, &MPoly), j: (&MPoly, &MPoly)) {
    let x1 = s.add_existential(&format!("{p}x1"));
    let y1 = s.add_existential(&format!("{p}y1"));
    let x2 = s.add_existential(&format!("{p}x2"));
    let y2 = s.add_existential(&format!("{p}y2"));
    let e = x1.mul(i.0).add(&y1.mul(i.1)).add(&x2.mul(j.0)).add(&y2.mul(j.1)).sub(&s.c(1));
    s.push(e);
}

/// e != 0 via (2x - 1)(3x - 1) = y e.
pub fn gadget_nonzero(s: &mut PolySystem, p: &str, e: &MPoly) {
    let x = s.add_existential(&format!("{p}x"));
    let y = s.add_existential(&format!("{p}y"));
    let l = x.scale(&NFElement::from_int(s.base(), 2)).sub(&s.c(1));
    let r = x.scale(&NFElement::from_int(s.base(), 3)).sub(&s.c(1));
    s.push(l.mul(&r).sub(&y.mul(e)));
}

/// (a/b) = I/J: b != 0 and aJ = bI as ideals.
pub fn gadget_ratio(s: &mut PolySystem, p: &str, a: &MPoly, b: &MPoly, i: (&MPoly, &MPoly), j: (&MPoly, &MPoly)) {
    let (bi1, bi2) = (b.mul(i.0), b.mul(i.1));
    let (aj1, aj2) = (a.mul(j.0), a.mul(j.1));
    gadget_divides(s, &format!("{p}bi"), (&bi1, &bi2), (&aj1, &aj2));
    gadget_divides(s, &format!("{p}aj"), (&aj1, &aj2), (&bi1, &bi2));
    gadget_nonzero(s, &format!("{p}nz"), b);
}

/// I = num(a/b): some J with (a/b) = I/J and I + J = (1).
pub fn gadget_is_num(s: &mut PolySystem, p: &str, a: &MPoly, b: &MPoly, i: (&MPoly, &MPoly)) {
    let j1 = s.add_existential(&format!("{p}j1"));
    let j2 = s.add_existential(&format!("{p}j2"));
    gadget_ratio(s, &format!("{p}r."), a, b, i, (&j1, &j2));
    gadget_coprime(s, &format!("{p}c."), i, (&j1, &j2));
}

pub fn emit_nonzero(ext: &FieldExtension) -> PolySystem {
    let mut s = PolySystem::new(ext, &["a"], &[]);
    let a = s.v("a");
    gadget_nonzero(&mut s, "", &a);
    s
}

pub fn parameters(kind: PredicateKind) -> &'static [&'static str] {
    match kind {
        PredicateKind::IdealMembership => &["a", "i1", "i2"],
        PredicateKind::IdealDivides => &["j1", "j2", "i1", "i2"],
        PredicateKind::IdealEqual | PredicateKind::Coprime => &["i1", "i2", "j1", "j2"],
        PredicateKind::PrincipalRatio => &["a", "b", "i1", "i2", "j1", "j2"],
        PredicateKind::IsNum | PredicateKind::Congruence => &["a", "b", "i1", "i2"],
    }
}

/// Ideals enter as generator pairs (i1, i2), (j1, j2); field elements as
/// pairs (a, b) standing for a/b.
pub fn emit_predicate(kind: PredicateKind, ext: &FieldExtension) -> PolySystem {
    let mut s = PolySystem::new(ext, parameters(kind), &[]);
    let v = |s: &PolySystem, n: &str| s.v(n);
    let (a, b) = (s.index("a").map(|_| v(&s, "a")), s.index("b").map(|_| v(&s, "b")));
    let i = (v(&s, "i1"), v(&s, "i2"));
    let j = (s.index("j1").map(|_| v(&s, "j1")), s.index("j2").map(|_| v(&s, "j2")));
    match kind {
        PredicateKind::IdealMembership => gadget_member(&mut s, "", a.as_ref().unwrap(), &i.0, &i.1),
        PredicateKind::IdealDivides => {
            gadget_divides(&mut s, "d", (j.0.as_ref().unwrap(), j.1.as_ref().unwrap()), (&i.0, &i.1))
        }
        PredicateKind::IdealEqual => {
            let jj = (j.0.as_ref().unwrap(), j.1.as_ref().unwrap());
            gadget_divides(&mut s, "ij", (&i.0, &i.1), jj);
            gadget_divides(&mut s, "ji", jj, (&i.0, &i.1));
        }
        PredicateKind::Coprime => gadget_coprime(&mut s, "", (&i.0, &i.1), (j.0.as_ref().unwrap(), j.1.as_ref().unwrap())),
        PredicateKind::PrincipalRatio => gadget_ratio(
            &mut s,
            "",
            a.as_ref().unwrap(),
            b.as_ref().unwrap(),
            (&i.0, &i.1),
            (j.0.as_ref().unwrap(), j.1.as_ref().unwrap()),
        ),
        PredicateKind::IsNum => gadget_is_num(&mut s, "", a.as_ref().unwrap(), b.as_ref().unwrap(), (&i.0, &i.1)),
        PredicateKind::Congruence => {
            let d = a.as_ref().unwrap().sub(b.as_ref().unwrap());
            gadget_member(&mut s, "", &d, &i.0, &i.1)
        }
    }
    s
}

// Native witness construction, mirroring the gadgets' naming.

pub(crate) fn w_member(w: &mut Witness, p: &str, a: &NFElement, i1: &NFElement, i2: &NFElement) -> Result<bool> {
    match express_in_gens(&[i1.clone(), i2.clone()], a)? {
        Some(c) => {
            w.set(format!("{p}x"), c[0].clone());
            w.set(format!("{p}y"), c[1].clone());
            Ok(true)
        }
        None => Ok(false),
    }
}

pub(crate) fn w_divides(w: &mut Witness, p: &str, j: (&NFElement, &NFElement), i: (&NFElement, &NFElement)) -> Result<bool> {
    Ok(w_member(w, &format!("{p}1"), i.0, j.0, j.1)? && w_member(w, &format!("{p}2"), i.1, j.0, j.1)?)
}

fn ideal_of(field: &Field, g: (&NFElement, &NFElement)) -> Result<Ideal> {
    Ideal::from_gens(field, &[g.0.clone(), g.1.clone()])
}

pub(crate) fn w_coprime(w: &mut Witness, p: &str, i: (&NFElement, &NFElement), j: (&NFElement, &NFElement)) -> Result<bool> {
    let f = i.0.field().clone();
    let (ii, jj) = (ideal_of(&f, i)?, ideal_of(&f, j)?);
    let Some((x, y)) = ii.split_sum(&jj, &NFElement::one(&f))? else { return Ok(false) };
    let Some(c) = express_in_gens(&[i.0.clone(), i.1.clone()], &x)? else { return Ok(false) };
    let Some(d) = express_in_gens(&[j.0.clone(), j.1.clone()], &y)? else { return Ok(false) };
    w.set(format!("{p}x1"), c[0].clone());
    w.set(format!("{p}y1"), c[1].clone());
    w.set(format!("{p}x2"), d[0].clone());
    w.set(format!("{p}y2"), d[1].clone());
    Ok(true)
}

pub(crate) fn w_nonzero(w: &mut Witness, p: &str, e: &NFElement) -> Result<bool> {
    if e.is_zero() {
        return Ok(false);
    }
    let (x, y) = nonzero_witness(e)?;
    w.set(format!("{p}x"), x);
    w.set(format!("{p}y"), y);
    Ok(true)
}

fn w_ratio(
    w: &mut Witness,
    p: &str,
    a: &NFElement,
    b: &NFElement,
    i: (&NFElement, &NFElement),
    j: (&NFElement, &NFElement),
) -> Result<bool> {
    let (bi1, bi2) = (b * i.0, b * i.1);
    let (aj1, aj2) = (a * j.0, a * j.1);
    Ok(w_divides(w, &format!("{p}bi"), (&bi1, &bi2), (&aj1, &aj2))?
        && w_divides(w, &format!("{p}aj"), (&aj1, &aj2), (&bi1, &bi2))?
        && w_nonzero(w, &format!("{p}nz"), b)?)
}

/// Witness for I = num(a/b), J taken as den(a/b).
pub fn w_is_num(w: &mut Witness, p: &str, a: &NFElement, b: &NFElement, i: (&NFElement, &NFElement)) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Ok(false);
    }
    let f = a.field().clone();
    let (n, d) = num_den(&a.div(b)?)?;
    if n != ideal_of(&f, i)? {
        return Ok(false);
    }
    let (j1, j2) = d.two_element_rep();
    w.set(format!("{p}j1"), j1.clone());
    w.set(format!("{p}j2"), j2.clone());
    Ok(w_ratio(w, &format!("{p}r."), a, b, i, (&j1, &j2))? && w_coprime(w, &format!("{p}c."), i, (&j1, &j2))?)
}

/// Split an element of K as (a, b) with a integral and b a positive integer.
pub fn as_pair(x: &NFElement) -> (NFElement, NFElement) {
    let d = x.denominator();
    let f = x.field();
    (x.scale(&num_rational::BigRational::from_integer(d.clone())), NFElement::from_int(f, d))
}

/// One instance of a predicate with concrete ideals and elements.
#[derive(Clone, Debug)]
pub enum PredicateInstance {
    IdealMembership { a: NFElement, i: Ideal },
    IdealDivides { j: Ideal, i: Ideal },
    IdealEqual { i: Ideal, j: Ideal },
    Coprime { i: Ideal, j: Ideal },
    PrincipalRatio { a: NFElement, b: NFElement, i: Ideal, j: Ideal },
    IsNum { a: NFElement, b: NFElement, i: Ideal },
    Congruence { a: NFElement, b: NFElement, i: Ideal },
}

impl PredicateInstance {
    pub fn kind(&self) -> PredicateKind {
        match self {
            PredicateInstance::IdealMembership { .. } => PredicateKind::IdealMembership,
            PredicateInstance::IdealDivides { .. } => PredicateKind::IdealDivides,
            PredicateInstance::IdealEqual { .. } => PredicateKind::IdealEqual,
            PredicateInstance::Coprime { .. } => PredicateKind::Coprime,
            PredicateInstance::PrincipalRatio { .. } => PredicateKind::PrincipalRatio,
            PredicateInstance::IsNum { .. } => PredicateKind::IsNum,
            PredicateInstance::Congruence { .. } => PredicateKind::Congruence,
        }
    }

    /// The predicate evaluated with ideal arithmetic.
    pub fn native(&self) -> Result<bool> {
        Ok(match self {
            PredicateInstance::IdealMembership { a, i } => i.contains(a),
            PredicateInstance::IdealDivides { j, i } => j.divides(i)?,
            PredicateInstance::IdealEqual { i, j } => i == j,
            PredicateInstance::Coprime { i, j } => i.coprime(j)?,
            PredicateInstance::PrincipalRatio { a, b, i, j } => {
                !a.is_zero() && !b.is_zero() && Ideal::principal(a)?.mul(j)? == Ideal::principal(b)?.mul(i)?
            }
            PredicateInstance::IsNum { a, b, i } => !a.is_zero() && !b.is_zero() && num_den(&a.div(b)?)?.0 == *i,
            PredicateInstance::Congruence { a, b, i } => i.contains(&(a - b)),
        })
    }

    /// Parameter values, ideals through their two-element representations.
    pub fn parameter_witness(&self) -> Witness {
        let mut w = Witness::new();
        let ideal = |w: &mut Witness, p: &str, i: &Ideal| {
            let (g1, g2) = i.two_element_rep();
            w.set(format!("{p}1"), g1);
            w.set(format!("{p}2"), g2);
        };
        match self {
            PredicateInstance::IdealMembership { a, i } => {
                w.set("a", a.clone());
                ideal(&mut w, "i", i);
            }
            PredicateInstance::IdealDivides { j, i } | PredicateInstance::IdealEqual { i, j } | PredicateInstance::Coprime { i, j } => {
                ideal(&mut w, "i", i);
                ideal(&mut w, "j", j);
            }
            PredicateInstance::PrincipalRatio { a, b, i, j } => {
                w.set("a", a.clone()).set("b", b.clone());
                ideal(&mut w, "i", i);
                ideal(&mut w, "j", j);
            }
            PredicateInstance::IsNum { a, b, i } | PredicateInstance::Congruence { a, b, i } => {
                w.set("a", a.clone()).set("b", b.clone());
                ideal(&mut w, "i", i);
            }
        }
        w
    }

    /// A full witness when the predicate holds, built from ideal arithmetic.
    pub fn witness(&self) -> Result<Option<Witness>> {
        let mut w = self.parameter_witness();
        let g = |w: &Witness, n: &str| w.get(n).unwrap().clone();
        let (i1, i2) = (g(&w, "i1"), g(&w, "i2"));
        let ok = match self {
            PredicateInstance::IdealMembership { a, .. } => w_member(&mut w, "", a, &i1, &i2)?,
            PredicateInstance::IdealDivides { .. } => {
                let (j1, j2) = (g(&w, "j1"), g(&w, "j2"));
                w_divides(&mut w, "d", (&j1, &j2), (&i1, &i2))?
            }
            PredicateInstance::IdealEqual { .. } => {
                let (j1, j2) = (g(&w, "j1"), g(&w, "j2"));
                w_divides(&mut w, "ij", (&i1, &i2), (&j1, &j2))? && w_divides(&mut w, "ji", (&j1, &j2), (&i1, &i2))?
            }
            PredicateInstance::Coprime { .. } => {
                let (j1, j2) = (g(&w, "j1"), g(&w, "j2"));
                w_coprime(&mut w, "", (&i1, &i2), (&j1, &j2))?
            }
            PredicateInstance::PrincipalRatio { a, b, .. } => {
                let (j1, j2) = (g(&w, "j1"), g(&w, "j2"));
                !a.is_zero() && w_ratio(&mut w, "", a, b, (&i1, &i2), (&j1, &j2))?
            }
            PredicateInstance::IsNum { a, b, .. } => w_is_num(&mut w, "", a, b, (&i1, &i2))?,
            PredicateInstance::Congruence { a, b, .. } => w_member(&mut w, "", &(a - b), &i1, &i2)?,
        };
        Ok(ok.then_some(w))
    }
}

fn rand_elem(f: &Field, rng: &mut ChaCha8Rng, r: i64) -> NFElement {
    let v: Vec<BigInt> = (0..f.degree()).map(|_| BigInt::from(rng.gen_range(-r..=r))).collect();
    NFElement::from_ib(f, &v)
}

fn rand_nonzero(f: &Field, rng: &mut ChaCha8Rng, r: i64) -> NFElement {
    loop {
        let a = rand_elem(f, rng, r);
        if !a.is_zero() {
            return a;
        }
    }
}

fn rand_ideal(f: &Field, rng: &mut ChaCha8Rng) -> Ideal {
    let a = rand_nonzero(f, rng, 4);
    let b = rand_elem(f, rng, 4);
    Ideal::from_gens(f, &[a, b]).expect("nonzero")
}

/// A random instance; roughly half are built to satisfy the predicate.
pub fn random_instance(kind: PredicateKind, f: &Field, rng: &mut ChaCha8Rng) -> PredicateInstance {
    let positive = rng.gen_bool(0.5);
    match kind {
        PredicateKind::IdealMembership => {
            let i = rand_ideal(f, rng);
            let a = if positive {
                let (g1, g2) = i.two_element_rep();
                &(&rand_elem(f, rng, 3) * &g1) + &(&rand_elem(f, rng, 3) * &g2)
            } else {
                rand_elem(f, rng, 9)
            };
            PredicateInstance::IdealMembership { a, i }
        }
        PredicateKind::IdealDivides => {
            let j = rand_ideal(f, rng);
            let i = if positive { j.mul(&rand_ideal(f, rng)).unwrap() } else { rand_ideal(f, rng) };
            PredicateInstance::IdealDivides { j, i }
        }
        PredicateKind::IdealEqual => {
            let i = rand_ideal(f, rng);
            let j = if positive {
                let (g1, g2) = i.two_element_rep();
                // a different generating set for the same ideal
                Ideal::from_gens(f, &[&g1 + &(&rand_elem(f, rng, 2) * &g2), g2.clone(), g1]).unwrap()
            } else {
                rand_ideal(f, rng)
            };
            PredicateInstance::IdealEqual { i, j }
        }
        PredicateKind::Coprime => PredicateInstance::Coprime { i: rand_ideal(f, rng), j: rand_ideal(f, rng) },
        PredicateKind::PrincipalRatio => {
            let a = rand_nonzero(f, rng, 5);
            let b = rand_nonzero(f, rng, 5);
            let (i, j) = if positive {
                let c = rand_ideal(f, rng);
                let (n, d) = num_den(&a.div(&b).unwrap()).unwrap();
                (n.mul(&c).unwrap(), d.mul(&c).unwrap())
            } else {
                (rand_ideal(f, rng), rand_ideal(f, rng))
            };
            PredicateInstance::PrincipalRatio { a, b, i, j }
        }
        PredicateKind::IsNum => {
            let a = rand_nonzero(f, rng, 5);
            let b = rand_nonzero(f, rng, 5);
            let i = if positive { num_den(&a.div(&b).unwrap()).unwrap().0 } else { rand_ideal(f, rng) };
            PredicateInstance::IsNum { a, b, i }
        }
        PredicateKind::Congruence => {
            let i = rand_ideal(f, rng);
            let b = rand_elem(f, rng, 9);
            let a = if positive {
                let (g1, g2) = i.two_element_rep();
                &b + &(&(&rand_elem(f, rng, 3) * &g1) + &(&rand_elem(f, rng, 3) * &g2))
            } else {
                rand_elem(f, rng, 9)
            };
            PredicateInstance::Congruence { a, b, i }
        }
    }
}

/// For every x, 2x - 1 = -1 (mod 2) and 3x - 1 = -1 (mod 3), so neither factor
/// vanishes; checked over all residues modulo (2) and (3).
pub fn zero_unsatisfiable_certificate(f: &Field) -> Result<bool> {
    for (m, c) in [(2i64, 2i64), (3, 3)] {
        let modulus = Ideal::from_int(f, m)?;
        if modulus.is_unit() {
            return Ok(false);
        }
        let minus_one = modulus.reduce(&NFElement::from_int(f, -1))?;
        for r in crate::ideal::residues(&modulus) {
            let x = NFElement::from_ib(f, &r);
            let v = &(&NFElement::from_int(f, c) * &x) - &NFElement::one(f);
            if modulus.reduce(&v)? != minus_one {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::poly::{box_search, scalarize, SearchOutcome};
    use super::*;
    use crate::catalogue::builtin;
    use rand::SeedableRng;

    fn el(f: &Field, c: &[i64]) -> NFElement {
        NFElement::from_ib(f, &c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn nonzero_system() {
        let z = builtin("Q").unwrap();
        let s = emit_nonzero(&FieldExtension::trivial(&z));
        let mut w = Witness::new();
        w.set("a", el(&z, &[5])).set("x", el(&z, &[3])).set("y", el(&z, &[8]));
        assert!(s.verify(&w).unwrap());
        w.set("a", el(&z, &[1])).set("x", el(&z, &[0])).set("y", el(&z, &[1]));
        assert!(s.verify(&w).unwrap());
        w.set("a", el(&z, &[0])).set("x", el(&z, &[0])).set("y", el(&z, &[0]));
        assert!(!s.verify(&w).unwrap());
        let mut p = Witness::new();
        p.set("a", el(&z, &[0]));
        assert!(matches!(box_search(&s, &p, 50, 1_000_000).unwrap(), SearchOutcome::Exhausted { .. }));
        assert!(zero_unsatisfiable_certificate(&z).unwrap());
        let g = builtin("gauss").unwrap();
        assert!(zero_unsatisfiable_certificate(&g).unwrap());
        let sc = scalarize(&emit_nonzero(&FieldExtension::trivial(&g))).unwrap();
        assert_eq!(sc.variables.len(), 6);
    }

    #[test]
    fn membership_and_coprime_examples() {
        let g = builtin("gauss").unwrap();
        let i = Ideal::from_gens(&g, &[el(&g, &[2, 0]), el(&g, &[1, 1])]).unwrap();
        let inst = PredicateInstance::IdealMembership { a: el(&g, &[5, 0]), i };
        assert!(!inst.native().unwrap());
        assert!(inst.witness().unwrap().is_none());
        let z = builtin("Q").unwrap();
        let inst = PredicateInstance::Coprime { i: Ideal::from_int(&z, 2).unwrap(), j: Ideal::from_int(&z, 3).unwrap() };
        let w = inst.witness().unwrap().unwrap();
        let s = emit_predicate(PredicateKind::Coprime, &FieldExtension::trivial(&z));
        assert!(s.verify(&w).unwrap());
        let inst = PredicateInstance::Congruence { a: el(&z, &[7]), b: el(&z, &[-3]), i: Ideal::unit(&z) };
        let w = inst.witness().unwrap().unwrap();
        assert!(emit_predicate(PredicateKind::Congruence, &FieldExtension::trivial(&z)).verify(&w).unwrap());
    }

    #[test]
    fn witnesses_match_native_predicates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in ["gauss", "sqrt5"] {
            let f = builtin(name).unwrap();
            let ext = FieldExtension::trivial(&f);
            for kind in PredicateKind::ALL {
                let sys = emit_predicate(kind, &ext);
                for _ in 0..6 {
                    let inst = random_instance(kind, &f, &mut rng);
                    let native = inst.native().unwrap();
                    match inst.witness().unwrap() {
                        Some(w) => {
                            assert!(native, "{kind}");
                            assert!(sys.verify(&w).unwrap(), "{kind} witness fails");
                        }
                        None => assert!(!native, "{kind}: no witness for a true instance"),
                    }
                }
            }
        }
    }
}
