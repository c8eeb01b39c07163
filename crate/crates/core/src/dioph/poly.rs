//! Multivariate polynomials with number-field coefficients and polynomial
//! systems {a : exists x, g_1(a, x) = ... = g_m(a, x) = 0} over O_L.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::int::parse_rat;
use crate::catalogue::Catalogue;
use crate::error::{Error, Result};
use crate::ideal::FieldExtension;
use crate::nf::{Field, NFElement};

/// Exponent vector with trailing zeros removed, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let n = self.0.len().max(o.0.len());
        Monomial::new((0..n).map(|i| self.0.get(i).unwrap_or(&0) + o.0.get(i).unwrap_or(&0)).collect())
    }

    pub fn remap(&self, map: &[usize]) -> Monomial {
        let n = self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| map[i] + 1).max().unwrap_or(0);
        let mut e = vec![0; n];
        for (i, &x) in self.0.iter().enumerate() {
            if x > 0 {
                e[map[i]] += x;
            }
        }
        Monomial::new(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial with coefficients in one field (usually K).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    field: Field,
    terms: BTreeMap<Monomial, NFElement>,
}

impl MPoly {
    pub fn zero(field: &Field) -> Self {
        MPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(c: NFElement) -> Self {
        let mut p = MPoly::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn int(field: &Field, n: i64) -> Self {
        Self::constant(NFElement::from_int(field, n))
    }

    pub fn var(field: &Field, i: usize) -> Self {
        let mut p = MPoly::zero(field);
        p.terms.insert(Monomial::var(i), NFElement::one(field));
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, NFElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: NFElement) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly { field: self.field.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(&self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &NFElement) -> MPoly {
        let mut r = MPoly::zero(&self.field);
        for (m, x) in &self.terms {
            r.add_term(m.clone(), x * c);
        }
        r
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut r = MPoly::int(&self.field, 1);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn remap(&self, map: &[usize]) -> MPoly {
        let mut r = MPoly::zero(&self.field);
        for (m, c) in &self.terms {
            r.add_term(m.remap(map), c.clone());
        }
        r
    }

    /// Variables with a nonzero exponent somewhere.
    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)).collect()
    }

    /// Exact evaluation; values live in the top field of `ext`.
    pub fn eval(&self, ext: &FieldExtension, vals: &[NFElement]) -> Result<NFElement> {
        let top = ext.top();
        let mut acc = NFElement::zero(top);
        let mut cache: BTreeMap<(usize, u32), NFElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = ext.embed(c)?;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = vals.get(i).ok_or_else(|| Error::System(format!("no value for variable {i}")))?;
                let pw = cache.entry((i, e)).or_insert_with(|| v.pow(e));
                t = &t * pw;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Partial substitution: variables with a value are replaced; coefficients
    /// move to the top field.
    pub fn substitute(&self, ext: &FieldExtension, vals: &[Option<NFElement>]) -> Result<MPoly> {
        let top = ext.top();
        let mut r = MPoly::zero(top);
        for (m, c) in &self.terms {
            let mut t = ext.embed(c)?;
            let mut keep = m.0.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if let Some(Some(v)) = vals.get(i) {
                    if e > 0 {
                        t = &t * &v.pow(e);
                        keep[i] = 0;
                    }
                }
            }
            r.add_term(Monomial::new(keep), t);
        }
        Ok(r)
    }
}

#[derive(Clone, Debug)]
pub struct PolySystem {
    pub ext: FieldExtension,
    pub parameters: Vec<String>,
    pub existentials: Vec<String>,
    pub equations: Vec<MPoly>,
}

/// Values for every variable, as elements of the top field.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub assignment: BTreeMap<String, NFElement>,
}

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    pub fn set(&mut self, name: impl Into<String>, v: NFElement) -> &mut Self {
        self.assignment.insert(name.into(), v);
        self
    }

    pub fn get(&self, name: &str) -> Option<&NFElement> {
        self.assignment.get(name)
    }

    /// Copy with every name prefixed.
    pub fn prefixed(&self, prefix: &str) -> Witness {
        Witness { assignment: self.assignment.iter().map(|(k, v)| (format!("{prefix}{k}"), v.clone())).collect() }
    }

    pub fn extend(&mut self, o: Witness) {
        self.assignment.extend(o.assignment);
    }

    /// Zero for every variable of `sys` not yet assigned.
    pub fn fill_zeros(&mut self, sys: &PolySystem) {
        let top = sys.ext.top();
        for v in sys.variables() {
            self.assignment.entry(v.clone()).or_insert_with(|| NFElement::zero(top));
        }
    }

    pub fn max_coordinate(&self) -> BigInt {
        self.assignment
            .values()
            .flat_map(|v| v.ib_coords())
            .map(|c| c.numer().clone() * num_traits::sign::Signed::signum(c.numer()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson { assignment: self.assignment.iter().map(|(k, v)| (k.clone(), v.ib_strings())).collect() }
    }

    pub fn from_json(j: &WitnessJson, field: &Field) -> Result<Witness> {
        let mut w = Witness::new();
        for (k, coords) in &j.assignment {
            let q = coords.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
            if q.len() != field.degree() {
                return Err(Error::Parse(format!("`{k}` needs {} coordinates", field.degree())));
            }
            w.set(k.clone(), NFElement::from_ib_rat(field, &q));
        }
        Ok(w)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessJson {
    pub assignment: BTreeMap<String, Vec<String>>,
}

impl PolySystem {
    pub fn new(ext: &FieldExtension, parameters: &[&str], existentials: &[&str]) -> Self {
        PolySystem {
            ext: ext.clone(),
            parameters: parameters.iter().map(|s| s.to_string()).collect(),
            existentials: existentials.iter().map(|s| s.to_string()).collect(),
            equations: Vec::new(),
        }
    }

    pub fn base(&self) -> &Field {
        self.ext.base()
    }

    pub fn variables(&self) -> Vec<&String> {
        self.parameters.iter().chain(&self.existentials).collect()
    }

    pub fn nvars(&self) -> usize {
        self.parameters.len() + self.existentials.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.variables().iter().position(|v| *v == name)
    }

    /// The variable as a polynomial.
    pub fn v(&self, name: &str) -> MPoly {
        let i = self.index(name).unwrap_or_else(|| panic!("undeclared variable {name}"));
        MPoly::var(self.base(), i)
    }

    pub fn c(&self, n: i64) -> MPoly {
        MPoly::int(self.base(), n)
    }

    pub fn add_existential(&mut self, name: &str) -> MPoly {
        if self.index(name).is_some() {
            panic!("duplicate variable {name}");
        }
        self.existentials.push(name.to_string());
        self.v(name)
    }

    pub fn push(&mut self, eq: MPoly) {
        if !eq.is_zero() {
            self.equations.push(eq);
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.nvars();
        let mut seen = BTreeSet::new();
        for v in self.variables() {
            if !seen.insert(v) {
                return Err(Error::System(format!("variable `{v}` declared twice")));
            }
        }
        for e in &self.equations {
            if e.variables().iter().any(|&i| i >= n) {
                return Err(Error::System("equation uses an undeclared variable".into()));
            }
        }
        Ok(())
    }

    fn values(&self, w: &Witness) -> Result<Vec<NFElement>> {
        let top = self.ext.top();
        self.variables()
            .into_iter()
            .map(|v| {
                let x = w.get(v).ok_or_else(|| Error::MissingAssignment(v.clone()))?;
                if !x.field().same(top) {
                    return Err(Error::ParentMismatch(top.name().into(), x.field().name().into()));
                }
                if !x.is_integral() {
                    return Err(Error::NotIntegral(format!("value of `{v}`")));
                }
                Ok(x.clone())
            })
            .collect()
    }

    /// Every equation vanishes exactly at the witness.
    pub fn verify(&self, w: &Witness) -> Result<bool> {
        let vals = self.values(w)?;
        for e in &self.equations {
            if !e.eval(&self.ext, &vals)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Quantify the named parameters existentially.
    pub fn existentialize(&self, names: &[&str]) -> Result<PolySystem> {
        for n in names {
            if !self.parameters.iter().any(|p| p == n) {
                return Err(Error::System(format!("`{n}` is not a parameter")));
            }
        }
        let params: Vec<String> = self.parameters.iter().filter(|p| !names.contains(&p.as_str())).cloned().collect();
        let mut exist: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        exist.extend(self.existentials.iter().cloned());
        let order: Vec<String> = params.iter().chain(&exist).cloned().collect();
        let map: Vec<usize> = self.variables().iter().map(|v| order.iter().position(|o| o == *v).unwrap()).collect();
        Ok(PolySystem {
            ext: self.ext.clone(),
            parameters: params,
            existentials: exist,
            equations: self.equations.iter().map(|e| e.remap(&map)).collect(),
        })
    }

    fn same_ring(&self, o: &PolySystem) -> Result<()> {
        if !self.ext.base().same(o.ext.base()) || !self.ext.top().same(o.ext.top()) {
            return Err(Error::System("systems live over different rings".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> SystemJson {
        SystemJson {
            ring: RingJson {
                base: self.ext.base().name().into(),
                top: self.ext.top().name().into(),
                embedding: self.ext.embedding().ib_strings(),
            },
            parameters: self.parameters.clone(),
            existentials: self.existentials.clone(),
            equations: self
                .equations
                .iter()
                .map(|e| {
                    e.terms
                        .iter()
                        .rev()
                        .map(|(m, c)| TermJson { monomial: m.0.clone(), coeff: c.ib_strings() })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SystemJson, cat: &Catalogue) -> Result<PolySystem> {
        let base = cat.field(&j.ring.base)?;
        let top = cat.field(&j.ring.top)?;
        let emb = j.ring.embedding.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
        if emb.len() != top.degree() {
            return Err(Error::Parse("embedding has the wrong number of coordinates".into()));
        }
        let ext = if base.same(&top) {
            FieldExtension::trivial(&top)
        } else {
            FieldExtension::new(&base, &top, NFElement::from_ib_rat(&top, &emb))?
        };
        let mut sys = PolySystem {
            ext,
            parameters: j.parameters.clone(),
            existentials: j.existentials.clone(),
            equations: Vec::new(),
        };
        for eq in &j.equations {
            let mut p = MPoly::zero(&base);
            for t in eq {
                let q = t.coeff.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
                if q.len() != base.degree() {
                    return Err(Error::Parse("coefficient has the wrong number of coordinates".into()));
                }
                p.add_term(Monomial::new(t.monomial.clone()), NFElement::from_ib_rat(&base, &q));
            }
            sys.equations.push(p);
        }
        sys.check()?;
        Ok(sys)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RingJson {
    pub base: String,
    pub top: String,
    pub embedding: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub monomial: Vec<u32>,
    pub coeff: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SystemJson {
    pub ring: RingJson,
    pub parameters: Vec<String>,
    pub existentials: Vec<String>,
    pub equations: Vec<Vec<TermJson>>,
}

/// Rename system `i`'s variables into a combined system. Shared parameters
/// keep their names; everything else gets `prefix`.
struct Merger {
    params: Vec<String>,
    exist: Vec<String>,
}

impl Merger {
    fn new() -> Self {
        Merger { params: Vec::new(), exist: Vec::new() }
    }

    fn all(&self) -> Vec<String> {
        self.params.iter().chain(&self.exist).cloned().collect()
    }

    /// Returns old index -> new name.
    fn absorb(&mut self, s: &PolySystem, prefix: &str, share_params: bool) -> Vec<String> {
        let mut names = Vec::new();
        for p in &s.parameters {
            let n = if share_params { p.clone() } else { format!("{prefix}{p}") };
            if !self.params.contains(&n) {
                self.params.push(n.clone());
            }
            names.push(n);
        }
        for e in &s.existentials {
            let n = format!("{prefix}{e}");
            self.exist.push(n.clone());
            names.push(n);
        }
        names
    }

    fn finish(self, ext: &FieldExtension, parts: Vec<(Vec<String>, Vec<MPoly>)>) -> (PolySystem, Vec<Vec<MPoly>>) {
        let all = self.all();
        let idx = |n: &String| all.iter().position(|x| x == n).unwrap();
        let remapped = parts
            .into_iter()
            .map(|(names, eqs)| {
                let map: Vec<usize> = names.iter().map(idx).collect();
                eqs.iter().map(|e| e.remap(&map)).collect()
            })
            .collect();
        let sys = PolySystem { ext: ext.clone(), parameters: self.params, existentials: self.exist, equations: Vec::new() };
        (sys, remapped)
    }
}

/// All systems hold simultaneously. Parameters with equal names are shared,
/// existentials of system i are prefixed `c{i}.`.
pub fn conjunction(systems: &[PolySystem]) -> Result<PolySystem> {
    let first = systems.first().ok_or_else(|| Error::System("empty conjunction".into()))?;
    let mut m = Merger::new();
    let mut parts = Vec::new();
    for (i, s) in systems.iter().enumerate() {
        first.same_ring(s)?;
        parts.push((m.absorb(s, &format!("c{i}."), true), s.equations.clone()));
    }
    let (mut sys, eqs) = m.finish(&first.ext, parts);
    sys.equations = eqs.into_iter().flatten().filter(|e| !e.is_zero()).collect();
    Ok(sys)
}

/// Some system holds. Existentials of system i are prefixed `u{i}.`; the
/// equations are all products g_1 g_2 ... with one equation from each system,
/// which vanish together exactly when one system's equations all vanish.
pub fn union(systems: &[PolySystem]) -> Result<PolySystem> {
    let first = systems.first().ok_or_else(|| Error::System("empty union".into()))?;
    let mut m = Merger::new();
    let mut parts = Vec::new();
    for (i, s) in systems.iter().enumerate() {
        first.same_ring(s)?;
        parts.push((m.absorb(s, &format!("u{i}."), true), s.equations.clone()));
    }
    let (mut sys, eqs) = m.finish(&first.ext, parts);
    let mut acc = vec![MPoly::int(first.base(), 1)];
    for branch in eqs {
        let mut next = Vec::with_capacity(acc.len() * branch.len());
        for a in &acc {
            for b in &branch {
                next.push(a.mul(b));
            }
        }
        acc = next;
    }
    sys.equations = acc.into_iter().filter(|e| !e.is_zero()).collect();
    Ok(sys)
}

/// Witness for a union from a witness of branch `i`; other branches get zeros.
pub fn union_witness(u: &PolySystem, branch: usize, w: &Witness, shared: &[String]) -> Witness {
    let mut out = Witness::new();
    for (k, v) in &w.assignment {
        if shared.contains(k) {
            out.set(k.clone(), v.clone());
        } else {
            out.set(format!("u{branch}.{k}"), v.clone());
        }
    }
    out.fill_zeros(u);
    out
}

/// {a_1 + a_2 + ...}: the first parameter of each system is summed into a new
/// parameter named like the first system's; every other variable of system i
/// is prefixed `s{i}.` (non-primary parameters stay parameters).
pub fn sum(systems: &[PolySystem]) -> Result<PolySystem> {
    let first = systems.first().ok_or_else(|| Error::System("empty sum".into()))?;
    let primary = first.parameters.first().ok_or_else(|| Error::System("sum needs a parameter".into()))?.clone();
    let mut m = Merger::new();
    m.params.push(primary.clone());
    let mut parts = Vec::new();
    let mut summands = Vec::new();
    for (i, s) in systems.iter().enumerate() {
        first.same_ring(s)?;
        if s.parameters.is_empty() {
            return Err(Error::System("arity mismatch: summand without a parameter".into()));
        }
        let prefix = format!("s{i}.");
        let mut names = Vec::new();
        for (j, p) in s.parameters.iter().enumerate() {
            let n = format!("{prefix}{p}");
            if j == 0 {
                m.exist.push(n.clone());
                summands.push(n.clone());
            } else {
                m.params.push(n.clone());
            }
            names.push(n);
        }
        for e in &s.existentials {
            let n = format!("{prefix}{e}");
            m.exist.push(n.clone());
            names.push(n);
        }
        parts.push((names, s.equations.clone()));
    }
    let (mut sys, eqs) = m.finish(&first.ext, parts);
    sys.equations = eqs.into_iter().flatten().collect();
    let mut e = sys.v(&primary);
    for s in &summands {
        e = e.sub(&sys.v(s));
    }
    sys.push(e);
    Ok(sys)
}

/// {b u : u in S} for a constant b of K. The old variables are prefixed `m.`.
pub fn scale(s: &PolySystem, b: &NFElement) -> Result<PolySystem> {
    let primary = s.parameters.first().ok_or_else(|| Error::System("scale needs a parameter".into()))?.clone();
    if !b.field().same(s.base()) {
        return Err(Error::ParentMismatch(s.base().name().into(), b.field().name().into()));
    }
    let mut m = Merger::new();
    m.params.push(primary.clone());
    let mut names = Vec::new();
    for (j, p) in s.parameters.iter().enumerate() {
        let n = format!("m.{p}");
        if j == 0 {
            m.exist.push(n.clone());
        } else {
            m.params.push(n.clone());
        }
        names.push(n);
    }
    for e in &s.existentials {
        let n = format!("m.{e}");
        m.exist.push(n.clone());
        names.push(n);
    }
    let (mut sys, eqs) = m.finish(&s.ext, vec![(names, s.equations.clone())]);
    sys.equations = eqs.into_iter().flatten().collect();
    let e = sys.v(&primary).sub(&sys.v(&format!("m.{primary}")).scale(b));
    sys.push(e);
    Ok(sys)
}

/// Replace parameters by constants from the top field; the result lives over
/// L itself.
pub fn bind(s: &PolySystem, values: &BTreeMap<String, NFElement>) -> Result<PolySystem> {
    for k in values.keys() {
        if !s.parameters.contains(k) {
            return Err(Error::System(format!("arity mismatch: `{k}` is not a parameter")));
        }
    }
    let vals: Vec<Option<NFElement>> = s.variables().iter().map(|v| values.get(*v).cloned()).collect();
    let keep: Vec<String> = s.variables().into_iter().filter(|v| !values.contains_key(*v)).cloned().collect();
    let all: Vec<&String> = s.variables();
    let top = s.ext.top();
    let mut map = vec![0usize; all.len()];
    for (i, v) in all.iter().enumerate() {
        map[i] = keep.iter().position(|k| k == *v).unwrap_or(0);
    }
    let ext = FieldExtension::trivial(top);
    let mut out = PolySystem {
        ext,
        parameters: s.parameters.iter().filter(|p| !values.contains_key(*p)).cloned().collect(),
        existentials: s.existentials.clone(),
        equations: Vec::new(),
    };
    for e in &s.equations {
        let sub = e.substitute(&s.ext, &vals)?;
        let r = sub.remap(&map);
        if r.is_zero() {
            continue;
        }
        out.equations.push(r);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(Witness),
    Exhausted { checked: u64 },
    /// The box holds more candidates than the limit allows.
    LimitReached { needed: f64 },
}

/// Enumerate the existentials that occur in some equation over integral-basis
/// coordinate boxes of the given radius; the others are set to 0.
pub fn box_search(s: &PolySystem, params: &Witness, radius: i64, limit: u64) -> Result<SearchOutcome> {
    let top = s.ext.top();
    let d = top.degree();
    let vals: Vec<Option<NFElement>> = s.variables().iter().map(|v| params.get(v).cloned()).collect();
    for p in &s.parameters {
        if params.get(p).is_none() {
            return Err(Error::MissingAssignment(p.clone()));
        }
    }
    let eqs = s.equations.iter().map(|e| e.substitute(&s.ext, &vals)).collect::<Result<Vec<_>>>()?;
    let used: BTreeSet<usize> = eqs.iter().flat_map(|e| e.variables()).collect();
    let free: Vec<usize> = used.into_iter().collect();
    let side = (2 * radius + 1) as u64;
    let needed = (side as f64).powi((d * free.len()) as i32);
    let ext = FieldExtension::trivial(top);
    let mut cur: Vec<NFElement> = vec![NFElement::zero(top); s.nvars()];
    for (i, v) in vals.iter().enumerate() {
        if let Some(x) = v {
            cur[i] = x.clone();
        }
    }
    let total = needed.min(u64::MAX as f64) as u64;
    if needed > limit as f64 {
        return Ok(SearchOutcome::LimitReached { needed });
    }
    let mut checked = 0;
    for idx in 0..total {
        let mut t = idx;
        for &fv in &free {
            let coords: Vec<BigInt> = (0..d)
                .map(|_| {
                    let k = (t % side) as i64 - radius;
                    t /= side;
                    BigInt::from(k)
                })
                .collect();
            cur[fv] = NFElement::from_ib(top, &coords);
        }
        checked += 1;
        let mut ok = true;
        for e in &eqs {
            if !e.eval(&ext, &cur)?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            let mut w = params.clone();
            for (i, v) in s.variables().iter().enumerate() {
                w.set((*v).clone(), cur[i].clone());
            }
            return Ok(SearchOutcome::Found(w));
        }
    }
    Ok(SearchOutcome::Exhausted { checked })
}

/// Integer-valued form: each O_L variable v becomes v.0, ..., v.(d-1) with
/// v = sum v.c b_c, and each equation splits into its d coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarizedSystem {
    pub ring: String,
    pub source_variables: Vec<String>,
    pub parameters: Vec<String>,
    pub variables: Vec<String>,
    pub equations: Vec<BTreeMap<Monomial, BigInt>>,
}

type IbPoly = BTreeMap<Monomial, Vec<BigInt>>;

fn ib_add_term(p: &mut IbPoly, m: Monomial, c: Vec<BigInt>) {
    if c.iter().all(|x| x.is_zero()) {
        return;
    }
    let e = p.entry(m.clone()).or_insert_with(|| vec![BigInt::zero(); c.len()]);
    for (x, y) in e.iter_mut().zip(&c) {
        *x += y;
    }
    if e.iter().all(|x| x.is_zero()) {
        p.remove(&m);
    }
}

fn ib_mul(top: &Field, a: &IbPoly, b: &IbPoly) -> IbPoly {
    let mut r = IbPoly::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            ib_add_term(&mut r, m1.mul(m2), top.mul_ib(c1, c2));
        }
    }
    r
}

pub fn scalarize(s: &PolySystem) -> Result<ScalarizedSystem> {
    let top = s.ext.top();
    let d = top.degree();
    let mut variables = Vec::new();
    let mut parameters = Vec::new();
    for (i, v) in s.variables().iter().enumerate() {
        for c in 0..d {
            let n = format!("{v}.{c}");
            if i < s.parameters.len() {
                parameters.push(n.clone());
            }
            variables.push(n);
        }
    }
    let unit = |c: usize| -> Vec<BigInt> { (0..d).map(|j| BigInt::from((j == c) as i32)).collect() };
    let var_poly: Vec<IbPoly> = (0..s.nvars())
        .map(|i| {
            let mut p = IbPoly::new();
            for c in 0..d {
                ib_add_term(&mut p, Monomial::var(i * d + c), unit(c));
            }
            p
        })
        .collect();
    let mut pow_cache: BTreeMap<(usize, u32), IbPoly> = BTreeMap::new();
    let mut equations = Vec::new();
    for e in &s.equations {
        let mut acc = IbPoly::new();
        for (m, c) in e.terms() {
            let cv = s
                .ext
                .embed(c)?
                .ib_int()
                .ok_or_else(|| Error::System("coefficients must be algebraic integers to scalarize".into()))?;
            let mut t = IbPoly::new();
            t.insert(Monomial::one(), cv);
            for (i, &x) in m.exps().iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let pw = pow_cache
                    .entry((i, x))
                    .or_insert_with(|| {
                        let mut r = IbPoly::new();
                        r.insert(Monomial::one(), top.one_ib().to_vec());
                        for _ in 0..x {
                            r = ib_mul(top, &r, &var_poly[i]);
                        }
                        r
                    })
                    .clone();
                t = ib_mul(top, &t, &pw);
            }
            for (mm, cc) in t {
                ib_add_term(&mut acc, mm, cc);
            }
        }
        for c in 0..d {
            let comp: BTreeMap<Monomial, BigInt> =
                acc.iter().filter(|(_, v)| !v[c].is_zero()).map(|(m, v)| (m.clone(), v[c].clone())).collect();
            if !comp.is_empty() {
                equations.push(comp);
            }
        }
    }
    Ok(ScalarizedSystem {
        ring: top.name().into(),
        source_variables: s.variables().into_iter().cloned().collect(),
        parameters,
        variables,
        equations,
    })
}

impl ScalarizedSystem {
    pub fn map_witness(&self, w: &Witness) -> Result<Vec<BigInt>> {
        let mut out = Vec::new();
        for v in &self.source_variables {
            let x = w.get(v).ok_or_else(|| Error::MissingAssignment(v.clone()))?;
            out.extend(x.ib_int().ok_or_else(|| Error::NotIntegral(v.clone()))?);
        }
        Ok(out)
    }

    pub fn unmap_witness(&self, field: &Field, xs: &[BigInt]) -> Result<Witness> {
        let d = field.degree();
        if xs.len() != self.source_variables.len() * d {
            return Err(Error::System("integer assignment has the wrong length".into()));
        }
        let mut w = Witness::new();
        for (i, v) in self.source_variables.iter().enumerate() {
            w.set(v.clone(), NFElement::from_ib(field, &xs[i * d..(i + 1) * d]));
        }
        Ok(w)
    }

    pub fn verify(&self, xs: &[BigInt]) -> bool {
        self.equations.iter().all(|e| {
            let mut s = BigInt::zero();
            for (m, c) in e {
                let mut t = c.clone();
                for (i, &x) in m.exps().iter().enumerate() {
                    if x > 0 {
                        t *= xs[i].pow(x);
                    }
                }
                s += t;
            }
            s.is_zero()
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let eqs: Vec<Vec<serde_json::Value>> = self
            .equations
            .iter()
            .map(|e| {
                e.iter()
                    .rev()
                    .map(|(m, c)| serde_json::json!({ "monomial": m.exps(), "coeff": c.to_string() }))
                    .collect()
            })
            .collect();
        serde_json::json!({
            "ring": self.ring,
            "parameters": self.parameters,
            "variables": self.variables,
            "equations": eqs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::builtin;

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 3]);
        let one = Monomial::one();
        assert!(a > b && c > a && one < b);
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::var(0));
    }

    #[test]
    fn combinators_have_set_semantics() {
        let z = builtin("Q").unwrap();
        let ext = FieldExtension::trivial(&z);
        let single = |k: i64| {
            let mut s = PolySystem::new(&ext, &["a"], &[]);
            let e = s.v("a").sub(&s.c(k));
            s.push(e);
            s
        };
        let u = union(&[single(1), single(2)]).unwrap();
        let s = sum(&[single(1), single(2)]).unwrap();
        let mut t = PolySystem::new(&ext, &["a"], &[]);
        t.push(MPoly::zero(&z));
        let c = conjunction(&[single(1), t]).unwrap();
        for a in -6..=6i64 {
            let mut w = Witness::new();
            w.set("a", NFElement::from_int(&z, a));
            let mut wu = w.clone();
            wu.fill_zeros(&u);
            assert_eq!(u.verify(&wu).unwrap(), a == 1 || a == 2);
            let mut ws = w.clone();
            ws.set("s0.a", NFElement::from_int(&z, 1)).set("s1.a", NFElement::from_int(&z, 2));
            assert_eq!(s.verify(&ws).unwrap(), a == 3);
            assert_eq!(c.verify(&w).unwrap(), a == 1);
        }
    }

    #[test]
    fn missing_and_nonintegral_assignments() {
        let z = builtin("Q").unwrap();
        let ext = FieldExtension::trivial(&z);
        let mut s = PolySystem::new(&ext, &["a"], &["x"]);
        let e = s.v("a").sub(&s.v("x"));
        s.push(e);
        let mut w = Witness::new();
        w.set("a", NFElement::from_int(&z, 1));
        assert!(matches!(s.verify(&w), Err(Error::MissingAssignment(_))));
        w.set("x", NFElement::from_rational(&z, crate::arith::int::rat(1, 2)));
        assert!(matches!(s.verify(&w), Err(Error::NotIntegral(_))));
    }
}
