//! The set U = {1, ..., n} together with every alpha in O_L for which some s, k
//! in the elliptic-curve set S satisfy
//!   (alpha - 1)...(alpha - n) | num(s)  and  alpha = k (mod num(s)),
//! and O_K = U b_1 + ... + U b_d. Membership of s and k in S is supplied by an
//! oracle; every remaining condition is a polynomial system.

use super::poly::{scale, sum, union, union_witness, MPoly, PolySystem, Witness};
use super::predicates::{as_pair, gadget_coprime, gadget_is_num, gadget_nonzero, w_coprime, w_is_num, w_nonzero};
use crate::ec::{approximate, numerator_witness, EllipticCurveData};
use crate::error::{Error, Result};
use crate::forcing::{check_galois, compute_n, falling_product, ForcingParams};
use crate::ideal::{express_in_gens, num_den, FieldExtension, Ideal};
use crate::nf::NFElement;
use num_traits::{One, ToPrimitive};

pub const ORACLE_PARAMETERS: [&str; 4] = ["sa", "sb", "ka", "kb"];

#[derive(Clone, Debug)]
pub struct UDefinition {
    pub params: ForcingParams,
    pub system: PolySystem,
}

/// alpha = k (mod I) for k = ka/kb: kb != 0 and some c coprime to I has
/// c (kb alpha - ka) = kb (x i1 + y i2). This is I | num(alpha - k), and holds
/// trivially when alpha = k.
fn gadget_congruence(s: &mut PolySystem, p: &str, g: &MPoly, h: &MPoly, i: (&MPoly, &MPoly)) {
    let c = s.add_existential(&format!("{p}c"));
    let x = s.add_existential(&format!("{p}x"));
    let y = s.add_existential(&format!("{p}y"));
    s.push(c.mul(g).sub(&h.mul(&x.mul(i.0).add(&y.mul(i.1)))));
    let one = s.c(1);
    gadget_coprime(s, &format!("{p}cp."), (&c, &one), i);
    gadget_nonzero(s, &format!("{p}nz."), h);
}

pub fn emit_u(ext: &FieldExtension) -> Result<UDefinition> {
    check_galois(ext)?;
    let params = compute_n(ext.top().degree() as u32)?;
    let mut all = vec!["alpha"];
    all.extend(ORACLE_PARAMETERS);
    let mut s = PolySystem::new(ext, &all, &[]);
    let alpha = s.v("alpha");
    let mut prod = s.c(1);
    for j in 1..=params.n {
        prod = prod.mul(&alpha.sub(&s.c(j as i64)));
    }
    let i1 = s.add_existential("i1");
    let i2 = s.add_existential("i2");
    let (sa, sb, ka, kb) = (s.v("sa"), s.v("sb"), s.v("ka"), s.v("kb"));
    gadget_is_num(&mut s, "n.", &sa, &sb, (&i1, &i2));
    for (k, i) in [("1", &i1), ("2", &i2)] {
        let d = s.add_existential(&format!("d{k}"));
        s.push(i.sub(&prod.mul(&d)));
    }
    let g = kb.mul(&alpha).sub(&ka);
    gadget_congruence(&mut s, "k.", &g, &kb, (&i1, &i2));
    let mut branches = vec![s];
    for j in 1..=params.n {
        let mut f = PolySystem::new(ext, &["alpha"], &[]);
        let e = f.v("alpha").sub(&f.c(j as i64));
        f.push(e);
        branches.push(f);
    }
    Ok(UDefinition { params, system: union(&branches)? })
}

/// Supplies s, k in K for a given alpha; membership in S is the oracle's claim.
pub trait SOracle {
    fn name(&self) -> &'static str;
    /// Ok(None) when no candidate exists for this alpha.
    fn provide(&self, ext: &FieldExtension, alpha: &NFElement, params: ForcingParams) -> Result<Option<(NFElement, NFElement)>>;
}

/// Uses s = (alpha-1)...(alpha-n) and k = alpha for alpha in O_K. This checks
/// the polynomial part only: these s, k are not certified to lie in S.
pub struct NativeOracle;

impl SOracle for NativeOracle {
    fn name(&self) -> &'static str {
        "native"
    }
    fn provide(&self, ext: &FieldExtension, alpha: &NFElement, params: ForcingParams) -> Result<Option<(NFElement, NFElement)>> {
        let base = ext.base();
        match ext.pullback(alpha) {
            Some(a) if a.is_integral() => Ok(Some((falling_product(&a, params.n), a))),
            // outside K: offer rational candidates, which the system must refuse
            _ => {
                let beta = falling_product(alpha, params.n);
                let s = NFElement::from_rational(base, beta.norm());
                let k = NFElement::from_rational(base, alpha.trace() / num_bigint::BigInt::from(ext.top().degree()));
                Ok(Some((s, k)))
            }
        }
    }
}

/// s from the numerator lemma and k from weak approximation on the curve;
/// only rational-integer alpha are handled.
pub struct CurveOracle {
    pub data: EllipticCurveData,
    pub budget: u64,
}

impl SOracle for CurveOracle {
    fn name(&self) -> &'static str {
        "curve"
    }
    fn provide(&self, ext: &FieldExtension, alpha: &NFElement, params: ForcingParams) -> Result<Option<(NFElement, NFElement)>> {
        let Some(q) = ext.pullback(alpha).and_then(|a| a.as_rational()) else { return Ok(None) };
        if !q.is_integer() {
            return Ok(None);
        }
        let k = q.to_integer().to_i64().ok_or_else(|| Error::Resource("alpha too large".into()))?;
        let f = self.data.field();
        let beta = falling_product(&NFElement::from_int(f, k), params.n);
        let nw = numerator_witness(&self.data, &beta, self.budget)?;
        let modulus = num_den(&nw.s)?.0;
        let ap = approximate(&self.data, k, &modulus, self.budget)?;
        Ok(Some((nw.s, ap.s)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Accepted { branch: String, witness: Witness },
    NotAccepted(String),
    Inconclusive(String),
}

impl Decision {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Decision::Accepted { .. })
    }
    pub fn label(&self) -> &'static str {
        match self {
            Decision::Accepted { .. } => "accepted",
            Decision::NotAccepted(_) => "not_accepted",
            Decision::Inconclusive(_) => "inconclusive",
        }
    }
}

fn unit_branch_witness(u: &UDefinition, j: u32, alpha: &NFElement) -> Witness {
    let mut w = Witness::new();
    w.set("alpha", alpha.clone());
    let shared: Vec<String> = u.system.parameters.clone();
    let mut out = union_witness(&u.system, j as usize, &w, &shared);
    out.fill_zeros(&u.system);
    out
}

/// Witness for the main branch from oracle values; Ok(None) when a condition fails.
fn main_witness(ext: &FieldExtension, n: u32, alpha: &NFElement, s: &NFElement, k: &NFElement) -> Result<Option<Witness>> {
    let top = ext.top();
    if s.is_zero() {
        return Ok(None);
    }
    let (sa, sb) = as_pair(s);
    let (ka, kb) = as_pair(k);
    let e = |x: &NFElement| ext.embed(x);
    let (sa, sb, ka, kb) = (e(&sa)?, e(&sb)?, e(&ka)?, e(&kb)?);
    let mut w = Witness::new();
    w.set("alpha", alpha.clone()).set("sa", sa.clone()).set("sb", sb.clone()).set("ka", ka.clone()).set("kb", kb.clone());
    let i_k = num_den(s)?.0;
    let (g1, g2) = i_k.two_element_rep();
    let (i1, i2) = (e(&g1)?, e(&g2)?);
    w.set("i1", i1.clone()).set("i2", i2.clone());
    if !w_is_num(&mut w, "n.", &sa, &sb, (&i1, &i2))? {
        return Ok(None);
    }
    let prod = falling_product(alpha, n);
    if prod.is_zero() {
        return Ok(None);
    }
    for (name, i) in [("d1", &i1), ("d2", &i2)] {
        let q = i.div(&prod)?;
        if !q.is_integral() {
            return Ok(None);
        }
        w.set(name, q);
    }
    // congruence: c = 1 when alpha = k, else c in den(alpha - k) with c = 1 mod I
    let g = &(&kb * alpha) - &ka;
    let gamma = g.div(&kb)?;
    let ii = Ideal::from_gens(top, &[i1.clone(), i2.clone()])?;
    let c = if gamma.is_zero() {
        NFElement::one(top)
    } else {
        let den = num_den(&gamma)?.1;
        match den.split_sum(&ii, &NFElement::one(top))? {
            Some((c, _)) => c,
            None => return Ok(None),
        }
    };
    let target = &c * &gamma;
    let Some(xy) = express_in_gens(&[i1.clone(), i2.clone()], &target)? else { return Ok(None) };
    w.set("k.c", c.clone()).set("k.x", xy[0].clone()).set("k.y", xy[1].clone());
    let one = NFElement::one(top);
    if !w_coprime(&mut w, "k.cp.", (&c, &one), (&i1, &i2))? || !w_nonzero(&mut w, "k.nz.", &kb)? {
        return Ok(None);
    }
    Ok(Some(w))
}

/// Decide alpha in U through the system; never accepts without a verified witness.
pub fn accept_u(u: &UDefinition, alpha: &NFElement, oracle: &dyn SOracle) -> Result<Decision> {
    let ext = &u.system.ext;
    let top = ext.top();
    if !alpha.field().same(top) {
        return Err(Error::ParentMismatch(top.name().into(), alpha.field().name().into()));
    }
    if !alpha.is_integral() {
        return Ok(Decision::NotAccepted("alpha is not an algebraic integer".into()));
    }
    if let Some(q) = alpha.as_rational() {
        if q.is_integer() && q >= num_rational::BigRational::one() && q <= num_rational::BigRational::from_integer(u.params.n.into()) {
            let j = q.to_integer().to_u32().unwrap();
            let w = unit_branch_witness(u, j, alpha);
            if !u.system.verify(&w)? {
                return Err(Error::System("finite-branch witness rejected".into()));
            }
            return Ok(Decision::Accepted { branch: format!("alpha = {j}"), witness: w });
        }
    }
    let (s, k) = match oracle.provide(ext, alpha, u.params) {
        Ok(Some(v)) => v,
        Ok(None) => return Ok(Decision::NotAccepted(format!("{} oracle has no candidate", oracle.name()))),
        Err(e) => return Ok(Decision::Inconclusive(format!("{} oracle: {e}", oracle.name()))),
    };
    let Some(w) = main_witness(ext, u.params.n, alpha, &s, &k)? else {
        return Ok(Decision::NotAccepted("oracle values fail the divisibility or congruence conditions".into()));
    };
    let w = union_witness(&u.system, 0, &w, &u.system.parameters);
    if !u.system.verify(&w)? {
        return Err(Error::System("main-branch witness rejected".into()));
    }
    Ok(Decision::Accepted { branch: "main".into(), witness: w })
}

#[derive(Clone, Debug)]
pub struct OKDefinition {
    pub u: UDefinition,
    pub basis: Vec<NFElement>,
    pub system: PolySystem,
}

pub fn emit_ok(ext: &FieldExtension) -> Result<OKDefinition> {
    let u = emit_u(ext)?;
    let base = ext.base();
    let basis: Vec<NFElement> = (0..base.degree())
        .map(|i| {
            let v: Vec<num_bigint::BigInt> = (0..base.degree()).map(|j| num_bigint::BigInt::from((i == j) as i32)).collect();
            NFElement::from_ib(base, &v)
        })
        .collect();
    let parts = basis.iter().map(|b| scale(&u.system, b)).collect::<Result<Vec<_>>>()?;
    let system = sum(&parts)?;
    Ok(OKDefinition { u, basis, system })
}

/// alpha in O_L is accepted when its integral-basis coordinates over K are
/// all accepted by U.
pub fn accept_ok(def: &OKDefinition, alpha: &NFElement, oracle: &dyn SOracle) -> Result<Decision> {
    let ext = &def.system.ext;
    let Some(a) = ext.pullback(alpha).filter(|a| a.is_integral()) else {
        return Ok(Decision::NotAccepted("alpha has no coordinates in O_K".into()));
    };
    let coords = a.ib_int().unwrap();
    let mut w = Witness::new();
    w.set("alpha", alpha.clone());
    let mut branches = Vec::new();
    for (i, (c, b)) in coords.iter().zip(&def.basis).enumerate() {
        let u = NFElement::from_int(ext.top(), c.clone());
        match accept_u(&def.u, &u, oracle)? {
            Decision::Accepted { branch, witness } => {
                w.set(format!("s{i}.alpha"), ext.embed(&b.scale(&num_rational::BigRational::from_integer(c.clone())))?);
                w.extend(witness.prefixed(&format!("s{i}.m.")));
                branches.push(branch);
            }
            other => return Ok(other),
        }
    }
    if !def.system.verify(&w)? {
        return Err(Error::System("sum witness rejected".into()));
    }
    Ok(Decision::Accepted { branch: branches.join(", "), witness: w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::{builtin, Catalogue};
    use crate::ec::DEFAULT_DIGIT_BUDGET;

    #[test]
    fn u_over_gaussian_integers() {
        let g = builtin("gauss").unwrap();
        let ext = FieldExtension::over_q(&g).unwrap();
        let u = emit_u(&ext).unwrap();
        assert_eq!(u.params.n, 47);
        for j in [1, 20, 47] {
            assert!(accept_u(&u, &NFElement::from_int(&g, j), &NativeOracle).unwrap().is_accepted());
        }
        let d = accept_u(&u, &NFElement::from_int(&g, 50), &NativeOracle).unwrap();
        assert!(d.is_accepted(), "{d:?}");
        let theta = NFElement::theta(&g);
        assert!(!accept_u(&u, &theta, &NativeOracle).unwrap().is_accepted());
        assert!(!accept_u(&u, &(&theta + &NFElement::from_int(&g, 3)), &NativeOracle).unwrap().is_accepted());
        let cat = Catalogue::with_builtins();
        let data = EllipticCurveData::from_entry(&cat, cat.curve("mordell_m2").unwrap()).unwrap();
        let curve = CurveOracle { data, budget: DEFAULT_DIGIT_BUDGET };
        let d = accept_u(&u, &NFElement::from_int(&g, 50), &curve).unwrap();
        assert!(matches!(d, Decision::Inconclusive(_)), "{d:?}");
    }

    #[test]
    fn ok_inside_zeta8() {
        let k = builtin("sqrt2").unwrap();
        let l = builtin("zeta8").unwrap();
        let t = NFElement::theta(&l);
        let ext = FieldExtension::new(&k, &l, &t - &t.pow(3)).unwrap();
        let def = emit_ok(&ext).unwrap();
        assert_eq!(def.u.params.n, 93);
        let one_plus = ext.embed(&(&NFElement::one(&k) + &NFElement::theta(&k))).unwrap();
        assert!(accept_ok(&def, &one_plus, &NativeOracle).unwrap().is_accepted());
        assert!(!accept_ok(&def, &t.pow(2), &NativeOracle).unwrap().is_accepted());
    }
}
