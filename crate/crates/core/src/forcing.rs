//! The congruence lemma: a bound n, the hypothesis check
//! (alpha - 1)...(alpha - n) | I and alpha = k (mod I), and a falsification
//! harness that looks for alpha outside O_K satisfying both.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{factor, residues, FieldExtension, Ideal, PrimeIdeal};
use crate::nf::{automorphisms, NFElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcingParams {
    pub ell: u32,
    pub n: u32,
}

fn ten_pow_exceeds(exp: i64, rhs: &BigInt) -> bool {
    exp >= 0 && BigInt::from(10u32).pow(exp as u32) > *rhs
}

impl ForcingParams {
    /// n > 23 ell, 10^(n - 2 ell) > (4n)^ell and 10^(n - 20 ell) > (4n)^ell.
    pub fn is_valid(&self) -> bool {
        let (l, n) = (self.ell as i64, self.n as i64);
        let rhs = BigInt::from(4 * n).pow(self.ell);
        self.ell >= 1 && n > 23 * l && ten_pow_exceeds(n - 2 * l, &rhs) && ten_pow_exceeds(n - 20 * l, &rhs)
    }
}

/// Least n satisfying all three inequalities.
pub fn compute_n(ell: u32) -> Result<ForcingParams> {
    if ell == 0 {
        return Err(Error::InvalidInstance("ell must be positive".into()));
    }
    let mut n = 23 * ell + 1;
    loop {
        let p = ForcingParams { ell, n };
        if p.is_valid() {
            return Ok(p);
        }
        n += 1;
    }
}

#[derive(Clone, Debug)]
pub struct ForcingInstance {
    pub ext: FieldExtension,
    pub alpha: NFElement,
    pub modulus: Ideal,
    pub k: NFElement,
    pub params: ForcingParams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "hypotheses_fail")]
    HypothesesFail,
    #[serde(rename = "alpha_in_base")]
    AlphaInBase,
    #[serde(rename = "COUNTEREXAMPLE")]
    Counterexample,
}

/// L must be Galois over Q.
pub fn check_galois(ext: &FieldExtension) -> Result<()> {
    let d = ext.top().degree();
    let found = automorphisms(ext.top())?.len();
    if found != d {
        return Err(Error::NotGalois { found, degree: d });
    }
    Ok(())
}

impl ForcingInstance {
    pub fn new(ext: FieldExtension, alpha: NFElement, modulus: Ideal, k: NFElement, params: ForcingParams) -> Result<Self> {
        check_galois(&ext)?;
        Self::new_unchecked_galois(ext, alpha, modulus, k, params)
    }

    fn new_unchecked_galois(
        ext: FieldExtension,
        alpha: NFElement,
        modulus: Ideal,
        k: NFElement,
        params: ForcingParams,
    ) -> Result<Self> {
        if !alpha.field().same(ext.top()) || !alpha.is_integral() {
            return Err(Error::InvalidInstance("alpha must be an algebraic integer of L".into()));
        }
        if !modulus.field().same(ext.base()) {
            return Err(Error::ParentMismatch(ext.base().name().into(), modulus.field().name().into()));
        }
        if !k.field().same(ext.base()) {
            return Err(Error::ParentMismatch(ext.base().name().into(), k.field().name().into()));
        }
        if params.ell as usize != ext.top().degree() || !params.is_valid() {
            return Err(Error::InvalidInstance(format!("parameters {params:?} are not valid for [L:Q] = {}", ext.top().degree())));
        }
        Ok(ForcingInstance { ext, alpha, modulus, k, params })
    }
}

/// (alpha - 1)...(alpha - n).
pub fn falling_product(alpha: &NFElement, n: u32) -> NFElement {
    let f = alpha.field();
    let mut acc = NFElement::one(f);
    for j in 1..=n {
        acc = &acc * &(alpha - &NFElement::from_int(f, j));
    }
    acc
}

/// The divisibility half of the hypotheses; zero product never divides.
pub fn product_divides(ext: &FieldExtension, prod: &NFElement, modulus: &Ideal) -> Result<bool> {
    if prod.is_zero() {
        return Ok(false);
    }
    Ideal::principal(prod)?.divides(&ext.extend_ideal(modulus)?)
}

pub fn check_hypotheses(inst: &ForcingInstance) -> Result<bool> {
    let prod = falling_product(&inst.alpha, inst.params.n);
    if !product_divides(&inst.ext, &prod, &inst.modulus)? {
        return Ok(false);
    }
    inst.ext.congruent_mod(&inst.alpha, &inst.k, &inst.modulus)
}

pub fn in_base_ring(ext: &FieldExtension, alpha: &NFElement) -> bool {
    ext.pullback(alpha).is_some_and(|a| a.is_integral())
}

pub fn forcing_conclusion(inst: &ForcingInstance) -> Result<Verdict> {
    if !check_hypotheses(inst)? {
        return Ok(Verdict::HypothesesFail);
    }
    Ok(if in_base_ring(&inst.ext, &inst.alpha) { Verdict::AlphaInBase } else { Verdict::Counterexample })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub trials: usize,
    pub height_bound: i64,
    pub norm_bound: u64,
    pub seed: u64,
    /// extra divisors of the contracted product ideal tried per alpha
    pub divisors_per_trial: usize,
    /// all residues k are tried when N(I) is at most this, otherwise a sample
    pub residue_enum_limit: u64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { trials: 1000, height_bound: 20, norm_bound: 1_000_000, seed: 42, divisors_per_trial: 3, residue_enum_limit: 10_000 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Counterexample {
    pub alpha: Vec<String>,
    pub modulus: Vec<Vec<String>>,
    pub k: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct FuzzReport {
    pub field: String,
    pub base: String,
    pub n: u32,
    pub trials: usize,
    /// (alpha, I) pairs examined
    pub instances: usize,
    /// (alpha, I, k) triples sent through the full check
    pub congruence_checks: usize,
    pub hypotheses_fail: usize,
    pub divisibility_held: usize,
    pub alpha_in_base: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl FuzzReport {
    fn merge(mut self, o: FuzzReport) -> FuzzReport {
        self.trials += o.trials;
        self.instances += o.instances;
        self.congruence_checks += o.congruence_checks;
        self.hypotheses_fail += o.hypotheses_fail;
        self.divisibility_held += o.divisibility_held;
        self.alpha_in_base += o.alpha_in_base;
        self.counterexamples.extend(o.counterexamples);
        self
    }
}

fn random_below(rng: &mut ChaCha8Rng, m: &BigInt) -> BigInt {
    let words = m.bits() / 64 + 2;
    let mut x = BigInt::zero();
    for _ in 0..words {
        x = (x << 64) + BigInt::from(rng.gen::<u64>());
    }
    x % m
}

/// Divisors of prod P^e with norm at most `bound`.
fn small_divisors(field: &crate::nf::Field, fac: &[(PrimeIdeal, u32)], bound: &BigInt) -> Vec<Ideal> {
    let mut out = vec![(Ideal::unit(field), BigInt::one())];
    for (p, e) in fac {
        let q = p.residue_size();
        let mut next = Vec::new();
        for (i, nrm) in &out {
            let mut cur = i.clone();
            let mut cn = nrm.clone();
            for _ in 0..*e {
                cn *= &q;
                if &cn > bound {
                    break;
                }
                cur = cur.mul(&p.ideal).expect("same field");
                next.push((cur.clone(), cn.clone()));
            }
        }
        out.extend(next);
    }
    out.into_iter().map(|(i, _)| i).collect()
}

fn trial(ext: &FieldExtension, params: ForcingParams, cfg: &FuzzConfig, idx: usize) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ idx as u64);
    let l = ext.top();
    let k_field = ext.base();
    let alpha = loop {
        let v: Vec<BigInt> = (0..l.degree()).map(|_| BigInt::from(rng.gen_range(-cfg.height_bound..=cfg.height_bound))).collect();
        let a = NFElement::from_ib(l, &v);
        if !in_base_ring(ext, &a) {
            break a;
        }
    };
    let prod = falling_product(&alpha, params.n);
    let mut rep = FuzzReport { trials: 1, ..Default::default() };
    if prod.is_zero() {
        // alpha in {1..n} lies in O_K, never drawn
        return Ok(rep);
    }
    let big = Ideal::principal(&prod)?;
    let contracted = ext.contract_ideal(&big)?;
    let fac = factor(&contracted)?.factors;
    let mut divs = small_divisors(k_field, &fac, &BigInt::from(cfg.norm_bound));
    let mut moduli = vec![contracted];
    for _ in 0..cfg.divisors_per_trial.min(divs.len()) {
        let i = rng.gen_range(0..divs.len());
        moduli.push(divs.swap_remove(i));
    }
    for m in moduli {
        rep.instances += 1;
        if !product_divides(ext, &prod, &m)? {
            // the verdict does not depend on k
            rep.hypotheses_fail += 1;
            continue;
        }
        rep.divisibility_held += 1;
        let nrm = m.norm();
        let ks: Vec<NFElement> = if nrm <= BigInt::from(cfg.residue_enum_limit) {
            residues(&m).iter().map(|v| NFElement::from_ib(k_field, v)).collect()
        } else {
            let mut ks = Vec::new();
            // trace projection of alpha down to K
            let rel = ext.relative_degree() as i64;
            let conj = automorphisms(l)?;
            let mut tr = NFElement::zero(l);
            for s in &conj {
                tr = &tr + &s.apply(&alpha);
            }
            let deg_k = k_field.degree() as i64;
            let t = tr.scale(&BigRational::new(BigInt::one(), BigInt::from(rel * deg_k)));
            if let Some(t) = ext.pullback(&t) {
                ks.push(t);
            }
            for _ in 0..8 {
                let v: Vec<BigInt> = m.hnf().iter().enumerate().map(|(i, r)| random_below(&mut rng, &r[i])).collect();
                ks.push(NFElement::from_ib(k_field, &v));
            }
            ks
        };
        for k in ks {
            rep.congruence_checks += 1;
            let inst = ForcingInstance::new_unchecked_galois(ext.clone(), alpha.clone(), m.clone(), k.clone(), params)?;
            match forcing_conclusion(&inst)? {
                Verdict::HypothesesFail => {}
                Verdict::AlphaInBase => rep.alpha_in_base += 1,
                Verdict::Counterexample => rep.counterexamples.push(Counterexample {
                    alpha: alpha.ib_strings(),
                    modulus: m.to_json().hnf_rows,
                    k: k.ib_strings(),
                }),
            }
        }
    }
    Ok(rep)
}

/// Random alpha in O_L \ O_K, moduli drawn from the contraction of the product
/// ideal and its divisors of bounded norm, k over residues. Deterministic in
/// the seed; trials run in parallel and merge in index order.
pub fn fuzz(ext: &FieldExtension, cfg: &FuzzConfig) -> Result<FuzzReport> {
    check_galois(ext)?;
    let params = compute_n(ext.top().degree() as u32)?;
    let parts: Vec<Result<FuzzReport>> = (0..cfg.trials).into_par_iter().map(|i| trial(ext, params, cfg, i)).collect();
    let mut rep = FuzzReport { field: ext.top().name().into(), base: ext.base().name().into(), n: params.n, ..Default::default() };
    for p in parts {
        rep = rep.merge(p?);
    }
    Ok(rep)
}

/// The instance alpha = a in Z (a > n), I = (prod (a - j)), k = a.
pub fn positive_instance(ext: &FieldExtension, a: u64) -> Result<ForcingInstance> {
    let params = compute_n(ext.top().degree() as u32)?;
    if a <= params.n as u64 {
        return Err(Error::InvalidInstance(format!("need a > n = {}", params.n)));
    }
    let base = ext.base();
    let prod = falling_product(&NFElement::from_int(base, a), params.n);
    let m = Ideal::principal(&prod)?;
    ForcingInstance::new(ext.clone(), NFElement::from_int(ext.top(), a), m, NFElement::from_int(base, a), params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::builtin;

    fn scan_oracle(ell: u32) -> u32 {
        // independent: compare via decimal string lengths and direct powers
        let mut n = 1u32;
        loop {
            let rhs = BigInt::from(4 * n).pow(ell);
            let ok_a = n > 23 * ell;
            let e1 = n as i64 - 2 * ell as i64;
            let e2 = n as i64 - 20 * ell as i64;
            let ok_b = e1 > 0 && format!("1{}", "0".repeat(e1 as usize)).parse::<BigInt>().unwrap() > rhs;
            let ok_c = e2 > 0 && format!("1{}", "0".repeat(e2 as usize)).parse::<BigInt>().unwrap() > rhs;
            if ok_a && ok_b && ok_c {
                return n;
            }
            n += 1;
        }
    }

    #[test]
    fn n_table() {
        assert_eq!(compute_n(1).unwrap().n, 24);
        assert_eq!(compute_n(2).unwrap().n, 47);
        assert_eq!(compute_n(4).unwrap().n, 93);
        let mut prev = 0;
        for ell in 1..=12 {
            let n = compute_n(ell).unwrap().n;
            assert_eq!(n, scan_oracle(ell));
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn trivial_instances() {
        let g = builtin("gauss").unwrap();
        let ext = FieldExtension::over_q(&g).unwrap();
        let inst = positive_instance(&ext, 48).unwrap();
        assert_eq!(forcing_conclusion(&inst).unwrap(), Verdict::AlphaInBase);
        let q = builtin("Q").unwrap();
        let params = compute_n(2).unwrap();
        let inst = ForcingInstance::new(
            ext.clone(),
            NFElement::one(&g),
            Ideal::from_int(&q, 6).unwrap(),
            NFElement::one(&q),
            params,
        )
        .unwrap();
        assert_eq!(forcing_conclusion(&inst).unwrap(), Verdict::HypothesesFail);
        let inst =
            ForcingInstance::new(ext, NFElement::theta(&g), Ideal::from_int(&q, 2).unwrap(), NFElement::zero(&q), params)
                .unwrap();
        assert!(!check_hypotheses(&inst).unwrap());
    }

    #[test]
    fn rejects_non_galois() {
        let k = builtin("cbrt2").unwrap();
        let ext = FieldExtension::over_q(&k).unwrap();
        assert!(matches!(check_galois(&ext), Err(Error::NotGalois { found: 1, degree: 3 })));
    }

    #[test]
    fn small_fuzz_is_deterministic() {
        let g = builtin("gauss").unwrap();
        let ext = FieldExtension::over_q(&g).unwrap();
        let cfg = FuzzConfig { trials: 12, ..Default::default() };
        let a = fuzz(&ext, &cfg).unwrap();
        let b = fuzz(&ext, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.counterexamples.is_empty());
        assert!(a.instances >= 12);
        assert!(a.divisibility_held >= 12);
    }
}
