//! Integral and fractional ideals of O_K as Z-lattices in Hermite normal
//! form over the integral basis, prime factorisation by Kummer-Dedekind, CRT,
//! num/den of field elements and ideal extension along L/K.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::fp::{self, FpPoly};
use crate::arith::hnf::{self, ZMat};
use crate::arith::int::{factor_bigint, lcm_all, parse_rat, valuation};
use crate::arith::poly::discriminant;
use crate::error::{Error, Result};
use crate::nf::{kpoly, Field, NFElement};

/// A nonzero integral ideal. The zero ideal is not representable.
#[derive(Clone, Debug)]
pub struct Ideal {
    field: Field,
    hnf: ZMat,
}

impl PartialEq for Ideal {
    fn eq(&self, o: &Self) -> bool {
        self.field.same(&o.field) && self.hnf == o.hnf
    }
}

impl Eq for Ideal {}

fn int_rows(field: &Field, a: &NFElement) -> Result<ZMat> {
    let v = a.ib_int().ok_or_else(|| Error::NotIntegral(format!("{a:?}")))?;
    Ok((0..field.degree()).map(|j| field.mul_ib(&v, &unit(field.degree(), j))).collect())
}

fn unit(d: usize, j: usize) -> Vec<BigInt> {
    (0..d).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

fn norm_int(a: &NFElement) -> BigInt {
    a.norm().to_integer().abs()
}

impl Ideal {
    pub fn unit(field: &Field) -> Self {
        let d = field.degree();
        Ideal { field: field.clone(), hnf: (0..d).map(|j| unit(d, j)).collect() }
    }

    /// Ideal generated by integral elements, at least one nonzero.
    pub fn from_gens(field: &Field, gens: &[NFElement]) -> Result<Self> {
        let mut rows = Vec::new();
        let mut m = BigInt::zero();
        for g in gens {
            if !g.field().same(field) {
                return Err(Error::ParentMismatch(field.name().into(), g.field().name().into()));
            }
            rows.extend(int_rows(field, g)?);
            if !g.is_zero() {
                m = m.gcd(&norm_int(g));
            }
        }
        if m.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Ok(Ideal { field: field.clone(), hnf: hnf::hnf_modular(&rows, &m, field.degree()) })
    }

    pub fn principal(a: &NFElement) -> Result<Self> {
        Self::from_gens(a.field(), std::slice::from_ref(a))
    }

    pub fn from_int(field: &Field, n: impl Into<BigInt>) -> Result<Self> {
        Self::principal(&NFElement::from_int(field, n))
    }

    /// From rows of integral-basis coordinates spanning an O_K-submodule of
    /// full rank; the rows are put into canonical form and checked.
    pub fn from_hnf(field: &Field, rows: &[Vec<BigInt>]) -> Result<Self> {
        let d = field.degree();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Parse(format!("ideal rows must have {d} entries")));
        }
        let h = hnf::hnf(rows);
        if h.len() != d {
            return Err(Error::ZeroIdeal);
        }
        let id = Ideal { field: field.clone(), hnf: h };
        for r in &id.hnf {
            for j in 0..d {
                if !hnf::contains(&id.hnf, &field.mul_ib(r, &unit(d, j))) {
                    return Err(Error::Parse("lattice is not closed under multiplication by O_K".into()));
                }
            }
        }
        Ok(id)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn hnf(&self) -> &ZMat {
        &self.hnf
    }

    pub fn norm(&self) -> BigInt {
        hnf::index(&self.hnf)
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    fn check(&self, o: &Ideal) -> Result<()> {
        if self.field.same(&o.field) {
            Ok(())
        } else {
            Err(Error::ParentMismatch(self.field.name().into(), o.field.name().into()))
        }
    }

    /// Z-basis as field elements.
    pub fn basis_elements(&self) -> Vec<NFElement> {
        self.hnf.iter().map(|r| NFElement::from_ib(&self.field, r)).collect()
    }

    pub fn contains(&self, a: &NFElement) -> bool {
        a.ib_int().is_some_and(|v| hnf::contains(&self.hnf, &v))
    }

    pub fn contains_ib(&self, v: &[BigInt]) -> bool {
        hnf::contains(&self.hnf, v)
    }

    /// Canonical representative of an integral element modulo the ideal.
    pub fn reduce(&self, a: &NFElement) -> Result<NFElement> {
        let v = a.ib_int().ok_or_else(|| Error::NotIntegral(format!("{a:?}")))?;
        Ok(NFElement::from_ib(&self.field, &hnf::reduce_mod(&self.hnf, &v)))
    }

    pub fn reduce_ib(&self, v: &[BigInt]) -> Vec<BigInt> {
        hnf::reduce_mod(&self.hnf, v)
    }

    pub fn mul(&self, o: &Ideal) -> Result<Ideal> {
        self.check(o)?;
        let mut rows = Vec::with_capacity(self.hnf.len() * o.hnf.len());
        for a in &self.hnf {
            for b in &o.hnf {
                rows.push(self.field.mul_ib(a, b));
            }
        }
        let m = self.norm() * o.norm();
        Ok(Ideal { field: self.field.clone(), hnf: hnf::hnf_modular(&rows, &m, self.field.degree()) })
    }

    pub fn pow(&self, e: u32) -> Ideal {
        let mut r = Ideal::unit(&self.field);
        for _ in 0..e {
            r = r.mul(self).expect("same field");
        }
        r
    }

    /// I + J, the ideal gcd.
    pub fn sum(&self, o: &Ideal) -> Result<Ideal> {
        self.check(o)?;
        let mut rows = self.hnf.clone();
        rows.extend(o.hnf.iter().cloned());
        let m = self.norm().gcd(&o.norm());
        Ok(Ideal { field: self.field.clone(), hnf: hnf::hnf_modular(&rows, &m, self.field.degree()) })
    }

    pub fn intersect(&self, o: &Ideal) -> Result<Ideal> {
        self.check(o)?;
        Ok(Ideal { field: self.field.clone(), hnf: hnf::intersect(&self.hnf, &o.hnf) })
    }

    /// self | other, i.e. other ⊆ self.
    pub fn divides(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        Ok(other.hnf.iter().all(|r| hnf::contains(&self.hnf, r)))
    }

    pub fn coprime(&self, o: &Ideal) -> Result<bool> {
        Ok(self.sum(o)?.is_unit())
    }

    /// The colon ideal (self : J) = {x in O_K : x J ⊆ self}. When J | self this
    /// is the exact quotient self / J.
    pub fn colon(&self, j: &Ideal) -> Result<Ideal> {
        self.check(j)?;
        let d = self.field.degree();
        let n = self.norm();
        let hinv = crate::arith::matrix::inverse(&to_q(&self.hnf)).expect("full rank");
        // N * H^-1 is integral
        let nh: ZMat = hinv
            .iter()
            .map(|r| r.iter().map(|x| (x * BigRational::from_integer(n.clone())).to_integer()).collect())
            .collect();
        let mut cols: ZMat = vec![Vec::new(); d];
        for jr in &j.hnf {
            // row i: b_i * j_r, then times N H^-1
            for (i, c) in cols.iter_mut().enumerate() {
                let prod = self.field.mul_ib(&unit(d, i), jr);
                for k in 0..d {
                    let mut s = BigInt::zero();
                    for (l, x) in prod.iter().enumerate() {
                        if !x.is_zero() {
                            s += x * &nh[l][k];
                        }
                    }
                    c.push(s);
                }
            }
        }
        let h = hnf::congruence_kernel(&cols, &n);
        Ok(Ideal { field: self.field.clone(), hnf: h })
    }

    /// self / J for J | self.
    pub fn exact_div(&self, j: &Ideal) -> Result<Ideal> {
        if !j.divides(self)? {
            return Err(Error::InvalidInstance("ideal quotient is not integral".into()));
        }
        self.colon(j)
    }

    /// Least positive rational integer in the ideal.
    pub fn min_integer(&self) -> BigInt {
        let hinv = crate::arith::matrix::inverse(&to_q(&self.hnf)).expect("full rank");
        let one: Vec<BigRational> = self.field.one_ib().iter().cloned().map(BigRational::from_integer).collect();
        let c = crate::arith::matrix::vec_mat(&one, &hinv);
        let dens: Vec<BigInt> = c.iter().map(|x| x.denom().clone()).collect();
        lcm_all(&dens)
    }

    /// (i1, i2) generating the ideal, with i1 the least positive integer in it.
    /// The second generator is searched among small integral-basis vectors,
    /// then among seeded random lattice combinations.
    pub fn two_element_rep(&self) -> (NFElement, NFElement) {
        let f = &self.field;
        let m = self.min_integer();
        let i1 = NFElement::from_int(f, m.clone());
        let gen_ok = |c: &NFElement| Ideal::from_gens(f, &[i1.clone(), c.clone()]).is_ok_and(|j| &j == self);
        if gen_ok(&NFElement::zero(f)) {
            return (i1, NFElement::zero(f));
        }
        let d = f.degree();
        let order = |k: i64| -> i64 { if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) } };
        for r in 1..=3i64 {
            let side = (2 * r + 1) as usize;
            let total = side.pow(d as u32);
            if total > 20_000 {
                break;
            }
            for idx in 0..total {
                let mut t = idx;
                let v: Vec<BigInt> = (0..d)
                    .map(|_| {
                        let k = (t % side) as i64;
                        t /= side;
                        BigInt::from(order(k))
                    })
                    .rev()
                    .collect();
                if v.iter().map(|x| x.abs()).max() != Some(BigInt::from(r)) || !hnf::contains(&self.hnf, &v) {
                    continue;
                }
                let c = NFElement::from_ib(f, &v);
                if gen_ok(&c) {
                    return (i1, c);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x2e1e);
        let mut bound = 2i64;
        loop {
            for _ in 0..64 {
                let mut v = vec![BigInt::zero(); d];
                for row in &self.hnf {
                    let k = BigInt::from(rng.gen_range(-bound..=bound));
                    for (x, y) in v.iter_mut().zip(row) {
                        *x += &k * y;
                    }
                }
                let c = NFElement::from_ib(f, &v);
                if gen_ok(&c) {
                    return (i1, c);
                }
            }
            bound *= 2;
        }
    }

    /// Writes `target` as a + b with a in self and b in other, if possible.
    pub fn split_sum(&self, other: &Ideal, target: &NFElement) -> Result<Option<(NFElement, NFElement)>> {
        self.check(other)?;
        let Some(t) = target.ib_int() else { return Ok(None) };
        let d = self.field.degree();
        let mut rows = self.hnf.clone();
        rows.extend(other.hnf.iter().cloned());
        let (h, u) = hnf::hnf_with_transform(&rows);
        let Some(c) = hnf::express(&h, &t) else { return Ok(None) };
        let mut coef = vec![BigInt::zero(); rows.len()];
        for (ci, urow) in c.iter().zip(&u) {
            for (x, y) in coef.iter_mut().zip(urow) {
                *x += ci * y;
            }
        }
        let comb = |range: std::ops::Range<usize>| {
            let mut v = vec![BigInt::zero(); d];
            for k in range {
                for (x, y) in v.iter_mut().zip(&rows[k]) {
                    *x += &coef[k] * y;
                }
            }
            NFElement::from_ib(&self.field, &v)
        };
        let a = comb(0..self.hnf.len());
        let b = comb(self.hnf.len()..rows.len());
        Ok(Some((a, b)))
    }

    pub fn to_json(&self) -> IdealJson {
        IdealJson {
            field_name: self.field.name().to_string(),
            hnf_rows: self.hnf.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }

    pub fn from_json(field: &Field, j: &IdealJson) -> Result<Self> {
        let rows = j
            .hnf_rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer `{s}`")))).collect())
            .collect::<Result<Vec<Vec<BigInt>>>>()?;
        Self::from_hnf(field, &rows)
    }
}

fn to_q(m: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    m.iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect()
}

/// Coefficients (x_1, ..., x_k) in O_K with a = sum x_j g_j, if they exist.
pub fn express_in_gens(gens: &[NFElement], a: &NFElement) -> Result<Option<Vec<NFElement>>> {
    let field = a.field().clone();
    let d = field.degree();
    let Some(t) = a.ib_int() else { return Ok(None) };
    let mut rows = Vec::new();
    for g in gens {
        rows.extend(int_rows(&field, g)?);
    }
    let (h, u) = hnf::hnf_with_transform(&rows);
    let Some(c) = hnf::express(&h, &t) else { return Ok(None) };
    let mut coef = vec![BigInt::zero(); rows.len()];
    for (ci, urow) in c.iter().zip(&u) {
        for (x, y) in coef.iter_mut().zip(urow) {
            *x += ci * y;
        }
    }
    // rows for generator g are b_j * g, j = 0..d: coefficient vector in the basis
    Ok(Some(gens.iter().enumerate().map(|(k, _)| NFElement::from_ib(&field, &coef[k * d..(k + 1) * d])).collect()))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IdealJson {
    pub field_name: String,
    pub hnf_rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FractionalIdealJson {
    pub field_name: String,
    pub hnf_rows: Vec<Vec<String>>,
    pub denominator: String,
}

/// (1/denominator) * lattice, with the denominator minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalIdeal {
    lattice: Ideal,
    denominator: BigInt,
}

impl FractionalIdeal {
    pub fn new(lattice: Ideal, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut den = denominator.abs();
        let content = lattice.hnf.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
        let g = den.gcd(&content);
        let mut lat = lattice;
        if !g.is_one() {
            lat.hnf = lat.hnf.iter().map(|r| r.iter().map(|x| x / &g).collect()).collect();
            den /= &g;
        }
        Ok(FractionalIdeal { lattice: lat, denominator: den })
    }

    /// The principal fractional ideal (a), a nonzero.
    pub fn principal(a: &NFElement) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let m = a.denominator();
        let alpha = a.scale(&BigRational::from_integer(m.clone()));
        Self::new(Ideal::principal(&alpha)?, m)
    }

    pub fn lattice(&self) -> &Ideal {
        &self.lattice
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// I / J for integral I, J.
    pub fn quotient(i: &Ideal, j: &Ideal) -> Result<Self> {
        // I / J = I * J' / N(J) where J * J' = (N(J)); J' = ((N(J)) : J)
        let n = j.norm();
        let jn = Ideal::from_int(&j.field, n.clone())?;
        let jp = jn.colon(j)?;
        Self::new(i.mul(&jp)?, n)
    }

    pub fn to_json(&self) -> FractionalIdealJson {
        let j = self.lattice.to_json();
        FractionalIdealJson { field_name: j.field_name, hnf_rows: j.hnf_rows, denominator: self.denominator.to_string() }
    }
}

/// num(a), den(a): the coprime integral ideals with (a) = num / den.
pub fn num_den(a: &NFElement) -> Result<(Ideal, Ideal)> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let f = a.field();
    let m = a.denominator();
    let alpha = a.scale(&BigRational::from_integer(m.clone()));
    let pa = Ideal::principal(&alpha)?;
    if m.is_one() {
        return Ok((pa, Ideal::unit(f)));
    }
    let pm = Ideal::from_int(f, m)?;
    let g = pa.sum(&pm)?;
    Ok((pa.colon(&g)?, pm.colon(&g)?))
}

pub fn num(a: &NFElement) -> Result<Ideal> {
    Ok(num_den(a)?.0)
}

/// A prime ideal with its residue data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub ideal: Ideal,
    pub p: u64,
    /// residue degree
    pub f: u32,
    /// ramification index over p
    pub e: u32,
    /// second generator: P = (p, gen)
    pub gen: NFElement,
}

impl PrimeIdeal {
    /// Norm is p^f and no two basis elements outside P multiply into P. When the
    /// residue field has at most `exhaustive` elements every nonzero residue x
    /// is also checked to satisfy x^(q-1) = 1.
    pub fn check_maximal(&self, exhaustive: u64) -> bool {
        let q = BigInt::from(self.p).pow(self.f);
        if self.ideal.norm() != q {
            return false;
        }
        let field = &self.ideal.field;
        let d = field.degree();
        for i in 0..d {
            for j in i..d {
                let (bi, bj) = (unit(d, i), unit(d, j));
                if !self.ideal.contains_ib(&bi)
                    && !self.ideal.contains_ib(&bj)
                    && self.ideal.contains_ib(&field.mul_ib(&bi, &bj))
                {
                    return false;
                }
            }
        }
        let Some(qs) = q.to_u64() else { return true };
        if qs > exhaustive {
            return true;
        }
        residues(&self.ideal).iter().filter(|v| v.iter().any(|x| !x.is_zero())).all(|v| {
            let x = NFElement::from_ib(field, v);
            let y = &x.pow((qs - 1) as u32) - &NFElement::one(field);
            self.ideal.contains(&y)
        })
    }

    pub fn residue_size(&self) -> BigInt {
        BigInt::from(self.p).pow(self.f)
    }
}

/// Canonical representatives of O_K / I (integral-basis vectors with each
/// pivot coordinate in [0, h_ii)).
pub fn residues(i: &Ideal) -> Vec<Vec<BigInt>> {
    let diag: Vec<u64> = i.hnf.iter().enumerate().map(|(k, r)| r[k].to_u64().expect("small ideal")).collect();
    let total: u64 = diag.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    for mut n in 0..total {
        let v: Vec<BigInt> = diag
            .iter()
            .map(|&m| {
                let c = n % m;
                n /= m;
                BigInt::from(c)
            })
            .collect();
        out.push(v);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub factors: Vec<(PrimeIdeal, u32)>,
}

impl PrimeFactorization {
    pub fn reconstruct(&self, field: &Field) -> Ideal {
        let mut r = Ideal::unit(field);
        for (p, e) in &self.factors {
            r = r.mul(&p.ideal.pow(*e)).expect("same field");
        }
        r
    }
}

/// An integral element generating a subring Z[gamma] whose index in O_K is
/// prime to p, together with its characteristic polynomial.
fn p_maximal_generator(field: &Field, p: u64) -> Option<(NFElement, Vec<BigInt>)> {
    let d = field.degree();
    let bp = BigInt::from(p);
    let try_elem = |g: NFElement| -> Option<(NFElement, Vec<BigInt>)> {
        let cp: Vec<BigInt> = g.charpoly().into_iter().map(|c| c.to_integer()).collect();
        let dh = discriminant(&cp);
        if dh.is_zero() {
            return None;
        }
        let q = &dh / field.discriminant();
        let ind = q.abs().sqrt();
        (!(&ind % &bp).is_zero()).then_some((g, cp))
    };
    if !(field.index() % &bp).is_zero() {
        let t = NFElement::theta(field);
        let cp = field.poly().to_vec();
        return Some((t, cp));
    }
    let side = 5usize;
    let total = side.pow(d as u32).min(100_000);
    for idx in 1..total {
        let mut t = idx;
        let v: Vec<BigInt> = (0..d)
            .map(|_| {
                let k = (t % side) as i64 - 2;
                t /= side;
                BigInt::from(k)
            })
            .collect();
        if let Some(r) = try_elem(NFElement::from_ib(field, &v)) {
            return Some(r);
        }
    }
    None
}

/// The primes above p with their ramification indices (Kummer-Dedekind).
pub fn primes_above(field: &Field, p: u64) -> Result<Vec<PrimeIdeal>> {
    let (gamma, h) = p_maximal_generator(field, p).ok_or_else(|| Error::UnsupportedPrime(p.to_string()))?;
    let bp = BigInt::from(p);
    let hp = FpPoly::new(h.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect(), p);
    let pe = NFElement::from_int(field, p);
    let mut out = Vec::new();
    for (g, e) in fp::factor(&hp, p) {
        let coeffs: Vec<NFElement> = g.c.iter().map(|&c| NFElement::from_int(field, c)).collect();
        let gen = kpoly::eval(&coeffs, &gamma);
        let ideal = Ideal::from_gens(field, &[pe.clone(), gen.clone()])?;
        out.push(PrimeIdeal { ideal, p, f: g.degree() as u32, e, gen });
    }
    Ok(out)
}

/// v_P(I) by repeated exact division.
pub fn ideal_valuation(i: &Ideal, p: &PrimeIdeal) -> Result<u32> {
    let mut v = 0;
    let mut cur = i.clone();
    while p.ideal.divides(&cur)? {
        cur = cur.colon(&p.ideal)?;
        v += 1;
    }
    Ok(v)
}

pub fn factor(i: &Ideal) -> Result<PrimeFactorization> {
    let n = i.norm();
    let mut factors = Vec::new();
    if n.is_one() {
        return Ok(PrimeFactorization { factors });
    }
    for (p, _) in factor_bigint(&n)? {
        for pr in primes_above(&i.field, p)? {
            let v = ideal_valuation(i, &pr)?;
            if v > 0 {
                factors.push((pr, v));
            }
        }
    }
    Ok(PrimeFactorization { factors })
}

/// v_P(a) for a nonzero element of K.
pub fn element_valuation(a: &NFElement, p: &PrimeIdeal) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if a.field().degree() == 1 {
        let q = a.as_rational().unwrap();
        return Ok(valuation(q.numer(), p.p) as i64 - valuation(q.denom(), p.p) as i64);
    }
    let m = a.denominator();
    let alpha = a.scale(&BigRational::from_integer(m.clone()));
    let va = integral_valuation(&alpha, p);
    let vm = if m.is_one() { 0 } else { p.e as i64 * valuation(&m, p.p) as i64 };
    Ok(va - vm)
}

fn integral_valuation(alpha: &NFElement, p: &PrimeIdeal) -> i64 {
    // largest v with alpha in P^v; v <= e * v_p(N(alpha)) / f bounds the loop
    let mut v = 0;
    let mut pw = p.ideal.clone();
    while pw.contains(alpha) {
        v += 1;
        pw = pw.mul(&p.ideal).expect("same field");
    }
    v
}

/// x with x = r_i mod I_i for all i; moduli pairwise coprime, residues integral.
pub fn crt(pairs: &[(NFElement, Ideal)]) -> Result<NFElement> {
    let Some((_, first)) = pairs.first() else { return Err(Error::InvalidInstance("empty CRT system".into())) };
    let field = first.field.clone();
    for (r, _) in pairs {
        if !r.is_integral() {
            return Err(Error::NotIntegral(format!("{r:?}")));
        }
    }
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if !pairs[i].1.coprime(&pairs[j].1)? {
                return Err(Error::NotCoprime);
            }
        }
    }
    let mut total = Ideal::unit(&field);
    for (_, m) in pairs {
        total = total.mul(m)?;
    }
    let mut x = NFElement::zero(&field);
    let one = NFElement::one(&field);
    for (i, (r, m)) in pairs.iter().enumerate() {
        let mut rest = Ideal::unit(&field);
        for (j, (_, mj)) in pairs.iter().enumerate() {
            if j != i {
                rest = rest.mul(mj)?;
            }
        }
        // a + b = 1, a in I_i, b in rest: b = 1 mod I_i, b = 0 mod the others
        let (_, b) = m.split_sum(&rest, &one)?.ok_or(Error::NotCoprime)?;
        x = &x + &(r * &b);
    }
    total.reduce(&x)
}

/// x in O_K with (2x - 1)(3x - 1) in I. For each rational prime p below I,
/// I_p = I + p^v O_K (v = v_p(N I)) is the p-part of I; take x = 1/2 modulo
/// I_p for odd p and x = 1/3 modulo I_2, then combine by CRT.
pub fn solve_vanishing_product(i: &Ideal) -> Result<NFElement> {
    let field = i.field.clone();
    let n = i.norm();
    if n.is_one() {
        return Ok(NFElement::zero(&field));
    }
    let mut pairs = Vec::new();
    for (p, _) in factor_bigint(&n)? {
        let v = valuation(&n, p);
        let ip = i.sum(&Ideal::from_int(&field, BigInt::from(p).pow(v))?)?;
        let unit_mod = if p == 2 { 3 } else { 2 };
        let u = Ideal::from_int(&field, unit_mod)?;
        // a + b = 1 with a in (u), b in I_p; then a / u is the inverse of u
        let (a, _) = u.split_sum(&ip, &NFElement::one(&field))?.ok_or(Error::NotCoprime)?;
        let inv = a.scale(&BigRational::new(BigInt::one(), BigInt::from(unit_mod)));
        pairs.push((inv, ip));
    }
    let x = crt(&pairs)?;
    let two = NFElement::from_int(&field, 2);
    let three = NFElement::from_int(&field, 3);
    let one = NFElement::one(&field);
    let prod = &(&(&two * &x) - &one) * &(&(&three * &x) - &one);
    if !i.contains(&prod) {
        return Err(Error::InvalidInstance("vanishing-product solution failed verification".into()));
    }
    Ok(x)
}

/// (x, y) with (2x - 1)(3x - 1) = y a, for integral a != 0.
pub fn nonzero_witness(a: &NFElement) -> Result<(NFElement, NFElement)> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let i = Ideal::principal(a)?;
    let x = solve_vanishing_product(&i)?;
    let f = a.field();
    let one = NFElement::one(f);
    let lhs = &(&(&NFElement::from_int(f, 2) * &x) - &one) * &(&(&NFElement::from_int(f, 3) * &x) - &one);
    let y = lhs.div(a)?;
    if !y.is_integral() {
        return Err(Error::InvalidInstance("nonzero witness is not integral".into()));
    }
    Ok((x, y))
}

/// K inside L through the image of K's generator.
#[derive(Clone, Debug)]
pub struct FieldExtension {
    base: Field,
    top: Field,
    embedding: NFElement,
}

impl FieldExtension {
    pub fn new(base: &Field, top: &Field, embedding: NFElement) -> Result<Self> {
        if !embedding.field().same(top) {
            return Err(Error::InvalidEmbedding("embedding image must lie in the top field".into()));
        }
        if !top.degree().is_multiple_of(base.degree()) {
            return Err(Error::InvalidEmbedding(format!("degree {} does not divide {}", base.degree(), top.degree())));
        }
        let f: Vec<NFElement> = base.poly().iter().map(|c| NFElement::from_int(top, c.clone())).collect();
        if !kpoly::eval(&f, &embedding).is_zero() {
            return Err(Error::InvalidEmbedding("image is not a root of the base polynomial".into()));
        }
        Ok(FieldExtension { base: base.clone(), top: top.clone(), embedding })
    }

    /// Q inside L.
    pub fn over_q(top: &Field) -> Result<Self> {
        let q = crate::catalogue::builtin("Q")?;
        Self::new(&q, top, NFElement::one(top))
    }

    /// L over itself.
    pub fn trivial(f: &Field) -> Self {
        FieldExtension { base: f.clone(), top: f.clone(), embedding: NFElement::theta(f) }
    }

    pub fn base(&self) -> &Field {
        &self.base
    }
    pub fn top(&self) -> &Field {
        &self.top
    }
    pub fn embedding(&self) -> &NFElement {
        &self.embedding
    }
    pub fn relative_degree(&self) -> usize {
        self.top.degree() / self.base.degree()
    }

    pub fn embed(&self, a: &NFElement) -> Result<NFElement> {
        if a.field().same(&self.top) {
            return Ok(a.clone());
        }
        if !a.field().same(&self.base) {
            return Err(Error::ParentMismatch(self.base.name().into(), a.field().name().into()));
        }
        if self.base.degree() == 1 {
            return Ok(NFElement::from_rational(&self.top, a.as_rational().unwrap()));
        }
        Ok(a.power_coords().iter().rev().fold(NFElement::zero(&self.top), |acc, c| {
            &(&acc * &self.embedding) + &NFElement::from_rational(&self.top, c.clone())
        }))
    }

    /// Preimage of an element of L lying in K.
    pub fn pullback(&self, a: &NFElement) -> Option<NFElement> {
        if a.field().same(&self.base) {
            return Some(a.clone());
        }
        let dk = self.base.degree();
        // power basis images 1, e, e^2, ... as columns
        let mut rows = Vec::with_capacity(dk);
        let mut cur = NFElement::one(&self.top);
        for _ in 0..dk {
            rows.push(cur.power_coords().to_vec());
            cur = &cur * &self.embedding;
        }
        let x = crate::arith::matrix::solve_left(&rows, a.power_coords())?;
        Some(NFElement::from_power(&self.base, x))
    }

    /// I * O_L.
    pub fn extend_ideal(&self, i: &Ideal) -> Result<Ideal> {
        if !i.field.same(&self.base) {
            return Err(Error::ParentMismatch(self.base.name().into(), i.field.name().into()));
        }
        let (a, b) = i.two_element_rep();
        Ideal::from_gens(&self.top, &[self.embed(&a)?, self.embed(&b)?])
    }

    /// J ∩ O_K for an ideal J of O_L.
    pub fn contract_ideal(&self, j: &Ideal) -> Result<Ideal> {
        let dk = self.base.degree();
        let dl = self.top.degree();
        let n = j.norm();
        let hinv = crate::arith::matrix::inverse(&to_q(&j.hnf)).expect("full rank");
        let mut cols: ZMat = Vec::with_capacity(dk);
        for k in 0..dk {
            let e = self.embed(&NFElement::from_ib(&self.base, &unit(dk, k)))?;
            let v = e.ib_int().ok_or_else(|| Error::InvalidEmbedding("image of O_K is not integral".into()))?;
            let row: Vec<BigInt> = (0..dl)
                .map(|c| {
                    let mut s = BigRational::zero();
                    for (l, x) in v.iter().enumerate() {
                        s += BigRational::from_integer(x.clone()) * &hinv[l][c];
                    }
                    (s * BigRational::from_integer(n.clone())).to_integer()
                })
                .collect();
            cols.push(row);
        }
        Ok(Ideal { field: self.base.clone(), hnf: hnf::congruence_kernel(&cols, &n) })
    }

    /// alpha = beta (mod I), meaning I O_L | num(alpha - beta); beta may lie in K.
    pub fn congruent_mod(&self, alpha: &NFElement, beta: &NFElement, i: &Ideal) -> Result<bool> {
        let a = self.embed(alpha)?;
        let b = self.embed(beta)?;
        let diff = &a - &b;
        if diff.is_zero() {
            return Ok(true);
        }
        let il = self.extend_ideal(i)?;
        il.divides(&num(&diff)?)
    }
}

/// Parse comma-separated integral-basis coordinates.
pub fn parse_coords(field: &Field, s: &str) -> Result<NFElement> {
    let q = s.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?;
    if q.len() != field.degree() {
        return Err(Error::Parse(format!("expected {} coordinates, got {}", field.degree(), q.len())));
    }
    Ok(NFElement::from_ib_rat(field, &q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::builtin;

    fn el(f: &Field, c: &[i64]) -> NFElement {
        NFElement::from_ib(f, &c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn generators_and_products() {
        let g = builtin("gauss").unwrap();
        let p2 = Ideal::from_gens(&g, &[el(&g, &[2, 0]), el(&g, &[1, 1])]).unwrap();
        assert_eq!(p2, Ideal::principal(&el(&g, &[1, 1])).unwrap());
        assert_eq!(p2.norm(), BigInt::from(2));
        assert_eq!(p2.mul(&p2).unwrap(), Ideal::from_int(&g, 2).unwrap());
        let five = Ideal::from_int(&g, 5).unwrap();
        assert_eq!(five.norm(), BigInt::from(25));
        let z = builtin("Q").unwrap();
        let i = Ideal::from_gens(&z, &[el(&z, &[6]), el(&z, &[10])]).unwrap();
        assert_eq!(i, Ideal::from_int(&z, 2).unwrap());
        assert!(Ideal::from_int(&z, 2).unwrap().coprime(&Ideal::from_int(&z, 3).unwrap()).unwrap());
        assert!(Ideal::from_int(&z, 2).unwrap().divides(&Ideal::from_int(&z, 6).unwrap()).unwrap());
        assert!(matches!(Ideal::from_gens(&z, &[el(&z, &[0])]), Err(Error::ZeroIdeal)));
    }

    #[test]
    fn two_generators_regenerate() {
        let g = builtin("gauss").unwrap();
        let p = Ideal::principal(&el(&g, &[2, 1])).unwrap();
        let (a, b) = p.two_element_rep();
        assert_eq!(a, NFElement::from_int(&g, 5));
        assert_eq!(b, el(&g, &[2, 1]));
        let q = Ideal::principal(&el(&g, &[1, 1])).unwrap();
        assert_eq!(q.two_element_rep(), (NFElement::from_int(&g, 2), el(&g, &[1, 1])));
    }

    #[test]
    fn factor_ten_in_gaussian_integers() {
        let g = builtin("gauss").unwrap();
        let ten = Ideal::from_int(&g, 10).unwrap();
        let fac = factor(&ten).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.reconstruct(&g), ten);
        let exps: Vec<(u64, u32)> = fac.factors.iter().map(|(p, e)| (p.p, *e)).collect();
        assert_eq!(exps, vec![(2, 2), (5, 1), (5, 1)]);
        for (p, _) in &fac.factors {
            assert!(p.check_maximal(10_000));
        }
        let seven = factor(&Ideal::from_int(&g, 7).unwrap()).unwrap();
        assert_eq!(seven.factors.len(), 1);
        assert_eq!(seven.factors[0].0.f, 2);
        assert!(factor(&Ideal::unit(&g)).unwrap().factors.is_empty());
    }

    #[test]
    fn index_divisor_uses_another_generator() {
        // 2 divides [O_K : Z[sqrt 5]]; Kummer-Dedekind applies to Z[(1+sqrt 5)/2]
        let k = builtin("sqrt5").unwrap();
        let fac = factor(&Ideal::from_int(&k, 2).unwrap()).unwrap();
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0].0.f, 2);
        let k = builtin("sqrt2_sqrt3").unwrap();
        let two = Ideal::from_int(&k, 2).unwrap();
        let fac = factor(&two).unwrap();
        assert_eq!(fac.reconstruct(&k), two);
    }

    #[test]
    fn crt_examples() {
        let z = builtin("Q").unwrap();
        let x = crt(&[(el(&z, &[1]), Ideal::from_int(&z, 2).unwrap()), (el(&z, &[2]), Ideal::from_int(&z, 3).unwrap())])
            .unwrap();
        assert_eq!(x, el(&z, &[5]));
        let g = builtin("gauss").unwrap();
        let i1 = Ideal::principal(&el(&g, &[1, 1])).unwrap();
        let i2 = Ideal::principal(&el(&g, &[2, 1])).unwrap();
        let r1 = el(&g, &[1, 0]);
        let r2 = el(&g, &[0, 1]);
        let x = crt(&[(r1.clone(), i1.clone()), (r2.clone(), i2.clone())]).unwrap();
        assert!(i1.contains(&(&x - &r1)));
        assert!(i2.contains(&(&x - &r2)));
        let two = Ideal::from_int(&z, 2).unwrap();
        assert!(matches!(crt(&[(el(&z, &[1]), two.clone()), (el(&z, &[0]), two)]), Err(Error::NotCoprime)));
    }

    #[test]
    fn num_den_examples() {
        let z = builtin("Q").unwrap();
        let (n, d) = num_den(&NFElement::from_rational(&z, crate::arith::int::rat(3, 2))).unwrap();
        assert_eq!((n.norm(), d.norm()), (BigInt::from(3), BigInt::from(2)));
        let g = builtin("gauss").unwrap();
        let a = el(&g, &[1, 1]).scale(&crate::arith::int::rat(1, 2));
        let (n, d) = num_den(&a).unwrap();
        assert!(n.is_unit());
        assert_eq!(d, Ideal::principal(&el(&g, &[1, 1])).unwrap());
    }

    #[test]
    fn vanishing_product_examples() {
        let z = builtin("Q").unwrap();
        assert_eq!(solve_vanishing_product(&Ideal::unit(&z)).unwrap(), el(&z, &[0]));
        assert_eq!(solve_vanishing_product(&Ideal::from_int(&z, 5).unwrap()).unwrap(), el(&z, &[3]));
        assert_eq!(solve_vanishing_product(&Ideal::from_int(&z, 6).unwrap()).unwrap(), el(&z, &[5]));
        let (x, y) = nonzero_witness(&el(&z, &[5])).unwrap();
        assert_eq!((x, y), (el(&z, &[3]), el(&z, &[8])));
        let (x, y) = nonzero_witness(&el(&z, &[1])).unwrap();
        assert_eq!((x, y), (el(&z, &[0]), el(&z, &[1])));
        let g = builtin("gauss").unwrap();
        let a = el(&g, &[1, 1]);
        let (x, y) = nonzero_witness(&a).unwrap();
        let one = NFElement::one(&g);
        let lhs = &(&(&NFElement::from_int(&g, 2) * &x) - &one) * &(&(&NFElement::from_int(&g, 3) * &x) - &one);
        assert_eq!(lhs, &y * &a);
    }

    #[test]
    fn extension_and_congruence() {
        let g = builtin("gauss").unwrap();
        let z = builtin("Q").unwrap();
        let ext = FieldExtension::over_q(&g).unwrap();
        let five = Ideal::from_int(&z, 5).unwrap();
        assert_eq!(ext.extend_ideal(&five).unwrap().norm(), BigInt::from(25));
        let t = NFElement::theta(&g);
        assert!(ext.congruent_mod(&t, &t, &five).unwrap());
        assert!(ext.congruent_mod(&t, &(&t + &NFElement::from_int(&g, 5)), &five).unwrap());
        assert!(!ext.congruent_mod(&t, &NFElement::from_int(&g, 1), &five).unwrap());
        let back = ext.contract_ideal(&ext.extend_ideal(&five).unwrap()).unwrap();
        assert_eq!(back, five);
    }
}
