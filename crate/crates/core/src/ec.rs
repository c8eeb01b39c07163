//! Elliptic curves y^2 = x^3 + Ax + B over a number field: exact group law,
//! the uniformizer t = -x/y at the identity, reduction modulo primes, kernel
//! points, and certified approximations s = t(kR)/t(R) = k (mod I).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::int::{inv_mod_u64, valuation};
use crate::catalogue::{Catalogue, CurveEntry, KValue};
use crate::error::{Error, Result};
use crate::ideal::{crt, element_valuation, factor, num, primes_above, residues, FieldExtension, Ideal, PrimeIdeal};
use crate::nf::{roots_in_field, Field, NFElement};

pub const DEFAULT_DIGIT_BUDGET: u64 = 100_000;
pub const RESIDUE_FIELD_LIMIT: u64 = 10_000;
pub const TORSION_CHECK_BOUND: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(NFElement, NFElement),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&NFElement> {
        match self {
            Point::Affine(x, _) => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&NFElement> {
        match self {
            Point::Affine(_, y) => Some(y),
            Point::Infinity => None,
        }
    }

    /// Decimal digits of the largest numerator or denominator among the coordinates.
    pub fn digits(&self) -> u64 {
        match self {
            Point::Infinity => 0,
            Point::Affine(x, y) => {
                let bits = x
                    .power_coords()
                    .iter()
                    .chain(y.power_coords())
                    .map(|c| c.numer().bits().max(c.denom().bits()))
                    .max()
                    .unwrap_or(0);
                (bits as f64 * std::f64::consts::LOG10_2).ceil() as u64
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Curve {
    field: Field,
    a: NFElement,
    b: NFElement,
}

impl Curve {
    pub fn new(a: NFElement, b: NFElement) -> Result<Self> {
        if !a.field().same(b.field()) {
            return Err(Error::ParentMismatch(a.field().name().into(), b.field().name().into()));
        }
        let c = Curve { field: a.field().clone(), a, b };
        if c.disc_term().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn a(&self) -> &NFElement {
        &self.a
    }
    pub fn b(&self) -> &NFElement {
        &self.b
    }

    /// 4A^3 + 27B^2.
    pub fn disc_term(&self) -> NFElement {
        let f = &self.field;
        &(&NFElement::from_int(f, 4) * &self.a.pow(3)) + &(&NFElement::from_int(f, 27) * &self.b.pow(2))
    }

    fn rhs(&self, x: &NFElement) -> NFElement {
        &(&x.pow(3) + &(&self.a * x)) + &self.b
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => x.field().same(&self.field) && y.field().same(&self.field) && y.pow(2) == self.rhs(x),
        }
    }

    pub fn point(&self, x: NFElement, y: NFElement) -> Result<Point> {
        let p = Point::Affine(x, y);
        if !self.contains(&p) {
            return Err(Error::NotOnCurve);
        }
        Ok(p)
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), -y),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let f = &self.field;
        let lambda = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return Point::Infinity;
            }
            let num = &(&NFElement::from_int(f, 3) * &x1.pow(2)) + &self.a;
            num.div(&(&NFElement::from_int(f, 2) * y1)).expect("y nonzero")
        } else {
            (y2 - y1).div(&(x2 - x1)).expect("distinct x")
        };
        let x3 = &(&lambda.pow(2) - x1) - x2;
        let y3 = &(&lambda * &(x1 - &x3)) - y1;
        Point::Affine(x3, y3)
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    /// m * P by double-and-add; fails once a coordinate exceeds the digit budget.
    pub fn mul(&self, m: &BigInt, p: &Point, budget: u64) -> Result<Point> {
        let base = if m.is_negative() { self.neg(p) } else { p.clone() };
        let e = m.abs();
        let mut r = Point::Infinity;
        for i in (0..e.bits()).rev() {
            r = self.double(&r);
            if e.bit(i) {
                r = self.add(&r, &base);
            }
            if r.digits() > budget {
                return Err(Error::Resource(format!("point coordinates exceed {budget} digits computing {m}*P")));
            }
        }
        Ok(r)
    }

    pub fn mul_i64(&self, m: i64, p: &Point) -> Point {
        self.mul(&BigInt::from(m), p, u64::MAX).expect("unbounded")
    }

    /// t(P) = -x/y, the uniformizer at the identity.
    pub fn t(&self, p: &Point) -> Result<NFElement> {
        match p {
            Point::Infinity => Err(Error::UniformizerUndefined("point at infinity")),
            Point::Affine(x, y) => {
                if y.is_zero() {
                    return Err(Error::UniformizerUndefined("2-torsion point"));
                }
                Ok((-x).div(y).expect("y nonzero"))
            }
        }
    }

    pub fn base_change(&self, ext: &FieldExtension) -> Result<Curve> {
        Curve::new(ext.embed(&self.a)?, ext.embed(&self.b)?)
    }

    pub fn base_change_point(&self, ext: &FieldExtension, p: &Point) -> Result<Point> {
        Ok(match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(ext.embed(x)?, ext.embed(y)?),
        })
    }

    /// p >= 5, integral coefficients at P and 4A^3 + 27B^2 a P-unit.
    pub fn check_good_reduction(&self, pr: &PrimeIdeal) -> Result<()> {
        let bad = || Error::BadReduction(format!("prime above {}", pr.p));
        if pr.p < 5 {
            return Err(bad());
        }
        for c in [&self.a, &self.b] {
            if !c.is_zero() && element_valuation(c, pr)? < 0 {
                return Err(bad());
            }
        }
        if element_valuation(&self.disc_term(), pr)? != 0 {
            return Err(bad());
        }
        Ok(())
    }
}

/// O_K / P with elements as canonical integral-basis vectors.
pub struct ResidueField {
    pub prime: PrimeIdeal,
    others: Vec<PrimeIdeal>,
    q: u64,
}

type Fq = Vec<BigInt>;

impl ResidueField {
    pub fn new(pr: &PrimeIdeal) -> Result<Self> {
        let q = pr.residue_size().to_u64().filter(|&q| q <= RESIDUE_FIELD_LIMIT).ok_or_else(|| {
            Error::Resource(format!("residue field of size {} exceeds {RESIDUE_FIELD_LIMIT}", pr.residue_size()))
        })?;
        let field = pr.ideal.field();
        let others = primes_above(field, pr.p)?.into_iter().filter(|o| o.ideal != pr.ideal).collect();
        Ok(ResidueField { prime: pr.clone(), others, q })
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    fn field(&self) -> &Field {
        self.prime.ideal.field()
    }

    pub fn zero(&self) -> Fq {
        vec![BigInt::zero(); self.field().degree()]
    }

    pub fn from_int(&self, n: i64) -> Fq {
        self.prime.ideal.reduce_ib(&NFElement::from_int(self.field(), n).ib_int().unwrap())
    }

    /// Image of a P-integral element; None when v_P(a) < 0.
    pub fn reduce(&self, a: &NFElement) -> Result<Option<Fq>> {
        if a.is_zero() {
            return Ok(Some(self.zero()));
        }
        if element_valuation(a, &self.prime)? < 0 {
            return Ok(None);
        }
        let f = self.field();
        let m = a.denominator();
        let alpha = a.scale(&BigRational::from_integer(m.clone()));
        let vp = valuation(&m, self.prime.p);
        let m0 = &m / BigInt::from(self.prime.p).pow(vp);
        let alpha = if vp == 0 {
            alpha
        } else {
            // gamma = 1 mod P and 0 mod Q^(vp e_Q) for the other primes above p
            let mut pairs = vec![(NFElement::one(f), self.prime.ideal.clone())];
            for o in &self.others {
                pairs.push((NFElement::zero(f), o.ideal.pow(vp * o.e)));
            }
            let gamma = if pairs.len() == 1 { NFElement::one(f) } else { crt(&pairs)? };
            let ga = &gamma * &alpha;
            ga.scale(&BigRational::new(BigInt::one(), BigInt::from(self.prime.p).pow(vp)))
        };
        let p = self.prime.p;
        let m0r = m0.mod_floor(&BigInt::from(p)).to_u64().unwrap();
        let inv = inv_mod_u64(m0r, p).expect("unit");
        let v = alpha.scale(&BigRational::from_integer(BigInt::from(inv)));
        let v = v.ib_int().ok_or_else(|| Error::NotIntegral("reduced coordinate".into()))?;
        Ok(Some(self.prime.ideal.reduce_ib(&v)))
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        self.prime.ideal.reduce_ib(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        self.prime.ideal.reduce_ib(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        self.prime.ideal.reduce_ib(&self.field().mul_ib(a, b))
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    pub fn pow(&self, a: &Fq, mut e: u64) -> Fq {
        let mut r = self.from_int(1);
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: &Fq) -> Fq {
        self.pow(a, self.q - 2)
    }

    pub fn elements(&self) -> Vec<Fq> {
        residues(&self.prime.ideal)
    }

    /// Nonzero squares satisfy a^((q-1)/2) = 1; q is odd here.
    pub fn is_square(&self, a: &Fq) -> bool {
        self.is_zero(a) || self.pow(a, (self.q - 1) / 2) == self.from_int(1)
    }
}

/// A curve reduced modulo a prime of good reduction. Points are None for the identity.
pub struct ReducedCurve {
    pub fq: ResidueField,
    a: Fq,
    b: Fq,
}

pub type ResiduePoint = Option<(Fq, Fq)>;

impl ReducedCurve {
    pub fn new(c: &Curve, pr: &PrimeIdeal) -> Result<Self> {
        c.check_good_reduction(pr)?;
        let fq = ResidueField::new(pr)?;
        let a = fq.reduce(&c.a)?.expect("integral");
        let b = fq.reduce(&c.b)?.expect("integral");
        Ok(ReducedCurve { fq, a, b })
    }

    pub fn reduce_point(&self, p: &Point) -> Result<ResiduePoint> {
        match p {
            Point::Infinity => Ok(None),
            Point::Affine(x, y) => match (self.fq.reduce(x)?, self.fq.reduce(y)?) {
                (Some(x), Some(y)) => Ok(Some((x, y))),
                _ => Ok(None),
            },
        }
    }

    fn rhs(&self, x: &Fq) -> Fq {
        let f = &self.fq;
        let x3 = f.mul(&f.mul(x, x), x);
        f.add(&f.add(&x3, &f.mul(&self.a, x)), &self.b)
    }

    pub fn add(&self, p: &ResiduePoint, q: &ResiduePoint) -> ResiduePoint {
        let f = &self.fq;
        let ((x1, y1), (x2, y2)) = match (p, q) {
            (None, _) => return q.clone(),
            (_, None) => return p.clone(),
            (Some(a), Some(b)) => (a, b),
        };
        let lambda = if x1 == x2 {
            if y1 != y2 || f.is_zero(y1) {
                return None;
            }
            let num = f.add(&f.mul(&f.from_int(3), &f.mul(x1, x1)), &self.a);
            f.mul(&num, &f.inv(&f.mul(&f.from_int(2), y1)))
        } else {
            f.mul(&f.sub(y2, y1), &f.inv(&f.sub(x2, x1)))
        };
        let x3 = f.sub(&f.sub(&f.mul(&lambda, &lambda), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        Some((x3, y3))
    }

    /// |E(F_q)| by counting square classes of x^3 + Ax + B.
    pub fn count_points(&self) -> u64 {
        let f = &self.fq;
        let mut n = 1;
        for x in f.elements() {
            let r = self.rhs(&x);
            if f.is_zero(&r) {
                n += 1;
            } else if f.is_square(&r) {
                n += 2;
            }
        }
        n
    }

    pub fn order(&self, p: &ResiduePoint) -> u64 {
        let mut r = p.clone();
        let mut m = 1;
        while r.is_some() {
            r = self.add(&r, p);
            m += 1;
        }
        m
    }
}

/// Least m >= 1 with m*P reducing to the identity modulo the prime.
pub fn reduction_order(c: &Curve, p: &Point, pr: &PrimeIdeal) -> Result<u64> {
    let rc = ReducedCurve::new(c, pr)?;
    let pb = rc.reduce_point(p)?;
    Ok(rc.order(&pb))
}

/// A curve with a generator of infinite order (checked up to small torsion).
#[derive(Clone, Debug)]
pub struct EllipticCurveData {
    pub name: String,
    pub curve: Curve,
    pub generator: Point,
    pub rank_note: Option<String>,
}

impl EllipticCurveData {
    pub fn new(name: &str, curve: Curve, generator: Point, rank_note: Option<String>) -> Result<Self> {
        if !curve.contains(&generator) {
            return Err(Error::NotOnCurve);
        }
        let mut q = Point::Infinity;
        for m in 1..=TORSION_CHECK_BOUND {
            q = curve.add(&q, &generator);
            if q.is_infinity() {
                return Err(Error::TorsionGenerator(m));
            }
        }
        Ok(EllipticCurveData { name: name.into(), curve, generator, rank_note })
    }

    pub fn from_entry(cat: &Catalogue, e: &CurveEntry) -> Result<Self> {
        let field = cat.field(&e.field_name)?;
        let curve = Curve::new(e.a.to_element(&field)?, e.b.to_element(&field)?)?;
        let g = curve.point(e.generator.x.to_element(&field)?, e.generator.y.to_element(&field)?)?;
        Self::new(&e.name, curve, g, e.rank_note.clone())
    }

    pub fn field(&self) -> &Field {
        self.curve.field()
    }
}

/// R = m P with v_P(t(R)) >= depth_P at each listed prime.
#[derive(Clone, Debug)]
pub struct KernelPoint {
    pub multiplier: BigInt,
    pub point: Point,
    pub valuations: Vec<i64>,
}

pub fn kernel_point(data: &EllipticCurveData, primes: &[(PrimeIdeal, i64)], budget: u64) -> Result<KernelPoint> {
    let c = &data.curve;
    let mut m = BigInt::one();
    for (pr, depth) in primes {
        let ord = reduction_order(c, &data.generator, pr)?;
        let lift = if *depth > 1 { BigInt::from(pr.p).pow((*depth - 1) as u32) } else { BigInt::one() };
        m = m.lcm(&(BigInt::from(ord) * lift));
    }
    let mut r = c.mul(&m, &data.generator, budget)?;
    loop {
        let t = c.t(&r)?;
        let vals = primes.iter().map(|(pr, _)| element_valuation(&t, pr)).collect::<Result<Vec<_>>>()?;
        let short: Vec<usize> = (0..primes.len()).filter(|&i| vals[i] < primes[i].1).collect();
        if short.is_empty() {
            return Ok(KernelPoint { multiplier: m, point: r, valuations: vals });
        }
        for i in short {
            let (pr, _) = &primes[i];
            let f = if vals[i] >= 1 { BigInt::from(pr.p) } else { BigInt::from(reduction_order(c, &r, pr)?) };
            r = c.mul(&f, &r, budget)?;
            m *= f;
        }
    }
}

fn modulus_primes(data: &EllipticCurveData, modulus: &Ideal) -> Result<Vec<(PrimeIdeal, u32)>> {
    if !modulus.field().same(data.field()) {
        return Err(Error::ParentMismatch(data.field().name().into(), modulus.field().name().into()));
    }
    let fac = factor(modulus)?.factors;
    for (pr, _) in &fac {
        data.curve.check_good_reduction(pr)?;
    }
    Ok(fac)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PrimeCertificate {
    pub p: u64,
    pub residue_degree: u32,
    pub exponent: u32,
    pub v_t_r: i64,
    pub v_difference: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Certificate {
    pub k: i64,
    pub modulus: Vec<Vec<String>>,
    pub multiplier: String,
    pub primes: Vec<PrimeCertificate>,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct Approximation {
    pub s: NFElement,
    pub r: Point,
    pub certificate: Certificate,
}

/// modulus | num(s - k), exactly.
pub fn verify_congruence(s: &NFElement, k: &NFElement, modulus: &Ideal) -> Result<bool> {
    let d = s - k;
    if d.is_zero() {
        return Ok(true);
    }
    modulus.divides(&num(&d)?)
}

/// s in S with s = k (mod I), deepening R until the check passes.
pub fn approximate(data: &EllipticCurveData, k: i64, modulus: &Ideal, budget: u64) -> Result<Approximation> {
    if k == 0 {
        return Err(Error::InvalidInstance("k = 0 is covered by numerator_witness".into()));
    }
    let fac = modulus_primes(data, modulus)?;
    let c = &data.curve;
    let kk = NFElement::from_int(data.field(), k);
    let mut depths: Vec<(PrimeIdeal, i64)> = fac.iter().map(|(p, _)| (p.clone(), 1)).collect();
    loop {
        let kp = kernel_point(data, &depths, budget)?;
        let kr = c.mul(&BigInt::from(k), &kp.point, budget)?;
        let s = c.t(&kr)?.div(&c.t(&kp.point)?)?;
        let diff = &s - &kk;
        let mut primes = Vec::new();
        let mut deeper = false;
        for (i, (pr, e)) in fac.iter().enumerate() {
            let vd = if diff.is_zero() { None } else { Some(element_valuation(&diff, pr)?) };
            if let Some(v) = vd {
                if v < 1 {
                    return Err(Error::InvalidInstance(format!(
                        "t(kR)/t(R) - k has valuation {v} at a prime above {} although v(t(R)) = {}",
                        pr.p, kp.valuations[i]
                    )));
                }
                if v < *e as i64 {
                    depths[i].1 += 1;
                    deeper = true;
                }
            }
            primes.push(PrimeCertificate {
                p: pr.p,
                residue_degree: pr.f,
                exponent: *e,
                v_t_r: kp.valuations[i],
                v_difference: vd,
            });
        }
        let verified = verify_congruence(&s, &kk, modulus)?;
        if verified {
            let certificate = Certificate {
                k,
                modulus: modulus.to_json().hnf_rows,
                multiplier: kp.multiplier.to_string(),
                primes,
                verified,
            };
            return Ok(Approximation { s, r: kp.point, certificate });
        }
        if !deeper {
            // valuations say yes but the ideal check disagrees: deepen everything
            for d in depths.iter_mut() {
                d.1 += 1;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct NumeratorWitness {
    pub s: NFElement,
    pub q_multiplier: BigInt,
    pub r_multiplier: BigInt,
}

/// s = t(Q)/t(R) with (beta) | num(s). R is the generator and Q a kernel point
/// with v(t(Q)) >= v(beta) + v(t(R)) at each prime of beta.
pub fn numerator_witness(data: &EllipticCurveData, beta: &NFElement, budget: u64) -> Result<NumeratorWitness> {
    if beta.is_zero() {
        return Err(Error::ZeroElement);
    }
    let bi = Ideal::principal(beta)?;
    let c = &data.curve;
    let g = &data.generator;
    let tg = c.t(g)?;
    if bi.is_unit() {
        let s = c.t(&c.double(g))?.div(&tg)?;
        return Ok(NumeratorWitness { s, q_multiplier: BigInt::from(2), r_multiplier: BigInt::one() });
    }
    let fac = modulus_primes(data, &bi)?;
    let mut depths = Vec::new();
    for (pr, e) in &fac {
        let vt = element_valuation(&tg, pr)?;
        depths.push((pr.clone(), (*e as i64 + vt).max(1)));
    }
    loop {
        let kp = kernel_point(data, &depths, budget)?;
        let s = c.t(&kp.point)?.div(&tg)?;
        if bi.divides(&num(&s)?)? {
            return Ok(NumeratorWitness { s, q_multiplier: kp.multiplier, r_multiplier: BigInt::one() });
        }
        for d in depths.iter_mut() {
            d.1 += 1;
        }
    }
}

/// Distinct coordinate ratios x, y, x/y, y/x of mP for m = 1..count.
pub fn t_set(data: &EllipticCurveData, count: u32) -> Vec<NFElement> {
    let c = &data.curve;
    let mut out: Vec<NFElement> = Vec::new();
    let mut q = Point::Infinity;
    for _ in 0..count {
        q = c.add(&q, &data.generator);
        if let Point::Affine(x, y) = &q {
            let mut cand = vec![x.clone(), y.clone()];
            if let Ok(r) = x.div(y) {
                cand.push(r);
            }
            if let Ok(r) = y.div(x) {
                cand.push(r);
            }
            for v in cand {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// E(K) as a union of cosets rep + r E(L), with a bounded division-point search.
#[derive(Clone, Debug)]
pub struct CosetSets {
    pub curve_l: Curve,
    pub reps: Vec<Point>,
    pub r: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member { rep: usize, division_point: Point },
    Inconclusive,
}

#[derive(Clone, Copy, Debug)]
pub struct DivisionSearch {
    pub coord_bound: i64,
    pub max_denominator: i64,
}

impl Default for DivisionSearch {
    fn default() -> Self {
        DivisionSearch { coord_bound: 6, max_denominator: 3 }
    }
}

pub fn coset_sets(data: &EllipticCurveData, ext: &FieldExtension, reps: Vec<Point>, r: u32) -> Result<CosetSets> {
    if r == 0 {
        return Err(Error::InvalidInstance("coset index r must be positive".into()));
    }
    let curve_l = data.curve.base_change(ext)?;
    for p in &reps {
        if !curve_l.contains(p) {
            return Err(Error::NotOnCurve);
        }
    }
    Ok(CosetSets { curve_l, reps, r })
}

impl CosetSets {
    pub fn membership(&self, q: &Point, search: DivisionSearch) -> Result<Membership> {
        let c = &self.curve_l;
        if !c.contains(q) {
            return Err(Error::NotOnCurve);
        }
        let rr = BigInt::from(self.r);
        let targets: Vec<Point> = self.reps.iter().map(|rep| c.add(q, &c.neg(rep))).collect();
        for (i, d) in targets.iter().enumerate() {
            if self.r == 1 || d.is_infinity() {
                let w = if self.r == 1 { d.clone() } else { Point::Infinity };
                return Ok(Membership::Member { rep: i, division_point: w });
            }
        }
        let f = c.field();
        let dim = f.degree();
        let side = (2 * search.coord_bound + 1) as usize;
        let total = side.pow(dim as u32);
        for den in 1..=search.max_denominator {
            let scale = BigRational::new(BigInt::one(), BigInt::from(den * den));
            for idx in 0..total {
                let mut t = idx;
                let v: Vec<BigInt> = (0..dim)
                    .map(|_| {
                        let k = (t % side) as i64 - search.coord_bound;
                        t /= side;
                        BigInt::from(k)
                    })
                    .collect();
                let x = NFElement::from_ib(f, &v).scale(&scale);
                if den > 1 && x.denominator() != BigInt::from(den * den) {
                    continue;
                }
                let rhs = c.rhs(&x);
                let ys = if rhs.is_zero() {
                    vec![NFElement::zero(f)]
                } else {
                    roots_in_field(&[-&rhs, NFElement::zero(f), NFElement::one(f)])?
                };
                for y in ys {
                    let cand = Point::Affine(x.clone(), y);
                    let img = c.mul(&rr, &cand, DEFAULT_DIGIT_BUDGET)?;
                    if let Some(i) = targets.iter().position(|d| *d == img) {
                        return Ok(Membership::Member { rep: i, division_point: cand });
                    }
                }
            }
        }
        Ok(Membership::Inconclusive)
    }
}

/// Serializable form of a point.
pub fn point_json(p: &Point) -> serde_json::Value {
    match p {
        Point::Infinity => serde_json::json!("infinity"),
        Point::Affine(x, y) => serde_json::json!({
            "x": KValue::from_element(x),
            "y": KValue::from_element(y),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::rat;
    use crate::catalogue::builtin;

    fn mordell() -> EllipticCurveData {
        let cat = Catalogue::with_builtins();
        EllipticCurveData::from_entry(&cat, cat.curve("mordell_m2").unwrap()).unwrap()
    }

    fn q(n: i64, d: i64) -> NFElement {
        NFElement::from_rational(&builtin("Q").unwrap(), rat(n, d))
    }

    fn prime(p: u64) -> PrimeIdeal {
        primes_above(&builtin("Q").unwrap(), p).unwrap().remove(0)
    }

    #[test]
    fn group_law() {
        let d = mordell();
        let c = &d.curve;
        let p = &d.generator;
        let p2 = c.double(p);
        assert_eq!(p2, Point::Affine(q(129, 100), q(-383, 1000)));
        assert_eq!(c.add(p, &Point::Infinity), *p);
        assert!(c.add(p, &c.neg(p)).is_infinity());
        let six = c.mul_i64(6, p);
        assert_eq!(six, c.add(&c.add(&p2, &p2), &p2));
        let p3 = c.mul_i64(3, p);
        assert_eq!(c.add(&c.add(p, &p2), &p3), c.add(p, &c.add(&p2, &p3)));
        assert_eq!(c.mul_i64(-2, p), c.neg(&p2));
        assert!(c.contains(&six));
    }

    #[test]
    fn uniformizer_values() {
        let d = mordell();
        let c = &d.curve;
        let p2 = c.double(&d.generator);
        let t = c.t(&p2).unwrap();
        assert_eq!(t, q(1290, 383));
        assert_eq!(element_valuation(&t, &prime(5)).unwrap(), 1);
        assert_eq!(c.t(&c.neg(&p2)).unwrap(), -&t);
        let two_torsion = Curve::new(q(0, 1), q(-8, 1)).unwrap().point(q(2, 1), q(0, 1)).unwrap();
        assert!(Curve::new(q(0, 1), q(-8, 1)).unwrap().t(&two_torsion).is_err());
    }

    #[test]
    fn reduction_orders() {
        let d = mordell();
        let r5 = ReducedCurve::new(&d.curve, &prime(5)).unwrap();
        assert_eq!(r5.count_points(), 6);
        assert_eq!(reduction_order(&d.curve, &d.generator, &prime(5)).unwrap(), 2);
        let r7 = ReducedCurve::new(&d.curve, &prime(7)).unwrap();
        let n7 = r7.count_points();
        // brute force: pairs (x, y) in F_7^2
        let brute = 1 + (0..7i64).flat_map(|x| (0..7i64).map(move |y| (x, y))).filter(|(x, y)| (y * y - x * x * x + 2).rem_euclid(7) == 0).count() as u64;
        assert_eq!(n7, brute);
        let o7 = reduction_order(&d.curve, &d.generator, &prime(7)).unwrap();
        assert_eq!(n7 % o7, 0);
        assert!(ReducedCurve::new(&d.curve, &prime(3)).is_err());
    }

    #[test]
    fn kernel_points() {
        let d = mordell();
        let kp = kernel_point(&d, &[(prime(5), 1)], DEFAULT_DIGIT_BUDGET).unwrap();
        assert_eq!(kp.multiplier, BigInt::from(2));
        assert_eq!(kp.valuations, vec![1]);
        let kp = kernel_point(&d, &[], DEFAULT_DIGIT_BUDGET).unwrap();
        assert_eq!(kp.point, d.generator);
        let kp = kernel_point(&d, &[(prime(5), 1), (prime(7), 1)], DEFAULT_DIGIT_BUDGET).unwrap();
        assert!(kp.valuations.iter().all(|&v| v >= 1));
        // multiplying by p inside the kernel raises v(t) by at least one
        let r = kernel_point(&d, &[(prime(5), 1)], DEFAULT_DIGIT_BUDGET).unwrap().point;
        let r5 = d.curve.mul_i64(5, &r);
        let v0 = element_valuation(&d.curve.t(&r).unwrap(), &prime(5)).unwrap();
        let v1 = element_valuation(&d.curve.t(&r5).unwrap(), &prime(5)).unwrap();
        assert!(v1 > v0);
    }

    #[test]
    fn approximations() {
        let d = mordell();
        let z = builtin("Q").unwrap();
        for (k, m) in [(1, 5), (2, 5), (2, 25), (3, 35)] {
            let modulus = Ideal::from_int(&z, m).unwrap();
            let a = approximate(&d, k, &modulus, DEFAULT_DIGIT_BUDGET).unwrap();
            assert!(a.certificate.verified);
            assert!(verify_congruence(&a.s, &NFElement::from_int(&z, k), &modulus).unwrap());
        }
        let one = approximate(&d, 1, &Ideal::from_int(&z, 5).unwrap(), DEFAULT_DIGIT_BUDGET).unwrap();
        assert!(one.s.is_one());
    }

    #[test]
    fn numerator_witnesses() {
        let d = mordell();
        let z = builtin("Q").unwrap();
        for b in [1, 5, 25, 35] {
            let beta = NFElement::from_int(&z, b);
            let w = numerator_witness(&d, &beta, DEFAULT_DIGIT_BUDGET).unwrap();
            assert!(Ideal::principal(&beta).unwrap().divides(&num(&w.s).unwrap()).unwrap());
        }
    }

    #[test]
    fn cosets() {
        let d = mordell();
        let g = builtin("gauss").unwrap();
        let ext = FieldExtension::over_q(&g).unwrap();
        let cs = coset_sets(&d, &ext, vec![Point::Infinity], 1).unwrap();
        let pl = d.curve.base_change_point(&ext, &d.generator).unwrap();
        assert!(matches!(cs.membership(&pl, DivisionSearch::default()).unwrap(), Membership::Member { .. }));
        let cs2 = coset_sets(&d, &ext, vec![Point::Infinity, pl.clone()], 2).unwrap();
        let target = cs2.curve_l.add(&cs2.curve_l.mul_i64(2, &pl), &pl);
        match cs2.membership(&target, DivisionSearch::default()).unwrap() {
            Membership::Member { rep, division_point } => {
                assert_eq!(cs2.curve_l.add(&cs2.curve_l.mul_i64(2, &division_point), &cs2.reps[rep]), target);
            }
            Membership::Inconclusive => panic!("constructed member not found"),
        }
    }

    #[test]
    fn torsion_and_singular() {
        assert!(matches!(Curve::new(q(-3, 1), q(2, 1)), Err(Error::SingularCurve)));
        // (2, 3) on y^2 = x^3 + 1 has order 6
        let c = Curve::new(q(0, 1), q(1, 1)).unwrap();
        let p = c.point(q(2, 1), q(3, 1)).unwrap();
        assert!(matches!(EllipticCurveData::new("t", c, p, None), Err(Error::TorsionGenerator(6))));
    }
}
