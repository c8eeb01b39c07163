//! Number fields `K = Q[x]/(f)` with a verified integral basis, and exact
//! element arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::fp::{self, FpPoly};
use crate::arith::int::{factor_bigint, fmt_rat, is_prime_u64, lcm_all, rat_int};
use crate::arith::matrix::{self, QMat};
use crate::arith::poly::{discriminant, QPoly};
use crate::arith::roots::{self, Isolation};
use crate::error::{Error, Result};

pub type Field = Arc<NumberField>;

/// Bits used for the embeddings computed at construction.
const BASE_BITS: u32 = 128;

#[derive(Debug)]
pub struct NumberField {
    name: String,
    poly: Vec<BigInt>,
    degree: usize,
    basis: QMat,
    basis_inv: QMat,
    disc: BigInt,
    poly_disc: BigInt,
    index: BigInt,
    // theta^(d+k) in the power basis, k = 0..d-1
    xpow: Vec<Vec<BigInt>>,
    // b_i * b_j in integral-basis coordinates
    table: Vec<Vec<Vec<BigInt>>>,
    one_ib: Vec<BigInt>,
    iso: Isolation,
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        self.poly == o.poly && self.basis == o.basis
    }
}

impl Eq for NumberField {}

fn poly_string(f: &[BigInt]) -> String {
    QPoly::from_ints(f).to_string()
}

/// Degrees k in 1..d for which a degree-k factor is not excluded by the
/// factorisation patterns of f modulo small primes.
fn possible_factor_degrees(f: &[BigInt], pdisc: &BigInt) -> Vec<usize> {
    let d = f.len() - 1;
    let mut possible: Vec<bool> = (0..=d).map(|k| k > 0 && k < d).collect();
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 30 && possible.iter().any(|&b| b) && p < 2000 {
        if is_prime_u64(p) && !(pdisc % BigInt::from(p)).is_zero() {
            tried += 1;
            let bp = BigInt::from(p);
            let fp = FpPoly::new(f.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect(), p);
            let mut sums = vec![false; d + 1];
            sums[0] = true;
            for (g, e) in fp::factor(&fp, p) {
                for _ in 0..e {
                    let gd = g.degree();
                    for s in (gd..=d).rev() {
                        if sums[s - gd] {
                            sums[s] = true;
                        }
                    }
                }
            }
            for k in 0..=d {
                possible[k] &= sums[k];
            }
        }
        p += 1;
    }
    (0..=d).filter(|&k| possible[k]).collect()
}

/// Advances a strictly increasing index tuple over 0..n; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Irreducibility over Q for a monic squarefree integer polynomial. A factor
/// of degree k would be a product of k complex roots with integer
/// coefficients; candidate subsets (after the mod-p degree sieve) are tested
/// by exact division.
fn check_irreducible(f: &[BigInt], iso: &Isolation, pdisc: &BigInt) -> Result<()> {
    let d = f.len() - 1;
    let degrees = possible_factor_degrees(f, pdisc);
    if degrees.is_empty() {
        return Ok(());
    }
    let roots: Vec<Complex64> = iso.roots.iter().map(|r| r.to_c64()).collect();
    let big = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let fq = QPoly::from_ints(f);
    for &k in degrees.iter().filter(|&&k| 2 * k <= d) {
        let bound = 2f64.powi(k as i32) * (big + 1.0).powi(k as i32) * 1e-13;
        if bound > 0.05 {
            return Err(Error::Resource(format!("roots of {} too large for the irreducibility test", poly_string(f))));
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut prod = vec![Complex64::new(1.0, 0.0)];
            for &i in &idx {
                let mut next = vec![Complex64::zero(); prod.len() + 1];
                for (j, c) in prod.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= c * roots[i];
                }
                prod = next;
            }
            let near: Option<Vec<BigInt>> = prod
                .iter()
                .map(|c| {
                    let r = c.re.round();
                    ((c.re - r).abs() < 0.25 && c.im.abs() < 0.25).then(|| roots::round_f64(r)).flatten()
                })
                .collect();
            if let Some(g) = near {
                let gq = QPoly::from_ints(&g);
                if fq.div_rem(&gq).1.is_zero() {
                    return Err(Error::Reducible(gq.to_string()));
                }
            }
            if !next_combination(&mut idx, d) {
                break;
            }
        }
    }
    Ok(())
}

/// Characteristic polynomial of a square rational matrix (Faddeev-LeVerrier),
/// ascending, monic.
pub fn charpoly(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.len();
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut m: QMat = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut mk = matrix::mat_mul(a, &m);
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        let am = matrix::mat_mul(a, &mk);
        let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / BigRational::from_integer(k.into());
        m = mk;
    }
    c
}

impl NumberField {
    /// Builds a field from a monic irreducible polynomial (ascending) and an
    /// integral basis given as power-basis rows. Without a basis the built-in
    /// catalogue is consulted.
    pub fn new(name: Option<&str>, poly: Vec<BigInt>, basis: Option<QMat>) -> Result<Field> {
        let mut poly = poly;
        while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
            poly.pop();
        }
        if poly.len() < 2 || !poly.last().unwrap().is_one() {
            return Err(Error::NotMonic(poly_string(&poly)));
        }
        let fq = QPoly::from_ints(&poly);
        let g = fq.gcd(&fq.derivative());
        if g.degree() != Some(0) {
            return Err(Error::Reducible(g.to_string()));
        }
        let pdisc = discriminant(&poly);
        let iso = roots::isolate(&poly, BASE_BITS)?;
        check_irreducible(&poly, &iso, &pdisc)?;

        let (basis, cat_name) = match basis {
            Some(b) => (b, None),
            None => {
                let (b, n) = crate::catalogue::builtin_basis(&poly)?;
                (b, Some(n))
            }
        };
        let name = name.map(str::to_string).or(cat_name).unwrap_or_else(|| poly_string(&poly));
        Self::with_basis(name, poly, basis, pdisc, iso).map(Arc::new)
    }

    fn with_basis(name: String, poly: Vec<BigInt>, basis: QMat, pdisc: BigInt, iso: Isolation) -> Result<NumberField> {
        let d = poly.len() - 1;
        if basis.len() != d || basis.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidBasis(format!("expected a {d}x{d} matrix")));
        }
        let basis_inv = matrix::inverse(&basis).ok_or_else(|| Error::InvalidBasis("singular matrix".into()))?;
        let mut xpow = Vec::with_capacity(d);
        // theta^d = -sum f_i theta^i
        let mut cur: Vec<BigInt> = poly[..d].iter().map(|c| -c).collect();
        for _ in 0..d {
            xpow.push(cur.clone());
            // multiply by theta
            let top = cur[d - 1].clone();
            let mut next = vec![BigInt::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..d {
                next[i] -= &top * &poly[i];
            }
            cur = next;
        }
        let mut field = NumberField {
            name,
            poly,
            degree: d,
            basis,
            basis_inv,
            disc: BigInt::zero(),
            poly_disc: pdisc,
            index: BigInt::zero(),
            xpow,
            table: Vec::new(),
            one_ib: Vec::new(),
            iso,
        };
        let to_int = |v: Vec<BigRational>, what: &str| -> Result<Vec<BigInt>> {
            v.iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::InvalidBasis(format!("{what} is not in the lattice")))
        };
        let mut one = vec![BigRational::zero(); d];
        one[0] = BigRational::one();
        field.one_ib = to_int(matrix::vec_mat(&one, &field.basis_inv), "1")?;
        if d > 1 {
            let mut th = vec![BigRational::zero(); d];
            th[1] = BigRational::one();
            to_int(matrix::vec_mat(&th, &field.basis_inv), "the generator")?;
        }
        let mut table = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                if j < i {
                    table[i][j] = table[j][i].clone();
                    continue;
                }
                let prod = field.mul_power(&field.basis[i], &field.basis[j]);
                table[i][j] = to_int(matrix::vec_mat(&prod, &field.basis_inv), &format!("b{i}*b{j}"))?;
            }
        }
        field.table = table;
        // discriminant from the trace form
        let traces: Vec<BigRational> = (0..d)
            .map(|k| {
                let e = NFElementRaw(&field, &field.basis[k]);
                e.trace()
            })
            .collect();
        let mut gram = vec![vec![BigRational::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut t = BigRational::zero();
                for (k, c) in field.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        t += &traces[k] * BigRational::from_integer(c.clone());
                    }
                }
                gram[i][j] = t;
            }
        }
        let disc = matrix::det(&gram);
        if !disc.is_integer() || disc.is_zero() {
            return Err(Error::InvalidBasis("trace form has non-integral or zero determinant".into()));
        }
        field.disc = disc.to_integer();
        let (q, r) = field.poly_disc.div_rem(&field.disc);
        let idx = q.abs().sqrt();
        if !r.is_zero() || &idx * &idx != q.abs() || q.is_negative() {
            return Err(Error::InvalidBasis("disc(f)/disc(K) is not a square".into()));
        }
        field.index = idx;
        field.check_maximal()?;
        Ok(field)
    }

    /// For each prime p with p^2 | disc, search (sum c_i b_i)/p with
    /// 0 <= c_i < p for a nonzero integral element, which would show the
    /// lattice is not the maximal order. Skipped where p^d exceeds 10^5.
    fn check_maximal(&self) -> Result<()> {
        let Ok(fs) = factor_bigint(&self.disc) else { return Ok(()) };
        let d = self.degree;
        for (p, e) in fs {
            if e < 2 || (p as f64).powi(d as i32) > 1e5 {
                continue;
            }
            let total = p.pow(d as u32);
            for n in 1..total {
                let mut m = n;
                let coords: Vec<BigRational> = (0..d)
                    .map(|_| {
                        let c = m % p;
                        m /= p;
                        BigRational::new(c.into(), p.into())
                    })
                    .collect();
                let pc = matrix::vec_mat(&coords, &self.basis);
                let cp = charpoly(&self.mult_matrix_power(&pc));
                if cp.iter().all(|c| c.is_integer()) {
                    return Err(Error::InvalidBasis(format!(
                        "lattice is not maximal at {p}: ({}) / {p} is integral",
                        coords.iter().map(|c| fmt_rat(&(c * BigRational::from_integer(p.into())))).collect::<Vec<_>>().join(",")
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }
    pub fn basis(&self) -> &QMat {
        &self.basis
    }
    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }
    pub fn poly_discriminant(&self) -> &BigInt {
        &self.poly_disc
    }
    /// [O_K : Z[theta]]
    pub fn index(&self) -> &BigInt {
        &self.index
    }
    pub fn one_ib(&self) -> &[BigInt] {
        &self.one_ib
    }
    /// Signature (r1, r2).
    pub fn signature(&self) -> (usize, usize) {
        (self.iso.r1, self.iso.r2)
    }
    pub fn is_totally_real(&self) -> bool {
        self.iso.r2 == 0
    }
    pub fn same(&self, o: &NumberField) -> bool {
        std::ptr::eq(self, o) || self == o
    }

    fn reduce_power(&self, c: &[BigRational]) -> Vec<BigRational> {
        let d = self.degree;
        let mut out: Vec<BigRational> = c.iter().take(d).cloned().collect();
        out.resize(d, BigRational::zero());
        for (k, x) in c.iter().enumerate().skip(d) {
            if x.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.xpow[k - d]) {
                if !r.is_zero() {
                    *o += x * BigRational::from_integer(r.clone());
                }
            }
        }
        out
    }

    fn mul_power(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let d = self.degree;
        let mut c = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        self.reduce_power(&c)
    }

    /// Rows are theta^i * a, in the power basis.
    fn mult_matrix_power(&self, a: &[BigRational]) -> QMat {
        let d = self.degree;
        let mut rows = Vec::with_capacity(d);
        let mut cur = a.to_vec();
        for _ in 0..d {
            rows.push(cur.clone());
            let mut shifted = vec![BigRational::zero()];
            shifted.extend(cur.iter().cloned());
            cur = self.reduce_power(&shifted);
        }
        rows
    }

    /// Product of two elements given by integral-basis coordinates.
    pub fn mul_ib(&self, u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree;
        let mut out = vec![BigInt::zero(); d];
        for (i, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in v.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o += &xy * t;
                    }
                }
            }
        }
        out
    }

    /// Structure constants: b_i * b_j = sum_k table[i][j][k] b_k.
    pub fn structure_constants(&self) -> &Vec<Vec<Vec<BigInt>>> {
        &self.table
    }

    /// Certified embeddings at the requested precision (at least 32 bits).
    pub fn embeddings(&self, bits: u32) -> Result<EmbeddingSet> {
        let bits = bits.max(32);
        let iso = if bits <= BASE_BITS { self.iso.clone() } else { roots::isolate(&self.poly, bits)? };
        Ok(EmbeddingSet { r1: iso.r1, r2: iso.r2, roots: iso })
    }

    /// f64 values of the generator under each embedding, in canonical order.
    pub fn root_values(&self) -> Vec<Complex64> {
        self.iso.roots.iter().map(|r| r.to_c64()).collect()
    }
}

// Borrowed element used during construction, before the field is shared.
struct NFElementRaw<'a>(&'a NumberField, &'a [BigRational]);

impl NFElementRaw<'_> {
    fn trace(&self) -> BigRational {
        let m = self.0.mult_matrix_power(self.1);
        (0..self.0.degree).map(|i| m[i][i].clone()).sum()
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddingSet {
    pub roots: Isolation,
    pub r1: usize,
    pub r2: usize,
}

/// An element of a number field, stored in the power basis.
#[derive(Clone)]
pub struct NFElement {
    field: Field,
    c: Vec<BigRational>,
}

impl PartialEq for NFElement {
    fn eq(&self, o: &Self) -> bool {
        self.field.same(&o.field) && self.c == o.c
    }
}

impl Eq for NFElement {}

impl fmt::Debug for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field.name, self.power_strings().join(","))
    }
}

impl fmt::Display for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = QPoly::new(self.c.clone());
        write!(f, "{}", p.to_string().replace('x', "t"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl NFElement {
    pub fn from_power(field: &Field, mut c: Vec<BigRational>) -> Self {
        c.resize(field.degree, BigRational::zero());
        NFElement { field: field.clone(), c }
    }

    pub fn from_ib_rat(field: &Field, ib: &[BigRational]) -> Self {
        let c = matrix::vec_mat(ib, &field.basis);
        NFElement { field: field.clone(), c }
    }

    pub fn from_ib(field: &Field, ib: &[BigInt]) -> Self {
        let q: Vec<BigRational> = ib.iter().cloned().map(BigRational::from_integer).collect();
        Self::from_ib_rat(field, &q)
    }

    pub fn from_rational(field: &Field, q: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); field.degree];
        c[0] = q;
        NFElement { field: field.clone(), c }
    }

    pub fn from_int(field: &Field, n: impl Into<BigInt>) -> Self {
        Self::from_rational(field, rat_int(n))
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    /// The generator theta (a root of the defining polynomial).
    pub fn theta(field: &Field) -> Self {
        let mut c = vec![BigRational::zero(); field.degree];
        if field.degree == 1 {
            // x - c0 = 0 gives theta = -c0
            c[0] = BigRational::from_integer(-field.poly[0].clone());
        } else {
            c[1] = BigRational::one();
        }
        NFElement { field: field.clone(), c }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn power_coords(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Integral-basis coordinates.
    pub fn ib_coords(&self) -> Vec<BigRational> {
        matrix::vec_mat(&self.c, &self.field.basis_inv)
    }

    /// Integral-basis coordinates if the element is integral.
    pub fn ib_int(&self) -> Option<Vec<BigInt>> {
        self.ib_coords().into_iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.ib_coords().iter().all(|x| x.is_integer())
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.c[1..].iter().all(Zero::is_zero).then(|| self.c[0].clone())
    }

    /// Least positive integer m with m * self integral.
    pub fn denominator(&self) -> BigInt {
        let ib = self.ib_coords();
        lcm_all(ib.iter().map(|x| x.denom()))
    }

    pub fn ib_strings(&self) -> Vec<String> {
        self.ib_coords().iter().map(fmt_rat).collect()
    }

    pub fn power_strings(&self) -> Vec<String> {
        self.c.iter().map(fmt_rat).collect()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.field.same(&o.field) {
            Ok(())
        } else {
            Err(Error::ParentMismatch(self.field.name.clone(), o.field.name.clone()))
        }
    }

    /// Checked arithmetic.
    pub fn arith(&self, o: &Self, op: ArithOp) -> Result<Self> {
        self.check(o)?;
        Ok(match op {
            ArithOp::Add => self + o,
            ArithOp::Sub => self - o,
            ArithOp::Mul => self * o,
            ArithOp::Div => self.div(o)?,
        })
    }

    /// Multiplication matrix: row i is b_i-free, namely theta^i * self in the power basis.
    pub fn mult_matrix(&self) -> QMat {
        self.field.mult_matrix_power(&self.c)
    }

    pub fn norm(&self) -> BigRational {
        matrix::det(&self.mult_matrix())
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mult_matrix();
        (0..self.field.degree).map(|i| m[i][i].clone()).sum()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut one = vec![BigRational::zero(); self.field.degree];
        one[0] = BigRational::one();
        let x = matrix::solve_left(&self.mult_matrix(), &one).ok_or(Error::DivisionByZero)?;
        Ok(NFElement { field: self.field.clone(), c: x })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self * &o.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = NFElement::one(&self.field);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        r
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        NFElement { field: self.field.clone(), c: self.c.iter().map(|x| x * q).collect() }
    }

    /// Characteristic polynomial over Q (ascending, monic).
    pub fn charpoly(&self) -> Vec<BigRational> {
        charpoly(&self.mult_matrix())
    }

    /// Minimal polynomial over Q (ascending, monic), from the first linear
    /// dependence among powers.
    pub fn minpoly(&self) -> Vec<BigRational> {
        let d = self.field.degree;
        let mut powers: Vec<Vec<BigRational>> = vec![NFElement::one(&self.field).c];
        for k in 1..=d {
            let next = &NFElement { field: self.field.clone(), c: powers[k - 1].clone() } * self;
            powers.push(next.c);
            // columns are the powers 0..=k
            let cols = matrix::transpose(&powers);
            let ns = matrix::nullspace(&cols);
            if let Some(v) = ns.first() {
                let lead = v[k].clone();
                if !lead.is_zero() {
                    return v.iter().map(|x| x / &lead).collect();
                }
            }
        }
        unreachable!("degree bound")
    }

    /// Value under the embedding theta -> root, in double precision.
    pub fn embed(&self, root: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::zero(), |acc, x| acc * root + x.to_f64().unwrap_or(f64::NAN))
    }

    /// Values under all embeddings in canonical order.
    pub fn embed_all(&self) -> Vec<Complex64> {
        self.field.root_values().into_iter().map(|r| self.embed(r)).collect()
    }
}

impl Add for &NFElement {
    type Output = NFElement;
    fn add(self, o: &NFElement) -> NFElement {
        debug_assert!(self.field.same(&o.field));
        NFElement { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &NFElement {
    type Output = NFElement;
    fn sub(self, o: &NFElement) -> NFElement {
        debug_assert!(self.field.same(&o.field));
        NFElement { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &NFElement {
    type Output = NFElement;
    fn mul(self, o: &NFElement) -> NFElement {
        debug_assert!(self.field.same(&o.field));
        NFElement { field: self.field.clone(), c: self.field.mul_power(&self.c, &o.c) }
    }
}

impl Neg for &NFElement {
    type Output = NFElement;
    fn neg(self) -> NFElement {
        NFElement { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for NFElement {
            type Output = NFElement;
            fn $m(self, o: NFElement) -> NFElement {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for NFElement {
    type Output = NFElement;
    fn neg(self) -> NFElement {
        -&self
    }
}

/// Polynomials with coefficients in K, ascending.
pub mod kpoly {
    use super::*;

    pub fn trim(mut g: Vec<NFElement>) -> Vec<NFElement> {
        while g.last().is_some_and(|c| c.is_zero()) {
            g.pop();
        }
        g
    }

    pub fn eval(g: &[NFElement], x: &NFElement) -> NFElement {
        g.iter().rev().fold(NFElement::zero(x.field()), |acc, c| &(&acc * x) + c)
    }

    pub fn derivative(g: &[NFElement]) -> Vec<NFElement> {
        trim(g.iter().enumerate().skip(1).map(|(i, c)| c.scale(&rat_int(i as i64))).collect())
    }

    pub fn div_rem(a: &[NFElement], b: &[NFElement]) -> (Vec<NFElement>, Vec<NFElement>) {
        let b = trim(b.to_vec());
        let db = b.len() - 1;
        let inv = b[db].inverse().expect("nonzero leading coefficient");
        let mut r = trim(a.to_vec());
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let field = b[0].field().clone();
        let mut q = vec![NFElement::zero(&field); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = &r[k + db] * &inv;
            if !c.is_zero() {
                for (j, bc) in b.iter().enumerate() {
                    r[k + j] = &r[k + j] - &(&c * bc);
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn monic(g: &[NFElement]) -> Vec<NFElement> {
        let inv = g.last().unwrap().inverse().expect("nonzero");
        g.iter().map(|c| c * &inv).collect()
    }

    pub fn gcd(a: &[NFElement], b: &[NFElement]) -> Vec<NFElement> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = div_rem(&a, &b).1;
            a = b;
            b = r;
        }
        monic(&a)
    }
}

/// All roots in K of a polynomial with coefficients in K (ascending).
///
/// The polynomial is made squarefree, monic and integral; a root then has
/// integer integral-basis coordinates, which are recovered by matching
/// numerical roots across one embedding per conjugate pair, rounding, and
/// confirming exactly.
pub fn roots_in_field(g: &[NFElement]) -> Result<Vec<NFElement>> {
    let g = kpoly::trim(g.to_vec());
    if g.len() <= 1 {
        return Ok(Vec::new());
    }
    let field = g[0].field().clone();
    let d = field.degree;
    let dg = kpoly::derivative(&g);
    let h = kpoly::gcd(&g, &dg);
    let g = kpoly::monic(&kpoly::div_rem(&g, &h).0);
    let m = g.len() - 1;
    let dens: Vec<BigInt> = g.iter().map(|c| c.denominator()).collect();
    let den = lcm_all(&dens);
    let denq = BigRational::from_integer(den.clone());
    // g'(X) = den^m g(X / den)
    let gs: Vec<NFElement> = g.iter().enumerate().map(|(i, c)| c.scale(&denq.pow((m - i) as i32))).collect();

    let rootv = field.root_values();
    let (r1, r2) = field.signature();
    let reps: Vec<usize> = (0..r1).chain((0..r2).map(|t| r1 + 2 * t)).collect();
    let bvals: Vec<Vec<Complex64>> = (0..d)
        .map(|k| NFElement::from_ib_rat(&field, &unit_vec(d, k)).embed_all())
        .collect();
    // real d x d system
    let mut a = Vec::with_capacity(d);
    for &j in &reps {
        a.push((0..d).map(|k| bvals[k][j].re).collect::<Vec<f64>>());
        if j >= r1 {
            a.push((0..d).map(|k| bvals[k][j].im).collect::<Vec<f64>>());
        }
    }
    let ainv = invert_f64(&a).ok_or_else(|| Error::Resource("embedding matrix is numerically singular".into()))?;

    let mut cands: Vec<Vec<Complex64>> = Vec::new();
    for &j in &reps {
        let coeffs: Vec<Complex64> = gs.iter().map(|c| c.embed(rootv[j])).collect();
        let mut rs = roots::aberth(&coeffs);
        if j < r1 {
            rs.retain(|z| z.im.abs() <= 1e-6 * (1.0 + z.norm()));
            for z in rs.iter_mut() {
                z.im = 0.0;
            }
        }
        cands.push(rs);
    }
    let total: f64 = cands.iter().map(|c| c.len() as f64).product();
    if total > 2e6 {
        return Err(Error::Resource(format!("{total} root combinations to match")));
    }
    let mut out: Vec<NFElement> = Vec::new();
    let mut choice = vec![0usize; reps.len()];
    if cands.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    loop {
        let mut v = Vec::with_capacity(d);
        for (t, &j) in reps.iter().enumerate() {
            let z = cands[t][choice[t]];
            v.push(z.re);
            if j >= r1 {
                v.push(z.im);
            }
        }
        let coords: Vec<f64> = ainv.iter().map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum()).collect();
        if coords.iter().all(|c| c.is_finite() && (c - c.round()).abs() < 0.2) {
            let ib: Option<Vec<BigInt>> = coords.iter().map(|c| roots::round_f64(*c)).collect();
            if let Some(ib) = ib {
                let beta = NFElement::from_ib(&field, &ib);
                if kpoly::eval(&gs, &beta).is_zero() {
                    let root = beta.scale(&denq.recip());
                    if !out.contains(&root) {
                        out.push(root);
                    }
                }
            }
        }
        // advance odometer
        let mut t = 0;
        loop {
            if t == choice.len() {
                out.sort_by(|a, b| a.c.cmp(&b.c));
                return Ok(out);
            }
            choice[t] += 1;
            if choice[t] < cands[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
        if out.len() == m {
            out.sort_by(|a, b| a.c.cmp(&b.c));
            return Ok(out);
        }
    }
}

fn unit_vec(d: usize, k: usize) -> Vec<BigRational> {
    (0..d).map(|i| if i == k { BigRational::one() } else { BigRational::zero() }).collect()
}

fn invert_f64(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().copied().chain((0..n).map(|j| if i == j { 1.0 } else { 0.0 })).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        let piv = m[c][c];
        for x in m[c].iter_mut() {
            *x /= piv;
        }
        for i in 0..n {
            if i != c {
                let f = m[i][c];
                if f != 0.0 {
                    let pr = m[c].clone();
                    for (x, y) in m[i].iter_mut().zip(pr) {
                        *x -= f * y;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A field automorphism, given by the image of the generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    image: NFElement,
}

impl Automorphism {
    pub fn new(image: NFElement) -> Result<Self> {
        let f: Vec<NFElement> =
            image.field().poly.iter().map(|c| NFElement::from_int(image.field(), c.clone())).collect();
        if !kpoly::eval(&f, &image).is_zero() {
            return Err(Error::InvalidEmbedding("image is not a root of the defining polynomial".into()));
        }
        Ok(Automorphism { image })
    }

    pub fn identity(field: &Field) -> Self {
        Automorphism { image: NFElement::theta(field) }
    }

    pub fn image_of_generator(&self) -> &NFElement {
        &self.image
    }

    pub fn field(&self) -> &Field {
        self.image.field()
    }

    pub fn apply(&self, a: &NFElement) -> NFElement {
        let f = self.field();
        if f.degree == 1 {
            return a.clone();
        }
        a.c.iter().rev().fold(NFElement::zero(f), |acc, x| &(&acc * &self.image) + &NFElement::from_rational(f, x.clone()))
    }

    /// self after other.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { image: self.apply(&other.image) }
    }

    pub fn is_identity(&self) -> bool {
        self.image == NFElement::theta(self.field())
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = self.compose(&cur);
            k += 1;
        }
        k
    }
}

/// Automorphisms of K: the roots of the defining polynomial lying in K.
/// K is Galois iff the list has `degree` entries. The identity comes first.
pub fn automorphisms(field: &Field) -> Result<Vec<Automorphism>> {
    let f: Vec<NFElement> = field.poly.iter().map(|c| NFElement::from_int(field, c.clone())).collect();
    let rs = roots_in_field(&f)?;
    let id = NFElement::theta(field);
    let mut out = vec![Automorphism::identity(field)];
    for r in rs {
        if r != id {
            out.push(Automorphism::new(r)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::rat;
    use crate::catalogue::builtin;

    #[test]
    fn rational_field_is_degree_one() {
        let q = builtin("Q").unwrap();
        assert_eq!(q.degree(), 1);
        assert_eq!(q.discriminant(), &BigInt::one());
        let a = NFElement::from_rational(&q, rat(3, 2));
        assert_eq!(a.norm(), rat(3, 2));
        assert!(NFElement::theta(&q).is_one());
    }

    #[test]
    fn gaussian_arithmetic() {
        let k = builtin("gauss").unwrap();
        let t = NFElement::theta(&k);
        let one = NFElement::one(&k);
        assert_eq!(&(&one + &t) * &(&one - &t), NFElement::from_int(&k, 2));
        let inv = (&one + &t).inverse().unwrap();
        assert_eq!(inv, (&one - &t).scale(&rat(1, 2)));
        assert_eq!((&one + &t).norm(), rat(2, 1));
        assert_eq!((&one + &t).trace(), rat(2, 1));
        assert_eq!(k.discriminant(), &BigInt::from(-4));
    }

    #[test]
    fn golden_ratio_field() {
        let k = builtin("sqrt5").unwrap();
        assert_eq!(k.discriminant(), &BigInt::from(5));
        let w = NFElement::from_ib(&k, &[0.into(), 1.into()]);
        assert_eq!(w.power_strings(), vec!["1/2", "1/2"]);
        let t = NFElement::theta(&k);
        assert_eq!(&w * &w, (&NFElement::from_int(&k, 3) + &t).scale(&rat(1, 2)));
        assert_eq!(w.norm(), rat(-1, 1));
    }

    #[test]
    fn rejects_bad_input() {
        let ints = |c: &[i64]| c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(matches!(NumberField::new(None, ints(&[-1, 0, 1]), None), Err(Error::Reducible(_))));
        assert!(matches!(NumberField::new(None, ints(&[4, 0, 0, 0, 1]), None), Err(Error::Reducible(_))));
        assert!(matches!(NumberField::new(None, ints(&[1, 0, 2]), None), Err(Error::NotMonic(_))));
        // power basis of x^2 - 5 is not closed under the maximal-order check
        let pb = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
        assert!(matches!(NumberField::new(None, ints(&[-5, 0, 1]), Some(pb)), Err(Error::InvalidBasis(_))));
        // a basis that is not multiplicatively closed
        let bad = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 3)]];
        assert!(matches!(NumberField::new(None, ints(&[1, 0, 1]), Some(bad)), Err(Error::InvalidBasis(_))));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&builtin("gauss").unwrap()).unwrap().len(), 2);
        assert_eq!(automorphisms(&builtin("cbrt2").unwrap()).unwrap().len(), 1);
        let z8 = builtin("zeta8").unwrap();
        let auts = automorphisms(&z8).unwrap();
        assert_eq!(auts.len(), 4);
        // closed under composition
        for a in &auts {
            for b in &auts {
                assert!(auts.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn minimal_polynomials() {
        let k = builtin("sqrt2_sqrt3").unwrap();
        let t = NFElement::theta(&k);
        let s6 = (&(&t * &t) - &NFElement::from_int(&k, 5)).scale(&rat(1, 2));
        assert_eq!(s6.minpoly(), vec![rat(-6, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(t.charpoly(), vec![rat(1, 1), rat(0, 1), rat(-10, 1), rat(0, 1), rat(1, 1)]);
    }
}
