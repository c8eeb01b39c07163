//! Complex roots of polynomials.
//!
//! [`isolate`] returns certified disks around the roots of a squarefree
//! integer polynomial: Weierstrass (Durand-Kerner) iteration is run in exact
//! dyadic arithmetic, and the disks `D(z_i, n |W_i|)` with Weierstrass
//! corrections `W_i = f(z_i) / (lc * prod_{j != i} (z_i - z_j))` are accepted
//! once pairwise disjoint, in which case each holds exactly one root.
//! [`aberth`] is a plain floating-point solver used where a result is
//! verified exactly afterwards.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::int::ceil_sqrt;
use crate::error::{Error, Result};

pub const PRECISION_CAP: u32 = 4096;

#[derive(Clone, Debug, PartialEq)]
struct Cq {
    re: BigRational,
    im: BigRational,
}

impl Cq {
    fn zero() -> Self {
        Cq { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn add(&self, o: &Cq) -> Cq {
        Cq { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Cq) -> Cq {
        Cq { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Cq) -> Cq {
        Cq { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &Cq) -> Cq {
        let d = o.norm_sqr();
        Cq {
            re: (&self.re * &o.re + &self.im * &o.im) / &d,
            im: (&self.im * &o.re - &self.re * &o.im) / &d,
        }
    }
    fn round(&self, bits: u32) -> Cq {
        Cq { re: round_dyadic(&self.re, bits), im: round_dyadic(&self.im, bits) }
    }
}

fn round_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let num = (x * BigRational::from_integer(scale.clone()) + BigRational::new(1.into(), 2.into())).floor();
    BigRational::new(num.to_integer(), scale)
}

/// Upper bound for sqrt(q), q >= 0, with absolute error below 2^-bits.
fn sqrt_upper(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << (2 * bits);
    let s = (q * BigRational::from_integer(scale)).ceil().to_integer();
    BigRational::new(ceil_sqrt(&s), BigInt::one() << bits)
}

/// One isolated root: the true root lies in the closed disk of `radius` about
/// `(re, im)`. Real roots have `im == 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDisk {
    pub re: BigRational,
    pub im: BigRational,
    pub radius: BigRational,
    pub real: bool,
}

impl RootDisk {
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    fn center(&self) -> Cq {
        Cq { re: self.re.clone(), im: self.im.clone() }
    }
}

/// Certified roots, ordered: real roots ascending, then each complex pair with
/// the positive-imaginary member first, pairs ordered by (re, im).
#[derive(Clone, Debug, PartialEq)]
pub struct Isolation {
    pub roots: Vec<RootDisk>,
    pub r1: usize,
    pub r2: usize,
    pub bits: u32,
}

fn eval(f: &[Cq], z: &Cq) -> Cq {
    f.iter().rev().fold(Cq::zero(), |acc, c| acc.mul(z).add(c))
}

/// Certified isolation of the roots of a squarefree integer polynomial
/// (ascending coefficients), every disk of radius at most 2^-bits.
pub fn isolate(f: &[BigInt], bits: u32) -> Result<Isolation> {
    let n = f.len() - 1;
    assert!(n >= 1 && !f[n].is_zero());
    let fq: Vec<Cq> =
        f.iter().map(|c| Cq { re: BigRational::from_integer(c.clone()), im: BigRational::zero() }).collect();
    let lc = fq[n].clone();
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);

    let start: Vec<Complex64> = aberth(&f.iter().map(|c| Complex64::new(c.to_f64().unwrap_or(0.0), 0.0)).collect::<Vec<_>>());
    let mut work = bits + 16;
    let mut z: Vec<Cq> = start
        .iter()
        .map(|c| {
            Cq {
                re: BigRational::from_float(c.re).unwrap_or_default(),
                im: BigRational::from_float(c.im).unwrap_or_default(),
            }
            .round(work)
        })
        .collect();
    let nq = BigRational::from_integer(n.into());
    loop {
        if work > PRECISION_CAP {
            return Err(Error::PrecisionCap(PRECISION_CAP));
        }
        for _ in 0..64 {
            let Some(w) = weierstrass(&fq, &lc, &z) else {
                // coincident approximations: push them apart
                for (k, zk) in z.iter_mut().enumerate() {
                    zk.im += BigRational::new(BigInt::from(k + 1), BigInt::from(1024));
                }
                continue;
            };
            let radii: Vec<BigRational> = w.iter().map(|wi| &nq * sqrt_upper(&wi.norm_sqr(), work)).collect();
            if radii.iter().all(|r| r <= &target) {
                if let Some(iso) = certify(&z, &radii, bits) {
                    return Ok(iso);
                }
                break;
            }
            z = z.iter().zip(&w).map(|(zi, wi)| zi.sub(wi).round(work)).collect();
        }
        work *= 2;
        z = z.iter().map(|c| c.round(work)).collect();
    }
}

fn weierstrass(f: &[Cq], lc: &Cq, z: &[Cq]) -> Option<Vec<Cq>> {
    let mut out = Vec::with_capacity(z.len());
    for (i, zi) in z.iter().enumerate() {
        let mut den = lc.clone();
        for (j, zj) in z.iter().enumerate() {
            if i != j {
                den = den.mul(&zi.sub(zj));
            }
        }
        if den.norm_sqr().is_zero() {
            return None;
        }
        out.push(eval(f, zi).div(&den));
    }
    Some(out)
}

fn disks_meet(a: &Cq, ra: &BigRational, b: &Cq, rb: &BigRational) -> bool {
    let s = ra + rb;
    a.sub(b).norm_sqr() <= &s * &s
}

fn certify(z: &[Cq], radii: &[BigRational], bits: u32) -> Option<Isolation> {
    let n = z.len();
    for i in 0..n {
        for j in i + 1..n {
            if disks_meet(&z[i], &radii[i], &z[j], &radii[j]) {
                return None;
            }
        }
    }
    let mut real = vec![false; n];
    let mut partner = vec![usize::MAX; n];
    for i in 0..n {
        let c = Cq { re: z[i].re.clone(), im: -z[i].im.clone() };
        let hits: Vec<usize> = (0..n).filter(|&j| disks_meet(&c, &radii[i], &z[j], &radii[j])).collect();
        if hits == [i] {
            real[i] = true;
        } else if hits.len() == 1 {
            partner[i] = hits[0];
        } else {
            return None;
        }
    }
    let mut reals: Vec<RootDisk> = (0..n)
        .filter(|&i| real[i])
        .map(|i| RootDisk { re: z[i].re.clone(), im: BigRational::zero(), radius: radii[i].clone(), real: true })
        .collect();
    reals.sort_by(|a, b| a.re.cmp(&b.re));
    let mut pairs: Vec<(RootDisk, RootDisk)> = Vec::new();
    for i in 0..n {
        if real[i] || z[i].im.is_negative() {
            continue;
        }
        if partner[partner[i]] != i {
            return None;
        }
        let r = radii[i].clone().max(radii[partner[i]].clone());
        let up = RootDisk { re: z[i].re.clone(), im: z[i].im.clone(), radius: r.clone(), real: false };
        let down = RootDisk { re: z[i].re.clone(), im: -z[i].im.clone(), radius: r, real: false };
        pairs.push((up, down));
    }
    if reals.len() + 2 * pairs.len() != n {
        return None;
    }
    pairs.sort_by(|a, b| (&a.0.re, &a.0.im).cmp(&(&b.0.re, &b.0.im)));
    let r1 = reals.len();
    let r2 = pairs.len();
    let mut roots = reals;
    for (u, d) in pairs {
        roots.push(u);
        roots.push(d);
    }
    Some(Isolation { roots, r1, r2, bits })
}

/// |f(c)|^2 at the center c of a disk.
pub fn residual_bound(f: &[BigInt], d: &RootDisk) -> BigRational {
    let fq: Vec<Cq> =
        f.iter().map(|c| Cq { re: BigRational::from_integer(c.clone()), im: BigRational::zero() }).collect();
    eval(&fq, &d.center()).norm_sqr()
}

/// All roots of a polynomial with complex coefficients (ascending), by the
/// Aberth-Ehrlich iteration in double precision followed by Newton polishing.
pub fn aberth(f: &[Complex64]) -> Vec<Complex64> {
    let mut f = f.to_vec();
    while f.len() > 1 && f.last().is_some_and(|c| c.norm() == 0.0) {
        f.pop();
    }
    let n = f.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lc = f[n];
    let f: Vec<Complex64> = f.iter().map(|c| c / lc).collect();
    let df: Vec<Complex64> = f.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    let ev = |p: &[Complex64], z: Complex64| p.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c);
    // Cauchy bound for the initial circle
    let bound = 1.0 + f[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(bound * 0.5 + 0.1 * k as f64 / n as f64, ang)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let fz = ev(&f, z[i]);
            if fz.norm() == 0.0 {
                continue;
            }
            let ratio = fz / ev(&df, z[i]);
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::one() / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::one() - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-17 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = ev(&df, *zi);
            if d.norm() == 0.0 {
                break;
            }
            let step = ev(&f, *zi) / d;
            if step.is_finite() {
                *zi -= step;
            }
        }
    }
    z
}

/// The integer nearest to a rational.
pub fn round_rat(x: &BigRational) -> BigInt {
    (x + BigRational::new(1.into(), 2.into())).floor().to_integer()
}

/// Integer nearest to an f64 (None if not finite or too large).
pub fn round_f64(x: f64) -> Option<BigInt> {
    x.is_finite().then(|| BigRational::from_float(x.round())).flatten().map(|r| r.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn signatures() {
        let g = isolate(&ints(&[1, 0, 1]), 64).unwrap();
        assert_eq!((g.r1, g.r2), (0, 1));
        assert!(g.roots[0].im.is_positive());
        let c = isolate(&ints(&[-2, 0, 0, 1]), 64).unwrap();
        assert_eq!((c.r1, c.r2), (1, 1));
        let x = c.roots[0].re.to_f64().unwrap();
        assert!((x - 2f64.cbrt()).abs() < 1e-15);
        let q = isolate(&ints(&[-5, 0, 1]), 40).unwrap();
        assert_eq!((q.r1, q.r2), (2, 0));
        assert!(q.roots[0].re < q.roots[1].re);
    }

    #[test]
    fn disks_are_small_and_contain_roots() {
        let f = ints(&[1, 1, 1, 1, 1]);
        let iso = isolate(&f, 200).unwrap();
        assert_eq!((iso.r1, iso.r2), (0, 2));
        let eps = BigRational::new(BigInt::one(), BigInt::one() << 200u32);
        for d in &iso.roots {
            assert!(d.radius <= eps);
            // |f(z)|^2 is tiny at the center
            assert!(residual_bound(&f, d) < BigRational::new(BigInt::one(), BigInt::one() << 300u32));
        }
    }

    #[test]
    fn aberth_on_complex_coefficients() {
        // (x - i)(x - 2)
        let f = [Complex64::new(0.0, 2.0), Complex64::new(-2.0, -1.0), Complex64::new(1.0, 0.0)];
        let mut r = aberth(&f);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }
}
