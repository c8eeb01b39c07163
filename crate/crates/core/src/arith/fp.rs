//! Polynomials over a prime field F_p (p < 2^63), enough to factor a
//! defining polynomial modulo p.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::int::{inv_mod_u64, pow_mod};

/// Coefficients ascending, reduced into [0, p), no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpPoly {
    pub c: Vec<u64>,
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl FpPoly {
    pub fn new(mut c: Vec<u64>, p: u64) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { c }
    }

    pub fn one() -> Self {
        FpPoly { c: vec![1] }
    }

    pub fn x() -> Self {
        FpPoly { c: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn add(&self, o: &Self, p: u64) -> Self {
        let n = self.c.len().max(o.c.len());
        let get = |v: &Vec<u64>, i| v.get(i).copied().unwrap_or(0);
        Self::new((0..n).map(|i| (get(&self.c, i) + get(&o.c, i)) % p).collect(), p)
    }

    pub fn sub(&self, o: &Self, p: u64) -> Self {
        let n = self.c.len().max(o.c.len());
        let get = |v: &Vec<u64>, i| v.get(i).copied().unwrap_or(0);
        Self::new((0..n).map(|i| (get(&self.c, i) + p - get(&o.c, i)) % p).collect(), p)
    }

    pub fn mul(&self, o: &Self, p: u64) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly { c: Vec::new() };
        }
        let mut r = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = (r[i + j] + mulm(a, b, p)) % p;
            }
        }
        Self::new(r, p)
    }

    pub fn div_rem(&self, d: &Self, p: u64) -> (Self, Self) {
        assert!(!d.is_zero());
        let dd = d.degree();
        let li = inv_mod_u64(*d.c.last().unwrap(), p).expect("p prime");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (FpPoly { c: Vec::new() }, self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mulm(r[k + dd], li, p);
            if c != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mulm(c, dc, p)) % p;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q, p), Self::new(r, p))
    }

    pub fn rem(&self, d: &Self, p: u64) -> Self {
        self.div_rem(d, p).1
    }

    pub fn monic(&self, p: u64) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let li = inv_mod_u64(l, p).expect("p prime");
                Self::new(self.c.iter().map(|&x| mulm(x, li, p)).collect(), p)
            }
        }
    }

    pub fn gcd(&self, o: &Self, p: u64) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    pub fn derivative(&self, p: u64) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, &x)| mulm(x, i as u64 % p, p)).collect(), p)
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Self, p: u64) -> Self {
        let mut r = FpPoly::one().rem(m, p);
        let base = self.rem(m, p);
        for i in (0..e.bits()).rev() {
            r = r.mul(&r, p).rem(m, p);
            if e.bit(i) {
                r = r.mul(&base, p).rem(m, p);
            }
        }
        r
    }
}

/// Squarefree decomposition: pairs (g, e) with f = lc * prod g^e, each g monic squarefree.
fn squarefree(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let mut out = Vec::new();
    sqf_rec(&f.monic(p), p, 1, &mut out);
    out
}

fn sqf_rec(f: &FpPoly, p: u64, mult: u32, out: &mut Vec<(FpPoly, u32)>) {
    if f.degree() == 0 {
        return;
    }
    let df = f.derivative(p);
    if df.is_zero() {
        // f is a p-th power; coefficients of x^(p i) give the root (a^p = a in F_p).
        let root = FpPoly::new(f.c.iter().step_by(p as usize).copied().collect(), p);
        sqf_rec(&root, p, mult * p as u32, out);
        return;
    }
    let mut c = f.gcd(&df, p);
    let mut w = f.div_rem(&c, p).0;
    let mut i = 1;
    while w.degree() > 0 {
        let y = w.gcd(&c, p);
        let fac = w.div_rem(&y, p).0;
        if fac.degree() > 0 {
            out.push((fac.monic(p), i * mult));
        }
        w = y;
        c = c.div_rem(&w, p).0;
        i += 1;
    }
    if c.degree() > 0 {
        // remaining factor is a p-th power
        let root = FpPoly::new(c.c.iter().step_by(p as usize).copied().collect(), p);
        sqf_rec(&root, p, mult * p as u32, out);
    }
}

/// Distinct-degree factorisation of a monic squarefree polynomial.
fn ddf(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = FpPoly::x();
    let pb = BigUint::from(p);
    let mut d = 1;
    while g.degree() >= 2 * d {
        h = h.pow_mod(&pb, &g, p);
        let t = g.gcd(&h.sub(&FpPoly::x(), p), p);
        if t.degree() > 0 {
            out.push((t.clone(), d));
            g = g.div_rem(&t, p).0;
            h = h.rem(&g, p);
        }
        d += 1;
    }
    if g.degree() > 0 {
        let deg = g.degree();
        out.push((g, deg));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus); for p = 2 the trace map is used.
fn edf(f: &FpPoly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    if f.degree() == d {
        out.push(f.monic(p));
        return;
    }
    let n = f.degree();
    loop {
        let a = FpPoly::new((0..n).map(|_| rng.gen_range(0..p)).collect(), p);
        if a.degree() == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul(&t, p).rem(f, p);
                acc = acc.add(&t, p);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            a.pow_mod(&e, f, p).sub(&FpPoly::one(), p)
        };
        let g = f.gcd(&b, p);
        if g.degree() > 0 && g.degree() < n {
            let h = f.div_rem(&g, p).0;
            edf(&g, d, p, rng, out);
            edf(&h.monic(p), d, p, rng, out);
            return;
        }
    }
}

/// Factorisation of a polynomial over F_p into monic irreducibles with
/// multiplicities, sorted by (degree, coefficients). Deterministic.
pub fn factor(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ 0x5eed);
    let mut out = Vec::new();
    for (g, e) in squarefree(f, p) {
        for (h, d) in ddf(&g, p) {
            let mut parts = Vec::new();
            edf(&h, d, p, &mut rng, &mut parts);
            out.extend(parts.into_iter().map(|q| (q, e)));
        }
    }
    out.sort_by(|a, b| (a.0.degree(), &a.0.c).cmp(&(b.0.degree(), &b.0.c)));
    out
}

/// Roots of f in F_p, ascending.
pub fn roots(f: &FpPoly, p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = factor(f, p).into_iter().filter(|(g, _)| g.degree() == 1).map(|(g, _)| (p - g.c[0]) % p).collect();
    r.sort_unstable();
    r
}

/// Legendre-style test: is a a square in F_p (p odd)? Zero counts as a square.
pub fn is_square(a: u64, p: u64) -> bool {
    a.is_multiple_of(p) || p == 2 || pow_mod(a, (p - 1) / 2, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(fs: &[(FpPoly, u32)], p: u64) -> FpPoly {
        let mut acc = FpPoly::one();
        for (g, e) in fs {
            for _ in 0..*e {
                acc = acc.mul(g, p);
            }
        }
        acc
    }

    #[test]
    fn gaussian_primes() {
        let f = FpPoly::new(vec![1, 0, 1], 5);
        let fs = factor(&f, 5);
        assert_eq!(fs, vec![(FpPoly::new(vec![2, 1], 5), 1), (FpPoly::new(vec![3, 1], 5), 1)]);
        let f2 = FpPoly::new(vec![1, 0, 1], 2);
        assert_eq!(factor(&f2, 2), vec![(FpPoly::new(vec![1, 1], 2), 2)]);
        let f7 = FpPoly::new(vec![1, 0, 1], 7);
        assert_eq!(factor(&f7, 7), vec![(f7.clone(), 1)]);
    }

    #[test]
    fn factors_reconstruct() {
        for p in [2u64, 3, 5, 7, 11, 13, 31, 1_000_003] {
            for f in [vec![1u64, 1, 1, 1, 1], vec![(p - 2 % p) % p, 0, 0, 1], vec![1, 0, (p - 10 % p) % p, 0, 1], vec![1, 0, 0, 0, 1]] {
                let f = FpPoly::new(f, p);
                let fs = factor(&f, p);
                assert_eq!(expand(&fs, p), f.monic(p), "p = {p}");
                for (g, _) in &fs {
                    // irreducible: no factor of degree <= deg/2 via ddf on itself
                    assert_eq!(ddf(g, p).len(), 1);
                    assert_eq!(ddf(g, p)[0].1, g.degree());
                }
            }
        }
    }

    #[test]
    fn repeated_factors_in_char_two_and_three() {
        // (x+1)^4 over F_2 and (x^3 - x)^3 over F_3
        let f = FpPoly::new(vec![1, 0, 0, 0, 1], 2);
        assert_eq!(factor(&f, 2), vec![(FpPoly::new(vec![1, 1], 2), 4)]);
        let g = FpPoly::new(vec![0, 2, 0, 1], 3);
        let g3 = g.mul(&g, 3).mul(&g, 3);
        let fs = factor(&g3, 3);
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(h, e)| h.degree() == 1 && *e == 3));
    }
}
