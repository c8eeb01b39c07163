//! Rational-integer helpers: primality, factorisation, valuations.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Brent's variant of Pollard rho; n is odd, composite and not a prime power of a tiny prime.
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = gcd_u64(x.abs_diff(y), n);
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(p) {
            out.push(p);
            factor_into(n / p, out);
            return;
        }
    }
    let d = rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorisation of a 64-bit integer, primes ascending.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut ps = Vec::new();
    factor_into(n, &mut ps);
    ps.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in ps {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Prime factorisation of |n| for n != 0. Trial division strips small primes;
/// the cofactor must fit in 64 bits.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while m.to_u64().is_none() {
        if p > 1_000_000 {
            return Err(Error::Resource(format!("cannot factor {n}: cofactor exceeds 64 bits")));
        }
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    for (q, e) in factor_u64(m.to_u64().unwrap()) {
        match out.iter_mut().find(|(r, _)| *r == q) {
            Some((_, f)) => *f += e,
            None => out.push((q, e)),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn valuation_rat(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64)
}

/// Inverse of a modulo m, if it exists.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = egcd_i128(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn egcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd_i128(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Reduce a rational with denominator prime to p into F_p.
pub fn rat_mod_p(q: &BigRational, p: u64) -> Option<u64> {
    let bp = BigInt::from(p);
    let n = q.numer().mod_floor(&bp).to_u64()?;
    let d = q.denom().mod_floor(&bp).to_u64()?;
    inv_mod_u64(d, p).map(|di| mul_mod(n, di, p))
}

pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

/// Number of decimal digits of |n| (at least 1).
pub fn decimal_digits(n: &BigInt) -> u64 {
    if n.is_zero() {
        return 1;
    }
    // bits * log10(2), rounded up; an overestimate by at most one digit.
    let bits = n.bits();
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as u64
}

/// Integer square root rounded up.
pub fn ceil_sqrt(n: &BigInt) -> BigInt {
    assert!(n.sign() != Sign::Minus);
    let r = n.sqrt();
    if &r * &r == *n {
        r
    } else {
        r + 1
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parse "p", "-p" or "p/q".
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_composites() {
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1), vec![]);
        let n = 1_000_003u64 * 999_983;
        assert_eq!(factor_u64(n), vec![(999_983, 1), (1_000_003, 1)]);
    }

    #[test]
    fn factors_big() {
        let n = BigInt::from(2).pow(80u32) * BigInt::from(1_000_003u64);
        assert_eq!(factor_bigint(&n).unwrap(), vec![(2, 80), (1_000_003, 1)]);
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..2000 {
            let slow = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), slow, "{n}");
        }
    }

    #[test]
    fn rational_round_trip() {
        for s in ["3", "-7/2", "0", "12345678901234567890/7"] {
            assert_eq!(fmt_rat(&parse_rat(s).unwrap()), s);
        }
        assert!(parse_rat("1/0").is_err());
    }
}
