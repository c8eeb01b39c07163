//! Dense univariate polynomials over Q, coefficients ascending.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::int::fmt_rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![BigRational::one()])
    }

    /// x - a
    pub fn linear(a: BigRational) -> Self {
        QPoly(vec![-a, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.0.len() - 1;
        let lead_inv = d.lead().recip();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Integer coefficients if every coefficient is integral.
    pub fn to_ints(&self) -> Option<Vec<BigInt>> {
        self.0.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_rat).collect()
    }
}

impl std::fmt::Display for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", fmt_rat(c))?,
                1 => write!(f, "({})*x", fmt_rat(c))?,
                _ => write!(f, "({})*x^{i}", fmt_rat(c))?,
            }
        }
        Ok(())
    }
}

/// Discriminant of a monic integer polynomial via the resultant with its derivative:
/// disc(f) = (-1)^(n(n-1)/2) Res(f, f').
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    if n <= 1 {
        return BigInt::one();
    }
    let p = QPoly::from_ints(f);
    let r = resultant(&p, &p.derivative());
    let s = if (n * (n - 1) / 2).is_multiple_of(2) { r } else { -r };
    assert!(s.is_integer());
    s.to_integer()
}

/// Resultant via the Euclidean algorithm over Q.
pub fn resultant(a: &QPoly, b: &QPoly) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    if db == 0 {
        return b.lead().pow(da as i32);
    }
    let r = a.div_rem(b).1;
    if r.is_zero() {
        return BigRational::zero();
    }
    let dr = r.degree().unwrap();
    let sign = if (da * db) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
    sign * b.lead().pow((da - dr) as i32) * resultant(b, &r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let f = QPoly::from_i64(&[-1, 0, 1]); // x^2 - 1
        let g = QPoly::from_i64(&[1, 1]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(q, QPoly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&QPoly::from_i64(&[-1, 1])), QPoly::from_i64(&[-1, 1]));
        assert!(!QPoly::from_i64(&[1, 2, 1]).is_squarefree());
    }

    #[test]
    fn discriminants() {
        let d = |c: &[i64]| discriminant(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        assert_eq!(d(&[1, 0, 1]), BigInt::from(-4));
        assert_eq!(d(&[-5, 0, 1]), BigInt::from(20));
        assert_eq!(d(&[-2, 0, 0, 1]), BigInt::from(-108));
        assert_eq!(d(&[1, 0, 0, 0, 1]), BigInt::from(256));
    }
}
