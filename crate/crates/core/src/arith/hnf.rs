//! Row Hermite normal form over Z and the lattice operations built on it.
//!
//! A lattice is represented by the rows of an integer matrix. The canonical
//! form has strictly increasing pivot columns, positive pivots, zeros below
//! each pivot and entries above each pivot reduced into `[0, pivot)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type ZMat = Vec<Vec<BigInt>>;

fn axpy(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // target -= q * src
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

fn sub_row(m: &mut ZMat, i: usize, q: &BigInt, j: usize) {
    if q.is_zero() {
        return;
    }
    let (a, b) = if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&mut hi[0], &lo[j])
    };
    axpy(a, q, b);
}

struct Work {
    a: ZMat,
    u: Option<ZMat>,
}

impl Work {
    fn swap(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }
    fn sub(&mut self, i: usize, q: &BigInt, j: usize) {
        sub_row(&mut self.a, i, q, j);
        if let Some(u) = &mut self.u {
            sub_row(u, i, q, j);
        }
    }
    fn negate(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    /// Clears column `c` below row `r` by a Euclidean process; returns false if
    /// the column is zero from row `r` down.
    fn eliminate(&mut self, r: usize, c: usize) -> bool {
        let m = self.a.len();
        loop {
            let best = (r..m)
                .filter(|&i| !self.a[i][c].is_zero())
                .min_by(|&i, &j| self.a[i][c].abs().cmp(&self.a[j][c].abs()));
            let Some(b) = best else { return false };
            self.swap(r, b);
            let mut done = true;
            for i in r + 1..m {
                if !self.a[i][c].is_zero() {
                    let q = self.a[i][c].div_floor(&self.a[r][c]);
                    self.sub(i, &q, r);
                    if !self.a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if self.a[r][c].is_negative() {
                    self.negate(r);
                }
                return true;
            }
        }
    }

    fn reduce_above(&mut self, r: usize, c: usize) {
        for i in 0..r {
            let q = self.a[i][c].div_floor(&self.a[r][c]);
            self.sub(i, &q, r);
        }
    }
}

/// Pivot column of each row of an echelon matrix.
pub fn pivots(h: &[Vec<BigInt>]) -> Vec<usize> {
    h.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("zero row in HNF")).collect()
}

fn hnf_impl(rows: &[Vec<BigInt>], with_u: bool) -> (ZMat, Option<ZMat>) {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let u = with_u.then(|| {
        (0..m).map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
    });
    let mut w = Work { a: rows.to_vec(), u };
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        if w.eliminate(r, c) {
            w.reduce_above(r, c);
            r += 1;
        }
    }
    w.a.truncate(r);
    if let Some(u) = &mut w.u {
        u.truncate(r);
    }
    (w.a, w.u)
}

/// HNF of the lattice spanned by `rows`; zero rows are dropped.
pub fn hnf(rows: &[Vec<BigInt>]) -> ZMat {
    hnf_impl(rows, false).0
}

/// HNF together with a matrix `U` such that `U * rows = H`.
pub fn hnf_with_transform(rows: &[Vec<BigInt>]) -> (ZMat, ZMat) {
    let (h, u) = hnf_impl(rows, true);
    (h, u.unwrap())
}

/// Full-rank HNF of the lattice spanned by `rows` together with `d * Z^n`.
/// Entries are kept reduced modulo `d`, so `d` must lie in the lattice for the
/// result to describe the lattice of `rows` alone.
pub fn hnf_modular(rows: &[Vec<BigInt>], d: &BigInt, n: usize) -> ZMat {
    let d = d.abs();
    assert!(!d.is_zero(), "modular HNF needs a nonzero modulus");
    let mut a: ZMat = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| r.iter().map(|x| x.mod_floor(&d)).collect())
        .collect();
    let mut out: ZMat = Vec::with_capacity(n);
    for c in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[c] = d.clone();
        a.push(e);
        let mut w = Work { a, u: None };
        w.eliminate(0, c);
        let mut rest = w.a;
        let pivot = rest.remove(0);
        rest.retain(|r| r.iter().any(|x| !x.is_zero()));
        for r in rest.iter_mut() {
            for x in r[c + 1..].iter_mut() {
                *x = x.mod_floor(&d);
            }
        }
        let mut pivot = pivot;
        for x in pivot[c + 1..].iter_mut() {
            *x = x.mod_floor(&d);
        }
        out.push(pivot);
        a = rest;
    }
    let mut w = Work { a: out, u: None };
    for c in 0..n {
        w.reduce_above(c, c);
    }
    w.a
}

/// Integer coefficients `x` with `x * h = v`, for `h` in HNF.
pub fn express(h: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let piv = pivots(h);
    let mut rest = v.to_vec();
    let mut coef = Vec::with_capacity(h.len());
    for (row, &c) in h.iter().zip(&piv) {
        let (q, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return None;
        }
        axpy(&mut rest, &q, row);
        coef.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coef)
}

pub fn contains(h: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    express(h, v).is_some()
}

/// Canonical representative of `v` modulo a full-rank HNF lattice: every
/// coordinate lands in `[0, pivot)`.
pub fn reduce_mod(h: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    let mut rest = v.to_vec();
    for (c, row) in h.iter().enumerate() {
        let q = rest[c].div_floor(&row[c]);
        axpy(&mut rest, &q, row);
    }
    rest
}

/// Product of the diagonal of a square HNF, i.e. the lattice index.
pub fn index(h: &[Vec<BigInt>]) -> BigInt {
    h.iter().enumerate().map(|(i, r)| r[i].clone()).product()
}

/// Intersection of two full-rank lattices in Z^n.
pub fn intersect(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> ZMat {
    let n = a.first().or(b.first()).map_or(0, |r| r.len());
    // Rows (x, x) for x in A and (y, 0) for y in B; vectors with vanishing
    // head are exactly (0, z) with z in A cap B.
    let mut rows: ZMat = a.iter().map(|r| r.iter().chain(r.iter()).cloned().collect()).collect();
    rows.extend(b.iter().map(|r| r.iter().cloned().chain(std::iter::repeat_n(BigInt::zero(), n)).collect()));
    hnf(&rows)
        .into_iter()
        .filter(|r| r[..n].iter().all(Zero::is_zero))
        .map(|r| r[n..].to_vec())
        .collect()
}

/// The lattice `{x in Z^n : x * cols ≡ 0 (mod m)}` where `cols` is an n×k
/// integer matrix, returned in HNF.
pub fn congruence_kernel(cols: &[Vec<BigInt>], m: &BigInt) -> ZMat {
    let n = cols.len();
    let k = cols.first().map_or(0, |r| r.len());
    let mut rows: ZMat = Vec::with_capacity(n + k);
    for (i, r) in cols.iter().enumerate() {
        let mut row: Vec<BigInt> = r.iter().map(|x| x.mod_floor(m)).collect();
        row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
        rows.push(row);
    }
    for j in 0..k {
        let mut row = vec![BigInt::zero(); k + n];
        row[j] = m.clone();
        rows.push(row);
    }
    hnf(&rows)
        .into_iter()
        .filter(|r| r[..k].iter().all(Zero::is_zero))
        .map(|r| r[k..].to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> ZMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn canonical_form() {
        let h = hnf(&z(&[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(h, z(&[&[1, 1], &[0, 2]]));
        let h2 = hnf(&z(&[&[3, 3], &[1, -1]]));
        assert_eq!(h2, z(&[&[1, 5], &[0, 6]]));
    }

    #[test]
    fn modular_agrees_with_plain() {
        let rows = z(&[&[4, 6, 2], &[0, 8, 2], &[6, 0, 10], &[2, 2, 2]]);
        let mut with_d = rows.clone();
        for i in 0..3 {
            let mut e = vec![BigInt::zero(); 3];
            e[i] = BigInt::from(16);
            with_d.push(e);
        }
        assert_eq!(hnf_modular(&rows, &BigInt::from(16), 3), hnf(&with_d));
    }

    #[test]
    fn transform_reproduces_hnf() {
        let rows = z(&[&[4, 6], &[6, 9], &[3, 1]]);
        let (h, u) = hnf_with_transform(&rows);
        for (hr, ur) in h.iter().zip(&u) {
            let mut acc = vec![BigInt::zero(); 2];
            for (c, r) in ur.iter().zip(&rows) {
                for (a, x) in acc.iter_mut().zip(r) {
                    *a += c * x;
                }
            }
            assert_eq!(&acc, hr);
        }
    }

    #[test]
    fn membership_and_reduction() {
        let h = z(&[&[1, 3], &[0, 5]]);
        assert!(contains(&h, &[BigInt::from(2), BigInt::from(1)]));
        assert!(!contains(&h, &[BigInt::from(2), BigInt::from(2)]));
        let r = reduce_mod(&h, &[BigInt::from(7), BigInt::from(-3)]);
        assert_eq!(r, vec![BigInt::zero(), BigInt::from(1)]);
    }

    #[test]
    fn lattice_intersection_and_kernel() {
        let a = z(&[&[2, 0], &[0, 1]]);
        let b = z(&[&[1, 0], &[0, 3]]);
        assert_eq!(intersect(&a, &b), z(&[&[2, 0], &[0, 3]]));
        // x * [1;2] ≡ 0 mod 4  -> x0 + 2 x1 ≡ 0 mod 4
        let k = congruence_kernel(&z(&[&[1], &[2]]), &BigInt::from(4));
        assert_eq!(k, z(&[&[2, 1], &[0, 2]]));
    }
}
