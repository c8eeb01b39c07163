//! Dense linear algebra over Q. Matrices are row-major `Vec<Vec<_>>`.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type QMat = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn transpose(a: &[Vec<BigRational>]) -> QMat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> QMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(BigRational::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[BigRational], a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.first().map_or(0, |r| r.len());
    (0..n)
        .map(|j| v.iter().zip(a).fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j]))
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut QMat) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (pivot_row, other) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (x, y) in other.iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &[Vec<BigRational>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

pub fn det(a: &[Vec<BigRational>]) -> BigRational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &piv;
                let (top, bottom) = m.split_at_mut(i);
                for (x, y) in bottom[0][c..].iter_mut().zip(top[c][c..].iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    d
}

pub fn inverse(a: &[Vec<BigRational>]) -> Option<QMat> {
    let n = a.len();
    let mut aug: QMat = a
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// One solution x of A x = b, if the system is consistent.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: QMat = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    let piv = rref(&mut aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

/// One solution x of x A = b.
pub fn solve_left(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    solve(&transpose(a), b)
}

/// Basis of the right null space {x : A x = 0}.
pub fn nullspace(a: &[Vec<BigRational>]) -> QMat {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m = a.to_vec();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (i, &c) in piv.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Basis (rows) of the intersection of two subspaces given by spanning rows.
pub fn intersect_spans(u: &[Vec<BigRational>], w: &[Vec<BigRational>]) -> QMat {
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    // Solve a.U = b.W, i.e. [U; -W]^T [a; b] = 0.
    let mut stacked: QMat = u.to_vec();
    stacked.extend(w.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
    let ker = nullspace(&transpose(&stacked));
    let mut out: QMat = ker.iter().map(|k| vec_mat(&k[..u.len()], u)).collect();
    let piv = rref(&mut out);
    out.truncate(piv.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::rat;

    fn m(rows: &[&[i64]]) -> QMat {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[5, 3]]);
        assert_eq!(det(&a), rat(1, 1));
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &a {
                let s: BigRational = row.iter().zip(&v).map(|(x, y)| x * y).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn span_intersection() {
        let u = m(&[&[1, 0, 0], &[0, 1, 0]]);
        let w = m(&[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(intersect_spans(&u, &w), m(&[&[0, 1, 0]]));
    }
}
