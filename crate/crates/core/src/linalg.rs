//! Dense exact linear algebra over the rationals.
//!
//! Matrices are row-major `Vec<Vec<Q>>`. Dimensions here are the field
//! degree or the number of minimal vectors, so plain Gaussian elimination
//! is all we need.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn zero_matrix(rows: usize, cols: usize) -> Matrix {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zero_matrix(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![Q::zero(); cols];
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += vi * x;
        }
    }
    out
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Matrix {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn transpose(m: &[Vec<Q>]) -> Matrix {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let sub = &factor * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Basis of `{c : m·c = 0}`.
pub fn kernel(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] * &inv;
            for j in c..n {
                let sub = &factor * &a[c][j];
                a[i][j] -= sub;
            }
        }
    }
    det
}

/// Solves `m·x = b` for square invertible `m`.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.last() == Some(&n) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `G = Lᵀ·diag(d)·L`-style decomposition used by Fincke–Pohst:
/// `xᵀGx = Σ_i d_i (x_i + Σ_{j>i} u_ij x_j)²`.
///
/// Returns `None` unless `G` is positive definite (all pivots `> 0`).
pub fn quadratic_completion(g: &[Vec<Q>]) -> Option<(Vec<Q>, Matrix)> {
    let n = g.len();
    let mut a = g.to_vec();
    let mut d = vec![Q::zero(); n];
    let mut u = zero_matrix(n, n);
    for i in 0..n {
        if !a[i][i].is_positive() {
            return None;
        }
        d[i] = a[i][i].clone();
        let inv = d[i].recip();
        for j in i + 1..n {
            u[i][j] = &a[i][j] * &inv;
        }
        for j in i + 1..n {
            for k in i + 1..n {
                let sub = &u[i][j] * &a[i][k];
                a[j][k] -= sub;
            }
        }
    }
    Some((d, u))
}

pub fn is_positive_definite(g: &[Vec<Q>]) -> bool {
    quadratic_completion(g).is_some()
}

/// Multiplies by the common denominator and divides by the content, so the
/// result is a primitive integer vector pointing in the same direction.
pub fn primitive(v: &[Q]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn primitive_q(v: &[Q]) -> Vec<Q> {
    primitive(v).into_iter().map(Q::from_integer).collect()
}

pub fn round_q(x: &Q) -> BigInt {
    (x + Q::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}
