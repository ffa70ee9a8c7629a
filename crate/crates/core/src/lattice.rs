//! Floating-point lattice routines for the log-unit lattice: LLL, ball
//! enumeration (Fincke–Pohst with a centre), closest vectors and successive
//! minima.
//!
//! Ranks are at most ten or so; nothing here is performance sensitive.
//! Results only ever feed bounds or propose candidates that are checked
//! exactly elsewhere.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::Q;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gram(basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    basis.iter().map(|a| basis.iter().map(|b| dot(a, b)).collect()).collect()
}

/// `xᵀGx = Σ d_i (x_i + Σ_{j>i} u_ij x_j)²`, or `None` if a pivot is not
/// positive.
pub fn completion(g: &[Vec<f64>]) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = g.len();
    let mut a = g.to_vec();
    let mut d = vec![0.0; n];
    let mut u = vec![vec![0.0; n]; n];
    for i in 0..n {
        // also rejects NaN
        if a[i][i].partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
            return None;
        }
        d[i] = a[i][i];
        for j in i + 1..n {
            u[i][j] = a[i][j] / d[i];
        }
        for j in i + 1..n {
            for k in i + 1..n {
                a[j][k] -= u[i][j] * a[i][k];
            }
        }
    }
    Some((d, u))
}

/// LLL (δ = 0.99) on the rows of `basis`, in place. Returns the unimodular
/// transform `T` with `new_basis = T · old_basis`.
pub fn lll(basis: &mut [Vec<f64>]) -> Vec<Vec<i64>> {
    let n = basis.len();
    let mut t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    if n < 2 {
        return t;
    }
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso_coeff(basis, k, j);
            let r = libm::round(mu);
            if r != 0.0 {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= r * y;
                }
                let tj = t[j].clone();
                for (x, y) in t[k].iter_mut().zip(&tj) {
                    *x -= r as i64 * y;
                }
            }
        }
        let star = gso_norms(basis);
        let (mu, _) = gso_coeff(basis, k, k - 1);
        if star[k] < (0.99 - mu * mu) * star[k - 1] {
            basis.swap(k, k - 1);
            t.swap(k, k - 1);
            k = k.saturating_sub(1).max(1);
        } else {
            k += 1;
        }
    }
    t
}

fn gso(basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for b in basis {
        let mut v = b.clone();
        for s in &star {
            let ss = dot(s, s);
            if ss > 0.0 {
                let mu = dot(b, s) / ss;
                for (x, y) in v.iter_mut().zip(s) {
                    *x -= mu * y;
                }
            }
        }
        star.push(v);
    }
    star
}

fn gso_norms(basis: &[Vec<f64>]) -> Vec<f64> {
    gso(basis).iter().map(|s| dot(s, s)).collect()
}

fn gso_coeff(basis: &[Vec<f64>], k: usize, j: usize) -> (f64, f64) {
    let star = gso(&basis[..=j]);
    let s = &star[j];
    let ss = dot(s, s);
    (dot(&basis[k], s) / ss, ss)
}

/// All integer `x` with `(x − c)ᵀ G (x − c) ≤ radius_sq`, with their values.
pub fn enumerate_ball(g: &[Vec<f64>], center: &[f64], radius_sq: f64) -> Vec<(Vec<i64>, f64)> {
    let n = g.len();
    let mut out = Vec::new();
    if n == 0 {
        out.push((Vec::new(), 0.0));
        return out;
    }
    let Some((d, u)) = completion(g) else {
        return out;
    };
    let mut x = vec![0i64; n];
    recurse(&d, &u, center, radius_sq, n - 1, 0.0, &mut x, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    d: &[f64],
    u: &[Vec<f64>],
    c: &[f64],
    radius_sq: f64,
    level: usize,
    partial: f64,
    x: &mut [i64],
    out: &mut Vec<(Vec<i64>, f64)>,
) {
    let n = d.len();
    let mut centre = c[level];
    for j in level + 1..n {
        centre -= u[level][j] * (x[j] as f64 - c[j]);
    }
    let rem = (radius_sq - partial).max(0.0);
    let half = libm::sqrt(rem / d[level]);
    let lo = libm::ceil(centre - half) as i64;
    let hi = libm::floor(centre + half) as i64;
    for v in lo..=hi {
        let diff = v as f64 - centre;
        let val = partial + d[level] * diff * diff;
        if val > radius_sq {
            continue;
        }
        x[level] = v;
        if level == 0 {
            out.push((x.to_vec(), val));
        } else {
            recurse(d, u, c, radius_sq, level - 1, val, x, out);
        }
    }
    x[level] = 0;
}

/// Integer `x` minimising `(x − c)ᵀ G (x − c)`, found by enumeration
/// seeded with the rounded centre. Ties break lexicographically.
pub fn closest_vector(g: &[Vec<f64>], center: &[f64]) -> Vec<i64> {
    let n = g.len();
    if n == 0 {
        return Vec::new();
    }
    let rounded: Vec<i64> = center.iter().map(|&c| libm::round(c) as i64).collect();
    let diff: Vec<f64> = rounded.iter().zip(center).map(|(&r, c)| r as f64 - c).collect();
    let seed: f64 = (0..n).map(|i| (0..n).map(|j| diff[i] * g[i][j] * diff[j]).sum::<f64>()).sum();
    let radius = seed * (1.0 + 1e-9) + 1e-12;
    let mut cands = enumerate_ball(g, center, radius);
    if cands.is_empty() {
        return rounded;
    }
    cands.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    cands.swap_remove(0).0
}

/// Successive minima λ_1 ≤ … ≤ λ_d of the lattice spanned by the rows of
/// `basis` (Euclidean norm), by enumerating every vector no longer than the
/// longest LLL-reduced basis vector and picking independent ones greedily.
pub fn successive_minima(basis: &[Vec<f64>]) -> Vec<f64> {
    let d = basis.len();
    if d == 0 {
        return Vec::new();
    }
    let mut reduced = basis.to_vec();
    lll(&mut reduced);
    let g = gram(&reduced);
    let radius = reduced.iter().map(|b| dot(b, b)).fold(0.0, f64::max) * (1.0 + 1e-9);
    let mut vecs = enumerate_ball(&g, &vec![0.0; d], radius);
    vecs.retain(|(x, _)| x.iter().any(|&v| v != 0));
    vecs.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    let mut minima = Vec::with_capacity(d);
    for (x, val) in vecs {
        let row: Vec<Q> = x.iter().map(|&v| Q::from_integer(v.into())).collect();
        let mut trial = chosen.clone();
        trial.push(row);
        if linalg::rank(&trial) > chosen.len() {
            chosen = trial;
            minima.push(libm::sqrt(val));
            if minima.len() == d {
                break;
            }
        }
    }
    minima
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minima_of_skewed_basis() {
        // Z² with basis (1,0), (7,1): minima 1, 1
        let m = successive_minima(&[vec![1.0, 0.0], vec![7.0, 1.0]]);
        assert_eq!(m.len(), 2);
        assert!((m[0] - 1.0).abs() < 1e-12 && (m[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hexagonal_minima() {
        let s = libm::sqrt(3.0) / 2.0;
        let m = successive_minima(&[vec![1.0, 0.0], vec![0.5, s]]);
        assert!((m[0] - 1.0).abs() < 1e-12 && (m[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closest_vector_in_z2() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(closest_vector(&g, &[2.4, -3.6]), vec![2, -4]);
        // skewed metric: pure rounding is not optimal
        let g = vec![vec![1.0, 0.9], vec![0.9, 1.0]];
        let c = [0.45, 0.45];
        let best = closest_vector(&g, &c);
        let val = |x: &[i64]| {
            let dx = [x[0] as f64 - c[0], x[1] as f64 - c[1]];
            dx[0] * dx[0] + 1.8 * dx[0] * dx[1] + dx[1] * dx[1]
        };
        for a in -3..=3 {
            for b in -3..=3 {
                assert!(val(&best) <= val(&[a, b]) + 1e-12);
            }
        }
    }
}
