//! Polyhedral cones over the rationals: facets from generators by the double
//! description method, and strict-interior membership by a phase-one
//! simplex.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::Q;

/// A facet of `cone(rays)`: the primitive integer normal `h` with `h·r ≥ 0`
/// on every ray, and the indices of the rays with `h·r = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub tight: Vec<usize>,
}

struct DdRay {
    h: Vec<Q>,
    zeros: BTreeSet<usize>,
}

/// Facets of the cone generated by `rays` (which must span `Q^n`), sorted
/// by normal.
pub fn facets(rays: &[Vec<Q>]) -> Result<Vec<Facet>> {
    let n = rays.first().map_or(0, Vec::len);
    if n == 0 || linalg::rank(rays) < n {
        return Err(Error::NotFullDimensional);
    }
    // start from n independent rays: the dual cone is simplicial
    let mut basis_idx = Vec::new();
    let mut chosen: Matrix = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(r.clone());
        if linalg::rank(&trial) > chosen.len() {
            chosen = trial;
            basis_idx.push(i);
            if chosen.len() == n {
                break;
            }
        }
    }
    let inv = linalg::inverse(&chosen).ok_or(Error::NotFullDimensional)?;
    let mut dd: Vec<DdRay> = (0..n)
        .map(|j| {
            let h: Vec<Q> = (0..n).map(|i| inv[i][j].clone()).collect();
            let zeros = basis_idx.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &b)| b).collect();
            DdRay { h, zeros }
        })
        .collect();

    for (idx, r) in rays.iter().enumerate() {
        if basis_idx.contains(&idx) {
            continue;
        }
        let vals: Vec<Q> = dd.iter().map(|d| linalg::dot(r, &d.h)).collect();
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for (k, v) in vals.iter().enumerate() {
            if v.is_positive() {
                pos.push(k);
            } else if v.is_negative() {
                neg.push(k);
            } else {
                zero.push(k);
            }
        }
        let mut next: Vec<DdRay> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: BTreeSet<usize> = dd[p].zeros.intersection(&dd[q].zeros).copied().collect();
                if common.len() + 2 < n {
                    continue;
                }
                let adjacent = (0..dd.len()).all(|s| s == p || s == q || !common.is_subset(&dd[s].zeros));
                if !adjacent {
                    continue;
                }
                let h: Vec<Q> = dd[q].h.iter().zip(&dd[p].h).map(|(hq, hp)| &vals[p] * hq - &vals[q] * hp).collect();
                let mut zeros = common;
                zeros.insert(idx);
                next.push(DdRay { h: linalg::primitive_q(&h), zeros });
            }
        }
        let mut keep: Vec<DdRay> = Vec::new();
        for (k, d) in dd.into_iter().enumerate() {
            if vals[k].is_positive() {
                keep.push(d);
            } else if vals[k].is_zero() {
                let mut d = d;
                d.zeros.insert(idx);
                keep.push(d);
            }
        }
        keep.extend(next);
        dd = keep;
    }

    let mut out: Vec<Facet> = dd
        .into_iter()
        .map(|d| {
            let normal = linalg::primitive(&d.h);
            let hq: Vec<Q> = normal.iter().cloned().map(Q::from_integer).collect();
            let tight = (0..rays.len()).filter(|&i| linalg::dot(&rays[i], &hq).is_zero()).collect();
            Facet { normal, tight }
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// `p` lies in the interior of the full-dimensional cone with these facets.
pub fn strictly_inside_by_facets(facets: &[Facet], p: &[Q]) -> bool {
    facets.iter().all(|f| {
        let h: Vec<Q> = f.normal.iter().cloned().map(Q::from_integer).collect();
        linalg::dot(&h, p).is_positive()
    })
}

/// Whether `p = Σ λ_i r_i` with every `λ_i > 0`, decided by exact linear
/// programming: `λ ≥ 1, τ ≥ 0, Σ λ_i r_i = τ p` is feasible (for a pointed
/// cone `τ = 0` is impossible, so this is the scaled strict
/// representation).
pub fn strictly_positive_combination(rays: &[Vec<Q>], p: &[Q]) -> bool {
    let n = p.len();
    let m = rays.len();
    // variables μ = λ − 1 (m of them) and τ; rows: Σ μ_i r_i − τ p = −Σ r_i
    let mut a: Matrix = vec![vec![Q::zero(); m + 1]; n];
    let mut b = vec![Q::zero(); n];
    for row in 0..n {
        for (i, r) in rays.iter().enumerate() {
            a[row][i] = r[row].clone();
            b[row] -= &r[row];
        }
        a[row][m] = -p[row].clone();
    }
    phase_one_feasible(a, b)
}

/// Feasibility of `{z ≥ 0 : A z = b}` by the simplex method on the
/// auxiliary problem with artificial variables, using Bland's rule.
pub fn phase_one_feasible(mut a: Matrix, mut b: Vec<Q>) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    for r in 0..rows {
        if b[r].is_negative() {
            b[r] = -b[r].clone();
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    // tableau columns: original | artificial | rhs
    let width = cols + rows + 1;
    let mut t: Matrix = (0..rows)
        .map(|r| {
            let mut row = a[r].clone();
            row.extend((0..rows).map(|k| if k == r { Q::one() } else { Q::zero() }));
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    // objective: minimise Σ artificials, reduced costs = −Σ rows on originals
    let mut obj = vec![Q::zero(); width];
    for row in &t {
        for c in 0..cols {
            obj[c] -= &row[c];
        }
        obj[width - 1] -= &row[width - 1];
    }
    while let Some(enter) = (0..cols + rows).find(|&c| obj[c].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for r in 0..rows {
            if t[r][enter].is_positive() {
                let ratio = &t[r][width - 1] / &t[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => ratio < *lv || (ratio == *lv && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded direction cannot occur for a bounded-below objective
            break;
        };
        let piv = t[pr][enter].clone();
        for x in t[pr].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, y) in obj.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        basis[pr] = enter;
    }
    obj[width - 1].is_zero()
}
