//! The trace form `x ↦ Tr(a·x²)` of a unary form and its minimum.
//!
//! Everything is exact: the Gram matrix is rational, LLL runs on the Gram
//! matrix over the rationals, and Fincke–Pohst compares exact partial sums,
//! so the list of minimal vectors is complete by construction.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::linalg::{self, Matrix};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceGram {
    pub form: FieldElement,
    /// `G_ij = Tr(a·ω_i·ω_j)`.
    pub entries: Matrix,
    pub positive_definite: bool,
}

impl TraceGram {
    /// `Tr(a·x²)` for `x` given by its coordinates.
    pub fn value(&self, x: &[Q]) -> Q {
        linalg::dot(&linalg::vec_mat(x, &self.entries), x)
    }
}

/// `μ(a)` and `M(a)`, the minimal vectors up to sign (first nonzero
/// coordinate positive), sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaRecord {
    pub minimum: Q,
    pub vectors: Vec<FieldElement>,
}

pub fn trace_gram(field: &NumberField, a: &FieldElement) -> Result<TraceGram> {
    let n = field.degree();
    if a.degree() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.degree() });
    }
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    // s_k = Tr(a·ω_k), then Tr(a·ω_i·ω_j) = Σ_k c_ijk s_k
    let s = linalg::vec_mat(a.coords(), field.trace_matrix());
    let c = field.structure_constants();
    let entries: Matrix = (0..n).map(|i| (0..n).map(|j| linalg::dot(&c[i][j], &s)).collect()).collect();
    let positive_definite = linalg::is_positive_definite(&entries);
    Ok(TraceGram { form: a.clone(), entries, positive_definite })
}

/// LLL (δ = 3/4) on a rational Gram matrix. Returns the reduced Gram matrix
/// and the unimodular `U` with `G' = U·G·Uᵀ`.
pub fn lll_gram(g: &[Vec<Q>]) -> (Matrix, Vec<Vec<BigInt>>) {
    let n = g.len();
    let mut g = g.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect()).collect();
    let three_quarters = Q::new(3.into(), 4.into());
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (_, mu) = linalg::quadratic_completion(&g).expect("Gram matrix is positive definite");
            let r = linalg::round_q(&mu[j][k]);
            if !r.is_zero() {
                let rq = Q::from_integer(r.clone());
                let row_j = g[j].clone();
                for (x, y) in g[k].iter_mut().zip(&row_j) {
                    *x -= &rq * y;
                }
                for row in g.iter_mut() {
                    let sub = &rq * &row[j];
                    row[k] -= sub;
                }
                let uj = u[j].clone();
                for (x, y) in u[k].iter_mut().zip(&uj) {
                    *x -= &r * y;
                }
            }
        }
        let (d, mu) = linalg::quadratic_completion(&g).expect("Gram matrix is positive definite");
        let m = &mu[k - 1][k];
        if d[k] < (&three_quarters - m * m) * &d[k - 1] {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    (g, u)
}

/// All nonzero integer `y` with `yᵀGy ≤ bound`, found by exact Fincke–Pohst.
/// When `shrink` is set the bound tightens to the best value found so far,
/// so only the minimal vectors survive.
pub fn short_vectors(g: &[Vec<Q>], bound: &Q, shrink: bool) -> Result<Vec<(Vec<BigInt>, Q)>> {
    let n = g.len();
    let (d, u) = linalg::quadratic_completion(g).ok_or(Error::NotTotallyPositive)?;
    let mut state = Search { d: &d, u: &u, bound: bound.clone(), shrink, y: vec![BigInt::zero(); n], out: Vec::new() };
    state.level(n - 1, Q::zero());
    let Search { bound, out, .. } = state;
    Ok(out.into_iter().filter(|(_, v)| !shrink || *v == bound).collect())
}

struct Search<'a> {
    d: &'a [Q],
    u: &'a Matrix,
    bound: Q,
    shrink: bool,
    y: Vec<BigInt>,
    out: Vec<(Vec<BigInt>, Q)>,
}

impl Search<'_> {
    fn level(&mut self, i: usize, partial: Q) {
        let n = self.d.len();
        let mut centre = Q::zero();
        for j in i + 1..n {
            centre -= &self.u[i][j] * Q::from_integer(self.y[j].clone());
        }
        let start = linalg::round_q(&centre);
        for dir in [1i32, -1] {
            let mut k = if dir == 1 { start.clone() } else { &start - 1 };
            loop {
                let diff = Q::from_integer(k.clone()) - &centre;
                let val = &partial + &self.d[i] * &diff * &diff;
                if val > self.bound {
                    break;
                }
                self.y[i] = k.clone();
                if i == 0 {
                    if self.y.iter().any(|c| !c.is_zero()) {
                        if self.shrink && val < self.bound {
                            self.bound = val.clone();
                            self.out.clear();
                        }
                        self.out.push((self.y.clone(), val));
                    }
                } else {
                    self.level(i - 1, val);
                }
                k += dir;
            }
        }
        self.y[i] = BigInt::zero();
    }
}

/// `μ(a)` and `M(a)` for totally positive `a`.
pub fn minimum_and_vectors(field: &NumberField, a: &FieldElement) -> Result<MinimaRecord> {
    let gram = trace_gram(field, a)?;
    if !gram.positive_definite {
        return Err(Error::NotTotallyPositive);
    }
    minima_of_gram(&gram.entries)
}

/// `μ` and the sign-normalized minimal vectors of a positive definite
/// rational Gram matrix.
pub fn minima_of_gram(g: &[Vec<Q>]) -> Result<MinimaRecord> {
    let (reduced, u) = lll_gram(g);
    let bound = (0..reduced.len()).map(|i| reduced[i][i].clone()).min().expect("nonempty");
    let found = short_vectors(&reduced, &bound, true)?;
    let minimum = found.first().map(|(_, v)| v.clone()).ok_or(Error::InvariantViolation("no short vector".into()))?;
    let n = g.len();
    let mut set = BTreeSet::new();
    for (y, _) in found {
        let x: Vec<BigInt> = (0..n).map(|j| (0..n).map(|i| &y[i] * &u[i][j]).sum()).collect();
        set.insert(FieldElement::from_bigints(&x).sign_normalized());
    }
    Ok(MinimaRecord { minimum, vectors: set.into_iter().collect() })
}

/// Checks `μ(λa) = λ·μ(a)` and `M(λa) = M(a)` and returns the common `M`.
pub fn scaled_minimum(field: &NumberField, a: &FieldElement, lambda: &Q) -> Result<Vec<FieldElement>> {
    if !lambda.is_positive() {
        return Err(Error::NotTotallyPositive);
    }
    let base = minimum_and_vectors(field, a)?;
    let scaled = minimum_and_vectors(field, &a.scale(lambda))?;
    if scaled.minimum != &base.minimum * lambda || scaled.vectors != base.vectors {
        return Err(Error::InvariantViolation("minimum does not scale linearly".into()));
    }
    Ok(base.vectors)
}
