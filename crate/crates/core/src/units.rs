//! The log embedding, the log-unit lattice `Λ_K` and everything that moves a
//! form along its unit orbit `a ↦ a·u²`.
//!
//! Lattice geometry (regulator, minima, closest vectors) is computed in
//! floating point from a multi-precision log embedding; any statement about
//! actual field elements (reduced forms, equivalence witnesses) is then
//! settled with exact arithmetic.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::hp::Real;
use crate::lattice;
use crate::Q;

/// `Log(x) = (log|σ_1(x)|, …, log|σ_n(x)|)` at working precision.
pub fn log_embedding_hp(field: &NumberField, x: &FieldElement) -> Result<Vec<Real>> {
    let bits = field.precision() / 2 + 8;
    (0..field.degree())
        .map(|i| {
            let v = field.embedding_interval(x, i, bits)?;
            Ok(Real::from_rational(&v.midpoint().abs()).ln())
        })
        .collect()
}

pub fn log_embedding(field: &NumberField, x: &FieldElement) -> Result<Vec<f64>> {
    Ok(log_embedding_hp(field, x)?.iter().map(Real::to_f64).collect())
}

/// Fundamental unit `ε > 1` of the order spanned by the basis of a quadratic
/// field, from the continued fraction of `−ω'` where `ω` is the second basis
/// element and `ω'` its smaller conjugate. The first convergent `p/q` with
/// `Nm(p + qω) = ±1` gives `ε = p + qω`.
pub fn quadratic_fundamental_unit(field: &NumberField) -> Result<FieldElement> {
    if field.degree() != 2 {
        return Err(Error::NotQuadratic);
    }
    let omega = field.basis_element(1);
    let t = field.trace(&omega).to_integer();
    let m = field.norm(&omega).to_integer();
    let disc = &t * &t - BigInt::from(4) * &m;
    let root = disc.sqrt();
    // α = (P + √D)/Q
    let (mut p_num, mut q_den) = (-t, BigInt::from(2));
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    for _ in 0..1_000_000 {
        let a = floor_quadratic(&p_num, &q_den, &root);
        let p_next = &a * &p_cur + &p_prev;
        let q_next = &a * &q_cur + &q_prev;
        p_prev = core::mem::replace(&mut p_cur, p_next);
        q_prev = core::mem::replace(&mut q_cur, q_next);
        let candidate = FieldElement::from_bigints(&[p_cur.clone(), q_cur.clone()]);
        if field.norm(&candidate).abs().is_one() {
            return Ok(candidate);
        }
        p_num = &a * &q_den - &p_num;
        q_den = (&disc - &p_num * &p_num) / &q_den;
    }
    Err(Error::InvariantViolation("continued fraction did not reach a unit".into()))
}

/// `⌊(p + √D)/q⌋` for non-square `D`, given `r = ⌊√D⌋`.
fn floor_quadratic(p: &BigInt, q: &BigInt, r: &BigInt) -> BigInt {
    let num = if q.is_positive() { p + r } else { p + r + BigInt::one() };
    num_integer::Integer::div_floor(&num, q)
}

#[derive(Clone, Debug)]
pub struct LogUnitLattice {
    degree: usize,
    units: Vec<FieldElement>,
    log_basis: Vec<Vec<Real>>,
    log_basis_f64: Vec<Vec<f64>>,
    regulator: Real,
    successive_minima: Vec<f64>,
    frame_minima: Vec<f64>,
}

impl LogUnitLattice {
    /// Validates `n − 1` units and computes `Λ_K`. For quadratic fields the
    /// unit may be omitted and is then found by continued fractions.
    pub fn new(field: &NumberField, units: Option<Vec<FieldElement>>) -> Result<Self> {
        let n = field.degree();
        let rank = n - 1;
        let units = match units {
            Some(u) => u,
            None if n == 1 => Vec::new(),
            None if n == 2 => vec![quadratic_fundamental_unit(field)?],
            None => return Err(Error::WrongCount { expected: rank, found: 0 }),
        };
        if units.len() != rank {
            return Err(Error::WrongCount { expected: rank, found: units.len() });
        }
        for (index, u) in units.iter().enumerate() {
            if u.degree() != n {
                return Err(Error::DimensionMismatch { expected: n, found: u.degree() });
            }
            if !u.is_integral() || !field.norm(u).abs().is_one() {
                return Err(Error::NotAUnit { index });
            }
        }
        let log_basis = units.iter().map(|u| log_embedding_hp(field, u)).collect::<Result<Vec<_>>>()?;
        let log_basis_f64: Vec<Vec<f64>> = log_basis.iter().map(|row| row.iter().map(Real::to_f64).collect()).collect();
        let minor: Vec<Vec<Real>> = log_basis.iter().map(|row| row[..rank].to_vec()).collect();
        let regulator = det_real(minor).abs();
        let floor = Real::from_i64(2).powi(-((field.precision() / 2) as i64));
        if rank > 0 && regulator < floor {
            return Err(Error::DependentUnits);
        }
        let successive_minima = lattice::successive_minima(&log_basis_f64);
        let frame: Vec<Vec<f64>> = log_basis_f64.iter().map(|row| row[..rank].to_vec()).collect();
        let frame_minima = lattice::successive_minima(&frame);
        Ok(LogUnitLattice { degree: n, units, log_basis, log_basis_f64, regulator, successive_minima, frame_minima })
    }

    pub fn rank(&self) -> usize {
        self.degree - 1
    }

    pub fn units(&self) -> &[FieldElement] {
        &self.units
    }

    /// Rows `Log(u_k)` at working precision.
    pub fn log_basis_hp(&self) -> &[Vec<Real>] {
        &self.log_basis
    }

    pub fn log_basis(&self) -> &[Vec<f64>] {
        &self.log_basis_f64
    }

    /// `R_K`: absolute determinant of the first `n − 1` columns of the log
    /// basis (1 for `n = 1`).
    pub fn regulator_hp(&self) -> &Real {
        &self.regulator
    }

    pub fn regulator(&self) -> f64 {
        self.regulator.to_f64()
    }

    /// Successive minima of `Λ_K ⊂ R^n` in the Euclidean norm.
    pub fn successive_minima(&self) -> &[f64] {
        &self.successive_minima
    }

    /// Successive minima after dropping the last log coordinate, the
    /// rank-`(n−1)` frame in which the lattice has determinant `R_K`.
    pub fn frame_minima(&self) -> &[f64] {
        &self.frame_minima
    }

    /// Upper bound on the covering radius of `Λ_K` (frame coordinates):
    /// `min((√d/2)·R^{1/d}, (√d/2)·λ_d)` for rank `d ≤ 10`, and the
    /// `λ_d` form alone above that.
    pub fn covering_radius_upper(&self) -> f64 {
        let d = self.rank();
        if d == 0 {
            return 0.0;
        }
        let half_root_d = libm::sqrt(d as f64) / 2.0;
        let by_minima = half_root_d * self.frame_minima[d - 1];
        if d <= 10 {
            let by_det = half_root_d * libm::pow(self.regulator(), 1.0 / d as f64);
            by_det.min(by_minima)
        } else {
            by_minima
        }
    }

    /// `Π ε_k^{e_k}`.
    pub fn unit_from_exponents(&self, field: &NumberField, exps: &[i64]) -> Result<FieldElement> {
        let mut u = field.one();
        for (eps, &e) in self.units.iter().zip(exps) {
            if e != 0 {
                u = field.mul(&u, &field.pow(eps, e)?);
            }
        }
        Ok(u)
    }

    /// Real exponents `e` with `Σ e_k Log(u_k)` the orthogonal projection
    /// of `target` onto the span of the lattice.
    fn coordinates_of(&self, target: &[f64]) -> Vec<f64> {
        let g = lattice::gram(&self.log_basis_f64);
        let rhs: Vec<f64> = self.log_basis_f64.iter().map(|row| lattice::dot(row, target)).collect();
        solve_spd(&g, &rhs)
    }

    /// Moves `a` along its unit orbit to a form of small trace.
    ///
    /// Returns `(a', u)` with `a' = a·u²`. The exponent vector of `u` is the
    /// closest-vector solution for `−(Log a − mean)/2`, followed by exact
    /// descent on `Tr(a·u²)` over the exponent box of radius 1 until the
    /// centre of the box is its (lexicographically first) minimum.
    pub fn reduce_by_units(&self, field: &NumberField, a: &FieldElement) -> Result<(FieldElement, FieldElement)> {
        if !field.is_totally_positive(a)? {
            return Err(Error::NotTotallyPositive);
        }
        let d = self.rank();
        if d == 0 {
            return Ok((a.clone(), field.one()));
        }
        let logs = log_embedding(field, a)?;
        let mean = logs.iter().sum::<f64>() / logs.len() as f64;
        let target: Vec<f64> = logs.iter().map(|l| -(l - mean) / 2.0).collect();
        let y = self.coordinates_of(&target);
        let g = lattice::gram(&self.log_basis_f64);
        let mut exps = lattice::closest_vector(&g, &y);

        let squares: Vec<FieldElement> = self.units.iter().map(|u| field.square(u)).collect();
        let inv_squares = squares.iter().map(|s| field.inv(s)).collect::<Result<Vec<_>>>()?;
        let mut current = field.mul(a, &field.square(&self.unit_from_exponents(field, &exps)?));
        for _ in 0..10_000 {
            let mut best: Option<(Q, Vec<i64>, FieldElement)> = None;
            let mut visit = |delta: &[i64], elem: &FieldElement| {
                let tr = field.trace(elem);
                let key: Vec<i64> = exps.iter().zip(delta).map(|(e, d)| e + d).collect();
                let better = match &best {
                    None => true,
                    Some((bt, bk, _)) => tr < *bt || (tr == *bt && key < *bk),
                };
                if better {
                    best = Some((tr, key, elem.clone()));
                }
            };
            box_walk(field, &current, &squares, &inv_squares, &mut vec![0; d], 0, &mut visit);
            let (_, key, elem) = best.expect("box is never empty");
            if key == exps {
                break;
            }
            exps = key;
            current = elem;
        }
        let u = self.unit_from_exponents(field, &exps)?;
        Ok((current, u))
    }

    /// Finds `(λ, u)` with `b = λ·a·u²`, `λ ∈ Q_{>0}` and `u` a unit, if any.
    ///
    /// The norm of `b/a` must be a positive rational `n`-th power; the
    /// exponents of `u` are then read off `Log(b/a)` and every candidate in
    /// the radius-1 box around the rounded solution is checked exactly.
    pub fn unit_equivalence_witness(
        &self,
        field: &NumberField,
        a: &FieldElement,
        b: &FieldElement,
    ) -> Result<Option<(Q, FieldElement)>> {
        let n = field.degree();
        let c = field.div(b, a)?;
        let Some(lambda) = rational_nth_root(&field.norm(&c), n) else {
            return Ok(None);
        };
        if !lambda.is_positive() {
            return Ok(None);
        }
        let d = self.rank();
        if d == 0 {
            return Ok(c.as_rational().filter(|r| r.is_positive()).map(|r| (r, field.one())));
        }
        let logs = log_embedding(field, &c)?;
        let mean = logs.iter().sum::<f64>() / n as f64;
        let half: Vec<f64> = logs.iter().map(|l| (l - mean) / 2.0).collect();
        let centre: Vec<i64> = self.coordinates_of(&half).iter().map(|&e| libm::round(e) as i64).collect();
        let mut offsets: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..d {
            offsets = offsets
                .into_iter()
                .flat_map(|o| [0i64, -1, 1].into_iter().map(move |s| [o.as_slice(), &[s]].concat()))
                .collect();
        }
        for off in offsets {
            let exps: Vec<i64> = centre.iter().zip(&off).map(|(c, o)| c + o).collect();
            let u = self.unit_from_exponents(field, &exps)?;
            let r = field.div(&c, &field.square(&u))?;
            if let Some(l) = r.as_rational() {
                if l.is_positive() {
                    return Ok(Some((l, u)));
                }
            }
        }
        Ok(None)
    }
}

fn box_walk(
    field: &NumberField,
    elem: &FieldElement,
    squares: &[FieldElement],
    inv_squares: &[FieldElement],
    delta: &mut Vec<i64>,
    k: usize,
    visit: &mut impl FnMut(&[i64], &FieldElement),
) {
    if k == squares.len() {
        visit(delta, elem);
        return;
    }
    for step in [-1i64, 0, 1] {
        delta[k] = step;
        let next = match step {
            -1 => field.mul(elem, &inv_squares[k]),
            1 => field.mul(elem, &squares[k]),
            _ => elem.clone(),
        };
        box_walk(field, &next, squares, inv_squares, delta, k + 1, visit);
    }
    delta[k] = 0;
}

fn solve_spd(g: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g.iter().zip(rhs).map(|(r, b)| [r.as_slice(), &[*b]].concat()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        a.swap(c, p);
        for i in 0..n {
            if i != c {
                let f = a[i][c] / a[c][c];
                for j in c..=n {
                    a[i][j] -= f * a[c][j];
                }
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

fn det_real(mut m: Vec<Vec<Real>>) -> Real {
    let n = m.len();
    let mut det = Real::one();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap()).unwrap();
        if m[p][c].is_zero() {
            return Real::zero();
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let sub = &f * &m[c][j];
                m[i][j] = &m[i][j] - &sub;
            }
        }
    }
    det
}

/// The rational `r` with `r^n = x`, if it exists (sign-aware for odd `n`).
pub fn rational_nth_root(x: &Q, n: usize) -> Option<Q> {
    let n32 = n as u32;
    let root_int = |v: &BigInt| -> Option<BigInt> {
        if v.is_negative() && n.is_multiple_of(2) {
            return None;
        }
        let r = v.nth_root(n32);
        (num_traits::pow(r.clone(), n) == *v).then_some(r)
    };
    Some(Q::new(root_int(x.numer())?, root_int(x.denom())?))
}

/// Helper for callers that need `|Nm(x)|` as a float.
pub fn abs_norm_f64(field: &NumberField, x: &FieldElement) -> f64 {
    field.norm(x).abs().to_f64().unwrap_or(f64::INFINITY)
}
