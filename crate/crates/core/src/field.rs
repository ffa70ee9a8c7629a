//! Totally real number fields `K = Q(θ)` and exact arithmetic on their
//! elements.
//!
//! Elements are coordinate vectors over a fixed integral basis `ω_1 = 1,
//! ω_2, …, ω_n`; multiplication goes through precomputed structure
//! constants. The real embeddings `σ_1 < … < σ_n` (ordered by the root of
//! the minimal polynomial they send `θ` to) are certified rational
//! intervals, refined on demand.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{self, Matrix};
use crate::poly::{self, Poly, RootInterval, Sturm};
use crate::Q;

pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 4096;

/// Where the integral basis came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// Supplied by the caller and trusted to be a basis of `O_K`.
    Supplied,
    /// Synthesised `{1, √d}` or `{1, (1+√d)/2}` for a real quadratic field.
    QuadraticMaximal,
    /// Power basis `1, θ, …, θ^{n-1}`; the discriminant is then only that of
    /// the order `Z[θ]`.
    PowerBasis,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coords: Vec<Q>,
}

impl FieldElement {
    pub fn new(coords: Vec<Q>) -> Self {
        FieldElement { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        FieldElement { coords: coords.iter().map(|&c| Q::from_integer(c.into())).collect() }
    }

    pub fn from_bigints(coords: &[BigInt]) -> Self {
        FieldElement { coords: coords.iter().cloned().map(Q::from_integer).collect() }
    }

    pub fn rational(x: Q, degree: usize) -> Self {
        let mut coords = vec![Q::zero(); degree];
        coords[0] = x;
        FieldElement { coords }
    }

    pub fn one(degree: usize) -> Self {
        FieldElement::rational(Q::one(), degree)
    }

    pub fn zero(degree: usize) -> Self {
        FieldElement { coords: vec![Q::zero(); degree] }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Integral iff every coordinate over the integral basis is an integer.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// `Some(q)` when the element is the rational number `q` (as `ω_1 = 1`).
    pub fn as_rational(&self) -> Option<Q> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| self.coords[0].clone())
    }

    pub fn scale(&self, s: &Q) -> Self {
        FieldElement { coords: self.coords.iter().map(|c| c * s).collect() }
    }

    /// Positive rational multiple with coprime integer coordinates.
    pub fn primitive(&self) -> Self {
        FieldElement::from_bigints(&linalg::primitive(&self.coords))
    }

    pub fn integer_coords(&self) -> Option<Vec<BigInt>> {
        self.coords.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Flips the sign so that the first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> Self {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

#[derive(Clone, Debug)]
pub struct NumberField {
    min_poly: Vec<BigInt>,
    poly: Poly,
    basis: Matrix,
    basis_inv: Matrix,
    structure: Vec<Vec<Vec<Q>>>,
    traces: Vec<Q>,
    trace_matrix: Matrix,
    discriminant: BigInt,
    basis_kind: BasisKind,
    precision: u32,
    roots: Vec<RootInterval>,
}

impl NumberField {
    /// Builds and validates a totally real field from its monic minimal
    /// polynomial `[c_0, …, c_{n-1}, 1]` and an optional integral basis
    /// (rows are power-basis coordinates).
    pub fn new(min_poly: &[BigInt], integral_basis: Option<Matrix>) -> Result<Self> {
        Self::with_precision(min_poly, integral_basis, DEFAULT_PRECISION)
    }

    pub fn with_precision(min_poly: &[BigInt], integral_basis: Option<Matrix>, precision: u32) -> Result<Self> {
        if min_poly.len() < 2 {
            return Err(Error::InvalidPolynomial("degree must be at least 1"));
        }
        if !min_poly.last().unwrap().is_one() {
            return Err(Error::InvalidPolynomial("polynomial must be monic"));
        }
        let precision = precision.clamp(16, MAX_PRECISION);
        let n = min_poly.len() - 1;
        let poly = Poly::from_ints(min_poly);
        if poly.gcd(&poly.derivative()).degree() != Some(0) {
            return Err(Error::ReduciblePolynomial);
        }
        if Sturm::new(&poly).total() != n as i64 {
            return Err(Error::NotTotallyReal);
        }
        let roots = poly::isolate_real_roots(&poly, precision);
        check_irreducible(&poly, &roots, precision)?;

        let (basis, basis_kind) = match integral_basis {
            Some(b) => (b, BasisKind::Supplied),
            None if n == 2 => match quadratic_basis(min_poly) {
                Some(b) => (b, BasisKind::QuadraticMaximal),
                None => (linalg::identity(n), BasisKind::PowerBasis),
            },
            None => (linalg::identity(n), BasisKind::PowerBasis),
        };
        if basis.len() != n || basis.iter().any(|r| r.len() != n) {
            return Err(Error::BasisNotUnimodular(format!("basis must be {n}×{n}")));
        }
        if basis[0] != linalg::identity(n)[0] {
            return Err(Error::BasisNotUnimodular("first basis element must be 1".into()));
        }
        let basis_inv = linalg::inverse(&basis)
            .ok_or_else(|| Error::BasisNotUnimodular("basis vectors are linearly dependent".into()))?;

        let powers: Vec<Poly> = basis.iter().map(|row| Poly::new(row.clone())).collect();
        let mut structure = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = powers[i].mul(&powers[j]).rem(&poly);
                let mut pc = prod.0.clone();
                pc.resize(n, Q::zero());
                let coords = linalg::vec_mat(&pc, &basis_inv);
                if coords.iter().any(|c| !c.is_integer()) {
                    return Err(Error::BasisNotUnimodular(format!(
                        "product of basis elements {} and {} is not integral over the basis",
                        i + 1,
                        j + 1
                    )));
                }
                structure[i][j] = coords.clone();
                structure[j][i] = coords;
            }
        }
        let traces: Vec<Q> = (0..n).map(|i| (0..n).map(|j| structure[i][j][j].clone()).sum()).collect();
        let trace_matrix: Matrix =
            (0..n).map(|i| (0..n).map(|j| linalg::dot(&structure[i][j], &traces)).collect()).collect();
        let discriminant = linalg::determinant(&trace_matrix).to_integer();

        Ok(NumberField {
            min_poly: min_poly.to_vec(),
            poly,
            basis,
            basis_inv,
            structure,
            traces,
            trace_matrix,
            discriminant,
            basis_kind,
            precision,
            roots,
        })
    }

    /// `Q(√d)` for squarefree `d ≥ 2`, with its maximal order basis.
    pub fn real_quadratic(d: i64) -> Result<Self> {
        NumberField::new(&[BigInt::from(-d), BigInt::zero(), BigInt::one()], None)
    }

    /// The same field with embeddings stored at a different precision.
    pub fn at_precision(&self, precision: u32) -> Self {
        let precision = precision.clamp(16, MAX_PRECISION);
        let roots = poly::isolate_real_roots(&self.poly, precision);
        NumberField { precision, roots, ..self.clone() }
    }

    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.basis_kind
    }

    /// `det(Tr(ω_i ω_j))`; a true field discriminant unless the basis is
    /// only a power basis of an order.
    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// `Tr(ω_i ω_j)`.
    pub fn trace_matrix(&self) -> &Matrix {
        &self.trace_matrix
    }

    /// Structure constants: `ω_i ω_j = Σ_k s[i][j][k] ω_k`.
    pub fn structure_constants(&self) -> &[Vec<Vec<Q>>] {
        &self.structure
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn root_intervals(&self) -> &[RootInterval] {
        &self.roots
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(self.degree())
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.degree())
    }

    pub fn element(&self, coords: Vec<Q>) -> Result<FieldElement> {
        if coords.len() != self.degree() {
            return Err(Error::DimensionMismatch { expected: self.degree(), found: coords.len() });
        }
        Ok(FieldElement::new(coords))
    }

    /// Basis element `ω_{i+1}`.
    pub fn basis_element(&self, i: usize) -> FieldElement {
        let mut coords = vec![Q::zero(); self.degree()];
        coords[i] = Q::one();
        FieldElement::new(coords)
    }

    /// The element as a polynomial in `θ`.
    pub fn to_power_basis(&self, x: &FieldElement) -> Poly {
        Poly::new(linalg::vec_mat(x.coords(), &self.basis))
    }

    pub fn from_power_basis(&self, p: &Poly) -> FieldElement {
        let r = p.rem(&self.poly);
        let mut pc = r.0;
        pc.resize(self.degree(), Q::zero());
        FieldElement::new(linalg::vec_mat(&pc, &self.basis_inv))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let n = self.degree();
        let mut out = vec![Q::zero(); n];
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (o, s) in out.iter_mut().zip(&self.structure[i][j]) {
                    if !s.is_zero() {
                        *o += &f * s;
                    }
                }
            }
        }
        FieldElement::new(out)
    }

    pub fn square(&self, x: &FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    /// Matrix of `y ↦ x·y`: row `j` holds the coordinates of `x·ω_j`.
    pub fn mult_matrix(&self, x: &FieldElement) -> Matrix {
        (0..self.degree()).map(|j| self.mul(x, &self.basis_element(j)).coords).collect()
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mt = linalg::transpose(&self.mult_matrix(x));
        let y = linalg::solve(&mt, self.one().coords()).ok_or(Error::ZeroElement)?;
        Ok(FieldElement::new(y))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, e: i64) -> Result<FieldElement> {
        let mut base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.square(&base);
            }
        }
        Ok(acc)
    }

    /// `Tr_{K/Q}(x)`, the trace of the multiplication-by-`x` matrix.
    pub fn trace(&self, x: &FieldElement) -> Q {
        linalg::dot(x.coords(), &self.traces)
    }

    /// `Nm_{K/Q}(x)`, the determinant of the multiplication-by-`x` matrix.
    pub fn norm(&self, x: &FieldElement) -> Q {
        linalg::determinant(&self.mult_matrix(x))
    }

    /// Certified enclosure of `σ_i(x)` whose relative width is below
    /// `2^-rel_bits`, refining the root of the minimal polynomial as needed.
    pub fn embedding_interval(&self, x: &FieldElement, i: usize, rel_bits: u32) -> Result<Interval> {
        let p = self.to_power_basis(x);
        if p.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut root = self.roots[i].clone();
        let mut bits = self.precision;
        loop {
            let v = eval_interval(&p, &root);
            if root.is_exact() || v.relatively_tight(rel_bits) {
                return Ok(v);
            }
            if bits >= MAX_PRECISION {
                return Err(Error::PrecisionExhausted { bits });
            }
            bits = (bits * 2).min(MAX_PRECISION);
            root = poly::refine(&self.poly, root, bits);
        }
    }

    /// `σ_i(x)` for all `i` as floats (53 correct leading bits).
    pub fn embeddings_f64(&self, x: &FieldElement) -> Result<Vec<f64>> {
        (0..self.degree())
            .map(|i| Ok(self.embedding_interval(x, i, 56)?.midpoint().to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    /// Exact signs of `σ_1(x), …, σ_n(x)`.
    ///
    /// Interval evaluation first (with two precision doublings); any sign
    /// still undecided is settled by a Tarski query on the minimal
    /// polynomial.
    pub fn embedding_signs(&self, x: &FieldElement) -> Result<Vec<i8>> {
        let p = self.to_power_basis(x);
        if p.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut out = Vec::with_capacity(self.degree());
        for root in &self.roots {
            let mut r = root.clone();
            let mut bits = self.precision;
            let mut s = eval_interval(&p, &r).sign();
            for _ in 0..2 {
                if s != 0 || r.is_exact() {
                    break;
                }
                bits = (bits * 2).min(MAX_PRECISION);
                r = poly::refine(&self.poly, r, bits);
                s = eval_interval(&p, &r).sign();
            }
            if s == 0 {
                s = poly::sign_at_root(&self.poly, &p, &r);
            }
            out.push(s);
        }
        Ok(out)
    }

    /// `x ≫ 0`: every real embedding is positive.
    pub fn is_totally_positive(&self, x: &FieldElement) -> Result<bool> {
        Ok(self.embedding_signs(x)?.iter().all(|&s| s > 0))
    }
}

fn eval_interval(p: &Poly, root: &RootInterval) -> Interval {
    if root.is_exact() {
        return Interval::point(p.eval(&root.lo));
    }
    let x = Interval::new(root.lo.clone(), root.hi.clone());
    let mut acc = Interval::point(Q::zero());
    for c in p.0.iter().rev() {
        acc = &(&acc * &x) + c;
    }
    acc
}

/// Maximal-order basis of `Q(√D)` for `x² + bx + c`, `D = b² − 4c`.
fn quadratic_basis(min_poly: &[BigInt]) -> Option<Matrix> {
    let (c, b) = (&min_poly[0], &min_poly[1]);
    let disc = b * b - BigInt::from(4) * c;
    let (s, d0) = square_part(&disc)?;
    // √d0 = (2θ + b)/s
    let s_q = Q::from_integer(s.clone());
    let b_q = Q::from_integer(b.clone());
    let second = if d0.mod_floor(&BigInt::from(4)) == BigInt::one() {
        vec![(&s_q + &b_q) / (Q::from_integer(2.into()) * &s_q), s_q.recip()]
    } else {
        vec![&b_q / &s_q, Q::from_integer(2.into()) / &s_q]
    };
    Some(vec![vec![Q::one(), Q::zero()], second])
}

/// `D = s²·d0` with `d0` squarefree, by trial division.
fn square_part(d: &BigInt) -> Option<(BigInt, BigInt)> {
    let mut rest = d.to_u64()?;
    let mut s = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if p > 10_000_000 {
            return None;
        }
        while rest % (p * p) == 0 {
            rest /= p * p;
            s *= p;
        }
        p += 1;
    }
    Some((BigInt::from(s), BigInt::from(rest)))
}

/// A monic integer polynomial with simple real roots is reducible iff the
/// roots of some proper subset multiply out to integer coefficients.
fn check_irreducible(f: &Poly, roots: &[RootInterval], precision: u32) -> Result<()> {
    let n = roots.len();
    if n <= 1 {
        return Ok(());
    }
    let mut roots = roots.to_vec();
    let mut bits = precision;
    'retry: loop {
        for k in 1..=n / 2 {
            let mut subset: Vec<usize> = (0..k).collect();
            loop {
                match subset_factor(f, &roots, &subset) {
                    SubsetFactor::No => {}
                    SubsetFactor::Yes => return Err(Error::ReduciblePolynomial),
                    SubsetFactor::Unclear => {
                        if bits >= MAX_PRECISION {
                            return Err(Error::PrecisionExhausted { bits });
                        }
                        bits = (bits * 2).min(MAX_PRECISION);
                        roots = roots.into_iter().map(|r| poly::refine(f, r, bits)).collect();
                        continue 'retry;
                    }
                }
                if !next_combination(&mut subset, n) {
                    break;
                }
            }
        }
        return Ok(());
    }
}

enum SubsetFactor {
    No,
    Yes,
    Unclear,
}

fn subset_factor(f: &Poly, roots: &[RootInterval], subset: &[usize]) -> SubsetFactor {
    let mut coeffs = vec![Interval::point(Q::one())];
    for &i in subset {
        let r = Interval::new(roots[i].lo.clone(), roots[i].hi.clone());
        let mut next = vec![Interval::point(Q::zero()); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j + 1] = &next[j + 1] + c;
            next[j] = &next[j] - &(c * &r);
        }
        coeffs = next;
    }
    let mut candidate = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let lo = c.lo.ceil().to_integer();
        let hi = c.hi.floor().to_integer();
        if lo > hi {
            return SubsetFactor::No;
        }
        if lo != hi {
            return SubsetFactor::Unclear;
        }
        candidate.push(lo);
    }
    if f.rem(&Poly::from_ints(&candidate)).is_zero() {
        SubsetFactor::Yes
    } else {
        SubsetFactor::No
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
