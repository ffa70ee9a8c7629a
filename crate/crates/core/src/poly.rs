//! Univariate polynomials over the rationals, Sturm sequences and real root
//! isolation.
//!
//! Coefficients are stored lowest degree first with no trailing zeros; the
//! zero polynomial is the empty vector.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Poly::new(coeffs.iter().cloned().map(Q::from_integer).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Q> {
        self.0.last()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &Q) -> i8 {
        sign(&self.eval(x))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Q::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(Q::zero);
                    a - b
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.0[dd].recip();
        let mut rem = self.0.clone();
        let mut quot = vec![Q::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let factor = &rem[k] * &lead_inv;
            if !factor.is_zero() {
                for (i, c) in divisor.0.iter().enumerate() {
                    let sub = &factor * c;
                    rem[k - dd + i] -= sub;
                }
                quot[k - dd] = factor;
            }
            rem.pop();
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.lead().cloned() {
            Some(l) => a.scale(&l.recip()),
            None => a,
        }
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> Q {
        let lead = self.lead().expect("zero polynomial has no root bound").abs();
        let max = self.0.iter().map(|c| c.abs()).max().unwrap_or_else(Q::zero);
        Q::one() + max / lead
    }
}

pub fn sign(x: &Q) -> i8 {
    match x.cmp(&Q::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Signed remainder sequence `p, q, -rem(p, q), ...`.
pub fn signed_remainder_sequence(p: &Poly, q: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone()];
    if q.is_zero() {
        return seq;
    }
    seq.push(q.clone());
    loop {
        let k = seq.len();
        let r = seq[k - 2].rem(&seq[k - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&-Q::one()));
    }
    seq
}

fn variations(signs: impl Iterator<Item = i8>) -> i64 {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(seq: &[Poly], x: &Q) -> i64 {
    variations(seq.iter().map(|p| p.sign_at(x)))
}

fn variations_at_infinity(seq: &[Poly], positive: bool) -> i64 {
    variations(seq.iter().map(|p| {
        let s = p.lead().map_or(0, sign);
        if positive || p.degree().unwrap_or(0) % 2 == 0 {
            s
        } else {
            -s
        }
    }))
}

/// A real root of a squarefree polynomial: either known exactly or isolated
/// in the open interval `(lo, hi)` with `f(lo)·f(hi) < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Q,
    pub hi: Q,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }
}

/// Sturm-sequence root counter for a squarefree polynomial.
pub struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    pub fn new(f: &Poly) -> Self {
        Sturm { seq: signed_remainder_sequence(f, &f.derivative()) }
    }

    /// Number of distinct real roots.
    pub fn total(&self) -> i64 {
        variations_at_infinity(&self.seq, false) - variations_at_infinity(&self.seq, true)
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count(&self, a: &Q, b: &Q) -> i64 {
        variations_at(&self.seq, a) - variations_at(&self.seq, b)
    }
}

/// Isolates all real roots of a squarefree polynomial, ascending, each to
/// width at most `2^-bits`.
pub fn isolate_real_roots(f: &Poly, bits: u32) -> Vec<RootInterval> {
    let sturm = Sturm::new(f);
    let bound = f.root_bound();
    let mut pending = vec![(-bound.clone(), bound)];
    let mut roots = Vec::new();
    while let Some((a, b)) = pending.pop() {
        // half-open (a, b]; every root lies in exactly one pending interval
        let k = sturm.count(&a, &b);
        if k == 0 {
            continue;
        }
        if k == 1 {
            if f.sign_at(&b) == 0 {
                roots.push(RootInterval { lo: b.clone(), hi: b });
                continue;
            }
            if f.sign_at(&a) != 0 {
                roots.push(refine(f, RootInterval { lo: a, hi: b }, bits));
                continue;
            }
        }
        let mid = (&a + &b) / Q::from_integer(BigInt::from(2));
        pending.push((a, mid.clone()));
        pending.push((mid, b));
    }
    roots.sort_by(|x, y| x.lo.cmp(&y.lo));
    roots
}

/// Bisects an isolating interval until its width is at most `2^-bits`.
pub fn refine(f: &Poly, mut root: RootInterval, bits: u32) -> RootInterval {
    if root.is_exact() {
        return root;
    }
    let target = Q::new(BigInt::one(), BigInt::one() << bits as usize);
    let two = Q::from_integer(BigInt::from(2));
    let lo_sign = f.sign_at(&root.lo);
    while root.width() > target {
        let mid = (&root.lo + &root.hi) / &two;
        match f.sign_at(&mid) {
            0 => return RootInterval { lo: mid.clone(), hi: mid },
            s if s == lo_sign => root.lo = mid,
            _ => root.hi = mid,
        }
    }
    root
}

/// Tarski query: sign of `g` at the unique root of `f` inside the isolating
/// interval `(lo, hi)`. Exact; needs `f` squarefree and `f(lo), f(hi) ≠ 0`.
pub fn sign_at_root(f: &Poly, g: &Poly, root: &RootInterval) -> i8 {
    if root.is_exact() {
        return g.sign_at(&root.lo);
    }
    let seq = signed_remainder_sequence(f, &f.derivative().mul(g));
    let taq = variations_at(&seq, &root.lo) - variations_at(&seq, &root.hi);
    taq as i8
}
