//! Multi-precision reals for the closed-form bounds and the log embedding.
//!
//! A thin wrapper over `astro_float::BigFloat` at a fixed working precision
//! of [`WORKING_BITS`] bits (about 77 decimal digits), plus the Γ function:
//! exact closed forms at integers and half-integers, and a shifted Stirling
//! series for general positive arguments.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::Q;

pub const WORKING_BITS: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

fn consts() -> Consts {
    Consts::new().expect("astro-float constant cache")
}

#[derive(Clone)]
pub struct Real(BigFloat);

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_sig_digits(20))
    }
}

impl Real {
    pub fn from_i64(x: i64) -> Real {
        Real(BigFloat::from_i64(x, WORKING_BITS))
    }

    pub fn from_f64(x: f64) -> Real {
        Real(BigFloat::from_f64(x, WORKING_BITS))
    }

    pub fn from_bigint(x: &BigInt) -> Real {
        if let Ok(small) = i64::try_from(x) {
            return Real::from_i64(small);
        }
        let s = x.to_string();
        Real(BigFloat::parse(&s, Radix::Dec, WORKING_BITS, RM, &mut consts()))
    }

    pub fn from_rational(x: &Q) -> Real {
        Real::from_bigint(x.numer()) / Real::from_bigint(x.denom())
    }

    pub fn zero() -> Real {
        Real::from_i64(0)
    }

    pub fn one() -> Real {
        Real::from_i64(1)
    }

    pub fn pi() -> Real {
        Real(consts().pi(WORKING_BITS, RM))
    }

    pub fn ln(&self) -> Real {
        Real(self.0.ln(WORKING_BITS, RM, &mut consts()))
    }

    pub fn exp(&self) -> Real {
        Real(self.0.exp(WORKING_BITS, RM, &mut consts()))
    }

    pub fn sqrt(&self) -> Real {
        Real(self.0.sqrt(WORKING_BITS, RM))
    }

    /// `self^e` for `self > 0`.
    pub fn powf(&self, e: &Real) -> Real {
        if e.is_zero() {
            return Real::one();
        }
        (e * &self.ln()).exp()
    }

    pub fn powi(&self, e: i64) -> Real {
        let p = Real(self.0.powi(e.unsigned_abs() as usize, WORKING_BITS, RM));
        if e < 0 {
            p.recip()
        } else {
            p
        }
    }

    pub fn recip(&self) -> Real {
        Real(self.0.reciprocal(WORKING_BITS, RM))
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_zero() && self.0.is_positive()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn max(&self, other: &Real) -> Real {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.0.is_zero() {
            return 0.0;
        }
        self.decimal_string().parse().unwrap_or(f64::NAN)
    }

    fn decimal_string(&self) -> String {
        self.0.format(Radix::Dec, RM, &mut consts()).unwrap_or_else(|_| "NaN".to_string())
    }

    /// Scientific notation rounded to `digits` significant decimal digits,
    /// e.g. `2.10255e1`.
    pub fn to_sig_digits(&self, digits: usize) -> String {
        if self.0.is_nan() {
            return "NaN".into();
        }
        if self.0.is_inf() {
            return if self.0.is_inf_pos() { "inf".into() } else { "-inf".into() };
        }
        if self.0.is_zero() {
            return "0".into();
        }
        let s = self.decimal_string();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.as_str()),
        };
        let (mant, exp) = match body.split_once('e') {
            Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
            None => (body, 0),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        let mut ds: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
        let mut exp = exp + int_part.len() as i64 - 1;
        while ds.first() == Some(&0) && ds.len() > 1 {
            ds.remove(0);
            exp -= 1;
        }
        let digits = digits.max(1);
        if ds.len() > digits {
            let round_up = ds[digits] >= 5;
            ds.truncate(digits);
            if round_up {
                let mut i = digits;
                loop {
                    if i == 0 {
                        ds.insert(0, 1);
                        ds.truncate(digits);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if ds[i] == 9 {
                        ds[i] = 0;
                    } else {
                        ds[i] += 1;
                        break;
                    }
                }
            }
        }
        while ds.len() > 1 && ds.last() == Some(&0) {
            ds.pop();
        }
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push((b'0' + ds[0]) as char);
        if ds.len() > 1 {
            out.push('.');
            for d in &ds[1..] {
                out.push((b'0' + d) as char);
            }
        }
        if exp != 0 {
            out.push('e');
            out.push_str(&exp.to_string());
        }
        out
    }

    /// Compares with an exact rational.
    pub fn cmp_rational(&self, x: &Q) -> Ordering {
        self.partial_cmp(&Real::from_rational(x)).unwrap_or(Ordering::Less)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real(self.0.$inner(&rhs.0, WORKING_BITS, RM))
            }
        }
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.clone().neg())
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.neg())
    }
}

/// Γ(k/2) for a positive integer `k`, from the closed forms
/// Γ(m) = (m-1)! and Γ(m + 1/2) = (2m)! √π / (4^m m!).
pub fn gamma_half_integer(twice: u64) -> Real {
    assert!(twice > 0, "Γ has a pole at 0");
    if twice.is_multiple_of(2) {
        let m = twice / 2;
        Real::from_bigint(&factorial(m - 1))
    } else {
        let m = (twice - 1) / 2;
        let num = factorial(2 * m);
        let den = (BigInt::one() << (2 * m) as usize) * factorial(m);
        Real::from_rational(&Q::new(num, den)) * Real::pi().sqrt()
    }
}

/// Γ(2 + n/2), the factor every bound is built from.
pub fn gamma_two_plus_half(n: u64) -> Real {
    gamma_half_integer(n + 4)
}

fn factorial(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Bernoulli numbers `B_0..=B_max` (with `B_1 = -1/2`).
fn bernoulli(max: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(max + 1);
    b.push(Q::one());
    for m in 1..=max {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Q::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += Q::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / Q::from_integer(BigInt::from(m + 1)));
    }
    b
}

const STIRLING_SHIFT: i64 = 40;
const STIRLING_TERMS: usize = 30;

/// ln Γ(x) for `x > 0` by the Stirling series at `x + 40` with 30
/// correction terms, shifted back with the recurrence.
pub fn ln_gamma(x: &Real) -> Real {
    assert!(x.is_positive(), "ln_gamma needs a positive argument");
    let z = x + &Real::from_i64(STIRLING_SHIFT);
    let half = Real::from_rational(&Q::new(1.into(), 2.into()));
    let two_pi = Real::from_i64(2) * Real::pi();
    let mut acc = &(&z - &half) * &z.ln() - z.clone() + &half * &two_pi.ln();
    let b = bernoulli(2 * STIRLING_TERMS);
    let z_sq = &z * &z;
    let mut z_pow = z.clone();
    for k in 1..=STIRLING_TERMS {
        let coeff = &b[2 * k] / Q::from_integer(BigInt::from((2 * k) * (2 * k - 1)));
        acc = acc + Real::from_rational(&coeff) / &z_pow;
        z_pow = &z_pow * &z_sq;
    }
    let mut shift = Real::zero();
    for j in 0..STIRLING_SHIFT {
        shift = shift + (x + &Real::from_i64(j)).ln();
    }
    acc - shift
}

pub fn gamma(x: &Real) -> Real {
    ln_gamma(x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: &Real, b: &Real) -> f64 {
        ((a - b).abs() / b.abs()).to_f64()
    }

    #[test]
    fn closed_forms_small_values() {
        assert_eq!(gamma_half_integer(6).to_f64(), 2.0);
        assert!((gamma_half_integer(1).to_f64() - core::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half_integer(5).to_f64() - 1.329_340_388_179_137).abs() < 1e-14);
    }

    #[test]
    fn stirling_matches_closed_forms_to_30_digits() {
        for twice in 1..=60u64 {
            let x = Real::from_rational(&Q::new(BigInt::from(twice), 2.into()));
            let err = rel_err(&gamma(&x), &gamma_half_integer(twice));
            assert!(err < 1e-30, "Γ({twice}/2): relative error {err:e}");
        }
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[1], Q::new((-1).into(), 2.into()));
        assert_eq!(b[2], Q::new(1.into(), 6.into()));
        assert_eq!(b[12], Q::new((-691).into(), 2730.into()));
    }

    #[test]
    fn sig_digit_formatting() {
        let x = Real::from_i64(2048) / Real::pi().powi(4);
        assert_eq!(x.to_sig_digits(6), "2.10247e1");
        assert_eq!(Real::from_f64(9.9996).to_sig_digits(3), "1e1");
        assert_eq!(Real::from_f64(-0.00126).to_sig_digits(2), "-1.3e-3");
    }
}
