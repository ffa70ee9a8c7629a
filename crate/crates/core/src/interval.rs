//! Closed intervals with exact rational endpoints.

use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `+1`/`-1` when the sign is certified, `0` if the interval straddles zero.
    pub fn sign(&self) -> i8 {
        if self.lo.is_positive() {
            1
        } else if self.hi.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }

    /// Smallest absolute value attained on the interval.
    pub fn mig(&self) -> Q {
        if self.contains_zero() {
            Q::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn scale(&self, s: &Q) -> Interval {
        let a = &self.lo * s;
        let b = &self.hi * s;
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    /// True when `width / mig < 2^-bits`, i.e. the midpoint carries `bits`
    /// correct leading bits.
    pub fn relatively_tight(&self, bits: u32) -> bool {
        let m = self.mig();
        if m.is_zero() {
            return false;
        }
        let scaled = self.width() * Q::from_integer(num_bigint::BigInt::from(1u8) << bits as usize);
        scaled < m
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }
}

impl Add<&Q> for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Q) -> Interval {
        Interval::new(&self.lo + rhs, &self.hi + rhs)
    }
}
