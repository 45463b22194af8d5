use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::rational::{self, Rational};

/// The interval `[lo / 2^exp, hi / 2^exp]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub exp: u32,
}

impl DyadicInterval {
    /// Smallest dyadic interval with denominator `2^exp` containing `[lo, hi]`.
    pub fn outward(lo: &Rational, hi: &Rational, exp: u32) -> Self {
        let scale = Rational::from_integer(BigInt::one() << exp);
        DyadicInterval {
            lo: rational::floor(&(lo * &scale)),
            hi: rational::ceil(&(hi * &scale)),
            exp,
        }
    }

    fn denom(&self) -> BigInt {
        BigInt::one() << self.exp
    }

    pub fn lower(&self) -> Rational {
        Rational::new(self.lo.clone(), self.denom())
    }

    pub fn upper(&self) -> Rational {
        Rational::new(self.hi.clone(), self.denom())
    }

    pub fn width(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, self.denom())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    /// `self` lies inside `other`.
    pub fn is_within(&self, other: &DyadicInterval) -> bool {
        other.lower() <= self.lower() && self.upper() <= other.upper()
    }

    pub fn lower_f64(&self) -> f64 {
        rational::to_f64(&self.lower())
    }

    pub fn upper_f64(&self) -> f64 {
        rational::to_f64(&self.upper())
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lower_f64() + self.upper_f64())
    }

    /// Outward decimal rendering `[lo, hi]` with `digits` fractional digits.
    pub fn decimal_bounds(&self, digits: usize) -> (String, String) {
        (
            rational::decimal(&self.lower(), digits, false),
            rational::decimal(&self.upper(), digits, true),
        )
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.decimal_bounds(12);
        write!(f, "[{lo}, {hi}]")
    }
}
