//! Closed interval arithmetic in two flavours: outward-rounded `f64` for hot
//! loops, and exact rationals for refinement past double precision.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};

use crate::rational::{self, Rational};

/// Operations shared by both interval types.
pub trait Interval: Clone + Sized {
    fn point(v: &Rational) -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `None` when the divisor contains zero.
    fn div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn max(&self, o: &Self) -> Self;
    fn min(&self, o: &Self) -> Self;
    fn lower(&self) -> Rational;
    fn upper(&self) -> Rational;
    fn lower_f64(&self) -> f64;
    fn upper_f64(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F64Interval {
    pub lo: f64,
    pub hi: f64,
}

impl F64Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "{lo} > {hi}");
        F64Interval { lo, hi }
    }

    pub fn exact(v: f64) -> Self {
        F64Interval { lo: v, hi: v }
    }

    pub fn from_rationals(lo: &Rational, hi: &Rational) -> Self {
        F64Interval {
            lo: round_down(lo),
            hi: round_up(hi),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn scale(&self, k: f64) -> Self {
        if k >= 0.0 {
            F64Interval::new((self.lo * k).next_down(), (self.hi * k).next_up())
        } else {
            F64Interval::new((self.hi * k).next_down(), (self.lo * k).next_up())
        }
    }
}

fn round_down(r: &Rational) -> f64 {
    let f = rational::to_f64(r);
    match BigRational::from_f64(f) {
        Some(x) if &x <= r => f,
        _ => f.next_down(),
    }
}

fn round_up(r: &Rational) -> f64 {
    let f = rational::to_f64(r);
    match BigRational::from_f64(f) {
        Some(x) if &x >= r => f,
        _ => f.next_up(),
    }
}

fn exact_rational(f: f64) -> Rational {
    BigRational::from_f64(f).expect("finite interval bound")
}

impl Interval for F64Interval {
    fn point(v: &Rational) -> Self {
        F64Interval::from_rationals(v, v)
    }

    fn from_i64(v: i64) -> Self {
        let f = v as f64;
        if f as i64 == v && f.abs() < 9.0e15 {
            F64Interval::exact(f)
        } else {
            F64Interval::new(f.next_down(), f.next_up())
        }
    }

    fn add(&self, o: &Self) -> Self {
        F64Interval::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }

    fn sub(&self, o: &Self) -> Self {
        F64Interval::new((self.lo - o.hi).next_down(), (self.hi - o.lo).next_up())
    }

    fn mul(&self, o: &Self) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        F64Interval::new(lo.next_down(), hi.next_up())
    }

    fn div(&self, o: &Self) -> Option<Self> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return None;
        }
        let p = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(F64Interval::new(lo.next_down(), hi.next_up()))
    }

    fn neg(&self) -> Self {
        F64Interval::new(-self.hi, -self.lo)
    }

    fn abs(&self) -> Self {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            F64Interval::new(0.0, self.hi.max(-self.lo))
        }
    }

    fn max(&self, o: &Self) -> Self {
        F64Interval::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    fn min(&self, o: &Self) -> Self {
        F64Interval::new(self.lo.min(o.lo), self.hi.min(o.hi))
    }

    fn lower(&self) -> Rational {
        exact_rational(self.lo)
    }

    fn upper(&self) -> Rational {
        exact_rational(self.hi)
    }

    fn lower_f64(&self) -> f64 {
        self.lo
    }

    fn upper_f64(&self) -> f64 {
        self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

fn min_max(values: [Rational; 4]) -> (Rational, Rational) {
    let mut lo = values[0].clone();
    let mut hi = values[0].clone();
    for v in &values[1..] {
        if v < &lo {
            lo = v.clone();
        }
        if v > &hi {
            hi = v.clone();
        }
    }
    (lo, hi)
}

impl Interval for RatInterval {
    fn point(v: &Rational) -> Self {
        RatInterval::new(v.clone(), v.clone())
    }

    fn from_i64(v: i64) -> Self {
        Self::point(&rational::int(v))
    }

    fn add(&self, o: &Self) -> Self {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    fn sub(&self, o: &Self) -> Self {
        RatInterval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    fn mul(&self, o: &Self) -> Self {
        let (lo, hi) = min_max([
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ]);
        RatInterval::new(lo, hi)
    }

    fn div(&self, o: &Self) -> Option<Self> {
        if !o.lo.is_positive() && !o.hi.is_negative() {
            return None;
        }
        let (lo, hi) = min_max([
            &self.lo / &o.lo,
            &self.lo / &o.hi,
            &self.hi / &o.lo,
            &self.hi / &o.hi,
        ]);
        Some(RatInterval::new(lo, hi))
    }

    fn neg(&self) -> Self {
        RatInterval::new(-&self.hi, -&self.lo)
    }

    fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = if self.hi.cmp(&-&self.lo) == Ordering::Greater {
                self.hi.clone()
            } else {
                -&self.lo
            };
            RatInterval::new(Rational::zero(), m)
        }
    }

    fn max(&self, o: &Self) -> Self {
        RatInterval::new(
            self.lo.clone().max(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
        )
    }

    fn min(&self, o: &Self) -> Self {
        RatInterval::new(
            self.lo.clone().min(o.lo.clone()),
            self.hi.clone().min(o.hi.clone()),
        )
    }

    fn lower(&self) -> Rational {
        self.lo.clone()
    }

    fn upper(&self) -> Rational {
        self.hi.clone()
    }

    fn lower_f64(&self) -> f64 {
        round_down(&self.lo)
    }

    fn upper_f64(&self) -> f64 {
        round_up(&self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn float_ops_enclose_exact_results() {
        let third = F64Interval::point(&ratio(1, 3));
        assert!(third.lower() <= ratio(1, 3) && third.upper() >= ratio(1, 3));
        let s = third.add(&third).add(&third);
        assert!(s.lower() <= ratio(1, 1) && s.upper() >= ratio(1, 1));
        let p = third.mul(&F64Interval::from_i64(-3));
        assert!(p.lower() <= ratio(-1, 1) && p.upper() >= ratio(-1, 1));
        let q = F64Interval::from_i64(1).div(&third).unwrap();
        assert!(q.contains(3.0));
        assert!(third.div(&F64Interval::new(-1.0, 1.0)).is_none());
    }

    #[test]
    fn abs_straddling() {
        let x = RatInterval::new(ratio(-1, 2), ratio(1, 3));
        assert_eq!(x.abs(), RatInterval::new(ratio(0, 1), ratio(1, 2)));
        let y = F64Interval::new(-0.25, 0.5);
        assert_eq!(y.abs(), F64Interval::new(0.0, 0.5));
    }
}
