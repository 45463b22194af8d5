use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use super::constant::ConstantSet;
use super::dyadic::DyadicInterval;
use super::interval::{F64Interval, Interval, RatInterval};

/// Default budget of precision bits spent by a single sign query.
pub const DEFAULT_REFINEMENT_CAP: u64 = 1_000_000;

static REFINEMENT_CAP: AtomicU64 = AtomicU64::new(DEFAULT_REFINEMENT_CAP);

/// Sets the process-wide precision budget used by [`RealScalar::sign`].
pub fn set_refinement_cap(bits: u64) {
    REFINEMENT_CAP.store(bits.max(64), AtomicOrdering::Relaxed);
}

pub fn refinement_cap() -> u64 {
    REFINEMENT_CAP.load(AtomicOrdering::Relaxed)
}

/// A real number written as a rational combination of the constants of a
/// [`ConstantSet`]. Zero exactly when every coefficient is zero.
#[derive(Clone)]
pub struct RealScalar {
    set: Arc<ConstantSet>,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for RealScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealScalar({self})")
    }
}

impl fmt::Display for RealScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, k) in self.coeffs.iter().zip(self.set.iter()) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            if k.is_one() {
                write!(f, "{}", rational::format(&a))?;
            } else if a.is_one() {
                write!(f, "{}", k.symbol())?;
            } else {
                write!(f, "{}*{}", rational::format(&a), k.symbol())?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl PartialEq for RealScalar {
    fn eq(&self, other: &Self) -> bool {
        same_set(&self.set, &other.set) && self.coeffs == other.coeffs
    }
}

impl Eq for RealScalar {}

impl Hash for RealScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

fn same_set(a: &Arc<ConstantSet>, b: &Arc<ConstantSet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl RealScalar {
    pub fn zero(set: &Arc<ConstantSet>) -> Self {
        RealScalar {
            set: set.clone(),
            coeffs: vec![Rational::zero(); set.len()],
        }
    }

    pub fn rational(set: &Arc<ConstantSet>, value: Rational) -> Self {
        let mut s = Self::zero(set);
        s.coeffs[set.one_index()] = value;
        s
    }

    pub fn integer(set: &Arc<ConstantSet>, value: i64) -> Self {
        Self::rational(set, rational::int(value))
    }

    /// The basis constant with index `i`.
    pub fn constant(set: &Arc<ConstantSet>, i: usize) -> Self {
        let mut s = Self::zero(set);
        s.coeffs[i] = Rational::one();
        s
    }

    pub fn from_coeffs(set: &Arc<ConstantSet>, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != set.len() {
            return Err(Error::DimensionMismatch {
                expected: set.len(),
                found: coeffs.len(),
            });
        }
        Ok(RealScalar {
            set: set.clone(),
            coeffs,
        })
    }

    pub fn set(&self) -> &Arc<ConstantSet> {
        &self.set
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value when only the constant one has a nonzero coefficient.
    pub fn as_rational(&self) -> Option<Rational> {
        let one = self.set.one_index();
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i == one || c.is_zero())
            .then(|| self.coeffs[one].clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RealScalar {
            set: self.set.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(&Rational::from_integer(k.clone()))
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        let mut s = self.clone();
        let one = self.set.one_index();
        s.coeffs[one] = &s.coeffs[one] + r;
        s
    }

    fn check_set(&self, other: &Self) {
        assert!(
            same_set(&self.set, &other.set),
            "scalars belong to different constant sets"
        );
    }

    /// Outward-rounded double precision enclosure.
    pub fn float(&self) -> F64Interval {
        let mut acc = F64Interval::exact(0.0);
        for (c, k) in self.coeffs.iter().zip(self.set.iter()) {
            if c.is_zero() {
                continue;
            }
            let term = F64Interval::point(c).mul(&k.float());
            acc = acc.add(&term);
        }
        acc
    }

    /// Exact rational enclosure from constant enclosures of precision `prec`.
    pub fn enclose_at(&self, prec: u32) -> RatInterval {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (c, k) in self.coeffs.iter().zip(self.set.iter()) {
            if c.is_zero() {
                continue;
            }
            let n = c.numer() * (&den / c.denom());
            let (klo, khi) = k.enclose(prec);
            if n.is_positive() {
                lo += &n * klo;
                hi += &n * khi;
            } else {
                lo += &n * khi;
                hi += &n * klo;
            }
        }
        let scale = den << prec;
        RatInterval::new(
            Rational::new(lo, scale.clone()),
            Rational::new(hi, scale),
        )
    }

    /// Sign with the process-wide refinement budget.
    pub fn sign(&self) -> Result<i8> {
        self.sign_capped(refinement_cap())
    }

    /// Exact sign. Zero iff all coefficients vanish; otherwise enclosures are
    /// refined until they exclude zero or `cap` precision bits were spent.
    pub fn sign_capped(&self, cap: u64) -> Result<i8> {
        if self.is_zero() {
            return Ok(0);
        }
        let f = self.float();
        if f.lo > 0.0 {
            return Ok(1);
        }
        if f.hi < 0.0 {
            return Ok(-1);
        }
        let mut prec: u32 = 128;
        let mut spent: u64 = 0;
        loop {
            let iv = self.enclose_at(prec);
            if iv.lo.is_positive() {
                return Ok(1);
            }
            if iv.hi.is_negative() {
                return Ok(-1);
            }
            spent += u64::from(prec);
            if spent > cap {
                return Err(Error::IndependenceSuspect { bits: spent });
            }
            prec = prec.saturating_mul(2);
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        Ok(match (self - other).sign()? {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    pub fn abs(&self) -> Result<Self> {
        Ok(if self.sign()? < 0 { -self } else { self.clone() })
    }

    /// Compares with a rational without building a scalar by hand.
    pub fn cmp_rational(&self, r: &Rational) -> Result<Ordering> {
        self.cmp_exact(&RealScalar::rational(&self.set, r.clone()))
    }

    /// Dyadic enclosure of width at most `width` (`width > 0`).
    pub fn enclose(&self, width: &Rational) -> DyadicInterval {
        assert!(width.is_positive(), "enclosure width must be positive");
        // smallest e with 2^-e <= width / 4
        let mut e: u32 = 0;
        let quarter = width / rational::int(4);
        while Rational::new(BigInt::one(), BigInt::one() << e) > quarter {
            e += 1;
        }
        let mut prec = e.max(64);
        loop {
            let iv = self.enclose_at(prec);
            let d = DyadicInterval::outward(&iv.lo, &iv.hi, prec.max(e));
            if &d.width() <= width {
                return d;
            }
            prec *= 2;
        }
    }
}

impl Add for &RealScalar {
    type Output = RealScalar;
    fn add(self, rhs: &RealScalar) -> RealScalar {
        self.check_set(rhs);
        RealScalar {
            set: self.set.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RealScalar {
    type Output = RealScalar;
    fn sub(self, rhs: &RealScalar) -> RealScalar {
        self.check_set(rhs);
        RealScalar {
            set: self.set.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RealScalar {
    type Output = RealScalar;
    fn neg(self) -> RealScalar {
        RealScalar {
            set: self.set.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for RealScalar {
    type Output = RealScalar;
    fn neg(self) -> RealScalar {
        -&self
    }
}

/// Exact `k . alpha`.
pub fn dot<I: Clone + Into<BigInt>>(k: &[I], alpha: &[RealScalar]) -> Result<RealScalar> {
    if k.len() != alpha.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            found: k.len(),
        });
    }
    let first = alpha
        .first()
        .ok_or_else(|| Error::Invalid("dot product of empty vectors".into()))?;
    let mut acc = RealScalar::zero(first.set());
    for (ki, ai) in k.iter().zip(alpha) {
        let ki: BigInt = ki.clone().into();
        if ki.is_zero() {
            continue;
        }
        acc = &acc + &ai.scale_int(&ki);
    }
    Ok(acc)
}

/// Exact `q * alpha - p` for integer `q` and integer vector `p`.
pub fn offset(q: &BigInt, alpha: &[RealScalar], p: &[BigInt]) -> Result<Vec<RealScalar>> {
    if p.len() != alpha.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            found: p.len(),
        });
    }
    Ok(alpha
        .iter()
        .zip(p)
        .map(|(a, pi)| a.scale_int(q).add_rational(&Rational::from_integer(-pi)))
        .collect())
}
