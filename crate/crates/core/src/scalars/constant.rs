use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use super::interval::F64Interval;

/// How a basis constant is defined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    One,
    /// Square root of a square-free integer `m >= 2`.
    Sqrt(u64),
    /// The unique real root of `sum coefficients[i] x^i` inside `[lower, upper]`.
    Root {
        coefficients: Vec<BigInt>,
        lower: Rational,
        upper: Rational,
    },
}

/// A named real constant with an evaluator producing dyadic enclosures of any
/// requested precision.
pub struct BasisConstant {
    symbol: String,
    kind: ConstantKind,
    float: OnceLock<F64Interval>,
    // Best enclosure computed so far for roots: (precision, lo, hi).
    cache: Mutex<Option<(u32, BigInt, BigInt)>>,
}

impl fmt::Debug for BasisConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasisConstant")
            .field("symbol", &self.symbol)
            .field("kind", &self.kind)
            .finish()
    }
}

impl Clone for BasisConstant {
    fn clone(&self) -> Self {
        BasisConstant {
            symbol: self.symbol.clone(),
            kind: self.kind.clone(),
            float: self.float.clone(),
            cache: Mutex::new(self.cache.lock().map(|c| c.clone()).unwrap_or(None)),
        }
    }
}

impl PartialEq for BasisConstant {
    fn eq(&self, other: &Self) -> bool {
        self.symbol == other.symbol && self.kind == other.kind
    }
}

impl Eq for BasisConstant {}

fn is_square_free(m: u64) -> bool {
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

fn eval_poly(coefficients: &[BigInt], x: &Rational) -> Rational {
    coefficients
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl BasisConstant {
    pub fn one(symbol: impl Into<String>) -> Self {
        Self::build(symbol.into(), ConstantKind::One)
    }

    pub fn sqrt(symbol: impl Into<String>, m: u64) -> Result<Self> {
        if m < 2 || !is_square_free(m) {
            return Err(Error::Invalid(format!(
                "sqrt({m}): radicand must be a square-free integer >= 2"
            )));
        }
        Ok(Self::build(symbol.into(), ConstantKind::Sqrt(m)))
    }

    /// Real root of the integer polynomial with the given coefficients (constant
    /// term first) isolated by `[lower, upper]`. The polynomial must change sign
    /// strictly across the interval.
    pub fn root(
        symbol: impl Into<String>,
        coefficients: Vec<BigInt>,
        lower: Rational,
        upper: Rational,
    ) -> Result<Self> {
        if coefficients.len() < 2 || coefficients.last().map_or(true, Zero::is_zero) {
            return Err(Error::Invalid("root polynomial must have degree >= 1".into()));
        }
        if lower >= upper {
            return Err(Error::Invalid("isolating interval must have lower < upper".into()));
        }
        let sa = sign_of(&eval_poly(&coefficients, &lower));
        let sb = sign_of(&eval_poly(&coefficients, &upper));
        if sa * sb >= 0 {
            return Err(Error::Invalid(
                "polynomial does not change sign strictly across the isolating interval".into(),
            ));
        }
        Ok(Self::build(
            symbol.into(),
            ConstantKind::Root {
                coefficients,
                lower,
                upper,
            },
        ))
    }

    pub fn from_kind(symbol: impl Into<String>, kind: ConstantKind) -> Result<Self> {
        match kind {
            ConstantKind::One => Ok(Self::one(symbol)),
            ConstantKind::Sqrt(m) => Self::sqrt(symbol, m),
            ConstantKind::Root {
                coefficients,
                lower,
                upper,
            } => Self::root(symbol, coefficients, lower, upper),
        }
    }

    fn build(symbol: String, kind: ConstantKind) -> Self {
        BasisConstant {
            symbol,
            kind,
            float: OnceLock::new(),
            cache: Mutex::new(None),
        }
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn kind(&self) -> &ConstantKind {
        &self.kind
    }

    pub fn is_one(&self) -> bool {
        matches!(self.kind, ConstantKind::One)
    }

    /// Returns integers `(lo, hi)` with `lo / 2^prec <= value <= hi / 2^prec`
    /// and `hi - lo <= 2`. Enclosures at increasing precision are nested.
    pub fn enclose(&self, prec: u32) -> (BigInt, BigInt) {
        match &self.kind {
            ConstantKind::One => {
                let v = BigInt::one() << prec;
                (v.clone(), v)
            }
            ConstantKind::Sqrt(m) => {
                let scaled = BigInt::from(*m) << (2 * prec);
                let s = scaled.sqrt();
                if &s * &s == scaled {
                    (s.clone(), s)
                } else {
                    let hi = &s + 1;
                    (s, hi)
                }
            }
            ConstantKind::Root {
                coefficients,
                lower,
                upper,
            } => self.enclose_root(prec, coefficients, lower, upper),
        }
    }

    fn enclose_root(
        &self,
        prec: u32,
        coefficients: &[BigInt],
        lower: &Rational,
        upper: &Rational,
    ) -> (BigInt, BigInt) {
        if let Ok(guard) = self.cache.lock() {
            if let Some((p, lo, hi)) = guard.as_ref() {
                if *p >= prec {
                    let shift = p - prec;
                    let lo = lo >> shift;
                    let hi = -((-hi) >> shift);
                    return (lo, hi);
                }
            }
        }
        let target = Rational::new(BigInt::one(), BigInt::one() << prec);
        let mut lo = lower.clone();
        let mut hi = upper.clone();
        let s_lo = sign_of(&eval_poly(coefficients, &lo));
        while &hi - &lo > target {
            let mid = (&lo + &hi) / rational::int(2);
            let s = sign_of(&eval_poly(coefficients, &mid));
            if s == 0 {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if s == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let scale = Rational::from_integer(BigInt::one() << prec);
        let lo_i = rational::floor(&(&lo * &scale));
        let hi_i = rational::ceil(&(&hi * &scale));
        if let Ok(mut guard) = self.cache.lock() {
            if guard.as_ref().map_or(true, |(p, _, _)| *p < prec) {
                *guard = Some((prec, lo_i.clone(), hi_i.clone()));
            }
        }
        (lo_i, hi_i)
    }

    /// Outward-rounded double precision enclosure.
    pub fn float(&self) -> F64Interval {
        *self.float.get_or_init(|| {
            let (lo, hi) = self.enclose(80);
            let den = BigInt::one() << 80u32;
            F64Interval::from_rationals(
                &BigRational::new(lo, den.clone()),
                &BigRational::new(hi, den),
            )
        })
    }
}

/// The ordered set of constants over which scalars are expressed. Always
/// contains the constant one; the constants are trusted to be linearly
/// independent over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantSet {
    constants: Vec<BasisConstant>,
    one: usize,
}

impl ConstantSet {
    pub fn new(mut constants: Vec<BasisConstant>) -> Result<Self> {
        let ones: Vec<usize> = constants
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_one())
            .map(|(i, _)| i)
            .collect();
        let one = match ones.as_slice() {
            [] => {
                constants.insert(0, BasisConstant::one("1"));
                0
            }
            [i] => *i,
            _ => return Err(Error::Invalid("constant one declared more than once".into())),
        };
        for (i, a) in constants.iter().enumerate() {
            for b in &constants[i + 1..] {
                if a.symbol == b.symbol {
                    return Err(Error::Invalid(format!("duplicate constant symbol {:?}", a.symbol)));
                }
                if a.kind == b.kind {
                    return Err(Error::Invalid(format!(
                        "constants {:?} and {:?} coincide",
                        a.symbol, b.symbol
                    )));
                }
            }
        }
        Ok(ConstantSet { constants, one })
    }

    /// Only the constant one.
    pub fn rational() -> Self {
        ConstantSet {
            constants: vec![BasisConstant::one("1")],
            one: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }

    pub fn one_index(&self) -> usize {
        self.one
    }

    pub fn get(&self, i: usize) -> &BasisConstant {
        &self.constants[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &BasisConstant> {
        self.constants.iter()
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.constants.iter().position(|c| c.symbol == symbol)
    }
}
