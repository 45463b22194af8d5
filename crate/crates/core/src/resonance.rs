//! Resonance analysis of a direction vector: the rational subspace it spans,
//! the lattice of integer points in it, the lattice constants, and the
//! resonance profile `Psi(Q) = max { 1/|k.alpha| : k in Lambda, 0 < |k| <= Q }`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    gram_det, integer_kernel_rational, orthogonal_integer_complement, shortest_vector,
    EchelonBasis, IntLattice, NormKind,
};
use crate::rational::{self, Rational};
use crate::scalars::{dot, ConstantSet, DyadicInterval, F64Interval, Interval, RealScalar};

/// Width of the enclosures attached to reported `Psi` values.
pub const PSI_ENCLOSURE_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct ResonanceData {
    pub n: usize,
    /// The direction as given.
    #[serde(serialize_with = "crate::report::ser_scalars")]
    pub raw_alpha: Vec<RealScalar>,
    /// `scale * raw_alpha`; has a component equal to one when `normalized`.
    #[serde(serialize_with = "crate::report::ser_scalars")]
    pub alpha: Vec<RealScalar>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub scale: Rational,
    pub normalized: bool,
    /// Dimension of the smallest rational subspace containing alpha.
    pub d: usize,
    /// Integer vectors orthogonal to alpha.
    pub kernel: IntLattice,
    /// Integer points of the rational span of alpha.
    pub lattice: IntLattice,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub q_alpha: BigInt,
    pub shortest: Vec<i64>,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub c_alpha: BigInt,
    /// Coordinates of the normalized direction in the lattice basis.
    #[serde(serialize_with = "crate::report::ser_scalars")]
    pub coordinates: Vec<RealScalar>,
}

fn constant_set(alpha: &[RealScalar]) -> Result<Arc<ConstantSet>> {
    let set = alpha.first().ok_or(Error::ZeroVector)?.set().clone();
    if alpha.iter().any(|a| **a.set() != *set) {
        return Err(Error::ConstantSetMismatch);
    }
    Ok(set)
}

/// Rational factor `c` such that `c * alpha` has a component exactly one:
/// the reciprocal of the rational component of largest magnitude.
fn normalization(alpha: &[RealScalar]) -> Result<Option<Rational>> {
    let mut best: Option<Rational> = None;
    for a in alpha {
        if let Some(r) = a.as_rational() {
            if !r.is_zero() && best.as_ref().map_or(true, |b| r.abs() > b.abs()) {
                best = Some(r);
            }
        }
    }
    Ok(best.map(|b| b.recip()))
}

/// Computes the resonance structure of `alpha`. Exactness of `k . alpha = 0`
/// rests on the declared independence of the constants: `k` annihilates
/// alpha iff it annihilates every constant's coefficient row.
pub fn analyze(alpha: Vec<RealScalar>) -> Result<ResonanceData> {
    let set = constant_set(&alpha)?;
    if alpha.iter().all(RealScalar::is_zero) {
        return Err(Error::ZeroVector);
    }
    let n = alpha.len();
    let rows: Vec<Vec<Rational>> = (0..set.len())
        .map(|c| alpha.iter().map(|a| a.coeffs()[c].clone()).collect())
        .collect();
    let kernel = integer_kernel_rational(&rows, n);
    let lattice = orthogonal_integer_complement(&kernel);
    let d = lattice.rank();
    let (shortest, q) = shortest_vector(&lattice, NormKind::Sup)?;
    let c_alpha = gram_det(&lattice)?;
    let (scale, normalized) = match normalization(&alpha)? {
        Some(s) => (s, true),
        None => (Rational::one(), false),
    };
    let normalized_alpha: Vec<RealScalar> = alpha.iter().map(|a| a.scale(&scale)).collect();
    let coordinates = basis_coordinates(&lattice, &normalized_alpha)?;
    Ok(ResonanceData {
        n,
        raw_alpha: alpha,
        alpha: normalized_alpha,
        scale,
        normalized,
        d,
        kernel,
        lattice,
        q_alpha: q.to_integer(),
        shortest,
        c_alpha,
        coordinates,
    })
}

/// Triangular solve on the pivot columns of the echelon basis; exact because
/// the vector lies in the span.
fn basis_coordinates(l: &IntLattice, v: &[RealScalar]) -> Result<Vec<RealScalar>> {
    let rows = l.basis().to_rows();
    let pivots = l.pivots();
    let mut c: Vec<RealScalar> = Vec::with_capacity(rows.len());
    for (j, &col) in pivots.iter().enumerate() {
        let mut acc = v[col].clone();
        for (i, ci) in c.iter().enumerate() {
            if !rows[i][col].is_zero() {
                acc = &acc - &ci.scale_int(&rows[i][col]);
            }
        }
        c.push(acc.scale(&Rational::new(BigInt::one(), rows[j][col].clone())));
    }
    for (col, x) in v.iter().enumerate() {
        let mut acc = x.clone();
        for (i, ci) in c.iter().enumerate() {
            acc = &acc - &ci.scale_int(&rows[i][col]);
        }
        if !acc.is_zero() {
            return Err(Error::Invalid("vector is not in the span of the lattice".into()));
        }
    }
    Ok(c)
}

impl ResonanceData {
    pub fn constant_set(&self) -> &Arc<ConstantSet> {
        self.alpha[0].set()
    }

    /// Sup norm of the normalized direction.
    pub fn alpha_sup(&self) -> Result<RealScalar> {
        let mut best = self.alpha[0].abs()?;
        for a in &self.alpha[1..] {
            let v = a.abs()?;
            if v.cmp_exact(&best)? == Ordering::Greater {
                best = v;
            }
        }
        Ok(best)
    }

    /// `k . alpha` for the normalized direction.
    pub fn dot(&self, k: &[i64]) -> Result<RealScalar> {
        dot(k, &self.alpha)
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::Hypothesis(
                "the direction has no rational component, so it cannot be scaled to have a component equal to one".into(),
            ))
        }
    }
}

/// Largest `delta` allowed by the hypothesis `delta <= d^2 / ((n+2) Q_alpha)`.
pub fn theorem1_delta_max(r: &ResonanceData) -> Rational {
    let d = BigInt::from(r.d);
    Rational::new(&d * &d, BigInt::from(r.n + 2) * &r.q_alpha)
}

/// A value of the resonance profile with its witness.
#[derive(Debug, Clone, Serialize)]
pub struct PsiValue {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub q: Rational,
    pub witness: Vec<i64>,
    /// `|witness . alpha|`, exactly.
    #[serde(serialize_with = "crate::report::ser_scalar")]
    pub min_abs_dot: RealScalar,
    /// Enclosure of `1 / |witness . alpha|`.
    #[serde(serialize_with = "crate::report::ser_dyadic")]
    pub value: DyadicInterval,
}

impl PsiValue {
    /// Exact comparison of `t` against the profile value: sign of `t - Psi`.
    pub fn cmp_rational(&self, t: &Rational) -> Result<Ordering> {
        // t - 1/m has the sign of t*m - 1 since m > 0
        self.min_abs_dot.scale(t).cmp_rational(&Rational::one())
    }

    /// Exact comparison of two profile values.
    pub fn cmp_value(&self, other: &PsiValue) -> Result<Ordering> {
        Ok(other.min_abs_dot.cmp_exact(&self.min_abs_dot)?)
    }

    pub fn upper_f64(&self) -> f64 {
        self.value.upper_f64()
    }

    pub fn lower_f64(&self) -> f64 {
        self.value.lower_f64()
    }

    /// Exact integer part of the value.
    pub fn floor(&self) -> Result<BigInt> {
        self.floor_scaled(&Rational::one())
    }

    /// Exact integer part of `c * Psi` for `c > 0`.
    pub fn floor_scaled(&self, c: &Rational) -> Result<BigInt> {
        let mut guess = rational::floor(&(self.value.lower() * c));
        // g <= c/m <=> g*m <= c
        let le = |g: &BigInt| -> Result<bool> {
            let t = Rational::from_integer(g.clone()) / c;
            Ok(self.cmp_rational(&t)? != Ordering::Greater)
        };
        loop {
            if !le(&guess)? {
                guess -= 1;
            } else if le(&(&guess + 1))? {
                guess += 1;
            } else {
                return Ok(guess);
            }
        }
    }
}

/// Enclosure of `1 / m` for a positive scalar `m`, of width at most `width`.
pub fn reciprocal_enclosure(m: &RealScalar, width: f64) -> DyadicInterval {
    let target = Rational::from_float(width).expect("finite width");
    let mut w = target.clone();
    loop {
        let e = m.enclose(&w);
        let lo = e.lower();
        if lo.is_positive() {
            let inv_lo = e.upper().recip();
            let inv_hi = lo.recip();
            let exp = e.exp + 8;
            let out = DyadicInterval::outward(&inv_lo, &inv_hi, exp);
            if out.width() <= target {
                return out;
            }
        }
        w = w / rational::int(16);
    }
}

struct Contender {
    value: F64Interval,
    k: Vec<i64>,
}

/// `Psi_alpha(Q)` by walking the lattice coefficients: for each prefix the
/// best last coefficient is found from the real minimizer of
/// `|s + x beta|`; candidates are filtered with outward-rounded doubles and
/// the survivors compared exactly.
pub fn psi(r: &ResonanceData, q: &Rational) -> Result<PsiValue> {
    if *q < Rational::from_integer(r.q_alpha.clone()) {
        return Err(Error::Domain(format!(
            "Psi is undefined for Q = {} below Q_alpha = {}",
            rational::format(q),
            r.q_alpha
        )));
    }
    let qi = rational::floor(q)
        .to_i64()
        .ok_or_else(|| Error::Overflow("Q exceeds i64".into()))?;
    let basis = EchelonBasis::new(&r.lattice)?;
    let d = basis.rank();
    let betas: Vec<RealScalar> = basis
        .rows()
        .iter()
        .map(|row| dot(row, &r.alpha))
        .collect::<Result<_>>()?;
    let bf: Vec<F64Interval> = betas.iter().map(RealScalar::float).collect();
    let last = &bf[d - 1];

    let mut best_hi = f64::INFINITY;
    let mut contenders: Vec<Contender> = Vec::new();

    basis.walk_last_level(qi, |partial, coeffs, (lo, hi)| {
        let mut s = F64Interval::exact(0.0);
        for (c, b) in coeffs.iter().zip(&bf) {
            if *c != 0 {
                s = s.add(&F64Interval::from_i64(*c).mul(b));
            }
        }
        let prefix_zero = coeffs.iter().all(|&c| c == 0);
        let (xa, xb) = match s.neg().div(last) {
            Some(x) if x.lo.is_finite() && x.hi.is_finite() => {
                let a = (x.lo.floor() as i64).clamp(lo, hi);
                let b = (x.hi.ceil() as i64).clamp(lo, hi);
                (a, b)
            }
            _ => (lo, hi),
        };
        let mut consider = |x: i64| {
            if prefix_zero && x == 0 {
                return;
            }
            let v = s.add(&F64Interval::from_i64(x).mul(last)).abs();
            if v.lo > best_hi {
                return;
            }
            if v.hi < best_hi {
                best_hi = v.hi;
            }
            let k = basis.extend(d - 1, partial, x);
            contenders.push(Contender { value: v, k });
            if contenders.len() > 256 {
                let cut = best_hi;
                contenders.retain(|c| c.value.lo <= cut);
            }
        };
        for x in xa..=xb {
            consider(x);
        }
        if prefix_zero {
            // the minimizer 0 is excluded; the nearest nonzero coefficients win
            for x in [-1, 1] {
                if (lo..=hi).contains(&x) && !(xa..=xb).contains(&x) {
                    consider(x);
                }
            }
        }
    });

    let cut = best_hi;
    contenders.retain(|c| c.value.lo <= cut);
    let mut best: Option<(RealScalar, Vec<i64>)> = None;
    for c in contenders {
        let m = dot(&c.k, &r.alpha)?.abs()?;
        best = match best {
            None => Some((m, c.k)),
            Some((bm, bk)) => match m.cmp_exact(&bm)? {
                Ordering::Less => Some((m, c.k)),
                Ordering::Equal if c.k < bk => Some((m, c.k)),
                _ => Some((bm, bk)),
            },
        };
    }
    let (m, k) = best.ok_or_else(|| {
        Error::Domain(format!("no lattice vector with sup norm at most {qi}"))
    })?;
    let value = reciprocal_enclosure(&m, PSI_ENCLOSURE_WIDTH);
    Ok(PsiValue {
        q: q.clone(),
        witness: k,
        min_abs_dot: m,
        value,
    })
}
