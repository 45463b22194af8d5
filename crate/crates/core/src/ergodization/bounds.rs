//! The explicit ergodization bound, its constructive realization through
//! periodic approximations, and the Diophantine majorant.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::approx::{find_periodic_basis, sup_at_most, ApproxPair};
use crate::error::{Error, Result};
use crate::lattice::rational_inverse;
use crate::rational::{self, Rational};
use crate::resonance::{psi, theorem1_delta_max, PsiValue, ResonanceData};
use crate::scalars::{DyadicInterval, F64Interval, Interval, RealScalar};

fn check_delta(r: &ResonanceData, delta: &Rational) -> Result<()> {
    r.require_normalized()?;
    if !delta.is_positive() {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let max = theorem1_delta_max(r);
    if *delta > max {
        return Err(Error::Hypothesis(format!(
            "delta = {} exceeds d^2 / ((n+2) Q_alpha) = {}",
            rational::format(delta),
            rational::format(&max)
        )));
    }
    Ok(())
}

/// `d^2 d! C_alpha`.
pub fn c_d_alpha(r: &ResonanceData) -> BigInt {
    let d = BigInt::from(r.d);
    &d * &d * rational::factorial(r.d) * &r.c_alpha
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Bound {
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub c_d_alpha: BigInt,
    /// The profile is evaluated at `2 C_{d,alpha} / delta`.
    pub psi: PsiValue,
    /// Enclosure of `C_{d,alpha} * Psi`.
    #[serde(serialize_with = "crate::report::ser_dyadic")]
    pub bound: DyadicInterval,
}

impl Theorem1Bound {
    /// Exact test of `t <= C_{d,alpha} Psi`.
    pub fn admits(&self, t: &Rational) -> Result<bool> {
        let c = Rational::from_integer(self.c_d_alpha.clone());
        Ok(self.psi.cmp_rational(&(t / c))? != Ordering::Greater)
    }

    pub fn upper(&self) -> Rational {
        self.bound.upper()
    }
}

/// `T(delta) <= C_{d,alpha} Psi(2 C_{d,alpha} / delta)` for
/// `0 < delta <= d^2 / ((n+2) Q_alpha)`.
pub fn theorem1_bound(r: &ResonanceData, delta: &Rational) -> Result<Theorem1Bound> {
    check_delta(r, delta)?;
    let c = c_d_alpha(r);
    let q = Rational::from_integer(&c * 2) / delta;
    let p = psi(r, &q)?;
    let bound = DyadicInterval {
        lo: &p.value.lo * &c,
        hi: &p.value.hi * &c,
        exp: p.value.exp,
    };
    Ok(Theorem1Bound {
        c_d_alpha: c,
        psi: p,
        bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HitReport {
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub target: Vec<Rational>,
    pub pairs: Vec<ApproxPair>,
    /// Coordinates of the target in the basis `p_j`, reduced to `[0, 1)`.
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub coefficients: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub t_star: Rational,
    /// `T* alpha - sum t_j p_j`, exactly; a lattice translate of `T* alpha - target`.
    #[serde(serialize_with = "crate::report::ser_scalars")]
    pub residual: Vec<RealScalar>,
    pub residual_upper: f64,
    pub within_delta: bool,
    pub bound: Theorem1Bound,
    pub within_bound: bool,
}

/// Hits the leaf point with lattice coordinates `target` within `delta`:
/// with periodic approximations at `Q = d^2 / delta`, the target is written
/// as `sum t_j p_j` modulo the lattice with `t_j in [0, 1)`, and the flow
/// reaches it at time `sum t_j q_j` up to the accumulated offsets
/// `t_j (q_j alpha - p_j)`.
pub fn constructive_hit(r: &ResonanceData, delta: &Rational, target: &[Rational]) -> Result<HitReport> {
    check_delta(r, delta)?;
    if target.len() != r.d {
        return Err(Error::DimensionMismatch {
            expected: r.d,
            found: target.len(),
        });
    }
    let d = r.d;
    let q = Rational::from_integer(BigInt::from(d * d)) / delta;
    let approx = find_periodic_basis(r, &q)?;
    let coords: Vec<Vec<Rational>> = approx
        .pairs
        .iter()
        .map(|p| {
            let v: Vec<Rational> = p.p.iter().map(|&x| rational::int(x)).collect();
            r.lattice
                .coordinates(&v)
                .ok_or_else(|| Error::Invalid("approximation vector outside the lattice".into()))
        })
        .collect::<Result<_>>()?;
    let inv = rational_inverse(&coords)
        .ok_or_else(|| Error::Invalid("approximation vectors are dependent".into()))?;
    // t P = target  =>  t = target P^{-1}
    let coefficients: Vec<Rational> = (0..d)
        .map(|j| {
            let t: Rational = (0..d).map(|k| &target[k] * &inv[k][j]).sum();
            &t - Rational::from_integer(rational::floor(&t))
        })
        .collect();
    let t_star: Rational = coefficients
        .iter()
        .zip(&approx.pairs)
        .map(|(t, p)| t * rational::int(p.q))
        .sum();
    let set = r.constant_set().clone();
    let mut residual = vec![RealScalar::zero(&set); r.n];
    for (t, p) in coefficients.iter().zip(&approx.pairs) {
        for (acc, off) in residual.iter_mut().zip(p.offset(&r.alpha)) {
            *acc = &*acc + &off.scale(t);
        }
    }
    let residual_upper = residual
        .iter()
        .map(|x| x.float().abs().hi)
        .fold(0.0, f64::max);
    let within_delta = sup_at_most(&residual, delta)?;
    let bound = theorem1_bound(r, delta)?;
    let within_bound = bound.admits(&t_star)?;
    Ok(HitReport {
        target: target.to_vec(),
        pairs: approx.pairs,
        coefficients,
        t_star,
        residual,
        residual_upper,
        within_delta,
        bound,
        within_bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiophantineReport {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub gamma: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub tau: Rational,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub c_d_alpha: BigInt,
    /// `2 C_{d,alpha} / delta`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub q: Rational,
    /// Enclosure of `C_{d,alpha} gamma^{-1} q^tau`.
    pub bound_lower: f64,
    pub bound_upper: f64,
    /// Exact value when `tau` is an integer.
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub bound_exact: Option<Rational>,
    /// `min |k.alpha| |k|^tau` over nonzero lattice vectors with `|k| <= q`.
    pub empirical_gamma: EmpiricalGamma,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalGamma {
    pub witness: Vec<i64>,
    pub lower: f64,
    pub upper: f64,
}

fn pow_interval(x: &F64Interval, tau: f64) -> F64Interval {
    // powf is not correctly rounded; widen by a few ulps on each side
    let lo = x.lo.powf(tau);
    let hi = x.hi.powf(tau);
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    let pad = |v: f64, up: bool| {
        let mut v = v;
        for _ in 0..4 {
            v = if up { v.next_up() } else { v.next_down() };
        }
        v
    };
    F64Interval::new(pad(lo, false).max(0.0), pad(hi, true))
}

/// `min_k |k.alpha| |k|^tau` over lattice vectors of sup norm at most `q`.
/// The minimum is attained at a witness of `Psi(h)` for some `h <= q`:
/// any `k` with `|k| = h` has `|k.alpha| h^tau >= |k_h|^tau / Psi(h)`.
pub fn empirical_gamma(r: &ResonanceData, q: &Rational, tau: &Rational) -> Result<EmpiricalGamma> {
    let qmax = rational::floor(q)
        .to_i64()
        .ok_or_else(|| Error::Overflow("query radius".into()))?;
    let start = r
        .q_alpha
        .to_i64()
        .ok_or_else(|| Error::Overflow("Q_alpha".into()))?;
    if qmax < start {
        return Err(Error::Domain("query radius below Q_alpha".into()));
    }
    let tf = rational::to_f64(tau);
    let mut best: Option<(F64Interval, Vec<i64>, RealScalar)> = None;
    let mut last: Option<Vec<i64>> = None;
    for h in start..=qmax {
        let p = psi(r, &rational::int(h))?;
        if last.as_ref() == Some(&p.witness) {
            continue;
        }
        last = Some(p.witness.clone());
        let norm = p.witness.iter().map(|x| x.abs()).max().unwrap_or(0);
        let g = p
            .min_abs_dot
            .float()
            .mul(&pow_interval(&F64Interval::exact(norm as f64), tf));
        best = match best {
            None => Some((g, p.witness, p.min_abs_dot)),
            Some(b) if g.hi < b.0.lo => Some((g, p.witness, p.min_abs_dot)),
            Some(b) => Some(b),
        };
    }
    let (g, witness, _) = best.expect("nonempty range");
    Ok(EmpiricalGamma {
        witness,
        lower: g.lo,
        upper: g.hi,
    })
}

/// The bound with `Psi(Q)` replaced by `gamma^{-1} Q^tau`, after checking
/// that the enumerated lattice vectors do not falsify the Diophantine
/// condition `|k.alpha| >= gamma |k|^{-tau}`.
pub fn diophantine_bound(
    r: &ResonanceData,
    gamma: &Rational,
    tau: &Rational,
    delta: &Rational,
) -> Result<DiophantineReport> {
    check_delta(r, delta)?;
    if !gamma.is_positive() {
        return Err(Error::Domain("gamma must be positive".into()));
    }
    if *tau < rational::int(r.n as i64 - 1) {
        return Err(Error::Domain(format!("tau must be at least n - 1 = {}", r.n - 1)));
    }
    let c = c_d_alpha(r);
    let q = Rational::from_integer(&c * 2) / delta;
    let emp = empirical_gamma(r, &q, tau)?;
    let gamma_f = F64Interval::point(gamma);
    if gamma_f.lo > emp.upper {
        return Err(Error::Hypothesis(format!(
            "gamma = {} is falsified: the lattice vector {:?} gives |k.alpha| |k|^tau <= {:.6}",
            rational::format(gamma),
            emp.witness,
            emp.upper
        )));
    }
    let cq = Rational::from_integer(c.clone());
    let bound_exact = if tau.is_integer() {
        let e = tau
            .to_integer()
            .to_u32()
            .ok_or_else(|| Error::Overflow("tau".into()))?;
        let mut pw = Rational::one();
        for _ in 0..e {
            pw *= &q;
        }
        Some(&cq / gamma * pw)
    } else {
        None
    };
    let (bound_lower, bound_upper) = match &bound_exact {
        Some(b) => {
            let f = F64Interval::point(b);
            (f.lo, f.hi)
        }
        None => {
            let f = F64Interval::point(&cq)
                .div(&gamma_f)
                .expect("positive gamma")
                .mul(&pow_interval(&F64Interval::point(&q), rational::to_f64(tau)));
            (f.lo, f.hi)
        }
    };
    Ok(DiophantineReport {
        gamma: gamma.clone(),
        tau: tau.clone(),
        c_d_alpha: c,
        q,
        bound_lower,
        bound_upper,
        bound_exact,
        empirical_gamma: emp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::resonance::analyze;
    use crate::scalars::{BasisConstant, ConstantSet};
    use std::sync::Arc;

    fn sqrt2() -> ResonanceData {
        let set = Arc::new(
            ConstantSet::new(vec![BasisConstant::one("1"), BasisConstant::sqrt("s2", 2).unwrap()]).unwrap(),
        );
        analyze(vec![RealScalar::integer(&set, 1), RealScalar::constant(&set, 1)]).unwrap()
    }

    #[test]
    fn bound_values() {
        let r = sqrt2();
        let b = theorem1_bound(&r, &int(1)).unwrap();
        assert_eq!(b.c_d_alpha, BigInt::from(8));
        // 8 Psi(16) = 8 (7 + 5 sqrt2) = 112.57
        assert!(b.bound.lower_f64() < 112.5686 && b.bound.upper_f64() > 112.5685);
        assert!(b.admits(&ratio(11256, 100)).unwrap());
        assert!(!b.admits(&ratio(11257, 100)).unwrap());
        let b = theorem1_bound(&r, &ratio(1, 2)).unwrap();
        // 8 Psi(32) = 8 (17 + 12 sqrt2) = 271.76
        assert!(b.bound.lower_f64() < 271.76451 && b.bound.upper_f64() > 271.76449);
        assert!(matches!(theorem1_bound(&r, &ratio(3, 2)), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn hit_example() {
        let r = sqrt2();
        let h = constructive_hit(&r, &ratio(1, 2), &[ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(h.t_star, ratio(5, 2));
        assert!(h.residual_upper <= 0.0356);
        assert!(h.within_delta && h.within_bound);
        let h = constructive_hit(&r, &ratio(1, 2), &[int(0), int(0)]).unwrap();
        assert_eq!(h.t_star, int(0));
        assert!(h.residual.iter().all(RealScalar::is_zero));
    }

    #[test]
    fn hit_on_rational_leaf_is_exact() {
        let set = Arc::new(ConstantSet::rational());
        let r = analyze(vec![RealScalar::integer(&set, 1), RealScalar::rational(&set, ratio(1, 2))]).unwrap();
        let h = constructive_hit(&r, &ratio(1, 8), &[ratio(1, 2)]).unwrap();
        assert_eq!(h.t_star, int(1));
        assert!(h.residual.iter().all(RealScalar::is_zero));
    }

    #[test]
    fn diophantine_gate() {
        let r = sqrt2();
        // gamma = 1 fails already at k = (-1, 1): |sqrt2 - 1| * 1 < 1
        assert!(matches!(diophantine_bound(&r, &int(1), &int(1), &int(1)), Err(Error::Hypothesis(_))));
        let rep = diophantine_bound(&r, &ratio(1, 3), &int(1), &int(1)).unwrap();
        // 8 * 3 * 16
        assert_eq!(rep.bound_exact, Some(int(384)));
        let b = theorem1_bound(&r, &int(1)).unwrap();
        assert!(rep.bound_lower >= b.bound.upper_f64());
        // attained by (-1, 1): sqrt2 - 1; (-7, 5) gives 7 (5 sqrt2 - 7) = 0.4975
        assert_eq!(rep.empirical_gamma.witness, vec![-1, 1]);
        assert!(rep.empirical_gamma.lower < 0.414214 && rep.empirical_gamma.upper > 0.414213);
    }
}
