//! Rotations of the circle `R/Z` by a fixed angle: exact gap structure of
//! finite orbits, the number of steps needed to become delta-dense, and
//! Dirichlet approximation pairs.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::resonance::{analyze, psi, PsiValue};
use crate::scalars::RealScalar;

/// Orbits longer than this are not searched.
pub const MAX_STEPS: u64 = 50_000_000;

/// A rotation angle in `(-1, 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct RotationNumber {
    #[serde(serialize_with = "crate::report::ser_scalar")]
    pub alpha: RealScalar,
    /// `(p, q)` in lowest terms with `q > 0` when the angle is rational.
    #[serde(skip)]
    pub rational: Option<(BigInt, BigInt)>,
    pub is_rational: bool,
}

impl RotationNumber {
    pub fn new(alpha: RealScalar) -> Result<Self> {
        let one = RealScalar::integer(alpha.set(), 1);
        if alpha.cmp_exact(&one)? == Ordering::Greater || alpha.cmp_exact(&-one)? != Ordering::Greater
        {
            return Err(Error::Domain(format!("rotation number {alpha} is not in (-1, 1]")));
        }
        let rational = alpha
            .as_rational()
            .map(|r| (r.numer().clone(), r.denom().clone()));
        Ok(RotationNumber {
            is_rational: rational.is_some(),
            alpha,
            rational,
        })
    }

    pub fn from_rational(set: &Arc<crate::scalars::ConstantSet>, r: Rational) -> Result<Self> {
        Self::new(RealScalar::rational(set, r))
    }

    fn set(&self) -> &Arc<crate::scalars::ConstantSet> {
        self.alpha.set()
    }

    /// `i alpha - m` as an exact scalar.
    fn affine(&self, i: i64, m: &BigInt) -> RealScalar {
        self.alpha
            .scale_int(&BigInt::from(i))
            .add_rational(&Rational::from_integer(-m))
    }
}

/// Exact integer part of a scalar.
pub fn floor_scalar(x: &RealScalar) -> Result<BigInt> {
    if let Some(r) = x.as_rational() {
        return Ok(rational::floor(&r));
    }
    let f = x.float();
    let mut g = if f.lo.is_finite() && f.hi.is_finite() && f.lo.floor() == f.hi.floor() {
        return Ok(BigInt::from(f.lo.floor() as i64));
    } else if f.lo.is_finite() && f.lo.abs() < 9.0e15 {
        BigInt::from(f.lo.floor() as i64)
    } else {
        rational::floor(&x.enclose(&Rational::one()).lower())
    };
    loop {
        if x.cmp_rational(&Rational::from_integer(g.clone()))? == Ordering::Less {
            g -= 1;
        } else if x.cmp_rational(&Rational::from_integer(&g + 1))? != Ordering::Less {
            g += 1;
        } else {
            return Ok(g);
        }
    }
}

#[derive(Debug, Clone)]
struct OrbitPoint {
    i: i64,
    m: BigInt,
}

/// Sorted orbit points `{i alpha}` with their circular gaps kept as exact
/// scalars, updated one point at a time.
#[derive(Debug, Clone)]
pub struct GapTracker {
    rot: RotationNumber,
    threshold: Option<Rational>,
    points: Vec<OrbitPoint>,
    /// Gap length to (multiplicity, exceeds threshold).
    gaps: HashMap<RealScalar, (usize, bool)>,
    big: usize,
    n: u64,
}

impl GapTracker {
    /// Orbit `{0}`; gaps longer than `threshold` are counted as they appear.
    pub fn new(rot: &RotationNumber, threshold: Option<Rational>) -> Result<Self> {
        let mut t = GapTracker {
            rot: rot.clone(),
            threshold,
            points: vec![OrbitPoint {
                i: 0,
                m: BigInt::zero(),
            }],
            gaps: HashMap::new(),
            big: 0,
            n: 0,
        };
        let full = RealScalar::integer(rot.set(), 1);
        t.add_gap(full)?;
        Ok(t)
    }

    /// Current orbit length parameter `N` (points `0, alpha, ..., N alpha`).
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn big_gaps(&self) -> usize {
        self.big
    }

    pub fn distinct_gaps(&self) -> usize {
        self.gaps.len()
    }

    fn value(&self, p: &OrbitPoint) -> RealScalar {
        self.rot.affine(p.i, &p.m)
    }

    /// Gap from `a` forward to `b`, adding one when it wraps past zero.
    fn gap(&self, a: &OrbitPoint, b: &OrbitPoint, wrap: bool) -> RealScalar {
        let m = &b.m - &a.m - if wrap { BigInt::one() } else { BigInt::zero() };
        self.rot.affine(b.i - a.i, &m)
    }

    fn is_big(&self, g: &RealScalar) -> Result<bool> {
        match &self.threshold {
            Some(t) => Ok(g.cmp_rational(t)? == Ordering::Greater),
            None => Ok(false),
        }
    }

    fn add_gap(&mut self, g: RealScalar) -> Result<()> {
        if let Some(e) = self.gaps.get_mut(&g) {
            e.0 += 1;
            if e.1 {
                self.big += 1;
            }
            return Ok(());
        }
        let big = self.is_big(&g)?;
        if big {
            self.big += 1;
        }
        self.gaps.insert(g, (1, big));
        Ok(())
    }

    fn remove_gap(&mut self, g: &RealScalar) {
        let e = self.gaps.get_mut(g).expect("tracked gap");
        e.0 -= 1;
        if e.1 {
            self.big -= 1;
        }
        if e.0 == 0 {
            self.gaps.remove(g);
        }
    }

    /// Adds the point `(N + 1) alpha`.
    pub fn step(&mut self) -> Result<()> {
        let i = i64::try_from(self.n + 1).map_err(|_| Error::Overflow("orbit length".into()))?;
        let m = floor_scalar(&self.rot.alpha.scale_int(&BigInt::from(i)))?;
        let p = OrbitPoint { i, m };
        let x = self.value(&p);
        // first index whose value is >= x; index 0 holds the point 0 <= x
        let mut lo = 1;
        let mut hi = self.points.len();
        let mut duplicate = false;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.value(&self.points[mid]).cmp_exact(&x)? {
                Ordering::Less => lo = mid + 1,
                Ordering::Equal => {
                    duplicate = true;
                    break;
                }
                Ordering::Greater => hi = mid,
            }
        }
        if !duplicate && x.is_zero() {
            duplicate = true;
        }
        self.n += 1;
        if duplicate {
            return Ok(());
        }
        let prev = self.points[lo - 1].clone();
        let wraps = lo == self.points.len();
        let next = if wraps {
            self.points[0].clone()
        } else {
            self.points[lo].clone()
        };
        let old = self.gap(&prev, &next, wraps);
        self.remove_gap(&old);
        let left = self.gap(&prev, &p, false);
        let right = self.gap(&p, &next, wraps);
        self.add_gap(left)?;
        self.add_gap(right)?;
        self.points.insert(lo, p);
        Ok(())
    }

    /// All gaps in circular order starting from zero.
    pub fn gaps_in_order(&self) -> Vec<RealScalar> {
        let k = self.points.len();
        (0..k)
            .map(|j| {
                let wraps = j + 1 == k;
                self.gap(&self.points[j], &self.points[(j + 1) % k], wraps)
            })
            .collect()
    }

    /// Distinct gap lengths in increasing order with multiplicities.
    pub fn distinct_sorted(&self) -> Result<Vec<(RealScalar, usize)>> {
        let mut v: Vec<(RealScalar, usize)> =
            self.gaps.iter().map(|(g, (c, _))| (g.clone(), *c)).collect();
        let mut err = None;
        v.sort_by(|a, b| {
            a.0.cmp_exact(&b.0).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Ordering::Equal
            })
        });
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GapProfile {
    pub n: u64,
    /// Gap lengths in increasing order, one per orbit point (duplicate
    /// points of a rational rotation are merged).
    #[serde(serialize_with = "crate::report::ser_scalars")]
    pub gaps: Vec<RealScalar>,
    pub distinct: usize,
    #[serde(serialize_with = "crate::report::ser_scalar")]
    pub max_gap: RealScalar,
    /// The gaps add up to exactly one.
    pub sums_to_one: bool,
}

/// Sorted circular gaps of `{0, alpha, ..., N alpha}` mod 1.
pub fn gap_profile(rot: &RotationNumber, n: u64) -> Result<GapProfile> {
    let mut t = GapTracker::new(rot, None)?;
    for _ in 0..n {
        t.step()?;
    }
    let distinct = t.distinct_sorted()?;
    let mut gaps = Vec::with_capacity(t.point_count());
    let mut sum = RealScalar::zero(rot.set());
    for (g, c) in &distinct {
        for _ in 0..*c {
            gaps.push(g.clone());
        }
        sum = &sum + &g.scale_int(&BigInt::from(*c));
    }
    Ok(GapProfile {
        n,
        max_gap: distinct.last().expect("at least one gap").0.clone(),
        distinct: distinct.len(),
        sums_to_one: sum == RealScalar::integer(rot.set(), 1),
        gaps,
    })
}

fn check_delta(delta: &Rational) -> Result<()> {
    if !delta.is_positive() || *delta >= Rational::one() {
        return Err(Error::Domain(format!(
            "delta = {} is not in (0, 1)",
            rational::format(delta)
        )));
    }
    Ok(())
}

/// Smallest `N` such that `{0, alpha, ..., N alpha}` is delta-dense in the
/// circle, i.e. every circular gap is at most `2 delta`. `None` for a
/// rational angle `p/q` with `delta < 1/q`.
pub fn ergodization_steps(rot: &RotationNumber, delta: &Rational) -> Result<Option<u64>> {
    check_delta(delta)?;
    if let Some((_, q)) = &rot.rational {
        if *delta < Rational::new(BigInt::one(), q.clone()) {
            return Ok(None);
        }
    }
    let mut t = GapTracker::new(rot, Some(delta * rational::int(2)))?;
    while t.big_gaps() > 0 {
        if t.n() >= MAX_STEPS {
            return Err(Error::Overflow(format!("no dense orbit within {MAX_STEPS} steps")));
        }
        t.step()?;
    }
    Ok(Some(t.n()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirichletPair {
    pub q: i64,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub p: BigInt,
}

/// Smallest `q` in `1..=q_max` with `|q alpha - p| <= eps` for the nearest
/// integer `p`.
fn dirichlet_scan(rot: &RotationNumber, q_max: &BigInt, eps: &RealScalar) -> Result<Option<DirichletPair>> {
    let q_max = q_max
        .to_i64()
        .ok_or_else(|| Error::Overflow("approximation range too large".into()))?;
    let half = rational::ratio(1, 2);
    for q in 1..=q_max {
        let qa = rot.alpha.scale_int(&BigInt::from(q));
        let p = floor_scalar(&qa.add_rational(&half))?;
        let err = qa.add_rational(&Rational::from_integer(-&p)).abs()?;
        if err.cmp_exact(eps)? != Ordering::Greater {
            if !BigInt::from(q).gcd(&p).is_one() {
                return Err(Error::PropositionViolation(format!(
                    "minimal approximation ({q}, {p}) is not in lowest terms"
                )));
            }
            return Ok(Some(DirichletPair { q, p }));
        }
    }
    Ok(None)
}

/// Smallest `q <= Q` admitting `p` with `|q alpha - p| <= 1/Q`. A rational
/// angle `p/q` with `q <= Q` returns its own reduced form.
pub fn dirichlet_pair(rot: &RotationNumber, big_q: &Rational) -> Result<DirichletPair> {
    if *big_q < Rational::one() {
        return Err(Error::Domain("Q must be at least 1".into()));
    }
    if let Some((p, q)) = &rot.rational {
        if Rational::from_integer(q.clone()) <= *big_q {
            let q = q.to_i64().ok_or_else(|| Error::Overflow("denominator".into()))?;
            return Ok(DirichletPair { q, p: p.clone() });
        }
    }
    let eps = RealScalar::rational(rot.set(), big_q.recip());
    dirichlet_scan(rot, &rational::floor(big_q), &eps)?.ok_or_else(|| {
        Error::PropositionViolation(format!(
            "no approximation with denominator at most {}",
            rational::format(big_q)
        ))
    })
}

/// [`dirichlet_pair`] with `Q` a value of the resonance profile, compared
/// exactly.
pub fn dirichlet_pair_psi(rot: &RotationNumber, big_q: &PsiValue) -> Result<DirichletPair> {
    dirichlet_scan(rot, &big_q.floor()?, &big_q.min_abs_dot)?.ok_or_else(|| {
        Error::PropositionViolation(format!("no approximation with denominator at most {}", big_q.value))
    })
}

fn require_irrational(rot: &RotationNumber) -> Result<()> {
    if rot.is_rational {
        return Err(Error::Hypothesis(format!("rotation number {} is rational", rot.alpha)));
    }
    Ok(())
}

fn psi_two_over_delta(rot: &RotationNumber, delta: &Rational) -> Result<PsiValue> {
    let r = analyze(vec![RealScalar::integer(rot.set(), 1), rot.alpha.clone()])?;
    psi(&r, &(rational::int(2) / delta))
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Report {
    #[serde(serialize_with = "crate::report::ser_scalar")]
    pub alpha: RealScalar,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub delta: Rational,
    pub psi: PsiValue,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub psi_floor: BigInt,
    /// `floor(Psi(2/delta)) - 1`.
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub bound: BigInt,
    #[serde(rename = "N")]
    pub steps: u64,
    pub pass: bool,
}

/// Compares the number of steps to delta-density with the integer part of
/// the resonance profile of `(1, alpha)` at `2/delta`, minus one.
pub fn theorem2_check(rot: &RotationNumber, delta: &Rational) -> Result<Theorem2Report> {
    require_irrational(rot)?;
    check_delta(delta)?;
    let p = psi_two_over_delta(rot, delta)?;
    let psi_floor = p.floor()?;
    let bound = &psi_floor - 1;
    let steps = ergodization_steps(rot, delta)?.expect("irrational rotations become dense");
    Ok(Theorem2Report {
        alpha: rot.alpha.clone(),
        delta: delta.clone(),
        pass: BigInt::from(steps) <= bound,
        psi: p,
        psi_floor,
        bound,
        steps,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofMechanics {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub delta: Rational,
    pub pair: DirichletPair,
    /// Largest gap of the rational orbit `{i p/q : 0 <= i < q}`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub rational_max_gap: Rational,
    /// The rational orbit is delta/2-dense.
    pub rational_dense: bool,
    /// `max_{i < q} |i alpha - i p/q| = (q - 1) |q alpha - p| / q`.
    #[serde(serialize_with = "crate::report::ser_scalar")]
    pub drift: RealScalar,
    /// The drift is at most delta/2.
    pub drift_within: bool,
    pub pass: bool,
}

/// Checks the two facts behind the step bound: with `(q, p)` the minimal
/// Dirichlet pair for `Q = Psi(2/delta)`, the orbit of `p/q` of length
/// `q - 1` is delta/2-dense, and it stays within delta/2 of the orbit of
/// alpha point by point.
pub fn proof_mechanics(rot: &RotationNumber, delta: &Rational) -> Result<ProofMechanics> {
    require_irrational(rot)?;
    check_delta(delta)?;
    let p = psi_two_over_delta(rot, delta)?;
    let pair = dirichlet_pair_psi(rot, &p)?;
    let q = BigInt::from(pair.q);
    let set = rot.set();
    let rat = RotationNumber::new(RealScalar::rational(
        set,
        Rational::new(pair.p.clone(), q.clone()) - rational::floor(&Rational::new(pair.p.clone(), q.clone())),
    ))?;
    let profile = gap_profile(&rat, (pair.q - 1) as u64)?;
    let rational_max_gap = profile
        .max_gap
        .as_rational()
        .expect("rational orbit has rational gaps");
    let half = delta / rational::int(2);
    let rational_dense = rational_max_gap <= delta.clone();
    let err = rot
        .alpha
        .scale_int(&q)
        .add_rational(&Rational::from_integer(-&pair.p))
        .abs()?;
    let drift = err.scale(&Rational::new(&q - 1, q.clone()));
    let drift_within = drift.cmp_rational(&half)? != Ordering::Greater;
    Ok(ProofMechanics {
        delta: delta.clone(),
        pair,
        rational_max_gap,
        rational_dense,
        drift,
        drift_within,
        pass: rational_dense && drift_within,
    })
}
