//! Periodic approximations: integers `q_j` and lattice vectors `p_j` with
//! `|q_j alpha - p_j| <= d/Q` whose `p_j` form a basis of the resonance
//! lattice, found by a bounded scan over `q` and certified exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{hnf, IntLattice, IntMatrix};
use crate::rational::{self, Rational};
use crate::resonance::{psi, PsiValue, ResonanceData};
use crate::scalars::{F64Interval, Interval, RealScalar};

/// Upper limit on the number of subsets tried when the greedy choice does
/// not give a unimodular set.
pub const SUBSET_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproxPair {
    pub q: i64,
    pub p: Vec<i64>,
}

impl ApproxPair {
    pub fn new(q: i64, p: Vec<i64>) -> Self {
        ApproxPair { q, p }
    }

    /// `omega = p / q` as rationals.
    pub fn omega(&self) -> Vec<Rational> {
        self.p.iter().map(|&x| rational::ratio(x, self.q)).collect()
    }

    /// Exact `q alpha - p`.
    pub fn offset(&self, alpha: &[RealScalar]) -> Vec<RealScalar> {
        alpha
            .iter()
            .zip(&self.p)
            .map(|(a, &x)| a.scale(&rational::int(self.q)).add_rational(&rational::int(-x)))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicApproximation {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub q: Rational,
    pub pairs: Vec<ApproxPair>,
    /// `floor(d * d! * C_alpha * Psi(2 * d! * C_alpha * Q))`.
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub q_bound: BigInt,
    pub bound_psi: PsiValue,
    /// Number of admissible pairs met during the scan.
    pub collected: usize,
    pub subsets_tried: u64,
}

/// `|v|_inf <= t` decided exactly, with a double-precision shortcut.
pub fn sup_at_most(v: &[RealScalar], t: &Rational) -> Result<bool> {
    let tf = F64Interval::from_rationals(t, t);
    for x in v {
        let f = x.float().abs();
        if f.hi <= tf.lo {
            continue;
        }
        if f.lo > tf.hi {
            return Ok(false);
        }
        if x.abs()?.cmp_rational(t)? == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prefactor(r: &ResonanceData) -> Rational {
    let f = rational::factorial(r.d);
    Rational::from_integer(f * &r.c_alpha)
}

/// The query radius `2 * d! * C_alpha * Q` at which the denominator bound
/// evaluates the resonance profile.
pub fn bound_radius(r: &ResonanceData, q: &Rational) -> Rational {
    prefactor(r) * rational::int(2) * q
}

/// `floor(d * d! * C_alpha * Psi(2 d! C_alpha Q))` and the profile value.
pub fn denominator_bound(r: &ResonanceData, q: &Rational) -> Result<(BigInt, PsiValue)> {
    let p = psi(r, &bound_radius(r, q))?;
    let c = prefactor(r) * rational::int(r.d as i64);
    Ok((p.floor_scaled(&c)?, p))
}

fn coords_i64(l: &IntLattice, p: &[i64]) -> Result<Vec<i64>> {
    let v: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x)).collect();
    let c = l
        .integer_coordinates(&v)
        .ok_or_else(|| Error::Invalid("vector is not in the lattice".into()))?;
    c.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Overflow("lattice coordinate".into())))
        .collect()
}

fn det_is_unit(rows: &[Vec<i64>]) -> Result<bool> {
    Ok(IntMatrix::from_i64(rows)?.determinant()?.abs().is_one())
}

fn rank_of(rows: &[Vec<i64>]) -> Result<usize> {
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(IntMatrix::from_i64(rows)?.rank())
}

/// Looks for `d - 1` earlier coordinate rows completing `new` to a
/// unimodular matrix; rows are tried in order of collection.
fn subset_with(
    collected: &[Vec<i64>],
    new: &[i64],
    d: usize,
    tried: &mut u64,
) -> Result<Option<Vec<usize>>> {
    let k = d - 1;
    let m = collected.len();
    if m < k {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if *tried >= SUBSET_CAP {
            return Ok(None);
        }
        *tried += 1;
        let mut rows: Vec<Vec<i64>> = idx.iter().map(|&i| collected[i].clone()).collect();
        rows.push(new.to_vec());
        if det_is_unit(&rows)? {
            return Ok(Some(idx));
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Scans `q = 1, 2, ...` for lattice vectors `p` near `q alpha` and returns
/// the first `d` pairs (greedy by `q`) whose `p` form a basis of the lattice.
pub fn find_periodic_basis(r: &ResonanceData, q: &Rational) -> Result<PeriodicApproximation> {
    r.require_normalized()?;
    let threshold_q = Rational::from_integer(BigInt::from(r.n + 2) * &r.q_alpha);
    if *q < threshold_q {
        return Err(Error::Hypothesis(format!(
            "Q = {} is below (n+2) Q_alpha = {}",
            rational::format(q),
            rational::format(&threshold_q)
        )));
    }
    let d = r.d;
    let threshold = rational::int(d as i64) / q;
    let (q_bound, bound_psi) = denominator_bound(r, q)?;
    let q_max = q_bound
        .to_i64()
        .ok_or_else(|| Error::Overflow("denominator bound exceeds i64".into()))?;
    let basis = r.lattice.basis_i64()?;
    let sigma: Vec<F64Interval> = r.coordinates.iter().map(RealScalar::float).collect();

    let mut collected: Vec<ApproxPair> = Vec::new();
    let mut collected_coords: Vec<Vec<i64>> = Vec::new();
    let mut greedy: Vec<usize> = Vec::new();
    let mut tried: u64 = 0;

    for qq in 1..=q_max {
        let centers: Vec<i64> = sigma
            .iter()
            .map(|s| (s.mid() * qq as f64).round() as i64)
            .collect();
        let mut found: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        for offs in 0..3usize.pow(d as u32) {
            let mut o = offs;
            let coeffs: Vec<i64> = centers
                .iter()
                .map(|c| {
                    let v = c + (o % 3) as i64 - 1;
                    o /= 3;
                    v
                })
                .collect();
            let p: Vec<i64> = (0..r.n)
                .map(|i| coeffs.iter().zip(&basis).map(|(c, b)| c * b[i]).sum())
                .collect();
            let pair = ApproxPair::new(qq, p);
            if sup_at_most(&pair.offset(&r.alpha), &threshold)? {
                found.push((pair.p, coeffs));
            }
        }
        found.sort();
        for (p, coeffs) in found {
            let pair = ApproxPair::new(qq, p);
            let idx = collected.len();
            let mut with_greedy: Vec<Vec<i64>> =
                greedy.iter().map(|&i| collected_coords[i].clone()).collect();
            with_greedy.push(coeffs.clone());
            if greedy.len() < d && rank_of(&with_greedy)? == with_greedy.len() {
                greedy.push(idx);
                if greedy.len() == d && det_is_unit(&with_greedy)? {
                    collected.push(pair);
                    let pairs = greedy.iter().map(|&i| collected[i].clone()).collect();
                    return Ok(PeriodicApproximation {
                        q: q.clone(),
                        pairs,
                        q_bound,
                        bound_psi,
                        collected: collected.len(),
                        subsets_tried: tried,
                    });
                }
            } else if greedy.len() == d {
                if let Some(sub) = subset_with(&collected_coords, &coeffs, d, &mut tried)? {
                    let mut pairs: Vec<ApproxPair> =
                        sub.iter().map(|&i| collected[i].clone()).collect();
                    pairs.push(pair);
                    return Ok(PeriodicApproximation {
                        q: q.clone(),
                        pairs,
                        q_bound,
                        bound_psi,
                        collected: collected.len() + 1,
                        subsets_tried: tried,
                    });
                }
            }
            collected.push(pair);
            collected_coords.push(coeffs);
        }
    }
    Err(Error::PropositionViolation(format!(
        "no lattice basis of approximations with q <= {q_bound} (Q = {}, {} admissible pairs, {tried} subsets tried)",
        rational::format(q),
        collected.len()
    )))
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub q: i64,
    pub p: Vec<i64>,
    pub q_positive: bool,
    pub in_lattice: bool,
    /// `|q alpha - p| <= d / Q`, decided exactly.
    pub close: bool,
    pub within_bound: bool,
    /// Upper end of an enclosure of `|q alpha - p|_inf`.
    pub distance_upper: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub q: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub threshold: Rational,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub q_bound: BigInt,
    pub pairs: Vec<PairCheck>,
    pub count_matches_rank: bool,
    /// HNF of the stacked `p_j` equals the lattice basis.
    pub spans_lattice: bool,
    pub closeness: bool,
    pub basis: bool,
    pub pass: bool,
}

/// Re-verifies every property of an approximation from scratch. Failures are
/// reported in the certificate, not returned as errors.
pub fn certify(r: &ResonanceData, a: &PeriodicApproximation) -> Result<Certificate> {
    let threshold = rational::int(r.d as i64) / &a.q;
    let q_bound = denominator_bound(r, &a.q)
        .map(|(b, _)| b)
        .unwrap_or_else(|_| BigInt::from(-1));
    let mut pairs = Vec::new();
    for pair in &a.pairs {
        let off = pair.offset(&r.alpha);
        let distance_upper = off
            .iter()
            .map(|x| x.float().abs().hi)
            .fold(0.0, f64::max);
        pairs.push(PairCheck {
            q: pair.q,
            p: pair.p.clone(),
            q_positive: pair.q > 0,
            in_lattice: pair.p.len() == r.n && r.lattice.contains_i64(&pair.p),
            close: pair.p.len() == r.n && sup_at_most(&off, &threshold)?,
            within_bound: BigInt::from(pair.q) <= q_bound,
            distance_upper,
        });
    }
    let count_matches_rank = a.pairs.len() == r.d;
    let spans_lattice = count_matches_rank
        && pairs.iter().all(|p| p.in_lattice)
        && {
            let rows: Vec<Vec<i64>> = a.pairs.iter().map(|p| p.p.clone()).collect();
            hnf(&IntMatrix::from_i64(&rows)?) == *r.lattice.basis()
        };
    let closeness = pairs.iter().all(|p| p.q_positive && p.close && p.within_bound);
    let basis = count_matches_rank && spans_lattice;
    Ok(Certificate {
        q: a.q.clone(),
        threshold,
        q_bound,
        pass: closeness && basis,
        pairs,
        count_matches_rank,
        spans_lattice,
        closeness,
        basis,
    })
}

/// Coordinates of the `p_j` in the lattice basis, one row per pair.
pub fn pair_coordinates(r: &ResonanceData, a: &PeriodicApproximation) -> Result<Vec<Vec<i64>>> {
    a.pairs.iter().map(|p| coords_i64(&r.lattice, &p.p)).collect()
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
    fn sqrt2_at_q8() {
        let r = sqrt2();
        let a = find_periodic_basis(&r, &int(8)).unwrap();
        // |3 sqrt2 - 4| = 0.2426 <= 1/4 and det [[2,3],[3,4]] = -1
        assert_eq!(a.pairs, vec![ApproxPair::new(2, vec![2, 3]), ApproxPair::new(3, vec![3, 4])]);
        assert!(certify(&r, &a).unwrap().pass);
        // 4 Psi(32) = 4 (17 + 12 sqrt2) = 135.88
        assert_eq!(a.q_bound, BigInt::from(135));
    }

    #[test]
    fn sqrt2_at_q4() {
        let r = sqrt2();
        let a = find_periodic_basis(&r, &int(4)).unwrap();
        assert_eq!(a.pairs, vec![ApproxPair::new(1, vec![1, 1]), ApproxPair::new(2, vec![2, 3])]);
        // 4 Psi(16) = 4 (7 + 5 sqrt2) = 56.28
        assert_eq!(a.q_bound, BigInt::from(56));
    }

    #[test]
    fn rational_direction_is_periodic() {
        let set = Arc::new(ConstantSet::rational());
        let r = analyze(vec![RealScalar::integer(&set, 1), RealScalar::rational(&set, ratio(1, 2))]).unwrap();
        let a = find_periodic_basis(&r, &int(8)).unwrap();
        assert_eq!(a.pairs, vec![ApproxPair::new(2, vec![2, 1])]);
        assert!(certify(&r, &a).unwrap().pass);
    }

    #[test]
    fn rejects_small_query() {
        let r = sqrt2();
        assert!(matches!(find_periodic_basis(&r, &int(3)), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn tampered_pairs_fail_certification() {
        let r = sqrt2();
        let mut a = find_periodic_basis(&r, &int(8)).unwrap();
        a.pairs[0] = ApproxPair::new(1, vec![1, 1]);
        let c = certify(&r, &a).unwrap();
        assert!(!c.pairs[0].close);
        assert!(!c.closeness);
        assert!(!c.pass);

        a.pairs = vec![ApproxPair::new(1, vec![1, 1]), ApproxPair::new(2, vec![2, 4])];
        let c = certify(&r, &a).unwrap();
        assert!(!c.spans_lattice);
        assert!(!c.basis);
    }

    #[test]
    fn subset_search_finds_unimodular_completion() {
        let collected = vec![vec![2, 0], vec![1, 1]];
        let mut tried = 0;
        assert_eq!(subset_with(&collected, &[0, 2], 2, &mut tried).unwrap(), None);
        let collected = vec![vec![2, 0], vec![0, 1]];
        assert_eq!(subset_with(&collected, &[1, 1], 2, &mut tried).unwrap(), Some(vec![1]));
    }
}
