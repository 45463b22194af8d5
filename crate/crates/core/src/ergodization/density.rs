//! Certified distances to an orbit segment and grid-certified density.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::resonance::ResonanceData;
use crate::scalars::{DyadicInterval, F64Interval, Interval};

use super::leaf::{for_each_in_box, index_range, pieces, Leaf};

/// Largest number of grid points a density check will allocate.
pub const GRID_CAP: u64 = 1 << 24;

/// Precision ceiling (bits) for distance refinement past double precision.
const DISTANCE_PREC_CAP: u32 = 4096;

fn check_segment(r: &ResonanceData, t: &Rational) -> Result<()> {
    if t.is_negative() {
        return Err(Error::Domain("time horizon must be nonnegative".into()));
    }
    if r.d == 0 {
        return Err(Error::ZeroRank);
    }
    Ok(())
}

fn point_distance<I: Interval>(leaf: &Leaf<I>, t: &Rational, theta: &[Rational]) -> Result<I> {
    let theta_f: Vec<f64> = theta.iter().map(rational::to_f64).collect();
    // every leaf point is within half the cell's column sum of a lattice point
    let mut bound = F64Interval::point(&Rational::new(BigInt::from(leaf.col_sum), BigInt::from(2))).hi;
    let mut best: Option<I> = None;
    let dt = leaf.time_step(leaf.coordinate_slack(bound).iter().fold(0.0, |m: f64, x| m.max(*x)));
    let (k, ends) = pieces(t, &dt)?;
    for p in 0..k {
        let (a, b) = (&ends[p], &ends[p + 1]);
        let t0 = I::point(a);
        let t1 = I::point(b);
        let slack = leaf.coordinate_slack(bound);
        let (af, bf) = (rational::to_f64(a), rational::to_f64(b));
        let ranges: Vec<(i64, i64)> = (0..leaf.d)
            .map(|j| {
                let (s0, s1) = (af * leaf.sigma[j], bf * leaf.sigma[j]);
                index_range(s0.min(s1) - slack[j] - theta_f[j], s0.max(s1) + slack[j] - theta_f[j])
            })
            .collect::<Result<_>>()?;
        for_each_in_box(&ranges, |m| {
            let x: Vec<Rational> = theta
                .iter()
                .zip(m)
                .map(|(th, &mj)| th + rational::int(mj))
                .collect();
            let c = leaf.ambient(&x);
            let dist = leaf.piece_distance(&c, &t0, &t1);
            best = Some(match best.take() {
                None => dist,
                Some(b) => b.min(&dist),
            });
        });
        if let Some(b) = &best {
            bound = bound.min(b.upper_f64());
        }
    }
    best.ok_or_else(|| Error::Invalid("empty orbit segment".into()))
}

fn dyadic_of(lo: &Rational, hi: &Rational, width: &Rational) -> DyadicInterval {
    let mut exp: u32 = 0;
    let target = width / rational::int(4);
    while Rational::new(BigInt::one(), BigInt::one() << exp) > target {
        exp += 1;
    }
    DyadicInterval::outward(lo, hi, exp)
}

/// Enclosure of the quotient sup distance from the leaf point with lattice
/// coordinates `theta` to the orbit segment `{t alpha : 0 <= t <= T}`.
/// Double precision is tried first; exact rational refinement follows when
/// the requested width is narrower than that delivers.
pub fn distance_to_orbit(
    r: &ResonanceData,
    t: &Rational,
    theta: &[Rational],
    width: &Rational,
) -> Result<DyadicInterval> {
    check_segment(r, t)?;
    if theta.len() != r.d {
        return Err(Error::DimensionMismatch {
            expected: r.d,
            found: theta.len(),
        });
    }
    if !width.is_positive() {
        return Err(Error::Domain("enclosure width must be positive".into()));
    }
    let f = point_distance(&Leaf::float(r)?, t, theta)?;
    let lo = if f.lo < 0.0 { Rational::zero() } else { f.lower() };
    let out = dyadic_of(&lo, &f.upper(), width);
    if out.width() <= *width {
        return Ok(out);
    }
    let mut prec = 96u32;
    loop {
        let e = point_distance(&Leaf::exact_at(r, prec)?, t, theta)?;
        let lo = if e.lo.is_negative() { Rational::zero() } else { e.lo.clone() };
        let out = dyadic_of(&lo, &e.hi, width);
        if out.width() <= *width || prec >= DISTANCE_PREC_CAP {
            return Ok(out);
        }
        prec *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Dense,
    NotDense,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityVerdict {
    pub verdict: Verdict,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub t: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub delta: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub epsilon: Rational,
    /// Subdivisions per lattice coordinate.
    pub grid: u64,
    /// Every leaf point is within this sup distance of a grid point.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub net_radius: Rational,
    /// Largest certified upper bound on a grid point's distance.
    pub max_upper: f64,
    /// Largest certified lower bound on a grid point's distance.
    pub max_lower: f64,
    /// Lattice coordinates of the grid point attaining `max_lower`.
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub witness: Vec<Rational>,
}

/// Grid subdivision giving a net radius strictly below `eps`.
pub fn grid_size(col_sum: i64, eps: &Rational) -> Result<u64> {
    let m: BigInt = rational::floor(&(Rational::from_integer(BigInt::from(col_sum)) / (eps * rational::int(2)))) + 1;
    m.to_u64()
        .ok_or_else(|| Error::Overflow("grid resolution".into()))
}

/// Three-valued density check of the orbit segment of length `T` on a
/// uniform grid of the fundamental cell. `DENSE` when every grid point is
/// within `delta - h` of the segment (`h` the net radius), `NOT_DENSE` when
/// some grid point is certified farther than `delta`.
pub fn is_delta_dense(
    r: &ResonanceData,
    t: &Rational,
    delta: &Rational,
    eps: &Rational,
) -> Result<DensityVerdict> {
    check_segment(r, t)?;
    if !delta.is_positive() || !eps.is_positive() {
        return Err(Error::Domain("delta and epsilon must be positive".into()));
    }
    let leaf = Leaf::float(r)?;
    let d = leaf.d;
    let m = grid_size(leaf.col_sum, eps)?;
    let total = (m as u128).pow(d as u32);
    if total > u128::from(GRID_CAP) {
        return Err(Error::Domain(format!(
            "density grid of {m}^{d} points exceeds the cap of {GRID_CAP}; use a larger epsilon"
        )));
    }
    let mi = m as i64;
    let h = Rational::new(BigInt::from(leaf.col_sum), BigInt::from(2 * m));
    let reach_iv = F64Interval::point(&(delta + &h));
    let reach = reach_iv.hi;
    let slack = leaf.coordinate_slack(reach);

    let mut upper = vec![f64::INFINITY; total as usize];
    let mut lower = vec![f64::INFINITY; total as usize];

    let dt = leaf.time_step(slack.iter().fold(1.0 / m as f64, |a, b| a.max(*b)));
    let (k, ends) = pieces(t, &dt)?;
    let mf = m as f64;
    for p in 0..k {
        let t0 = F64Interval::point(&ends[p]);
        let t1 = F64Interval::point(&ends[p + 1]);
        let ranges: Vec<(i64, i64)> = (0..d)
            .map(|j| {
                let a = t0.lo * leaf.sigma[j];
                let b = t1.hi * leaf.sigma[j];
                index_range((a.min(b) - slack[j]) * mf, (a.max(b) + slack[j]) * mf)
            })
            .collect::<Result<_>>()?;
        for_each_in_box(&ranges, |g| {
            let c = leaf.ambient_scaled(g, mi);
            let dist = leaf.piece_distance(&c, &t0, &t1);
            if dist.lo > reach {
                return;
            }
            let mut w = 0usize;
            for &x in g {
                w = w * m as usize + x.rem_euclid(mi) as usize;
            }
            if dist.hi < upper[w] {
                upper[w] = dist.hi;
            }
            if dist.lo < lower[w] {
                lower[w] = dist.lo;
            }
        });
    }

    let mut max_upper = 0.0f64;
    let mut max_lower = f64::NEG_INFINITY;
    let mut witness_index = 0usize;
    for w in 0..total as usize {
        max_upper = max_upper.max(upper[w]);
        // translates never examined are farther than `reach`
        let lw = lower[w].min(reach_iv.lo).max(0.0);
        if lw > max_lower {
            max_lower = lw;
            witness_index = w;
        }
    }
    let dense_threshold = F64Interval::point(&(delta - &h)).lo;
    let delta_hi = F64Interval::point(delta).hi;
    let verdict = if max_upper <= dense_threshold {
        Verdict::Dense
    } else if max_lower > delta_hi {
        Verdict::NotDense
    } else {
        Verdict::Unknown
    };
    let mut witness = vec![Rational::zero(); d];
    let mut rest = witness_index;
    for j in (0..d).rev() {
        witness[j] = Rational::new(BigInt::from(rest % m as usize), BigInt::from(m));
        rest /= m as usize;
    }
    Ok(DensityVerdict {
        verdict,
        t: t.clone(),
        delta: delta.clone(),
        epsilon: eps.clone(),
        grid: m,
        net_radius: h,
        max_upper,
        max_lower,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::resonance::analyze;
    use crate::scalars::{BasisConstant, ConstantSet, RealScalar};
    use std::sync::Arc;

    fn sqrt2() -> ResonanceData {
        let set = Arc::new(
            ConstantSet::new(vec![BasisConstant::one("1"), BasisConstant::sqrt("s2", 2).unwrap()]).unwrap(),
        );
        analyze(vec![RealScalar::integer(&set, 1), RealScalar::constant(&set, 1)]).unwrap()
    }

    fn half() -> ResonanceData {
        let set = Arc::new(ConstantSet::rational());
        analyze(vec![RealScalar::integer(&set, 1), RealScalar::rational(&set, ratio(1, 2))]).unwrap()
    }

    #[test]
    fn origin_is_on_the_orbit() {
        let r = sqrt2();
        let e = distance_to_orbit(&r, &int(3), &[int(0), int(0)], &ratio(1, 1000)).unwrap();
        assert!(e.contains(&int(0)));
    }

    #[test]
    fn distance_at_constructive_time() {
        let r = sqrt2();
        let e = distance_to_orbit(&r, &ratio(5, 2), &[ratio(1, 2), ratio(1, 2)], &ratio(1, 1_000_000)).unwrap();
        // |2.5 sqrt2 - 3.5| = 0.035534
        assert!(e.upper_f64() <= 0.0356);
    }

    #[test]
    fn distance_on_rational_leaf() {
        let r = half();
        let e = distance_to_orbit(&r, &int(0), &[ratio(1, 2)], &ratio(1, 1000)).unwrap();
        assert!(e.contains(&int(1)), "{e}");
    }

    #[test]
    fn narrow_widths_use_exact_refinement() {
        let r = sqrt2();
        let w = Rational::new(BigInt::one(), BigInt::one() << 70u32);
        let e = distance_to_orbit(&r, &ratio(5, 2), &[ratio(1, 2), ratio(1, 2)], &w).unwrap();
        assert!(e.width() <= w);
    }

    #[test]
    fn single_point_is_not_dense() {
        let r = sqrt2();
        let v = is_delta_dense(&r, &int(0), &ratio(1, 4), &ratio(1, 32)).unwrap();
        assert_eq!(v.verdict, Verdict::NotDense);
        assert!(v.max_lower > 0.25);
    }

    #[test]
    fn rational_flow_closes_at_its_period() {
        let r = half();
        for (delta, eps) in [(ratio(1, 10), ratio(1, 10)), (ratio(1, 3), ratio(1, 50)), (int(1), ratio(1, 8))] {
            let v = is_delta_dense(&r, &int(2), &delta, &eps).unwrap();
            assert_eq!(v.verdict, Verdict::Dense, "delta {delta}");
        }
        // gap 2 - T must be at most 2 delta
        let v = is_delta_dense(&r, &ratio(3, 2), &ratio(1, 10), &ratio(1, 100)).unwrap();
        assert_eq!(v.verdict, Verdict::NotDense);
    }

    #[test]
    fn long_segment_is_dense() {
        let r = sqrt2();
        let v = is_delta_dense(&r, &int(20), &ratio(1, 2), &ratio(1, 16)).unwrap();
        assert_eq!(v.verdict, Verdict::Dense);
    }

    #[test]
    fn piece_distance_matches_sampling() {
        let r = sqrt2();
        let leaf = Leaf::float(&r).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        for (cx, cy, t0, t1) in [(0.3, 0.9, 0.0, 1.0), (2.0, -1.0, 0.5, 3.0), (0.0, 5.0, 1.0, 1.0)] {
            let c = [F64Interval::exact(cx), F64Interval::exact(cy)];
            let got = leaf.piece_distance(&c, &F64Interval::exact(t0), &F64Interval::exact(t1));
            let sampled = (0..=100_000)
                .map(|i| {
                    let t = t0 + (t1 - t0) * i as f64 / 100_000.0;
                    (t - cx).abs().max((t * s2 - cy).abs())
                })
                .fold(f64::INFINITY, f64::min);
            assert!(got.lo <= sampled + 1e-12 && sampled <= got.hi + 1e-4, "{got:?} vs {sampled}");
        }
    }
}
