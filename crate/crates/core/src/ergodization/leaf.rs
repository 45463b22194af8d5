//! Geometry of the leaf torus `span(Lambda) / Lambda` with the ambient sup
//! metric: interval enclosures of the direction, its lattice coordinates and
//! the dual rows used to turn ambient radii into coordinate boxes.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::dual_basis;
use crate::rational::{self, Rational};
use crate::resonance::ResonanceData;
use crate::scalars::{F64Interval, Interval, RatInterval, RealScalar};

#[derive(Debug, Clone)]
pub(crate) struct Leaf<I> {
    pub n: usize,
    pub d: usize,
    pub basis: Vec<Vec<i64>>,
    pub sign: Vec<i8>,
    /// `|alpha_i|` for the nonzero components.
    pub alpha_abs: Vec<I>,
    /// `1 / (|alpha_i| + |alpha_j|)` for pairs of nonzero components.
    pub pairs: Vec<(usize, usize, I)>,
    /// Coordinates of alpha in the lattice basis, as doubles (box estimates).
    pub sigma: Vec<f64>,
    /// Upper bounds on the l1 norms of the dual rows.
    pub dual_l1: Vec<f64>,
    /// `max_i sum_j |B_ji|`; the fundamental cell lies in a sup ball of
    /// radius half this around any of its corners.
    pub col_sum: i64,
}

fn rat_upper_f64(r: &Rational) -> f64 {
    F64Interval::from_rationals(r, r).hi
}

impl<I: Interval> Leaf<I> {
    fn build(r: &ResonanceData, enclose: impl Fn(&RealScalar) -> I) -> Result<Self> {
        let basis = r.lattice.basis_i64()?;
        let n = r.n;
        let d = r.d;
        let sign: Vec<i8> = r.alpha.iter().map(RealScalar::sign).collect::<Result<_>>()?;
        let alpha_abs: Vec<I> = r
            .alpha
            .iter()
            .zip(&sign)
            .map(|(a, &s)| {
                let e = enclose(a);
                if s < 0 {
                    e.neg()
                } else {
                    e
                }
            })
            .collect();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if sign[i] != 0 && sign[j] != 0 {
                    let inv = I::from_i64(1)
                        .div(&alpha_abs[i].add(&alpha_abs[j]))
                        .ok_or_else(|| Error::Invalid("direction enclosure too coarse".into()))?;
                    pairs.push((i, j, inv));
                }
            }
        }
        let sigma = r.coordinates.iter().map(|c| c.float().mid()).collect();
        let dual_l1 = dual_basis(&r.lattice)?
            .iter()
            .map(|y| rat_upper_f64(&y.iter().map(|x| x.abs()).sum::<Rational>()))
            .collect();
        let col_sum = (0..n)
            .map(|c| basis.iter().map(|row| row[c].abs()).sum::<i64>())
            .max()
            .unwrap_or(0);
        Ok(Leaf {
            n,
            d,
            basis,
            sign,
            alpha_abs,
            pairs,
            sigma,
            dual_l1,
            col_sum,
        })
    }

    /// Exact `min_{t in [t0, t1]} |t alpha - c|_inf`: the smallest `r` for
    /// which the slabs `|t alpha_i - c_i| <= r` and `[t0, t1]` intersect,
    /// obtained from the pairwise (Helly) conditions.
    pub fn piece_distance(&self, c: &[I], t0: &I, t1: &I) -> I {
        let mut r = I::from_i64(0);
        let signed: Vec<I> = c
            .iter()
            .zip(&self.sign)
            .map(|(ci, &s)| if s < 0 { ci.neg() } else { ci.clone() })
            .collect();
        for i in 0..self.n {
            if self.sign[i] == 0 {
                r = r.max(&c[i].abs());
                continue;
            }
            r = r.max(&signed[i].sub(&t1.mul(&self.alpha_abs[i])));
            r = r.max(&t0.mul(&self.alpha_abs[i]).sub(&signed[i]));
        }
        for (i, j, inv) in &self.pairs {
            let num = signed[*i]
                .mul(&self.alpha_abs[*j])
                .sub(&signed[*j].mul(&self.alpha_abs[*i]))
                .abs();
            r = r.max(&num.mul(inv));
        }
        r
    }

    /// Ambient point `(g / den) B` for integer lattice coordinates `g`.
    pub fn ambient_scaled(&self, g: &[i64], den: i64) -> Vec<I> {
        let den = I::from_i64(den);
        (0..self.n)
            .map(|i| {
                let num: i64 = g.iter().zip(&self.basis).map(|(x, row)| x * row[i]).sum();
                I::from_i64(num).div(&den).expect("positive denominator")
            })
            .collect()
    }

    /// Ambient point `x B` for rational lattice coordinates.
    pub fn ambient(&self, x: &[Rational]) -> Vec<I> {
        (0..self.n)
            .map(|i| {
                let v: Rational = x
                    .iter()
                    .zip(&self.basis)
                    .map(|(xj, row)| xj * rational::int(row[i]))
                    .sum();
                I::point(&v)
            })
            .collect()
    }

    /// Half-widths of the coordinate box containing every point within
    /// ambient sup distance `radius`.
    pub fn coordinate_slack(&self, radius: f64) -> Vec<f64> {
        self.dual_l1
            .iter()
            .map(|&y| F64Interval::exact(radius).mul(&F64Interval::exact(y)).hi)
            .collect()
    }

    /// Dyadic time step so a piece moves by about `reach` in every
    /// coordinate.
    pub fn time_step(&self, reach: f64) -> Rational {
        let speed = self.sigma.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let target = if speed > 0.0 { reach / speed } else { 1.0 };
        let e = target.log2().floor().clamp(-30.0, 20.0) as i32;
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as u32)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-e) as u32)
        }
    }
}

impl Leaf<F64Interval> {
    pub fn float(r: &ResonanceData) -> Result<Self> {
        Self::build(r, RealScalar::float)
    }
}

impl Leaf<RatInterval> {
    pub fn exact_at(r: &ResonanceData, prec: u32) -> Result<Self> {
        Self::build(r, |a| a.enclose_at(prec))
    }
}

/// Time pieces `[k dt, min((k+1) dt, T)]` covering `[0, T]`; a single
/// degenerate piece when `T = 0`.
pub(crate) fn pieces(t: &Rational, dt: &Rational) -> Result<(usize, Vec<Rational>)> {
    if t.is_zero() {
        return Ok((1, vec![Rational::zero(), Rational::zero()]));
    }
    let k = rational::ceil(&(t / dt))
        .to_usize()
        .ok_or_else(|| Error::Overflow("too many time pieces".into()))?;
    let mut ends: Vec<Rational> = (0..k).map(|i| dt * rational::int(i as i64)).collect();
    ends.push(t.clone());
    Ok((k, ends))
}

/// Integer range covering `[lo, hi]` with one unit of slack on each side.
pub(crate) fn index_range(lo: f64, hi: f64) -> Result<(i64, i64)> {
    let a = lo.floor() - 1.0;
    let b = hi.ceil() + 1.0;
    if !a.is_finite() || !b.is_finite() || a.abs() > 9.0e15 || b.abs() > 9.0e15 {
        return Err(Error::Overflow("coordinate box out of range".into()));
    }
    Ok((a as i64, b as i64))
}

/// Calls `f` on every integer vector of the box `ranges`.
pub(crate) fn for_each_in_box(ranges: &[(i64, i64)], mut f: impl FnMut(&[i64])) {
    if ranges.iter().any(|(a, b)| a > b) {
        return;
    }
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        f(&cur);
        let mut j = ranges.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if cur[j] < ranges[j].1 {
                cur[j] += 1;
                break;
            }
            cur[j] = ranges[j].0;
        }
    }
}
