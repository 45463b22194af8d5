//! Bisection for the ergodization time between a certified non-dense and a
//! certified dense horizon.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::resonance::{theorem1_delta_max, ResonanceData};

use super::bounds::theorem1_bound;
use super::density::{is_delta_dense, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonStrategy {
    /// Start from the explicit bound when delta satisfies its hypothesis.
    Theorem1,
    /// Probe `T = 1, 2, 4, ...` until the segment is dense.
    Doubling,
}

#[derive(Debug, Clone)]
pub struct BracketOptions {
    /// Defaults to `delta / 8`.
    pub tol: Option<Rational>,
    /// Defaults to `delta / 8`.
    pub epsilon: Option<Rational>,
    pub horizon: HorizonStrategy,
    /// Times epsilon is halved when a probe is inconclusive.
    pub max_refinements: u32,
    pub max_doublings: u32,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions {
            tol: None,
            epsilon: None,
            horizon: HorizonStrategy::Theorem1,
            max_refinements: 3,
            max_doublings: 40,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Probe {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub t: Rational,
    pub verdict: Verdict,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub epsilon: Rational,
    pub max_upper: f64,
    pub max_lower: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErgodizationBracket {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub delta: Rational,
    /// Certified not dense (or zero).
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub t_lo: Rational,
    /// Certified dense.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub t_hi: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub tol: Rational,
    /// Grid resolution in force at the end.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub epsilon: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub horizon: Rational,
    pub strategy: HorizonStrategy,
    /// False when an inconclusive probe stopped the bisection early.
    pub converged: bool,
    /// `t_lo` and `t_hi` for the direction as given: its flow reaches at
    /// time `scale * t` what the normalized flow reaches at time `t`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub t_lo_raw: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub t_hi_raw: Rational,
    pub trail: Vec<Probe>,
}

struct Prober<'a> {
    r: &'a ResonanceData,
    delta: &'a Rational,
    eps: Rational,
    max_refinements: u32,
    trail: Vec<Probe>,
}

impl Prober<'_> {
    fn probe(&mut self, t: &Rational) -> Result<Verdict> {
        let mut refinements = 0;
        loop {
            let v = match is_delta_dense(self.r, t, self.delta, &self.eps) {
                Ok(v) => v,
                // grid cap reached while refining
                Err(Error::Domain(_)) if refinements > 0 => return Ok(Verdict::Unknown),
                Err(e) => return Err(e),
            };
            self.trail.push(Probe {
                t: t.clone(),
                verdict: v.verdict,
                epsilon: self.eps.clone(),
                max_upper: v.max_upper,
                max_lower: v.max_lower,
            });
            if v.verdict != Verdict::Unknown || refinements >= self.max_refinements {
                return Ok(v.verdict);
            }
            refinements += 1;
            self.eps = &self.eps / rational::int(2);
        }
    }
}

/// Brackets the smallest `T` for which the orbit segment of length `T` is
/// delta-dense: `t_lo` is certified not dense (or zero), `t_hi` certified
/// dense, and `t_hi - t_lo <= tol` unless `converged` is false.
pub fn ergodization_time_bracket(
    r: &ResonanceData,
    delta: &Rational,
    opts: &BracketOptions,
) -> Result<ErgodizationBracket> {
    if !delta.is_positive() {
        return Err(Error::Domain("delta must be positive".into()));
    }
    if let Some(tol) = &opts.tol {
        if !tol.is_positive() {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
    }
    let eps = opts
        .epsilon
        .clone()
        .unwrap_or_else(|| delta / rational::int(8));
    let mut p = Prober {
        r,
        delta,
        eps,
        max_refinements: opts.max_refinements,
        trail: Vec::new(),
    };
    let zero = Rational::zero();
    let finish = |p: Prober, t_lo: Rational, t_hi: Rational, tol, horizon, strategy, converged| ErgodizationBracket {
        delta: delta.clone(),
        t_lo_raw: &t_lo * &r.scale,
        t_hi_raw: &t_hi * &r.scale,
        t_lo,
        t_hi,
        tol,
        epsilon: p.eps,
        horizon,
        strategy,
        converged,
        trail: p.trail,
    };

    if p.probe(&zero)? == Verdict::Dense {
        let tol = opts.tol.clone().unwrap_or_else(|| zero.clone());
        return Ok(finish(p, zero.clone(), zero.clone(), tol, zero, opts.horizon, true));
    }

    let use_bound = opts.horizon == HorizonStrategy::Theorem1
        && r.normalized
        && *delta <= theorem1_delta_max(r);
    let strategy = if use_bound {
        HorizonStrategy::Theorem1
    } else {
        HorizonStrategy::Doubling
    };
    let mut t_lo = zero.clone();
    let mut t_hi: Option<Rational> = None;
    let mut next = rational::int(1);
    if use_bound {
        // an integer horizon keeps the bisection points short
        let bound = Rational::from_integer(rational::ceil(&theorem1_bound(r, delta)?.upper()));
        match p.probe(&bound)? {
            Verdict::Dense => t_hi = Some(bound),
            Verdict::NotDense => {
                return Err(Error::PropositionViolation(format!(
                    "segment of length {} (the explicit bound) is certified not {}-dense",
                    rational::format(&bound),
                    rational::format(delta)
                )))
            }
            Verdict::Unknown => next = bound * rational::int(2),
        }
    }
    let mut doublings = 0;
    while t_hi.is_none() {
        if doublings >= opts.max_doublings {
            return Err(Error::Domain(format!(
                "no certified dense horizon up to T = {}",
                rational::format(&next)
            )));
        }
        match p.probe(&next)? {
            Verdict::Dense => t_hi = Some(next.clone()),
            Verdict::NotDense => t_lo = next.clone(),
            Verdict::Unknown => {}
        }
        next = &next * rational::int(2);
        doublings += 1;
    }
    let mut t_hi = t_hi.expect("loop exits with a dense horizon");
    let horizon = t_hi.clone();
    let tol = opts
        .tol
        .clone()
        .unwrap_or_else(|| delta / rational::int(8));
    let mut converged = true;
    while &t_hi - &t_lo > tol {
        let mid = (&t_lo + &t_hi) / rational::int(2);
        match p.probe(&mid)? {
            Verdict::Dense => t_hi = mid,
            Verdict::NotDense => t_lo = mid,
            Verdict::Unknown => {
                converged = false;
                break;
            }
        }
    }
    Ok(finish(p, t_lo, t_hi, tol, horizon, strategy, converged))
}
