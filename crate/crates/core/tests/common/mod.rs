#![allow(dead_code)]

use std::cmp::Ordering;
use std::sync::Arc;

use ergotime::circle::RotationNumber;
use ergotime::rational::{int, ratio, Rational};
use ergotime::lattice::sup_norm;
use ergotime::resonance::{analyze, ResonanceData};
use ergotime::scalars::{dot, BasisConstant, ConstantSet, RealScalar};
use num_bigint::BigInt;

pub fn set_with(extra: Vec<BasisConstant>) -> Arc<ConstantSet> {
    let mut c = vec![BasisConstant::one("1")];
    c.extend(extra);
    Arc::new(ConstantSet::new(c).unwrap())
}

pub fn sqrt2_set() -> Arc<ConstantSet> {
    set_with(vec![BasisConstant::sqrt("s2", 2).unwrap()])
}

pub fn sqrt23_set() -> Arc<ConstantSet> {
    set_with(vec![BasisConstant::sqrt("s2", 2).unwrap(), BasisConstant::sqrt("s3", 3).unwrap()])
}

pub fn scalar(set: &Arc<ConstantSet>, c: &[i64]) -> RealScalar {
    let mut v: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
    v.resize(set.len(), int(0));
    RealScalar::from_coeffs(set, v).unwrap()
}

/// (1, sqrt 2)
pub fn sqrt2() -> Vec<RealScalar> {
    let s = sqrt2_set();
    vec![scalar(&s, &[1]), scalar(&s, &[0, 1])]
}

/// (1, sqrt 2, sqrt 3)
pub fn sqrt2_sqrt3() -> Vec<RealScalar> {
    let s = sqrt23_set();
    vec![scalar(&s, &[1]), scalar(&s, &[0, 1]), scalar(&s, &[0, 0, 1])]
}

/// (1, sqrt 2, 1 + sqrt 2)
pub fn sqrt2_sum() -> Vec<RealScalar> {
    let s = sqrt2_set();
    vec![scalar(&s, &[1]), scalar(&s, &[0, 1]), scalar(&s, &[1, 1])]
}

/// (1, 1/2)
pub fn half() -> Vec<RealScalar> {
    let s = Arc::new(ConstantSet::rational());
    vec![RealScalar::integer(&s, 1), RealScalar::rational(&s, ratio(1, 2))]
}

pub fn test_vectors() -> Vec<(&'static str, ResonanceData)> {
    vec![
        ("(1,s2)", analyze(sqrt2()).unwrap()),
        ("(1,s2,1+s2)", analyze(sqrt2_sum()).unwrap()),
        ("(1,s2,s3)", analyze(sqrt2_sqrt3()).unwrap()),
    ]
}

fn rotation(set: Arc<ConstantSet>, coeffs: Vec<Rational>) -> RotationNumber {
    RotationNumber::new(RealScalar::from_coeffs(&set, coeffs).unwrap()).unwrap()
}

pub fn sqrt2_minus_one() -> RotationNumber {
    rotation(sqrt2_set(), vec![int(-1), int(1)])
}

pub fn golden_minus_one() -> RotationNumber {
    rotation(set_with(vec![BasisConstant::sqrt("s5", 5).unwrap()]), vec![ratio(-1, 2), ratio(1, 2)])
}

pub fn sqrt3_minus_one() -> RotationNumber {
    rotation(set_with(vec![BasisConstant::sqrt("s3", 3).unwrap()]), vec![int(-1), int(1)])
}

pub fn cbrt2_minus_one() -> RotationNumber {
    let c = BasisConstant::root("c2", vec![BigInt::from(-2), 0.into(), 0.into(), 1.into()], int(1), int(2)).unwrap();
    rotation(set_with(vec![c]), vec![int(-1), int(1)])
}

pub fn third() -> RotationNumber {
    RotationNumber::from_rational(&Arc::new(ConstantSet::rational()), ratio(1, 3)).unwrap()
}

/// Exhaustive profile over the ambient box: for each `Q <= q_max`, the
/// smallest nonzero `|k . alpha|` over lattice vectors of height at most `Q`
/// and its lexicographically smallest minimizer.
pub fn brute_psi(r: &ResonanceData, q_max: i64) -> Vec<Option<(Vec<i64>, RealScalar)>> {
    let n = r.n;
    let mut cands: Vec<(i64, Vec<i64>, RealScalar, f64, f64)> = Vec::new();
    let mut k = vec![-q_max; n];
    loop {
        if k.iter().any(|&x| x != 0) && r.lattice.contains_i64(&k) {
            let v = dot(&k, &r.alpha).unwrap();
            if !v.is_zero() {
                let f = v.float();
                let (lo, hi) = if f.lo > 0.0 {
                    (f.lo, f.hi)
                } else if f.hi < 0.0 {
                    (-f.hi, -f.lo)
                } else {
                    (0.0, f.hi.max(-f.lo))
                };
                cands.push((sup_norm(&k), k.clone(), v.abs().unwrap(), lo, hi));
            }
        }
        let mut j = n;
        loop {
            if j == 0 {
                return (0..=q_max)
                    .map(|q| {
                        let pool: Vec<_> = cands.iter().filter(|c| c.0 <= q).collect();
                        let best_hi = pool.iter().map(|c| c.4).fold(f64::INFINITY, f64::min);
                        let mut best: Option<(Vec<i64>, RealScalar)> = None;
                        for c in pool.iter().filter(|c| c.3 <= best_hi) {
                            best = match best {
                                None => Some((c.1.clone(), c.2.clone())),
                                Some((bk, bv)) => match c.2.cmp_exact(&bv).unwrap() {
                                    Ordering::Less => Some((c.1.clone(), c.2.clone())),
                                    Ordering::Equal if c.1 < bk => Some((c.1.clone(), bv)),
                                    _ => Some((bk, bv)),
                                },
                            };
                        }
                        best
                    })
                    .collect();
            }
            j -= 1;
            if k[j] < q_max {
                k[j] += 1;
                break;
            }
            k[j] = -q_max;
        }
    }
}
