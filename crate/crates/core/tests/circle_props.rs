mod common;

use std::cmp::Ordering;
use std::sync::Arc;

use ergotime::circle::{dirichlet_pair, floor_scalar, gap_profile, proof_mechanics, theorem2_check, RotationNumber};
use ergotime::rational::{int, ratio, Rational};
use ergotime::scalars::{BasisConstant, ConstantSet, RealScalar};
use proptest::prelude::*;

use common::*;

fn named() -> Vec<(&'static str, RotationNumber)> {
    vec![
        ("s2-1", sqrt2_minus_one()),
        ("golden-1", golden_minus_one()),
        ("s3-1", sqrt3_minus_one()),
        ("cbrt2-1", cbrt2_minus_one()),
    ]
}

fn rotation(m: u64, a: i64, b: i64, c: i64) -> RotationNumber {
    let set = set_with(vec![BasisConstant::sqrt("s", m).unwrap()]);
    let x = RealScalar::from_coeffs(&set, vec![ratio(a, c), ratio(b, c)]).unwrap();
    let f = floor_scalar(&x).unwrap();
    RotationNumber::new(x.add_rational(&Rational::from_integer(-f))).unwrap()
}

#[test]
fn dirichlet_pairs_exist_up_to_100() {
    for (name, rot) in named() {
        for q in 1..=100 {
            let big_q = int(q);
            let d = dirichlet_pair(&rot, &big_q).unwrap_or_else(|e| panic!("{name} Q={q}: {e}"));
            assert!(d.q >= 1 && d.q <= q);
            let err = rot
                .alpha
                .scale_int(&d.q.into())
                .add_rational(&Rational::from_integer(-d.p.clone()))
                .abs()
                .unwrap();
            assert!(err.cmp_rational(&ratio(1, q)).unwrap() != Ordering::Greater, "{name} Q={q}");
        }
    }
}

#[test]
fn step_bound_holds() {
    for (name, rot) in named() {
        for j in 1..=8 {
            let delta = ratio(1, 1 << j);
            let rep = theorem2_check(&rot, &delta).unwrap();
            assert!(rep.pass, "{name} delta=1/{}: {} > {}", 1 << j, rep.steps, rep.bound);
        }
    }
}

// The rational orbit p/q is only delta-dense when q >= 1/delta, and the
// Dirichlet denominator at Q = Psi(2/delta) can be smaller than that when Psi
// is flat on [q, 2/delta]. The drift estimate holds throughout; N <= q - 1
// holds whenever the rational orbit is dense and fails once (cbrt2-1, 1/8).
#[test]
fn proof_mechanics_on_the_grid() {
    let expected_sparse = [
        ("s2-1", 5, 29, true),
        ("s3-1", 4, 15, true),
        ("s3-1", 6, 56, true),
        ("s3-1", 8, 209, true),
        ("cbrt2-1", 3, 4, false),
        ("cbrt2-1", 6, 50, true),
    ];
    let mut sparse = Vec::new();
    for (name, rot) in named() {
        for j in 1..=8u32 {
            let delta = ratio(1, 1 << j);
            let m = proof_mechanics(&rot, &delta).unwrap();
            assert!(m.drift_within, "{name} delta=1/{}: drift {}", 1 << j, m.drift);
            let steps = theorem2_check(&rot, &delta).unwrap().steps;
            assert_eq!(m.rational_dense, ratio(1, m.pair.q) <= delta);
            if m.rational_dense {
                assert!(steps < m.pair.q as u64, "{name} delta=1/{}: N = {steps}, q = {}", 1 << j, m.pair.q);
            } else {
                sparse.push((name, j, m.pair.q, steps < m.pair.q as u64));
            }
        }
    }
    assert_eq!(sparse, expected_sparse);
}

#[test]
fn rational_rotations_reach_every_residue() {
    let set = Arc::new(ConstantSet::rational());
    for q in 2..12i64 {
        for p in 1..q {
            let rot = RotationNumber::from_rational(&set, ratio(p, q)).unwrap();
            let prof = gap_profile(&rot, (q - 1) as u64).unwrap();
            let g = Rational::new(1.into(), Rational::from_integer(q.into()).numer().clone());
            let expect_equal = num_integer::gcd(p, q) == 1;
            assert_eq!(prof.distinct == 1 && prof.max_gap.as_rational() == Some(g), expect_equal, "{p}/{q}");
            assert!(prof.sums_to_one);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaps_sum_to_one_with_three_lengths(
        m in prop::sample::select(vec![2u64, 3, 5, 6, 7]),
        a in -9i64..=9, b in 1i64..=9, c in 1i64..=9,
        n in 0u64..400,
    ) {
        let rot = rotation(m, a, b, c);
        let p = gap_profile(&rot, n).unwrap();
        prop_assert!(p.sums_to_one);
        prop_assert!(p.distinct <= 3);
        prop_assert_eq!(p.gaps.len() as u64, n + 1);
        prop_assert!(p.gaps.windows(2).all(|w| w[0].cmp_exact(&w[1]).unwrap() != Ordering::Greater));
    }
}
