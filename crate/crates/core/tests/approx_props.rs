mod common;

use ergotime::approx::{certify, find_periodic_basis, pair_coordinates};
use ergotime::lattice::{hnf, IntMatrix};
use ergotime::rational::{int, ratio, Rational};
use ergotime::resonance::analyze;
use num_bigint::BigInt;

use common::*;

#[test]
fn certificates_pass_on_a_grid_of_q() {
    for (name, r) in test_vectors() {
        let base = Rational::from_integer(BigInt::from(r.n + 2) * &r.q_alpha);
        for m in [ratio(1, 1), ratio(3, 2), int(2), int(3), int(4), int(6), int(8)] {
            let q = &base * &m;
            let a = find_periodic_basis(&r, &q).unwrap_or_else(|e| panic!("{name} Q={q}: {e}"));
            let c = certify(&r, &a).unwrap();
            assert!(c.pass, "{name} Q={q}: {c:?}");
            // denominator bound
            let max_q = a.pairs.iter().map(|p| p.q).max().unwrap();
            assert!(BigInt::from(max_q) <= a.q_bound, "{name} Q={q}");
            // basis property is HNF equality of the stacked p_j
            let rows: Vec<Vec<i64>> = a.pairs.iter().map(|p| p.p.clone()).collect();
            let h = hnf(&IntMatrix::from_i64(&rows).unwrap());
            assert_eq!(&h, r.lattice.basis(), "{name} Q={q}");
            // the p_j have integer coordinates in the lattice basis
            let coords = pair_coordinates(&r, &a).unwrap();
            assert_eq!(coords.len(), r.d);
        }
    }
}

#[test]
fn half_has_a_single_exact_pair() {
    let r = analyze(half()).unwrap();
    for q in [8, 16, 32] {
        let a = find_periodic_basis(&r, &int(q)).unwrap();
        assert_eq!(a.pairs.len(), 1);
        assert_eq!((a.pairs[0].q, a.pairs[0].p.clone()), (2, vec![2, 1]));
        assert!(certify(&r, &a).unwrap().pass);
    }
}
