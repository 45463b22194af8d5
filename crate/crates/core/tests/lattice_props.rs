use std::collections::BTreeSet;

use ergotime::lattice::{
    enumerate_in_box, gram_det, hnf, orthogonal_integer_complement, shortest_vector, successive_minima,
    transference_check, IntLattice, IntMatrix, NormKind,
};
use ergotime::rational::{self, int};
use num_bigint::BigInt;
use proptest::prelude::*;

fn generators(max_n: usize) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max_n).prop_flat_map(|n| {
        (Just(n), prop::collection::vec(prop::collection::vec(-5i64..=5, n), 1..=n))
    })
}

fn unimodular(d: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    for &(a, b, k) in ops {
        let (a, b) = (a % d, b % d);
        if a == b {
            u.swap(0, a);
            continue;
        }
        for c in 0..d {
            u[a][c] += k * u[b][c];
        }
    }
    u
}

fn brute_box(l: &IntLattice, n: usize, q: i64) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    let mut k = vec![-q; n];
    loop {
        if k.iter().any(|&x| x != 0) && l.contains_i64(&k) {
            out.insert(k.clone());
        }
        let mut j = n;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if k[j] < q {
                k[j] += 1;
                break;
            }
            k[j] = -q;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_idempotent_and_keeps_the_row_space((n, rows) in generators(4)) {
        let m = IntMatrix::from_i64(&rows).unwrap();
        let h = hnf(&m);
        prop_assert_eq!(hnf(&h), h.clone());
        let orig = IntLattice::from_i64(n, &rows).unwrap();
        let back = IntLattice::from_matrix(&h);
        for r in h.row_iter() {
            prop_assert!(orig.contains(r));
        }
        for r in &rows {
            prop_assert!(back.contains_i64(r));
        }
    }

    #[test]
    fn complement_twice_is_saturation((n, rows) in generators(4)) {
        let l = IntLattice::from_i64(n, &rows).unwrap();
        let twice = orthogonal_integer_complement(&orthogonal_integer_complement(&l));
        prop_assert_eq!(&twice, &l.saturation());
        let sat = l.saturation();
        prop_assert_eq!(orthogonal_integer_complement(&orthogonal_integer_complement(&sat)), sat);
    }

    #[test]
    fn gram_det_is_basis_independent(
        (n, rows) in generators(4),
        ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..8),
    ) {
        let l = IntLattice::from_i64(n, &rows).unwrap();
        prop_assume!(l.rank() > 0);
        let b = l.basis().to_i64_rows().unwrap();
        let u = unimodular(b.len(), &ops);
        let changed: Vec<Vec<i64>> = u
            .iter()
            .map(|ur| (0..n).map(|c| ur.iter().zip(&b).map(|(x, row)| x * row[c]).sum()).collect())
            .collect();
        let m = IntMatrix::from_i64(&changed).unwrap();
        prop_assert_eq!(m.gram().determinant().unwrap(), gram_det(&l).unwrap());
    }

    #[test]
    fn box_enumeration_matches_brute_force((n, rows) in generators(4), q in 0i64..=10) {
        let l = IntLattice::from_i64(n, &rows).unwrap();
        // keep the brute-force box small in four dimensions
        let q = if n == 4 { q.min(5) } else { q };
        let got: Vec<Vec<i64>> = enumerate_in_box(&l, &int(q)).unwrap().collect();
        let set: BTreeSet<Vec<i64>> = got.iter().cloned().collect();
        prop_assert_eq!(set.len(), got.len(), "duplicates in enumeration");
        prop_assert_eq!(set, brute_box(&l, n, q));
    }

    #[test]
    fn minima_start_at_the_shortest_vector((n, rows) in generators(4)) {
        let l = IntLattice::from_i64(n, &rows).unwrap();
        prop_assume!(l.rank() > 0);
        for norm in [NormKind::Sup, NormKind::L1] {
            let m = successive_minima(&l, norm).unwrap();
            let (_, lambda1) = shortest_vector(&l, norm).unwrap();
            prop_assert_eq!(&m.values[0], &lambda1);
            prop_assert!(m.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn transference_products_in_range((n, rows) in generators(4)) {
        let l = IntLattice::from_i64(n, &rows).unwrap();
        prop_assume!(l.rank() > 0);
        let t = transference_check(&l).unwrap();
        prop_assert!(t.pass, "{:?}", t.products);
        let upper = rational::factorial(l.rank());
        for p in &t.products {
            prop_assert!(*p >= int(1) && *p <= ergotime::rational::Rational::from_integer(upper.clone()));
        }
        if l.rank() == 1 {
            prop_assert_eq!(&t.products[0], &int(1));
        }
        prop_assert_eq!(t.upper, BigInt::from(upper));
    }
}
