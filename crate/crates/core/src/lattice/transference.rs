use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::rational::{self, Rational};

use super::int_lattice::{scaled_dual, IntLattice};
use super::minima::{minima_with, DualSupNorm, NormKind, SuccessiveMinima, SupNorm};

/// Products of primal sup-norm minima with dual minima in reverse order,
/// each checked against `[1, d!]`.
#[derive(Debug, Clone, Serialize)]
pub struct TransferenceReport {
    pub rank: usize,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub upper: BigInt,
    pub primal: SuccessiveMinima,
    pub dual: SuccessiveMinima,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub products: Vec<Rational>,
    pub in_range: Vec<bool>,
    pub pass: bool,
}

/// Minima of `(sup box, L)` against `(dual body, L^*)` inside `span(L)`. The
/// dual body of the box restricted to the span is the projection of the
/// cross-polytope onto it, evaluated by [`DualSupNorm`]; on the full space it
/// is the ordinary l1 norm.
pub fn transference_check(l: &IntLattice) -> Result<TransferenceReport> {
    let d = l.rank();
    let (primal_values, primal_w) = minima_with(l, &SupNorm)?;
    let (den, scaled) = scaled_dual(l)?;
    // the dual norm depends only on the span, which the scaled dual shares
    let norm = DualSupNorm::for_span(l)?;
    let (dual_scaled, dual_w) = minima_with(&scaled, &norm)?;
    let den_q = Rational::from_integer(den.clone());
    let dual_values: Vec<Rational> = dual_scaled.iter().map(|v| v / &den_q).collect();
    let upper = rational::factorial(d);
    let upper_q = Rational::from_integer(upper.clone());
    let products: Vec<Rational> = (0..d)
        .map(|k| &primal_values[k] * &dual_values[d - 1 - k])
        .collect();
    let in_range: Vec<bool> = products
        .iter()
        .map(|p| *p >= rational::int(1) && *p <= upper_q)
        .collect();
    let pass = in_range.iter().all(|&b| b);
    Ok(TransferenceReport {
        rank: d,
        upper,
        primal: SuccessiveMinima {
            norm: NormKind::Sup,
            values: primal_values,
            witnesses: primal_w
                .iter()
                .map(|r| r.iter().map(|&x| rational::int(x)).collect())
                .collect(),
        },
        dual: SuccessiveMinima {
            norm: NormKind::DualSup,
            values: dual_values,
            witnesses: dual_w
                .iter()
                .map(|r| r.iter().map(|&x| rational::int(x) / &den_q).collect())
                .collect(),
        },
        products,
        in_range,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn self_dual_full_lattice() {
        for d in 1..=4 {
            let r = transference_check(&IntLattice::full(d)).unwrap();
            assert!(r.pass);
            assert!(r.products.iter().all(|p| *p == int(1)));
        }
    }

    #[test]
    fn rank_one_product_is_exactly_one() {
        let l = IntLattice::from_i64(2, &[vec![2, 1]]).unwrap();
        let r = transference_check(&l).unwrap();
        assert_eq!(r.primal.values, vec![int(2)]);
        assert_eq!(r.dual.values, vec![ratio(1, 2)]);
        assert_eq!(r.products, vec![int(1)]);
        assert!(r.pass);
    }

    #[test]
    fn plane_in_three_space() {
        let l = IntLattice::from_i64(3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let r = transference_check(&l).unwrap();
        assert!(r.pass, "{:?}", r.products);
    }
}
