use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::matrix::{self, hnf, kernel_rows, pivot_columns, IntMatrix};

/// A sublattice of `Z^n` stored by its canonical HNF basis, so structural
/// equality is lattice equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntLattice {
    ambient: usize,
    basis: IntMatrix,
}

impl IntLattice {
    pub fn from_generators(ambient: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        let m = IntMatrix::from_rows(generators, ambient)?;
        Ok(Self::from_matrix(&m))
    }

    pub fn from_i64(ambient: usize, generators: &[Vec<i64>]) -> Result<Self> {
        Self::from_generators(
            ambient,
            generators
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        IntLattice {
            ambient: m.cols(),
            basis: hnf(m),
        }
    }

    pub fn zero(n: usize) -> Self {
        IntLattice {
            ambient: n,
            basis: IntMatrix::zero(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        IntLattice {
            ambient: n,
            basis: IntMatrix::identity(n),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        pivot_columns(&self.basis)
    }

    pub fn basis_i64(&self) -> Result<Vec<Vec<i64>>> {
        self.basis.to_i64_rows()
    }

    /// Rational coordinates of `v` in the HNF basis, or `None` when `v` is
    /// outside the rational span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if v.len() != self.ambient {
            return None;
        }
        let pivots = self.pivots();
        let mut coords: Vec<Rational> = Vec::with_capacity(self.rank());
        for (j, &pc) in pivots.iter().enumerate() {
            let mut acc = v[pc].clone();
            for (i, c) in coords.iter().enumerate() {
                acc -= c * Rational::from_integer(self.basis.get(i, pc).clone());
            }
            coords.push(acc / Rational::from_integer(self.basis.get(j, pc).clone()));
        }
        for col in 0..self.ambient {
            let mut acc = Rational::zero();
            for (i, c) in coords.iter().enumerate() {
                acc += c * Rational::from_integer(self.basis.get(i, col).clone());
            }
            if acc != v[col] {
                return None;
            }
        }
        Some(coords)
    }

    /// Integer coordinates of a lattice vector, or `None` if `v` is not in the lattice.
    pub fn integer_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let r: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
        let c = self.coordinates(&r)?;
        c.iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.integer_coordinates(v).is_some()
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.contains(&b)
    }

    /// Vector with the given integer coordinates.
    pub fn combine(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.ambient];
        for (c, row) in coords.iter().zip(self.basis.row_iter()) {
            for (vi, bi) in v.iter_mut().zip(row) {
                *vi += c * bi;
            }
        }
        v
    }

    /// `span_Q(L) ∩ Z^n`.
    pub fn saturation(&self) -> IntLattice {
        orthogonal_integer_complement(&orthogonal_integer_complement(self))
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation() == *self
    }

    /// Index of `sub` in `self` when `sub` is a full-rank sublattice.
    pub fn index_of(&self, sub: &IntLattice) -> Option<BigInt> {
        if sub.rank() != self.rank() || sub.ambient != self.ambient {
            return None;
        }
        let mut coords = Vec::new();
        for row in sub.basis.row_iter() {
            coords.push(self.integer_coordinates(row)?);
        }
        let m = IntMatrix::from_rows(coords, self.rank()).ok()?;
        m.determinant().ok().map(|d| d.abs())
    }
}

/// All integer `k` with `M k^T = 0`, as a saturated lattice.
pub fn integer_kernel(m: &IntMatrix) -> IntLattice {
    let rows = kernel_rows(m);
    IntLattice::from_generators(m.cols(), rows).expect("kernel rows have the ambient width")
}

/// Kernel of a rational matrix (denominators cleared per row).
pub fn integer_kernel_rational(rows: &[Vec<Rational>], ambient: usize) -> IntLattice {
    let ints = matrix::integerize_rows(rows);
    let m = IntMatrix::from_rows(ints, ambient).expect("rows have the ambient width");
    integer_kernel(&m)
}

/// `{m in Z^n : m . k = 0 for all k in L}`.
pub fn orthogonal_integer_complement(l: &IntLattice) -> IntLattice {
    integer_kernel(l.basis())
}

/// Determinant of the Gram matrix `B B^T`, the squared covolume.
pub fn gram_det(l: &IntLattice) -> Result<BigInt> {
    if l.rank() == 0 {
        return Err(Error::ZeroRank);
    }
    l.basis().gram().determinant()
}

/// Rows spanning the dual lattice inside `span(L)`, computed as `(B B^T)^{-1} B`.
pub fn dual_basis(l: &IntLattice) -> Result<Vec<Vec<Rational>>> {
    if l.rank() == 0 {
        return Err(Error::ZeroRank);
    }
    let g = l.basis().gram();
    let gq: Vec<Vec<Rational>> = g
        .row_iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let inv = matrix::rational_inverse(&gq).ok_or(Error::ZeroRank)?;
    let b = l.basis();
    Ok(inv
        .iter()
        .map(|irow| {
            (0..b.cols())
                .map(|c| {
                    irow.iter()
                        .enumerate()
                        .fold(Rational::zero(), |acc, (k, x)| {
                            acc + x * Rational::from_integer(b.get(k, c).clone())
                        })
                })
                .collect()
        })
        .collect())
}

/// The dual lattice scaled by the least common denominator `D` of its basis,
/// returned as `(D, D * L^*)`.
pub fn scaled_dual(l: &IntLattice) -> Result<(BigInt, IntLattice)> {
    let dual = dual_basis(l)?;
    let den = dual
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let rows: Vec<Vec<BigInt>> = dual
        .iter()
        .map(|r| r.iter().map(|x| x.numer() * (&den / x.denom())).collect())
        .collect();
    Ok((den, IntLattice::from_generators(l.ambient_dim(), rows)?))
}

/// Normalizes `v` so that its first nonzero entry is positive.
pub fn sign_normalize(v: &mut [i64]) {
    if let Some(first) = v.iter().find(|x| **x != 0) {
        if *first < 0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

pub fn sup_norm(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

pub fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(format!("{x} exceeds i64"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn lat(n: usize, rows: &[Vec<i64>]) -> IntLattice {
        IntLattice::from_i64(n, rows).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let k = integer_kernel(&IntMatrix::from_i64(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap());
        assert_eq!(k, lat(3, &[vec![1, 1, -1]]));
        assert_eq!(integer_kernel(&IntMatrix::identity(3)).rank(), 0);
        assert_eq!(integer_kernel(&IntMatrix::zero(1, 3)), IntLattice::full(3));
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x - 4y = 0 has primitive solution (2,1), not (4,2)
        let k = integer_kernel(&IntMatrix::from_i64(&[vec![2, -4]]).unwrap());
        assert_eq!(k, lat(2, &[vec![2, 1]]));
    }

    #[test]
    fn complement_examples() {
        let c = orthogonal_integer_complement(&lat(3, &[vec![1, 1, -1]]));
        assert_eq!(c, lat(3, &[vec![1, 0, 1], vec![0, 1, 1]]));
        assert_eq!(orthogonal_integer_complement(&IntLattice::full(3)).rank(), 0);
        assert_eq!(orthogonal_integer_complement(&IntLattice::zero(3)), IntLattice::full(3));
    }

    #[test]
    fn complement_twice_saturates() {
        let l = lat(3, &[vec![2, 0, 2]]);
        assert_eq!(l.saturation(), lat(3, &[vec![1, 0, 1]]));
        let sat = lat(3, &[vec![1, 0, 1], vec![0, 1, 1]]);
        assert!(sat.is_saturated());
    }

    #[test]
    fn gram_examples() {
        assert_eq!(gram_det(&lat(3, &[vec![1, 0, 1], vec![0, 1, 1]])).unwrap(), BigInt::from(3));
        assert_eq!(gram_det(&IntLattice::full(4)).unwrap(), BigInt::from(1));
        assert_eq!(gram_det(&lat(2, &[vec![2, 1]])).unwrap(), BigInt::from(5));
        assert_eq!(gram_det(&IntLattice::zero(2)), Err(Error::ZeroRank));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(
            dual_basis(&IntLattice::full(2)).unwrap(),
            vec![vec![int(1), int(0)], vec![int(0), int(1)]]
        );
        assert_eq!(dual_basis(&lat(2, &[vec![2, 1]])).unwrap(), vec![vec![ratio(2, 5), ratio(1, 5)]]);
        assert_eq!(
            dual_basis(&lat(3, &[vec![1, 0, 1], vec![0, 1, 1]])).unwrap(),
            vec![
                vec![ratio(2, 3), ratio(-1, 3), ratio(1, 3)],
                vec![ratio(-1, 3), ratio(2, 3), ratio(1, 3)]
            ]
        );
        assert!(dual_basis(&IntLattice::zero(2)).is_err());
    }

    #[test]
    fn dual_pairs_to_identity() {
        let l = lat(3, &[vec![1, 2, 3], vec![0, 4, -1]]);
        let d = dual_basis(&l).unwrap();
        for (i, bi) in l.basis().row_iter().enumerate() {
            for (j, dj) in d.iter().enumerate() {
                let ip: Rational = bi
                    .iter()
                    .zip(dj)
                    .map(|(b, y)| Rational::from_integer(b.clone()) * y)
                    .sum();
                assert_eq!(ip, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn membership_and_coordinates() {
        let l = lat(3, &[vec![1, 0, 1], vec![0, 1, 1]]);
        assert!(l.contains_i64(&[1, -1, 0]));
        assert!(!l.contains_i64(&[1, 0, 0]));
        let l2 = lat(2, &[vec![2, 1]]);
        assert!(!l2.contains_i64(&[1, 0]));
        assert_eq!(l2.coordinates(&[int(1), ratio(1, 2)]), Some(vec![ratio(1, 2)]));
        assert_eq!(l2.coordinates(&[int(1), int(1)]), None);
    }

    #[test]
    fn index_of_sublattice() {
        let z2 = IntLattice::full(2);
        assert_eq!(z2.index_of(&lat(2, &[vec![2, 3], vec![5, 7]])), Some(BigInt::from(1)));
        assert_eq!(z2.index_of(&lat(2, &[vec![1, 1], vec![2, 4]])), Some(BigInt::from(2)));
    }
}
