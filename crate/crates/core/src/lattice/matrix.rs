use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense row-major matrix of arbitrary precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_iter()).finish()
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width when there are no rows.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(IntMatrix { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.row_iter().map(<[BigInt]>::to_vec).collect()
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.row_iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        x.to_i64()
                            .ok_or_else(|| Error::Overflow(format!("matrix entry {x} exceeds i64")))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.data[r * other.cols + c] = acc;
            }
        }
        Ok(out)
    }

    /// `B B^T`.
    pub fn gram(&self) -> IntMatrix {
        self.mul(&self.transpose()).expect("shapes agree")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = q * &self.data[src * self.cols + c];
            self.data[dst * self.cols + c] -= v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }

    fn drop_rows_from(&mut self, r: usize) {
        self.data.truncate(r * self.cols);
        self.rows = r;
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.data[i * n + j] = v;
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    pub fn rank(&self) -> usize {
        hnf(self).rows
    }
}

/// Row-reduces `m` to echelon form with unimodular row operations, applying
/// the same operations to `track` when given. Returns the pivot columns.
fn echelon(m: &mut IntMatrix, mut track: Option<&mut IntMatrix>, reduce_above: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut pr = 0;
    for pc in 0..m.cols {
        if pr == m.rows {
            break;
        }
        loop {
            // smallest nonzero magnitude in the column at or below pr
            let best = (pr..m.rows)
                .filter(|&r| !m.get(r, pc).is_zero())
                .min_by(|&a, &b| m.get(a, pc).abs().cmp(&m.get(b, pc).abs()));
            let Some(best) = best else { break };
            m.swap_rows(pr, best);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(pr, best);
            }
            let mut done = true;
            for r in pr + 1..m.rows {
                if m.get(r, pc).is_zero() {
                    continue;
                }
                let q = m.get(r, pc).div_floor(m.get(pr, pc));
                m.sub_row_multiple(r, pr, &q);
                if let Some(t) = track.as_deref_mut() {
                    t.sub_row_multiple(r, pr, &q);
                }
                if !m.get(r, pc).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pr < m.rows && !m.get(pr, pc).is_zero() {
            if m.get(pr, pc).is_negative() {
                m.negate_row(pr);
                if let Some(t) = track.as_deref_mut() {
                    t.negate_row(pr);
                }
            }
            if reduce_above {
                for r in 0..pr {
                    let q = m.get(r, pc).div_floor(m.get(pr, pc));
                    m.sub_row_multiple(r, pr, &q);
                    if let Some(t) = track.as_deref_mut() {
                        t.sub_row_multiple(r, pr, &q);
                    }
                }
            }
            pivots.push(pc);
            pr += 1;
        }
    }
    pivots
}

/// Row Hermite normal form with zero rows removed: rows in echelon form,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    let pivots = echelon(&mut h, None, true);
    h.drop_rows_from(pivots.len());
    h
}

/// Pivot column of each row of a matrix already in echelon form.
pub fn pivot_columns(h: &IntMatrix) -> Vec<usize> {
    h.row_iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).unwrap_or(h.cols))
        .collect()
}

/// Integer solutions of `M k^T = 0` as the rows of a unimodular transform; the
/// returned rows form a basis of the (saturated) kernel lattice.
pub fn kernel_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = m.cols;
    let mut a = m.transpose();
    let mut u = IntMatrix::identity(n);
    let pivots = echelon(&mut a, Some(&mut u), false);
    (pivots.len()..n).map(|r| u.row(r).to_vec()).collect()
}

/// Clears denominators row by row so that the integer row space matches.
pub fn integerize_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let den = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| x.numer() * (&den / x.denom())).collect()
        })
        .collect()
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
pub fn rational_inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let x = &f * &a[col][j];
                a[r][j] -= x;
                let y = &f * &inv[col][j];
                inv[r][j] -= y;
            }
        }
    }
    Some(inv)
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .row_iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        let parsed: std::result::Result<Vec<Vec<BigInt>>, _> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.parse::<BigInt>()).collect())
            .collect();
        let parsed = parsed.map_err(serde::de::Error::custom)?;
        IntMatrix::from_rows(parsed, cols).map_err(serde::de::Error::custom)
    }
}
