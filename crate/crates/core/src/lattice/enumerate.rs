//! Enumeration of lattice vectors in a sup-norm box, walking coefficients in
//! the echelon (HNF) basis. After coefficient `j` is fixed, every ambient
//! column up to the next pivot is final, so each level gets an exact
//! coefficient range and no leaf falls outside the box.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use super::int_lattice::IntLattice;

/// HNF basis of a lattice in machine integers.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    ambient: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(l: &IntLattice) -> Result<Self> {
        Ok(EchelonBasis {
            ambient: l.ambient_dim(),
            rows: l.basis_i64()?,
            pivots: l.pivots(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    fn level_columns(&self, j: usize) -> std::ops::Range<usize> {
        let end = self.pivots.get(j + 1).copied().unwrap_or(self.ambient);
        self.pivots[j]..end
    }

    /// Range of coefficient `j` keeping the columns it finalizes inside `[-q, q]`.
    pub fn level_range(&self, j: usize, partial: &[i64], q: i64) -> Option<(i64, i64)> {
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        for c in self.level_columns(j) {
            let h = self.rows[j][c];
            let p = partial[c];
            if h == 0 {
                if p.abs() > q {
                    return None;
                }
                continue;
            }
            let (a, b) = if h > 0 {
                (Integer::div_ceil(&(-q - p), &h), Integer::div_floor(&(q - p), &h))
            } else {
                (Integer::div_ceil(&(q - p), &h), Integer::div_floor(&(-q - p), &h))
            };
            lo = lo.max(a);
            hi = hi.min(b);
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// `partial + x * row_j`.
    pub fn extend(&self, j: usize, partial: &[i64], x: i64) -> Vec<i64> {
        partial
            .iter()
            .zip(&self.rows[j])
            .map(|(p, h)| p + x * h)
            .collect()
    }

    /// Depth-first walk over all coefficient prefixes of length `rank - 1`
    /// whose finalized columns lie in the box. `last` receives the partial
    /// vector, the prefix coefficients and the admissible range of the final
    /// coefficient.
    pub fn walk_last_level<F>(&self, q: i64, mut last: F)
    where
        F: FnMut(&[i64], &[i64], (i64, i64)),
    {
        let d = self.rank();
        if d == 0 || q < 0 {
            return;
        }
        let mut coeffs = Vec::with_capacity(d);
        let zero = vec![0i64; self.ambient];
        self.walk(0, &zero, q, &mut coeffs, &mut last);
    }

    fn walk<F>(&self, j: usize, partial: &[i64], q: i64, coeffs: &mut Vec<i64>, last: &mut F)
    where
        F: FnMut(&[i64], &[i64], (i64, i64)),
    {
        let Some(range) = self.level_range(j, partial, q) else {
            return;
        };
        if j + 1 == self.rank() {
            last(partial, coeffs, range);
            return;
        }
        for x in range.0..=range.1 {
            let next = self.extend(j, partial, x);
            coeffs.push(x);
            self.walk(j + 1, &next, q, coeffs, last);
            coeffs.pop();
        }
    }
}

/// Iterator over the nonzero lattice vectors with sup norm at most `q`, in
/// lexicographic order of the ambient coordinates.
pub struct BoxIter {
    basis: EchelonBasis,
    q: i64,
    // per level: current coefficient, upper bound, partial vector before it
    stack: Vec<(i64, i64, Vec<i64>)>,
    started: bool,
}

impl BoxIter {
    fn push_level(&mut self, partial: Vec<i64>) -> bool {
        let j = self.stack.len();
        match self.basis.level_range(j, &partial, self.q) {
            Some((lo, hi)) => {
                self.stack.push((lo - 1, hi, partial));
                true
            }
            None => false,
        }
    }
}

impl Iterator for BoxIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let d = self.basis.rank();
        if d == 0 {
            return None;
        }
        if !self.started {
            self.started = true;
            if !self.push_level(vec![0; self.basis.ambient]) {
                return None;
            }
        }
        loop {
            let j = self.stack.len().checked_sub(1)?;
            let top = self.stack.last_mut()?;
            if top.0 >= top.1 {
                self.stack.pop();
                continue;
            }
            top.0 += 1;
            let v = self.basis.extend(j, &top.2, top.0);
            if j + 1 == d {
                if v.iter().any(|&x| x != 0) {
                    return Some(v);
                }
                continue;
            }
            self.push_level(v);
        }
    }
}

/// Nonzero vectors of `L` with `|v|_inf <= q` (only `floor(q)` matters).
pub fn enumerate_in_box(l: &IntLattice, q: &Rational) -> Result<BoxIter> {
    let qi = rational::floor(q);
    let q = i64::try_from(qi).map_err(|_| Error::Overflow("box radius exceeds i64".into()))?;
    Ok(BoxIter {
        basis: EchelonBasis::new(l)?,
        q,
        stack: Vec::new(),
        started: false,
    })
}
