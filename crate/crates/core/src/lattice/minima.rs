//! Shortest vectors and successive minima for polyhedral norms, by
//! enumeration over growing sup-norm boxes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use super::enumerate::enumerate_in_box;
use super::int_lattice::{sign_normalize, IntLattice};
use super::matrix::{rational_inverse, IntMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Sup,
    L1,
    /// Dual norm of the sup norm restricted to a subspace:
    /// `|y|_* = max { y . x : x in V, |x|_inf <= 1 }`.
    DualSup,
}

/// A norm on integer vectors that dominates the sup norm, so a sup-norm box
/// of radius `r` contains every vector of norm at most `r`.
pub trait LatticeNorm {
    fn kind(&self) -> NormKind;
    fn eval(&self, v: &[i64]) -> Rational;
}

pub struct SupNorm;
pub struct L1Norm;

impl LatticeNorm for SupNorm {
    fn kind(&self) -> NormKind {
        NormKind::Sup
    }
    fn eval(&self, v: &[i64]) -> Rational {
        rational::int(v.iter().map(|x| x.abs()).max().unwrap_or(0))
    }
}

impl LatticeNorm for L1Norm {
    fn kind(&self) -> NormKind {
        NormKind::L1
    }
    fn eval(&self, v: &[i64]) -> Rational {
        rational::int(v.iter().map(|x| x.abs()).sum())
    }
}

/// Dual of the sup norm on `span(L)`, evaluated through the vertices of the
/// section `span(L) ∩ [-1, 1]^n`.
pub struct DualSupNorm {
    // vertices scaled to integers by a common denominator
    vertices: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl DualSupNorm {
    pub fn for_span(l: &IntLattice) -> Result<Self> {
        let vertices = section_vertices(l)?;
        let den = vertices
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let vertices = vertices
            .iter()
            .map(|v| v.iter().map(|x| x.numer() * (&den / x.denom())).collect())
            .collect();
        Ok(DualSupNorm { vertices, den })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

impl LatticeNorm for DualSupNorm {
    fn kind(&self) -> NormKind {
        NormKind::DualSup
    }
    fn eval(&self, v: &[i64]) -> Rational {
        let best = self
            .vertices
            .iter()
            .map(|x| {
                x.iter()
                    .zip(v)
                    .map(|(a, &b)| a * BigInt::from(b))
                    .sum::<BigInt>()
                    .abs()
            })
            .max()
            .unwrap_or_else(BigInt::zero);
        Rational::new(best, self.den.clone())
    }
}

/// Vertices of the polytope `span(L) ∩ [-1, 1]^n`: each is fixed by `rank`
/// independent active coordinate constraints `x_i = ±1`.
pub fn section_vertices(l: &IntLattice) -> Result<Vec<Vec<Rational>>> {
    let d = l.rank();
    let n = l.ambient_dim();
    if d == 0 {
        return Err(Error::ZeroRank);
    }
    let b: Vec<Vec<Rational>> = l
        .basis()
        .row_iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for cols in combinations(n, d) {
        // B_S: d x d, columns `cols` of B
        let bs: Vec<Vec<Rational>> = (0..d)
            .map(|i| cols.iter().map(|&c| b[i][c].clone()).collect())
            .collect();
        let Some(inv) = rational_inverse(&bs) else {
            continue;
        };
        for mask in 0..(1u32 << d) {
            let eps: Vec<Rational> = (0..d)
                .map(|k| if mask >> k & 1 == 1 { -Rational::one() } else { Rational::one() })
                .collect();
            // s = eps * inv
            let s: Vec<Rational> = (0..d)
                .map(|j| (0..d).map(|k| &eps[k] * &inv[k][j]).sum())
                .collect();
            let x: Vec<Rational> = (0..n)
                .map(|c| (0..d).map(|i| &s[i] * &b[i][c]).sum())
                .collect();
            if x.iter().all(|xi| xi.abs() <= Rational::one()) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessiveMinima {
    pub norm: NormKind,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub values: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational_rows")]
    pub witnesses: Vec<Vec<Rational>>,
}

/// Sign-normalized nonzero vectors of norm at most `r`, sorted by norm then
/// lexicographically.
fn candidates(l: &IntLattice, norm: &dyn LatticeNorm, r: i64) -> Result<Vec<(Rational, Vec<i64>)>> {
    let rr = rational::int(r);
    let mut out: Vec<(Rational, Vec<i64>)> = Vec::new();
    for mut v in enumerate_in_box(l, &rr)? {
        let first = v.iter().copied().find(|x| *x != 0).unwrap_or(0);
        if first < 0 {
            continue;
        }
        sign_normalize(&mut v);
        let nv = norm.eval(&v);
        if nv <= rr {
            out.push((nv, v));
        }
    }
    out.sort();
    Ok(out)
}

fn grows_rank(chosen: &[Vec<i64>], v: &[i64]) -> bool {
    let mut rows: Vec<Vec<i64>> = chosen.to_vec();
    rows.push(v.to_vec());
    IntMatrix::from_i64(&rows).map(|m| m.rank()).unwrap_or(0) == rows.len()
}

/// Successive minima of an integer lattice under `norm`, with the greedy
/// witnesses (smallest norm first, ties broken lexicographically).
pub fn minima_with(l: &IntLattice, norm: &dyn LatticeNorm) -> Result<(Vec<Rational>, Vec<Vec<i64>>)> {
    let d = l.rank();
    if d == 0 {
        return Err(Error::ZeroRank);
    }
    let mut r: i64 = 1;
    loop {
        let mut values = Vec::new();
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        for (nv, v) in candidates(l, norm, r)? {
            if grows_rank(&chosen, &v) {
                values.push(nv);
                chosen.push(v);
                if chosen.len() == d {
                    return Ok((values, chosen));
                }
            }
        }
        r = r
            .checked_mul(2)
            .ok_or_else(|| Error::Overflow("enumeration radius".into()))?;
    }
}

fn to_rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| rational::int(x)).collect())
        .collect()
}

pub fn successive_minima(l: &IntLattice, norm: NormKind) -> Result<SuccessiveMinima> {
    let (values, w) = match norm {
        NormKind::Sup => minima_with(l, &SupNorm)?,
        NormKind::L1 => minima_with(l, &L1Norm)?,
        NormKind::DualSup => minima_with(l, &DualSupNorm::for_span(l)?)?,
    };
    Ok(SuccessiveMinima {
        norm,
        values,
        witnesses: to_rational_rows(&w),
    })
}

/// Nonzero lattice vector of minimal norm; among ties the lexicographically
/// smallest after making the leading nonzero entry positive.
pub fn shortest_vector(l: &IntLattice, norm: NormKind) -> Result<(Vec<i64>, Rational)> {
    if l.rank() == 0 {
        return Err(Error::ZeroRank);
    }
    let dual;
    let n: &dyn LatticeNorm = match norm {
        NormKind::Sup => &SupNorm,
        NormKind::L1 => &L1Norm,
        NormKind::DualSup => {
            dual = DualSupNorm::for_span(l)?;
            &dual
        }
    };
    let mut r: i64 = 1;
    loop {
        if let Some((nv, v)) = candidates(l, n, r)?.into_iter().next() {
            return Ok((v, nv));
        }
        r = r
            .checked_mul(2)
            .ok_or_else(|| Error::Overflow("enumeration radius".into()))?;
    }
}
