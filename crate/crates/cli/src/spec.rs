//! Input files: vector specs, built-in vectors and verification sweeps.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ergotime::rational::{self, Rational};
use ergotime::scalars::{BasisConstant, ConstantSet, RealScalar};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstantDecl {
    One { symbol: String },
    Sqrt { symbol: String, radicand: u64 },
    /// Real root of `sum polynomial[i] x^i` isolated by `interval`.
    Root {
        symbol: String,
        polynomial: Vec<String>,
        interval: [String; 2],
    },
}

impl ConstantDecl {
    fn build(&self) -> Result<BasisConstant, CliError> {
        Ok(match self {
            ConstantDecl::One { symbol } => BasisConstant::one(symbol.as_str()),
            ConstantDecl::Sqrt { symbol, radicand } => BasisConstant::sqrt(symbol.as_str(), *radicand)?,
            ConstantDecl::Root {
                symbol,
                polynomial,
                interval,
            } => {
                let coeffs = polynomial
                    .iter()
                    .map(|c| {
                        c.trim()
                            .parse::<BigInt>()
                            .map_err(|_| CliError::Input(format!("polynomial coefficient {c:?} is not an integer")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                BasisConstant::root(
                    symbol.as_str(),
                    coeffs,
                    rational::parse(&interval[0])?,
                    rational::parse(&interval[1])?,
                )?
            }
        })
    }

    fn symbol(&self) -> &str {
        match self {
            ConstantDecl::One { symbol } | ConstantDecl::Sqrt { symbol, .. } | ConstantDecl::Root { symbol, .. } => {
                symbol
            }
        }
    }
}

/// A direction vector: each entry is a rational combination of the declared
/// constants, listed in declaration order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorSpec {
    pub name: String,
    pub constants: Vec<ConstantDecl>,
    pub entries: Vec<Vec<String>>,
    /// Acknowledges that the constants are assumed rationally independent.
    #[serde(default)]
    pub independence_attestation: String,
}

impl VectorSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("vector spec: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn build(&self) -> Result<Vec<RealScalar>, CliError> {
        if self.entries.is_empty() {
            return Err(CliError::Input("vector spec has no entries".into()));
        }
        let decls = self
            .constants
            .iter()
            .map(ConstantDecl::build)
            .collect::<Result<Vec<_>, _>>()?;
        let set = Arc::new(ConstantSet::new(decls)?);
        self.entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != self.constants.len() {
                    return Err(CliError::Input(format!(
                        "entry {i} has {} coefficients for {} constants",
                        row.len(),
                        self.constants.len()
                    )));
                }
                let mut coeffs = vec![Rational::from_integer(0.into()); set.len()];
                for (decl, c) in self.constants.iter().zip(row) {
                    let j = set.index_of(decl.symbol()).expect("declared constant");
                    coeffs[j] = rational::parse(c)?;
                }
                Ok(RealScalar::from_coeffs(&set, coeffs)?)
            })
            .collect()
    }
}

fn sqrt(symbol: &str, m: u64) -> ConstantDecl {
    ConstantDecl::Sqrt {
        symbol: symbol.into(),
        radicand: m,
    }
}

fn spec(name: &str, constants: Vec<ConstantDecl>, entries: &[&[&str]]) -> VectorSpec {
    VectorSpec {
        name: name.into(),
        constants,
        entries: entries
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect(),
        independence_attestation: "built-in: distinct square roots of square-free integers and the real cube root of 2 \
                                   are linearly independent over Q together with 1"
            .into(),
    }
}

pub const BUILTIN_NAMES: &[&str] = &["sqrt2", "golden", "sqrt2-sqrt3", "cbrt2", "sqrt2-sum", "half", "sqrt3"];

/// Built-in vectors used in docs and tests.
pub fn builtin(name: &str) -> Option<VectorSpec> {
    let one = || ConstantDecl::One { symbol: "1".into() };
    Some(match name {
        "sqrt2" => spec(name, vec![one(), sqrt("s2", 2)], &[&["1", "0"], &["0", "1"]]),
        "sqrt3" => spec(name, vec![one(), sqrt("s3", 3)], &[&["1", "0"], &["0", "1"]]),
        "golden" => spec(name, vec![one(), sqrt("s5", 5)], &[&["1", "0"], &["1/2", "1/2"]]),
        "sqrt2-sqrt3" => spec(
            name,
            vec![one(), sqrt("s2", 2), sqrt("s3", 3)],
            &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
        ),
        "sqrt2-sum" => spec(
            name,
            vec![one(), sqrt("s2", 2)],
            &[&["1", "0"], &["0", "1"], &["1", "1"]],
        ),
        "cbrt2" => spec(
            name,
            vec![
                one(),
                ConstantDecl::Root {
                    symbol: "c2".into(),
                    polynomial: vec!["-2".into(), "0".into(), "0".into(), "1".into()],
                    interval: ["1".into(), "2".into()],
                },
            ],
            &[&["1", "0"], &["0", "1"]],
        ),
        "half" => spec(name, vec![one()], &[&["1"], &["1/2"]]),
        _ => return None,
    })
}

pub fn builtin_or_err(name: &str) -> Result<VectorSpec, CliError> {
    builtin(name).ok_or_else(|| {
        CliError::Input(format!(
            "unknown vector {name:?}; built-in names are {}",
            BUILTIN_NAMES.join(", ")
        ))
    })
}

/// A vector referenced from a sweep: a built-in name, a spec file (relative
/// to the sweep file), or an inline spec.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum VectorRef {
    Named(String),
    File { file: PathBuf },
    Inline(VectorSpec),
}

impl VectorRef {
    pub fn resolve(&self, base: &Path) -> Result<VectorSpec, CliError> {
        match self {
            VectorRef::Named(n) => builtin_or_err(n),
            VectorRef::File { file } => VectorSpec::load(&base.join(file)),
            VectorRef::Inline(s) => Ok(s.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Theorem1,
    Proposition,
    Transference,
    Theorem2,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub vectors: Vec<VectorRef>,
    #[serde(default)]
    pub delta: Vec<String>,
    #[serde(default, rename = "Q")]
    pub q: Vec<String>,
    #[serde(default)]
    pub tol: Option<String>,
    #[serde(default)]
    pub epsilon: Option<String>,
    pub checks: Vec<Check>,
}

/// A sweep with its grids parsed and its vectors resolved.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub vectors: Vec<VectorSpec>,
    pub delta: Vec<Rational>,
    pub q: Vec<Rational>,
    pub tol: Option<Rational>,
    pub epsilon: Option<Rational>,
    pub checks: Vec<Check>,
}

fn positive(field: &str, s: &str) -> Result<Rational, CliError> {
    let v = rational::parse(s)?;
    if v <= Rational::from_integer(0.into()) {
        return Err(CliError::Input(format!("{field} value {s:?} must be positive")));
    }
    Ok(v)
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("sweep spec: {e}")))
    }

    pub fn resolve(&self, base: &Path) -> Result<Sweep, CliError> {
        if self.vectors.is_empty() {
            return Err(CliError::Input("sweep lists no vectors".into()));
        }
        if self.checks.is_empty() {
            return Err(CliError::Input("sweep lists no checks".into()));
        }
        let needs_delta = self
            .checks
            .iter()
            .any(|c| matches!(c, Check::Theorem1 | Check::Theorem2));
        if needs_delta && self.delta.is_empty() {
            return Err(CliError::Input("delta grid is empty".into()));
        }
        if self.checks.contains(&Check::Proposition) && self.q.is_empty() {
            return Err(CliError::Input("Q grid is empty".into()));
        }
        Ok(Sweep {
            vectors: self
                .vectors
                .iter()
                .map(|v| v.resolve(base))
                .collect::<Result<_, _>>()?,
            delta: self.delta.iter().map(|d| positive("delta", d)).collect::<Result<_, _>>()?,
            q: self.q.iter().map(|q| positive("Q", q)).collect::<Result<_, _>>()?,
            tol: self.tol.as_deref().map(|t| positive("tol", t)).transpose()?,
            epsilon: self.epsilon.as_deref().map(|e| positive("epsilon", e)).transpose()?,
            checks: self.checks.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_build() {
        for name in BUILTIN_NAMES {
            let v = builtin(name).unwrap().build().unwrap();
            assert!(v.len() >= 2, "{name}");
        }
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn spec_round_trip() {
        let s = builtin("cbrt2").unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back = VectorSpec::from_json(&text).unwrap();
        assert_eq!(back.build().unwrap(), s.build().unwrap());
    }

    #[test]
    fn spec_errors() {
        assert!(VectorSpec::from_json("{").is_err());
        let bad = r#"{"name":"x","constants":[{"kind":"one","symbol":"1"}],"entries":[["1","2"]]}"#;
        assert!(VectorSpec::from_json(bad).unwrap().build().is_err());
        let empty = r#"{"name":"x","constants":[{"kind":"one","symbol":"1"}],"entries":[]}"#;
        assert!(VectorSpec::from_json(empty).unwrap().build().is_err());
    }

    #[test]
    fn sweep_grids_validated() {
        let s = SweepSpec::from_json(r#"{"vectors":["sqrt2"],"delta":["1","-1/2"],"checks":["theorem1"]}"#).unwrap();
        assert!(s.resolve(Path::new(".")).is_err());
        let s = SweepSpec::from_json(r#"{"vectors":["sqrt2"],"checks":["proposition"]}"#).unwrap();
        assert!(s.resolve(Path::new(".")).is_err());
        let s = SweepSpec::from_json(r#"{"vectors":["sqrt2"],"Q":["8"],"checks":["proposition"]}"#).unwrap();
        assert_eq!(s.resolve(Path::new(".")).unwrap().q.len(), 1);
    }
}
