//! JSON formats. Scalars are strings `"p/q"` (or `"p"`), vectors are
//! arrays of scalars and matrices are arrays of rows.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Module};
use crate::calculus::{Calculus, Presentation};
use crate::error::{Error, Result};
use crate::linalg::{fmt_q, parse_q, Matrix, Q};

pub type JsonVec = Vec<String>;
pub type JsonMatrix = Vec<Vec<String>>;

pub fn vec_to_json(v: &[Q]) -> JsonVec {
    v.iter().map(fmt_q).collect()
}

pub fn vec_from_json(v: &[String]) -> Result<Vec<Q>> {
    v.iter().map(|s| parse_q(s)).collect()
}

pub fn matrix_to_json(m: &Matrix) -> JsonMatrix {
    m.row_vecs().iter().map(|r| vec_to_json(r)).collect()
}

/// Rows of equal length; `cols` fixes the width of an empty matrix.
pub fn matrix_from_json(rows: &[Vec<String>], cols: usize) -> Result<Matrix> {
    let parsed = rows.iter().map(|r| vec_from_json(r)).collect::<Result<Vec<_>>>()?;
    if parsed.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!("matrix rows must have {cols} entries")));
    }
    Ok(Matrix::from_rows_sized(&parsed, cols))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: JsonVec,
    /// `mult[a][b]` = coordinates of `e_a e_b`
    pub mult: Vec<Vec<JsonVec>>,
}

impl AlgebraSpec {
    pub fn from_algebra(alg: &Algebra) -> AlgebraSpec {
        AlgebraSpec {
            name: alg.name().to_string(),
            dim: alg.dim(),
            basis: alg.labels().to_vec(),
            unit: vec_to_json(alg.unit()),
            mult: alg
                .table()
                .iter()
                .map(|row| row.iter().map(|v| vec_to_json(v)).collect())
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Algebra> {
        let n = self.dim;
        if self.basis.len() != n || self.unit.len() != n || self.mult.len() != n {
            return Err(Error::Parse(format!("algebra spec: basis, unit and mult must have {n} entries")));
        }
        let mut mult = Vec::with_capacity(n);
        for row in &self.mult {
            if row.len() != n || row.iter().any(|v| v.len() != n) {
                return Err(Error::Parse("algebra spec: mult must be dim x dim x dim".into()));
            }
            mult.push(row.iter().map(|v| vec_from_json(v)).collect::<Result<Vec<_>>>()?);
        }
        Algebra::new(&self.name, self.basis.clone(), vec_from_json(&self.unit)?, mult)
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub dim: usize,
    pub left_action: Vec<JsonMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_action: Option<Vec<JsonMatrix>>,
}

impl ModuleSpec {
    pub fn from_module(m: &Module) -> ModuleSpec {
        ModuleSpec {
            dim: m.dim(),
            left_action: m.left().iter().map(matrix_to_json).collect(),
            right_action: m.right().map(|r| r.iter().map(matrix_to_json).collect()),
        }
    }

    /// Parses and checks the module axioms over `alg`.
    pub fn build(&self, alg: &Algebra) -> Result<Module> {
        let parse = |ms: &[JsonMatrix]| -> Result<Vec<Matrix>> {
            if ms.len() != alg.dim() {
                return Err(Error::Parse(format!("module spec: expected {} action matrices", alg.dim())));
            }
            ms.iter()
                .map(|m| {
                    if m.len() != self.dim {
                        return Err(Error::Parse(format!("action matrices must be {0}x{0}", self.dim)));
                    }
                    matrix_from_json(m, self.dim)
                })
                .collect()
        };
        let left = parse(&self.left_action)?;
        let right = self.right_action.as_deref().map(parse).transpose()?;
        let m = Module::new(self.dim, left, right).map_err(|e| Error::Parse(e.to_string()))?;
        let failures = m.validate(alg);
        if !failures.is_empty() {
            return Err(Error::Validation(format!("module axioms fail: {}", failures.join("; "))));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CalculusSpec {
    Universal,
    Quotient {
        #[serde(rename = "N_generators")]
        n_generators: Vec<JsonVec>,
    },
    Terminal {
        elements: Vec<JsonVec>,
    },
}

impl CalculusSpec {
    pub fn from_calculus(c: &Calculus) -> CalculusSpec {
        let conv = |vs: &[Vec<Q>]| vs.iter().map(|v| vec_to_json(v)).collect();
        match c.presentation() {
            Presentation::Universal => CalculusSpec::Universal,
            Presentation::Quotient(g) => CalculusSpec::Quotient { n_generators: conv(g) },
            Presentation::Terminal(s) => CalculusSpec::Terminal { elements: conv(s) },
        }
    }

    pub fn build(&self, alg: &Algebra) -> Result<Calculus> {
        let conv = |vs: &[JsonVec]| vs.iter().map(|v| vec_from_json(v)).collect::<Result<Vec<_>>>();
        match self {
            CalculusSpec::Universal => Calculus::universal(alg),
            CalculusSpec::Quotient { n_generators } => Calculus::quotient(alg, &conv(n_generators)?),
            CalculusSpec::Terminal { elements } => Calculus::terminal(alg, &conv(elements)?),
        }
    }
}

/// An operator `Δ: E → F` with module references for `E` and `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub matrix: JsonMatrix,
    #[serde(default = "regular")]
    pub domain: String,
    #[serde(default = "regular")]
    pub codomain: String,
}

fn regular() -> String {
    "regular".into()
}

impl OperatorSpec {
    /// Module references are resolved relative to `base`.
    pub fn resolve(&self, calc: &Calculus, base: &Path) -> Result<(Module, Module, Matrix)> {
        let domain = resolve_module(&self.domain, calc.algebra(), Some(calc), base)?;
        let codomain = resolve_module(&self.codomain, calc.algebra(), Some(calc), base)?;
        if self.matrix.len() != codomain.dim() {
            return Err(Error::Parse(format!("operator needs {} rows", codomain.dim())));
        }
        let m = matrix_from_json(&self.matrix, domain.dim())?;
        Ok((domain, codomain, m))
    }
}

/// A module reference: `"regular"` (`A` itself), `"point"` (`k[0]`),
/// `"omega1"` (needs a calculus) or a path to a module file relative to
/// `base`.
pub fn resolve_module(r: &str, alg: &Algebra, calc: Option<&Calculus>, base: &Path) -> Result<Module> {
    match r {
        "regular" => Ok(Module::regular(alg)),
        "point" => point_module(alg),
        "omega1" => calc
            .map(|c| c.omega1().clone())
            .ok_or_else(|| Error::Parse("\"omega1\" needs a calculus".into())),
        path => {
            let p: PathBuf = base.join(path);
            let spec: ModuleSpec = read_json(&p)?;
            spec.build(alg)
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// `k[0]`: the one-dimensional module on which every basis element acts by
/// its coefficient of the unit, for algebras whose other basis elements span
/// a two-sided ideal (augmentation).
pub fn point_module(alg: &Algebra) -> Result<Module> {
    let ms: Vec<Matrix> = (0..alg.dim())
        .map(|i| Matrix::from_rows_sized(&[vec![alg.unit()[i].clone()]], 1))
        .collect();
    let m = Module::new(1, ms.clone(), Some(ms))?;
    let failures = m.validate(alg);
    if !failures.is_empty() {
        return Err(Error::Validation(format!("no augmentation along the unit: {}", failures.join("; "))));
    }
    Ok(m)
}
