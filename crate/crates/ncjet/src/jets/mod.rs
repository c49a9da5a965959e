//! Jet modules of every flavour.

pub mod eth;
pub mod first;
pub mod holonomic;
pub mod nonholonomic;
pub mod semiholonomic;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use eth::{semidirect, Eth, EthReport};
pub use first::Jet1;
pub use holonomic::{d2_obstruction, hol_map, l_mn, Holonomic, Obstruction};
pub use nonholonomic::{nh_map, Decomposition, Nonholonomic};
pub use semiholonomic::{SesReport, Semiholonomic};

use crate::algebra::Module;
use crate::error::{Error, Result};
use crate::exterior::{ExteriorAlgebra, SymmetricForms, Tower};
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Nonholonomic,
    Semiholonomic,
    Sesquiholonomic,
    Holonomic,
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Flavor> {
        match s {
            "nonholonomic" => Ok(Flavor::Nonholonomic),
            "semiholonomic" => Ok(Flavor::Semiholonomic),
            "sesquiholonomic" => Ok(Flavor::Sesquiholonomic),
            "holonomic" => Ok(Flavor::Holonomic),
            other => Err(Error::Parse(format!("unknown jet flavor `{other}`"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flavor::Nonholonomic => "nonholonomic",
            Flavor::Semiholonomic => "semiholonomic",
            Flavor::Sesquiholonomic => "sesquiholonomic",
            Flavor::Holonomic => "holonomic",
        };
        f.write_str(s)
    }
}

/// One jet module with its structure maps.
#[derive(Clone, Debug)]
pub struct JetSpace {
    pub flavor: Flavor,
    pub order: usize,
    pub carrier: Module,
    /// Into `J^(n)E`, when it has been computed.
    pub embed: Option<Matrix>,
    /// To order `n-1`: one per position for nonholonomic jets, otherwise the
    /// canonical one.
    pub projections: Vec<Matrix>,
    /// `E → carrier` (`k`-linear only).
    pub prolongation: Matrix,
}

/// Dimensions and exactness of a jet tower up to order `n`.
#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub flavor: Flavor,
    pub dims: Vec<usize>,
    pub sequences: Vec<SesReport>,
}

/// The towers needed for one or all flavours over `E` up to order `n`.
pub struct JetTowers {
    pub nh: Option<Nonholonomic>,
    pub sh: Option<Semiholonomic>,
    pub hol: Option<Holonomic>,
    pub sym: Option<SymmetricForms>,
    order: usize,
}

impl JetTowers {
    /// Every flavour, with the symmetric forms needed for the exact
    /// sequences.
    pub fn new(ext: &ExteriorAlgebra, e: &Module, n: usize) -> Result<JetTowers> {
        let calc = ext.calculus();
        let nh = Nonholonomic::new(calc, e, n)?;
        let sh = Semiholonomic::new(calc, &nh)?;
        let hol = Holonomic::new(ext, e, n)?;
        let sym = SymmetricForms::new(ext, e, n)?;
        Ok(JetTowers {
            nh: Some(nh),
            sh: Some(sh),
            hol: Some(hol),
            sym: Some(sym),
            order: n,
        })
    }

    /// Only what `flavor` needs (no embeddings for the holonomic flavours).
    pub fn for_flavor(ext: &ExteriorAlgebra, e: &Module, n: usize, flavor: Flavor) -> Result<JetTowers> {
        let calc = ext.calculus();
        let mut t = JetTowers {
            nh: None,
            sh: None,
            hol: None,
            sym: None,
            order: n,
        };
        match flavor {
            Flavor::Nonholonomic => t.nh = Some(Nonholonomic::new(calc, e, n)?),
            Flavor::Semiholonomic => {
                let nh = Nonholonomic::new(calc, e, n)?;
                t.sh = Some(Semiholonomic::new(calc, &nh)?);
                t.nh = Some(nh);
            }
            Flavor::Holonomic | Flavor::Sesquiholonomic => t.hol = Some(Holonomic::new(ext, e, n)?),
        }
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T> {
        x.as_ref()
            .ok_or_else(|| Error::Internal(format!("{what} tower was not computed")))
    }

    pub fn nonholonomic(&self) -> Result<&Nonholonomic> {
        Self::need(&self.nh, "nonholonomic")
    }

    pub fn semiholonomic(&self) -> Result<&Semiholonomic> {
        Self::need(&self.sh, "semiholonomic")
    }

    pub fn holonomic(&self) -> Result<&Holonomic> {
        Self::need(&self.hol, "holonomic")
    }

    pub fn symmetric(&self) -> Result<&SymmetricForms> {
        Self::need(&self.sym, "symmetric form")
    }

    pub fn dim(&self, flavor: Flavor, k: usize) -> Result<usize> {
        Ok(match flavor {
            Flavor::Nonholonomic => self.nonholonomic()?.dim(k),
            Flavor::Semiholonomic => self.semiholonomic()?.dim(k),
            Flavor::Holonomic => self.holonomic()?.dim(k),
            Flavor::Sesquiholonomic if k < 2 => self.holonomic()?.dim(k),
            Flavor::Sesquiholonomic => self.holonomic()?.sesqui(k).dim(),
        })
    }

    pub fn space(&self, flavor: Flavor, k: usize) -> Result<JetSpace> {
        if k > self.order() {
            return Err(Error::Dimension(format!("order {k} exceeds {}", self.order())));
        }
        let sp = match flavor {
            Flavor::Nonholonomic => {
                let nh = self.nonholonomic()?;
                JetSpace {
                    flavor,
                    order: k,
                    carrier: nh.module(k).clone(),
                    embed: Some(Matrix::identity(nh.dim(k))),
                    projections: (1..=k).map(|m| nh.projection(k, m)).collect::<Result<_>>()?,
                    prolongation: nh.prolongation(k)?,
                }
            }
            Flavor::Semiholonomic => {
                let (nh, sh) = (self.nonholonomic()?, self.semiholonomic()?);
                let s = sh.space(k);
                JetSpace {
                    flavor,
                    order: k,
                    carrier: nh.module(k).restrict(s)?,
                    embed: Some(s.inclusion()),
                    projections: if k == 0 { vec![] } else { vec![sh.projection(nh, k)?] },
                    prolongation: sh.prolongation(nh, k)?,
                }
            }
            Flavor::Holonomic => {
                let hol = self.holonomic()?;
                let embed = match &self.nh {
                    Some(nh) => Some(hol.embedding(nh)?.swap_remove(k)),
                    None => None,
                };
                JetSpace {
                    flavor,
                    order: k,
                    carrier: hol.module(k).clone(),
                    embed,
                    projections: if k == 0 { vec![] } else { vec![hol.projection(k)] },
                    prolongation: hol.prolongation(k).clone(),
                }
            }
            Flavor::Sesquiholonomic => {
                if k < 2 {
                    return self.space(Flavor::Holonomic, k).map(|mut s| {
                        s.flavor = flavor;
                        s
                    });
                }
                let hol = self.holonomic()?;
                let s = hol.sesqui(k);
                let below = hol.below(k);
                let embed = match &self.nh {
                    Some(nh) => {
                        let prev = hol.embedding(nh)?.swap_remove(k - 1);
                        Some(below.functor(nh.jet(k - 1), &prev)?.mul(&s.inclusion()))
                    }
                    None => None,
                };
                let j = below.prolong().mul(hol.prolongation(k - 1));
                JetSpace {
                    flavor,
                    order: k,
                    carrier: below.module().restrict(s)?,
                    embed,
                    projections: vec![hol.sesqui_projection(k)],
                    prolongation: semiholonomic::coords_of(s, &j, "j^k does not land in J^{k}")?,
                }
            }
        };
        Ok(sp)
    }

    /// Dimensions and the defining exact sequences at every order `1..=n`.
    pub fn report(&self, calc: &crate::calculus::Calculus, flavor: Flavor) -> Result<TowerReport> {
        let n = self.order();
        let dims = (0..=n).map(|k| self.dim(flavor, k)).collect::<Result<Vec<_>>>()?;
        let mut sequences = Vec::new();
        for k in 1..=n {
            sequences.push(match flavor {
                Flavor::Nonholonomic => nonholonomic_ses(self.nonholonomic()?, k),
                Flavor::Semiholonomic => self.semiholonomic()?.ses(calc, self.nonholonomic()?, k)?,
                Flavor::Holonomic => self.holonomic()?.exactness(self.symmetric()?, k)?,
                Flavor::Sesquiholonomic => self.holonomic()?.sesqui_exactness(self.symmetric()?, k)?,
            });
        }
        Ok(TowerReport {
            flavor,
            dims,
            sequences,
        })
    }
}

/// `0 → Ω¹(J^(k-1)) → J^(k) → J^(k-1) → 0` (top position).
pub fn nonholonomic_ses(nh: &Nonholonomic, k: usize) -> SesReport {
    let j = nh.jet(k - 1);
    let iota = j.inclusion();
    let pi = j.projection();
    SesReport {
        order: k,
        left_exact: iota.is_injective(),
        mid_exact: pi.mul(&iota).is_zero() && iota.image() == pi.kernel(),
        right_exact: pi.rank() == nh.dim(k - 1),
        cokernel: nh.dim(k - 1) - pi.rank(),
    }
}

/// `J¹(ι¹_X): J¹(Ω¹(X)) → J^(2)X`, the map whose injectivity fails for
/// non-flat calculi.
pub fn iota_211(calc: &crate::calculus::Calculus, x: &Module) -> Result<Matrix> {
    let jx = calc.jet1(x)?;
    let jo = calc.jet1(jx.omega_module())?;
    let jj = calc.jet1(jx.module())?;
    jo.functor(&jj, &jx.inclusion())
}

/// `ι_{T^k}` for each `k ≤ n`.
pub fn tensor_inclusions(calc: &crate::calculus::Calculus, nh: &Nonholonomic) -> Result<Vec<Matrix>> {
    let tower = Tower::new(calc, nh.base(), nh.order())?;
    (0..=nh.order()).map(|k| semiholonomic::iota_t(nh, &tower, k)).collect()
}

/// `S²E + A·j²(E)` inside `J^(2)E`.
pub fn two_jet_presentation(towers: &JetTowers, ext: &ExteriorAlgebra) -> Result<Subspace> {
    let calc = ext.calculus();
    let nh = towers.nonholonomic()?;
    let incs = tensor_inclusions(calc, nh)?;
    let s2 = incs[2].mul(towers.symmetric()?.iota_t(2)).image();
    let j2 = nh.prolongation(2)?;
    let aj2 = nh.module(2).left_span(calc.algebra(), &j2.col_vecs());
    s2.sum(&aj2)
}

#[cfg(test)]
mod tests;
