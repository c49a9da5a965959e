//! Semiholonomic jets `J^[n]E ⊂ J^(n)E`.

use serde::Serialize;

use super::nonholonomic::{nh_map, Nonholonomic};
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::exterior::Tower;
use crate::linalg::{Matrix, Subspace};

/// `⋂_m ker(π^{(k,k-1;m)} − π^{(k,k-1;k)})`.
pub fn equalizer(nh: &Nonholonomic, k: usize) -> Result<Subspace> {
    let mut sp = Subspace::full(nh.dim(k));
    if k < 2 {
        return Ok(sp);
    }
    let top = nh.projection(k, k)?;
    for m in 1..k {
        let ker = nh.projection(k, m)?.sub(&top).kernel();
        sp = sp.intersect(&ker)?;
    }
    Ok(sp)
}

/// `D̃^I` of `J^(m-1)E`: `J^(m+1)E → Ω¹(J^(m-1)E)`, as the difference of
/// the two projections `J¹(π^{1,0}) − π^{1,0}_{J¹}`.
pub fn dhi(nh: &Nonholonomic, m: usize) -> Result<Matrix> {
    let inner = nh.jet(m - 1);
    let diff = nh.projection(m + 1, m)?.sub(&nh.projection(m + 1, m + 1)?);
    let cols = diff
        .col_vecs()
        .iter()
        .map(|c| inner.omega_coords(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_cols(&cols, inner.omega_dim()))
}

/// `⋂_{m=1}^{k-1} ker J^{(k-m-1)}(D̃^I_{J^(m-1)})`, each functor applied to
/// the map into `Ω¹(J^(m-1)E)` itself.
pub fn dhi_kernels(calc: &Calculus, nh: &Nonholonomic, k: usize) -> Result<Subspace> {
    let mut sp = Subspace::full(nh.dim(k));
    for m in 1..k {
        let f = dhi(nh, m)?;
        let om = nh.jet(m - 1).omega_module();
        let tgt = Nonholonomic::new(calc, om, k - m - 1)?;
        let g = nh_map(nh, m + 1, &tgt, 0, &f, k - m - 1)?;
        sp = sp.intersect(&g.kernel())?;
    }
    Ok(sp)
}

/// The semiholonomic tower up to the order of `nh`.
#[derive(Clone, Debug)]
pub struct Semiholonomic {
    spaces: Vec<Subspace>,
}

impl Semiholonomic {
    /// Computes both characterisations and fails if they disagree.
    pub fn new(calc: &Calculus, nh: &Nonholonomic) -> Result<Semiholonomic> {
        let mut spaces = Vec::new();
        for k in 0..=nh.order() {
            let eq = equalizer(nh, k)?;
            let dk = dhi_kernels(calc, nh, k)?;
            if eq != dk {
                return Err(Error::Internal(format!(
                    "semiholonomic {k}-jets: equalizer (dim {}) and D̃^I kernels (dim {}) differ",
                    eq.dim(),
                    dk.dim()
                )));
            }
            spaces.push(eq);
        }
        Ok(Semiholonomic { spaces })
    }

    pub fn order(&self) -> usize {
        self.spaces.len() - 1
    }

    /// `J^[k]E` inside `J^(k)E`.
    pub fn space(&self, k: usize) -> &Subspace {
        &self.spaces[k]
    }

    pub fn dim(&self, k: usize) -> usize {
        self.spaces[k].dim()
    }

    /// `j^{[k]}: E → J^[k]E` in echelon coordinates.
    pub fn prolongation(&self, nh: &Nonholonomic, k: usize) -> Result<Matrix> {
        coords_of(&self.spaces[k], &nh.prolongation(k)?, "j^(k) does not land in J^[k]")
    }

    /// `π^{[k,k-1]}: J^[k]E → J^[k-1]E`.
    pub fn projection(&self, nh: &Nonholonomic, k: usize) -> Result<Matrix> {
        let p = nh.top_projection(k)?.mul(&self.spaces[k].inclusion());
        coords_of(&self.spaces[k - 1], &p, "projection leaves J^[k-1]")
    }

    /// Exactness of `0 → T^k(E) → J^[k]E → J^[k-1]E → 0`.
    pub fn ses(&self, calc: &Calculus, nh: &Nonholonomic, k: usize) -> Result<SesReport> {
        let tower = Tower::new(calc, nh.base(), k)?;
        let iota = iota_t(nh, &tower, k)?;
        let sp = &self.spaces[k];
        let inside = iota.col_vecs().iter().all(|c| sp.contains(c));
        let left_exact = iota.is_injective();
        let pi = nh.top_projection(k)?.mul(&sp.inclusion());
        let ker = pi.kernel().map(&sp.inclusion());
        let mid_exact = inside && ker == iota.image();
        let right_exact = pi.image() == self.spaces[k - 1];
        Ok(SesReport {
            order: k,
            left_exact,
            mid_exact,
            right_exact,
            cokernel: self.spaces[k - 1].dim() - pi.rank(),
        })
    }
}

/// `ι_{T^k}: T^k(E) → J^(k)E`, `ι_{T^k} = ι¹_{J^(k-1)} ∘ Ω¹(ι_{T^{k-1}})`.
pub fn iota_t(nh: &Nonholonomic, tower: &Tower, k: usize) -> Result<Matrix> {
    let mut i = Matrix::identity(nh.dim(0));
    for lvl in 0..k {
        let om = tower.jet(lvl).omega_functor(nh.jet(lvl), &i)?;
        i = nh.jet(lvl).inclusion().mul(&om);
    }
    Ok(i)
}

pub(crate) fn coords_of(sp: &Subspace, m: &Matrix, what: &str) -> Result<Matrix> {
    let cols = m
        .col_vecs()
        .iter()
        .map(|c| sp.coords(c).ok_or_else(|| Error::Internal(what.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_cols(&cols, sp.dim()))
}

/// Exactness of a jet sequence `0 → K → J^k → J^{k-1} → 0`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SesReport {
    pub order: usize,
    pub left_exact: bool,
    pub mid_exact: bool,
    pub right_exact: bool,
    pub cokernel: usize,
}

impl SesReport {
    pub fn exact(&self) -> bool {
        self.left_exact && self.mid_exact && self.right_exact
    }
}
