//! The operator `D̃ = (D̃^I, D̃^II): J^(2)X → (Ω¹ ⋉ Ω²)(X)` whose kernel
//! cuts the holonomic 2-jets out of the nonholonomic ones.

use serde::Serialize;

use crate::algebra::{is_module_map, Module};
use crate::error::{Error, Result};
use crate::exterior::{orbit_map, t_map, ExteriorAlgebra, Forms};
use crate::jets::Jet1;
use crate::linalg::{unit_vec, vec_sub, Matrix};

/// `Ω¹(X) ⊕ Ω²(X)` with the twisted left action
/// `f ⋆ (α + ω) = fα + df∧α + fω` and the componentwise right action.
pub fn semidirect(ext: &ExteriorAlgebra, forms_x: &Forms) -> Result<Module> {
    if forms_x.max_grade() < 2 {
        return Err(Error::Dimension("Ω¹ ⋉ Ω² needs forms up to grade 2".into()));
    }
    let calc = ext.calculus();
    let alg = calc.algebra();
    let tx = forms_x.tower();
    let (d1, d2) = (forms_x.dim(1), forms_x.dim(2));
    let g1 = forms_x.grade(1);
    let g2 = forms_x.grade(2);
    let block = |l1: &Matrix, w: Option<&Matrix>, l2: &Matrix| {
        let mut m = Matrix::zeros(d1 + d2, d1 + d2);
        for r in 0..d1 {
            for c in 0..d1 {
                m.set(r, c, l1.get(r, c).clone());
            }
        }
        for r in 0..d2 {
            for c in 0..d2 {
                m.set(d1 + r, d1 + c, l2.get(r, c).clone());
            }
            if let Some(w) = w {
                for c in 0..d1 {
                    m.set(d1 + r, c, w.get(r, c).clone());
                }
            }
        }
        m
    };
    let mut left = Vec::with_capacity(alg.dim());
    for a in 0..alg.dim() {
        let da = calc.da(&alg.basis(a));
        let cols: Vec<_> = (0..d1)
            .map(|c| forms_x.project(2, &tx.jet(1).omega_tensor(calc.j1a(), &da, &unit_vec(d1, c))))
            .collect();
        let w = Matrix::from_cols(&cols, d2);
        left.push(block(&g1.left()[a], Some(&w), &g2.left()[a]));
    }
    let right = match (g1.right(), g2.right()) {
        (Some(r1), Some(r2)) => Some(r1.iter().zip(r2).map(|(x, y)| block(x, None, y)).collect()),
        _ => None,
    };
    Module::new(d1 + d2, left, right)
}

/// `D̃_X` together with the data it was checked against.
#[derive(Clone, Debug)]
pub struct Eth {
    /// `D̃^I: J^(2)X → Ω¹(X)`
    pub first: Matrix,
    /// `D̃^II: J^(2)X → Ω²(X)`
    pub second: Matrix,
    /// `(Ω¹ ⋉ Ω²)(X)`
    pub target: Module,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EthReport {
    pub twisted_linear: bool,
    pub kills_prolongation: bool,
    pub first_is_projection_difference: bool,
    pub first_on_forms_is_projection: bool,
}

impl EthReport {
    pub fn ok(&self) -> bool {
        self.twisted_linear && self.kills_prolongation && self.first_is_projection_difference && self.first_on_forms_is_projection
    }
}

impl Eth {
    /// `jx` is `J¹X`, `jjx` is `J¹(J¹X)` and `forms_x` holds `Ω^{≤2}(X)`.
    ///
    /// On representatives `e_a ⊗ [e_c ⊗ x]`:
    /// `D̃^I = [e_a ⊗ e_c x] − [e_a e_c ⊗ x]` and `D̃^II = de_a ∧ de_c ⊗ x`.
    pub fn new(ext: &ExteriorAlgebra, jx: &Jet1, jjx: &Jet1, forms_x: &Forms) -> Result<Eth> {
        let calc = ext.calculus();
        let alg = calc.algebra();
        let n = alg.dim();
        let x = jx.base();
        let xd = x.dim();
        if jjx.base().dim() != jx.dim() || forms_x.tower().dim(0) != xd {
            return Err(Error::Dimension("D̃: inconsistent towers".into()));
        }
        let (d1, d2) = (forms_x.dim(1), forms_x.dim(2));
        let tx = forms_x.tower();

        let t2x: Vec<Matrix> = (0..xd)
            .map(|i| t_map(ext.forms().tower(), 0, tx, 0, &orbit_map(x, &unit_vec(xd, i)), 2))
            .collect::<Result<_>>()?;
        let da: Vec<_> = (0..n).map(|a| calc.da(&alg.basis(a))).collect();
        let dadc: Vec<Vec<_>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|c| ext.forms().tower().jet(1).omega_tensor(calc.j1a(), &da[a], &da[c]))
                    .collect()
            })
            .collect();

        // F on A ⊗ A ⊗ X, index (a n + c) xd + x
        let cols_total = n * n * xd;
        let mut f1 = Matrix::zeros(d1, cols_total);
        let mut f2 = Matrix::zeros(d2, cols_total);
        for a in 0..n {
            let ea = alg.basis(a);
            for c in 0..n {
                let eac = alg.mul(&ea, &alg.basis(c));
                for xi in 0..xd {
                    let xv = unit_vec(xd, xi);
                    let cx = x.left()[c].apply(&xv);
                    let v = vec_sub(&jx.elem(&ea, &cx), &jx.elem(&eac, &xv));
                    let col = (a * n + c) * xd + xi;
                    f1.set_col(col, &jx.omega_coords(&v)?);
                    f2.set_col(col, &forms_x.project(2, &t2x[xi].apply(&dadc[a][c])));
                }
            }
        }
        let f = f1.vstack(&f2);
        let id = Matrix::identity(n);
        let rels = jx.quotient().relations().inclusion();
        if !f.mul(&id.kron(&rels)).is_zero() {
            return Err(Error::NotWellDefined("D̃ does not vanish on A ⊗ Ñ(X)".into()));
        }
        let g = f.mul(&id.kron(&jx.quotient().section_matrix()));
        let full = jjx
            .quotient()
            .descend(&g)
            .map_err(|e| Error::NotWellDefined(format!("D̃ does not descend to J^(2)X: {e}")))?;
        let first = full.select_rows(&(0..d1).collect::<Vec<_>>());
        let second = full.select_rows(&(d1..d1 + d2).collect::<Vec<_>>());
        let target = semidirect(ext, forms_x)?;
        Ok(Eth {
            first,
            second,
            target,
        })
    }

    /// `(D̃^I; D̃^II)` as one matrix into `(Ω¹ ⋉ Ω²)(X)`.
    pub fn matrix(&self) -> Matrix {
        self.first.vstack(&self.second)
    }

    pub fn check(&self, ext: &ExteriorAlgebra, jx: &Jet1, jjx: &Jet1) -> Result<EthReport> {
        let alg = ext.calculus().algebra();
        let m = self.matrix();
        let twisted_linear = is_module_map(alg, &m, jjx.module(), &self.target, false);
        let j2 = jjx.prolong().mul(&jx.prolong());
        let kills_prolongation = m.mul(&j2).is_zero();
        // D̃^I = J¹(π^{1,0}) − π^{1,0}_{J¹}, landing in Ω¹(X) ⊂ J¹X
        let diff = jjx.functor(jx, &jx.projection())?.sub(&jjx.projection());
        let cols = diff
            .col_vecs()
            .iter()
            .map(|c| jx.omega_coords(c))
            .collect::<Result<Vec<_>>>();
        let first_is_projection_difference = matches!(cols, Ok(ref c) if Matrix::from_cols(c, jx.omega_dim()) == self.first);
        // on Ω¹(J¹X), D̃^I is Ω¹(π^{1,0})
        let om = jjx.omega_functor(jx, &jx.projection())?;
        let first_on_forms_is_projection = self.first.mul(&jjx.inclusion()) == om;
        Ok(EthReport {
            twisted_linear,
            kills_prolongation,
            first_is_projection_difference,
            first_on_forms_is_projection,
        })
    }
}
