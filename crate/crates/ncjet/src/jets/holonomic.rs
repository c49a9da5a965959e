//! Holonomic jets `J^n E ⊂ J¹(J^{n-1}E)` (the inductive kernel of
//! `D̃ ∘ J¹(l^{n-1})`) and the sesquiholonomic jets cut out by `D̃^I` alone.

use serde::Serialize;

use super::eth::Eth;
use super::nonholonomic::Nonholonomic;
use super::semiholonomic::{coords_of, SesReport, Semiholonomic};
use crate::algebra::Module;
use crate::error::{Error, Result};
use crate::exterior::{ExteriorAlgebra, SymmetricForms};
use crate::jets::Jet1;
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Debug)]
struct Level {
    module: Module,
    /// `J¹` over `J^{k-1}E`
    below: Option<Jet1>,
    /// `J^k ⊂ J¹(J^{k-1})` (everything for `k ≤ 1`)
    space: Subspace,
    sesqui: Subspace,
    prolong: Matrix,
}

/// `E, J¹E, J²E, …, J^nE`.
#[derive(Clone, Debug)]
pub struct Holonomic {
    levels: Vec<Level>,
}

impl Holonomic {
    pub fn new(ext: &ExteriorAlgebra, e: &Module, n: usize) -> Result<Holonomic> {
        if n >= 2 && ext.max_grade() < 2 {
            return Err(Error::Dimension("holonomic jets of order ≥ 2 need Ω²".into()));
        }
        let calc = ext.calculus();
        let mut levels = vec![Level {
            module: e.clone(),
            below: None,
            space: Subspace::full(e.dim()),
            sesqui: Subspace::full(e.dim()),
            prolong: Matrix::identity(e.dim()),
        }];
        if n >= 1 {
            let j1 = calc.jet1(e)?;
            levels.push(Level {
                module: j1.module().clone(),
                space: Subspace::full(j1.dim()),
                sesqui: Subspace::full(j1.dim()),
                prolong: j1.prolong(),
                below: Some(j1),
            });
        }
        for k in 2..=n {
            let x = &levels[k - 2].module;
            let jx = levels[k - 1].below.clone().expect("level ≥ 1 has a first jet");
            let jjx = calc.jet1(jx.module())?;
            let forms_x = ext.forms_over(x, 2)?;
            let eth = Eth::new(ext, &jx, &jjx, &forms_x)?;
            let below = calc.jet1(&levels[k - 1].module)?;
            let jl = below.functor(&jjx, &levels[k - 1].space.inclusion())?;
            let space = eth.matrix().mul(&jl).kernel();
            let sesqui = eth.first.mul(&jl).kernel();
            let module = below.module().restrict(&space)?;
            let j = below.prolong().mul(&levels[k - 1].prolong);
            let prolong = coords_of(&space, &j, "j¹ ∘ j^{n-1} does not land in J^n")?;
            levels.push(Level {
                module,
                below: Some(below),
                space,
                sesqui,
                prolong,
            });
        }
        Ok(Holonomic { levels })
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    /// `J^kE`
    pub fn module(&self, k: usize) -> &Module {
        &self.levels[k].module
    }

    pub fn dim(&self, k: usize) -> usize {
        self.levels[k].module.dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.module.dim()).collect()
    }

    /// `J¹` over `J^{k-1}E`, for `k ≥ 1`.
    pub fn below(&self, k: usize) -> &Jet1 {
        self.levels[k].below.as_ref().expect("k ≥ 1")
    }

    /// `J^kE ⊂ J¹(J^{k-1}E)`
    pub fn space(&self, k: usize) -> &Subspace {
        &self.levels[k].space
    }

    /// `l^k: J^k → J¹(J^{k-1})`
    pub fn l(&self, k: usize) -> Matrix {
        self.levels[k].space.inclusion()
    }

    /// Sesquiholonomic `J^{k}E ⊂ J¹(J^{k-1}E)`.
    pub fn sesqui(&self, k: usize) -> &Subspace {
        &self.levels[k].sesqui
    }

    /// `j^k: E → J^kE`
    pub fn prolongation(&self, k: usize) -> &Matrix {
        &self.levels[k].prolong
    }

    /// `π^{k,k-1} = π^{1,0} ∘ l^k`
    pub fn projection(&self, k: usize) -> Matrix {
        self.below(k).projection().mul(&self.l(k))
    }

    /// `π^{k,m}`
    pub fn projection_to(&self, k: usize, m: usize) -> Matrix {
        let mut p = Matrix::identity(self.dim(k));
        for i in (m + 1..=k).rev() {
            p = self.projection(i).mul(&p);
        }
        p
    }

    pub fn sesqui_projection(&self, k: usize) -> Matrix {
        self.below(k).projection().mul(&self.sesqui(k).inclusion())
    }

    /// `ι_{J^k}: J^kE → J^(k)E`, `ι_{J^k} = J¹(ι_{J^{k-1}}) ∘ l^k`.
    pub fn embedding(&self, nh: &Nonholonomic) -> Result<Vec<Matrix>> {
        if nh.order() < self.order() {
            return Err(Error::Dimension("nonholonomic tower too short".into()));
        }
        let mut out = vec![Matrix::identity(self.dim(0))];
        for k in 1..=self.order() {
            let up = self.below(k).functor(nh.jet(k - 1), &out[k - 1])?;
            out.push(up.mul(&self.l(k)));
        }
        Ok(out)
    }

    /// `h^k: J^kE → J^[k]E`
    pub fn to_semiholonomic(&self, nh: &Nonholonomic, sh: &Semiholonomic) -> Result<Vec<Matrix>> {
        self.embedding(nh)?
            .iter()
            .enumerate()
            .map(|(k, i)| coords_of(sh.space(k), i, "J^k is not inside J^[k]"))
            .collect()
    }

    /// `ι^k_d: S^k(E) → J^kE`, `ι^k_d = ι¹ ∘ Ω¹(ι^{k-1}_d) ∘ ι^k_∧`.
    pub fn iota_d(&self, sym: &SymmetricForms) -> Result<Vec<Matrix>> {
        let top = self.order().min(sym.top());
        let mut out = vec![Matrix::identity(self.dim(0))];
        if top >= 1 {
            out.push(self.below(1).inclusion());
        }
        for k in 2..=top {
            let om = sym.forms(k - 1).tower().jet(0).omega_functor(self.below(k), &out[k - 1])?;
            let v = self.below(k).inclusion().mul(&om).mul(sym.iota_wedge(k));
            out.push(coords_of(self.space(k), &v, "S^k does not land in J^k")?);
        }
        Ok(out)
    }

    /// `0 → S^k → J^k → J^{k-1} → 0`
    pub fn exactness(&self, sym: &SymmetricForms, k: usize) -> Result<SesReport> {
        let iota = self.iota_d(sym)?.into_iter().nth(k).ok_or_else(|| {
            Error::Dimension(format!("order {k} beyond the computed jets or symmetric forms"))
        })?;
        Ok(ses_from(k, &iota, &self.projection(k), self.dim(k - 1)))
    }

    /// `0 → Ω¹(S^{k-1}) → J^{k} → J^{k-1} → 0`
    pub fn sesqui_exactness(&self, sym: &SymmetricForms, k: usize) -> Result<SesReport> {
        let iotas = self.iota_d(sym)?;
        if k < 1 || k > iotas.len() || k > self.order() {
            return Err(Error::Dimension(format!("sesquiholonomic order {k} out of range")));
        }
        let om = sym.forms(k - 1).tower().jet(0).omega_functor(self.below(k), &iotas[k - 1])?;
        let v = self.below(k).inclusion().mul(&om);
        let iota = coords_of(self.sesqui(k), &v, "Ω¹(S^{k-1}) does not land in J^{k}")?;
        Ok(ses_from(k, &iota, &self.sesqui_projection(k), self.dim(k - 1)))
    }
}

fn ses_from(k: usize, iota: &Matrix, pi: &Matrix, below: usize) -> SesReport {
    let composite_zero = pi.mul(iota).is_zero();
    SesReport {
        order: k,
        left_exact: iota.is_injective(),
        mid_exact: composite_zero && iota.image() == pi.kernel(),
        right_exact: pi.rank() == below,
        cokernel: below - pi.rank(),
    }
}

/// `l^{m,n}: J^{m+n}E → J^m(J^nE)`; `over` is the holonomic tower of `J^nE`.
pub fn l_mn(hol: &Holonomic, over: &Holonomic, m: usize, n: usize) -> Result<Matrix> {
    if hol.order() < m + n || over.order() < m {
        return Err(Error::Dimension("l^{m,n}: towers too short".into()));
    }
    if over.dim(0) != hol.dim(n) {
        return Err(Error::Dimension("l^{m,n}: second tower is not over J^n".into()));
    }
    if m == 0 {
        return Ok(Matrix::identity(hol.dim(n)));
    }
    let prev = l_mn(hol, over, m - 1, n)?;
    let up = hol.below(m + n).functor(over.below(m), &prev)?;
    coords_of(over.space(m), &up.mul(&hol.l(m + n)), "l^{m,n} leaves J^m(J^n)")
}

/// `J^m(f)` for a left-linear `f` between the bases of two holonomic towers.
pub fn hol_map(src: &Holonomic, tgt: &Holonomic, f: &Matrix, m: usize) -> Result<Matrix> {
    if src.order() < m || tgt.order() < m {
        return Err(Error::Dimension("J^m(f): towers too short".into()));
    }
    let mut g = f.clone();
    for k in 1..=m {
        let up = src.below(k).functor(tgt.below(k), &g)?;
        g = coords_of(tgt.space(k), &up.mul(&src.l(k)), "J^k(f) leaves J^k")?;
    }
    Ok(g)
}

/// The explicit obstruction `∂²_A(ξ) = [Σ dx² ∧ dx¹ ⊗ dx⁰]` on `S²` for
/// `ξ = Σ dx² ⊗ dx¹ x⁰`, with values in `H^{1,2}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Obstruction {
    /// Rank of `∂²_A` (dimension of its image in `H^{1,2}`).
    pub rank: usize,
    /// Every value lies in `ker δ^{1,2}`.
    pub in_kernel: bool,
    /// Representations of zero have zero class.
    pub independent: bool,
}

pub fn d2_obstruction(ext: &ExteriorAlgebra, sym: &SymmetricForms) -> Result<Obstruction> {
    if sym.top() < 2 || ext.max_grade() < 2 {
        return Err(Error::Dimension("∂² needs S² and Ω²".into()));
    }
    let calc = ext.calculus();
    let alg = calc.algebra();
    let n = alg.dim();
    if sym.dim(0) != n {
        return Err(Error::Dimension("∂²_A is defined on symmetric forms of A".into()));
    }
    let j1a = calc.j1a();
    let ta = sym.forms(0).tower();
    let t1 = sym.forms(1).tower();
    let da: Vec<_> = (0..n).map(|a| calc.da(&alg.basis(a))).collect();
    let mut phi = Matrix::zeros(ta.dim(2), n * n * n);
    let mut psi = Matrix::zeros(sym.forms(1).dim(2), n * n * n);
    for a in 0..n {
        for b in 0..n {
            let ab = ta.jet(1).omega_tensor(j1a, &da[a], &da[b]);
            for c in 0..n {
                let col = (a * n + b) * n + c;
                phi.set_col(col, &ta.module(2).act_right(&ab, &alg.basis(c)));
                let bc = t1.jet(0).omega_tensor(j1a, &da[b], &da[c]);
                let abc = t1.jet(1).omega_tensor(j1a, &da[a], &bc);
                psi.set_col(col, &sym.forms(1).project(2, &abc));
            }
        }
    }
    let reps = phi.preimage(sym.space(2))?;
    let values = reps.map(&psi);
    let im = sym.delta(2, 1)?.image();
    let out = sym.delta(1, 2)?;
    let in_kernel = values.basis().iter().all(|v| out.apply(v).iter().all(num_traits::Zero::is_zero));
    let zeros = phi.kernel().map(&psi);
    let independent = zeros.is_subspace_of(&im);
    let rank = values.sum(&im)?.dim() - im.dim();
    Ok(Obstruction {
        rank,
        in_kernel,
        independent,
    })
}
