//! The first jet functor `J¹X = J¹A ⊗_A X`, presented as
//! `(A ⊗ X) / Ñ(X)` where `Ñ(X) = span{ Σ n' ⊗ n''x : n ∈ N_d, x ∈ X }`.
//!
//! Inside it, `Ω¹(X) = Ω¹ ⊗_A X` is the image of `ker(μ: A ⊗ X → X)`;
//! this uses that the universal sequence `0 → Ω¹_u → A⊗A → A → 0` splits
//! as right modules, so tensoring it with `X` stays exact.

use num_traits::{One, Zero};

use crate::algebra::{Algebra, Module};
use crate::error::{Error, Result};
use crate::linalg::{axpy, unit_vec, zero_vec, Matrix, Quotient, Subspace, Q};

/// Upper bound on the dimension of any carrier (override with `NCJET_MAX_DIM`).
pub fn max_dim() -> usize {
    std::env::var("NCJET_MAX_DIM")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(4096)
}

pub(crate) fn check_size(dim: usize) -> Result<()> {
    let limit = max_dim();
    if dim > limit {
        return Err(Error::TooLarge { dim, limit });
    }
    Ok(())
}

/// `J¹X` together with the sub-bimodule `Ω¹(X)`.
#[derive(Clone, Debug)]
pub struct Jet1 {
    adim: usize,
    unit: Vec<Q>,
    base: Module,
    quot: Quotient,
    module: Module,
    omega: Subspace,
    omega_module: Module,
}

impl Jet1 {
    /// `nd` is the subspace `N_d ⊂ A ⊗ A` (index `a * dim A + b`).
    pub fn new(alg: &Algebra, nd: &Subspace, base: &Module) -> Result<Jet1> {
        let (n, xd) = (alg.dim(), base.dim());
        check_size(n * xd)?;
        let mut rels = Subspace::zero(n * xd);
        let xs: Vec<Vec<Vec<Q>>> = (0..n)
            .map(|b| (0..xd).map(|x| base.left()[b].col(x)).collect())
            .collect();
        for nv in nd.basis() {
            for x in 0..xd {
                let mut v = zero_vec(n * xd);
                for a in 0..n {
                    for b in 0..n {
                        let c = &nv[a * n + b];
                        if !c.is_zero() {
                            axpy(&mut v[a * xd..(a + 1) * xd], c, &xs[b][x]);
                        }
                    }
                }
                rels.insert(&v);
            }
        }
        let plain = Module::regular(alg).plain_tensor(base);
        let (module, quot) = plain.quotient(&rels)?;

        // ker μ is spanned by e_a ⊗ x - 1 ⊗ e_a x
        let mut omega = Subspace::zero(quot.dim());
        for a in 0..n {
            for x in 0..xd {
                let mut v = zero_vec(n * xd);
                v[a * xd + x] += Q::one();
                let ax = &xs[a][x];
                for (u, cu) in alg.unit().iter().enumerate() {
                    if !cu.is_zero() {
                        axpy(&mut v[u * xd..(u + 1) * xd], &-cu.clone(), ax);
                    }
                }
                omega.insert(&quot.project(&v));
            }
        }
        let omega_module = module.restrict(&omega)?;
        Ok(Jet1 {
            adim: n,
            unit: alg.unit().to_vec(),
            base: base.clone(),
            quot,
            module,
            omega,
            omega_module,
        })
    }

    pub fn base(&self) -> &Module {
        &self.base
    }

    /// `J¹X` as a module (bimodule when `X` is one).
    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.quot.dim()
    }

    /// `Ω¹(X)` inside `J¹X` coordinates.
    pub fn omega(&self) -> &Subspace {
        &self.omega
    }

    /// `Ω¹(X)` in its own (echelon) coordinates.
    pub fn omega_module(&self) -> &Module {
        &self.omega_module
    }

    pub fn omega_dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quot
    }

    /// Dimension of the representative space `A ⊗ X`.
    pub fn rep_dim(&self) -> usize {
        self.adim * self.base.dim()
    }

    /// `a ⊗ x` in the representative space.
    pub fn rep(&self, a: &[Q], x: &[Q]) -> Vec<Q> {
        let xd = self.base.dim();
        let mut v = zero_vec(self.rep_dim());
        for (i, c) in a.iter().enumerate() {
            axpy(&mut v[i * xd..(i + 1) * xd], c, x);
        }
        v
    }

    /// Class of a representative.
    pub fn class(&self, v: &[Q]) -> Vec<Q> {
        self.quot.project(v)
    }

    /// `[a ⊗ x]`
    pub fn elem(&self, a: &[Q], x: &[Q]) -> Vec<Q> {
        self.class(&self.rep(a, x))
    }

    /// `[e_a ⊗ e_x]`
    pub fn basic(&self, a: usize, x: usize) -> Vec<Q> {
        let mut v = zero_vec(self.rep_dim());
        v[a * self.base.dim() + x] = Q::one();
        self.class(&v)
    }

    /// Representative of a class (the stored section).
    pub fn lift(&self, xi: &[Q]) -> Vec<Q> {
        self.quot.section(xi)
    }

    /// Prolongation `j¹: X → J¹X`, `x ↦ [1 ⊗ x]`.
    pub fn prolong(&self) -> Matrix {
        let xd = self.base.dim();
        let cols: Vec<Vec<Q>> = (0..xd)
            .map(|x| self.elem(&self.unit, &unit_vec(xd, x)))
            .collect();
        Matrix::from_cols(&cols, self.dim())
    }

    /// `π^{1,0}: J¹X → X`, `[a ⊗ x] ↦ ax`.
    pub fn projection(&self) -> Matrix {
        let xd = self.base.dim();
        let mut mu = Matrix::zeros(xd, self.rep_dim());
        for a in 0..self.adim {
            let l = &self.base.left()[a];
            for x in 0..xd {
                for r in 0..xd {
                    let v = l.get(r, x);
                    if !v.is_zero() {
                        mu.set(r, a * xd + x, v.clone());
                    }
                }
            }
        }
        self.quot.descend(&mu).expect("multiplication vanishes on Ñ(X)")
    }

    /// `ι¹: Ω¹(X) → J¹X`.
    pub fn inclusion(&self) -> Matrix {
        self.omega.inclusion()
    }

    /// Coordinates in `Ω¹(X)` of an element of `J¹X` lying in it.
    pub fn omega_coords(&self, xi: &[Q]) -> Result<Vec<Q>> {
        self.omega
            .coords(xi)
            .ok_or_else(|| Error::Internal("element is not in Ω¹(X)".into()))
    }

    /// `ρ = id - j¹π: J¹X → Ω¹(X)`.
    pub fn rho(&self) -> Matrix {
        let p = self.prolong().mul(&self.projection());
        let r = Matrix::identity(self.dim()).sub(&p);
        self.omega.coords_matrix().mul(&r)
    }

    /// `J¹(f): J¹X → J¹Y` for a left `A`-linear `f: X → Y`, where `other`
    /// is `J¹Y`.
    pub fn functor(&self, other: &Jet1, f: &Matrix) -> Result<Matrix> {
        if f.cols() != self.base.dim() || f.rows() != other.base.dim() {
            return Err(Error::Dimension("J¹(f): map shape does not match the bases".into()));
        }
        let lifted = Matrix::identity(self.adim).kron(f);
        let on_reps = other.quot.projection_of(&lifted);
        self.quot.descend(&on_reps)
    }

    /// `Ω¹(f): Ω¹(X) → Ω¹(Y)`.
    pub fn omega_functor(&self, other: &Jet1, f: &Matrix) -> Result<Matrix> {
        let j = self.functor(other, f)?;
        let img = j.mul(&self.inclusion());
        let cols = img
            .col_vecs()
            .iter()
            .map(|c| other.omega_coords(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_cols(&cols, other.omega_dim()))
    }

    /// `[α ⊗ x]` for a class `α ∈ J¹A` (given in `j1a` coordinates) and
    /// `x ∈ X`. When `α ∈ Ω¹` the result lies in `Ω¹(X)`.
    pub fn tensor(&self, j1a: &Jet1, alpha: &[Q], x: &[Q]) -> Vec<Q> {
        let n = self.adim;
        let rep = j1a.lift(alpha);
        let xd = self.base.dim();
        let mut v = zero_vec(self.rep_dim());
        for a in 0..n {
            for b in 0..n {
                let c = &rep[a * n + b];
                if !c.is_zero() {
                    let bx = self.base.left()[b].apply(x);
                    axpy(&mut v[a * xd..(a + 1) * xd], c, &bx);
                }
            }
        }
        self.class(&v)
    }

    /// `ω ⊗ x ∈ Ω¹(X)` for `ω ∈ Ω¹` in `j1a`'s `Ω¹` coordinates.
    pub fn omega_tensor(&self, j1a: &Jet1, omega: &[Q], x: &[Q]) -> Vec<Q> {
        let alpha = j1a.omega.combine(omega);
        let t = self.tensor(j1a, &alpha, x);
        self.omega_coords(&t).expect("Ω¹ ⊗ X lands in Ω¹(X)")
    }
}
