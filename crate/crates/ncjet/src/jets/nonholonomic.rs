//! Nonholonomic jets `J^(n)E = J¹(J¹(… J¹E))`.

use crate::algebra::Module;
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::jets::Jet1;
use crate::linalg::{vec_add, Matrix, Q};

/// `E, J^(1)E, …, J^(n)E`; `jet(k)` is `J¹` over `J^(k)E`.
#[derive(Clone, Debug)]
pub struct Nonholonomic {
    base: Module,
    jets: Vec<Jet1>,
}

impl Nonholonomic {
    pub fn new(calc: &Calculus, e: &Module, n: usize) -> Result<Nonholonomic> {
        let mut t = Nonholonomic {
            base: e.clone(),
            jets: Vec::new(),
        };
        t.extend(calc, n)?;
        Ok(t)
    }

    /// Builds on already computed first jets (`jets[k]` over `J^(k)`).
    pub fn from_jets(base: Module, jets: Vec<Jet1>) -> Nonholonomic {
        Nonholonomic { base, jets }
    }

    pub fn extend(&mut self, calc: &Calculus, n: usize) -> Result<()> {
        while self.jets.len() < n {
            let m = self.module(self.jets.len()).clone();
            self.jets.push(calc.jet1(&m)?);
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.jets.len()
    }

    pub fn base(&self) -> &Module {
        &self.base
    }

    /// `J^(k)E`
    pub fn module(&self, k: usize) -> &Module {
        if k == 0 {
            &self.base
        } else {
            self.jets[k - 1].module()
        }
    }

    pub fn dim(&self, k: usize) -> usize {
        self.module(k).dim()
    }

    /// `J¹` over `J^(k)E`, whose module is `J^(k+1)E`.
    pub fn jet(&self, k: usize) -> &Jet1 {
        &self.jets[k]
    }

    fn check(&self, k: usize) -> Result<()> {
        if k > self.order() {
            return Err(Error::Dimension(format!(
                "order {k} exceeds the computed order {}",
                self.order()
            )));
        }
        Ok(())
    }

    /// `j^{(k-m)}` of `J^(m)E`, i.e. `J^(m)E → J^(k)E`.
    pub fn prolongation_from(&self, m: usize, k: usize) -> Result<Matrix> {
        self.check(k)?;
        let mut p = Matrix::identity(self.dim(m));
        for i in m..k {
            p = self.jets[i].prolong().mul(&p);
        }
        Ok(p)
    }

    /// `j^{(k)}: E → J^(k)E`
    pub fn prolongation(&self, k: usize) -> Result<Matrix> {
        self.prolongation_from(0, k)
    }

    /// `π^{1,0}` of `J^(k-1)E`: `J^(k)E → J^(k-1)E`.
    pub fn top_projection(&self, k: usize) -> Result<Matrix> {
        self.check(k)?;
        if k == 0 {
            return Err(Error::Dimension("no projection below order 0".into()));
        }
        Ok(self.jets[k - 1].projection())
    }

    /// `π^{(k,k-1;m)} = J^{(k-m)}(π^{1,0}_{J^{(m-1)}})`, `1 ≤ m ≤ k`.
    pub fn projection(&self, k: usize, m: usize) -> Result<Matrix> {
        self.check(k)?;
        if m == 0 || m > k {
            return Err(Error::Dimension(format!("projection position {m} outside 1..={k}")));
        }
        let mut g = self.jets[m - 1].projection();
        for i in 0..k - m {
            g = self.jets[m + i].functor(&self.jets[m - 1 + i], &g)?;
        }
        Ok(g)
    }

    /// `π^{(k,m)}`: composite of top projections `J^(k)E → J^(m)E`.
    pub fn projection_to(&self, k: usize, m: usize) -> Result<Matrix> {
        self.check(k)?;
        let mut p = Matrix::identity(self.dim(k));
        for i in (m + 1..=k).rev() {
            p = self.jets[i - 1].projection().mul(&p);
        }
        Ok(p)
    }

    /// `ξ = j^{(n)}(ξ⁰) + Σ_m j^{(n-m)}(ι¹ ρ(π^{(n,m)} ξ))` for `ξ ∈ J^(n)E`.
    pub fn decompose(&self, xi: &[Q]) -> Result<Decomposition> {
        let n = self.order();
        if xi.len() != self.dim(n) {
            return Err(Error::Dimension("decompose: element has the wrong length".into()));
        }
        let base = self.projection_to(n, 0)?.apply(xi);
        let mut parts = Vec::with_capacity(n);
        for m in 1..=n {
            let at_m = self.projection_to(n, m)?.apply(xi);
            parts.push(self.jets[m - 1].rho().apply(&at_m));
        }
        Ok(Decomposition { base, parts })
    }

    pub fn recompose(&self, dec: &Decomposition) -> Result<Vec<Q>> {
        let n = self.order();
        if dec.parts.len() != n {
            return Err(Error::Dimension("recompose: wrong number of components".into()));
        }
        let mut xi = self.prolongation(n)?.apply(&dec.base);
        for m in 1..=n {
            let inc = self.jets[m - 1].inclusion().apply(&dec.parts[m - 1]);
            xi = vec_add(&xi, &self.prolongation_from(m, n)?.apply(&inc));
        }
        Ok(xi)
    }
}

/// Components of a nonholonomic jet: `base ∈ E`, `parts[m-1] ∈ Ω¹(J^(m-1)E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub base: Vec<Q>,
    pub parts: Vec<Vec<Q>>,
}

/// `J^{(k)}(f): J^(so+k) → J^(to+k)` for `f: J^(so)X → J^(to)Y`.
pub fn nh_map(
    src: &Nonholonomic,
    so: usize,
    tgt: &Nonholonomic,
    to: usize,
    f: &Matrix,
    k: usize,
) -> Result<Matrix> {
    if src.order() < so + k || tgt.order() < to + k {
        return Err(Error::Dimension("tower too short for J^(k)(f)".into()));
    }
    let mut g = f.clone();
    for i in 0..k {
        g = src.jets[so + i].functor(&tgt.jets[to + i], &g)?;
    }
    Ok(g)
}
