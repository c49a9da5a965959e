//! Quantum symmetric forms `S^h(E)` and the Spencer δ-complex.

use serde::Serialize;

use super::{orbit_map, t_map, ExteriorAlgebra, Forms};
use crate::algebra::Module;
use crate::error::{Error, Result};
use crate::linalg::{fmt_q, sign, unit_vec, Matrix, Subspace};

/// `S⁰(E) … S^n(E)` with the inclusions `ι^h_∧: S^h → Ω¹(S^{h-1})` and
/// `ι_{S^h}: S^h → T^h(E)`, plus the forms `Ω^•(S^h)` needed for δ.
#[derive(Clone, Debug)]
pub struct SymmetricForms {
    n: usize,
    forms: Vec<Forms>,
    spaces: Vec<Subspace>,
    iota_wedge: Vec<Matrix>,
    iota_t: Vec<Matrix>,
    min2: Option<Subspace>,
    nu: Option<Matrix>,
}

impl SymmetricForms {
    pub fn new(ext: &ExteriorAlgebra, e: &Module, n: usize) -> Result<SymmetricForms> {
        let big = ext.max_grade();
        if n >= 2 && big < 2 {
            return Err(Error::Dimension("S^n for n ≥ 2 needs Ω² (truncation at least 2)".into()));
        }
        let mut s = SymmetricForms {
            n,
            forms: vec![ext.forms_over_deep(e, big, n.max(big))?],
            spaces: vec![Subspace::full(e.dim())],
            iota_wedge: vec![Matrix::identity(e.dim())],
            iota_t: vec![Matrix::identity(e.dim())],
            min2: None,
            nu: None,
        };
        if n == 0 {
            return Ok(s);
        }
        let t1 = s.forms[0].tower().module(1).clone();
        s.spaces.push(Subspace::full(t1.dim()));
        s.iota_wedge.push(Matrix::identity(t1.dim()));
        s.iota_t.push(Matrix::identity(t1.dim()));
        s.forms.push(ext.forms_over(&t1, big)?);
        for h in 2..=n {
            // S^h = ker(∧_{S^{h-2}} ∘ Ω¹(ι^{h-1}_∧)) = ker δ^{h-1,1}
            let ker = s.delta(h - 1, 1)?.kernel();
            let carrier = s.forms[h - 1].tower().module(1).restrict(&ker)?;
            let inc = ker.inclusion();
            let up = s.forms[h - 1]
                .tower()
                .jet(0)
                .omega_functor(s.forms[0].tower().jet(h - 1), &s.iota_t[h - 1])?;
            s.iota_t.push(up.mul(&inc));
            s.iota_wedge.push(inc);
            s.spaces.push(ker);
            s.forms.push(ext.forms_over(&carrier, big)?);
        }
        if n >= 2 {
            // S²_min(E) = span{ Σ da ⊗ db ⊗ e : Σ a⊗b ∈ N_d }
            let te = s.forms[0].tower();
            let mut min2 = Subspace::zero(te.dim(2));
            for i in 0..e.dim() {
                let fe = orbit_map(e, &unit_vec(e.dim(), i));
                let g = t_map(ext.forms().tower(), 0, te, 0, &fe, 2)?;
                for qv in ext.min2().basis() {
                    min2.insert(&g.apply(qv));
                }
            }
            let cols = min2
                .basis()
                .iter()
                .map(|v| {
                    s.spaces[2]
                        .coords(v)
                        .ok_or_else(|| Error::Internal("S²_min is not contained in S²".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            s.nu = Some(Matrix::from_cols(&cols, s.spaces[2].dim()));
            s.min2 = Some(min2);
        }
        Ok(s)
    }

    pub fn top(&self) -> usize {
        self.n
    }

    /// `S^h(E)`
    pub fn carrier(&self, h: usize) -> &Module {
        self.forms[h].grade(0)
    }

    pub fn dim(&self, h: usize) -> usize {
        self.carrier(h).dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.n).map(|h| self.dim(h)).collect()
    }

    /// `S^h` as a subspace of `Ω¹(S^{h-1})` (all of `E` for `h = 0`).
    pub fn space(&self, h: usize) -> &Subspace {
        &self.spaces[h]
    }

    pub fn iota_wedge(&self, h: usize) -> &Matrix {
        &self.iota_wedge[h]
    }

    /// `ι_{S^h}: S^h → T^h(E)`
    pub fn iota_t(&self, h: usize) -> &Matrix {
        &self.iota_t[h]
    }

    /// `Ω^•(S^h)`
    pub fn forms(&self, h: usize) -> &Forms {
        &self.forms[h]
    }

    /// `S²_min(E) ⊂ T²(E)`
    pub fn min2(&self) -> Option<&Subspace> {
        self.min2.as_ref()
    }

    /// `ν: S²_min(E) → S²(E)`
    pub fn nu(&self) -> Option<&Matrix> {
        self.nu.as_ref()
    }

    /// `δ^{h,k}: Ω^k(S^h) → Ω^{k+1}(S^{h-1})`, with `S^{-1} = 0`.
    pub fn delta(&self, h: usize, k: usize) -> Result<Matrix> {
        let short = || Error::Dimension(format!("δ^{{{h},{k}}} lies beyond the computed grades"));
        if h >= self.forms.len() || self.forms[h].max_grade() < k {
            return Err(short());
        }
        if h == 0 {
            return Ok(Matrix::zeros(0, self.forms[0].dim(k)));
        }
        let (src, tgt) = (&self.forms[h], &self.forms[h - 1]);
        if tgt.max_grade() < k + 1 {
            return Err(short());
        }
        let tk = t_map(src.tower(), 0, tgt.tower(), 1, &self.iota_wedge[h], k)?;
        let g = tgt.projection(k + 1).mul(&tk);
        Ok(src.quotient(k).descend(&g)?.scale(&sign(k)))
    }

    /// `∧_{S^{h-2}} ∘ Ω¹(ι^{h-1}_∧) ∘ ι^h_∧ = 0` for every `h ≥ 2`.
    pub fn verify(&self) -> Result<bool> {
        for h in 2..=self.n {
            if !self.delta(h - 1, 1)?.mul(&self.iota_wedge[h]).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cohomology `H^{h,k} = ker δ^{h,k} / im δ^{h+1,k-1}`.
    pub fn cohomology(&self, h: usize, k: usize) -> Result<Cohomology> {
        let out = self.delta(h, k)?;
        let dim = out.cols();
        let ker = out.kernel();
        let im = if k == 0 {
            Subspace::zero(dim)
        } else {
            if h + 1 > self.n {
                return Err(Error::Dimension(format!(
                    "H^{{{h},{k}}} needs S^{}; only up to S^{} computed",
                    h + 1,
                    self.n
                )));
            }
            self.delta(h + 1, k - 1)?.image()
        };
        let mut acc = im.clone();
        let mut reps = Vec::new();
        for v in ker.basis() {
            if acc.insert(v) {
                reps.push(v.iter().map(fmt_q).collect());
            }
        }
        Ok(Cohomology {
            h,
            k,
            dim,
            ker: ker.dim(),
            im: im.dim(),
            cohomology: ker.dim() - im.dim(),
            representatives: reps,
        })
    }

    /// The Spencer complex `S^t → Ω¹(S^{t-1}) → … → Ω^t(S⁰)` of total
    /// degree `t`, as far as the truncations allow.
    pub fn spencer(&self, t: usize) -> SpencerComplex {
        let mut deltas = Vec::new();
        let mut cohomology = Vec::new();
        let mut unknown = Vec::new();
        for k in 0..=t {
            let h = t - k;
            deltas.push(self.delta(h, k).ok());
            match self.cohomology(h, k) {
                Ok(c) => cohomology.push(c),
                Err(_) => unknown.push((h, k)),
            }
        }
        let is_complex = deltas.windows(2).all(|w| match (&w[0], &w[1]) {
            (Some(a), Some(b)) => b.mul(a).is_zero(),
            _ => true,
        });
        SpencerComplex {
            degree: t,
            deltas,
            cohomology,
            unknown,
            is_complex,
        }
    }
}

/// One node `Ω^k(S^h)` of a Spencer complex.
#[derive(Clone, Debug, Serialize)]
pub struct Cohomology {
    pub h: usize,
    pub k: usize,
    pub dim: usize,
    pub ker: usize,
    pub im: usize,
    #[serde(rename = "H")]
    pub cohomology: usize,
    #[serde(skip)]
    pub representatives: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct SpencerComplex {
    pub degree: usize,
    /// `deltas[k] = δ^{degree-k, k}` when it lies within the truncation
    pub deltas: Vec<Option<Matrix>>,
    pub cohomology: Vec<Cohomology>,
    /// Nodes `(h, k)` beyond the computed grades.
    pub unknown: Vec<(usize, usize)>,
    pub is_complex: bool,
}

impl SpencerComplex {
    pub fn at(&self, h: usize, k: usize) -> Option<&Cohomology> {
        self.cohomology.iter().find(|c| c.h == h && c.k == k)
    }
}
