//! Tensor powers `T^k = (Ω¹)^{⊗k}`, the (truncated) maximal exterior
//! algebra, forms with values in a module, and exterior covariant
//! derivatives.
//!
//! Everything is built from iterated first-jet presentations: `T^{k+1}(X)`
//! is `Ω¹(T^k(X))`, so `T^k(f)` is obtained by applying `Ω¹(-)` `k` times.

mod symmetric;

pub use symmetric::{Cohomology, SpencerComplex, SymmetricForms};

use num_traits::Zero;

use crate::algebra::{is_module_map, Module};
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::jets::Jet1;
use crate::linalg::{
    linear_map_from_samples, sign, unit_vec, vec_add, Matrix, Quotient, Subspace, Q,
};

/// `X, Ω¹(X), Ω¹(Ω¹(X)), …` up to a fixed depth.
#[derive(Clone, Debug)]
pub struct Tower {
    base: Module,
    jets: Vec<Jet1>,
}

impl Tower {
    pub fn new(calc: &Calculus, x: &Module, depth: usize) -> Result<Tower> {
        let mut t = Tower {
            base: x.clone(),
            jets: Vec::new(),
        };
        t.extend(calc, depth)?;
        Ok(t)
    }

    /// Tower over `A` itself, reusing the calculus' own `J¹A`.
    pub fn over_algebra(calc: &Calculus, depth: usize) -> Result<Tower> {
        let mut t = Tower {
            base: Module::regular(calc.algebra()),
            jets: Vec::new(),
        };
        if depth > 0 {
            t.jets.push(calc.j1a().clone());
        }
        t.extend(calc, depth)?;
        Ok(t)
    }

    pub fn extend(&mut self, calc: &Calculus, depth: usize) -> Result<()> {
        while self.jets.len() < depth {
            let m = self.module(self.jets.len()).clone();
            self.jets.push(calc.jet1(&m)?);
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.jets.len()
    }

    /// `T^k(X)`
    pub fn module(&self, k: usize) -> &Module {
        if k == 0 {
            &self.base
        } else {
            self.jets[k - 1].omega_module()
        }
    }

    pub fn dim(&self, k: usize) -> usize {
        self.module(k).dim()
    }

    /// `J¹(T^k(X))`
    pub fn jet(&self, k: usize) -> &Jet1 {
        &self.jets[k]
    }
}

/// `T^k(f): T^{so+k}(X) → T^{to+k}(Y)` for a left-linear
/// `f: T^{so}(X) → T^{to}(Y)`.
pub fn t_map(src: &Tower, so: usize, tgt: &Tower, to: usize, f: &Matrix, k: usize) -> Result<Matrix> {
    if src.depth() < so + k || tgt.depth() < to + k {
        return Err(Error::Dimension("tower too shallow for T^k(f)".into()));
    }
    let mut g = f.clone();
    for i in 0..k {
        g = src.jet(so + i).omega_functor(tgt.jet(to + i), &g)?;
    }
    Ok(g)
}

/// The map `A → X`, `a ↦ a·x`.
pub fn orbit_map(x_mod: &Module, x: &[Q]) -> Matrix {
    let cols: Vec<Vec<Q>> = x_mod.left().iter().map(|l| l.apply(x)).collect();
    Matrix::from_cols(&cols, x_mod.dim())
}

/// `T^k(X)` together with the ideals `I_k(X)` and grades `Ω^k(X) = T^k(X)/I_k(X)`.
#[derive(Clone, Debug)]
pub struct Forms {
    tower: Tower,
    ideals: Vec<Subspace>,
    grades: Vec<Module>,
    quots: Vec<Quotient>,
}

impl Forms {
    fn from_ideals(tower: Tower, ideals: Vec<Subspace>) -> Result<Forms> {
        let mut grades = Vec::new();
        let mut quots = Vec::new();
        for (k, i) in ideals.iter().enumerate() {
            let (m, q) = tower.module(k).quotient(i)?;
            grades.push(m);
            quots.push(q);
        }
        Ok(Forms {
            tower,
            ideals,
            grades,
            quots,
        })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn max_grade(&self) -> usize {
        self.ideals.len() - 1
    }

    pub fn ideal(&self, k: usize) -> &Subspace {
        &self.ideals[k]
    }

    /// `Ω^k(X)`
    pub fn grade(&self, k: usize) -> &Module {
        &self.grades[k]
    }

    pub fn dim(&self, k: usize) -> usize {
        self.grades[k].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.grades.iter().map(Module::dim).collect()
    }

    pub fn quotient(&self, k: usize) -> &Quotient {
        &self.quots[k]
    }

    /// `∧_k: T^k(X) → Ω^k(X)`
    pub fn projection(&self, k: usize) -> Matrix {
        self.quots[k].projection_matrix()
    }

    pub fn project(&self, k: usize, v: &[Q]) -> Vec<Q> {
        self.quots[k].project(v)
    }

    pub fn lift(&self, k: usize, w: &[Q]) -> Vec<Q> {
        self.quots[k].section(w)
    }
}

/// Result of checking the exterior algebra axioms.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct ExteriorReport {
    pub d_squared_zero: bool,
    pub leibniz: bool,
    pub associative: bool,
    pub wedge_well_defined: bool,
    pub surjective: bool,
    pub failures: Vec<String>,
}

impl ExteriorReport {
    pub fn ok(&self) -> bool {
        self.d_squared_zero && self.leibniz && self.associative && self.wedge_well_defined && self.surjective
    }
}

/// Exterior algebra `Ω⁰ … Ω^N`, a quotient of the tensor algebra by an ideal
/// generated in degree two.
#[derive(Clone, Debug)]
pub struct ExteriorAlgebra {
    calc: Calculus,
    forms: Forms,
    min2: Subspace,
    diffs: Vec<Matrix>,
}

/// The maximal exterior algebra truncated at grade `n`.
pub fn maximal_exterior(calc: &Calculus, n: usize) -> Result<ExteriorAlgebra> {
    ExteriorAlgebra::with_relations(calc, n, &[])
}

/// `T^n` as a bimodule.
pub fn tensor_power(calc: &Calculus, n: usize) -> Result<Module> {
    Ok(Tower::over_algebra(calc, n)?.module(n).clone())
}

impl ExteriorAlgebra {
    /// Quotient of the maximal exterior algebra by the ideal generated by
    /// `extra` (elements of `T²`). Fails when `d` does not descend.
    pub fn with_relations(calc: &Calculus, n: usize, extra: &[Vec<Q>]) -> Result<ExteriorAlgebra> {
        let alg = calc.algebra();
        let adim = alg.dim();
        let ta = Tower::over_algebra(calc, n.max(2))?;
        let j1a = calc.j1a();

        // Q = (d⊗d)(N_d)
        let dd: Vec<Vec<Q>> = (0..adim).map(|a| calc.da(&unit_vec(adim, a))).collect();
        let mut qgens = Vec::new();
        for nv in calc.nd().basis() {
            let mut acc = vec![Q::default(); ta.dim(2)];
            for a in 0..adim {
                for b in 0..adim {
                    let c = &nv[a * adim + b];
                    if !c.is_zero() {
                        let t = ta.jet(1).omega_tensor(j1a, &dd[a], &dd[b]);
                        crate::linalg::axpy(&mut acc, c, &t);
                    }
                }
            }
            qgens.push(acc);
        }
        let min2 = Subspace::from_vectors(ta.dim(2), &qgens);
        for e in extra {
            if e.len() != ta.dim(2) {
                return Err(Error::Dimension(format!(
                    "relation has length {}, T² has dimension {}",
                    e.len(),
                    ta.dim(2)
                )));
            }
        }

        let mut ideals = vec![Subspace::zero(ta.dim(0)), Subspace::zero(ta.dim(1))];
        let mut gens2 = qgens.clone();
        gens2.extend(extra.iter().cloned());
        ideals.push(ta.module(2).closure(alg, &gens2));
        let omega_basis: Vec<Vec<Q>> = (0..ta.dim(1)).map(|i| unit_vec(ta.dim(1), i)).collect();
        let right_by: Vec<Matrix> = omega_basis.iter().map(|w| orbit_map(ta.module(1), w)).collect();
        for k in 3..=n {
            let prev = ideals[k - 1].clone();
            let mut gens = Vec::new();
            for w in &omega_basis {
                for q in prev.basis() {
                    gens.push(ta.jet(k - 1).omega_tensor(j1a, w, q));
                }
            }
            for f in &right_by {
                let g = t_map(&ta, 0, &ta, 1, f, k - 1)?;
                for q in prev.basis() {
                    gens.push(g.apply(q));
                }
            }
            ideals.push(ta.module(k).closure(alg, &gens));
        }
        ideals.truncate(n + 1);
        let mut ta = ta;
        ta.jets.truncate(n);
        let forms = Forms::from_ideals(ta, ideals)?;

        let mut ext = ExteriorAlgebra {
            calc: calc.clone(),
            forms,
            min2,
            diffs: Vec::new(),
        };
        ext.build_differentials()?;
        Ok(ext)
    }

    fn build_differentials(&mut self) -> Result<()> {
        let n = self.max_grade();
        let adim = self.calc.algebra().dim();
        if n == 0 {
            return Ok(());
        }
        // d⁰ lands in Ω¹ = T¹ (I₁ = 0)
        let d0 = self.forms.projection(1).mul(self.calc.d());
        self.diffs.push(d0);
        let ta = &self.forms.tower;
        let j1a = self.calc.j1a();
        // chains[k-1][tuple] = da_1 ⊗ … ⊗ da_k in T^k, tuples in lexicographic order
        let mut chains: Vec<Vec<Vec<Q>>> =
            vec![(0..adim).map(|a| self.calc.da(&unit_vec(adim, a))).collect()];
        for k in 2..=n {
            let prev = &chains[k - 2];
            let mut next = Vec::with_capacity(prev.len() * adim);
            for a in 0..adim {
                for rest in prev {
                    next.push(ta.jet(k - 1).omega_tensor(j1a, &chains[0][a], rest));
                }
            }
            chains.push(next);
        }
        for k in 1..n {
            let grade_k = &self.forms.grades[k];
            let mut samples = Vec::new();
            let len = chains[k - 1].len();
            for a0 in 0..adim {
                let ea = unit_vec(adim, a0);
                for (t, e) in chains[k - 1].iter().enumerate() {
                    let x = self.forms.project(k, &ta.module(k).act_left(&ea, e));
                    let y = self.forms.project(k + 1, &chains[k][a0 * len + t]);
                    samples.push((x, y));
                }
            }
            let dk = linear_map_from_samples(grade_k.dim(), self.forms.dim(k + 1), &samples)
                .map_err(|e| Error::NotWellDefined(format!("d^{k} does not descend to Ω^{k}: {e}")))?;
            self.diffs.push(dk);
        }
        Ok(())
    }

    pub fn calculus(&self) -> &Calculus {
        &self.calc
    }

    pub fn forms(&self) -> &Forms {
        &self.forms
    }

    pub fn max_grade(&self) -> usize {
        self.forms.max_grade()
    }

    pub fn grade(&self, k: usize) -> &Module {
        self.forms.grade(k)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.forms.dim(k)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.forms.dims()
    }

    pub fn tensor_dim(&self, k: usize) -> usize {
        self.forms.tower.dim(k)
    }

    /// `I_k ⊂ T^k`
    pub fn ideal(&self, k: usize) -> &Subspace {
        self.forms.ideal(k)
    }

    /// `span{(d⊗d)(N_d)} ⊂ T²`
    pub fn min2(&self) -> &Subspace {
        &self.min2
    }

    /// `d^k: Ω^k → Ω^{k+1}`, for `k < N`.
    pub fn d(&self, k: usize) -> &Matrix {
        &self.diffs[k]
    }

    fn check_grade(&self, k: usize) -> Result<()> {
        if k > self.max_grade() {
            return Err(Error::Dimension(format!(
                "grade {k} exceeds the truncation {}",
                self.max_grade()
            )));
        }
        Ok(())
    }

    /// `ω ⊗ ξ ∈ T^{p+q}(X)` for `ω ∈ T^p` and `ξ ∈ T^q(X)`.
    pub fn tensor_with(&self, p: usize, omega: &[Q], x: &Forms, q: usize, xi: &[Q]) -> Result<Vec<Q>> {
        let f = orbit_map(x.tower.module(q), xi);
        Ok(t_map(&self.forms.tower, 0, &x.tower, q, &f, p)?.apply(omega))
    }

    /// Matrix of `ω ↦ ω ∧ ξ`, `Ω^p → Ω^{p+q}(X)`, for `ξ ∈ Ω^q(X)`.
    pub fn wedge_matrix_with(&self, p: usize, x: &Forms, q: usize, xi: &[Q]) -> Result<Matrix> {
        self.check_grade(p + q)?;
        let f = orbit_map(x.tower.module(q), &x.lift(q, xi));
        let t = t_map(&self.forms.tower, 0, &x.tower, q, &f, p)?;
        Ok(x.projection(p + q).mul(&t).mul(&self.forms.quots[p].section_matrix()))
    }

    /// Matrix of `ω ↦ ω ∧ η`, `Ω^p → Ω^{p+q}`.
    pub fn wedge_matrix(&self, p: usize, q: usize, eta: &[Q]) -> Result<Matrix> {
        self.wedge_matrix_with(p, &self.forms, q, eta)
    }

    pub fn wedge(&self, p: usize, omega: &[Q], q: usize, eta: &[Q]) -> Result<Vec<Q>> {
        Ok(self.wedge_matrix(p, q, eta)?.apply(omega))
    }

    /// `T^k(X)`, `I_k(X)` and `Ω^k(X) = Ω^k ⊗_A X` for `k ≤ depth`.
    pub fn forms_over(&self, x: &Module, depth: usize) -> Result<Forms> {
        self.forms_over_deep(x, depth, depth)
    }

    /// Like [`forms_over`](Self::forms_over) but with the tower `T^•(X)`
    /// continued to `tower_depth` (grades beyond `depth` stay unquotiented).
    pub fn forms_over_deep(&self, x: &Module, depth: usize, tower_depth: usize) -> Result<Forms> {
        self.check_grade(depth)?;
        let tower = Tower::new(&self.calc, x, tower_depth.max(depth))?;
        let ta = &self.forms.tower;
        let mut ideals = Vec::with_capacity(depth + 1);
        let mut running: Vec<Matrix> = (0..x.dim()).map(|i| orbit_map(x, &unit_vec(x.dim(), i))).collect();
        for k in 0..=depth {
            if k > 0 {
                for g in running.iter_mut() {
                    *g = ta.jet(k - 1).omega_functor(tower.jet(k - 1), g)?;
                }
            }
            let mut ik = Subspace::zero(tower.dim(k));
            for g in &running {
                for q in self.forms.ideals[k].basis() {
                    ik.insert(&g.apply(q));
                }
            }
            ideals.push(ik);
        }
        Forms::from_ideals(tower, ideals)
    }

    pub fn validate(&self) -> ExteriorReport {
        let mut r = ExteriorReport {
            d_squared_zero: true,
            leibniz: true,
            associative: true,
            wedge_well_defined: true,
            // each grade is presented as a quotient of T^k, and d^k was
            // solved from the spanning family a₀ da₁ ∧ … ∧ da_k
            surjective: true,
            failures: Vec::new(),
        };
        if let Err(e) = self.check_axioms(&mut r) {
            r.failures.push(format!("validation aborted: {e}"));
            r.leibniz = false;
        }
        r
    }

    fn check_axioms(&self, r: &mut ExteriorReport) -> Result<()> {
        let n = self.max_grade();
        for k in 0..n.saturating_sub(1) {
            if !self.d(k + 1).mul(self.d(k)).is_zero() {
                r.d_squared_zero = false;
                r.failures.push(format!("d^{} ∘ d^{} ≠ 0", k + 1, k));
            }
        }
        let basis = |k: usize| -> Vec<Vec<Q>> { (0..self.dim(k)).map(|i| unit_vec(self.dim(k), i)).collect() };

        // graded Leibniz on all basis pairs
        for p in 0..n {
            for q in 0..n - p {
                for b in basis(q) {
                    let w_pq = self.wedge_matrix(p, q, &b)?;
                    let lhs = self.d(p + q).mul(&w_pq);
                    let first = self.wedge_matrix(p + 1, q, &b)?.mul(self.d(p));
                    let db = self.d(q).apply(&b);
                    let second = self.wedge_matrix(p, q + 1, &db)?.scale(&sign(p));
                    if lhs != first.add(&second) {
                        r.leibniz = false;
                        r.failures.push(format!("graded Leibniz fails for grades ({p}, {q})"));
                        break;
                    }
                }
            }
        }

        // ∧ descends: T^p ⊗ I_q and I_p ⊗ T^q land in I_{p+q}
        for p in 0..=n {
            for q in 0..=n - p {
                let target = self.ideal(p + q);
                let tower = &self.forms.tower;
                let mut ok = true;
                for iq in self.ideal(q).basis() {
                    let g = t_map(tower, 0, tower, q, &orbit_map(tower.module(q), iq), p)?;
                    ok &= g.col_vecs().iter().all(|c| target.contains(c));
                }
                for tq in basis_t(self.tensor_dim(q)) {
                    let g = t_map(tower, 0, tower, q, &orbit_map(tower.module(q), &tq), p)?;
                    ok &= self.ideal(p).basis().iter().all(|ip| target.contains(&g.apply(ip)));
                }
                r.wedge_well_defined &= ok;
            }
        }
        if !r.wedge_well_defined {
            r.failures.push("the ideal is not two-sided".into());
        }

        // associativity on a sample of basis triples
        const SAMPLE: usize = 4;
        for p in 1..=n {
            for q in 1..=n.saturating_sub(p) {
                for s in 1..=n.saturating_sub(p + q) {
                    for c in basis(s).into_iter().take(SAMPLE) {
                        let w_qs = self.wedge_matrix(q, s, &c)?;
                        let w_pq_s = self.wedge_matrix(p + q, s, &c)?;
                        for b in basis(q).into_iter().take(SAMPLE) {
                            let bc = w_qs.apply(&b);
                            let left = w_pq_s.mul(&self.wedge_matrix(p, q, &b)?);
                            let right = self.wedge_matrix(p, q + s, &bc)?;
                            if left != right {
                                r.associative = false;
                                r.failures.push(format!("∧ is not associative in grades ({p}, {q}, {s})"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Exterior covariant derivatives `d_∇^k: Ω^k(E) → Ω^{k+1}(E)` for
    /// `k < m`, from `∇: E → Ω¹(E)` (given in `Ω¹(E)` coordinates of
    /// `forms_e`). Index 0 is `∇` itself, re-derived from the Leibniz rule.
    pub fn covariant_derivative(&self, forms_e: &Forms, nabla: &Matrix, m: usize) -> Result<Vec<Matrix>> {
        if m > forms_e.max_grade() {
            return Err(Error::Dimension("forms over E are truncated below the requested grade".into()));
        }
        let te = &forms_e.tower;
        let e = te.module(0);
        if nabla.rows() != te.dim(1) || nabla.cols() != e.dim() {
            return Err(Error::Dimension("∇ must map E to Ω¹(E)".into()));
        }
        let mut out = Vec::new();
        for k in 0..m {
            let mut samples = Vec::new();
            for ei in 0..e.dim() {
                let ev = unit_vec(e.dim(), ei);
                let fe = orbit_map(e, &ev);
                let tk = t_map(&self.forms.tower, 0, te, 0, &fe, k)?;
                let tk1 = t_map(&self.forms.tower, 0, te, 0, &fe, k + 1)?;
                let fn_e = orbit_map(te.module(1), &nabla.col(ei));
                let tn = t_map(&self.forms.tower, 0, te, 1, &fn_e, k)?;
                for a in 0..self.dim(k) {
                    let alpha = self.forms.lift(k, &unit_vec(self.dim(k), a));
                    let da = self.forms.lift(k + 1, &self.d(k).apply(&unit_vec(self.dim(k), a)));
                    let x = forms_e.project(k, &tk.apply(&alpha));
                    let y1 = forms_e.project(k + 1, &tk1.apply(&da));
                    let y2 = forms_e.project(k + 1, &tn.apply(&alpha));
                    let y = vec_add(&y1, &crate::linalg::vec_scale(&y2, &sign(k)));
                    samples.push((x, y));
                }
            }
            let dk = linear_map_from_samples(forms_e.dim(k), forms_e.dim(k + 1), &samples).map_err(|err| {
                if k == 0 {
                    Error::Validation(format!("∇ fails the Leibniz rule: {err}"))
                } else {
                    Error::NotWellDefined(format!("d_∇ on grade {k}: {err}"))
                }
            })?;
            out.push(dk);
        }
        Ok(out)
    }

    /// `R_∇ = d_∇¹ ∘ ∇: E → Ω²(E)`, checked to be left `A`-linear.
    pub fn curvature(&self, forms_e: &Forms, nabla: &Matrix) -> Result<Matrix> {
        let ds = self.covariant_derivative(forms_e, nabla, 2)?;
        let r = ds[1].mul(&ds[0]);
        if !is_module_map(self.calc.algebra(), &r, forms_e.grade(0), forms_e.grade(2), false) {
            return Err(Error::Validation("curvature is not left A-linear".into()));
        }
        Ok(r)
    }
}

fn basis_t(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

#[cfg(test)]
mod tests;
