//! First-order differential calculi, all presented as quotients
//! `Ω¹ = Ω¹_u / N_d` of the universal calculus.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{format_combination, Algebra, Module};
use crate::error::{Error, Result};
use crate::jets::first::Jet1;
use crate::linalg::{kernel, zero_vec, Matrix, Subspace, Q};

/// How a calculus was specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Universal,
    Quotient(Vec<Vec<Q>>),
    Terminal(Vec<Vec<Q>>),
}

#[derive(Clone, Debug)]
pub struct Calculus {
    alg: Algebra,
    presentation: Presentation,
    nd: Subspace,
    j1a: Jet1,
    d: Matrix,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CalculusReport {
    pub leibniz: bool,
    pub surjective: bool,
    pub dim_omega1: usize,
    pub dim_n: usize,
    pub span_rank: usize,
    pub failures: Vec<String>,
}

impl CalculusReport {
    pub fn ok(&self) -> bool {
        self.leibniz && self.surjective
    }
}

/// One row of a structure table: `lhs = rhs` with `rhs` written in a left
/// basis of `Ω¹`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Relation {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StructureRelations {
    pub basis: Vec<String>,
    /// `dx` for every algebra basis element `x`.
    pub differentials: Vec<Relation>,
    /// `θ·e` for every basis form `θ` and algebra basis element `e`.
    pub right_action: Vec<Relation>,
    /// Left coefficients: `coefficients[p]` is the matrix of `x ↦ ∂_p x`.
    #[serde(skip)]
    pub coefficients: Vec<Matrix>,
}

/// The induced (unique) bimodule map between two calculi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalculusMorphism {
    pub matrix: Matrix,
}

fn aa_index(n: usize, a: usize, b: usize) -> usize {
    a * n + b
}

impl Calculus {
    pub fn universal(alg: &Algebra) -> Result<Calculus> {
        Calculus::from_nd(alg, Presentation::Universal, Subspace::zero(alg.dim() * alg.dim()))
    }

    /// `Ω¹_u / N` with `N` the sub-bimodule generated by `gens ⊂ Ω¹_u`.
    pub fn quotient(alg: &Algebra, gens: &[Vec<Q>]) -> Result<Calculus> {
        let n2 = alg.dim() * alg.dim();
        let ou = omega_u(alg);
        for g in gens {
            if g.len() != n2 {
                return Err(Error::Dimension(format!("generator has length {}, expected {n2}", g.len())));
            }
            if !ou.contains(g) {
                return Err(Error::Validation("generator does not lie in Ω¹_u (its product is nonzero)".into()));
            }
        }
        let aa = Module::regular(alg).plain_tensor(&Module::regular(alg));
        let nd = aa.closure(alg, gens);
        Calculus::from_nd(alg, Presentation::Quotient(gens.to_vec()), nd)
    }

    /// The largest calculus for which every `L_f`, `f ∈ S`, is first order:
    /// `N_S = ⋂_f { Σ n'⊗n'' ∈ Ω¹_u : Σ n' f n'' = 0 }`.
    pub fn terminal(alg: &Algebra, s: &[Vec<Q>]) -> Result<Calculus> {
        if s.is_empty() {
            return Err(Error::Validation("terminal calculus needs a nonempty set".into()));
        }
        let mut ns = omega_u(alg);
        for f in s {
            ns = ns.intersect(&n_f(alg, f)?)?;
        }
        Calculus::from_nd(alg, Presentation::Terminal(s.to_vec()), ns)
    }

    /// `Ω¹_{i,j}` on the quaternions: the terminal calculus making `L_i`
    /// and `L_j` first order.
    pub fn quaternion_ij() -> Calculus {
        let h = Algebra::quaternions();
        Calculus::terminal(&h, &[h.basis(1), h.basis(2)]).expect("built-in calculus")
    }

    /// The infinitesimal calculus on `k[t]/(t²)`, `Ω¹ = k·dt` with `t·dt = dt·t = 0`.
    pub fn infinitesimal() -> Calculus {
        let k2 = Algebra::dual_numbers();
        let g = simple_tensor_sum(&k2, &[(Q::one(), 1, 1)]);
        Calculus::quotient(&k2, &[g]).expect("built-in calculus")
    }

    pub fn from_nd(alg: &Algebra, presentation: Presentation, nd: Subspace) -> Result<Calculus> {
        let n = alg.dim();
        if nd.ambient() != n * n {
            return Err(Error::Dimension("N_d must live in A ⊗ A".into()));
        }
        let aa = Module::regular(alg).plain_tensor(&Module::regular(alg));
        if !nd.is_subspace_of(&omega_u(alg)) || !aa.is_submodule(alg, &nd) {
            return Err(Error::Validation("N_d must be a sub-bimodule of Ω¹_u".into()));
        }
        let j1a = Jet1::new(alg, &nd, &Module::regular(alg))?;
        let cols = (0..n)
            .map(|a| {
                let mut v = zero_vec(n * n);
                for (u, c) in alg.unit().iter().enumerate() {
                    if !c.is_zero() {
                        v[aa_index(n, u, a)] += c;
                        v[aa_index(n, a, u)] -= c;
                    }
                }
                j1a.omega_coords(&j1a.class(&v))
            })
            .collect::<Result<Vec<_>>>()?;
        let d = Matrix::from_cols(&cols, j1a.omega_dim());
        Ok(Calculus {
            alg: alg.clone(),
            presentation,
            nd,
            j1a,
            d,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn is_universal(&self) -> bool {
        self.nd.is_zero()
    }

    /// `N_d ⊂ A ⊗ A`.
    pub fn nd(&self) -> &Subspace {
        &self.nd
    }

    /// `J¹A` with `Ω¹ ⊂ J¹A`.
    pub fn j1a(&self) -> &Jet1 {
        &self.j1a
    }

    pub fn omega1(&self) -> &Module {
        self.j1a.omega_module()
    }

    pub fn dim(&self) -> usize {
        self.j1a.omega_dim()
    }

    /// `d: A → Ω¹`.
    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn da(&self, a: &[Q]) -> Vec<Q> {
        self.d.apply(a)
    }

    pub fn jet1(&self, x: &Module) -> Result<Jet1> {
        Jet1::new(&self.alg, &self.nd, x)
    }

    /// Class in `Ω¹` of an element of `Ω¹_u ⊂ A ⊗ A`.
    pub fn project_universal(&self, v: &[Q]) -> Result<Vec<Q>> {
        self.j1a.omega_coords(&self.j1a.class(v))
    }

    /// `p_d: Ω¹_u → Ω¹` in the echelon coordinates of `Ω¹_u`.
    pub fn p_d(&self) -> Result<Matrix> {
        let ou = omega_u(&self.alg);
        let cols = ou
            .basis()
            .iter()
            .map(|v| self.project_universal(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_cols(&cols, self.dim()))
    }

    /// Leibniz rule and surjectivity on basis elements.
    pub fn validate(&self) -> CalculusReport {
        let alg = &self.alg;
        let om = self.omega1();
        let n = alg.dim();
        let mut failures = Vec::new();
        let mut leibniz = true;
        for a in 0..n {
            for b in 0..n {
                let ab = alg.table()[a][b].clone();
                let lhs = self.da(&ab);
                let mut rhs = om.act_left(&alg.basis(a), &self.da(&alg.basis(b)));
                let r = om.act_right(&self.da(&alg.basis(a)), &alg.basis(b));
                for (x, y) in rhs.iter_mut().zip(&r) {
                    *x += y;
                }
                if lhs != rhs {
                    leibniz = false;
                    failures.push(format!("d({}{}) != {} d{} + (d{}) {}", alg.labels()[a], alg.labels()[b], alg.labels()[a], alg.labels()[b], alg.labels()[a], alg.labels()[b]));
                }
            }
        }
        let images: Vec<Vec<Q>> = (0..n).map(|a| self.da(&alg.basis(a))).collect();
        let span = om.left_span(alg, &images);
        if !span.is_full() {
            failures.push(format!("A·dA has dimension {} < {}", span.dim(), self.dim()));
        }
        CalculusReport {
            leibniz,
            surjective: span.is_full(),
            dim_omega1: self.dim(),
            dim_n: self.nd.dim(),
            span_rank: span.dim(),
            failures,
        }
    }

    /// The map `A^r → Ω¹`, `(a_p) ↦ Σ a_p dx_p`.
    fn free_map(&self, xs: &[Vec<Q>]) -> Matrix {
        let n = self.alg.dim();
        let om = self.omega1();
        let mut cols = Vec::with_capacity(n * xs.len());
        for x in xs {
            let dx = self.da(x);
            for a in 0..n {
                cols.push(om.act_left(&self.alg.basis(a), &dx));
            }
        }
        Matrix::from_cols(&cols, self.dim())
    }

    /// Whether `{dx : x ∈ xs}` is a left `A`-basis of `Ω¹`.
    pub fn is_left_free_on(&self, xs: &[Vec<Q>]) -> bool {
        let m = self.free_map(xs);
        m.is_square() && m.is_injective()
    }

    /// Searches the algebra basis for elements whose differentials form a
    /// left basis of `Ω¹`; returns their indices.
    pub fn find_free_basis(&self) -> Option<Vec<usize>> {
        let n = self.alg.dim();
        if n == 0 || !self.dim().is_multiple_of(n) {
            return None;
        }
        let r = self.dim() / n;
        let mut choice: Vec<usize> = (0..r).collect();
        loop {
            let xs: Vec<Vec<Q>> = choice.iter().map(|&i| self.alg.basis(i)).collect();
            if self.is_left_free_on(&xs) {
                return Some(choice);
            }
            // next r-combination of 0..n
            let mut i = r;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if choice[i] < n - r + i {
                    break;
                }
            }
            choice[i] += 1;
            for j in i + 1..r {
                choice[j] = choice[j - 1] + 1;
            }
        }
    }

    /// Expresses `dx` and `θ·e` in the left basis `{dx_p}`.
    pub fn structure_relations(&self, basis: &[usize]) -> Result<StructureRelations> {
        let alg = &self.alg;
        let n = alg.dim();
        let xs: Vec<Vec<Q>> = basis.iter().map(|&i| alg.basis(i)).collect();
        if !self.is_left_free_on(&xs) {
            return Err(Error::Validation("the given differentials are not a left basis of Ω¹".into()));
        }
        let fm = self.free_map(&xs);
        let solve = |w: &[Q]| -> Vec<Vec<Q>> {
            let (x, _) = fm.solve_affine(w).expect("shape");
            let x = x.expect("free map is onto");
            x.chunks(n).map(|c| c.to_vec()).collect()
        };
        let names: Vec<String> = basis.iter().map(|&i| format!("d{}", alg.labels()[i])).collect();
        let render = |coeffs: &[Vec<Q>]| -> String {
            let terms: Vec<String> = coeffs
                .iter()
                .zip(&names)
                .filter(|(c, _)| c.iter().any(|x| !x.is_zero()))
                .map(|(c, name)| {
                    let nz = c.iter().filter(|x| !x.is_zero()).count();
                    let s = alg.format_element(c);
                    if s == "1" {
                        name.clone()
                    } else if s == "-1" {
                        format!("-{name}")
                    } else if nz > 1 {
                        format!("({s}) {name}")
                    } else {
                        format!("{s} {name}")
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ").replace("+ -", "- ")
            }
        };
        let mut coefficients = vec![Matrix::zeros(n, n); basis.len()];
        let mut differentials = Vec::new();
        for x in 0..n {
            let c = solve(&self.da(&alg.basis(x)));
            for (p, cp) in c.iter().enumerate() {
                coefficients[p].set_col(x, cp);
            }
            differentials.push(Relation {
                lhs: format!("d{}", alg.labels()[x]),
                rhs: render(&c),
            });
        }
        let mut right_action = Vec::new();
        for (p, x) in xs.iter().enumerate() {
            let theta = self.da(x);
            for e in 0..n {
                let c = solve(&self.omega1().act_right(&theta, &alg.basis(e)));
                right_action.push(Relation {
                    lhs: format!("({}){}", names[p], alg.labels()[e]),
                    rhs: render(&c),
                });
            }
        }
        Ok(StructureRelations {
            basis: names,
            differentials,
            right_action,
            coefficients,
        })
    }

    /// The induced morphism `self → tgt`, which exists iff `N_self ⊆ N_tgt`.
    pub fn morphism_to(&self, tgt: &Calculus) -> Option<CalculusMorphism> {
        if self.alg != tgt.alg || !self.nd.is_subspace_of(&tgt.nd) {
            return None;
        }
        let cols: Vec<Vec<Q>> = (0..self.dim())
            .map(|i| {
                let cls = self.j1a.omega().basis()[i].clone();
                let rep = self.j1a.lift(&cls);
                tgt.project_universal(&rep).expect("Ω¹_u maps into Ω¹")
            })
            .collect();
        Some(CalculusMorphism {
            matrix: Matrix::from_cols(&cols, tgt.dim()),
        })
    }

    /// Renders an element of `Ω¹` as a left combination of the given basis.
    pub fn format_form(&self, basis: &[usize], w: &[Q]) -> Result<String> {
        let rel = self.structure_relations(basis)?;
        let xs: Vec<Vec<Q>> = basis.iter().map(|&i| self.alg.basis(i)).collect();
        let fm = self.free_map(&xs);
        let (x, _) = fm.solve_affine(w)?;
        let x = x.ok_or_else(|| Error::Internal("not in Ω¹".into()))?;
        let n = self.alg.dim();
        let mut coeffs = Vec::new();
        for c in x.chunks(n) {
            coeffs.push(c.to_vec());
        }
        let terms: Vec<String> = coeffs
            .iter()
            .zip(&rel.basis)
            .filter(|(c, _)| c.iter().any(|v| !v.is_zero()))
            .map(|(c, name)| format!("({}) {name}", self.alg.format_element(c)))
            .collect();
        Ok(if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}

/// `Ω¹_u = ker(μ: A ⊗ A → A)`.
pub fn omega_u(alg: &Algebra) -> Subspace {
    kernel(&multiplication_map(alg))
}

/// `μ: A ⊗ A → A`.
pub fn multiplication_map(alg: &Algebra) -> Matrix {
    let n = alg.dim();
    let mut cols = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            cols.push(alg.table()[a][b].clone());
        }
    }
    Matrix::from_cols(&cols, n)
}

/// `d_u(a) = 1 ⊗ a - a ⊗ 1` in `A ⊗ A`.
pub fn d_universal(alg: &Algebra, a: &[Q]) -> Vec<Q> {
    let n = alg.dim();
    let mut v = zero_vec(n * n);
    for (u, cu) in alg.unit().iter().enumerate() {
        for (i, ai) in a.iter().enumerate() {
            let c = cu * ai;
            if !c.is_zero() {
                v[aa_index(n, u, i)] += &c;
                v[aa_index(n, i, u)] -= &c;
            }
        }
    }
    v
}

/// `N_f = { Σ n'⊗n'' ∈ Ω¹_u : Σ n' f n'' = 0 }`.
pub fn n_f(alg: &Algebra, f: &[Q]) -> Result<Subspace> {
    let n = alg.dim();
    if f.len() != n {
        return Err(Error::Dimension("element of the wrong algebra".into()));
    }
    let mut cols = Vec::with_capacity(n * n);
    for a in 0..n {
        let af = alg.mul(&alg.basis(a), f);
        for b in 0..n {
            cols.push(alg.mul(&af, &alg.basis(b)));
        }
    }
    let ev = Matrix::from_cols(&cols, n);
    omega_u(alg).intersect(&kernel(&ev))
}

/// `Σ c_ab e_a ⊗ e_b` from a list of `(coefficient, a, b)`.
pub fn simple_tensor_sum(alg: &Algebra, terms: &[(Q, usize, usize)]) -> Vec<Q> {
    let n = alg.dim();
    let mut v = zero_vec(n * n);
    for (c, a, b) in terms {
        v[aa_index(n, *a, *b)] += c;
    }
    v
}

/// Renders an element of `A ⊗ A`.
pub fn format_tensor(alg: &Algebra, v: &[Q]) -> String {
    let n = alg.dim();
    let labels: Vec<String> = (0..n * n)
        .map(|i| format!("{}⊗{}", alg.labels()[i / n], alg.labels()[i % n]))
        .collect();
    format_combination(v, &labels)
}

impl CalculusMorphism {
    /// Checks that the map is surjective and intertwines the differentials.
    pub fn verify(&self, src: &Calculus, tgt: &Calculus) -> bool {
        self.matrix.mul(src.d()) == *tgt.d() && self.matrix.is_surjective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn universal_dimensions() {
        let h = Algebra::quaternions();
        assert_eq!(omega_u(&h).dim(), 12);
        let u = Calculus::universal(&h).unwrap();
        assert_eq!(u.dim(), 12);
        assert!(u.validate().ok());
        assert!(u.da(h.unit()).iter().all(Zero::is_zero));
        let k2 = Algebra::dual_numbers();
        assert_eq!(Calculus::universal(&k2).unwrap().dim(), 2);
    }

    #[test]
    fn quaternion_terminal_calculi() {
        let h = Algebra::quaternions();
        assert_eq!(n_f(&h, &h.basis(1)).unwrap().dim(), 8);
        let c = Calculus::quaternion_ij();
        assert_eq!(c.nd().dim(), 4);
        assert_eq!(c.dim(), 8);
        assert!(c.validate().ok());
        assert_eq!(c.find_free_basis(), Some(vec![1, 2]));
        // N_{i,j} is the left span of 1⊗1 + i⊗i + j⊗j - k⊗k
        let g = simple_tensor_sum(&h, &[(q(1), 0, 0), (q(1), 1, 1), (q(1), 2, 2), (q(-1), 3, 3)]);
        let aa = Module::regular(&h).plain_tensor(&Module::regular(&h));
        assert_eq!(aa.left_span(&h, &[g]), *c.nd());
    }

    #[test]
    fn quaternion_structure_equation() {
        let c = Calculus::quaternion_ij();
        let rel = c.structure_relations(&[1, 2]).unwrap();
        let dk = &rel.differentials[3];
        assert_eq!(dk.rhs, "-j di + i dj");
        let ri: Vec<_> = rel.right_action.iter().map(|r| format!("{} = {}", r.lhs, r.rhs)).collect();
        assert!(ri.contains(&"(di)i = -i di".to_string()), "{ri:?}");
        assert!(ri.contains(&"(di)k = k di".to_string()), "{ri:?}");
    }

    #[test]
    fn dual_numbers_quotient() {
        let k2 = Algebra::dual_numbers();
        // t d_u t = t⊗t - t^2⊗1 = t⊗t
        let g = simple_tensor_sum(&k2, &[(q(1), 1, 1)]);
        let c = Calculus::quotient(&k2, &[g]).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.j1a().dim(), 3);
        assert!(c.validate().ok());
        assert!(Calculus::quotient(&k2, &[simple_tensor_sum(&k2, &[(q(1), 0, 0)])]).is_err());
    }

    #[test]
    fn degenerate_quotients() {
        let h = Algebra::quaternions();
        let u = Calculus::universal(&h).unwrap();
        let same = Calculus::quotient(&h, &[]).unwrap();
        assert_eq!(same.nd(), u.nd());
        let all = Calculus::quotient(&h, omega_u(&h).basis()).unwrap();
        assert_eq!(all.dim(), 0);
        assert!(all.validate().ok());
        let one = Calculus::terminal(&h, &[h.unit().to_vec()]).unwrap();
        assert_eq!(one.dim(), 0);
    }

    #[test]
    fn morphisms_follow_inclusions() {
        let h = Algebra::quaternions();
        let u = Calculus::universal(&h).unwrap();
        let ij = Calculus::quaternion_ij();
        let i = Calculus::terminal(&h, &[h.basis(1)]).unwrap();
        let m = u.morphism_to(&ij).unwrap();
        assert!(m.verify(&u, &ij));
        assert!(ij.morphism_to(&i).unwrap().verify(&ij, &i));
        assert!(i.morphism_to(&ij).is_none());
        assert!(ij.morphism_to(&ij).unwrap().verify(&ij, &ij));
    }
}
