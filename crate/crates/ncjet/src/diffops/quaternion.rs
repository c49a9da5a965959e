//! The operator algebra of the quaternions with the calculus `Ω¹_{i,j}`,
//! and a checker for second-order Laplacians against a bimodule inner product.

use serde::Serialize;

use super::{diff_space, order, Certificate};
use crate::algebra::{is_module_map, Algebra, Module};
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::exterior::{ExteriorAlgebra, SymmetricForms, Tower};
use crate::jets::{Flavor, JetTowers};
use crate::linalg::{q, unit_vec, vec_add, vec_scale, vec_sub, Matrix, Q};

/// `(·,·): Ω¹ ⊗_A Ω¹ → A` from its values `values[p][q] = (θ_p, θ_q)` on a
/// left basis `θ_p = dx_p`, extended left-linearly.
pub fn inner_product(calc: &Calculus, tower: &Tower, basis: &[usize], values: &[Vec<Vec<Q>>]) -> Result<Matrix> {
    let alg = calc.algebra();
    let n = alg.dim();
    let r = basis.len();
    if values.len() != r || values.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != n)) {
        return Err(Error::Dimension(format!("inner product needs a {r}x{r} table of algebra elements")));
    }
    let thetas: Vec<Vec<Q>> = basis.iter().map(|&b| calc.da(&alg.basis(b))).collect();
    let t2 = tower.module(2);
    // Φ: A^{r²} → T², (a_pq) ↦ Σ a_pq θ_p ⊗ θ_q
    let mut phi = Matrix::zeros(t2.dim(), r * r * n);
    let mut g = Matrix::zeros(n, r * r * n);
    for p in 0..r {
        for qi in 0..r {
            let u = tower.jet(1).omega_tensor(calc.j1a(), &thetas[p], &thetas[qi]);
            for a in 0..n {
                let col = (p * r + qi) * n + a;
                phi.set_col(col, &t2.act_left(&alg.basis(a), &u));
                g.set_col(col, &alg.mul(&alg.basis(a), &values[p][qi]));
            }
        }
    }
    if !phi.is_square() || !phi.is_injective() {
        return Err(Error::Validation("θ_p ⊗ θ_q is not a left basis of Ω¹ ⊗_A Ω¹".into()));
    }
    let mut inv_cols = Vec::with_capacity(t2.dim());
    for c in 0..t2.dim() {
        let (x, _) = phi.solve_affine(&unit_vec(t2.dim(), c))?;
        inv_cols.push(x.expect("Φ is invertible"));
    }
    Ok(g.mul(&Matrix::from_cols(&inv_cols, phi.cols())))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LaplacianCheck {
    /// The inner product is also right linear.
    pub bimodule: bool,
    /// The metric lies in `S²`.
    pub metric_symmetric: bool,
    /// `Δ(1) = 0`.
    pub kills_unit: bool,
    /// Basis pairs `(a, b)` where `Δ(ab) ≠ Δ(a)b + aΔ(b) + 2(da, db)`.
    pub failures: Vec<(usize, usize)>,
}

impl LaplacianCheck {
    pub fn ok(&self) -> bool {
        self.bimodule && self.metric_symmetric && self.kills_unit && self.failures.is_empty()
    }
}

/// Checks `Δ(ab) = Δ(a)b + aΔ(b) + 2(da, db)` on all basis pairs; `metric`
/// is given in `T²(A)` coordinates of the symmetric forms' tower.
pub fn laplacian_check(calc: &Calculus, sym: &SymmetricForms, inner: &Matrix, metric: &[Q], delta: &Matrix) -> Result<LaplacianCheck> {
    let alg = calc.algebra();
    let n = alg.dim();
    let tower = sym.forms(0).tower();
    let t2 = tower.module(2);
    if inner.rows() != n || inner.cols() != t2.dim() || delta.rows() != n || delta.cols() != n {
        return Err(Error::Dimension("Laplacian check: shape mismatch".into()));
    }
    let a_mod = Module::regular(alg);
    let bimodule = is_module_map(alg, inner, t2, &a_mod, true);
    let metric_symmetric = sym.top() >= 2 && sym.space(2).contains(metric);
    let kills_unit = delta.apply(alg.unit()).iter().all(num_traits::Zero::is_zero);
    let da: Vec<Vec<Q>> = (0..n).map(|a| calc.da(&alg.basis(a))).collect();
    let lap: Vec<Vec<Q>> = (0..n).map(|a| delta.col(a)).collect();
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let (ea, eb) = (alg.basis(a), alg.basis(b));
            let lhs = delta.apply(&alg.mul(&ea, &eb));
            let pair = inner.apply(&tower.jet(1).omega_tensor(calc.j1a(), &da[a], &da[b]));
            let rhs = vec_add(
                &vec_add(&alg.mul(&lap[a], &eb), &alg.mul(&ea, &lap[b])),
                &vec_scale(&pair, &q(2)),
            );
            if lhs != rhs {
                failures.push((a, b));
            }
        }
    }
    Ok(LaplacianCheck {
        bimodule,
        metric_symmetric,
        kills_unit,
        failures,
    })
}

/// `R_q`, `∂_i`, `∂_j`, `L_i`, `L_j`, `L_k` and `Δ = 2∂_j∂_i` on `ℍ`.
#[derive(Clone, Debug)]
pub struct QuaternionOperators {
    /// `R_1, R_i, R_j, R_k`
    pub r: Vec<Matrix>,
    pub di: Matrix,
    pub dj: Matrix,
    /// `L_i, L_j, L_k`
    pub l: Vec<Matrix>,
    pub laplacian: Matrix,
}

impl QuaternionOperators {
    /// Partial derivatives with respect to the left basis `{di, dj}`.
    pub fn new(calc: &Calculus) -> Result<QuaternionOperators> {
        let alg = calc.algebra();
        if alg.dim() != 4 {
            return Err(Error::Validation("expected the quaternions".into()));
        }
        let rel = calc.structure_relations(&[1, 2])?;
        let (di, dj) = (rel.coefficients[0].clone(), rel.coefficients[1].clone());
        let laplacian = dj.mul(&di).scale(&q(2));
        Ok(QuaternionOperators {
            r: (0..4).map(|b| alg.right_mult(&alg.basis(b))).collect(),
            l: (1..4).map(|b| alg.left_mult(&alg.basis(b))).collect(),
            di,
            dj,
            laplacian,
        })
    }

    /// `R_q`, `∂_p ∘ R_q`, `∂_i ∘ ∂_j ∘ R_q`.
    pub fn basis(&self) -> Vec<Matrix> {
        let mut out = self.r.clone();
        for d in [&self.di, &self.dj] {
            out.extend(self.r.iter().map(|r| d.mul(r)));
        }
        out.extend(self.r.iter().map(|r| self.di.mul(&self.dj).mul(r)));
        out
    }
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

fn anticommutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).add(&b.mul(a))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OperatorAlgebraReport {
    /// `dim Diff^n(ℍ, ℍ)` for `n = 0..=3`.
    pub dims: Vec<usize>,
    pub basis_spans: bool,
    pub relations: Vec<Check>,
    /// Minimal orders of `L_i, L_j, L_k, ∂_i, ∂_j, Δ`.
    pub orders: Vec<(String, Option<usize>)>,
    pub laplacian: LaplacianCheck,
}

impl OperatorAlgebraReport {
    pub fn ok(&self) -> bool {
        self.basis_spans && self.relations.iter().all(|c| c.holds) && self.laplacian.ok()
    }
}

/// The full operator-algebra report for `ℍ` with `ext` built on `Ω¹_{i,j}`.
pub fn operator_algebra_report(ext: &ExteriorAlgebra) -> Result<OperatorAlgebraReport> {
    let calc = ext.calculus();
    let alg: &Algebra = calc.algebra();
    let ops = QuaternionOperators::new(calc)?;
    let a = Module::regular(alg);
    let towers = JetTowers::for_flavor(ext, &a, 3, Flavor::Holonomic)?;
    let spaces = (0..=3)
        .map(|k| diff_space(&towers, alg, Flavor::Holonomic, k, &a))
        .collect::<Result<Vec<_>>>()?;
    let dims = spaces.iter().map(|s| s.dim()).collect();
    let basis = ops.basis();
    let span = crate::linalg::Subspace::from_vectors(16, &basis.iter().map(crate::algebra::vectorize).collect::<Vec<_>>());
    let basis_spans = span.dim() == 16 && span == spaces[2].span;

    let zero = Matrix::zeros(4, 4);
    let id = Matrix::identity(4);
    let (di, dj, r) = (&ops.di, &ops.dj, &ops.r);
    let check = |name: &str, holds: bool| Check {
        name: name.to_string(),
        holds,
    };
    let mut relations = vec![
        check("∂_i² = 0", di.mul(di) == zero),
        check("∂_j² = 0", dj.mul(dj) == zero),
        check("⟦∂_i, ∂_j⟧ = 0", anticommutator(di, dj) == zero),
        check("⟦∂_i, R_j⟧ = 0", anticommutator(di, &r[2]) == zero),
        check("⟦∂_j, R_i⟧ = 0", anticommutator(dj, &r[1]) == zero),
        check("⟦∂_i, R_i⟧ = 1", anticommutator(di, &r[1]) == id),
        check("⟦∂_j, R_j⟧ = 1", anticommutator(dj, &r[2]) == id),
        check("[∂_j, R_k] = R_i", commutator(dj, &r[3]) == r[1]),
        check("[∂_i, R_k] = −R_j", commutator(di, &r[3]) == r[2].neg()),
        check("Δ = 2∂_j∂_i = [∂_j, ∂_i]", ops.laplacian == commutator(dj, di)),
    ];
    let named = [
        ("L_i", &ops.l[0]),
        ("L_j", &ops.l[1]),
        ("L_k", &ops.l[2]),
        ("∂_i", di),
        ("∂_j", dj),
        ("Δ", &ops.laplacian),
    ];
    let mut orders = Vec::new();
    for (name, m) in named {
        let scan = order(&towers, alg, Flavor::Holonomic, &a, m)?;
        orders.push((name.to_string(), scan.order));
    }
    let expected = [Some(1), Some(1), Some(2), Some(1), Some(1), Some(2)];
    for ((name, got), want) in orders.iter().zip(expected) {
        relations.push(check(&format!("{name} has order {}", want.unwrap()), *got == want));
    }

    let tower = Tower::over_algebra(calc, 2)?;
    let zero_a = vec![Q::from_integer(0.into()); 4];
    let values = vec![
        vec![zero_a.clone(), vec_scale(alg.unit(), &q(-1))],
        vec![alg.unit().to_vec(), zero_a],
    ];
    let inner = inner_product(calc, &tower, &[1, 2], &values)?;
    let sym = SymmetricForms::new(ext, &a, 2)?;
    let (dvi, dvj) = (calc.da(&alg.basis(1)), calc.da(&alg.basis(2)));
    let t1 = sym.forms(0).tower().jet(1);
    let metric = vec_sub(&t1.omega_tensor(calc.j1a(), &dvi, &dvj), &t1.omega_tensor(calc.j1a(), &dvj, &dvi));
    let laplacian = laplacian_check(calc, &sym, &inner, &metric, &ops.laplacian)?;
    Ok(OperatorAlgebraReport {
        dims,
        basis_spans,
        relations,
        orders,
        laplacian,
    })
}

/// A certificate for `Δ` of the requested flavour and order, if any.
pub fn certify(ext: &ExteriorAlgebra, delta: &Matrix, flavor: Flavor, n: usize) -> Result<Option<Certificate>> {
    let alg = ext.calculus().algebra();
    let a = Module::regular(alg);
    let towers = JetTowers::for_flavor(ext, &a, n, flavor)?;
    super::order_at_most(&towers, alg, flavor, n, &a, delta)
}
