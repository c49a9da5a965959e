//! Finite-dimensional unital associative algebras given by structure
//! constants, and their one-sided modules and bimodules.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, q, unit_vec, vec_add, vec_sub, zero_vec, Matrix, Quotient, Subspace, Q};

/// `A` with basis `e_0..e_{n-1}` and `e_i e_j = Σ_k mult[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    name: String,
    labels: Vec<String>,
    unit: Vec<Q>,
    mult: Vec<Vec<Vec<Q>>>,
    lmul: Vec<Matrix>,
    rmul: Vec<Matrix>,
    generators: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AlgebraReport {
    pub associative: bool,
    pub unital: bool,
    pub failures: Vec<String>,
}

impl AlgebraReport {
    pub fn ok(&self) -> bool {
        self.associative && self.unital
    }
}

impl Algebra {
    /// Builds an algebra from its multiplication table. Only shapes are
    /// checked here; the axioms are checked by [`Algebra::validate`].
    pub fn new(name: &str, labels: Vec<String>, unit: Vec<Q>, mult: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let n = labels.len();
        if unit.len() != n {
            return Err(Error::Dimension(format!("unit has {} coordinates, algebra has dim {n}", unit.len())));
        }
        if mult.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::Dimension(format!("multiplication table must be {n}x{n} vectors of length {n}")));
        }
        let lmul = (0..n)
            .map(|i| {
                let cols: Vec<Vec<Q>> = (0..n).map(|j| mult[i][j].clone()).collect();
                Matrix::from_cols(&cols, n)
            })
            .collect();
        let rmul = (0..n)
            .map(|i| {
                let cols: Vec<Vec<Q>> = (0..n).map(|j| mult[j][i].clone()).collect();
                Matrix::from_cols(&cols, n)
            })
            .collect();
        let mut alg = Algebra {
            name: name.to_string(),
            labels,
            unit,
            mult,
            lmul,
            rmul,
            generators: Vec::new(),
        };
        alg.generators = alg.find_generators();
        Ok(alg)
    }

    /// Greedy choice of basis elements generating `A` as an algebra.
    /// Closure under these suffices for every action-stability question.
    fn find_generators(&self) -> Vec<usize> {
        let n = self.dim();
        let mut gens: Vec<usize> = Vec::new();
        let mut sub = Subspace::from_vectors(n, std::slice::from_ref(&self.unit));
        for i in 0..n {
            if sub.is_full() {
                break;
            }
            if sub.contains(&unit_vec(n, i)) {
                continue;
            }
            gens.push(i);
            sub.insert(&unit_vec(n, i));
            let ops: Vec<&Matrix> = gens.iter().map(|&g| &self.lmul[g]).collect();
            sub = sub.saturate(&ops);
        }
        gens
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    pub fn table(&self) -> &[Vec<Vec<Q>>] {
        &self.mult
    }

    /// Indices of basis elements that generate `A` as a unital algebra.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn basis(&self, i: usize) -> Vec<Q> {
        unit_vec(self.dim(), i)
    }

    /// Left multiplication by `e_i`: `x ↦ e_i x`.
    pub fn lmul(&self, i: usize) -> &Matrix {
        &self.lmul[i]
    }

    /// Right multiplication by `e_i`: `x ↦ x e_i`.
    pub fn rmul(&self, i: usize) -> &Matrix {
        &self.rmul[i]
    }

    pub fn left_mult(&self, a: &[Q]) -> Matrix {
        combine(&self.lmul, a, self.dim())
    }

    pub fn right_mult(&self, a: &[Q]) -> Matrix {
        combine(&self.rmul, a, self.dim())
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        assert_eq!(a.len(), self.dim(), "element does not belong to this algebra");
        assert_eq!(b.len(), self.dim(), "element does not belong to this algebra");
        let mut out = zero_vec(self.dim());
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    axpy(&mut out, &(x * y), &self.mult[i][j]);
                }
            }
        }
        out
    }

    /// Checked multiplication for elements whose provenance is unknown.
    pub fn try_mul(&self, a: &[Q], b: &[Q]) -> Result<Vec<Q>> {
        if a.len() != self.dim() || b.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "elements of length {} and {} in an algebra of dim {}",
                a.len(),
                b.len(),
                self.dim()
            )));
        }
        Ok(self.mul(a, b))
    }

    pub fn commutator(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        vec_sub(&self.mul(a, b), &self.mul(b, a))
    }

    pub fn anticommutator(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        vec_add(&self.mul(a, b), &self.mul(b, a))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.mult[i][j] == self.mult[j][i]))
    }

    /// `A^op`, with `e_i ∘ e_j = e_j e_i`.
    pub fn opposite(&self) -> Algebra {
        let n = self.dim();
        let mult = (0..n)
            .map(|i| (0..n).map(|j| self.mult[j][i].clone()).collect())
            .collect();
        Algebra::new(&format!("{}^op", self.name), self.labels.clone(), self.unit.clone(), mult)
            .expect("opposite of a well-shaped table")
    }

    /// Exhaustive check of associativity and the unit on basis elements.
    pub fn validate(&self) -> AlgebraReport {
        let n = self.dim();
        let mut failures = Vec::new();
        let mut associative = true;
        'outer: for i in 0..n {
            for j in 0..n {
                let ij = &self.mult[i][j];
                for k in 0..n {
                    let left = self.mul(ij, &self.basis(k));
                    let right = self.mul(&self.basis(i), &self.mult[j][k]);
                    if left != right {
                        associative = false;
                        failures.push(format!(
                            "({}*{})*{} != {}*({}*{})",
                            self.labels[i], self.labels[j], self.labels[k], self.labels[i], self.labels[j], self.labels[k]
                        ));
                        if failures.len() >= 8 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        let mut unital = true;
        for i in 0..n {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                unital = false;
                failures.push(format!("unit fails on {}", self.labels[i]));
            }
        }
        AlgebraReport {
            associative,
            unital,
            failures,
        }
    }

    /// Pretty-prints an element as a signed combination of basis labels.
    pub fn format_element(&self, v: &[Q]) -> String {
        format_combination(v, &self.labels)
    }

    /// The quaternions over Q, basis `1, i, j, k`.
    pub fn quaternions() -> Algebra {
        // (index, sign) of e_a e_b
        let table = [
            [(0, 1), (1, 1), (2, 1), (3, 1)],
            [(1, 1), (0, -1), (3, 1), (2, -1)],
            [(2, 1), (3, -1), (0, -1), (1, 1)],
            [(3, 1), (2, 1), (1, -1), (0, -1)],
        ];
        let mult = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(k, s)| {
                        let mut v = zero_vec(4);
                        v[k] = q(s);
                        v
                    })
                    .collect()
            })
            .collect();
        Algebra::new("quaternions", labels(&["1", "i", "j", "k"]), unit_vec(4, 0), mult).expect("quaternion table")
    }

    /// Dual numbers `Q[t]/(t^2)`, basis `1, t`.
    pub fn dual_numbers() -> Algebra {
        let e = |i| unit_vec(2, i);
        let mult = vec![vec![e(0), e(1)], vec![e(1), zero_vec(2)]];
        Algebra::new("k[t]/(t^2)", labels(&["1", "t"]), e(0), mult).expect("dual number table")
    }

    /// Upper triangular 2x2 matrices, basis `e11, e12, e22`.
    pub fn upper_triangular() -> Algebra {
        let e = |i| unit_vec(3, i);
        let z = || zero_vec(3);
        let mult = vec![
            vec![e(0), e(1), z()],
            vec![z(), z(), e(1)],
            vec![z(), z(), e(2)],
        ];
        let unit = vec![q(1), q(0), q(1)];
        Algebra::new("upper triangular 2x2", labels(&["e11", "e12", "e22"]), unit, mult).expect("triangular table")
    }
}

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// `Σ a_i m_i`.
pub fn combine(ms: &[Matrix], a: &[Q], n: usize) -> Matrix {
    assert_eq!(ms.len(), a.len(), "coefficient count mismatch");
    let mut out = Matrix::zeros(n, n);
    for (m, c) in ms.iter().zip(a) {
        if c.is_zero() {
            continue;
        }
        out = out.add(&m.scale(c));
    }
    out
}

/// Renders `Σ v_i label_i`, e.g. `-j di + i dj` style strings.
pub fn format_combination(v: &[Q], labels: &[String]) -> String {
    let mut s = String::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let neg = c < &Q::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            s.push_str(l);
        } else if l == "1" {
            s.push_str(&mag.to_string());
        } else {
            s.push_str(&format!("{mag}*{l}"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// A finite-dimensional left module, optionally with a commuting right
/// action (a bimodule). Actions are stored per algebra basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    dim: usize,
    left: Vec<Matrix>,
    right: Option<Vec<Matrix>>,
}

impl Module {
    pub fn new(dim: usize, left: Vec<Matrix>, right: Option<Vec<Matrix>>) -> Result<Self> {
        let shape_ok = |ms: &[Matrix]| ms.iter().all(|m| m.rows() == dim && m.cols() == dim);
        if !shape_ok(&left) || right.as_deref().is_some_and(|r| !shape_ok(r) || r.len() != left.len()) {
            return Err(Error::Dimension(format!("action matrices must be {dim}x{dim}")));
        }
        Ok(Module { dim, left, right })
    }

    /// `A` acting on itself from both sides.
    pub fn regular(alg: &Algebra) -> Module {
        Module {
            dim: alg.dim(),
            left: alg.lmul.clone(),
            right: Some(alg.rmul.clone()),
        }
    }

    /// `A^n` with coordinate-wise actions.
    pub fn free(alg: &Algebra, n: usize) -> Module {
        let a = Module::regular(alg);
        (1..n).fold(if n == 0 { Module::zero(alg) } else { a.clone() }, |acc, _| acc.direct_sum(&a))
    }

    pub fn zero(alg: &Algebra) -> Module {
        let z = Matrix::zeros(0, 0);
        Module {
            dim: 0,
            left: vec![z.clone(); alg.dim()],
            right: Some(vec![z; alg.dim()]),
        }
    }

    /// `A/I` for a left ideal `I`, as a left module.
    pub fn cyclic(alg: &Algebra, ideal: &Subspace) -> Result<(Module, Quotient)> {
        Module::regular(alg).left_only().quotient(ideal)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self) -> &[Matrix] {
        &self.left
    }

    pub fn right(&self) -> Option<&[Matrix]> {
        self.right.as_deref()
    }

    pub fn is_bimodule(&self) -> bool {
        self.right.is_some()
    }

    pub fn left_only(&self) -> Module {
        Module {
            dim: self.dim,
            left: self.left.clone(),
            right: None,
        }
    }

    /// The same bimodule seen over `A^op` (sides swapped). A right module
    /// becomes a left `A^op`-module this way.
    pub fn opposite(&self) -> Result<Module> {
        let right = self
            .right
            .clone()
            .ok_or_else(|| Error::Validation("module has no right action".into()))?;
        Ok(Module {
            dim: self.dim,
            left: right,
            right: Some(self.left.clone()),
        })
    }

    pub fn left_matrix(&self, a: &[Q]) -> Matrix {
        combine(&self.left, a, self.dim)
    }

    pub fn right_matrix(&self, a: &[Q]) -> Option<Matrix> {
        self.right.as_ref().map(|r| combine(r, a, self.dim))
    }

    pub fn act_left(&self, a: &[Q], v: &[Q]) -> Vec<Q> {
        let mut out = zero_vec(self.dim);
        for (m, c) in self.left.iter().zip(a) {
            if !c.is_zero() {
                axpy(&mut out, c, &m.apply(v));
            }
        }
        out
    }

    pub fn act_right(&self, v: &[Q], a: &[Q]) -> Vec<Q> {
        let r = self.right.as_ref().expect("module has no right action");
        let mut out = zero_vec(self.dim);
        for (m, c) in r.iter().zip(a) {
            if !c.is_zero() {
                axpy(&mut out, c, &m.apply(v));
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        let left = self
            .left
            .iter()
            .zip(&other.left)
            .map(|(a, b)| Matrix::block_diag(&[a, b]))
            .collect();
        let right = match (&self.right, &other.right) {
            (Some(r1), Some(r2)) => Some(r1.iter().zip(r2).map(|(a, b)| Matrix::block_diag(&[a, b])).collect()),
            _ => None,
        };
        Module {
            dim: self.dim + other.dim,
            left,
            right,
        }
    }

    /// Checks the module axioms on basis elements and returns failures.
    pub fn validate(&self, alg: &Algebra) -> Vec<String> {
        let n = alg.dim();
        let mut failures = Vec::new();
        if self.left.len() != n {
            failures.push(format!("expected {n} left action matrices, got {}", self.left.len()));
            return failures;
        }
        let id = Matrix::identity(self.dim);
        if self.left_matrix(alg.unit()) != id {
            failures.push("unit does not act as the identity on the left".into());
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.left[i].mul(&self.left[j]);
                if lhs != self.left_matrix(&alg.mult[i][j]) {
                    failures.push(format!("L({})L({}) != L({}{})", alg.labels[i], alg.labels[j], alg.labels[i], alg.labels[j]));
                }
            }
        }
        if let Some(r) = &self.right {
            if r.len() != n {
                failures.push(format!("expected {n} right action matrices, got {}", r.len()));
                return failures;
            }
            if combine(r, alg.unit(), self.dim) != id {
                failures.push("unit does not act as the identity on the right".into());
            }
            for i in 0..n {
                for j in 0..n {
                    if r[j].mul(&r[i]) != combine(r, &alg.mult[i][j], self.dim) {
                        failures.push(format!("R({})R({}) != R({}{})", alg.labels[j], alg.labels[i], alg.labels[i], alg.labels[j]));
                    }
                    if self.left[i].mul(&r[j]) != r[j].mul(&self.left[i]) {
                        failures.push(format!("L({}) and R({}) do not commute", alg.labels[i], alg.labels[j]));
                    }
                }
            }
        }
        failures
    }

    fn action_ops<'a>(&'a self, alg: &Algebra) -> Vec<&'a Matrix> {
        let mut ops: Vec<&Matrix> = alg.generators().iter().map(|&g| &self.left[g]).collect();
        if let Some(r) = &self.right {
            ops.extend(alg.generators().iter().map(|&g| &r[g]));
        }
        ops
    }

    pub fn is_submodule(&self, alg: &Algebra, sub: &Subspace) -> bool {
        self.action_ops(alg)
            .iter()
            .all(|op| sub.basis().iter().all(|v| sub.contains(&op.apply(v))))
    }

    /// Smallest sub(bi)module containing the generators.
    pub fn closure(&self, alg: &Algebra, gens: &[Vec<Q>]) -> Subspace {
        Subspace::from_vectors(self.dim, gens).saturate(&self.action_ops(alg))
    }

    /// Left `A`-span of the generators (ignores any right action).
    pub fn left_span(&self, alg: &Algebra, gens: &[Vec<Q>]) -> Subspace {
        let ops: Vec<&Matrix> = alg.generators().iter().map(|&g| &self.left[g]).collect();
        Subspace::from_vectors(self.dim, gens).saturate(&ops)
    }

    /// The submodule `sub` with the induced actions, in echelon coordinates.
    pub fn restrict(&self, sub: &Subspace) -> Result<Module> {
        if sub.ambient() != self.dim {
            return Err(Error::Dimension("restrict: ambient mismatch".into()));
        }
        let inc = sub.inclusion();
        let coords = sub.coords_matrix();
        let conj = |m: &Matrix| -> Result<Matrix> {
            let img = m.mul(&inc);
            for c in 0..img.cols() {
                if !sub.contains(&img.col(c)) {
                    return Err(Error::Validation("subspace is not stable under the action".into()));
                }
            }
            Ok(coords.mul(&img))
        };
        let left = self.left.iter().map(conj).collect::<Result<Vec<_>>>()?;
        let right = match &self.right {
            Some(r) => Some(r.iter().map(conj).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        Ok(Module {
            dim: sub.dim(),
            left,
            right,
        })
    }

    pub fn quotient(&self, sub: &Subspace) -> Result<(Module, Quotient)> {
        if sub.ambient() != self.dim {
            return Err(Error::Dimension("quotient: ambient mismatch".into()));
        }
        let quo = Quotient::new(sub.clone());
        let s = quo.section_matrix();
        let push = |m: &Matrix| -> Result<Matrix> {
            if sub.basis().iter().any(|r| !sub.contains(&m.apply(r))) {
                return Err(Error::Validation("subspace is not stable under the action".into()));
            }
            let img = m.mul(&s);
            let cols: Vec<Vec<Q>> = img.col_vecs().iter().map(|c| quo.project(c)).collect();
            Ok(Matrix::from_cols(&cols, quo.dim()))
        };
        let left = self.left.iter().map(push).collect::<Result<Vec<_>>>()?;
        let right = match &self.right {
            Some(r) => Some(r.iter().map(push).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        Ok((
            Module {
                dim: quo.dim(),
                left,
                right,
            },
            quo,
        ))
    }

    /// The bimodule `(A ⊗ A)`-style tensor `self ⊗_k other` with left action on
    /// the first factor and right action on the second.
    pub fn plain_tensor(&self, other: &Module) -> Module {
        let id_r = Matrix::identity(other.dim);
        let id_l = Matrix::identity(self.dim);
        let left = self.left.iter().map(|m| m.kron(&id_r)).collect();
        let right = other.right.as_ref().map(|r| r.iter().map(|m| id_l.kron(m)).collect());
        Module {
            dim: self.dim * other.dim,
            left,
            right,
        }
    }
}

/// Whether `f: dom -> cod` intertwines the left actions (and the right ones
/// when `bilinear` is set).
pub fn is_module_map(alg: &Algebra, f: &Matrix, dom: &Module, cod: &Module, bilinear: bool) -> bool {
    if f.cols() != dom.dim || f.rows() != cod.dim {
        return false;
    }
    let left_ok = (0..alg.dim()).all(|i| f.mul(&dom.left[i]) == cod.left[i].mul(f));
    if !left_ok {
        return false;
    }
    if bilinear {
        match (&dom.right, &cod.right) {
            (Some(r1), Some(r2)) => (0..alg.dim()).all(|i| f.mul(&r1[i]) == r2[i].mul(f)),
            _ => false,
        }
    } else {
        true
    }
}

/// A checked module homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub matrix: Matrix,
    pub bilinear: bool,
}

impl ModuleMap {
    pub fn new(alg: &Algebra, matrix: Matrix, dom: &Module, cod: &Module, bilinear: bool) -> Result<Self> {
        if !is_module_map(alg, &matrix, dom, cod, bilinear) {
            return Err(Error::Validation("map does not intertwine the actions".into()));
        }
        Ok(ModuleMap { matrix, bilinear })
    }
}

/// Row-major vectorisation index of entry `(r, c)` of a `rows x cols` map.
fn vidx(r: usize, c: usize, cols: usize) -> usize {
    r * cols + c
}

pub fn unvec(v: &[Q], rows: usize, cols: usize) -> Matrix {
    let vs: Vec<Vec<Q>> = v.chunks(cols.max(1)).take(rows).map(|c| c.to_vec()).collect();
    if cols == 0 {
        return Matrix::zeros(rows, 0);
    }
    Matrix::from_rows_sized(&vs, cols)
}

pub fn vectorize(m: &Matrix) -> Vec<Q> {
    m.entries().to_vec()
}

/// Linear equations (one row per equation, row-major unknowns of size
/// `cod.dim x dom.dim`) expressing left `A`-linearity.
pub fn linearity_equations(alg: &Algebra, dom: &Module, cod: &Module) -> Vec<Vec<Q>> {
    let (m, n) = (dom.dim, cod.dim);
    let mut eqs = Vec::new();
    for &g in alg.generators() {
        let lm = &dom.left[g];
        let ln = &cod.left[g];
        for r in 0..n {
            for c in 0..m {
                // (T L_M)_{rc} - (L_N T)_{rc}
                let mut row = zero_vec(n * m);
                for k in 0..m {
                    let x = lm.get(k, c);
                    if !x.is_zero() {
                        row[vidx(r, k, m)] += x;
                    }
                }
                for k in 0..n {
                    let x = ln.get(r, k);
                    if !x.is_zero() {
                        row[vidx(k, c, m)] -= x;
                    }
                }
                if !is_zero_vec(&row) {
                    eqs.push(row);
                }
            }
        }
    }
    eqs
}

/// `Hom_A(M, N)` as a subspace of vectorised `N.dim x M.dim` matrices.
pub fn hom_a(alg: &Algebra, m: &Module, n: &Module) -> Result<Subspace> {
    if m.left.len() != alg.dim() || n.left.len() != alg.dim() {
        return Err(Error::Dimension("hom_a: modules over a different algebra".into()));
    }
    let eqs = linearity_equations(alg, m, n);
    let unknowns = m.dim * n.dim;
    Ok(Matrix::from_rows_sized(&eqs, unknowns).kernel())
}

pub fn hom_basis(alg: &Algebra, m: &Module, n: &Module) -> Result<Vec<Matrix>> {
    Ok(hom_a(alg, m, n)?
        .basis()
        .iter()
        .map(|v| unvec(v, n.dim, m.dim))
        .collect())
}

/// `M ⊗_A N`, realised as a quotient of the plain tensor `M ⊗ N`
/// (index `p * dim N + q`).
#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub quot: Quotient,
    pub module: Module,
    pub m_dim: usize,
    pub n_dim: usize,
}

impl TensorSpace {
    pub fn dim(&self) -> usize {
        self.quot.dim()
    }

    /// Class of `m ⊗ n`.
    pub fn elem(&self, m: &[Q], n: &[Q]) -> Vec<Q> {
        self.quot.project(&kron_vec(m, n))
    }
}

pub fn kron_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

pub fn tensor_over_a(alg: &Algebra, m: &Module, n: &Module) -> Result<TensorSpace> {
    let mr = m
        .right
        .as_ref()
        .ok_or_else(|| Error::Validation("first factor needs a right action".into()))?;
    if mr.len() != alg.dim() || n.left.len() != alg.dim() {
        return Err(Error::Dimension("tensor_over_a: modules over a different algebra".into()));
    }
    let (dm, dn) = (m.dim, n.dim);
    let mut rels = Subspace::zero(dm * dn);
    for &g in alg.generators() {
        for p in 0..dm {
            let mp = unit_vec(dm, p);
            let ma = mr[g].apply(&mp);
            for qi in 0..dn {
                let nq = unit_vec(dn, qi);
                let an = n.left[g].apply(&nq);
                rels.insert(&vec_sub(&kron_vec(&ma, &nq), &kron_vec(&mp, &an)));
            }
        }
    }
    let plain = m.plain_tensor(n);
    let (module, quot) = plain.quotient(&rels)?;
    Ok(TensorSpace {
        quot,
        module,
        m_dim: dm,
        n_dim: dn,
    })
}

/// Smallest sub-bimodule of `m` containing `gens`.
pub fn sub_bimodule_closure(alg: &Algebra, m: &Module, gens: &[Vec<Q>]) -> Subspace {
    m.closure(alg, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(alg: &Algebra, i: usize) -> Vec<Q> {
        alg.basis(i)
    }

    #[test]
    fn shipped_tables_are_valid() {
        for alg in [Algebra::quaternions(), Algebra::dual_numbers(), Algebra::upper_triangular()] {
            assert!(alg.validate().ok(), "{}", alg.name());
        }
    }

    #[test]
    fn broken_quaternions_report_a_witness() {
        let h = Algebra::quaternions();
        let mut mult = h.table().to_vec();
        mult[1][2] = vec![q(0), q(0), q(0), q(-1)];
        let bad = Algebra::new("bad", h.labels().to_vec(), h.unit().to_vec(), mult).unwrap();
        let rep = bad.validate();
        assert!(!rep.associative);
        assert!(!rep.failures.is_empty());
    }

    #[test]
    fn quaternion_products() {
        let h = Algebra::quaternions();
        assert_eq!(h.mul(&e(&h, 1), &e(&h, 2)), e(&h, 3));
        let a = vec![q(1), q(2), q(-3), q(5)];
        assert!(is_zero_vec(&h.commutator(&a, &a)));
        // ij = k and ji = -k
        assert!(is_zero_vec(&h.anticommutator(&e(&h, 1), &e(&h, 2))));
        assert_eq!(h.generators(), &[1, 2]);
        assert!(h.try_mul(&[q(1)], &e(&h, 0)).is_err());
    }

    #[test]
    fn opposite_reverses_products() {
        let h = Algebra::quaternions();
        let op = h.opposite();
        assert_eq!(op.mul(&e(&h, 1), &e(&h, 2)), h.mul(&e(&h, 2), &e(&h, 1)));
        assert!(op.validate().ok());
    }

    #[test]
    fn hom_from_regular_is_evaluation() {
        let h = Algebra::quaternions();
        let a = Module::regular(&h).left_only();
        // right multiplications
        assert_eq!(hom_a(&h, &a, &a).unwrap().dim(), 4);
        let m = Module::free(&h, 2);
        assert_eq!(hom_a(&h, &a, &m).unwrap().dim(), m.dim());
    }

    #[test]
    fn tensor_unit_law_and_free_factors() {
        for alg in [Algebra::quaternions(), Algebra::dual_numbers(), Algebra::upper_triangular()] {
            let a = Module::regular(&alg);
            let m = Module::free(&alg, 2);
            let t = tensor_over_a(&alg, &a, &m).unwrap();
            assert_eq!(t.dim(), m.dim());
            // the iso is m ↦ [1 ⊗ m]
            let iso = Matrix::from_cols(
                &(0..m.dim()).map(|i| t.elem(alg.unit(), &unit_vec(m.dim(), i))).collect::<Vec<_>>(),
                t.dim(),
            );
            assert!(iso.is_injective());
        }
    }

    #[test]
    fn dual_numbers_residue_field_tensor() {
        let k2 = Algebra::dual_numbers();
        let t_ideal = Subspace::from_vectors(2, &[e(&k2, 1)]);
        let (k0, _) = Module::regular(&k2).quotient(&t_ideal).unwrap();
        assert_eq!(k0.dim(), 1);
        assert_eq!(tensor_over_a(&k2, &k0, &k0).unwrap().dim(), 1);
    }

    #[test]
    fn closure_is_idempotent() {
        let h = Algebra::quaternions();
        let a = Module::regular(&h);
        let aa = a.plain_tensor(&a);
        assert!(aa.closure(&h, &[]).is_zero());
        let g = vec![kron_vec(&e(&h, 1), &e(&h, 1))];
        let c = aa.closure(&h, &g);
        assert_eq!(aa.closure(&h, c.basis()), c);
        assert!(aa.is_submodule(&h, &c));
    }

    #[test]
    fn submodule_restriction_rejects_unstable_subspaces() {
        let h = Algebra::quaternions();
        let a = Module::regular(&h);
        let line = Subspace::from_vectors(4, &[e(&h, 1)]);
        assert!(a.restrict(&line).is_err());
        assert!(a.quotient(&line).is_err());
    }

    #[test]
    fn module_map_constructor_checks_intertwining() {
        let h = Algebra::quaternions();
        let a = Module::regular(&h);
        assert!(ModuleMap::new(&h, h.right_mult(&e(&h, 1)), &a.left_only(), &a.left_only(), false).is_ok());
        assert!(ModuleMap::new(&h, h.left_mult(&e(&h, 1)), &a.left_only(), &a.left_only(), false).is_err());
    }

    #[test]
    fn formatting() {
        let h = Algebra::quaternions();
        assert_eq!(h.format_element(&[q(0), q(1), q(-1), q(2)]), "i - j + 2*k");
        assert_eq!(h.format_element(&zero_vec(4)), "0");
    }
}
