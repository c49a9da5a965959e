//! Exact rational linear algebra: dense matrices, canonical subspaces,
//! quotients and maps defined by samples.
//!
//! Matrices act on column vectors, so a map `V -> W` is stored with
//! `rows = dim W` and `cols = dim V`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The ground field.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let v: Q = t
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))?;
    Ok(v)
}

/// Canonical string form: `"p/q"`, or `"p"` for integers.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Q], c: &Q) -> Vec<Q> {
    a.iter().map(|x| x * c).collect()
}

/// `acc += c * v`, skipping work when `c` is zero.
pub fn axpy(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(fmt_q).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    /// Like [`Matrix::from_rows`] but with an explicit column count, so that
    /// an empty row list still has a well-defined shape.
    pub fn from_rows_sized(rows: &[Vec<Q>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length mismatch");
            m.data[r * cols..(r + 1) * cols].clone_from_slice(row);
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vs: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        Self::from_rows_sized(&vs, cols)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Q>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, x) in col.iter().enumerate() {
                m.data[r * m.cols + c] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Q) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn set_col(&mut self, c: usize, v: &[Q]) {
        assert_eq!(v.len(), self.rows);
        for (r, x) in v.iter().enumerate() {
            self.set(r, c, x.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = self.get(r, c);
                if !x.is_zero() {
                    t.set(c, r, x.clone());
                }
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "apply: dimension mismatch");
        let mut out = zero_vec(self.rows);
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = &self.data[r * self.cols + c];
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    /// `self * other`; i.e. apply `other` first.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul: dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(k);
                let base = r * out.cols;
                for (c, b) in orow.iter().enumerate() {
                    if !b.is_zero() {
                        out.data[base + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: vec_add(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: vec_sub(&self.data, &other.data),
        }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: vec_scale(&self.data, c),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&q(-1))
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            m.data[r * m.cols..r * m.cols + self.cols].clone_from_slice(self.row(r));
            m.data[r * m.cols + self.cols..(r + 1) * m.cols].clone_from_slice(other.row(r));
        }
        m
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Kronecker product `self ⊗ other` with index `i * other_dim + j`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if !b.is_zero() {
                            m.set(r1 * other.rows + r2, c1 * other.cols + c2, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows: Vec<Vec<Q>> = idx.iter().map(|&r| self.row(r).to_vec()).collect();
        Matrix::from_rows_sized(&rows, self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<Vec<Q>> = idx.iter().map(|&c| self.col(c)).collect();
        Matrix::from_cols(&cols, self.rows)
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn kernel(&self) -> Subspace {
        kernel(self)
    }

    pub fn image(&self) -> Subspace {
        Subspace::from_vectors(self.rows, &self.col_vecs())
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    /// `{v : self(v) ∈ u}`.
    pub fn preimage(&self, u: &Subspace) -> Result<Subspace> {
        if u.ambient() != self.rows {
            return Err(Error::Dimension(format!(
                "preimage: codomain {} vs subspace ambient {}",
                self.rows,
                u.ambient()
            )));
        }
        let reduced: Vec<Vec<Q>> = self.col_vecs().iter().map(|c| u.reduce(c)).collect();
        Ok(kernel(&Matrix::from_cols(&reduced, self.rows)))
    }

    /// Solves `self(x) = target`, returning a particular solution (if any)
    /// together with the kernel.
    pub fn solve_affine(&self, target: &[Q]) -> Result<(Option<Vec<Q>>, Subspace)> {
        if target.len() != self.rows {
            return Err(Error::Dimension(format!(
                "solve_affine: target has length {}, expected {}",
                target.len(),
                self.rows
            )));
        }
        let aug = self.hstack(&Matrix::from_cols(&[target.to_vec()], self.rows));
        let (r, pivots) = rref(&aug);
        let ker = kernel(self);
        if pivots.last() == Some(&self.cols) {
            return Ok((None, ker));
        }
        let mut x = zero_vec(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok((Some(x), ker))
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut rows = m.row_vecs();
    let pivots = rref_in_place(&mut rows, m.cols);
    rows.truncate(pivots.len());
    let mut out = Matrix::from_rows_sized(&rows, m.cols);
    out.rows = pivots.len();
    // Keep the original shape with zero rows at the bottom.
    let zero_rows = m.rows - pivots.len();
    let r = out.vstack(&Matrix::zeros(zero_rows, m.cols));
    (r, pivots)
}

/// Row-reduces `rows` in place; nonzero rows end up first, in echelon order.
fn rref_in_place(rows: &mut [Vec<Q>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let inv = rows[next][c].recip();
        if !inv.is_one() {
            for x in rows[next][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(next);
        let (prow, tail) = tail.split_first_mut().expect("pivot row");
        for other in head.iter_mut().chain(tail.iter_mut()) {
            let f = other[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in other[c..].iter_mut().zip(&prow[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        next += 1;
    }
    pivots
}

/// Null space of `m` as a subspace of its domain.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, pivots) = rref(m);
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<Q>> = free
        .iter()
        .map(|&f| {
            let mut v = zero_vec(n);
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            v
        })
        .collect();
    Subspace::from_vectors(n, &basis)
}

/// A subspace of `Q^n`, stored by its unique reduced-echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| unit_vec(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors(ambient: usize, vecs: &[Vec<Q>]) -> Self {
        let mut rows: Vec<Vec<Q>> = vecs
            .iter()
            .filter(|v| {
                assert_eq!(v.len(), ambient, "vector length mismatch");
                !is_zero_vec(v)
            })
            .cloned()
            .collect();
        let pivots = rref_in_place(&mut rows, ambient);
        rows.truncate(pivots.len());
        Subspace {
            ambient,
            basis: rows,
            pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis as the rows of a matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows_sized(&self.basis, self.ambient)
    }

    /// Inclusion map `Q^dim -> Q^ambient` (basis vectors as columns).
    pub fn inclusion(&self) -> Matrix {
        Matrix::from_cols(&self.basis, self.ambient)
    }

    /// Canonical representative of `v` modulo this subspace; it vanishes at
    /// every pivot column.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.ambient, "reduce: dimension mismatch");
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if !c.is_zero() {
                axpy(&mut out, &-c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Matrix sending ambient vectors (assumed to lie in the subspace) to
    /// coordinates; it just reads off the pivot entries.
    pub fn coords_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.ambient);
        for (i, &p) in self.pivots.iter().enumerate() {
            m.set(i, p, Q::one());
        }
        m
    }

    pub fn combine(&self, coords: &[Q]) -> Vec<Q> {
        assert_eq!(coords.len(), self.dim());
        let mut out = zero_vec(self.ambient);
        for (c, row) in coords.iter().zip(&self.basis) {
            axpy(&mut out, c, row);
        }
        out
    }

    /// Adds `v` to the span, keeping the basis in reduced echelon form.
    /// Returns `false` if `v` was already contained.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in self.basis.iter_mut() {
            let f = row[p].clone();
            if !f.is_zero() {
                axpy(row, &-f, &r);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        true
    }

    /// Smallest subspace containing `self` and stable under every operator.
    pub fn saturate(&self, ops: &[&Matrix]) -> Subspace {
        let mut out = self.clone();
        let mut queue: Vec<Vec<Q>> = self.basis.clone();
        while let Some(v) = queue.pop() {
            for op in ops {
                let w = op.apply(&v);
                if out.insert(&w) {
                    queue.push(w);
                }
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    fn check_ambient(&self, other: &Subspace, what: &str) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "{what}: ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other, "sum")?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Ok(Subspace::from_vectors(self.ambient, &vs))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other, "intersect")?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let reduced: Vec<Vec<Q>> = self.basis.iter().map(|v| other.reduce(v)).collect();
        let ker = kernel(&Matrix::from_cols(&reduced, self.ambient));
        let vs: Vec<Vec<Q>> = ker.basis.iter().map(|c| self.combine(c)).collect();
        Ok(Subspace::from_vectors(self.ambient, &vs))
    }

    /// Image under a linear map.
    pub fn map(&self, f: &Matrix) -> Subspace {
        let vs: Vec<Vec<Q>> = self.basis.iter().map(|v| f.apply(v)).collect();
        Subspace::from_vectors(f.rows(), &vs)
    }

    /// The subspace expressed in the coordinates of a larger subspace
    /// `outer` that contains it.
    pub fn relative_to(&self, outer: &Subspace) -> Result<Subspace> {
        let vs = self
            .basis
            .iter()
            .map(|v| {
                outer
                    .coords(v)
                    .ok_or_else(|| Error::Dimension("relative_to: not contained".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_vectors(outer.dim(), &vs))
    }
}

/// `ambient / sub`, with the complement spanned by the non-pivot
/// coordinates of `sub` as the chosen section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    sub: Subspace,
    free: Vec<usize>,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Self {
        let free = (0..sub.ambient())
            .filter(|c| !sub.pivots().contains(c))
            .collect();
        Quotient { sub, free }
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient()
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn relations(&self) -> &Subspace {
        &self.sub
    }

    pub fn project(&self, v: &[Q]) -> Vec<Q> {
        let r = self.sub.reduce(v);
        self.free.iter().map(|&c| r[c].clone()).collect()
    }

    pub fn section(&self, w: &[Q]) -> Vec<Q> {
        assert_eq!(w.len(), self.dim(), "section: dimension mismatch");
        let mut v = zero_vec(self.ambient());
        for (x, &c) in w.iter().zip(&self.free) {
            v[c] = x.clone();
        }
        v
    }

    pub fn projection_matrix(&self) -> Matrix {
        let cols: Vec<Vec<Q>> = (0..self.ambient())
            .map(|i| self.project(&unit_vec(self.ambient(), i)))
            .collect();
        Matrix::from_cols(&cols, self.dim())
    }

    pub fn section_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.ambient(), self.dim());
        for (i, &c) in self.free.iter().enumerate() {
            m.set(c, i, Q::one());
        }
        m
    }

    /// Pushes a map defined on the ambient space down to the quotient,
    /// failing if it does not vanish on the relations.
    pub fn descend(&self, f: &Matrix) -> Result<Matrix> {
        if f.cols() != self.ambient() {
            return Err(Error::Dimension(format!(
                "descend: map has {} columns, ambient is {}",
                f.cols(),
                self.ambient()
            )));
        }
        for rel in self.sub.basis() {
            if !is_zero_vec(&f.apply(rel)) {
                return Err(Error::NotWellDefined(
                    "map does not vanish on the relation subspace".into(),
                ));
            }
        }
        Ok(f.select_cols(&self.free))
    }

    /// `project ∘ f`, column by column.
    pub fn projection_of(&self, f: &Matrix) -> Matrix {
        let cols: Vec<Vec<Q>> = f.col_vecs().iter().map(|c| self.project(c)).collect();
        Matrix::from_cols(&cols, self.dim())
    }

    /// Image of an ambient subspace in quotient coordinates.
    pub fn project_subspace(&self, u: &Subspace) -> Subspace {
        let vs: Vec<Vec<Q>> = u.basis().iter().map(|v| self.project(v)).collect();
        Subspace::from_vectors(self.dim(), &vs)
    }
}

/// Builds the linear map determined by `x_k ↦ y_k`. Fails if the samples
/// are inconsistent (the would-be map is not well defined) or if the `x_k`
/// do not span the domain.
pub fn linear_map_from_samples(
    dom: usize,
    cod: usize,
    samples: &[(Vec<Q>, Vec<Q>)],
) -> Result<Matrix> {
    let mut rows: Vec<Vec<Q>> = samples
        .iter()
        .map(|(x, y)| {
            assert_eq!(x.len(), dom, "sample domain length");
            assert_eq!(y.len(), cod, "sample codomain length");
            let mut r = x.clone();
            r.extend(y.iter().cloned());
            r
        })
        .filter(|r| !is_zero_vec(r))
        .collect();
    let pivots = rref_in_place(&mut rows, dom + cod);
    if pivots.iter().any(|&p| p >= dom) {
        return Err(Error::NotWellDefined(
            "samples are inconsistent: some combination of inputs vanishes but its output does not"
                .into(),
        ));
    }
    if pivots.len() != dom {
        return Err(Error::NotWellDefined(format!(
            "samples span only {} of {} domain dimensions",
            pivots.len(),
            dom
        )));
    }
    let mut m = Matrix::zeros(cod, dom);
    for (i, &p) in pivots.iter().enumerate() {
        for c in 0..cod {
            let v = &rows[i][dom + c];
            if !v.is_zero() {
                m.set(c, p, v.clone());
            }
        }
    }
    Ok(m)
}

/// `(-1)^k`
pub fn sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_zero_matrix() {
        let (r, p) = rref(&Matrix::zeros(3, 4));
        assert!(r.is_zero());
        assert!(p.is_empty());
    }

    #[test]
    fn rref_identity() {
        let (r, p) = rref(&Matrix::identity(3));
        assert_eq!(r, Matrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = rref(&Matrix::from_i64(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, Matrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(4).kernel().is_zero());
        assert!(Matrix::zeros(3, 5).kernel().is_full());
        // multiplication by t on k[t]/(t^2) in the basis {1, t}
        let t = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let k = t.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[q(0), q(1)]));
        assert_eq!(k, t.image());
    }

    #[test]
    fn intersection_of_planes() {
        let e = |i| unit_vec(3, i);
        let u = Subspace::from_vectors(3, &[e(0), e(1)]);
        let v = Subspace::from_vectors(3, &[e(1), e(2)]);
        let w = u.intersect(&v).unwrap();
        assert_eq!(w, Subspace::from_vectors(3, &[e(1)]));
        assert_eq!(u.intersect(&Subspace::full(3)).unwrap(), u);
        assert_eq!(u.sum(&v).unwrap().dim(), 3);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let u = Subspace::zero(2);
        let v = Subspace::zero(3);
        assert!(matches!(u.sum(&v), Err(Error::Dimension(_))));
        assert!(Matrix::identity(2).solve_affine(&[q(1)]).is_err());
    }

    #[test]
    fn quotient_section_projection() {
        let u = Subspace::from_vectors(3, &[vec![q(1), q(1), q(0)]]);
        let quo = Quotient::new(u);
        assert_eq!(quo.dim(), 2);
        let pi = quo.projection_matrix();
        let s = quo.section_matrix();
        assert_eq!(pi.mul(&s), Matrix::identity(2));
        assert!(pi.is_surjective());
        assert!(s.is_injective());
        assert!(is_zero_vec(&quo.project(&[q(3), q(3), q(0)])));
    }

    #[test]
    fn affine_solutions() {
        let m = Matrix::from_i64(&[&[1, 1], &[2, 2]]);
        let (x, k) = m.solve_affine(&[q(2), q(4)]).unwrap();
        let x = x.unwrap();
        assert_eq!(m.apply(&x), vec![q(2), q(4)]);
        assert_eq!(k.dim(), 1);
        let (none, _) = m.solve_affine(&[q(1), q(0)]).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn samples_define_maps() {
        let s = vec![
            (vec![q(1), q(1)], vec![q(2)]),
            (vec![q(1), q(-1)], vec![q(0)]),
            (vec![q(2), q(0)], vec![q(2)]),
        ];
        let m = linear_map_from_samples(2, 1, &s).unwrap();
        assert_eq!(m, Matrix::from_i64(&[&[1, 1]]));
        let bad = vec![
            (vec![q(1), q(0)], vec![q(1)]),
            (vec![q(2), q(0)], vec![q(1)]),
            (vec![q(0), q(1)], vec![q(0)]),
        ];
        assert!(matches!(
            linear_map_from_samples(2, 1, &bad),
            Err(Error::NotWellDefined(_))
        ));
        assert!(linear_map_from_samples(2, 1, &s[..1]).is_err());
    }

    #[test]
    fn scalar_strings() {
        assert_eq!(fmt_q(&qf(6, -4)), "-3/2");
        assert_eq!(fmt_q(&q(5)), "5");
        assert_eq!(parse_q(" -3/2 ").unwrap(), qf(-3, 2));
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn preimage_of_line() {
        // projection onto the first coordinate
        let f = Matrix::from_i64(&[&[1, 0, 0]]);
        let line = Subspace::zero(1);
        let p = f.preimage(&line).unwrap();
        assert_eq!(p.dim(), 2);
    }
}
