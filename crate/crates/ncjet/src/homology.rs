//! Free resolutions, `Tor`, projectivity and flatness over
//! finite-dimensional algebras.
//!
//! Everything is phrased for left modules. A right `A`-module is handled as a
//! left `A^op`-module (see [`Module::opposite`]).

use serde::Serialize;

use crate::algebra::{hom_basis, vectorize, Algebra, Module};
use crate::calculus::{omega_u, Calculus};
use crate::error::{Error, Result};
use crate::linalg::{zero_vec, Matrix, Subspace, Q};

/// How each stage of a resolution picks generators for the kernel it covers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generators {
    /// A full `k`-basis (large but canonical).
    Basis,
    /// Basis vectors are kept only when they leave the span of those already
    /// kept.
    #[default]
    Greedy,
}

/// `⋯ → F_1 → F_0 → M → 0` with `F_k = A^{ranks[k]}`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    alg: Algebra,
    module: Module,
    ranks: Vec<usize>,
    /// `augmentation: F_0 → M`
    augmentation: Matrix,
    /// `boundaries[k-1] = δ_k: F_k → F_{k-1}`
    boundaries: Vec<Matrix>,
}

/// Generators of a submodule `sub` of a left module `m`.
fn generators(alg: &Algebra, m: &Module, sub: &Subspace, how: Generators) -> Vec<Vec<Q>> {
    match how {
        Generators::Basis => sub.basis().to_vec(),
        Generators::Greedy => {
            let mut span = Subspace::zero(m.dim());
            let mut out = Vec::new();
            for v in sub.basis() {
                if !span.contains(v) {
                    out.push(v.clone());
                    span = m.left_span(alg, &out);
                    if span.dim() == sub.dim() {
                        break;
                    }
                }
            }
            out
        }
    }
}

/// `A^r → M`, `e_j ↦ g_j`, with the free module laid out block by block.
fn cover(alg: &Algebra, m: &Module, gens: &[Vec<Q>]) -> Matrix {
    let n = alg.dim();
    let mut f = Matrix::zeros(m.dim(), n * gens.len());
    for (j, g) in gens.iter().enumerate() {
        for s in 0..n {
            f.set_col(j * n + s, &m.left()[s].apply(g));
        }
    }
    f
}

pub fn free_resolution(alg: &Algebra, m: &Module, depth: usize, how: Generators) -> Result<FreeResolution> {
    if m.left().len() != alg.dim() {
        return Err(Error::Dimension("module over a different algebra".into()));
    }
    let gens = generators(alg, m, &Subspace::full(m.dim()), how);
    let augmentation = cover(alg, m, &gens);
    let mut ranks = vec![gens.len()];
    let mut boundaries = Vec::new();
    let mut kernel = augmentation.kernel();
    for _ in 0..depth {
        let f = Module::free(alg, *ranks.last().unwrap());
        let gens = generators(alg, &f, &kernel, how);
        let delta = cover(alg, &f, &gens);
        kernel = delta.kernel();
        ranks.push(gens.len());
        boundaries.push(delta);
    }
    let res = FreeResolution {
        alg: alg.clone(),
        module: m.clone(),
        ranks,
        augmentation,
        boundaries,
    };
    if !res.is_exact() {
        return Err(Error::Internal("free resolution is not exact".into()));
    }
    Ok(res)
}

impl FreeResolution {
    pub fn depth(&self) -> usize {
        self.boundaries.len()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn augmentation(&self) -> &Matrix {
        &self.augmentation
    }

    /// `δ_k: F_k → F_{k-1}`, `1 ≤ k ≤ depth`.
    pub fn boundary(&self, k: usize) -> &Matrix {
        &self.boundaries[k - 1]
    }

    /// `F_k`
    pub fn free_module(&self, k: usize) -> Module {
        Module::free(&self.alg, self.ranks[k])
    }

    /// Surjective augmentation, `im δ_1 = ker ε` and `im δ_{k+1} = ker δ_k`
    /// at every computed node except the last.
    pub fn is_exact(&self) -> bool {
        if !self.augmentation.is_surjective() {
            return false;
        }
        let mut prev = self.augmentation.kernel();
        for d in &self.boundaries {
            if d.image() != prev {
                return false;
            }
            prev = d.kernel();
        }
        true
    }

    /// Whether the resolution stops: the last kernel is zero.
    pub fn is_finite(&self) -> bool {
        self.boundaries
            .last()
            .map_or(self.augmentation.is_injective(), |d| d.is_injective())
    }

    /// `δ_k ⊗_B N: N^{r_k} → N^{r_{k-1}}` where `self` resolves a left
    /// `B = A^op`-module and `N` is a left `A`-module.
    ///
    /// The coefficient of generator `i` in `δ_k(e_j)` is an element of `B`,
    /// i.e. of `A` with the same coordinates; it acts on `N` from the left.
    fn tensored(&self, k: usize, n: &Module) -> Matrix {
        let dim = n.dim();
        let ab = self.alg.dim();
        let (rk, rk1) = (self.ranks[k], self.ranks[k - 1]);
        let d = self.boundary(k);
        let mut out = Matrix::zeros(rk1 * dim, rk * dim);
        for j in 0..rk {
            let mut unit = zero_vec(rk * ab);
            unit[j * ab..(j + 1) * ab].clone_from_slice(self.alg.unit());
            let img = d.apply(&unit);
            for i in 0..rk1 {
                let block = n.left_matrix(&img[i * ab..(i + 1) * ab]);
                for r in 0..dim {
                    for c in 0..dim {
                        out.set(i * dim + r, j * dim + c, block.get(r, c).clone());
                    }
                }
            }
        }
        out
    }
}

/// `Tor^A_n(M, N)` with representatives in `F_n ⊗_A N = N^{r_n}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TorGroup {
    pub degree: usize,
    pub dim: usize,
    #[serde(skip)]
    pub representatives: Vec<Vec<Q>>,
}

/// All `Tor_k(M, N)` for `k ≤ n`, with `M` a right `A`-module given as a left
/// `A^op`-module.
pub fn tor_all_op(alg: &Algebra, m_op: &Module, n: &Module, top: usize, how: Generators) -> Result<Vec<TorGroup>> {
    if n.left().len() != alg.dim() {
        return Err(Error::Dimension("N is a module over a different algebra".into()));
    }
    let res = free_resolution(&alg.opposite(), m_op, top + 1, how)?;
    let mut out = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let ambient = res.ranks[k] * n.dim();
        let ker = if k == 0 {
            Subspace::full(ambient)
        } else {
            res.tensored(k, n).kernel()
        };
        let im = res.tensored(k + 1, n).image();
        let mut span = im.clone();
        let mut representatives = Vec::new();
        for v in ker.basis() {
            if span.insert(v) {
                representatives.push(v.clone());
            }
        }
        out.push(TorGroup {
            degree: k,
            dim: ker.dim() - im.dim(),
            representatives,
        });
    }
    Ok(out)
}

/// `Tor^A_n(M, N)` for a module `M` with a right action and a left module `N`.
pub fn tor(alg: &Algebra, m: &Module, n: &Module, degree: usize, how: Generators) -> Result<TorGroup> {
    let mut all = tor_all_op(alg, &m.opposite()?, n, degree, how)?;
    Ok(all.swap_remove(degree))
}

/// `Tor_k(M, N)` for `k ≤ top`.
pub fn tor_all(alg: &Algebra, m: &Module, n: &Module, top: usize, how: Generators) -> Result<Vec<TorGroup>> {
    tor_all_op(alg, &m.opposite()?, n, top, how)
}

/// An `A`-linear right inverse of the free cover `A^r ↠ M`, if one exists.
pub fn is_projective(alg: &Algebra, m: &Module) -> Result<Option<Matrix>> {
    let gens = generators(alg, m, &Subspace::full(m.dim()), Generators::Greedy);
    let eps = cover(alg, m, &gens);
    let f0 = Module::free(alg, gens.len());
    let homs = hom_basis(alg, m, &f0)?;
    if m.dim() == 0 {
        return Ok(Some(Matrix::zeros(f0.dim(), 0)));
    }
    let cols: Vec<Vec<Q>> = homs.iter().map(|h| vectorize(&eps.mul(h))).collect();
    let sys = Matrix::from_cols(&cols, m.dim() * m.dim());
    let (sol, _) = sys.solve_affine(&vectorize(&Matrix::identity(m.dim())))?;
    Ok(sol.map(|c| {
        homs.iter()
            .zip(&c)
            .fold(Matrix::zeros(f0.dim(), m.dim()), |acc, (h, x)| acc.add(&h.scale(x)))
    }))
}

/// Right modules: projectivity of `M_A` over `A`.
pub fn is_projective_right(alg: &Algebra, m: &Module) -> Result<Option<Matrix>> {
    is_projective(&alg.opposite(), &m.opposite()?)
}

/// Flatness of a left module, decided as projectivity (finitely generated
/// modules over a finite-dimensional algebra), together with a `Tor₁` probe
/// against the cyclic right modules `A / e_b A`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Flatness {
    pub flat: bool,
    /// `Tor₁(A/e_bA, M)` for every basis element `e_b`.
    pub tor1_probe: Vec<usize>,
    pub consistent: bool,
}

pub fn flatness(alg: &Algebra, m: &Module) -> Result<Flatness> {
    let flat = is_projective(alg, m)?.is_some();
    let op = alg.opposite();
    let mut tor1_probe = Vec::with_capacity(alg.dim());
    for b in 0..alg.dim() {
        let ideal = Module::regular(&op).left_only().left_span(&op, &[op.basis(b)]);
        let (cyc, _) = Module::cyclic(&op, &ideal)?;
        let t = tor_all_op(alg, &cyc, m, 1, Generators::Greedy)?;
        tor1_probe.push(t[1].dim);
    }
    // projective ⇒ every Tor₁ vanishes; a nonzero probe certifies non-flatness
    let vanishes = tor1_probe.iter().all(|&d| d == 0);
    Ok(Flatness {
        flat,
        consistent: !flat || vanishes,
        tor1_probe,
    })
}

pub fn is_flat(alg: &Algebra, m: &Module) -> Result<bool> {
    Ok(is_projective(alg, m)?.is_some())
}

/// Flatness of a right module.
pub fn flatness_right(alg: &Algebra, m: &Module) -> Result<Flatness> {
    flatness(&alg.opposite(), &m.opposite()?)
}

/// Exactness of `0 → U --f--> V --g--> W → 0`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Exactness {
    pub injective: bool,
    pub middle: bool,
    pub surjective: bool,
    pub failures: Vec<String>,
}

impl Exactness {
    pub fn exact(&self) -> bool {
        self.injective && self.middle && self.surjective
    }
}

pub fn ses_exact(f: &Matrix, g: &Matrix) -> Result<Exactness> {
    if f.rows() != g.cols() {
        return Err(Error::Dimension(format!(
            "codomain of f has dimension {}, domain of g {}",
            f.rows(),
            g.cols()
        )));
    }
    let injective = f.is_injective();
    let middle = g.mul(f).is_zero() && f.image() == g.kernel();
    let surjective = g.is_surjective();
    let mut failures = Vec::new();
    if !injective {
        failures.push(format!("f has a kernel of dimension {}", f.kernel().dim()));
    }
    if !middle {
        failures.push(format!("im f (dim {}) differs from ker g (dim {})", f.rank(), g.kernel().dim()));
    }
    if !surjective {
        failures.push(format!("g misses a complement of dimension {}", g.rows() - g.rank()));
    }
    Ok(Exactness {
        injective,
        middle,
        surjective,
        failures,
    })
}

/// `0 → Ω¹_u → A ⊗ A → A → 0` as matrices (inclusion, multiplication).
pub fn universal_sequence(alg: &Algebra) -> (Matrix, Matrix) {
    (omega_u(alg).inclusion(), crate::calculus::multiplication_map(alg))
}

/// `dim ker(ι_{N_d} ⊗_A id_E: N_d ⊗_A E → Ω¹_u ⊗_A E)`.
pub fn nd_tensor_kernel(calc: &Calculus, e: &Module) -> Result<usize> {
    let alg = calc.algebra();
    let aa = Module::regular(alg).plain_tensor(&Module::regular(alg));
    let ou = omega_u(alg);
    let nd_mod = aa.restrict(calc.nd())?;
    let ou_mod = aa.restrict(&ou)?;
    let inc = ou.coords_matrix().mul(&calc.nd().inclusion());
    let src = crate::algebra::tensor_over_a(alg, &nd_mod, e)?;
    let tgt = crate::algebra::tensor_over_a(alg, &ou_mod, e)?;
    let plain = inc.kron(&Matrix::identity(e.dim()));
    let on_reps = tgt.quot.projection_of(&plain);
    let f = src.quot.descend(&on_reps)?;
    Ok(f.kernel().dim())
}
