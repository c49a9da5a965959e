//! Linear differential operators: certified orders, operator spaces,
//! connections and composition.

pub mod quaternion;

use serde::Serialize;

use crate::algebra::{hom_basis, is_module_map, vectorize, Algebra, Module};
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::exterior::ExteriorAlgebra;
use crate::jets::{hol_map, l_mn, Flavor, Holonomic, Jet1, JetSpace, JetTowers};
use crate::linalg::{unit_vec, Matrix, Subspace, Q};

/// Evidence that an operator has order at most `order`: an `A`-linear
/// `lift` from the jet module with `lift ∘ j^order = Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub order: usize,
    pub flavor: Flavor,
    #[serde(skip)]
    pub lift: Matrix,
    /// Dimension of the space of other lifts (lifts differ by `A`-linear
    /// maps killing `j^order(E)`).
    pub freedom: usize,
}

impl Certificate {
    /// Re-checks `A`-linearity and `lift ∘ j = Δ` against a jet space.
    pub fn verify(&self, alg: &Algebra, sp: &JetSpace, f: &Module, delta: &Matrix) -> bool {
        sp.order == self.order
            && is_module_map(alg, &self.lift, &sp.carrier, f, false)
            && self.lift.mul(&sp.prolongation) == *delta
    }

    /// The certificate for a smaller jet module `ι: J' → J`, `lift ∘ ι`.
    pub fn restrict(&self, along: &Matrix, flavor: Flavor) -> Certificate {
        Certificate {
            order: self.order,
            flavor,
            lift: self.lift.mul(along),
            freedom: self.freedom,
        }
    }
}

/// A `k`-linear map `E → F`, with an order certificate once classified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    pub matrix: Matrix,
    pub certificate: Option<Certificate>,
}

impl DiffOp {
    pub fn new(matrix: Matrix) -> DiffOp {
        DiffOp {
            matrix,
            certificate: None,
        }
    }
}

fn check_shape(sp: &JetSpace, f: &Module, delta: &Matrix) -> Result<()> {
    if delta.cols() != sp.prolongation.cols() || delta.rows() != f.dim() {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, expected {}x{}",
            delta.rows(),
            delta.cols(),
            f.dim(),
            sp.prolongation.cols()
        )));
    }
    Ok(())
}

/// Solves `{T A-linear, T ∘ j = Δ}` on one jet space.
pub fn lift_through(alg: &Algebra, sp: &JetSpace, f: &Module, delta: &Matrix) -> Result<Option<Certificate>> {
    check_shape(sp, f, delta)?;
    let homs = hom_basis(alg, &sp.carrier, f)?;
    let cols: Vec<Vec<Q>> = homs.iter().map(|h| vectorize(&h.mul(&sp.prolongation))).collect();
    let sys = Matrix::from_cols(&cols, delta.rows() * delta.cols());
    let (sol, ker) = sys.solve_affine(&vectorize(delta))?;
    Ok(sol.map(|c| Certificate {
        order: sp.order,
        flavor: sp.flavor,
        lift: combine(&homs, &c, f.dim(), sp.carrier.dim()),
        freedom: ker.dim(),
    }))
}

fn combine(ms: &[Matrix], c: &[Q], rows: usize, cols: usize) -> Matrix {
    ms.iter()
        .zip(c)
        .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
        .fold(Matrix::zeros(rows, cols), |acc, (m, x)| acc.add(&m.scale(x)))
}

pub fn order_at_most(
    towers: &JetTowers,
    alg: &Algebra,
    flavor: Flavor,
    n: usize,
    f: &Module,
    delta: &Matrix,
) -> Result<Option<Certificate>> {
    lift_through(alg, &towers.space(flavor, n)?, f, delta)
}

/// Result of scanning orders `0..=max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderScan {
    /// The minimal order, if it is at most `max`.
    pub order: Option<usize>,
    pub max: usize,
    /// The jet tower became constant below `max`, so no higher order can
    /// succeed either.
    pub stabilized: bool,
    pub certificate: Option<Certificate>,
}

pub fn order(towers: &JetTowers, alg: &Algebra, flavor: Flavor, f: &Module, delta: &Matrix) -> Result<OrderScan> {
    let max = towers.order();
    let mut prev: Option<JetSpace> = None;
    for n in 0..=max {
        let sp = towers.space(flavor, n)?;
        if let Some(cert) = lift_through(alg, &sp, f, delta)? {
            return Ok(OrderScan {
                order: Some(n),
                max,
                stabilized: false,
                certificate: Some(cert),
            });
        }
        // an isomorphic projection J^n → J^{n-1} compatible with j means
        // Diff^n = Diff^{n-1}
        if let Some(p) = &prev {
            let pi = &sp.projections[sp.projections.len() - 1];
            if sp.carrier.dim() == p.carrier.dim() && pi.is_injective() && sp.projections.len() == 1 {
                return Ok(OrderScan {
                    order: None,
                    max,
                    stabilized: true,
                    certificate: None,
                });
            }
        }
        prev = Some(sp);
    }
    Ok(OrderScan {
        order: None,
        max,
        stabilized: false,
        certificate: None,
    })
}

/// `Δ̃: A ⊗ E → F`, `a ⊗ e ↦ a·Δ(e)`, on representatives.
pub fn universal_lift(alg: &Algebra, e: &Module, f: &Module, delta: &Matrix) -> Matrix {
    let (n, ed) = (alg.dim(), e.dim());
    let mut m = Matrix::zeros(f.dim(), n * ed);
    for a in 0..n {
        for x in 0..ed {
            m.set_col(a * ed + x, &f.left()[a].apply(&delta.col(x)));
        }
    }
    m
}

/// The first-order criterion: `Δ̃` vanishes on `N_d(E)`.
pub fn first_order_criterion(calc: &Calculus, e: &Module, f: &Module, delta: &Matrix) -> Result<bool> {
    let jx = calc.jet1(e)?;
    let ut = universal_lift(calc.algebra(), e, f, delta);
    Ok(ut.mul(&jx.quotient().relations().inclusion()).is_zero())
}

/// `Diff^n(E, F)` as a subspace of vectorised `F.dim x E.dim` matrices.
#[derive(Clone, Debug)]
pub struct DiffSpace {
    pub order: usize,
    pub span: Subspace,
    /// `dim Hom_A(J^nE, F)`
    pub hom_dim: usize,
    pub rows: usize,
    pub cols: usize,
}

impl DiffSpace {
    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn basis(&self) -> Vec<Matrix> {
        self.span
            .basis()
            .iter()
            .map(|v| crate::algebra::unvec(v, self.rows, self.cols))
            .collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.rows() == self.rows && m.cols() == self.cols && self.span.contains(&vectorize(m))
    }
}

pub fn diff_space(towers: &JetTowers, alg: &Algebra, flavor: Flavor, n: usize, f: &Module) -> Result<DiffSpace> {
    let sp = towers.space(flavor, n)?;
    let homs = hom_basis(alg, &sp.carrier, f)?;
    let vecs: Vec<Vec<Q>> = homs.iter().map(|h| vectorize(&h.mul(&sp.prolongation))).collect();
    let (rows, cols) = (f.dim(), sp.prolongation.cols());
    Ok(DiffSpace {
        order: n,
        span: Subspace::from_vectors(rows * cols, &vecs),
        hom_dim: homs.len(),
        rows,
        cols,
    })
}

/// Dimensions of `Diff^k(E, F)` and `Hom_A(J^kE, F)` for `k ≤ n`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OperatorSpace {
    pub flavor: Flavor,
    pub dims: Vec<usize>,
    pub hom_dims: Vec<usize>,
}

pub fn operator_space(towers: &JetTowers, alg: &Algebra, flavor: Flavor, f: &Module) -> Result<OperatorSpace> {
    let mut dims = Vec::new();
    let mut hom_dims = Vec::new();
    for k in 0..=towers.order() {
        let s = diff_space(towers, alg, flavor, k, f)?;
        dims.push(s.dim());
        hom_dims.push(s.hom_dim);
    }
    Ok(OperatorSpace {
        flavor,
        dims,
        hom_dims,
    })
}

/// `∇(f·e) = df ⊗ e + f·∇e` on basis pairs.
pub fn is_connection(calc: &Calculus, jx: &Jet1, nabla: &Matrix) -> bool {
    let alg = calc.algebra();
    let e = jx.base();
    if nabla.rows() != jx.omega_dim() || nabla.cols() != e.dim() {
        return false;
    }
    let om = jx.omega_module();
    (0..alg.dim()).all(|a| {
        let fa = alg.basis(a);
        let df = calc.da(&fa);
        (0..e.dim()).all(|x| {
            let ev = unit_vec(e.dim(), x);
            let lhs = nabla.apply(&e.act_left(&fa, &ev));
            let rhs = crate::linalg::vec_add(&jx.omega_tensor(calc.j1a(), &df, &ev), &om.act_left(&fa, &nabla.apply(&ev)));
            lhs == rhs
        })
    })
}

/// `∇ = s ∘ j¹` for a left splitting `s: J¹E → Ω¹(E)`.
pub fn connection_from_splitting(jx: &Jet1, s: &Matrix) -> Matrix {
    s.mul(&jx.prolong())
}

/// `s = ρ + ∇ ∘ π^{1,0}`.
pub fn splitting_from_connection(jx: &Jet1, nabla: &Matrix) -> Matrix {
    jx.rho().add(&nabla.mul(&jx.projection()))
}

/// Left-linear splittings of `0 → Ω¹(E) → J¹E → E → 0`, i.e. connections.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Connections {
    pub exists: bool,
    /// Dimension of the affine space (that of `Hom_A(E, Ω¹(E))`).
    pub dim: usize,
    #[serde(skip)]
    pub sample: Option<Matrix>,
    #[serde(skip)]
    pub splitting: Option<Matrix>,
}

pub fn connections(calc: &Calculus, e: &Module) -> Result<Connections> {
    let alg = calc.algebra();
    let jx = calc.jet1(e)?;
    let om = jx.omega_module();
    let homs = hom_basis(alg, jx.module(), om)?;
    let iota = jx.inclusion();
    let cols: Vec<Vec<Q>> = homs.iter().map(|h| vectorize(&h.mul(&iota))).collect();
    let od = jx.omega_dim();
    let sys = Matrix::from_cols(&cols, od * od);
    let (sol, _) = sys.solve_affine(&vectorize(&Matrix::identity(od)))?;
    let dim = hom_basis(alg, e, om)?.len();
    match sol {
        None => Ok(Connections {
            exists: false,
            dim: 0,
            sample: None,
            splitting: None,
        }),
        Some(c) => {
            let s = combine(&homs, &c, od, jx.dim());
            let nabla = connection_from_splitting(&jx, &s);
            if !is_connection(calc, &jx, &nabla) || splitting_from_connection(&jx, &nabla) != s {
                return Err(Error::Internal("connection/splitting correspondence failed".into()));
            }
            Ok(Connections {
                exists: true,
                dim,
                sample: Some(nabla),
                splitting: Some(s),
            })
        }
    }
}

/// `Δ₂ ∘ Δ₁` with the lift `Δ̃₂ ∘ J^m(Δ̃₁) ∘ l^{m,n}`; both certificates
/// must be holonomic.
pub fn compose(ext: &ExteriorAlgebra, e: &Module, f: &Module, g: &Module, d1: &DiffOp, d2: &DiffOp) -> Result<DiffOp> {
    let alg = ext.calculus().algebra();
    let (c1, c2) = match (&d1.certificate, &d2.certificate) {
        (Some(a), Some(b)) if a.flavor == Flavor::Holonomic && b.flavor == Flavor::Holonomic => (a, b),
        _ => return Err(Error::Validation("composition needs holonomic certificates".into())),
    };
    if d1.matrix.cols() != e.dim() || d1.matrix.rows() != f.dim() || d2.matrix.cols() != f.dim() || d2.matrix.rows() != g.dim() {
        return Err(Error::Dimension("operators do not compose".into()));
    }
    let (n, m) = (c1.order, c2.order);
    let hol_e = Holonomic::new(ext, e, m + n)?;
    let over = Holonomic::new(ext, hol_e.module(n), m)?;
    let hol_f = Holonomic::new(ext, f, m)?;
    let jm = hol_map(&over, &hol_f, &c1.lift, m)?;
    let lift = c2.lift.mul(&jm).mul(&l_mn(&hol_e, &over, m, n)?);
    let matrix = d2.matrix.mul(&d1.matrix);
    let cert = Certificate {
        order: m + n,
        flavor: Flavor::Holonomic,
        lift,
        freedom: 0,
    };
    if cert.lift.mul(hol_e.prolongation(m + n)) != matrix || !is_module_map(alg, &cert.lift, hol_e.module(m + n), g, false) {
        return Err(Error::Internal("composite lift failed verification".into()));
    }
    Ok(DiffOp {
        matrix,
        certificate: Some(cert),
    })
}
