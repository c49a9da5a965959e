//! Shared property checks over a calculus. Each check runs exhaustively on
//! basis elements and returns the first failure as a message.
#![allow(dead_code)]

use ncjet::algebra::{is_module_map, Algebra, Module};
use ncjet::calculus::{omega_u, Calculus};
use ncjet::diffops::{
    compose, connection_from_splitting, connections, diff_space, first_order_criterion, is_connection, lift_through,
    order, splitting_from_connection, DiffOp,
};
use ncjet::exterior::maximal_exterior;
use ncjet::homology::{is_projective, tor_all_op, Generators};
use ncjet::jets::semiholonomic::{dhi_kernels, equalizer};
use ncjet::jets::{Flavor, Holonomic, JetTowers, Nonholonomic, Semiholonomic};
use ncjet::linalg::{q, unit_vec, vec_sub, Matrix, Q};
use proptest::prelude::*;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T>(r: ncjet::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    Quaternions,
    DualNumbers,
    UpperTriangular,
}

impl Base {
    pub fn algebra(self) -> Algebra {
        match self {
            Base::Quaternions => Algebra::quaternions(),
            Base::DualNumbers => Algebra::dual_numbers(),
            Base::UpperTriangular => Algebra::upper_triangular(),
        }
    }
}

/// The quotient of the universal calculus by the sub-bimodule generated by
/// integer combinations of a basis of `Ω¹_u`.
pub fn quotient_calculus(base: Base, gens: &[Vec<i64>]) -> Calculus {
    let alg = base.algebra();
    let ou = omega_u(&alg);
    let n2 = alg.dim() * alg.dim();
    let vs: Vec<Vec<Q>> = gens
        .iter()
        .map(|c| {
            let mut v = vec![Q::default(); n2];
            for (b, &k) in ou.basis().iter().zip(c) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += q(k) * y;
                }
            }
            v
        })
        .collect();
    Calculus::quotient(&alg, &vs).expect("elements of Ω¹_u generate a valid calculus")
}

fn base() -> impl Strategy<Value = Base> {
    prop_oneof![Just(Base::Quaternions), Just(Base::DualNumbers), Just(Base::UpperTriangular)]
}

fn width(b: Base) -> usize {
    let n = b.algebra().dim();
    n * n - n
}

/// Up to two generators of `N_d` with small integer coordinates.
pub fn calculus() -> impl Strategy<Value = (Base, Vec<Vec<i64>>)> {
    base().prop_flat_map(|b| {
        let gen = prop::collection::vec(-2i64..=2, width(b));
        (Just(b), prop::collection::vec(gen, 0..=2))
    })
}

pub fn build((b, gens): &(Base, Vec<Vec<i64>>)) -> Calculus {
    quotient_calculus(*b, gens)
}

/// A fixed family used where random sampling is not wanted.
pub fn family() -> Vec<(String, Calculus)> {
    let mut out = vec![
        ("ℍ universal".to_string(), Calculus::universal(&Algebra::quaternions()).unwrap()),
        ("ℍ Ω¹_{i,j}".to_string(), Calculus::quaternion_ij()),
        ("k[t]/(t²) universal".to_string(), Calculus::universal(&Algebra::dual_numbers()).unwrap()),
        ("k[t]/(t²) infinitesimal".to_string(), Calculus::infinitesimal()),
        ("upper triangular universal".to_string(), Calculus::universal(&Algebra::upper_triangular()).unwrap()),
    ];
    out.push(("ℍ quotient".into(), quotient_calculus(Base::Quaternions, &[vec![1, 0, -1, 0, 2, 0, 0, 0, 0, 1, 0, 0]])));
    out.push(("upper triangular quotient".into(), quotient_calculus(Base::UpperTriangular, &[vec![0, 1, 0, 0, 0, 0]])));
    out.push(("upper triangular quotient 2".into(), quotient_calculus(Base::UpperTriangular, &[vec![1, 0, 0, 0, 0, 1]])));
    out
}

/// `A`, `A²`, `Ω¹` and the cyclic modules `A/Ae_b`.
pub fn modules(calc: &Calculus) -> Vec<Module> {
    let alg = calc.algebra();
    let mut out = vec![Module::regular(alg), Module::free(alg, 2), calc.omega1().clone()];
    for b in 0..alg.dim() {
        let ideal = Module::regular(alg).left_only().left_span(alg, &[alg.basis(b)]);
        let (m, _) = Module::cyclic(alg, &ideal).unwrap();
        if m.dim() > 0 && m.dim() < alg.dim() {
            out.push(m);
        }
    }
    out
}

/// (a) `0 → Ω¹(E) → J¹E → E → 0` is exact for every module.
pub fn one_jet_ses(calc: &Calculus) -> Check {
    for (i, e) in modules(calc).iter().enumerate() {
        let j = ok(calc.jet1(e), "J¹")?;
        let (pi, iota) = (j.projection(), j.inclusion());
        ensure!(pi.mul(&iota).is_zero(), "π ι ≠ 0 on module {i}");
        ensure!(iota.is_injective(), "ι not injective on module {i}");
        ensure!(pi.rank() == e.dim(), "π not surjective on module {i}");
        ensure!(iota.image() == pi.kernel(), "not exact in the middle on module {i}");
        ensure!(j.dim() == e.dim() + j.omega_dim(), "dimension count on module {i}");
    }
    Ok(())
}

/// (b) `j¹(bx) − b·j¹(x) = db ⊗ x` and `ρ` splits the sequence.
pub fn leibniz_and_rho(calc: &Calculus) -> Check {
    let alg = calc.algebra();
    for (i, e) in modules(calc).iter().enumerate() {
        let j = ok(calc.jet1(e), "J¹")?;
        let (pi, jj, iota, rho) = (j.projection(), j.prolong(), j.inclusion(), j.rho());
        ensure!(pi.mul(&jj) == Matrix::identity(e.dim()), "π j¹ ≠ id on module {i}");
        ensure!(rho.mul(&iota) == Matrix::identity(j.omega_dim()), "ρ ι ≠ id on module {i}");
        ensure!(rho.mul(&jj).is_zero(), "ρ j¹ ≠ 0 on module {i}");
        ensure!(iota.mul(&rho).add(&jj.mul(&pi)) == Matrix::identity(j.dim()), "ι ρ + j¹ π ≠ id on module {i}");
        for b in 0..alg.dim() {
            for x in 0..e.dim() {
                let xv = unit_vec(e.dim(), x);
                let bx = e.act_left(&alg.basis(b), &xv);
                let lhs = vec_sub(&jj.apply(&bx), &j.module().act_left(&alg.basis(b), &jj.apply(&xv)));
                let rhs = iota.apply(&j.omega_tensor(calc.j1a(), &calc.da(&alg.basis(b)), &xv));
                ensure!(lhs == rhs, "Leibniz fails at (e_{b}, x_{x}) on module {i}");
            }
        }
    }
    Ok(())
}

/// (c) every basis element of `J^(2)A` decomposes and recomposes.
pub fn nonholonomic_decomposition(calc: &Calculus, n: usize) -> Check {
    let a = Module::regular(calc.algebra());
    let nh = ok(Nonholonomic::new(calc, &a, n), "J^(n)")?;
    for i in 0..nh.dim(n) {
        let xi = unit_vec(nh.dim(n), i);
        let dec = ok(nh.decompose(&xi), "decompose")?;
        ensure!(ok(nh.recompose(&dec), "recompose")? == xi, "round trip fails on basis element {i}");
    }
    Ok(())
}

/// (d) the equalizer of the projections equals the intersection of the
/// `D̃^I` kernels.
pub fn semiholonomic_equalizer(calc: &Calculus, n: usize) -> Check {
    for e in [Module::regular(calc.algebra()), calc.omega1().clone()] {
        let nh = ok(Nonholonomic::new(calc, &e, n), "J^(n)")?;
        for k in 0..=n {
            let eq = ok(equalizer(&nh, k), "equalizer")?;
            let dk = ok(dhi_kernels(calc, &nh, k), "D̃^I kernels")?;
            ensure!(eq == dk, "J^[{k}]: equalizer has dim {}, kernels {}", eq.dim(), dk.dim());
        }
    }
    Ok(())
}

/// (e) `j^(k)(E) ⊆ J^k ⊆ J^[k] ⊆ J^(k)`.
pub fn jet_memberships(calc: &Calculus, n: usize) -> Check {
    let ext = ok(maximal_exterior(calc, 2), "exterior algebra")?;
    let a = Module::regular(calc.algebra());
    let nh = ok(Nonholonomic::new(calc, &a, n), "J^(n)")?;
    let sh = ok(Semiholonomic::new(calc, &nh), "J^[n]")?;
    let hol = ok(Holonomic::new(&ext, &a, n), "J^n")?;
    let emb = ok(hol.embedding(&nh), "J^n ⊆ J^(n)")?;
    let to_sh = ok(hol.to_semiholonomic(&nh, &sh), "J^n ⊆ J^[n]")?;
    for k in 0..=n {
        let jk = ok(nh.prolongation(k), "j^(k)")?;
        ensure!(emb[k].is_injective(), "J^{k} → J^({k}) not injective");
        ensure!(emb[k].mul(hol.prolongation(k)) == jk, "j^{k} is not j^({k}) under the embedding");
        ensure!(sh.space(k).inclusion().mul(&to_sh[k]) == emb[k], "J^{k} ⊄ J^[{k}]");
        ensure!(jk.col_vecs().iter().all(|v| sh.space(k).contains(v)), "j^({k}) ⊄ J^[{k}]");
    }
    Ok(())
}

/// (f) order ≤ 1 by lift solve agrees with the vanishing of `Δ̃` on
/// `N_d(E)`, for every elementary matrix and a few combinations.
pub fn first_order_equivalence(calc: &Calculus) -> Check {
    let alg = calc.algebra();
    let a = Module::regular(alg);
    let ext = ok(maximal_exterior(calc, 2), "exterior algebra")?;
    let towers = ok(JetTowers::for_flavor(&ext, &a, 1, Flavor::Holonomic), "towers")?;
    let sp = ok(towers.space(Flavor::Holonomic, 1), "J¹")?;
    let n = alg.dim();
    let mut cands = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let mut m = Matrix::zeros(n, n);
            m.set(r, c, q(1));
            cands.push(m);
        }
    }
    for b in 0..n {
        cands.push(alg.left_mult(&alg.basis(b)));
        cands.push(alg.right_mult(&alg.basis(b)));
        cands.push(alg.left_mult(&alg.basis(b)).mul(&alg.left_mult(&alg.basis((b + 1) % n))));
    }
    for (i, m) in cands.iter().enumerate() {
        let lift = ok(lift_through(alg, &sp, &a, m), "lift")?;
        let crit = ok(first_order_criterion(calc, &a, &a, m), "criterion")?;
        ensure!(lift.is_some() == crit, "candidate {i}: lift {} vs criterion {crit}", lift.is_some());
        if let Some(cert) = lift {
            ensure!(cert.verify(alg, &sp, &a, m), "candidate {i}: certificate does not verify");
        }
    }
    Ok(())
}

/// (g) connections and splittings determine each other.
pub fn connection_splitting(calc: &Calculus) -> Check {
    let alg = calc.algebra();
    for (i, e) in modules(calc).iter().enumerate() {
        let conn = ok(connections(calc, e), "connections")?;
        let projective = ok(is_projective(alg, e), "projectivity")?.is_some();
        ensure!(!projective || conn.exists, "projective module {i} has no connection");
        let Some(nabla) = conn.sample else { continue };
        let jx = ok(calc.jet1(e), "J¹")?;
        ensure!(is_connection(calc, &jx, &nabla), "sample on module {i} is not a connection");
        let s = splitting_from_connection(&jx, &nabla);
        ensure!(s.mul(&jx.inclusion()) == Matrix::identity(jx.omega_dim()), "s ι ≠ id on module {i}");
        ensure!(is_module_map(alg, &s, jx.module(), jx.omega_module(), false), "splitting on module {i} is not left-linear");
        ensure!(connection_from_splitting(&jx, &s) == nabla, "round trip fails on module {i}");
    }
    Ok(())
}

/// (h) composites of operators of order ≤ 1 carry re-verified certificates
/// of order ≤ m + n.
pub fn composition_orders(calc: &Calculus, picks: &[(usize, usize)]) -> Check {
    let alg = calc.algebra();
    let a = Module::regular(alg);
    let ext = ok(maximal_exterior(calc, 2), "exterior algebra")?;
    let towers = ok(JetTowers::for_flavor(&ext, &a, 2, Flavor::Holonomic), "towers")?;
    let ops = ok(diff_space(&towers, alg, Flavor::Holonomic, 1, &a), "Diff¹")?.basis();
    let classify = |m: &Matrix| -> Result<DiffOp, String> {
        let scan = ok(order(&towers, alg, Flavor::Holonomic, &a, m), "order")?;
        Ok(DiffOp {
            matrix: m.clone(),
            certificate: scan.certificate,
        })
    };
    for &(x, y) in picks {
        let (d1, d2) = (classify(&ops[x % ops.len()])?, classify(&ops[y % ops.len()])?);
        let (o1, o2) = (d1.certificate.as_ref().unwrap().order, d2.certificate.as_ref().unwrap().order);
        let comp = ok(compose(&ext, &a, &a, &a, &d1, &d2), "compose")?;
        let cert = comp.certificate.as_ref().unwrap();
        ensure!(cert.order <= o1 + o2, "composite order {} > {o1} + {o2}", cert.order);
        ensure!(comp.matrix == d2.matrix.mul(&d1.matrix), "composite matrix");
        let sp = ok(towers.space(Flavor::Holonomic, cert.order), "J^n")?;
        ensure!(cert.verify(alg, &sp, &a, &comp.matrix), "composite certificate does not re-verify");
    }
    Ok(())
}

/// (i) `Tor` does not depend on the choice of generators in the
/// resolution, for cyclic right and left modules.
pub fn tor_independence(alg: &Algebra, top: usize) -> Check {
    let op = alg.opposite();
    let right: Vec<Module> = (0..alg.dim())
        .map(|b| {
            let ideal = Module::regular(&op).left_only().left_span(&op, &[op.basis(b)]);
            Module::cyclic(&op, &ideal).unwrap().0
        })
        .chain([Module::regular(&op).left_only()])
        .collect();
    let left: Vec<Module> = (0..alg.dim())
        .map(|b| {
            let ideal = Module::regular(alg).left_only().left_span(alg, &[alg.basis(b)]);
            Module::cyclic(alg, &ideal).unwrap().0
        })
        .collect();
    for (i, m) in right.iter().enumerate() {
        for (j, n) in left.iter().enumerate() {
            let dims = |how| -> Result<Vec<usize>, String> {
                Ok(ok(tor_all_op(alg, m, n, top, how), "Tor")?.iter().map(|g| g.dim).collect())
            };
            let (g, b) = (dims(Generators::Greedy)?, dims(Generators::Basis)?);
            ensure!(g == b, "Tor(M_{i}, N_{j}): {g:?} vs {b:?}");
        }
    }
    Ok(())
}

/// Every check (a)–(h) for one calculus.
pub fn all_checks(calc: &Calculus) -> Vec<(&'static str, Check)> {
    vec![
        ("(a) 1-jet sequence", one_jet_ses(calc)),
        ("(b) Leibniz and ρ", leibniz_and_rho(calc)),
        ("(c) nonholonomic decomposition", nonholonomic_decomposition(calc, 2)),
        ("(d) semiholonomic equalizer", semiholonomic_equalizer(calc, 2)),
        ("(e) jet memberships", jet_memberships(calc, 2)),
        ("(f) first-order criterion", first_order_equivalence(calc)),
        ("(g) connections and splittings", connection_splitting(calc)),
        ("(h) composition orders", composition_orders(calc, &[(0, 1), (2, 3), (1, 5)])),
    ]
}
