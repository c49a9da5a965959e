//! The two worked examples, each as one JSON document.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebra::Module;
use crate::calculus::{n_f, omega_u, Calculus};
use crate::diffops::quaternion::{operator_algebra_report, Check, QuaternionOperators};
use crate::diffops::connections;
use crate::error::Result;
use crate::exterior::{maximal_exterior, ExteriorAlgebra, SymmetricForms};
use crate::homology::{flatness, flatness_right, free_resolution, nd_tensor_kernel, tor_all, Generators};
use crate::io::{point_module, AlgebraSpec, CalculusSpec};
use crate::jets::semiholonomic::{dhi_kernels, equalizer};
use crate::jets::{d2_obstruction, iota_211, two_jet_presentation, Eth, Flavor, JetTowers};
use crate::linalg::{vec_scale, vec_sub, Q};

/// Exterior truncation used by both examples.
pub const TRUNCATION: usize = 3;

const FLAVORS: [Flavor; 4] = [
    Flavor::Nonholonomic,
    Flavor::Semiholonomic,
    Flavor::Sesquiholonomic,
    Flavor::Holonomic,
];

#[derive(Clone, Debug, Serialize)]
pub struct SpencerReport {
    pub truncation: usize,
    /// `dim Ω^k` for `k = 0..=truncation`
    pub grades: Vec<usize>,
    /// `dim S^h(E)`
    pub symmetric: Vec<usize>,
    /// `"h,k" → {dim, ker, im, H}`, ordered by total degree then `k`
    pub spencer: Map<String, Value>,
    /// Nodes within the grades whose cohomology needs a higher `S^h`.
    pub unknown: Vec<String>,
    pub is_complex: bool,
}

pub fn spencer_report(ext: &ExteriorAlgebra, sym: &SymmetricForms) -> SpencerReport {
    let n = ext.max_grade();
    let mut spencer = Map::new();
    let mut unknown = Vec::new();
    let mut is_complex = true;
    for t in 0..=sym.top() + n {
        let cx = sym.spencer(t);
        is_complex &= cx.is_complex;
        for c in &cx.cohomology {
            spencer.insert(
                format!("{},{}", c.h, c.k),
                json!({"dim": c.dim, "ker": c.ker, "im": c.im, "H": c.cohomology}),
            );
        }
        unknown.extend(
            cx.unknown
                .iter()
                .filter(|&&(h, k)| h <= sym.top() && k <= n)
                .map(|(h, k)| format!("{h},{k}")),
        );
    }
    SpencerReport {
        truncation: n,
        grades: ext.dims(),
        symmetric: sym.dims(),
        spencer,
        unknown,
        is_complex,
    }
}

fn towers_json(towers: &JetTowers, calc: &Calculus) -> Result<Value> {
    let mut out = Map::new();
    for fl in FLAVORS {
        out.insert(fl.to_string(), serde_json::to_value(towers.report(calc, fl)?)?);
    }
    Ok(Value::Object(out))
}

fn check(name: String, holds: bool) -> Check {
    Check { name, holds }
}

/// `x·θ = ±θ·x` for `x ∈ {i, j, k}` and `θ ∈ {di, dj}`.
fn bimodule_relations(calc: &Calculus) -> Vec<Check> {
    let alg = calc.algebra();
    let om = calc.omega1();
    let mut out = Vec::new();
    for x in 1..4 {
        for th in [1, 2] {
            let (xl, tl) = (&alg.labels()[x], &alg.labels()[th]);
            let theta = calc.da(&alg.basis(th));
            let left = om.act_left(&alg.basis(x), &theta);
            let right = om.act_right(&theta, &alg.basis(x));
            let minus = vec_scale(&right, &Q::from_integer((-1).into()));
            out.push(if left == right {
                check(format!("{xl}·d{tl} = (d{tl}){xl}"), true)
            } else if left == minus {
                check(format!("{xl}·d{tl} = −(d{tl}){xl}"), true)
            } else {
                check(format!("{xl}·d{tl} = ±(d{tl}){xl}"), false)
            });
        }
    }
    out
}

/// The quaternions with the calculus `Ω¹_{i,j}`.
pub fn quaternion() -> Result<Value> {
    let c = Calculus::quaternion_ij();
    let h = c.algebra();
    let a = Module::regular(h);
    let ext = maximal_exterior(&c, TRUNCATION)?;
    let rel = c.structure_relations(&[1, 2])?;
    let eq = |r: &crate::calculus::Relation| format!("{} = {}", r.lhs, r.rhs);

    let sym = SymmetricForms::new(&ext, &a, TRUNCATION + 1)?;
    let t1 = sym.forms(0).tower().jet(1);
    let (di, dj) = (c.da(&h.basis(1)), c.da(&h.basis(2)));
    let gen = vec_sub(&t1.omega_tensor(c.j1a(), &di, &dj), &t1.omega_tensor(c.j1a(), &dj, &di));
    let generates = sym.space(2).contains(&gen) && sym.forms(0).tower().module(2).left_span(h, &[gen]) == *sym.space(2);

    let towers = JetTowers::new(&ext, &a, 3)?;
    let nh = towers.nonholonomic()?;
    let hol = towers.holonomic()?;
    let jx = c.jet1(&a)?;
    let jjx = c.jet1(jx.module())?;
    let forms = ext.forms_over(&a, 2)?;
    let eth = Eth::new(&ext, &jx, &jjx, &forms)?;
    let emb = hol.embedding(nh)?;
    let eth_kernel = eth.matrix().kernel();
    let mut semi = Vec::new();
    for k in 0..=3 {
        let eqz = equalizer(nh, k)?;
        let dhi = dhi_kernels(&c, nh, k)?;
        semi.push(json!({"order": k, "equalizer": eqz.dim(), "dhi_kernels": dhi.dim(), "agree": eqz == dhi}));
    }

    let ops = QuaternionOperators::new(&c)?;
    let op_names: Vec<String> = ["R_{q}", "∂_i∘R_{q}", "∂_j∘R_{q}", "∂_i∂_j∘R_{q}"]
        .iter()
        .flat_map(|p| h.labels().iter().map(move |l| p.replace("{q}", l)))
        .collect();
    debug_assert_eq!(op_names.len(), ops.basis().len());

    Ok(json!({
        "example": "quaternion",
        "algebra": AlgebraSpec::from_algebra(h),
        "calculus": CalculusSpec::from_calculus(&c),
        "dims": {
            "universal": omega_u(h).dim(),
            "N_i": n_f(h, &h.basis(1))?.dim(),
            "N_{i,j}": c.nd().dim(),
            "omega1": c.dim(),
            "J1": c.j1a().dim(),
        },
        "calculus_checks": c.validate(),
        "left_free_basis": rel.basis,
        "left_free_rank": rel.basis.len(),
        "differentials": rel.differentials.iter().map(eq).collect::<Vec<_>>(),
        "right_action": rel.right_action.iter().map(eq).collect::<Vec<_>>(),
        "bimodule_relations": bimodule_relations(&c),
        "exterior": {
            "dims": ext.dims(),
            "tensor_dims": (0..=TRUNCATION).map(|k| ext.tensor_dim(k)).collect::<Vec<_>>(),
            "checks": ext.validate(),
        },
        "symmetric": {
            "dims": sym.dims(),
            "S2_generator": "di⊗dj − dj⊗di",
            "generator_spans_S2": generates,
            "S2_min_equals_S2": sym.min2() == Some(sym.space(2)),
        },
        "spencer": spencer_report(&ext, &sym),
        "jets": towers_json(&towers, &c)?,
        "two_jets": {
            "eth": eth.check(&ext, &jx, &jjx)?,
            "ker_D": eth_kernel.dim(),
            "ker_D_I": eth.first.kernel().dim(),
            "presentation": two_jet_presentation(&towers, &ext)?.dim(),
            "holonomic": hol.dim(2),
            "agree": two_jet_presentation(&towers, &ext)? == emb[2].image()
                && eth_kernel.dim() == hol.dim(2),
        },
        "semiholonomic_cross_check": semi,
        "obstruction": d2_obstruction(&ext, towers.symmetric()?)?,
        "operator_basis": op_names,
        "operators": operator_algebra_report(&ext)?,
    }))
}

/// The dual numbers `k[t]/(t²)` with the calculus `Ω¹ = k·dt`.
pub fn infinitesimal() -> Result<Value> {
    let c = Calculus::infinitesimal();
    let k2 = c.algebra();
    let a = Module::regular(k2);
    let point = point_module(k2)?;
    let ext = maximal_exterior(&c, TRUNCATION)?;
    let sym = SymmetricForms::new(&ext, &a, TRUNCATION)?;
    let towers = JetTowers::new(&ext, &a, 3)?;

    let (t, dt) = (k2.basis(1), c.da(&k2.basis(1)));
    let om = c.omega1();
    let relations = vec![
        check("t·dt = 0".into(), om.act_left(&t, &dt).iter().all(|x| *x == Q::default())),
        check("(dt)·t = 0".into(), om.act_right(&dt, &t).iter().all(|x| *x == Q::default())),
    ];

    let dims = |how| -> Result<Vec<usize>> { Ok(tor_all(k2, &point, &point, 5, how)?.iter().map(|g| g.dim).collect()) };
    let res = free_resolution(k2, &point, 5, Generators::Greedy)?;
    let iota = iota_211(&c, om)?;
    let conn_a = connections(&c, &a)?;
    let conn_pt = connections(&c, &point)?;

    Ok(json!({
        "example": "infinitesimal",
        "algebra": AlgebraSpec::from_algebra(k2),
        "calculus": CalculusSpec::from_calculus(&c),
        "dims": {
            "universal": omega_u(k2).dim(),
            "N_d": c.nd().dim(),
            "omega1": c.dim(),
            "J1": c.j1a().dim(),
        },
        "calculus_checks": c.validate(),
        "relations": relations,
        "exterior": {
            "dims": ext.dims(),
            "tensor_dims": (0..=TRUNCATION).map(|k| ext.tensor_dim(k)).collect::<Vec<_>>(),
            "checks": ext.validate(),
        },
        "spencer": spencer_report(&ext, &sym),
        "tor": {
            "M": "k[0]",
            "N": "k[0]",
            "dims": dims(Generators::Greedy)?,
            "dims_basis_generators": dims(Generators::Basis)?,
            "resolution_ranks": res.ranks(),
        },
        "iota_211": {
            "domain": iota.cols(),
            "codomain": iota.rows(),
            "rank": iota.rank(),
            "kernel": iota.kernel().dim(),
        },
        "flatness": {
            "omega1_left": flatness(k2, om)?,
            "omega1_right": flatness_right(k2, om)?,
            "nd_tensor_kernel_point": nd_tensor_kernel(&c, &point)?,
        },
        "connections": {
            "regular": conn_a,
            "point": conn_pt,
        },
        "jets": towers_json(&towers, &c)?,
    }))
}

pub fn by_name(name: &str) -> Result<Value> {
    match name {
        "quaternion" => quaternion(),
        "infinitesimal" => infinitesimal(),
        other => Err(crate::Error::Parse(format!(
            "unknown example {other:?} (expected quaternion or infinitesimal)"
        ))),
    }
}
