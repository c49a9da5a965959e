use super::*;
use crate::algebra::Algebra;
use crate::calculus::Calculus;
use crate::exterior::maximal_exterior;
use crate::linalg::{q, unit_vec, vec_sub, Q};

fn quaternions() -> (Calculus, ExteriorAlgebra, Module) {
    let c = Calculus::quaternion_ij();
    let ext = maximal_exterior(&c, 3).unwrap();
    let a = Module::regular(c.algebra());
    (c, ext, a)
}

fn sample_vec(n: usize, seed: i64) -> Vec<Q> {
    (0..n).map(|i| q((i as i64 * 7 + seed) % 5 - 2)).collect()
}

#[test]
fn first_jets_of_quaternions() {
    let (c, _, a) = quaternions();
    let h = c.algebra();
    let j = c.jet1(&a).unwrap();
    assert_eq!((j.dim(), j.omega_dim()), (12, 8));
    let (pi, jj, iota, rho) = (j.projection(), j.prolong(), j.inclusion(), j.rho());
    assert_eq!(pi.mul(&jj), Matrix::identity(4));
    assert!(pi.mul(&iota).is_zero());
    assert_eq!(rho.mul(&iota), Matrix::identity(8));
    assert!(rho.mul(&jj).is_zero());
    assert_eq!(iota.image(), pi.kernel());
    // j¹(bx) − b·j¹(x) = db ⊗ x
    for b in 0..4 {
        for x in 0..4 {
            let xv = unit_vec(4, x);
            let bx = a.act_left(&h.basis(b), &xv);
            let lhs = vec_sub(&jj.apply(&bx), &j.module().act_left(&h.basis(b), &jj.apply(&xv)));
            let rhs = iota.apply(&j.omega_tensor(c.j1a(), &c.da(&h.basis(b)), &xv));
            assert_eq!(lhs, rhs, "Leibniz at ({b}, {x})");
        }
    }
    // J¹ of a free module of rank r has dimension r (dim A + dim Ω¹)
    let free = Module::free(h, 2);
    assert_eq!(c.jet1(&free).unwrap().dim(), 24);
}

#[test]
fn nonholonomic_quaternion_jets() {
    let (c, _, a) = quaternions();
    let nh = Nonholonomic::new(&c, &a, 3).unwrap();
    // J^(k)ℍ is free of rank 3^k
    assert_eq!((0..=3).map(|k| nh.dim(k)).collect::<Vec<_>>(), vec![4, 12, 36, 108]);
    for k in 1..=3 {
        let jk = nh.prolongation(k).unwrap();
        let jk1 = nh.prolongation(k - 1).unwrap();
        for m in 1..=k {
            assert_eq!(nh.projection(k, m).unwrap().mul(&jk), jk1, "π^({k},{m}) ∘ j");
        }
        assert_eq!(nh.projection(k, k).unwrap(), nh.top_projection(k).unwrap());
        assert!(nonholonomic_ses(&nh, k).exact());
    }
    // positions commute: π^(2,1;1) π^(3,2;m) = π^(2,1;m-1) π^(3,2;m) for m ≥ 2
    let p3 = |m| nh.projection(3, m).unwrap();
    let p2 = |m| nh.projection(2, m).unwrap();
    assert_eq!(p2(1).mul(&p3(2)), p2(1).mul(&p3(1)));
    assert_eq!(p2(1).mul(&p3(3)), p2(2).mul(&p3(1)));
    assert_eq!(p2(2).mul(&p3(3)), p2(2).mul(&p3(2)));
    for seed in 0..4 {
        let xi = sample_vec(108, seed);
        let dec = nh.decompose(&xi).unwrap();
        assert_eq!(dec.parts.iter().map(Vec::len).collect::<Vec<_>>(), vec![8, 24, 72]);
        assert_eq!(nh.recompose(&dec).unwrap(), xi);
    }
}

#[test]
fn eth_on_quaternions() {
    let (c, ext, a) = quaternions();
    let jx = c.jet1(&a).unwrap();
    let jjx = c.jet1(jx.module()).unwrap();
    let forms = ext.forms_over(&a, 2).unwrap();
    let eth = Eth::new(&ext, &jx, &jjx, &forms).unwrap();
    assert_eq!(eth.target.dim(), 8 + 12);
    let report = eth.check(&ext, &jx, &jjx).unwrap();
    assert!(report.ok(), "{report:?}");
    assert_eq!(eth.matrix().kernel().dim(), 16);
    assert_eq!(eth.first.kernel().dim(), 28);
}

#[test]
fn semiholonomic_quaternion_jets() {
    let (c, _, a) = quaternions();
    let nh = Nonholonomic::new(&c, &a, 3).unwrap();
    // the constructor cross-checks the equalizer against the D̃^I kernels
    let sh = Semiholonomic::new(&c, &nh).unwrap();
    assert_eq!(equalizer_dims(&nh), vec![4, 12, 28, 60]);
    assert_eq!((0..=3).map(|k| sh.dim(k)).collect::<Vec<_>>(), vec![4, 12, 28, 60]);
    let tower = Tower::new(&c, &a, 3).unwrap();
    for k in 1..=3 {
        let ses = sh.ses(&c, &nh, k).unwrap();
        assert!(ses.exact(), "{ses:?}");
        // exactness predicts dim J^[k] = dim T^k + dim J^[k-1]
        assert_eq!(sh.dim(k), tower.dim(k) + sh.dim(k - 1));
        let jk = sh.prolongation(&nh, k).unwrap();
        assert_eq!(sh.projection(&nh, k).unwrap().mul(&jk), sh.prolongation(&nh, k - 1).unwrap());
    }
}

fn equalizer_dims(nh: &Nonholonomic) -> Vec<usize> {
    (0..=nh.order()).map(|k| semiholonomic::equalizer(nh, k).unwrap().dim()).collect()
}

#[test]
fn infinitesimal_iota_is_not_injective() {
    let c = Calculus::infinitesimal();
    let a = Module::regular(c.algebra());
    let j = c.jet1(&a).unwrap();
    assert_eq!((c.omega1().dim(), j.dim()), (1, 3));
    let f = iota_211(&c, c.omega1()).unwrap();
    assert!(f.kernel().dim() >= 1);
    // the order-1 case is always injective
    assert!(c.jet1(c.omega1()).unwrap().inclusion().is_injective());
}

#[test]
fn holonomic_quaternion_jets() {
    let (c, ext, a) = quaternions();
    let hol = Holonomic::new(&ext, &a, 3).unwrap();
    assert_eq!(hol.dims(), vec![4, 12, 16, 16]);
    let sym = SymmetricForms::new(&ext, &a, 3).unwrap();
    for k in 1..=3 {
        let ses = hol.exactness(&sym, k).unwrap();
        assert!(ses.exact(), "{ses:?}");
        assert_eq!(hol.dim(k), sym.dim(k) + hol.dim(k - 1));
        assert_eq!(hol.projection(k).mul(hol.prolongation(k)), *hol.prolongation(k - 1));
    }
    let ses = hol.sesqui_exactness(&sym, 2).unwrap();
    assert!(ses.exact(), "{ses:?}");

    let nh = Nonholonomic::new(&c, &a, 3).unwrap();
    let sh = Semiholonomic::new(&c, &nh).unwrap();
    let emb = hol.embedding(&nh).unwrap();
    let to_sh = hol.to_semiholonomic(&nh, &sh).unwrap();
    for k in 0..=3 {
        assert!(emb[k].is_injective());
        assert!(to_sh[k].is_injective());
        assert_eq!(emb[k].mul(hol.prolongation(k)), nh.prolongation(k).unwrap());
    }
    assert_eq!(hol.sesqui(2), sh.space(2));
}

#[test]
fn two_jets_are_symmetric_forms_plus_prolongations() {
    let (_, ext, a) = quaternions();
    let towers = JetTowers::new(&ext, &a, 2).unwrap();
    let emb = towers.holonomic().unwrap().embedding(towers.nonholonomic().unwrap()).unwrap();
    assert_eq!(two_jet_presentation(&towers, &ext).unwrap(), emb[2].image());
}

#[test]
fn third_jets_are_an_intersection() {
    let (c, ext, a) = quaternions();
    let hol = Holonomic::new(&ext, &a, 3).unwrap();
    let nh = Nonholonomic::new(&c, &a, 3).unwrap();
    let emb = hol.embedding(&nh).unwrap();
    // J¹(J²) and J²(J¹) inside J^(3)
    let j1j2 = hol.below(3).functor(nh.jet(2), &emb[2]).unwrap().image();
    let over = Holonomic::new(&ext, hol.module(1), 2).unwrap();
    let nh_over = Nonholonomic::from_jets(hol.module(1).clone(), vec![nh.jet(1).clone(), nh.jet(2).clone()]);
    let j2j1 = over.embedding(&nh_over).unwrap()[2].image();
    assert_eq!(j1j2.intersect(&j2j1).unwrap(), emb[3].image());
}

#[test]
fn structure_maps_between_holonomic_jets() {
    let (c, ext, a) = quaternions();
    let h = c.algebra();
    let hol = Holonomic::new(&ext, &a, 2).unwrap();
    let over = Holonomic::new(&ext, hol.module(1), 1).unwrap();
    assert_eq!(l_mn(&hol, &over, 0, 1).unwrap(), Matrix::identity(12));
    assert_eq!(l_mn(&hol, &over, 1, 1).unwrap(), hol.l(2));
    let lhs = l_mn(&hol, &over, 1, 1).unwrap().mul(hol.prolongation(2));
    let rhs = over.prolongation(1).mul(hol.prolongation(1));
    assert_eq!(lhs, rhs);

    // right multiplications are left-linear; J²(f) commutes with j²
    for b in 1..4 {
        let f = h.right_mult(&h.basis(b));
        let g = hol_map(&hol, &hol, &f, 2).unwrap();
        assert_eq!(g.mul(hol.prolongation(2)), hol.prolongation(2).mul(&f));
        assert_eq!(hol.projection(2).mul(&g), hol_map(&hol, &hol, &f, 1).unwrap().mul(&hol.projection(2)));
    }
}

#[test]
fn second_order_obstruction_vanishes_on_quaternions() {
    let (_, ext, a) = quaternions();
    let sym = SymmetricForms::new(&ext, &a, 2).unwrap();
    let ob = d2_obstruction(&ext, &sym).unwrap();
    assert_eq!(ob, Obstruction { rank: 0, in_kernel: true, independent: true });
}

#[test]
fn jet_spaces_and_reports() {
    let (c, ext, a) = quaternions();
    let towers = JetTowers::new(&ext, &a, 2).unwrap();
    let expect = [
        (Flavor::Nonholonomic, vec![4, 12, 36]),
        (Flavor::Semiholonomic, vec![4, 12, 28]),
        (Flavor::Sesquiholonomic, vec![4, 12, 28]),
        (Flavor::Holonomic, vec![4, 12, 16]),
    ];
    for (flavor, dims) in expect {
        let r = towers.report(&c, flavor).unwrap();
        assert_eq!(r.dims, dims, "{flavor}");
        assert!(r.sequences.iter().all(SesReport::exact), "{flavor}: {:?}", r.sequences);
        let sp = towers.space(flavor, 2).unwrap();
        assert_eq!(sp.carrier.dim(), dims[2]);
        assert!(sp.carrier.validate(c.algebra()).is_empty());
        let emb = sp.embed.unwrap();
        assert!(emb.is_injective());
        assert_eq!(emb.mul(&sp.prolongation), towers.nonholonomic().unwrap().prolongation(2).unwrap());
        assert_eq!(flavor.to_string().parse::<Flavor>().unwrap(), flavor);
    }
    assert!(towers.space(Flavor::Holonomic, 3).is_err());
    assert!("jets".parse::<Flavor>().is_err());
}

#[test]
fn free_module_jets_scale() {
    let (c, ext, _) = quaternions();
    let free = Module::free(c.algebra(), 2);
    let hol = Holonomic::new(&ext, &free, 2).unwrap();
    assert_eq!(hol.dims(), vec![8, 24, 32]);
}

#[test]
fn upper_triangular_first_jets() {
    let alg = Algebra::upper_triangular();
    let c = Calculus::universal(&alg).unwrap();
    let a = Module::regular(&alg);
    let j = c.jet1(&a).unwrap();
    assert_eq!(j.dim(), alg.dim() + c.omega1().dim());
    assert_eq!(j.projection().mul(&j.prolong()), Matrix::identity(alg.dim()));
}
