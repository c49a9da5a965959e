use super::*;
use crate::algebra::{tensor_over_a, Algebra};
use crate::linalg::vec_sub;

fn d_of(c: &Calculus, a: usize) -> Vec<Q> {
    c.da(&c.algebra().basis(a))
}

#[test]
fn quaternion_tensor_powers() {
    let c = Calculus::quaternion_ij();
    let h = c.algebra();
    let t = Tower::over_algebra(&c, 3).unwrap();
    assert_eq!((0..=3).map(|k| t.dim(k)).collect::<Vec<_>>(), vec![4, 8, 16, 32]);
    // generic balanced tensor products as the oracle
    let t2 = tensor_over_a(h, c.omega1(), c.omega1()).unwrap();
    assert_eq!(t2.dim(), 16);
    let t3 = tensor_over_a(h, &t2.module, c.omega1()).unwrap();
    assert_eq!(t3.dim(), 32);
    assert_eq!(tensor_power(&c, 1).unwrap(), *c.omega1());
}

#[test]
fn quaternion_maximal_exterior() {
    let c = Calculus::quaternion_ij();
    let h = c.algebra();
    let ext = maximal_exterior(&c, 3).unwrap();
    assert_eq!(&ext.dims()[..3], &[4, 8, 12]);
    let ts = tensor_over_a(h, c.omega1(), c.omega1()).unwrap();
    let (di, dj, dk) = (d_of(&c, 1), d_of(&c, 2), d_of(&c, 3));
    let g = vec_sub(&vec_add(&ts.elem(&di, &di), &ts.elem(&dj, &dj)), &ts.elem(&dk, &dk));
    let closure = ts.module.closure(h, &[g]);
    assert_eq!(ext.dim(2), 16 - closure.dim());
    let report = ext.validate();
    assert!(report.ok(), "{:?}", report.failures);
}

#[test]
fn infinitesimal_forms() {
    let c = Calculus::infinitesimal();
    let t = Tower::over_algebra(&c, 4).unwrap();
    assert!((1..=4).all(|k| t.dim(k) == 1));
    let ext = maximal_exterior(&c, 3).unwrap();
    assert_eq!(ext.dims(), vec![2, 1, 0, 0]);
    assert!(ext.validate().ok());
}

#[test]
fn universal_calculus_has_no_relations() {
    for alg in [Algebra::quaternions(), Algebra::dual_numbers()] {
        let u = Calculus::universal(&alg).unwrap();
        let ext = maximal_exterior(&u, 3).unwrap();
        for k in 0..=3 {
            assert!(ext.ideal(k).is_zero());
            assert_eq!(ext.dim(k), ext.tensor_dim(k));
        }
        assert!(ext.validate().ok());
        let s = SymmetricForms::new(&ext, &Module::regular(&alg), 3).unwrap();
        assert_eq!(s.dim(1), u.dim());
        assert_eq!(s.dim(2), 0);
        assert_eq!(s.dim(3), 0);
    }
}

#[test]
fn quaternion_symmetric_forms_and_spencer() {
    let c = Calculus::quaternion_ij();
    let h = c.algebra();
    let ext = maximal_exterior(&c, 3).unwrap();
    let s = SymmetricForms::new(&ext, &Module::regular(h), 4).unwrap();
    assert_eq!(s.dims(), vec![4, 8, 4, 0, 0]);
    assert!(s.verify().unwrap());

    // S² is generated by di⊗dj − dj⊗di
    let t = s.forms(0).tower();
    let (di, dj) = (d_of(&c, 1), d_of(&c, 2));
    let w = vec_sub(
        &t.jet(1).omega_tensor(c.j1a(), &di, &dj),
        &t.jet(1).omega_tensor(c.j1a(), &dj, &di),
    );
    assert!(s.space(2).contains(&w));
    assert_eq!(t.module(2).left_span(h, &[w]), *s.space(2));

    // minimal symmetric forms agree with S² for the maximal exterior algebra
    assert_eq!(s.min2().unwrap(), s.space(2));
    assert!(s.nu().unwrap().is_injective());

    for hh in 1..=3 {
        assert_eq!(s.cohomology(hh, 2).unwrap().cohomology, 0, "H^({hh},2)");
    }
    for n in 1..=4 {
        assert_eq!(s.cohomology(n, 0).unwrap().cohomology, 0);
    }
    for n in 0..=3 {
        assert_eq!(s.cohomology(n, 1).unwrap().cohomology, 0);
    }
    for t in 0..=4 {
        assert!(s.spencer(t).is_complex);
    }
    assert!(s.cohomology(4, 1).is_err());
}

#[test]
fn symmetric_forms_are_intersections_of_positional_ideals() {
    let c = Calculus::quaternion_ij();
    let ext = maximal_exterior(&c, 3).unwrap();
    let s = SymmetricForms::new(&ext, &Module::regular(c.algebra()), 3).unwrap();
    let f = ext.forms();
    let t3 = ext.tensor_dim(3);
    let mut left = Subspace::zero(t3);
    let mut right = Subspace::zero(t3);
    for qv in ext.ideal(2).basis() {
        for x in 0..ext.tensor_dim(1) {
            let x = unit_vec(ext.tensor_dim(1), x);
            left.insert(&ext.tensor_with(2, qv, f, 1, &x).unwrap());
            right.insert(&ext.tensor_with(1, &x, f, 2, qv).unwrap());
        }
    }
    let both = left.intersect(&right).unwrap();
    assert_eq!(both.dim(), s.dim(3));
    assert_eq!(s.iota_t(3).image(), both);
}

#[test]
fn symmetric_forms_of_free_modules_scale() {
    let c = Calculus::quaternion_ij();
    let h = c.algebra();
    let ext = maximal_exterior(&c, 3).unwrap();
    let one = SymmetricForms::new(&ext, &Module::regular(h), 3).unwrap();
    let two = SymmetricForms::new(&ext, &Module::free(h, 2), 3).unwrap();
    let doubled: Vec<usize> = one.dims().iter().map(|d| 2 * d).collect();
    assert_eq!(two.dims(), doubled);
}

#[test]
fn covariant_derivative_of_d_is_d() {
    let c = Calculus::quaternion_ij();
    let ext = maximal_exterior(&c, 3).unwrap();
    let fe = ext.forms_over(&Module::regular(c.algebra()), 3).unwrap();
    let ds = ext.covariant_derivative(&fe, c.d(), 3).unwrap();
    for (k, dk) in ds.iter().enumerate() {
        assert_eq!(dk, ext.d(k));
    }
    assert!(ext.curvature(&fe, c.d()).unwrap().is_zero());
    let zero = Matrix::zeros(8, 4);
    assert!(matches!(ext.covariant_derivative(&fe, &zero, 1), Err(Error::Validation(_))));
}
