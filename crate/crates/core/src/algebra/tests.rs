use super::*;
use crate::linalg::vec_add;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Hamilton quaternions over the rationals, basis 1, i, j, k.
fn quaternions() -> Algebra {
    let f = Field::rationals();
    let one = f.one();
    let m1 = f.from_i64(-1);
    let entries = vec![
        (0, 0, 0, one.clone()),
        (0, 1, 1, one.clone()),
        (0, 2, 2, one.clone()),
        (0, 3, 3, one.clone()),
        (1, 0, 1, one.clone()),
        (2, 0, 2, one.clone()),
        (3, 0, 3, one.clone()),
        (1, 1, 0, m1.clone()),
        (2, 2, 0, m1.clone()),
        (3, 3, 0, m1.clone()),
        (1, 2, 3, one.clone()),
        (2, 1, 3, m1.clone()),
        (2, 3, 1, one.clone()),
        (3, 2, 1, m1.clone()),
        (3, 1, 2, one.clone()),
        (1, 3, 2, m1.clone()),
    ];
    let norm = QuadraticForm::diagonal(&f, &vec![one.clone(); 4]);
    Algebra::new(&f, "H", labels(&["1", "i", "j", "k"]), entries)
        .unwrap()
        .with_norm(norm)
        .unwrap()
        .with_unit(unit_vector(&f, 4, 0))
        .unwrap()
}

fn para(a: &Algebra) -> Algebra {
    a.with_product("para", |x, y| a.mul(&a.conjugate(x).unwrap(), &a.conjugate(y).unwrap())).unwrap()
}

#[test]
fn quaternion_products() {
    let h = quaternions();
    assert_eq!(h.mul(&h.basis(1), &h.basis(2)), h.basis(3));
    assert_eq!(h.find_unit(), Some(h.basis(0)));
    let x = h.parse_element("2 + i - 3*j + (1/2)*k").unwrap();
    assert_eq!(h.format_element(&h.conjugate(&x).unwrap()), "2*1-i+3*j+(-1/2)*k");
    assert!(matches!(
        h.multiply(&x, &[h.field.one()]),
        Err(AlgebraError::MixedAlgebras { expected: 4, got: 1 })
    ));
}

#[test]
fn quaternions_are_hurwitz() {
    let h = quaternions();
    assert!(h.verify_composition(VerifyMode::Symbolic).unwrap().passed);
    assert!(h.verify_hurwitz_properties().unwrap().passed);
    assert!(h.verify_linearized_composition().unwrap().passed);
    assert!(h.verify_law(Law::Associative).passed);
    let comm = h.verify_law(Law::Commutative);
    assert!(!comm.passed);
    assert_eq!(
        comm.checks[0].witness,
        Some(Witness::Basis { elements: labels(&["i", "j"]) })
    );
    assert_eq!(h.commutative_center(), vec![h.basis(0)]);
}

#[test]
fn composition_failure_has_monomial_witness() {
    let h = quaternions();
    let f = h.field.clone();
    let bad = h.clone().with_norm(QuadraticForm::diagonal(&f, &[f.one(), f.one(), f.one(), f.from_i64(2)])).unwrap();
    let r = bad.verify_composition(VerifyMode::Symbolic).unwrap();
    assert!(!r.passed);
    assert!(matches!(r.checks[1].witness, Some(Witness::Monomial { .. })));
}

#[test]
fn para_quaternions_are_symmetric() {
    let h = quaternions();
    let p = para(&h);
    assert!(p.find_unit().is_none());
    assert!(p.verify_symmetric().unwrap().passed);
    assert!(p.verify_composition(VerifyMode::Symbolic).unwrap().passed);
    assert!(p.verify_law(Law::Flexible).passed);
    // The para-unit commutes with everything.
    assert!(p.commutative_center().contains(&p.basis(0)));
    assert!(!h.verify_symmetric().unwrap().passed);
}

#[test]
fn unitalization_of_para_quaternions() {
    let h = quaternions();
    let p = para(&h);
    let u = p.kaplansky_unitalize(&p.basis(0)).unwrap();
    assert_eq!(u.unit, Some(h.basis(0)));
    assert_eq!(u.norm, h.norm);
    assert!(u.verify_hurwitz_properties().unwrap().passed);
    // A base point of norm 4 gives the same unit up to the rescaling.
    let two = vec_add(&p.field, &p.basis(0), &p.basis(0));
    let u2 = p.kaplansky_unitalize(&two).unwrap();
    assert!(u2.verify_composition(VerifyMode::Symbolic).unwrap().passed);
    // Non-symmetric branch on the quaternions themselves.
    let a = h.parse_element("1 + i").unwrap();
    let u3 = h.kaplansky_unitalize(&a).unwrap();
    assert!(u3.verify_hurwitz_properties().unwrap().passed);
    assert_eq!(
        p.kaplansky_unitalize(&p.zero()),
        Err(AlgebraError::IsotropicBasePoint)
    );
}

#[test]
fn exhaustive_mode() {
    let f = Field::prime(3).unwrap();
    let a = Algebra::new(&f, "F", labels(&["1"]), [(0, 0, 0, f.one())])
        .unwrap()
        .with_norm(QuadraticForm::diagonal(&f, &[f.one()]))
        .unwrap();
    let r = a.verify_composition(VerifyMode::Exhaustive { cap: 100 }).unwrap();
    assert!(r.passed);
    assert_eq!(r.checks[1].mode, Mode::Exhaustive);
    let q = quaternions();
    assert!(matches!(
        q.verify_composition(VerifyMode::Exhaustive { cap: 100 }),
        Err(AlgebraError::ModeUnavailable(_))
    ));
}

#[test]
fn subalgebra_of_quaternions() {
    let h = quaternions();
    let c = h.subalgebra("C", &[h.basis(0), h.basis(1)], labels(&["1", "i"])).unwrap();
    assert_eq!(c.unit, Some(c.basis(0)));
    assert!(c.verify_law(Law::Commutative).passed);
    assert_eq!(
        h.subalgebra("bad", &[h.basis(1), h.basis(2)], labels(&["i", "j"])),
        Err(AlgebraError::NotClosed)
    );
}

#[test]
fn urbanik_wright() {
    assert_eq!(urbanik_wright_index(1, 1), Some(1));
    assert_eq!(urbanik_wright_index(3, 2), Some(12));
    assert_eq!(urbanik_wright_inverse(12), Some((3, 2)));
    for k in 1..2000u64 {
        let (n, m) = urbanik_wright_inverse(k).unwrap();
        assert_eq!(urbanik_wright_index(n, m), Some(k));
    }
    assert_eq!(urbanik_wright_index(0, 1), None);
}

#[test]
fn table_layout() {
    let h = quaternions();
    let t = h.multiplication_table(&[0, 1, 2, 3]);
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[3].trim_start().starts_with("i |"));
    assert!(lines[3].ends_with("-1  k -j"), "{t}");
}
