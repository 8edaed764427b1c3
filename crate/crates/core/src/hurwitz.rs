//! Unital composition algebras: the ground field, quadratic étale algebras,
//! Cayley–Dickson doubling, the split Cayley algebra and its recognition,
//! isomorphism over finite fields, and quaternion rotations.

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, VerifyMode};
use crate::linalg::{vec_scale, vec_sub, Echelon, Matrix, Vector};
use crate::quadforms::{IsotropicSearch, QuadraticForm};
use crate::scalars::{Field, FieldError, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HurwitzError {
    #[error("4*mu + 1 = 0 gives a degenerate norm")]
    DegenerateParameter,
    #[error("the doubling parameter must be nonzero")]
    ZeroParameter,
    #[error("expected an 8-dimensional algebra, got dimension {0}")]
    NotEightDimensional(usize),
    #[error("no isotropic vector found within the search budget")]
    NoIsotropicFound,
    #[error("not a Hurwitz algebra: {0}")]
    NotHurwitz(String),
    #[error("characteristic 2 is not supported here")]
    CharTwoUnsupported,
    #[error("only finite fields are supported here")]
    InfiniteFieldUnsupported,
    #[error("algebras are defined over different fields")]
    FieldMismatch,
    #[error("expected a 4-dimensional associative Hurwitz algebra")]
    NotQuaternion,
    #[error("quaternion has zero norm")]
    IsotropicQuaternion,
    #[error("basis change does not reproduce the split Cayley table")]
    VerificationFailed,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub const SPLIT_CAYLEY_LABELS: [&str; 8] = ["e1", "e2", "u1", "u2", "u3", "v1", "v2", "v3"];

pub(crate) fn split_labels() -> Vec<String> {
    SPLIT_CAYLEY_LABELS.iter().map(|s| s.to_string()).collect()
}

/// `F` itself with norm `x^2`.
pub fn ground(field: &Field) -> Algebra {
    let one = field.one();
    Algebra::new(field, "F", vec!["1".into()], [(0, 0, 0, one.clone())])
        .and_then(|a| a.with_norm(QuadraticForm::diagonal(field, std::slice::from_ref(&one))))
        .and_then(|a| a.with_unit(vec![one]))
        .expect("ground field algebra is valid")
}

/// `F1 + Fv` with `v^2 = v + mu 1` and norm `e^2 - mu d^2 + e d` on `e 1 + d v`.
pub fn quadratic_etale(field: &Field, mu: &Scalar) -> Result<Algebra, HurwitzError> {
    let f = field;
    let four_mu_plus_one = f.add(&f.mul(&f.from_i64(4), mu), &f.one());
    if four_mu_plus_one.is_zero() {
        return Err(HurwitzError::DegenerateParameter);
    }
    let one = f.one();
    let entries = [
        (0, 0, 0, one.clone()),
        (0, 1, 1, one.clone()),
        (1, 0, 1, one.clone()),
        (1, 1, 1, one.clone()),
        (1, 1, 0, mu.clone()),
    ];
    let norm = QuadraticForm::from_coeffs(f, 2, [(0, 0, one.clone()), (1, 1, f.neg(mu)), (0, 1, one.clone())]);
    let name = format!("K({})", f.format(mu));
    Ok(Algebra::new(f, &name, vec!["1".into(), "v".into()], entries)?
        .with_norm(norm)?
        .with_unit(vec![one, f.zero()])?)
}

fn doubling_generator(dim: usize) -> &'static str {
    match dim {
        1 => "i",
        2 => "j",
        4 => "l",
        8 => "m",
        16 => "n",
        _ => "w",
    }
}

/// `Q + Qu` with `(a + bu)(c + du) = (ac + alpha conj(d) b) + (da + b conj(c))u`
/// and `n(a + bu) = n(a) - alpha n(b)`.
pub fn cayley_dickson(q: &Algebra, alpha: &Scalar) -> Result<Algebra, HurwitzError> {
    if alpha.is_zero() {
        return Err(HurwitzError::ZeroParameter);
    }
    let f = &q.field;
    let n = q.norm()?.clone();
    q.unit()?;
    let d = q.dim();
    let conj: Vec<Vector> = (0..d).map(|i| q.conjugate(&q.basis(i))).collect::<Result<_, _>>()?;
    let mut entries = Vec::new();
    let mut push = |i: usize, j: usize, off: usize, v: &Vector, scale: Option<&Scalar>| {
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let c = match scale {
                    Some(s) => f.mul(s, c),
                    None => c.clone(),
                };
                entries.push((i, j, k + off, c));
            }
        }
    };
    for i in 0..d {
        for j in 0..d {
            // (e_i)(e_j) = e_i e_j
            push(i, j, 0, &q.basis_product_vector(i, j), None);
            // (e_i)(e_j u) = (e_j e_i) u
            push(i, d + j, d, &q.basis_product_vector(j, i), None);
            // (e_i u)(e_j) = (e_i conj(e_j)) u
            push(d + i, j, d, &q.mul(&q.basis(i), &conj[j]), None);
            // (e_i u)(e_j u) = alpha conj(e_j) e_i
            push(d + i, d + j, 0, &q.mul(&conj[j], &q.basis(i)), Some(alpha));
        }
    }
    let g = doubling_generator(d);
    let mut labels = q.labels.clone();
    labels.extend(q.labels.iter().map(|s| if s == "1" { g.to_string() } else { format!("{s}{g}") }));
    if labels.len() == 4 && labels[1] == "i" && labels[3] == "ij" {
        labels[3] = "k".into();
    }
    let mut norm = QuadraticForm::zero(f, 2 * d);
    let neg_alpha = f.neg(alpha);
    for (i, j, c) in n.entries() {
        norm.add_coeff(i, j, c);
        norm.add_coeff(d + i, d + j, &f.mul(&neg_alpha, c));
    }
    let mut unit = q.unit()?.clone();
    unit.extend(q.zero());
    let name = format!("CD({}, {})", q.name, f.format(alpha));
    Ok(Algebra::new(f, &name, labels, entries)?.with_norm(norm)?.with_unit(unit)?)
}

/// Iterated doubling of the ground field with the given parameters.
pub fn cayley_dickson_tower(field: &Field, alphas: &[Scalar]) -> Result<Vec<Algebra>, HurwitzError> {
    let mut tower = vec![ground(field)];
    for a in alphas {
        let next = cayley_dickson(tower.last().expect("nonempty"), a)?;
        tower.push(next);
    }
    Ok(tower)
}

/// The split Cayley algebra on the basis `e1, e2, u1, u2, u3, v1, v2, v3`.
pub fn split_cayley(field: &Field) -> Algebra {
    let f = field;
    let p = f.one();
    let m = f.from_i64(-1);
    // (row, column, result, sign) with indices e1=0 e2=1 u1..u3=2..4 v1..v3=5..7
    let table: [(usize, usize, usize, &Scalar); 32] = [
        (0, 0, 0, &p),
        (0, 2, 2, &p),
        (0, 3, 3, &p),
        (0, 4, 4, &p),
        (1, 1, 1, &p),
        (1, 5, 5, &p),
        (1, 6, 6, &p),
        (1, 7, 7, &p),
        (2, 1, 2, &p),
        (2, 3, 7, &p),
        (2, 4, 6, &m),
        (2, 5, 0, &m),
        (3, 1, 3, &p),
        (3, 2, 7, &m),
        (3, 4, 5, &p),
        (3, 6, 0, &m),
        (4, 1, 4, &p),
        (4, 2, 6, &p),
        (4, 3, 5, &m),
        (4, 7, 0, &m),
        (5, 0, 5, &p),
        (5, 2, 1, &m),
        (5, 6, 4, &p),
        (5, 7, 3, &m),
        (6, 0, 6, &p),
        (6, 3, 1, &m),
        (6, 5, 4, &m),
        (6, 7, 2, &p),
        (7, 0, 7, &p),
        (7, 4, 1, &m),
        (7, 5, 3, &p),
        (7, 6, 2, &m),
    ];
    let entries = table.iter().map(|&(i, j, k, c)| (i, j, k, c.clone()));
    let norm = QuadraticForm::from_coeffs(f, 8, [(0, 1, p.clone()), (2, 5, p.clone()), (3, 6, p.clone()), (4, 7, p.clone())]);
    let mut unit = vec![f.zero(); 8];
    unit[0] = p.clone();
    unit[1] = p.clone();
    Algebra::new(f, "split Cayley", split_labels(), entries)
        .and_then(|a| a.with_norm(norm))
        .and_then(|a| a.with_unit(unit))
        .expect("split Cayley table is valid")
}

/// A verified change of basis onto the split Cayley table.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    /// Columns are the new basis `e1, e2, u1, u2, u3, v1, v2, v3` in source coordinates.
    pub matrix: Matrix,
    pub target: Algebra,
    pub verified: bool,
}

fn require_hurwitz(c: &Algebra) -> Result<(), HurwitzError> {
    let comp = c.verify_composition(VerifyMode::Symbolic)?;
    if !comp.passed {
        return Err(HurwitzError::NotHurwitz(comp.summary()));
    }
    let props = c.verify_hurwitz_properties()?;
    if !props.passed {
        return Err(HurwitzError::NotHurwitz(props.summary()));
    }
    Ok(())
}

/// Finds a basis of an isotropic 8-dimensional Hurwitz algebra in which the
/// multiplication table is the split Cayley table.
pub fn split_basis(c: &Algebra, budget: usize) -> Result<BasisChange, HurwitzError> {
    if c.dim() != 8 {
        return Err(HurwitzError::NotEightDimensional(c.dim()));
    }
    require_hurwitz(c)?;
    let f = &c.field;
    let n = c.norm()?;
    let one = c.unit()?.clone();
    let a = match n.find_isotropic(budget) {
        IsotropicSearch::Found(v) => v,
        IsotropicSearch::NotFound { .. } => return Err(HurwitzError::NoIsotropicFound),
    };
    // b = e_k / n(a, conj(e_k)) for the first k where this is defined.
    let b = (0..8)
        .find_map(|k| {
            let ek = c.basis(k);
            let t = n.polar(&a, &c.conjugate(&ek).ok()?);
            f.inv(&t).map(|ti| vec_scale(f, &ti, &ek))
        })
        .ok_or_else(|| HurwitzError::NotHurwitz("norm is degenerate at an isotropic vector".into()))?;
    let e1 = c.mul(&a, &b);
    let e2 = vec_sub(f, &one, &e1);
    let id = Matrix::identity(f, 8);
    let stack = |blocks: &[Matrix]| {
        let rows: Vec<Vector> = blocks.iter().flat_map(|m| (0..m.rows).map(|i| m.row(i))).collect();
        Matrix::from_rows(f, 8, &rows)
    };
    let (l1, r1, l2, r2) = (c.left_mult(&e1), c.right_mult(&e1), c.left_mult(&e2), c.right_mult(&e2));
    let u_space = stack(&[l1.sub(&id), r2.sub(&id), l2.clone(), r1.clone()]).nullspace();
    if u_space.len() != 3 {
        return Err(HurwitzError::NotHurwitz(format!("Peirce space U has dimension {}", u_space.len())));
    }
    let (u1, u2) = (u_space[0].clone(), u_space[1].clone());
    let t = n.polar(&c.mul(&u1, &u2), &u_space[2]);
    let ti = f.inv(&t).ok_or_else(|| HurwitzError::NotHurwitz("n(u1 u2, u3) vanishes".into()))?;
    let u3 = vec_scale(f, &ti, &u_space[2]);
    let v1 = c.mul(&u2, &u3);
    let v2 = c.mul(&u3, &u1);
    let v3 = c.mul(&u1, &u2);
    let cols = vec![e1, e2, u1, u2, u3, v1, v2, v3];
    let matrix = Matrix::from_columns(f, 8, &cols);
    if matrix.inverse().is_none() {
        return Err(HurwitzError::VerificationFailed);
    }
    let target = c.change_basis("split Cayley", &matrix, split_labels())?;
    let reference = split_cayley(f);
    let verified = target.structure_constants() == reference.structure_constants()
        && target.norm == reference.norm
        && target.unit == reference.unit;
    if !verified {
        return Err(HurwitzError::VerificationFailed);
    }
    Ok(BasisChange { matrix, target, verified })
}

/// Isomorphism of Hurwitz algebras over a finite field of odd characteristic,
/// decided by dimension and, in dimension 2, isotropy of the norm.
pub fn hurwitz_isomorphic_gf(a: &Algebra, b: &Algebra) -> Result<bool, HurwitzError> {
    if a.field != b.field {
        return Err(HurwitzError::FieldMismatch);
    }
    if !a.field.is_finite() {
        return Err(HurwitzError::InfiniteFieldUnsupported);
    }
    if a.field.characteristic() == 2 {
        return Err(HurwitzError::CharTwoUnsupported);
    }
    require_hurwitz(a)?;
    require_hurwitz(b)?;
    if a.dim() != b.dim() {
        return Ok(false);
    }
    if a.dim() != 2 {
        return Ok(true);
    }
    let iso = |x: &Algebra| -> Result<bool, HurwitzError> {
        match x.norm()?.find_isotropic(usize::MAX) {
            IsotropicSearch::Found(_) => Ok(true),
            IsotropicSearch::NotFound { exhausted: true } => Ok(false),
            IsotropicSearch::NotFound { exhausted: false } => Err(HurwitzError::InfiniteFieldUnsupported),
        }
    };
    Ok(iso(a)? == iso(b)?)
}

fn require_quaternion(h: &Algebra) -> Result<(), HurwitzError> {
    if h.dim() != 4 || h.unit.is_none() || h.norm.is_none() || !h.verify_law(crate::algebra::Law::Associative).passed {
        return Err(HurwitzError::NotQuaternion);
    }
    Ok(())
}

/// `conj(q) / n(q)`.
pub fn quaternion_inverse(h: &Algebra, q: &[Scalar]) -> Result<Vector, HurwitzError> {
    let f = &h.field;
    let nq = h.norm()?.eval(q);
    let inv = f.inv(&nq).ok_or(HurwitzError::IsotropicQuaternion)?;
    Ok(vec_scale(f, &inv, &h.conjugate(q)?))
}

/// Basis of the trace-zero subspace `{x : n(1, x) = 0}`.
pub fn trace_zero_basis(h: &Algebra) -> Result<Vec<Vector>, HurwitzError> {
    let n = h.norm()?;
    let one = h.unit()?;
    let row: Vector = (0..h.dim()).map(|i| n.polar(one, &h.basis(i))).collect();
    Ok(Matrix::from_rows(&h.field, h.dim(), &[row]).nullspace())
}

/// Matrix of `x -> q x q^-1` on the trace-zero subspace (basis from [`trace_zero_basis`]).
pub fn rotation_so3(h: &Algebra, q: &[Scalar]) -> Result<Matrix, HurwitzError> {
    require_quaternion(h)?;
    let qi = quaternion_inverse(h, q)?;
    let basis = trace_zero_basis(h)?;
    let mut e = Echelon::new(&h.field, h.dim());
    for b in &basis {
        e.insert(b);
    }
    let cols: Vec<Vector> = basis
        .iter()
        .map(|x| e.coordinates(&h.mul(&h.mul(q, x), &qi)).expect("conjugation preserves trace zero"))
        .collect();
    Ok(Matrix::from_columns(&h.field, basis.len(), &cols))
}

/// Matrix of `x -> p x q^-1` on the whole algebra.
pub fn rotation_so4(h: &Algebra, p: &[Scalar], q: &[Scalar]) -> Result<Matrix, HurwitzError> {
    require_quaternion(h)?;
    if h.norm()?.eval(p).is_zero() {
        return Err(HurwitzError::IsotropicQuaternion);
    }
    let qi = quaternion_inverse(h, q)?;
    let cols: Vec<Vector> = (0..4).map(|j| h.mul(&h.mul(p, &h.basis(j)), &qi)).collect();
    Ok(Matrix::from_columns(&h.field, 4, &cols))
}

/// `M^T G M = G` for the polar matrix `G` of `q`.
pub fn preserves_polar_form(q: &QuadraticForm, m: &Matrix) -> bool {
    let g = q.polar_matrix();
    m.transpose().mul(&g).mul(m) == g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Law, Witness};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn minus_ones(f: &Field, k: usize) -> Vec<Scalar> {
        vec![f.from_i64(-1); k]
    }

    #[test]
    fn quaternion_labels_and_products() {
        let q = Field::rationals();
        let t = cayley_dickson_tower(&q, &minus_ones(&q, 3)).unwrap();
        let h = &t[2];
        assert_eq!(h.labels, vec!["1", "i", "j", "k"]);
        assert_eq!(h.mul(&h.basis(1), &h.basis(2)), h.basis(3));
        assert_eq!(h.mul(&h.basis(2), &h.basis(1)), vec_scale(&q, &q.from_i64(-1), &h.basis(3)));
        assert_eq!(t[1].mul(&t[1].basis(1), &t[1].basis(1)), vec![q.from_i64(-1), q.zero()]);
        assert_eq!(t[3].labels, vec!["1", "i", "j", "k", "l", "il", "jl", "kl"]);
    }

    #[test]
    fn tower_passes_to_eight_and_fails_at_sixteen() {
        for f in [Field::rationals(), gf(3), gf(5), gf(7)] {
            let t = cayley_dickson_tower(&f, &minus_ones(&f, 4)).unwrap();
            for a in &t[..4] {
                assert!(a.verify_composition(VerifyMode::Symbolic).unwrap().passed, "{}", a.name);
                assert!(a.verify_hurwitz_properties().unwrap().passed, "{}", a.name);
            }
            let r = t[4].verify_composition(VerifyMode::Symbolic).unwrap();
            assert!(!r.passed);
            assert!(matches!(r.checks[1].witness, Some(Witness::Monomial { .. })));
        }
    }

    #[test]
    fn doubling_is_associative_iff_base_commutative() {
        for f in [Field::rationals(), gf(3), gf(5)] {
            let t = cayley_dickson_tower(&f, &minus_ones(&f, 3)).unwrap();
            for w in t.windows(2) {
                assert_eq!(w[0].verify_law(Law::Commutative).passed, w[1].verify_law(Law::Associative).passed);
            }
        }
    }

    #[test]
    fn etale_algebras() {
        let q = Field::rationals();
        let k0 = quadratic_etale(&q, &q.zero()).unwrap();
        assert_eq!(k0.mul(&k0.basis(1), &k0.basis(1)), k0.basis(1));
        assert!(k0.norm().unwrap().eval(&k0.basis(1)).is_zero());
        assert!(k0.verify_composition(VerifyMode::Symbolic).unwrap().passed);
        assert!(k0.verify_hurwitz_properties().unwrap().passed);
        let f3 = gf(3);
        assert!(quadratic_etale(&f3, &f3.one()).unwrap().verify_composition(VerifyMode::Symbolic).unwrap().passed);
        assert_eq!(quadratic_etale(&q, &q.parse("-1/4").unwrap()), Err(HurwitzError::DegenerateParameter));
        // The norm with cross term 2ed is not multiplicative.
        let f = q.clone();
        let bad = k0.clone().with_norm(QuadraticForm::from_coeffs(&f, 2, [(0, 0, f.one()), (0, 1, f.from_i64(2))])).unwrap();
        assert!(!bad.verify_composition(VerifyMode::Symbolic).unwrap().passed);
    }

    #[test]
    fn ground_in_char_two() {
        let a = ground(&gf(2));
        let r = a.verify_composition(VerifyMode::Symbolic).unwrap();
        assert!(r.passed);
        assert_eq!(a.norm().unwrap().classify().class, crate::quadforms::FormClass::NonsingularChar2);
    }

    #[test]
    fn split_cayley_is_hurwitz() {
        for f in [Field::rationals(), gf(2), gf(3)] {
            let c = split_cayley(&f);
            assert!(c.verify_composition(VerifyMode::Symbolic).unwrap().passed);
            assert!(c.verify_hurwitz_properties().unwrap().passed);
            assert_eq!(c.find_unit(), c.unit);
            assert_eq!(c.conjugate(&c.basis(0)).unwrap(), c.basis(1));
        }
        let c = split_cayley(&Field::rationals());
        let assoc = c.verify_law(Law::Associative);
        assert!(!assoc.passed);
        let m2 = c
            .subalgebra("M2", &[c.basis(0), c.basis(1), c.basis(2), c.basis(5)], vec!["e1".into(), "e2".into(), "u1".into(), "v1".into()])
            .unwrap();
        assert!(m2.verify_law(Law::Associative).passed);
    }

    #[test]
    fn split_basis_recovers_table() {
        let q = Field::rationals();
        let k = quadratic_etale(&q, &q.zero()).unwrap();
        let c = cayley_dickson(&cayley_dickson(&k, &q.one()).unwrap(), &q.one()).unwrap();
        let bc = split_basis(&c, 2).unwrap();
        assert!(bc.verified);
        assert_eq!(bc.target.structure_constants(), split_cayley(&q).structure_constants());
        let f5 = gf(5);
        let bc = split_basis(&split_cayley(&f5), 1000).unwrap();
        assert!(bc.verified);
        let definite = cayley_dickson_tower(&q, &minus_ones(&q, 3)).unwrap().pop().unwrap();
        assert_eq!(split_basis(&definite, 1), Err(HurwitzError::NoIsotropicFound));
    }

    #[test]
    fn finite_field_isomorphism() {
        let f5 = gf(5);
        let a = cayley_dickson_tower(&f5, &minus_ones(&f5, 3)).unwrap().pop().unwrap();
        assert!(hurwitz_isomorphic_gf(&a, &split_cayley(&f5)).unwrap());
        let f7 = gf(7);
        // x^2 - x - 2 = (x-2)(x+1) splits; x^2 - x - 3 has discriminant 13 = 6, a non-square mod 7.
        let aniso = quadratic_etale(&f7, &f7.from_i64(3)).unwrap();
        let iso = quadratic_etale(&f7, &f7.zero()).unwrap();
        assert!(!hurwitz_isomorphic_gf(&aniso, &iso).unwrap());
        let h = cayley_dickson(&iso, &f7.one()).unwrap();
        assert!(!hurwitz_isomorphic_gf(&iso, &h).unwrap());
        let q = Field::rationals();
        assert_eq!(hurwitz_isomorphic_gf(&ground(&q), &ground(&q)), Err(HurwitzError::InfiniteFieldUnsupported));
    }

    #[test]
    fn rotations() {
        let q = Field::rationals();
        let h = cayley_dickson_tower(&q, &minus_ones(&q, 2)).unwrap().pop().unwrap();
        let one = h.basis(0);
        assert_eq!(rotation_so3(&h, &one).unwrap(), Matrix::identity(&q, 3));
        let r = rotation_so3(&h, &h.basis(1)).unwrap();
        let m1 = q.from_i64(-1);
        assert_eq!(r.data, {
            let mut d = vec![q.zero(); 9];
            d[0] = q.one();
            d[4] = m1.clone();
            d[8] = m1.clone();
            d
        });
        let r = rotation_so3(&h, &h.parse_element("1 + i").unwrap()).unwrap();
        assert_eq!(r.column(1), vec![q.zero(), q.zero(), q.one()]);
        assert_eq!(r.column(2), vec![q.zero(), m1.clone(), q.zero()]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tz = h.norm().unwrap().in_basis(&trace_zero_basis(&h).unwrap());
        for _ in 0..20 {
            let a: Vector = (0..4).map(|_| q.random(&mut rng)).collect();
            let b: Vector = (0..4).map(|_| q.random(&mut rng)).collect();
            if h.norm().unwrap().eval(&a).is_zero() || h.norm().unwrap().eval(&b).is_zero() {
                continue;
            }
            let ra = rotation_so3(&h, &a).unwrap();
            assert!(preserves_polar_form(&tz, &ra));
            assert!(q.is_one(&ra.determinant()));
            assert_eq!(rotation_so3(&h, &h.mul(&a, &b)).unwrap(), ra.mul(&rotation_so3(&h, &b).unwrap()));
            assert_eq!(rotation_so3(&h, &vec_scale(&q, &m1, &a)).unwrap(), ra);
            let s = rotation_so4(&h, &a, &b).unwrap();
            let t = rotation_so4(&h, &b, &a).unwrap();
            assert_eq!(s.mul(&t), rotation_so4(&h, &h.mul(&a, &b), &h.mul(&b, &a)).unwrap());
            // Equal norms give an isometry of determinant 1.
            let conj_a = h.mul(&h.mul(&b, &a), &quaternion_inverse(&h, &b).unwrap());
            let iso = rotation_so4(&h, &a, &conj_a).unwrap();
            assert!(preserves_polar_form(h.norm().unwrap(), &iso));
            assert!(q.is_one(&iso.determinant()));
        }
        assert_eq!(rotation_so3(&h, &h.zero()), Err(HurwitzError::IsotropicQuaternion));
    }
}
