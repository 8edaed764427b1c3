//! Symmetric composition algebras: para-Hurwitz and Petersson algebras, the
//! split Okubo algebra, Okubo algebras built from 3x3 matrices, the
//! characteristic 3 forms, and the associative algebra recovered from an
//! Okubo product.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Check, Law, Mode, Report, Witness};
use crate::hurwitz::{split_cayley, split_labels};
use crate::linalg::{is_zero_vector, vec_scale, Echelon, Matrix, Vector};
use crate::quadforms::QuadraticForm;
use crate::scalars::{Field, FieldError, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymcompError {
    #[error("the algebra has no unit")]
    NoUnit,
    #[error("the field has no primitive cube root of unity, or the given scalar is not one")]
    NoOmega,
    #[error("the field already contains a primitive cube root of unity")]
    OmegaPresent,
    #[error("characteristic 3 is not allowed here")]
    CharThree,
    #[error("characteristic 3 is required")]
    NotCharThree,
    #[error("parameters must be nonzero")]
    ZeroParameter,
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("lambda is a cube in the field")]
    CubeScalar,
    #[error("the map does not have order dividing 3")]
    NotOrderThree,
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("expected the split Cayley algebra in its standard basis")]
    NotSplitCayley,
    #[error("closure has dimension {0}, expected 8")]
    ClosureNotEightDimensional(usize),
    #[error("norm value does not lie in the ground field")]
    NormOutsideField,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A linear automorphism of an algebra that preserves its norm.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraAutomorphism {
    pub algebra: Algebra,
    /// Column `j` is the image of `e_j`.
    pub map: Matrix,
}

impl AlgebraAutomorphism {
    /// Checks that `map` is invertible, multiplicative on basis pairs and preserves the norm.
    pub fn new(algebra: &Algebra, map: Matrix) -> Result<Self, SymcompError> {
        let d = algebra.dim();
        if map.rows != d || map.cols != d {
            return Err(SymcompError::NotAutomorphism(format!("expected a {d}x{d} matrix")));
        }
        if map.inverse().is_none() {
            return Err(SymcompError::NotAutomorphism("not invertible".into()));
        }
        let images = map.columns();
        for i in 0..d {
            for j in 0..d {
                let lhs = map.apply(&algebra.basis_product_vector(i, j));
                if lhs != algebra.mul(&images[i], &images[j]) {
                    return Err(SymcompError::NotAutomorphism(format!(
                        "f({0}{1}) != f({0})f({1})",
                        algebra.labels[i], algebra.labels[j]
                    )));
                }
            }
        }
        if let Some(n) = &algebra.norm {
            let moved = n.in_basis(&images);
            let same = (0..d).all(|i| (i..d).all(|j| moved.coeff(i, j) == n.coeff(i, j)));
            if !same {
                return Err(SymcompError::NotAutomorphism("norm is not preserved".into()));
            }
        }
        Ok(AlgebraAutomorphism { algebra: algebra.clone(), map })
    }

    pub fn identity(algebra: &Algebra) -> Self {
        AlgebraAutomorphism { algebra: algebra.clone(), map: Matrix::identity(&algebra.field, algebra.dim()) }
    }

    pub fn apply(&self, x: &[Scalar]) -> Vector {
        self.map.apply(x)
    }

    pub fn power(&self, k: u32) -> Matrix {
        let mut m = Matrix::identity(&self.algebra.field, self.algebra.dim());
        for _ in 0..k {
            m = self.map.mul(&m);
        }
        m
    }

    /// Whether `f^3 = id`.
    pub fn cube_is_identity(&self) -> bool {
        self.power(3) == Matrix::identity(&self.algebra.field, self.algebra.dim())
    }
}

/// `x . y = conj(x) conj(y)` with the same norm.
pub fn para(a: &Algebra) -> Result<Algebra, SymcompError> {
    if a.unit.is_none() {
        return Err(SymcompError::NoUnit);
    }
    a.norm()?;
    let name = format!("para-{}", a.name);
    let p = a.with_product(&name, |x, y| {
        let cx = a.conjugate(x).expect("unit and norm present");
        let cy = a.conjugate(y).expect("unit and norm present");
        a.mul(&cx, &cy)
    })?;
    Ok(p)
}

fn require_split_cayley(c: &Algebra) -> Result<(), SymcompError> {
    if c.dim() != 8 || c.structure_constants() != split_cayley(&c.field).structure_constants() {
        return Err(SymcompError::NotSplitCayley);
    }
    Ok(())
}

fn require_omega(f: &Field, w: &Scalar) -> Result<(), SymcompError> {
    if f.characteristic() == 3 {
        return Err(SymcompError::CharThree);
    }
    if !f.is_primitive_cube_root(w) {
        return Err(SymcompError::NoOmega);
    }
    Ok(())
}

/// `e_i -> e_i`, `u_j -> w^(j-1) u_j`, `v_j -> w^(1-j) v_j` on the split Cayley algebra.
pub fn grading_automorphism(c: &Algebra, omega: &Scalar) -> Result<AlgebraAutomorphism, SymcompError> {
    require_split_cayley(c)?;
    let f = &c.field;
    require_omega(f, omega)?;
    let w2 = f.mul(omega, omega);
    let diag = [f.one(), f.one(), f.one(), omega.clone(), w2.clone(), f.one(), w2, omega.clone()];
    let mut m = Matrix::zeros(f, 8, 8);
    for (i, s) in diag.into_iter().enumerate() {
        m.set(i, i, s);
    }
    AlgebraAutomorphism::new(c, m)
}

/// `e_i -> e_i`, `u_j -> u_(j+1)`, `v_j -> v_(j+1)` with indices mod 3.
pub fn cyclic_automorphism(c: &Algebra) -> Result<AlgebraAutomorphism, SymcompError> {
    require_split_cayley(c)?;
    let f = &c.field;
    let image = [0, 1, 3, 4, 2, 6, 7, 5];
    let mut m = Matrix::zeros(f, 8, 8);
    for (j, &i) in image.iter().enumerate() {
        m.set(i, j, f.one());
    }
    AlgebraAutomorphism::new(c, m)
}

/// `x * y = phi(conj x) phi^2(conj y)` with the norm of `c`.
pub fn petersson(c: &Algebra, phi: &AlgebraAutomorphism) -> Result<Algebra, SymcompError> {
    if c.unit.is_none() {
        return Err(SymcompError::NoUnit);
    }
    if phi.algebra.field != c.field || phi.algebra.structure_constants() != c.structure_constants() {
        return Err(SymcompError::NotAutomorphism("map belongs to a different algebra".into()));
    }
    if !phi.cube_is_identity() {
        return Err(SymcompError::NotOrderThree);
    }
    let phi2 = phi.power(2);
    let name = format!("{} (Petersson)", c.name);
    let p = c.with_product(&name, |x, y| {
        let cx = c.conjugate(x).expect("unit and norm present");
        let cy = c.conjugate(y).expect("unit and norm present");
        c.mul(&phi.apply(&cx), &phi2.apply(&cy))
    })?;
    Ok(p)
}

const SPLIT_OKUBO_TABLE: [(&str, &str, &str); 32] = [
    ("e1", "e1", "e2"),
    ("e1", "v1", "-v3"),
    ("e1", "v2", "-v1"),
    ("e1", "v3", "-v2"),
    ("e2", "e2", "e1"),
    ("e2", "u1", "-u3"),
    ("e2", "u2", "-u1"),
    ("e2", "u3", "-u2"),
    ("u1", "e1", "-u2"),
    ("u1", "u1", "v1"),
    ("u1", "u2", "-v3"),
    ("u1", "v3", "-e1"),
    ("v1", "e2", "-v2"),
    ("v1", "v1", "u1"),
    ("v1", "v2", "-u3"),
    ("v1", "u3", "-e2"),
    ("u2", "e1", "-u3"),
    ("u2", "v1", "-e1"),
    ("u2", "u2", "v2"),
    ("u2", "u3", "-v1"),
    ("v2", "e2", "-v3"),
    ("v2", "u1", "-e2"),
    ("v2", "v2", "u2"),
    ("v2", "v3", "-u1"),
    ("u3", "e1", "-u1"),
    ("u3", "u1", "-v2"),
    ("u3", "v2", "-e1"),
    ("u3", "u3", "v3"),
    ("v3", "e2", "-v1"),
    ("v3", "v1", "-u2"),
    ("v3", "u2", "-e2"),
    ("v3", "v3", "u3"),
];

/// The split Okubo algebra on the split Cayley basis, with the split Cayley norm and no unit.
pub fn split_okubo(field: &Field) -> Algebra {
    let f = field;
    let labels = split_labels();
    let idx = |s: &str| labels.iter().position(|l| l == s).expect("known label");
    let entries: Vec<_> = SPLIT_OKUBO_TABLE
        .iter()
        .map(|&(a, b, r)| {
            let (sign, r) = match r.strip_prefix('-') {
                Some(r) => (f.from_i64(-1), r),
                None => (f.one(), r),
            };
            (idx(a), idx(b), idx(r), sign)
        })
        .collect();
    let norm = split_cayley(f).norm.expect("split Cayley has a norm");
    Algebra::new(f, "split Okubo", labels.clone(), entries)
        .and_then(|a| a.with_norm(norm))
        .expect("split Okubo table is valid")
}

// 3x3 matrices over a field, row-major.
type M3 = Vec<Scalar>;

fn m3_mul(k: &Field, a: &[Scalar], b: &[Scalar]) -> M3 {
    let mut out = vec![k.zero(); 9];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = k.zero();
            for l in 0..3 {
                s = k.add(&s, &k.mul(&a[3 * i + l], &b[3 * l + j]));
            }
            out[3 * i + j] = s;
        }
    }
    out
}

fn m3_trace(k: &Field, a: &[Scalar]) -> Scalar {
    k.add(&k.add(&a[0], &a[4]), &a[8])
}

/// Sum of the principal 2x2 minors.
fn m3_s2(k: &Field, a: &[Scalar]) -> Scalar {
    let mut s = k.zero();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let minor = k.sub(&k.mul(&a[4 * i], &a[4 * j]), &k.mul(&a[3 * i + j], &a[3 * j + i]));
        s = k.add(&s, &minor);
    }
    s
}

/// `w xy - w^2 yx - ((w - w^2)/3) tr(xy) 1`.
fn okubo_matrix_product(k: &Field, w: &Scalar, x: &[Scalar], y: &[Scalar]) -> M3 {
    let w2 = k.mul(w, w);
    let xy = m3_mul(k, x, y);
    let yx = m3_mul(k, y, x);
    let c = k.div(&k.sub(w, &w2), &k.from_i64(3)).expect("characteristic is not 3");
    let t = k.mul(&c, &m3_trace(k, &xy));
    let mut out: M3 = xy.iter().zip(&yx).map(|(a, b)| k.sub(&k.mul(w, a), &k.mul(&w2, b))).collect();
    for d in [0, 4, 8] {
        out[d] = k.sub(&out[d], &t);
    }
    out
}

/// Quadratic form on `basis` given by `s2`, projected to `f` through `down`.
fn s2_form(
    f: &Field,
    k: &Field,
    basis: &[M3],
    down: impl Fn(&Scalar) -> Option<Scalar>,
) -> Result<QuadraticForm, SymcompError> {
    let d = basis.len();
    let diag: Vec<Scalar> = basis.iter().map(|b| m3_s2(k, b)).collect();
    let mut q = QuadraticForm::zero(f, d);
    for i in 0..d {
        for j in i..d {
            let c = if i == j {
                diag[i].clone()
            } else {
                let sum: M3 = basis[i].iter().zip(&basis[j]).map(|(a, b)| k.add(a, b)).collect();
                k.sub(&k.sub(&m3_s2(k, &sum), &diag[i]), &diag[j])
            };
            q.add_coeff(i, j, &down(&c).ok_or(SymcompError::NormOutsideField)?);
        }
    }
    Ok(q)
}

pub const SL3_LABELS: [&str; 8] = ["E12", "E13", "E21", "E23", "E31", "E32", "H1", "H2"];
const OFF_DIAGONAL: [usize; 6] = [1, 2, 3, 5, 6, 7];

fn sl3_basis(f: &Field) -> Vec<M3> {
    let mut basis = Vec::with_capacity(8);
    for &p in &OFF_DIAGONAL {
        let mut m = vec![f.zero(); 9];
        m[p] = f.one();
        basis.push(m);
    }
    for (a, b) in [(0, 4), (4, 8)] {
        let mut m = vec![f.zero(); 9];
        m[a] = f.one();
        m[b] = f.from_i64(-1);
        basis.push(m);
    }
    basis
}

fn sl3_coords(m: &[Scalar], f: &Field) -> Vector {
    let mut v: Vector = OFF_DIAGONAL.iter().map(|&p| m[p].clone()).collect();
    v.push(m[0].clone());
    v.push(f.neg(&m[8]));
    v
}

/// The Okubo algebra on trace-zero 3x3 matrices over `F`, with norm `s2`
/// (which equals `-tr(x^2)/2` when 2 is invertible).
pub fn okubo_sl3(field: &Field, omega: &Scalar) -> Result<Algebra, SymcompError> {
    let f = field;
    require_omega(f, omega)?;
    let basis = sl3_basis(f);
    let mut products = Vec::with_capacity(64);
    for x in &basis {
        for y in &basis {
            products.push(sl3_coords(&okubo_matrix_product(f, omega, x, y), f));
        }
    }
    let labels = SL3_LABELS.iter().map(|s| s.to_string()).collect();
    let norm = s2_form(f, f, &basis, |c| Some(c.clone()))?;
    Ok(Algebra::from_products(f, "Okubo (sl3)", labels, &products)?.with_norm(norm)?)
}

/// The Okubo algebra of skew-hermitian trace-zero 3x3 matrices over `F[w]`,
/// for fields without a primitive cube root of unity.
pub fn okubo_second_kind(field: &Field) -> Result<Algebra, SymcompError> {
    let f = field;
    if f.characteristic() == 3 {
        return Err(SymcompError::CharThree);
    }
    if f.primitive_cube_root()?.is_some() {
        return Err(SymcompError::OmegaPresent);
    }
    let k = Field::omega_extension(f)?;
    let w = k.generator().expect("extension has a generator");
    let w2 = k.mul(&w, &w);
    let conj = |s: &Scalar| {
        let c = k.ext_coords(s);
        k.add(&k.embed(&c[0]), &k.mul(&k.embed(&c[1]), &w2))
    };
    let flatten = |m: &[Scalar]| -> Vector { m.iter().flat_map(|s| k.ext_coords(s)).collect() };
    let unflatten = |v: &[Scalar]| -> M3 {
        v.chunks(2).map(|c| k.add(&k.embed(&c[0]), &k.mul(&k.embed(&c[1]), &w))).collect()
    };
    // Columns: images of the 18 F-basis vectors under x -> (tr x, J(x) + x).
    let columns: Vec<Vector> = (0..18)
        .map(|i| {
            let mut e = vec![f.zero(); 18];
            e[i] = f.one();
            let x = unflatten(&e);
            let mut out = k.ext_coords(&m3_trace(&k, &x));
            let mut jx = vec![k.zero(); 9];
            for r in 0..3 {
                for c in 0..3 {
                    jx[3 * r + c] = k.add(&conj(&x[3 * c + r]), &x[3 * r + c]);
                }
            }
            out.extend(flatten(&jx));
            out
        })
        .collect();
    let constraints = Matrix::from_columns(f, 20, &columns);
    let flat_basis = constraints.nullspace();
    let basis: Vec<M3> = flat_basis.iter().map(|v| unflatten(v)).collect();
    let mut span = Echelon::new(f, 18);
    for v in &flat_basis {
        span.insert(v);
    }
    let mut products = Vec::with_capacity(basis.len().pow(2));
    for x in &basis {
        for y in &basis {
            let p = flatten(&okubo_matrix_product(&k, &w, x, y));
            products.push(span.coordinates(&p).ok_or(AlgebraError::NotClosed)?);
        }
    }
    let labels = (1..=basis.len()).map(|i| format!("s{i}")).collect();
    let down = |c: &Scalar| {
        let v = k.ext_coords(c);
        v[1].is_zero().then(|| v[0].clone())
    };
    let norm = s2_form(f, &k, &basis, down)?;
    Ok(Algebra::from_products(f, "Okubo (second kind)", labels, &products)?.with_norm(norm)?)
}

/// Element of `e` from its flattened coordinates over the ancestor `sub`.
fn unflatten_over(e: &Field, sub: &Field, coords: &[Scalar]) -> Scalar {
    if e == sub {
        return coords[0].clone();
    }
    let base = e.base().expect("ancestor");
    let g = e.generator().expect("extension has a generator");
    let step = base.degree_over(sub);
    let mut out = e.zero();
    let mut power = e.one();
    for chunk in coords.chunks(step) {
        out = e.add(&out, &e.mul(&e.embed(&unflatten_over(base, sub, chunk)), &power));
        power = e.mul(&power, &g);
    }
    out
}

fn descend(e: &Field, sub: &Field, s: &Scalar) -> Option<Scalar> {
    let c = e.coords_over(sub, s);
    c[1..].iter().all(Scalar::is_zero).then(|| c[0].clone())
}

/// `(field, root)` with `root^3 = a`, adjoining a cube root when `a` is not a cube.
fn with_cube_root(field: &Field, a: &Scalar, symbol: &str) -> Result<(Field, Scalar), SymcompError> {
    if let Some(r) = field.cube_root(a)? {
        return Ok((field.clone(), r));
    }
    let e = Field::cube_radical(field, a.clone(), symbol)?;
    let g = e.generator().expect("extension has a generator");
    Ok((e, g))
}

/// The characteristic 3 Okubo algebra spanned over `F` by products of
/// `alpha^(1/3) e1` and `beta^(1/3) u1` inside the split Okubo algebra.
pub fn okubo_char3(field: &Field, alpha: &Scalar, beta: &Scalar) -> Result<Algebra, SymcompError> {
    let f = field;
    if f.characteristic() != 3 {
        return Err(SymcompError::NotCharThree);
    }
    if alpha.is_zero() || beta.is_zero() {
        return Err(SymcompError::ZeroParameter);
    }
    let (e1, a) = with_cube_root(f, alpha, "a")?;
    let (e, b) = with_cube_root(&e1, &e1.embed_from(f, beta), "b")?;
    let a = e.embed_from(&e1, &a);
    let deg = e.degree_over(f);
    let okubo = split_okubo(&e);
    let flatten = |v: &[Scalar]| -> Vector { v.iter().flat_map(|s| e.coords_over(f, s)).collect() };

    let mut gens = vec![vec_scale(&e, &a, &okubo.basis(0)), vec_scale(&e, &b, &okubo.basis(2))];
    let mut span = Echelon::new(f, 8 * deg);
    for g in &gens {
        span.insert(&flatten(g));
    }
    let mut done = 0;
    while done < gens.len() && span.rank() <= 8 {
        let n = gens.len();
        for i in 0..n {
            for j in 0..n {
                if i < done && j < done {
                    continue;
                }
                let p = okubo.mul(&gens[i], &gens[j]);
                if !is_zero_vector(&p) && span.insert(&flatten(&p)) {
                    gens.push(p);
                }
            }
        }
        done = n;
    }
    if span.rank() != 8 {
        return Err(SymcompError::ClosureNotEightDimensional(span.rank()));
    }

    let rows: Vec<Vector> = gens.iter().map(|g| flatten(g)).collect();
    let (r, _) = Matrix::from_rows(f, 8 * deg, &rows).rref();
    let flat_basis: Vec<Vector> = (0..8).map(|i| r.row(i)).collect();
    let basis: Vec<Vector> = flat_basis
        .iter()
        .map(|v| v.chunks(deg).map(|c| unflatten_over(&e, f, c)).collect())
        .collect();
    let mut canonical = Echelon::new(f, 8 * deg);
    for v in &flat_basis {
        canonical.insert(v);
    }
    let mut products = Vec::with_capacity(64);
    for x in &basis {
        for y in &basis {
            let p = flatten(&okubo.mul(x, y));
            products.push(canonical.coordinates(&p).ok_or(AlgebraError::NotClosed)?);
        }
    }
    let n = okubo.norm()?;
    let mut q = QuadraticForm::zero(f, 8);
    for i in 0..8 {
        for j in i..8 {
            let c = if i == j { n.eval(&basis[i]) } else { n.polar(&basis[i], &basis[j]) };
            q.add_coeff(i, j, &descend(&e, f, &c).ok_or(SymcompError::NormOutsideField)?);
        }
    }
    let labels = if deg == 1 { split_labels() } else { (1..=8).map(|i| format!("o{i}")).collect() };
    let name = format!("O({}, {})", f.format(alpha), f.format(beta));
    Ok(Algebra::from_products(f, &name, labels, &products)?.with_norm(q)?)
}

/// The norm forced by `(x*y)*x = n(x)y`: `n(e_i)` is read off `(e_i*e_i)*e_i`
/// and `n(e_i, e_j)` off `(e_i*e_0)*e_j + (e_j*e_0)*e_i`.
pub fn norm_from_symmetric_identity(a: &Algebra) -> QuadraticForm {
    let f = &a.field;
    let d = a.dim();
    let mut q = QuadraticForm::zero(f, d);
    for i in 0..d {
        let ii = a.mul(&a.basis_product_vector(i, i), &a.basis(i));
        q.add_coeff(i, i, &ii[i]);
        for j in i + 1..d {
            let x = a.mul(&a.basis_product_vector(i, 0), &a.basis(j));
            let y = a.mul(&a.basis_product_vector(j, 0), &a.basis(i));
            q.add_coeff(i, j, &f.add(&x[0], &y[0]));
        }
    }
    q
}

/// `u*u = v`, `u*v = v*u = u`, `v*v = lambda u - v` in characteristic 3, with
/// the norm forced by the symmetric composition identity. With `check_cube`,
/// rejects `lambda` that is a cube.
pub fn char3_twodim(field: &Field, lambda: &Scalar, check_cube: bool) -> Result<Algebra, SymcompError> {
    let f = field;
    if f.characteristic() != 3 {
        return Err(SymcompError::NotCharThree);
    }
    if lambda.is_zero() {
        return Err(SymcompError::ZeroLambda);
    }
    if check_cube && f.cube_root(lambda)?.is_some() {
        return Err(SymcompError::CubeScalar);
    }
    let one = f.one();
    let entries = [
        (0, 0, 1, one.clone()),
        (0, 1, 0, one.clone()),
        (1, 0, 0, one.clone()),
        (1, 1, 0, lambda.clone()),
        (1, 1, 1, f.from_i64(-1)),
    ];
    let name = format!("two-dimensional ({})", f.format(lambda));
    let a = Algebra::new(f, &name, vec!["u".into(), "v".into()], entries)?;
    let q = norm_from_symmetric_identity(&a);
    Ok(a.with_norm(q)?)
}

/// Result of [`recover_associative`].
#[derive(Clone, Debug, PartialEq)]
pub struct Recovered {
    pub algebra: Algebra,
    pub report: Report,
}

/// `F1 + S` with `xy = w/(w^2-w) x*y + w^2/(w^2-w) y*x - (1/3) n(x,y) 1` on `S`.
/// The report records associativity, both alternative laws and a sampled check
/// that every element satisfies a polynomial of degree 3.
pub fn recover_associative(s: &Algebra, omega: &Scalar) -> Result<Recovered, SymcompError> {
    let third = s.field.div(&s.field.from_i64(-1), &s.field.from_i64(3));
    recover_with_sign(s, omega, third)
}

pub(crate) fn recover_with_sign(s: &Algebra, omega: &Scalar, c3: Option<Scalar>) -> Result<Recovered, SymcompError> {
    let f = &s.field;
    require_omega(f, omega)?;
    let c3 = c3.ok_or(SymcompError::CharThree)?;
    let n = s.norm()?;
    let w2 = f.mul(omega, omega);
    let den = f.sub(&w2, omega);
    let c1 = f.div(omega, &den).ok_or(SymcompError::NoOmega)?;
    let c2 = f.div(&w2, &den).ok_or(SymcompError::NoOmega)?;
    let d = s.dim();
    let mut entries = Vec::new();
    for k in 0..=d {
        entries.push((0, k, k, f.one()));
        if k > 0 {
            entries.push((k, 0, k, f.one()));
        }
    }
    for i in 0..d {
        for j in 0..d {
            for (k, c) in s.basis_product(i, j) {
                entries.push((i + 1, j + 1, k + 1, f.mul(&c1, c)));
            }
            for (k, c) in s.basis_product(j, i) {
                entries.push((i + 1, j + 1, k + 1, f.mul(&c2, c)));
            }
            let p = n.polar(&s.basis(i), &s.basis(j));
            entries.push((i + 1, j + 1, 0, f.mul(&c3, &p)));
        }
    }
    let mut labels = vec!["1".to_string()];
    labels.extend(s.labels.iter().cloned());
    let name = format!("{} (recovered)", s.name);
    let mut unit = vec![f.zero(); d + 1];
    unit[0] = f.one();
    let a = Algebra::new(f, &name, labels, entries)?.with_unit(unit)?;

    let mut checks = a.verify_law(Law::Associative).checks;
    checks.push(a.symbolic_check("x(xy) = (xx)y", 2, |e| {
        let (x, y) = (&e[0], &e[1]);
        let l = a.mul_poly(x, &a.mul_poly(x, y));
        let r = a.mul_poly(&a.mul_poly(x, x), y);
        l.iter().zip(&r).map(|(p, q)| p.sub(q)).collect()
    }));
    checks.push(a.symbolic_check("(yx)x = y(xx)", 2, |e| {
        let (x, y) = (&e[0], &e[1]);
        let l = a.mul_poly(&a.mul_poly(y, x), x);
        let r = a.mul_poly(y, &a.mul_poly(x, x));
        l.iter().zip(&r).map(|(p, q)| p.sub(q)).collect()
    }));
    checks.push(cubic_sample_check(&a, 32, 0));
    let report = Report::new(&a.name, "recovered algebra", checks);
    Ok(Recovered { algebra: a, report })
}

/// Checks `x^3 in span(1, x, x^2)` on seeded random elements.
fn cubic_sample_check(a: &Algebra, samples: usize, seed: u64) -> Check {
    let f = &a.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = a.unit.clone().expect("unital");
    let mut witness = None;
    for _ in 0..samples {
        let x: Vector = (0..a.dim()).map(|_| f.random(&mut rng)).collect();
        let x2 = a.mul(&x, &x);
        let x3 = a.mul(&x2, &x);
        let mut span = Echelon::new(f, a.dim());
        for v in [&one, &x, &x2] {
            span.insert(v);
        }
        if !span.contains(&x3) {
            witness = Some(Witness::Elements { elements: vec![a.format_element(&x)] });
            break;
        }
    }
    Check {
        name: "x^3 in span(1, x, x^2)".into(),
        mode: Mode::Sampled,
        passed: witness.is_none(),
        witness,
        detail: Some(format!("{samples} seeded samples")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VerifyMode;
    use crate::hurwitz::{cayley_dickson, ground};

    fn q() -> Field {
        Field::rationals()
    }

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn quaternions(f: &Field) -> Algebra {
        let m = f.from_i64(-1);
        cayley_dickson(&cayley_dickson(&ground(f), &m).unwrap(), &m).unwrap()
    }

    fn octonions(f: &Field) -> Algebra {
        cayley_dickson(&quaternions(f), &f.from_i64(-1)).unwrap()
    }

    fn symmetric(a: &Algebra) {
        let r = a.verify_symmetric().unwrap();
        assert!(r.passed, "{}", r.summary());
        let r = a.verify_composition(VerifyMode::Symbolic).unwrap();
        assert!(r.passed, "{}", r.summary());
    }

    fn element(a: &Algebra, s: &str) -> Vector {
        a.parse_element(s).unwrap()
    }

    #[test]
    fn para_algebras() {
        let f = q();
        assert_eq!(para(&ground(&f)).unwrap().structure_constants(), ground(&f).structure_constants());
        let h = quaternions(&f);
        let p = para(&h).unwrap();
        assert_eq!(p.mul(&element(&p, "i"), &element(&p, "j")), element(&p, "k"));
        assert_eq!(p.mul(&element(&p, "1"), &element(&p, "i")), element(&p, "-i"));
        symmetric(&p);
        let c = split_cayley(&f);
        let pc = para(&c).unwrap();
        symmetric(&pc);
        assert!(pc.find_unit().is_none());
        let center = pc.commutative_center();
        assert_eq!(center.len(), 1);
        assert_eq!(center[0], vec_scale(&f, &center[0][0], c.unit.as_ref().unwrap()));
        assert_eq!(para(&split_okubo(&f)).unwrap_err(), SymcompError::NoUnit);
    }

    #[test]
    fn automorphisms_of_split_cayley() {
        let f = gf(7);
        let c = split_cayley(&f);
        let g = grading_automorphism(&c, &f.from_i64(2)).unwrap();
        let u2 = element(&c, "u2");
        assert_eq!(g.apply(&u2), element(&c, "2*u2"));
        assert_eq!(g.apply(&element(&c, "v2")), element(&c, "4*v2"));
        for l in ["e1", "e2", "u1", "v1"] {
            assert_eq!(g.apply(&element(&c, l)), element(&c, l));
        }
        assert!(g.cube_is_identity());
        assert_eq!(grading_automorphism(&c, &f.from_i64(3)).unwrap_err(), SymcompError::NoOmega);
        assert_eq!(grading_automorphism(&split_cayley(&gf(5)), &gf(5).one()).unwrap_err(), SymcompError::NoOmega);

        let cy = cyclic_automorphism(&c).unwrap();
        assert_eq!(cy.apply(&element(&c, "u3")), element(&c, "u1"));
        assert_eq!(cy.apply(&element(&c, "v1")), element(&c, "v2"));
        assert_eq!(cy.apply(&element(&c, "e1")), element(&c, "e1"));
        assert!(cy.cube_is_identity());
        assert_ne!(cy.power(1), Matrix::identity(&f, 8));
        assert_eq!(cyclic_automorphism(&octonions(&q())).unwrap_err(), SymcompError::NotSplitCayley);
    }

    #[test]
    fn non_automorphisms_rejected() {
        let f = q();
        let c = split_cayley(&f);
        let mut m = Matrix::identity(&f, 8);
        m.set(2, 2, f.from_i64(2));
        assert!(matches!(AlgebraAutomorphism::new(&c, m), Err(SymcompError::NotAutomorphism(_))));
        // u1, u2, v1, v2 -> negatives: an automorphism of order 2.
        let mut m = Matrix::identity(&f, 8);
        for i in [2, 3, 5, 6] {
            m.set(i, i, f.from_i64(-1));
        }
        let flip = AlgebraAutomorphism::new(&c, m).unwrap();
        assert_eq!(petersson(&c, &flip).unwrap_err(), SymcompError::NotOrderThree);
    }

    #[test]
    fn petersson_identity_is_para() {
        for f in [q(), gf(2), gf(3)] {
            let c = split_cayley(&f);
            let p = petersson(&c, &AlgebraAutomorphism::identity(&c)).unwrap();
            assert_eq!(p.structure_constants(), para(&c).unwrap().structure_constants());
        }
        let h = quaternions(&q());
        let p = petersson(&h, &AlgebraAutomorphism::identity(&h)).unwrap();
        assert_eq!(p.structure_constants(), para(&h).unwrap().structure_constants());
    }

    #[test]
    fn petersson_cyclic_is_split_okubo() {
        for f in [q(), gf(2), gf(3), gf(7)] {
            let c = split_cayley(&f);
            let p = petersson(&c, &cyclic_automorphism(&c).unwrap()).unwrap();
            let o = split_okubo(&f);
            assert_eq!(p.structure_constants(), o.structure_constants(), "over {}", f.name());
            assert_eq!(p.norm, o.norm);
        }
    }

    #[test]
    fn split_okubo_table() {
        let f = q();
        let o = split_okubo(&f);
        let m = |a: &str, b: &str| o.mul(&element(&o, a), &element(&o, b));
        assert_eq!(m("e1", "e1"), element(&o, "e2"));
        assert_eq!(m("u1", "u1"), element(&o, "v1"));
        assert_eq!(m("u1", "v3"), element(&o, "-e1"));
        assert!(is_zero_vector(&m("e1", "u1")));
        assert_eq!(m("u1", "e1"), element(&o, "-u2"));
        for f in [q(), gf(2), gf(3), gf(7)] {
            let o = split_okubo(&f);
            symmetric(&o);
            assert!(o.find_unit().is_none());
            assert!(o.commutative_center().is_empty());
        }
    }

    #[test]
    fn sl3_okubo() {
        let f = gf(7);
        let o = okubo_sl3(&f, &f.from_i64(2)).unwrap();
        symmetric(&o);
        assert!(o.find_unit().is_none());
        assert!(o.commutative_center().is_empty());
        assert_eq!(o.norm().unwrap().eval(&o.basis(6)), f.from_i64(-1));
        assert_eq!(okubo_sl3(&gf(5), &gf(5).one()).unwrap_err(), SymcompError::NoOmega);
        assert_eq!(okubo_sl3(&gf(3), &gf(3).one()).unwrap_err(), SymcompError::CharThree);
        let f4 = Field::omega_extension(&gf(2)).unwrap();
        let o4 = okubo_sl3(&f4, &f4.generator().unwrap()).unwrap();
        symmetric(&o4);
    }

    #[test]
    fn s2_matches_half_trace_of_square() {
        // -tr(x^2)/2 on a generic trace-zero matrix, expanded independently.
        let f = Field::omega_extension(&q()).unwrap();
        let w = f.generator().unwrap();
        let o = okubo_sl3(&f, &w).unwrap();
        let x: Vec<crate::scalars::Polynomial> =
            (0..8).map(|i| crate::scalars::Polynomial::var(&f, 8, i)).collect();
        let (a12, a13, a21, a23, a31, a32, h1, h2) = (&x[0], &x[1], &x[2], &x[3], &x[4], &x[5], &x[6], &x[7]);
        let d2 = h2.sub(h1);
        let d3 = h2.neg();
        let sq = |p: &crate::scalars::Polynomial| p.mul(p);
        let tr = sq(h1)
            .add(&sq(&d2))
            .add(&sq(&d3))
            .add(&a12.mul(a21).scale(&f.from_i64(2)))
            .add(&a13.mul(a31).scale(&f.from_i64(2)))
            .add(&a23.mul(a32).scale(&f.from_i64(2)));
        let expected = tr.scale(&f.div(&f.from_i64(-1), &f.from_i64(2)).unwrap());
        assert!(o.norm().unwrap().to_polynomial(&x).sub(&expected).is_zero());
    }

    #[test]
    fn second_kind_okubo() {
        for f in [q(), gf(5)] {
            let o = okubo_second_kind(&f).unwrap();
            assert_eq!(o.dim(), 8);
            symmetric(&o);
            assert!(o.find_unit().is_none());
            assert!(o.commutative_center().is_empty());
        }
        assert_eq!(okubo_second_kind(&gf(7)).unwrap_err(), SymcompError::OmegaPresent);
        assert_eq!(okubo_second_kind(&gf(3)).unwrap_err(), SymcompError::CharThree);
    }

    #[test]
    fn char3_okubo() {
        let f = gf(3);
        let o = okubo_char3(&f, &f.one(), &f.one()).unwrap();
        let s = split_okubo(&f);
        assert_eq!(o.structure_constants(), s.structure_constants());
        assert_eq!(o.norm, s.norm);
        assert_eq!(okubo_char3(&gf(5), &gf(5).one(), &gf(5).one()).unwrap_err(), SymcompError::NotCharThree);
        assert_eq!(okubo_char3(&f, &f.zero(), &f.one()).unwrap_err(), SymcompError::ZeroParameter);
    }

    #[test]
    fn char3_okubo_twisted() {
        let f = Field::rational_functions(&gf(3), "t");
        let t = f.generator().unwrap();
        let o = okubo_char3(&f, &t, &f.one()).unwrap();
        assert_eq!(o.dim(), 8);
        symmetric(&o);
        assert!(o.find_unit().is_none());
        assert!(o.commutative_center().is_empty());
    }

    #[test]
    fn char3_two_dimensional() {
        let f = Field::rational_functions(&gf(3), "t");
        let t = f.generator().unwrap();
        let a = char3_twodim(&f, &t, true).unwrap();
        assert_eq!(a.mul(&a.basis(0), &a.basis(1)), a.basis(0));
        assert_eq!(a.mul(&a.basis(1), &a.basis(0)), a.basis(0));
        let n = a.norm().unwrap();
        assert_eq!(n.eval(&a.basis(0)), f.one());
        assert_eq!(n.eval(&a.basis(1)), f.one());
        assert_eq!(n.polar(&a.basis(0), &a.basis(1)), t);
        symmetric(&a);
        assert_eq!(char3_twodim(&f, &f.one(), true).unwrap_err(), SymcompError::CubeScalar);
        assert!(char3_twodim(&f, &f.one(), false).is_ok());
        assert_eq!(char3_twodim(&f, &f.zero(), false).unwrap_err(), SymcompError::ZeroLambda);
        assert_eq!(char3_twodim(&gf(7), &gf(7).one(), false).unwrap_err(), SymcompError::NotCharThree);
    }

    #[test]
    fn recovered_matrix_algebra() {
        let f = gf(7);
        let w = f.from_i64(2);
        let o = okubo_sl3(&f, &w).unwrap();
        let r = recover_associative(&o, &w).unwrap();
        assert_eq!(r.algebra.dim(), 9);
        assert!(r.report.passed, "{}", r.report.summary());
        let basis = sl3_basis(&f);
        let embed = |m: &[Scalar]| {
            let t = f.div(&m3_trace(&f, m), &f.from_i64(3)).unwrap();
            let mut z = m.to_vec();
            for d in [0, 4, 8] {
                z[d] = f.sub(&z[d], &t);
            }
            let mut v = vec![t];
            v.extend(sl3_coords(&z, &f));
            v
        };
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let got = r.algebra.mul(&r.algebra.basis(i + 1), &r.algebra.basis(j + 1));
                assert_eq!(got, embed(&m3_mul(&f, x, y)));
            }
        }
    }

    #[test]
    fn recovered_from_para_cayley() {
        let f = gf(7);
        let w = f.from_i64(2);
        let p = para(&split_cayley(&f)).unwrap();
        let r = recover_associative(&p, &w).unwrap();
        assert_eq!(r.algebra.dim(), 9);
        assert!(!r.report.check("(xy)z = x(yz)").unwrap().passed);
        assert!(r.report.check("x(xy) = (xx)y").unwrap().passed);
        assert!(r.report.check("(yx)x = y(xx)").unwrap().passed);
        assert!(r.report.check("x^3 in span(1, x, x^2)").unwrap().passed);
        assert_eq!(recover_associative(&split_okubo(&gf(3)), &gf(3).one()).unwrap_err(), SymcompError::CharThree);
    }

    #[test]
    fn plus_one_third_does_not_recover_matrices() {
        let f = gf(7);
        let w = f.from_i64(2);
        let o = okubo_sl3(&f, &w).unwrap();
        let r = recover_with_sign(&o, &w, f.div(&f.one(), &f.from_i64(3))).unwrap();
        assert!(!r.report.check("(xy)z = x(yz)").unwrap().passed);
    }
}
