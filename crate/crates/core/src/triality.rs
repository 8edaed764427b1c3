//! Local triality for 8-dimensional symmetric composition algebras: the
//! orthogonal Lie algebra, the triality algebra and its spanning triples
//! `t_{x,y}`, the cyclic automorphism `theta`, and related isometry triples.

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::linalg::{vec_scale, vec_sub, Echelon, Matrix, Vector};
use crate::quadforms::QuadraticForm;
use crate::scalars::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrialityError {
    #[error("characteristic 2 is not supported")]
    CharTwo,
    #[error("expected an 8-dimensional algebra, got dimension {0}")]
    WrongDimension(usize),
    #[error("operator is not skew with respect to the norm")]
    NotSkew,
    #[error("no triple with the given first component")]
    NoSolution,
    #[error("operator is not an invertible isometry")]
    NotIsometry,
    #[error("triple fails d0(x*y) = d1(x)*y + x*d2(y) at ({0}, {1})")]
    NotRelated(String, String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `(d0, d1, d2)` with `d0(x*y) = d1(x)*y + x*d2(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialityTriple {
    pub d: [Matrix; 3],
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

fn flatten(m: &Matrix) -> Vector {
    m.data.clone()
}

impl TrialityTriple {
    pub fn zero(field: &Field, dim: usize) -> Self {
        let z = Matrix::zeros(field, dim, dim);
        TrialityTriple { d: [z.clone(), z.clone(), z] }
    }

    /// Componentwise commutator.
    pub fn bracket(&self, other: &TrialityTriple) -> TrialityTriple {
        TrialityTriple { d: std::array::from_fn(|i| commutator(&self.d[i], &other.d[i])) }
    }

    pub fn add(&self, other: &TrialityTriple) -> TrialityTriple {
        TrialityTriple { d: std::array::from_fn(|i| self.d[i].add(&other.d[i])) }
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(Matrix::is_zero)
    }

    /// `(d2, d0, d1)`.
    pub fn theta(&self) -> TrialityTriple {
        TrialityTriple { d: [self.d[2].clone(), self.d[0].clone(), self.d[1].clone()] }
    }

    pub fn flatten(&self) -> Vector {
        self.d.iter().flat_map(flatten).collect()
    }

    /// The first basis pair where the related-derivation identity fails.
    pub fn related_failure(&self, s: &Algebra) -> Option<(usize, usize)> {
        let d = s.dim();
        let f = &s.field;
        let left: Vec<Vector> = (0..d).map(|i| self.d[1].column(i)).collect();
        let right: Vec<Vector> = (0..d).map(|j| self.d[2].column(j)).collect();
        (0..d * d).into_par_iter().find_first(|&ij| {
            let (i, j) = (ij / d, ij % d);
            let lhs = self.d[0].apply(&s.basis_product_vector(i, j));
            let a = s.mul(&left[i], &s.basis(j));
            let b = s.mul(&s.basis(i), &right[j]);
            lhs != crate::linalg::vec_add(f, &a, &b)
        })
        .map(|ij| (ij / d, ij % d))
    }

    pub fn is_related(&self, s: &Algebra) -> bool {
        self.related_failure(s).is_none()
    }

    /// Every component is skew for the polar form of `n`.
    pub fn is_skew(&self, n: &QuadraticForm) -> bool {
        self.d.iter().all(|m| is_skew(n, m))
    }
}

/// `n(mx, y) + n(x, my) = 0` on basis pairs.
pub fn is_skew(n: &QuadraticForm, m: &Matrix) -> bool {
    let p = n.polar_matrix();
    p.mul(m).add(&m.transpose().mul(&p)).is_zero()
}

fn check_algebra(s: &Algebra) -> Result<&QuadraticForm, TrialityError> {
    if s.field.characteristic() == 2 {
        return Err(TrialityError::CharTwo);
    }
    if s.dim() != 8 {
        return Err(TrialityError::WrongDimension(s.dim()));
    }
    Ok(s.norm()?)
}

/// `sigma_{x,y}(z) = n(x,z)y - n(y,z)x`.
pub fn sigma(s: &Algebra, x: &[Scalar], y: &[Scalar]) -> Result<Matrix, TrialityError> {
    let n = s.norm()?;
    let f = &s.field;
    let cols: Vec<Vector> = (0..s.dim())
        .map(|k| {
            let z = s.basis(k);
            vec_sub(f, &vec_scale(f, &n.polar(x, &z), y), &vec_scale(f, &n.polar(y, &z), x))
        })
        .collect();
    Ok(Matrix::from_columns(f, s.dim(), &cols))
}

/// Basis of `so(S, n)` from the `sigma_{e_i,e_j}`, `i < j`, in order, keeping independent ones.
pub fn so_basis(s: &Algebra) -> Result<Vec<Matrix>, TrialityError> {
    check_algebra(s)?;
    let d = s.dim();
    let mut span = Echelon::new(&s.field, d * d);
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let m = sigma(s, &s.basis(i), &s.basis(j))?;
            if span.insert(&flatten(&m)) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// `t_{x,y}` without checks, in any dimension; the characteristic must not be 2.
pub(crate) fn t_components(s: &Algebra, x: &[Scalar], y: &[Scalar]) -> Result<TrialityTriple, TrialityError> {
    let n = s.norm()?;
    let f = &s.field;
    let half = f.div(&n.polar(x, y), &f.from_i64(2)).ok_or(TrialityError::CharTwo)?;
    let id = Matrix::scalar(f, s.dim(), &half);
    let (lx, ly, rx, ry) = (s.left_mult(x), s.left_mult(y), s.right_mult(x), s.right_mult(y));
    Ok(TrialityTriple { d: [sigma(s, x, y)?, id.sub(&rx.mul(&ly)), id.sub(&lx.mul(&ry))] })
}

/// `t_{x,y} = (sigma_{x,y}, n(x,y)/2 id - R_x L_y, n(x,y)/2 id - L_x R_y)`,
/// checked to be a related skew triple.
pub fn t_triple(s: &Algebra, x: &[Scalar], y: &[Scalar]) -> Result<TrialityTriple, TrialityError> {
    let n = check_algebra(s)?;
    let t = t_components(s, x, y)?;
    if let Some((i, j)) = t.related_failure(s) {
        return Err(TrialityError::NotRelated(s.labels[i].clone(), s.labels[j].clone()));
    }
    if !t.is_skew(n) {
        return Err(TrialityError::NotSkew);
    }
    Ok(t)
}

/// Basis of `tri(S)` from the `t_{e_i,e_j}`, `i < j`, keeping independent ones.
pub fn tri_basis(s: &Algebra) -> Result<Vec<TrialityTriple>, TrialityError> {
    check_algebra(s)?;
    let d = s.dim();
    let mut span = Echelon::new(&s.field, 3 * d * d);
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let t = t_triple(s, &s.basis(i), &s.basis(j))?;
            if span.insert(&t.flatten()) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Basis of `tri(S)` as the solution space of its defining linear conditions
/// (each `d_i` skew, `d0(x*y) = d1(x)*y + x*d2(y)` on basis pairs), in any dimension.
pub fn tri_solution_basis(s: &Algebra) -> Result<Vec<TrialityTriple>, TrialityError> {
    let n = s.norm()?;
    let f = &s.field;
    let d = s.dim();
    let dd = d * d;
    // Unknown (c, row k, column i) of d_c sits at c*dd + k*d + i.
    let var = |c: usize, k: usize, i: usize| c * dd + k * d + i;
    let mut rows: Vec<Vector> = Vec::with_capacity(d * dd + 3 * dd);
    let zero_row = || vec![f.zero(); 3 * dd];
    let bump = |row: &mut Vector, v: usize, c: &Scalar| row[v] = f.add(&row[v], c);
    for i in 0..d {
        for j in 0..d {
            let mut block = vec![zero_row(); d];
            // d0(e_i e_j): coefficient of e_m is sum_k c_ijk D0[m][k].
            for (k, c) in s.basis_product(i, j) {
                for (m, row) in block.iter_mut().enumerate() {
                    bump(row, var(0, m, *k), c);
                }
            }
            for k in 0..d {
                for (m, c) in s.basis_product(k, j) {
                    bump(&mut block[*m], var(1, k, i), &f.neg(c));
                }
                for (m, c) in s.basis_product(i, k) {
                    bump(&mut block[*m], var(2, k, j), &f.neg(c));
                }
            }
            rows.extend(block);
        }
    }
    let p = n.polar_matrix();
    for c in 0..3 {
        // (P D + D^T P)_{ab} = sum_k P_ak D_kb + D_ka P_kb.
        for a in 0..d {
            for b in 0..d {
                let mut row = zero_row();
                for k in 0..d {
                    bump(&mut row, var(c, k, b), p.get(a, k));
                    bump(&mut row, var(c, k, a), p.get(k, b));
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(f, 3 * dd, &rows);
    let unpack = |v: &Vector| TrialityTriple {
        d: std::array::from_fn(|c| Matrix::from_rows(f, d, &v[c * dd..(c + 1) * dd].chunks(d).map(<[Scalar]>::to_vec).collect::<Vec<_>>())),
    };
    Ok(system.nullspace().iter().map(unpack).collect())
}

pub(crate) fn span_of(field: &Field, triples: &[TrialityTriple]) -> Echelon {
    let len = triples.first().map_or(0, |t| t.flatten().len());
    let mut span = Echelon::new(field, len);
    for t in triples {
        span.insert(&t.flatten());
    }
    span
}

/// Whether the bracket of any two basis triples lies in their span.
pub fn closed_under_bracket(field: &Field, basis: &[TrialityTriple]) -> bool {
    let span = span_of(field, basis);
    let n = basis.len();
    (0..n * n).into_par_iter().all(|ij| span.contains(&basis[ij / n].bracket(&basis[ij % n]).flatten()))
}

/// Rank of the first components of `basis`; equal to `basis.len()` when `pi0` is injective.
pub fn pi0_rank(field: &Field, basis: &[TrialityTriple]) -> usize {
    let len = basis.first().map_or(0, |t| t.d[0].data.len());
    let mut span = Echelon::new(field, len);
    for t in basis {
        span.insert(&flatten(&t.d[0]));
    }
    span.rank()
}

/// The triple `(d0, d1, d2)` in `tri(S)`, solving for `d1, d2` directly from
/// `d0(e_i*e_j) = d1(e_i)*e_j + e_i*d2(e_j)`.
pub fn pi0_inverse(s: &Algebra, d0: &Matrix) -> Result<TrialityTriple, TrialityError> {
    let n = check_algebra(s)?;
    if d0.rows != 8 || d0.cols != 8 || !is_skew(n, d0) {
        return Err(TrialityError::NotSkew);
    }
    let f = &s.field;
    let d = 8;
    // Unknowns: D1[k][i] at k*d + i, then D2[k][j] at d*d + k*d + j.
    // Skew rows rule out the kernel element (0, I, -I).
    let mut a = Matrix::zeros(f, d * d * d + 2 * d * d, 2 * d * d);
    let mut b = Vec::with_capacity(d * d * d + 2 * d * d);
    for i in 0..d {
        for j in 0..d {
            let target = d0.apply(&s.basis_product_vector(i, j));
            let row0 = (i * d + j) * d;
            for k in 0..d {
                for (m, c) in s.basis_product(k, j) {
                    let v = f.add(a.get(row0 + m, k * d + i), c);
                    a.set(row0 + m, k * d + i, v);
                }
                for (m, c) in s.basis_product(i, k) {
                    let v = f.add(a.get(row0 + m, d * d + k * d + j), c);
                    a.set(row0 + m, d * d + k * d + j, v);
                }
            }
            b.extend(target);
        }
    }
    let p = n.polar_matrix();
    for c in 0..2 {
        for r in 0..d {
            for q in 0..d {
                let row = d * d * d + c * d * d + r * d + q;
                for k in 0..d {
                    let v = f.add(a.get(row, c * d * d + k * d + q), p.get(r, k));
                    a.set(row, c * d * d + k * d + q, v);
                    let v = f.add(a.get(row, c * d * d + k * d + r), p.get(k, q));
                    a.set(row, c * d * d + k * d + r, v);
                }
                b.push(f.zero());
            }
        }
    }
    let sol = a.solve(&b).ok_or(TrialityError::NoSolution)?;
    let unpack = |off: usize| {
        let mut m = Matrix::zeros(f, d, d);
        for k in 0..d {
            for i in 0..d {
                m.set(k, i, sol[off + k * d + i].clone());
            }
        }
        m
    };
    Ok(TrialityTriple { d: [d0.clone(), unpack(0), unpack(d * d)] })
}

/// Dimension of `{t in span(basis) : theta(t) = t}`.
pub fn theta_fixed_dimension(field: &Field, basis: &[TrialityTriple]) -> Result<usize, TrialityError> {
    let span = span_of(field, basis);
    let n = basis.len();
    let mut cols = Vec::with_capacity(n);
    for t in basis {
        let c = span.coordinates(&t.theta().flatten()).ok_or(TrialityError::NoSolution)?;
        cols.push(c);
    }
    let m = Matrix::from_columns(field, n, &cols).sub(&Matrix::identity(field, n));
    Ok(n - m.rank())
}

/// Whether `f0(x*y) = f1(x)*f2(y)` on all basis pairs, after checking each
/// `f_i` is an invertible isometry of the norm.
pub fn check_related_isometry_triple(s: &Algebra, f: [&Matrix; 3]) -> Result<bool, TrialityError> {
    let n = s.norm()?;
    let d = s.dim();
    for m in f {
        if m.rows != d || m.cols != d || m.inverse().is_none() {
            return Err(TrialityError::NotIsometry);
        }
        let moved = n.in_basis(&m.columns());
        if !(0..d).all(|i| (i..d).all(|j| moved.coeff(i, j) == n.coeff(i, j))) {
            return Err(TrialityError::NotIsometry);
        }
    }
    let c1 = f[1].columns();
    let c2 = f[2].columns();
    Ok((0..d * d).into_par_iter().all(|ij| {
        let (i, j) = (ij / d, ij % d);
        f[0].apply(&s.basis_product_vector(i, j)) == s.mul(&c1[i], &c2[j])
    }))
}
