//! Quadratic forms given by upper-triangular coefficients, valid in every
//! characteristic including 2.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{is_zero_vector, Matrix, Vector};
use crate::scalars::{Field, FieldError, Monomial, Polynomial, Scalar};

/// `n(sum x_i e_i) = sum_{i <= j} q_ij x_i x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    pub field: Field,
    pub dim: usize,
    coeffs: BTreeMap<(usize, usize), Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormClass {
    Nondegenerate,
    NonsingularChar2,
    Singular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub class: FormClass,
    pub radical: Vec<Vector>,
}

impl Classification {
    pub fn is_nonsingular(&self) -> bool {
        self.class != FormClass::Singular
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IsotropicSearch {
    Found(Vector),
    /// `exhausted` is true when the search covered every candidate (finite fields).
    NotFound { exhausted: bool },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct QuadraticFormJson {
    pub dim: usize,
    pub coeffs: Vec<(usize, usize, String)>,
}

impl QuadraticForm {
    pub fn zero(field: &Field, dim: usize) -> Self {
        QuadraticForm { field: field.clone(), dim, coeffs: BTreeMap::new() }
    }

    /// Builds a form from `(i, j, q_ij)` entries; `(j, i)` is folded onto `(i, j)`.
    pub fn from_coeffs(field: &Field, dim: usize, entries: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Self {
        let mut q = Self::zero(field, dim);
        for (i, j, c) in entries {
            q.add_coeff(i, j, &c);
        }
        q
    }

    /// Sum of squares weighted by `diag`.
    pub fn diagonal(field: &Field, diag: &[Scalar]) -> Self {
        Self::from_coeffs(field, diag.len(), diag.iter().enumerate().map(|(i, c)| (i, i, c.clone())))
    }

    pub fn add_coeff(&mut self, i: usize, j: usize, c: &Scalar) {
        assert!(i < self.dim && j < self.dim, "index out of range");
        let key = (i.min(j), i.max(j));
        let v = match self.coeffs.get(&key) {
            Some(old) => self.field.add(old, c),
            None => c.clone(),
        };
        if v.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, v);
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.coeffs.get(&(i.min(j), i.max(j))).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        let f = &self.field;
        let mut acc = f.zero();
        for (&(i, j), c) in &self.coeffs {
            if x[i].is_zero() || x[j].is_zero() {
                continue;
            }
            acc = f.add(&acc, &f.mul(c, &f.mul(&x[i], &x[j])));
        }
        acc
    }

    /// `n(x + y) - n(x) - n(y)`.
    pub fn polar(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let f = &self.field;
        let mut acc = f.zero();
        for (&(i, j), c) in &self.coeffs {
            let t = if i == j {
                f.add(&f.mul(&x[i], &y[i]), &f.mul(&x[i], &y[i]))
            } else {
                f.add(&f.mul(&x[i], &y[j]), &f.mul(&x[j], &y[i]))
            };
            if !t.is_zero() {
                acc = f.add(&acc, &f.mul(c, &t));
            }
        }
        acc
    }

    pub fn polar_matrix(&self) -> Matrix {
        let f = &self.field;
        let mut m = Matrix::zeros(f, self.dim, self.dim);
        for (&(i, j), c) in &self.coeffs {
            if i == j {
                m.set(i, i, f.add(c, c));
            } else {
                m.set(i, j, c.clone());
                m.set(j, i, c.clone());
            }
        }
        m
    }

    pub fn classify(&self) -> Classification {
        let radical = self.polar_matrix().nullspace();
        let class = if radical.is_empty() {
            FormClass::Nondegenerate
        } else if self.field.characteristic() == 2 && radical.len() == 1 && !self.eval(&radical[0]).is_zero() {
            FormClass::NonsingularChar2
        } else {
            FormClass::Singular
        };
        Classification { class, radical }
    }

    /// The form expressed in the basis given by `vectors` (restriction when fewer than `dim`).
    pub fn in_basis(&self, vectors: &[Vector]) -> QuadraticForm {
        let mut q = Self::zero(&self.field, vectors.len());
        for (a, va) in vectors.iter().enumerate() {
            q.add_coeff(a, a, &self.eval(va));
            for (b, vb) in vectors.iter().enumerate().skip(a + 1) {
                q.add_coeff(a, b, &self.polar(va, vb));
            }
        }
        q
    }

    /// `n` as a polynomial in the coordinate indeterminates `vars[0..dim]`.
    pub fn to_polynomial(&self, coords: &[Polynomial]) -> Polynomial {
        let nvars = coords[0].nvars;
        let mut acc = Polynomial::zero(&self.field, nvars);
        for (&(i, j), c) in &self.coeffs {
            acc = acc.add(&coords[i].mul(&coords[j]).scale(c));
        }
        acc
    }

    /// Reads the coefficients off a homogeneous quadratic polynomial in `dim` variables.
    pub fn from_polynomial(p: &Polynomial) -> Result<QuadraticForm, FieldError> {
        let mut q = Self::zero(&p.field, p.nvars);
        for (Monomial(e), c) in &p.terms {
            let idx: Vec<usize> = e
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
                .collect();
            if idx.len() != 2 {
                return Err(FieldError::Unsupported("polynomial is not a quadratic form".into()));
            }
            q.add_coeff(idx[0], idx[1], c);
        }
        Ok(q)
    }

    /// Deterministic search for a nonzero `v` with `n(v) = 0`.
    ///
    /// Finite fields: projective representatives (first nonzero coordinate 1),
    /// grouped by the position of that coordinate, remaining coordinates in
    /// lexicographic element order; at most `budget` candidates.
    /// Infinite fields: integer vectors with first nonzero coordinate positive,
    /// in boxes of height 1, 2, ..., `budget`, coordinates ordered 0, 1, -1, 2, -2, ...
    pub fn find_isotropic(&self, budget: usize) -> IsotropicSearch {
        let f = &self.field;
        let d = self.dim;
        if let Some(q) = f.size() {
            let mut tested = 0usize;
            for pivot in 0..d {
                let rest = d - pivot - 1;
                let Some(count) = q.checked_pow(rest as u32) else {
                    return IsotropicSearch::NotFound { exhausted: false };
                };
                for idx in 0..count {
                    if tested >= budget {
                        return IsotropicSearch::NotFound { exhausted: false };
                    }
                    tested += 1;
                    let mut v = vec![f.zero(); d];
                    v[pivot] = f.one();
                    let mut r = idx;
                    for k in (pivot + 1..d).rev() {
                        v[k] = f.element_at(r % q);
                        r /= q;
                    }
                    if self.eval(&v).is_zero() {
                        return IsotropicSearch::Found(v);
                    }
                }
            }
            return IsotropicSearch::NotFound { exhausted: true };
        }
        for h in 1..=budget as i64 {
            let order: Vec<i64> = std::iter::once(0).chain((1..=h).flat_map(|k| [k, -k])).collect();
            let base = order.len();
            for pivot in 0..d {
                let rest = d - pivot - 1;
                for p in 1..=h {
                    let Some(count) = base.checked_pow(rest as u32) else {
                        return IsotropicSearch::NotFound { exhausted: false };
                    };
                    for idx in 0..count {
                        let mut ints = vec![0i64; d];
                        ints[pivot] = p;
                        let mut r = idx;
                        for k in (pivot + 1..d).rev() {
                            ints[k] = order[r % base];
                            r /= base;
                        }
                        if ints.iter().map(|x| x.abs()).max() != Some(h) {
                            continue;
                        }
                        let v: Vector = ints.iter().map(|&x| f.from_i64(x)).collect();
                        if self.eval(&v).is_zero() {
                            return IsotropicSearch::Found(v);
                        }
                    }
                }
            }
        }
        IsotropicSearch::NotFound { exhausted: false }
    }

    pub fn to_json(&self) -> QuadraticFormJson {
        QuadraticFormJson {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(&(i, j), c)| (i, j, self.field.format(c))).collect(),
        }
    }

    pub fn from_json(field: &Field, j: &QuadraticFormJson) -> Result<QuadraticForm, FieldError> {
        let mut q = Self::zero(field, j.dim);
        for (i, k, s) in &j.coeffs {
            if *i >= j.dim || *k >= j.dim {
                return Err(FieldError::Unsupported(format!("norm index ({i},{k}) out of range")));
            }
            q.add_coeff(*i, *k, &field.parse(s)?);
        }
        Ok(q)
    }
}

/// Whether `v` is a nonzero isotropic vector of `q`.
pub fn is_isotropic_vector(q: &QuadraticForm, v: &[Scalar]) -> bool {
    !is_zero_vector(v) && q.eval(v).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sum_of_squares(f: &Field, d: usize) -> QuadraticForm {
        QuadraticForm::diagonal(f, &vec![f.one(); d])
    }

    #[test]
    fn polar_matrix_of_square() {
        let q = Field::rationals();
        assert_eq!(sum_of_squares(&q, 1).polar_matrix().data, vec![q.from_i64(2)]);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(sum_of_squares(&f2, 1).polar_matrix().data, vec![f2.zero()]);
    }

    #[test]
    fn classification() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(sum_of_squares(&f2, 1).classify().class, FormClass::NonsingularChar2);
        let q = Field::rationals();
        assert_eq!(QuadraticForm::zero(&q, 2).classify().class, FormClass::Singular);
        assert_eq!(sum_of_squares(&q, 3).classify().class, FormClass::Nondegenerate);
        // x^2 + y^2 = (x + y)^2 in characteristic 2: radical is 2-dimensional.
        assert_eq!(sum_of_squares(&f2, 2).classify().class, FormClass::Singular);
    }

    #[test]
    fn hyperbolic_plane_first_vector() {
        let q = Field::rationals();
        let h = QuadraticForm::from_coeffs(&q, 2, [(0, 1, q.one())]);
        assert_eq!(h.find_isotropic(3), IsotropicSearch::Found(vec![q.one(), q.zero()]));
        let f7 = Field::prime(7).unwrap();
        let h = QuadraticForm::from_coeffs(&f7, 2, [(0, 1, f7.one())]);
        assert_eq!(h.find_isotropic(100), IsotropicSearch::Found(vec![f7.one(), f7.zero()]));
    }

    #[test]
    fn definite_form_has_no_small_zero() {
        let q = Field::rationals();
        assert_eq!(sum_of_squares(&q, 8).find_isotropic(2), IsotropicSearch::NotFound { exhausted: false });
    }

    #[test]
    fn four_dimensional_forms_over_gf3_are_isotropic() {
        let f3 = Field::prime(3).unwrap();
        let q = sum_of_squares(&f3, 4);
        let IsotropicSearch::Found(v) = q.find_isotropic(usize::MAX) else { panic!("expected a zero") };
        assert!(is_isotropic_vector(&q, &v));
        // x^2 + y^2 over GF(3) is anisotropic; the search is conclusive.
        assert_eq!(sum_of_squares(&f3, 2).find_isotropic(usize::MAX), IsotropicSearch::NotFound { exhausted: true });
    }

    #[test]
    fn classify_invariant_under_basis_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for f in [Field::rationals(), Field::prime(2).unwrap(), Field::prime(5).unwrap()] {
            for _ in 0..20 {
                let d = 4;
                let mut q = QuadraticForm::zero(&f, d);
                for i in 0..d {
                    for j in i..d {
                        if rng.random_bool(0.4) {
                            q.add_coeff(i, j, &f.random(&mut rng));
                        }
                    }
                }
                let p = loop {
                    let cols: Vec<Vector> = (0..d).map(|_| (0..d).map(|_| f.random(&mut rng)).collect()).collect();
                    let m = Matrix::from_columns(&f, d, &cols);
                    if m.inverse().is_some() {
                        break cols;
                    }
                };
                let c1 = q.classify();
                let c2 = q.in_basis(&p).classify();
                assert_eq!(c1.class, c2.class);
                assert_eq!(c1.radical.len(), c2.radical.len());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let q = Field::rationals();
        let h = QuadraticForm::from_coeffs(&q, 3, [(0, 1, q.one()), (2, 2, q.parse("-1/2").unwrap())]);
        let j = serde_json::to_string(&h.to_json()).unwrap();
        assert_eq!(j, r#"{"dim":3,"coeffs":[[0,1,"1"],[2,2,"-1/2"]]}"#);
        let back = QuadraticForm::from_json(&q, &serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, h);
    }
}
