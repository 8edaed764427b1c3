//! Finite-dimensional algebras given by structure constants, with an
//! optional unit and an optional candidate norm.

mod verify;

use thiserror::Error;

use crate::linalg::{axpy, is_zero_vector, unit_vector, vec_scale, vec_sub, zero_vector, Echelon, Matrix, Vector};
use crate::quadforms::QuadraticForm;
use crate::scalars::{Field, FieldError, Polynomial, Scalar};

pub use verify::{Check, Law, Mode, Report, VerifyMode, Witness, DEFAULT_EXHAUSTIVE_CAP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("algebras must have dimension at least 1")]
    ZeroDimension,
    #[error("structure constant index ({0},{1},{2}) out of range")]
    IndexOutOfRange(usize, usize, usize),
    #[error("element has length {got}, algebra has dimension {expected}")]
    MixedAlgebras { expected: usize, got: usize },
    #[error("algebra has no unit")]
    NoUnit,
    #[error("algebra has no norm")]
    NoNorm,
    #[error("given vector is not a two-sided unit")]
    NotAUnit,
    #[error("norm dimension {0} does not match algebra dimension {1}")]
    NormDimension(usize, usize),
    #[error("verification mode unavailable: {0}")]
    ModeUnavailable(String),
    #[error("base point has zero norm")]
    IsotropicBasePoint,
    #[error("multiplication operator is not invertible")]
    SingularMultiplication,
    #[error("span is not closed under multiplication")]
    NotClosed,
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `e_i e_j = sum_k c_ijk e_k`, stored sparsely.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    pub field: Field,
    pub name: String,
    pub labels: Vec<String>,
    table: Vec<Vec<(usize, Scalar)>>,
    pub unit: Option<Vector>,
    pub norm: Option<QuadraticForm>,
}

impl Algebra {
    /// Builds an algebra from `(i, j, k, c_ijk)` entries; repeated entries are summed.
    pub fn new(
        field: &Field,
        name: &str,
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self, AlgebraError> {
        let d = labels.len();
        if d == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        let mut dense = vec![vec![field.zero(); d]; d * d];
        for (i, j, k, c) in entries {
            if i >= d || j >= d || k >= d {
                return Err(AlgebraError::IndexOutOfRange(i, j, k));
            }
            let slot = &mut dense[i * d + j][k];
            *slot = field.add(slot, &c);
        }
        let table = dense
            .into_iter()
            .map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        Ok(Algebra { field: field.clone(), name: name.to_string(), labels, table, unit: None, norm: None })
    }

    /// Builds an algebra from the products of basis elements, `products[i * d + j] = e_i e_j`.
    pub fn from_products(field: &Field, name: &str, labels: Vec<String>, products: &[Vector]) -> Result<Self, AlgebraError> {
        let d = labels.len();
        let entries = products.iter().enumerate().flat_map(|(ij, v)| {
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (ij / d, ij % d, k, c.clone()))
        });
        Self::new(field, name, labels, entries)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn with_norm(mut self, norm: QuadraticForm) -> Result<Self, AlgebraError> {
        if norm.dim != self.dim() {
            return Err(AlgebraError::NormDimension(norm.dim, self.dim()));
        }
        self.norm = Some(norm);
        Ok(self)
    }

    /// Attaches `u` as the unit after checking `u e_i = e_i u = e_i` for every basis element.
    pub fn with_unit(mut self, u: Vector) -> Result<Self, AlgebraError> {
        self.check_len(&u)?;
        if !self.is_unit(&u) {
            return Err(AlgebraError::NotAUnit);
        }
        self.unit = Some(u);
        Ok(self)
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn norm(&self) -> Result<&QuadraticForm, AlgebraError> {
        self.norm.as_ref().ok_or(AlgebraError::NoNorm)
    }

    pub fn unit(&self) -> Result<&Vector, AlgebraError> {
        self.unit.as_ref().ok_or(AlgebraError::NoUnit)
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(&self.field, self.dim(), i)
    }

    pub fn zero(&self) -> Vector {
        zero_vector(&self.field, self.dim())
    }

    /// Nonzero terms of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_product_vector(&self, i: usize, j: usize) -> Vector {
        let mut v = self.zero();
        for (k, c) in self.basis_product(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    /// All nonzero structure constants `(i, j, k, c)` in index order.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let d = self.dim();
        let mut out = Vec::new();
        for (ij, terms) in self.table.iter().enumerate() {
            for (k, c) in terms {
                out.push((ij / d, ij % d, *k, c.clone()));
            }
        }
        out
    }

    fn check_len(&self, x: &[Scalar]) -> Result<(), AlgebraError> {
        if x.len() != self.dim() {
            return Err(AlgebraError::MixedAlgebras { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, AlgebraError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.mul(x, y))
    }

    /// Product of coordinate vectors; lengths must equal the dimension.
    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let f = &self.field;
        let d = self.dim();
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let terms = &self.table[i * d + j];
                if terms.is_empty() {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (k, s) in terms {
                    out[*k] = f.add(&out[*k], &f.mul(&c, s));
                }
            }
        }
        out
    }

    /// Product of symbolic elements given by polynomial coordinates.
    pub fn mul_poly(&self, x: &[Polynomial], y: &[Polynomial]) -> Vec<Polynomial> {
        let d = self.dim();
        let nvars = x[0].nvars;
        let mut out: Vec<Polynomial> = (0..d).map(|_| Polynomial::zero(&self.field, nvars)).collect();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let terms = &self.table[i * d + j];
                if yj.is_zero() || terms.is_empty() {
                    continue;
                }
                let p = xi.mul(yj);
                for (k, s) in terms {
                    out[*k] = out[*k].add(&p.scale(s));
                }
            }
        }
        out
    }

    /// `L_x`: column `j` is `x e_j`.
    pub fn left_mult(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    /// `R_x`: column `j` is `e_j x`.
    pub fn right_mult(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.mul(&self.basis(j), x)).collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    pub fn is_unit(&self, u: &[Scalar]) -> bool {
        (0..self.dim()).all(|j| {
            let e = self.basis(j);
            self.mul(u, &e) == e && self.mul(&e, u) == e
        })
    }

    /// Solves the linear system for a two-sided unit.
    pub fn find_unit(&self) -> Option<Vector> {
        let d = self.dim();
        let f = &self.field;
        // Unknown u; equations (u e_j)_k = delta_jk and (e_j u)_k = delta_jk.
        let mut m = Matrix::zeros(f, 2 * d * d, d);
        let mut rhs = vec![f.zero(); 2 * d * d];
        for j in 0..d {
            for i in 0..d {
                for (k, c) in self.basis_product(i, j) {
                    m.set(j * d + k, i, c.clone());
                }
                for (k, c) in self.basis_product(j, i) {
                    m.set(d * d + j * d + k, i, c.clone());
                }
            }
            rhs[j * d + j] = f.one();
            rhs[d * d + j * d + j] = f.one();
        }
        let u = m.solve(&rhs)?;
        self.is_unit(&u).then_some(u)
    }

    /// `n(1, x) 1 - x`.
    pub fn conjugate(&self, x: &[Scalar]) -> Result<Vector, AlgebraError> {
        self.check_len(x)?;
        let n = self.norm()?;
        let one = self.unit()?;
        let t = n.polar(one, x);
        Ok(vec_sub(&self.field, &vec_scale(&self.field, &t, one), x))
    }

    /// Basis of `{z : z x = x z for all x}`.
    pub fn commutative_center(&self) -> Vec<Vector> {
        let d = self.dim();
        let f = &self.field;
        let mut m = Matrix::zeros(f, d * d, d);
        for j in 0..d {
            for i in 0..d {
                // Column i: coefficient of z_i in (z e_j - e_j z).
                for (k, c) in self.basis_product(i, j) {
                    let r = j * d + k;
                    let v = f.add(m.get(r, i), c);
                    m.set(r, i, v);
                }
                for (k, c) in self.basis_product(j, i) {
                    let r = j * d + k;
                    let v = f.sub(m.get(r, i), c);
                    m.set(r, i, v);
                }
            }
        }
        m.nullspace()
    }

    /// The algebra on the span of `vectors`, which must be independent and closed
    /// under multiplication. Unit and norm are carried over when they restrict.
    pub fn subalgebra(&self, name: &str, vectors: &[Vector], labels: Vec<String>) -> Result<Algebra, AlgebraError> {
        let mut e = Echelon::new(&self.field, self.dim());
        for v in vectors {
            self.check_len(v)?;
            if !e.insert(v) {
                return Err(AlgebraError::DependentVectors);
            }
        }
        let k = vectors.len();
        let mut products = Vec::with_capacity(k * k);
        for a in vectors {
            for b in vectors {
                products.push(e.coordinates(&self.mul(a, b)).ok_or(AlgebraError::NotClosed)?);
            }
        }
        let mut sub = Algebra::from_products(&self.field, name, labels, &products)?;
        if let Some(n) = &self.norm {
            sub.norm = Some(n.in_basis(vectors));
        }
        if let Some(u) = &self.unit {
            if let Some(c) = e.coordinates(u) {
                sub.unit = Some(c);
            }
        }
        Ok(sub)
    }

    /// The same algebra written in the basis given by the columns of `p`.
    pub fn change_basis(&self, name: &str, p: &Matrix, labels: Vec<String>) -> Result<Algebra, AlgebraError> {
        self.subalgebra(name, &p.columns(), labels)
    }

    /// New algebra on the same space with product `x ◇ y = f(x, y)` given by a
    /// bilinear map evaluated on basis pairs.
    pub fn with_product(&self, name: &str, product: impl Fn(&Vector, &Vector) -> Vector) -> Result<Algebra, AlgebraError> {
        let d = self.dim();
        let mut products = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                products.push(product(&self.basis(i), &self.basis(j)));
            }
        }
        let mut a = Algebra::from_products(&self.field, name, self.labels.clone(), &products)?;
        a.norm = self.norm.clone();
        Ok(a)
    }

    /// Unitalization. For a symmetric composition algebra with base point `a`,
    /// `x ◇ y = n(a)^-1 (a*x)*(y*a)` with unit `n(a)^-1 a*a` (this is the product
    /// for the norm-one point `a / sqrt(n(a))`, written without square roots).
    /// Otherwise `x ◇ y = R_u^-1(x) L_u^-1(y)` with `u = a a / n(a)` and unit `u u`.
    pub fn kaplansky_unitalize(&self, a: &[Scalar]) -> Result<Algebra, AlgebraError> {
        self.check_len(a)?;
        let f = &self.field;
        let n = self.norm()?;
        let na = n.eval(a);
        let na_inv = f.inv(&na).ok_or(AlgebraError::IsotropicBasePoint)?;
        let a = a.to_vec();
        let symmetric = self.unit.is_none() && self.verify_symmetric()?.passed;
        let name = format!("{} (unitalized)", self.name);
        let (alg, unit) = if symmetric {
            let alg = self.with_product(&name, |x, y| {
                vec_scale(f, &na_inv, &self.mul(&self.mul(&a, x), &self.mul(y, &a)))
            })?;
            let e = vec_scale(f, &na_inv, &self.mul(&a, &a));
            (alg, e)
        } else {
            let u = vec_scale(f, &na_inv, &self.mul(&a, &a));
            let ri = self.right_mult(&u).inverse().ok_or(AlgebraError::SingularMultiplication)?;
            let li = self.left_mult(&u).inverse().ok_or(AlgebraError::SingularMultiplication)?;
            let alg = self.with_product(&name, |x, y| self.mul(&ri.apply(x), &li.apply(y)))?;
            let e = self.mul(&u, &u);
            (alg, e)
        };
        alg.with_unit(unit).map_err(|_| AlgebraError::SingularMultiplication)
    }

    /// `x` written in the basis labels, e.g. `e1+2*u3`.
    pub fn format_element(&self, x: &[Scalar]) -> String {
        let f = &self.field;
        let minus_one = f.neg(&f.one());
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let l = &self.labels[i];
                if f.is_one(c) {
                    l.clone()
                } else if *c == minus_one {
                    format!("-{l}")
                } else {
                    let s = f.format(c);
                    if crate::scalars::is_compound(&s) || s.contains('/') {
                        format!("({s})*{l}")
                    } else {
                        format!("{s}*{l}")
                    }
                }
            })
            .collect();
        crate::scalars::join_terms(&terms)
    }

    /// Parses a linear combination of basis labels such as `e1 - 2*u3 + (1/2)*v1`.
    pub fn parse_element(&self, s: &str) -> Result<Vector, AlgebraError> {
        let f = &self.field;
        let mut out = self.zero();
        let bad = |reason: &str| FieldError::Parse { input: s.to_string(), reason: reason.to_string() };
        for (sign, term) in split_signed_terms(s).map_err(|r| bad(&r))? {
            let (coeff, label) = match term.rsplit_once('*') {
                Some((c, l)) if self.labels.iter().any(|x| x == l.trim()) => (f.parse(c)?, l.trim().to_string()),
                _ if self.labels.iter().any(|x| x == term.trim()) => (f.one(), term.trim().to_string()),
                _ => (f.parse(&term)?, String::new()),
            };
            let coeff = if sign { f.neg(&coeff) } else { coeff };
            if label.is_empty() {
                let u = self.unit.as_ref().ok_or_else(|| bad("scalar term needs a unit"))?;
                axpy(f, &mut out, &coeff, u);
            } else {
                let i = self.labels.iter().position(|x| *x == label).expect("label checked");
                out[i] = f.add(&out[i], &coeff);
            }
        }
        Ok(out)
    }

    /// Row-by-column multiplication table: entry `(r, c)` is `e_order[r] e_order[c]`.
    pub fn multiplication_table(&self, order: &[usize]) -> String {
        let cells: Vec<Vec<String>> = order
            .iter()
            .map(|&i| {
                order
                    .iter()
                    .map(|&j| {
                        let v = self.basis_product_vector(i, j);
                        if is_zero_vector(&v) {
                            "0".to_string()
                        } else {
                            self.format_element(&v)
                        }
                    })
                    .collect()
            })
            .collect();
        let head: Vec<String> = order.iter().map(|&i| self.labels[i].clone()).collect();
        let width = cells
            .iter()
            .flatten()
            .chain(head.iter())
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1);
        let pad = |s: &str| format!("{s:>width$}");
        let mut out = String::new();
        out.push_str(&pad(""));
        out.push_str(" |");
        for h in &head {
            out.push(' ');
            out.push_str(&pad(h));
        }
        out.push('\n');
        out.push_str(&"-".repeat((width + 1) * (head.len() + 1) + 1));
        out.push('\n');
        for (h, row) in head.iter().zip(&cells) {
            out.push_str(&pad(h));
            out.push_str(" |");
            for c in row {
                out.push(' ');
                out.push_str(&pad(c));
            }
            out.push('\n');
        }
        out
    }
}

/// Splits at top-level `+`/`-`, returning (negated, term).
fn split_signed_terms(s: &str) -> Result<Vec<(bool, String)>, String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        // A sign directly after `*`, `/`, `^` or `(` belongs to the factor.
        let after_operand = cur.chars().last().is_some_and(|c| !matches!(c, '*' | '/' | '^' | '('));
        if depth == 0 && (ch == '+' || ch == '-') && (cur.is_empty() || after_operand) {
            if !cur.is_empty() {
                out.push((neg, std::mem::take(&mut cur)));
                neg = false;
            }
            if ch == '-' {
                neg = !neg;
            }
            continue;
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err("unbalanced parentheses".into());
    }
    if cur.is_empty() {
        return Err(if out.is_empty() { "empty element" } else { "dangling operator" }.into());
    }
    out.push((neg, cur));
    Ok(out)
}

/// `2^(n-1) (2m - 1)`, a bijection from pairs of positive integers onto the positive integers.
pub fn urbanik_wright_index(n: u32, m: u64) -> Option<u64> {
    if n == 0 || m == 0 {
        return None;
    }
    let odd = m.checked_mul(2)?.checked_sub(1)?;
    1u64.checked_shl(n - 1)?.checked_mul(odd)
}

pub fn urbanik_wright_inverse(k: u64) -> Option<(u32, u64)> {
    if k == 0 {
        return None;
    }
    let n = k.trailing_zeros();
    let odd = k >> n;
    Some((n + 1, odd.div_ceil(2)))
}

#[cfg(test)]
mod tests;
