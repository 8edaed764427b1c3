//! Dense linear algebra over an exact [`Field`].
//!
//! Matrices act on column vectors: column `j` is the image of `e_j`.

use crate::scalars::{Field, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(f: &Field, n: usize) -> Vector {
    vec![f.zero(); n]
}

pub fn unit_vector(f: &Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(f, n);
    v[i] = f.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vec_add(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn vec_sub(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn vec_neg(f: &Field, a: &[Scalar]) -> Vector {
    a.iter().map(|x| f.neg(x)).collect()
}

pub fn vec_scale(f: &Field, c: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| f.mul(c, x)).collect()
}

/// `acc += c * v`, skipping zero entries.
pub fn axpy(f: &Field, acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = f.add(a, &f.mul(c, x));
        }
    }
}

pub fn dot(f: &Field, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn scalar(field: &Field, n: usize, c: &Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_columns(field: &Field, rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().cloned());
        }
        Matrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { data: vec_add(&self.field, &self.data, &other.data), ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { data: vec_sub(&self.field, &self.data, &other.data), ..self.clone() }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { data: vec_neg(&self.field, &self.data), ..self.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { data: vec_scale(&self.field, c, &self.data), ..self.clone() }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| dot(&self.field, &self.data[i * self.cols..(i + 1) * self.cols], v)).collect()
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            acc = self.field.add(&acc, self.get(i, i));
        }
        acc
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            let pivot_row = m.row(r);
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    if !pivot_row[j].is_zero() {
                        let v = f.sub(m.get(i, j), &f.mul(&factor, &pivot_row[j]));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(&self.field, self.cols);
        for i in 0..self.rows {
            e.insert(&self.row(i));
        }
        e.rank()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vector> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = zero_vector(f, self.cols);
            v[free] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `M x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let f = &self.field;
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vector(f, self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let f = &self.field;
        let mut aug = Self::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return f.zero() };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), &inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Incrementally built row echelon basis of a span, remembering how each
/// echelon row is expressed through the accepted input vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    len: usize,
    rows: Vec<EchelonRow>,
}

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    vector: Vector,
    combination: Vector,
}

impl Echelon {
    pub fn new(field: &Field, len: usize) -> Self {
        Echelon { field: field.clone(), len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after elimination, and the combination of accepted inputs removed.
    pub fn reduce(&self, v: &[Scalar]) -> (Vector, Vector) {
        let f = &self.field;
        let mut r = v.to_vec();
        let mut comb = zero_vector(f, self.rows.len());
        for row in &self.rows {
            let c = r[row.pivot].clone();
            if c.is_zero() {
                continue;
            }
            axpy(f, &mut r, &f.neg(&c), &row.vector);
            axpy(f, &mut comb, &c, &row.combination);
        }
        (r, comb)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v).0)
    }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let f = self.field.clone();
        let (r, comb) = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else { return false };
        let inv = f.inv(&r[pivot]).expect("nonzero");
        // r = v - sum comb_i b_i, so r / r_p = (e_k - comb) / r_p in input coordinates.
        let mut combination: Vector = comb.iter().map(|c| f.neg(&f.mul(c, &inv))).collect();
        combination.push(inv.clone());
        for row in &mut self.rows {
            row.combination.push(f.zero());
        }
        self.rows.push(EchelonRow { pivot, vector: vec_scale(&f, &inv, &r), combination });
        true
    }

    /// Coordinates of `v` in terms of the accepted inputs, in insertion order.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        let (r, comb) = self.reduce(v);
        is_zero_vector(&r).then_some(comb)
    }
}

/// Keeps a maximal independent subset of `vectors`, in order.
pub fn independent_subset(field: &Field, len: usize, vectors: &[Vector]) -> Vec<Vector> {
    let mut e = Echelon::new(field, len);
    vectors.iter().filter(|v| e.insert(v)).cloned().collect()
}
