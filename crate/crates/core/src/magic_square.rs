//! Lie algebras `g(S, S')` built from two symmetric composition algebras,
//! Jacobi and invariant checks, and the 4x4 dimension grid.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Check, Mode, Report, Witness};
use crate::hurwitz::{cayley_dickson, ground};
use crate::linalg::{Echelon, Matrix, Vector};
use crate::scalars::{Field, Scalar};
use crate::symcomp::{para, split_okubo, SymcompError};
use crate::triality::{span_of, t_components, tri_solution_basis, TrialityError, TrialityTriple};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MagicError {
    #[error("characteristic {0} is not supported (need char not 2 or 3)")]
    BadCharacteristic(u64),
    #[error("{0} is not a symmetric composition algebra")]
    NotSymmetricComposition(String),
    #[error("algebras are defined over different fields")]
    FieldMismatch,
    #[error("bracket of a basis element with itself")]
    SelfBracket,
    #[error("index ({0}, {1}, {2}) out of range")]
    IndexOutOfRange(usize, usize, usize),
    #[error("t_{{x,y}} does not lie in the triality algebra of {0}")]
    SpanMismatch(String),
    #[error(transparent)]
    Triality(#[from] TrialityError),
    #[error(transparent)]
    Symcomp(#[from] SymcompError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A named block of consecutive basis indices.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct Sector {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

/// A Lie algebra given by antisymmetric structure constants `[e_i, e_j] = sum_k c_ijk e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    pub field: Field,
    pub labels: Vec<String>,
    pub sectors: Vec<Sector>,
    table: Vec<Vec<(usize, Scalar)>>,
}

impl LieAlgebra {
    /// Builds from entries `(i, j, k, c)` with `i != j`; `(j, i, k, -c)` is implied.
    /// Entries for the same pair are summed.
    pub fn new(
        field: &Field,
        labels: Vec<String>,
        sectors: Vec<Sector>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self, MagicError> {
        let n = labels.len();
        let f = field;
        let mut acc: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>> = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i >= n || j >= n || k >= n {
                return Err(MagicError::IndexOutOfRange(i, j, k));
            }
            if i == j {
                if c.is_zero() {
                    continue;
                }
                return Err(MagicError::SelfBracket);
            }
            let (key, c) = if i < j { ((i, j), c) } else { ((j, i), f.neg(&c)) };
            let slot = acc.entry(key).or_default().entry(k).or_insert_with(|| f.zero());
            *slot = f.add(slot, &c);
        }
        let mut table = vec![Vec::new(); n * n];
        for ((i, j), row) in acc {
            let row: Vec<(usize, Scalar)> = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            table[j * n + i] = row.iter().map(|(k, c)| (*k, f.neg(c))).collect();
            table[i * n + j] = row;
        }
        Ok(LieAlgebra { field: f.clone(), labels, sectors, table })
    }

    /// The abelian Lie algebra of dimension `n`.
    pub fn abelian(field: &Field, n: usize) -> Self {
        let labels = (1..=n).map(|i| format!("a{i}")).collect();
        LieAlgebra::new(field, labels, Vec::new(), []).expect("no entries")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Nonzero terms of `[e_i, e_j]`, sorted by index.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = f.mul(a, b);
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k] = f.add(&out[*k], &f.mul(&ab, c));
                }
            }
        }
        out
    }

    /// Entries `(i, j, k, c)` with `i < j`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (k, c) in self.bracket_basis(i, j) {
                    out.push((i, j, k.to_owned(), c.clone()));
                }
            }
        }
        out
    }

    /// The same algebra with `c_ijk` (and `c_jik`) negated.
    pub fn with_flipped_sign(&self, i: usize, j: usize, k: usize) -> Self {
        let f = &self.field;
        let entries = self.structure_constants().into_iter().map(|(a, b, m, c)| {
            if (a, b, m) == (i.min(j), i.max(j), k) {
                (a, b, m, f.neg(&c))
            } else {
                (a, b, m, c)
            }
        });
        LieAlgebra::new(f, self.labels.clone(), self.sectors.clone(), entries).expect("valid indices")
    }

    /// Whether the columns of `m` (images of basis elements) preserve all basis brackets.
    pub fn is_automorphism(&self, m: &Matrix) -> bool {
        let n = self.dim();
        let images = m.columns();
        (0..n * n).into_par_iter().all(|ij| {
            let (i, j) = (ij / n, ij % n);
            let lhs = m.apply(&self.bracket(&self.basis(i), &self.basis(j)));
            lhs == self.bracket(&images[i], &images[j])
        })
    }

    pub fn basis(&self, i: usize) -> Vector {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn sector(&self, name: &str) -> Option<&Sector> {
        self.sectors.iter().find(|s| s.name == name)
    }

    fn add_bracket_into(&self, acc: &mut BTreeMap<usize, Scalar>, coeffs: &[(usize, Scalar)], k: usize) {
        let f = &self.field;
        for (m, c) in coeffs {
            for (l, d) in self.bracket_basis(*m, k) {
                let slot = acc.entry(*l).or_insert_with(|| f.zero());
                *slot = f.add(slot, &f.mul(c, d));
            }
        }
    }

    fn jacobi_holds(&self, i: usize, j: usize, k: usize) -> bool {
        let mut acc = BTreeMap::new();
        self.add_bracket_into(&mut acc, self.bracket_basis(i, j), k);
        self.add_bracket_into(&mut acc, self.bracket_basis(j, k), i);
        self.add_bracket_into(&mut acc, self.bracket_basis(k, i), j);
        acc.values().all(Scalar::is_zero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobiMode {
    /// All triples `i < j < k`.
    Full,
    /// `count` triples drawn from a seeded generator.
    Sample { count: usize, seed: u64 },
}

/// Jacobi identity on basis triples; the witness is the first failing triple
/// (lexicographic in full mode, in draw order when sampling).
pub fn jacobi_check(l: &LieAlgebra, mode: JacobiMode) -> Report {
    let n = l.dim();
    let (failure, mode_tag, detail) = match mode {
        JacobiMode::Full => {
            let failure = (0..n).into_par_iter().find_map_first(|i| {
                (i + 1..n).find_map(|j| (j + 1..n).find(|&k| !l.jacobi_holds(i, j, k)).map(|k| (i, j, k)))
            });
            let total = if n < 3 { 0 } else { n * (n - 1) * (n - 2) / 6 };
            (failure, Mode::BasisTuples, format!("{total} triples"))
        }
        JacobiMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<(usize, usize, usize)> = if n < 3 {
                Vec::new()
            } else {
                (0..count)
                    .map(|_| loop {
                        let mut t = [rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)];
                        t.sort_unstable();
                        if t[0] < t[1] && t[1] < t[2] {
                            break (t[0], t[1], t[2]);
                        }
                    })
                    .collect()
            };
            let failure = triples.par_iter().find_first(|&&(i, j, k)| !l.jacobi_holds(i, j, k)).copied();
            (failure, Mode::Sampled, format!("{count} sampled triples, seed {seed}"))
        }
    };
    let witness = failure.map(|(i, j, k)| Witness::Basis {
        elements: vec![l.labels[i].clone(), l.labels[j].clone(), l.labels[k].clone()],
    });
    let check = Check {
        name: "[[x,y],z] + [[y,z],x] + [[z,x],y] = 0".into(),
        mode: mode_tag,
        passed: witness.is_none(),
        witness,
        detail: Some(detail),
    };
    Report::new(&format!("Lie algebra of dimension {n}"), "Jacobi identity", vec![check])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LieInvariants {
    pub dim: usize,
    /// Dimension of `{z : [z, x] = 0 for all x}`.
    pub center: usize,
    /// Dimension of `[L, L]`.
    pub derived: usize,
    /// Rank of the Killing form `tr(ad x ad y)`.
    pub killing_rank: usize,
}

pub fn lie_invariants(l: &LieAlgebra) -> LieInvariants {
    let n = l.dim();
    let f = &l.field;

    let mut adjoint = Echelon::new(f, n);
    'center: for j in 0..n {
        let mut rows: BTreeMap<usize, Vector> = BTreeMap::new();
        for i in 0..n {
            for (k, c) in l.bracket_basis(i, j) {
                rows.entry(*k).or_insert_with(|| vec![f.zero(); n])[i] = c.clone();
            }
        }
        for row in rows.values() {
            adjoint.insert(row);
            if adjoint.rank() == n {
                break 'center;
            }
        }
    }

    let mut derived = Echelon::new(f, n);
    'derived: for i in 0..n {
        for j in i + 1..n {
            let coeffs = l.bracket_basis(i, j);
            if coeffs.is_empty() {
                continue;
            }
            let mut v = vec![f.zero(); n];
            for (k, c) in coeffs {
                v[*k] = c.clone();
            }
            derived.insert(&v);
            if derived.rank() == n {
                break 'derived;
            }
        }
    }

    // K(e_i, e_j) = sum_m sum_k c_imk c_jkm.
    let coeff = |j: usize, k: usize, m: usize| {
        let row = l.bracket_basis(j, k);
        row.binary_search_by_key(&m, |(idx, _)| *idx).ok().map(|p| &row[p].1)
    };
    let upper: Vec<Vec<Scalar>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    let mut s = f.zero();
                    for m in 0..n {
                        for (k, c) in l.bracket_basis(i, m) {
                            if let Some(d) = coeff(j, *k, m) {
                                s = f.add(&s, &f.mul(c, d));
                            }
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let mut killing = Matrix::zeros(f, n, n);
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            killing.set(i + off, i, v.clone());
            killing.set(i, i + off, v);
        }
    }

    LieInvariants { dim: n, center: n - adjoint.rank(), derived: derived.rank(), killing_rank: killing.rank() }
}

/// Symmetric composition algebra with its triality data in a fixed basis.
struct Prepared {
    alg: Algebra,
    tri: Vec<TrialityTriple>,
    /// Coordinates of `theta^i(t_{e_a, e_c})` at `[i][a * dim + c]`.
    t: [Vec<Vector>; 3],
    /// Coordinates of `[b_p, b_q]` at `[p * len + q]`.
    tri_brackets: Vec<Vector>,
    /// Matrix of `theta` on coordinates.
    theta: Matrix,
}

fn prepare(s: &Algebra) -> Result<Prepared, MagicError> {
    let f = &s.field;
    if !s.verify_symmetric()?.passed {
        return Err(MagicError::NotSymmetricComposition(s.name.clone()));
    }
    let tri = tri_solution_basis(s)?;
    let k = tri.len();
    let d = s.dim();
    let span = span_of(f, &tri);
    let coords = |t: &TrialityTriple| -> Result<Vector, MagicError> {
        if k == 0 {
            return if t.is_zero() { Ok(Vec::new()) } else { Err(MagicError::SpanMismatch(s.name.clone())) };
        }
        span.coordinates(&t.flatten()).ok_or_else(|| MagicError::SpanMismatch(s.name.clone()))
    };
    let theta_cols = tri.iter().map(|b| coords(&b.theta())).collect::<Result<Vec<_>, _>>()?;
    let theta = Matrix::from_columns(f, k, &theta_cols);
    let mut t: [Vec<Vector>; 3] = Default::default();
    for a in 0..d {
        for c in 0..d {
            let mut v = coords(&t_components(s, &s.basis(a), &s.basis(c))?)?;
            for slot in t.iter_mut() {
                slot.push(v.clone());
                v = if k == 0 { v } else { theta.apply(&v) };
            }
        }
    }
    let mut tri_brackets = Vec::with_capacity(k * k);
    for p in &tri {
        for q in &tri {
            tri_brackets.push(coords(&p.bracket(q))?);
        }
    }
    Ok(Prepared { alg: s.clone(), tri, t, tri_brackets, theta })
}

fn check_inputs(s: &Algebra, s2: &Algebra) -> Result<(), MagicError> {
    if s.field != s2.field {
        return Err(MagicError::FieldMismatch);
    }
    let p = s.field.characteristic();
    if p == 2 || p == 3 {
        return Err(MagicError::BadCharacteristic(p));
    }
    Ok(())
}

struct Layout {
    a: usize,
    b: usize,
    r: usize,
    s: usize,
}

impl Layout {
    fn new(p: &Prepared, q: &Prepared) -> Self {
        Layout { a: p.tri.len(), b: q.tri.len(), r: p.alg.dim(), s: q.alg.dim() }
    }

    fn iota(&self, i: usize, x: usize, y: usize) -> usize {
        self.a + self.b + (i % 3) * self.r * self.s + x * self.s + y
    }

    fn dim(&self) -> usize {
        self.a + self.b + 3 * self.r * self.s
    }
}

fn assemble(p: &Prepared, q: &Prepared) -> Result<LieAlgebra, MagicError> {
    let f = &p.alg.field;
    let lay = Layout::new(p, q);
    let (a, b, r, s) = (lay.a, lay.b, lay.r, lay.s);
    let (n, n2) = (p.alg.norm()?, q.alg.norm()?);
    let mut e: Vec<(usize, usize, usize, Scalar)> = Vec::new();

    for (prep, off) in [(p, 0), (q, a)] {
        let k = prep.tri.len();
        for i in 0..k {
            for j in i + 1..k {
                for (m, c) in prep.tri_brackets[i * k + j].iter().enumerate() {
                    if !c.is_zero() {
                        e.push((off + i, off + j, off + m, c.clone()));
                    }
                }
            }
        }
    }
    for i in 0..3 {
        for (pi, t) in p.tri.iter().enumerate() {
            let d = &t.d[i];
            for x in 0..r {
                for y in 0..s {
                    for z in 0..r {
                        let c = d.get(z, x);
                        if !c.is_zero() {
                            e.push((pi, lay.iota(i, x, y), lay.iota(i, z, y), c.clone()));
                        }
                    }
                }
            }
        }
        for (qi, t) in q.tri.iter().enumerate() {
            let d = &t.d[i];
            for x in 0..r {
                for y in 0..s {
                    for z in 0..s {
                        let c = d.get(z, y);
                        if !c.is_zero() {
                            e.push((a + qi, lay.iota(i, x, y), lay.iota(i, x, z), c.clone()));
                        }
                    }
                }
            }
        }
        // [iota_i(x⊗x'), iota_{i+1}(y⊗y')] = iota_{i+2}((x*y)⊗(x'*y')).
        for x in 0..r {
            for y in 0..r {
                let xy = p.alg.basis_product(x, y);
                if xy.is_empty() {
                    continue;
                }
                for x2 in 0..s {
                    for y2 in 0..s {
                        for (u, c1) in xy {
                            for (v, c2) in q.alg.basis_product(x2, y2) {
                                e.push((lay.iota(i, x, x2), lay.iota(i + 1, y, y2), lay.iota(i + 2, *u, *v), f.mul(c1, c2)));
                            }
                        }
                    }
                }
            }
        }
        // [iota_i(x⊗x'), iota_i(y⊗y')] = n'(x',y') theta^i(t_{x,y}) + n(x,y) theta'^i(t'_{x',y'}).
        for x in 0..r {
            for x2 in 0..s {
                for y in 0..r {
                    for y2 in 0..s {
                        let (u, v) = (lay.iota(i, x, x2), lay.iota(i, y, y2));
                        if u >= v {
                            continue;
                        }
                        let np = n2.polar(&q.alg.basis(x2), &q.alg.basis(y2));
                        if !np.is_zero() {
                            for (m, c) in p.t[i][x * r + y].iter().enumerate() {
                                if !c.is_zero() {
                                    e.push((u, v, m, f.mul(&np, c)));
                                }
                            }
                        }
                        let nn = n.polar(&p.alg.basis(x), &p.alg.basis(y));
                        if !nn.is_zero() {
                            for (m, c) in q.t[i][x2 * s + y2].iter().enumerate() {
                                if !c.is_zero() {
                                    e.push((u, v, a + m, f.mul(&nn, c)));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let mut labels: Vec<String> = (1..=a).map(|i| format!("t{i}")).collect();
    labels.extend((1..=b).map(|i| format!("t'{i}")));
    for i in 0..3 {
        for x in 0..r {
            for y in 0..s {
                labels.push(format!("i{i}({},{})", p.alg.labels[x], q.alg.labels[y]));
            }
        }
    }
    let sectors = vec![
        Sector { name: "tri".into(), start: 0, len: a },
        Sector { name: "tri'".into(), start: a, len: b },
        Sector { name: "iota0".into(), start: a + b, len: r * s },
        Sector { name: "iota1".into(), start: a + b + r * s, len: r * s },
        Sector { name: "iota2".into(), start: a + b + 2 * r * s, len: r * s },
    ];
    debug_assert_eq!(labels.len(), lay.dim());
    LieAlgebra::new(f, labels, sectors, e)
}

/// `g(S, S') = tri(S) + tri(S') + iota_0(S⊗S') + iota_1(S⊗S') + iota_2(S⊗S')`.
pub fn build_g(s: &Algebra, s2: &Algebra) -> Result<LieAlgebra, MagicError> {
    check_inputs(s, s2)?;
    assemble(&prepare(s)?, &prepare(s2)?)
}

/// The map `theta` on `tri(S)`, `theta'` on `tri(S')`, `iota_i -> iota_(i+1)`,
/// as a matrix on the basis of [`build_g`].
pub fn sector_rotation(s: &Algebra, s2: &Algebra) -> Result<Matrix, MagicError> {
    check_inputs(s, s2)?;
    let (p, q) = (prepare(s)?, prepare(s2)?);
    let lay = Layout::new(&p, &q);
    let f = &s.field;
    let mut m = Matrix::zeros(f, lay.dim(), lay.dim());
    for (prep, off) in [(&p, 0), (&q, lay.a)] {
        let k = prep.tri.len();
        for i in 0..k {
            for j in 0..k {
                m.set(off + i, off + j, prep.theta.get(i, j).clone());
            }
        }
    }
    for i in 0..3 {
        for x in 0..lay.r {
            for y in 0..lay.s {
                m.set(lay.iota(i + 1, x, y), lay.iota(i, x, y), f.one());
            }
        }
    }
    Ok(m)
}

/// `iota_i(x ⊗ x')` in `g`.
pub fn iota(l: &LieAlgebra, i: usize, x: &[Scalar], xp: &[Scalar]) -> Vector {
    let f = &l.field;
    let sector = l.sector(&format!("iota{}", i % 3)).expect("magic square algebra");
    let mut v = vec![f.zero(); l.dim()];
    for (a, ca) in x.iter().enumerate() {
        for (b, cb) in xp.iter().enumerate() {
            v[sector.start + a * xp.len() + b] = f.mul(ca, cb);
        }
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    /// Para-Hurwitz algebras of the Cayley–Dickson tower with parameters -1.
    Para,
    /// As `Para`, with the split Okubo algebra in the dimension 8 slot.
    OkuboMix,
}

pub const MAGIC_DIMS: [usize; 4] = [1, 2, 4, 8];

/// The symmetric composition algebra of dimension `dim` used for the grid.
pub fn magic_slot(field: &Field, dim: usize, flavor: Flavor) -> Result<Algebra, MagicError> {
    if dim == 8 && flavor == Flavor::OkuboMix {
        return Ok(split_okubo(field));
    }
    let levels = MAGIC_DIMS.iter().position(|&d| d == dim).ok_or(MagicError::NotSymmetricComposition(format!("dimension {dim}")))?;
    let mut h = ground(field);
    for _ in 0..levels {
        h = cayley_dickson(&h, &field.from_i64(-1)).map_err(|e| MagicError::NotSymmetricComposition(e.to_string()))?;
    }
    Ok(para(&h)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MagicTable {
    pub field: String,
    pub flavor: Flavor,
    pub sizes: [usize; 4],
    /// `dims[r][s] = dim g(S_r, S'_s)`.
    pub dims: [[usize; 4]; 4],
}

pub fn magic_table(field: &Field, flavor: Flavor) -> Result<MagicTable, MagicError> {
    let p = field.characteristic();
    if p == 2 || p == 3 {
        return Err(MagicError::BadCharacteristic(p));
    }
    let prepared = MAGIC_DIMS
        .iter()
        .map(|&d| prepare(&magic_slot(field, d, flavor)?))
        .collect::<Result<Vec<_>, _>>()?;
    let mut dims = [[0; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            dims[r][s] = assemble(&prepared[r], &prepared[s])?.dim();
        }
    }
    Ok(MagicTable { field: field.name(), flavor, sizes: MAGIC_DIMS, dims })
}

/// `dim tri(S)` from the solution space of its defining conditions.
pub fn tri_dimension(s: &Algebra) -> Result<usize, MagicError> {
    Ok(tri_solution_basis(s)?.len())
}
