//! Identity checking: symbolic expansion in generic elements, enumeration of
//! basis tuples for multilinear identities, and exhaustive search over small
//! finite fields.

use rayon::prelude::*;
use serde::Serialize;

use super::{Algebra, AlgebraError};
use crate::linalg::{is_zero_vector, vec_sub, Vector};
use crate::quadforms::FormClass;
use crate::scalars::{Polynomial, ZeroTest};

/// Largest number of element pairs an exhaustive check may visit by default.
pub const DEFAULT_EXHAUSTIVE_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Symbolic,
    /// Enumerate all pairs of elements, refusing if there are more than `cap`.
    Exhaustive { cap: u128 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Symbolic,
    Exhaustive,
    BasisTuples,
    Linear,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    Associative,
    Commutative,
    Flexible,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Largest surviving monomial of a nonzero coordinate of the defect.
    Monomial { component: String, monomial: String, coeff: String },
    /// First failing tuple of basis elements in canonical order.
    Basis { elements: Vec<String> },
    /// First failing tuple of field-valued elements.
    Elements { elements: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub mode: Mode,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub subject: String,
    pub property: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: &str, property: &str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Report { subject: subject.to_string(), property: property.to_string(), passed, checks }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = format!("{}: {} {}\n", self.subject, self.property, if self.passed { "PASS" } else { "FAIL" });
        for c in &self.checks {
            out.push_str(&format!("  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name));
            if let Some(d) = &c.detail {
                out.push_str(&format!(" ({d})"));
            }
            if let Some(w) = &c.witness {
                out.push_str(&format!(" witness: {}", w.describe()));
            }
            out.push('\n');
        }
        out
    }
}

impl Witness {
    pub fn describe(&self) -> String {
        match self {
            Witness::Monomial { component, monomial, coeff } => format!("coefficient {coeff} of {monomial} in {component}"),
            Witness::Basis { elements } | Witness::Elements { elements } => format!("({})", elements.join(", ")),
        }
    }
}

const ARG_NAMES: [&str; 4] = ["x", "y", "z", "t"];

impl Algebra {
    /// Generic elements `x, y, ...` whose coordinates are independent indeterminates.
    fn generic_elements(&self, nargs: usize) -> (Vec<Vec<Polynomial>>, Vec<String>) {
        let d = self.dim();
        let nvars = d * nargs;
        let elems = (0..nargs)
            .map(|a| (0..d).map(|i| Polynomial::var(&self.field, nvars, a * d + i)).collect())
            .collect();
        let names = (0..nargs).flat_map(|a| (1..=d).map(move |i| format!("{}{}", ARG_NAMES[a], i))).collect();
        (elems, names)
    }

    pub(crate) fn constant_poly(&self, v: &[crate::scalars::Scalar], nvars: usize) -> Vec<Polynomial> {
        v.iter().map(|c| Polynomial::constant(&self.field, nvars, c.clone())).collect()
    }

    /// Expands `identity` on generic elements and checks every coordinate vanishes.
    pub(crate) fn symbolic_check(
        &self,
        name: &str,
        nargs: usize,
        identity: impl Fn(&[Vec<Polynomial>]) -> Vec<Polynomial>,
    ) -> Check {
        let (elems, names) = self.generic_elements(nargs);
        let defect = identity(&elems);
        let component = |k: usize| {
            if defect.len() == self.dim() {
                self.labels[k].clone()
            } else {
                "value".to_string()
            }
        };
        let witness = defect.iter().enumerate().find_map(|(k, p)| match p.zero_test() {
            ZeroTest::Zero => None,
            ZeroTest::NonZero { monomial, coeff } => Some(Witness::Monomial {
                component: component(k),
                monomial: monomial.format(&names),
                coeff: self.field.format(&coeff),
            }),
        });
        Check { name: name.to_string(), mode: Mode::Symbolic, passed: witness.is_none(), witness, detail: None }
    }

    /// Tests `holds` on all `arity`-tuples of basis indices; the first failure in
    /// lexicographic order is the witness.
    pub(crate) fn basis_check(&self, name: &str, arity: usize, holds: impl Fn(&[usize]) -> bool + Sync) -> Check {
        let d = self.dim();
        let total = d.pow(arity as u32);
        let decode = |mut idx: usize| {
            let mut t = vec![0; arity];
            for slot in t.iter_mut().rev() {
                *slot = idx % d;
                idx /= d;
            }
            t
        };
        let failure = (0..total).into_par_iter().find_first(|&idx| !holds(&decode(idx)));
        let witness = failure.map(|idx| Witness::Basis {
            elements: decode(idx).iter().map(|&i| self.labels[i].clone()).collect(),
        });
        Check { name: name.to_string(), mode: Mode::BasisTuples, passed: witness.is_none(), witness, detail: None }
    }

    fn norm_nonsingular_check(&self) -> Result<Check, AlgebraError> {
        let c = self.norm()?.classify();
        let class = match c.class {
            FormClass::Nondegenerate => "nondegenerate",
            FormClass::NonsingularChar2 => "nonsingular (characteristic 2)",
            FormClass::Singular => "singular",
        };
        Ok(Check {
            name: "norm is nonsingular".into(),
            mode: Mode::Linear,
            passed: c.is_nonsingular(),
            witness: None,
            detail: Some(format!("{class}, radical dimension {}", c.radical.len())),
        })
    }

    /// `n(x y) = n(x) n(y)` together with nonsingularity of `n`.
    pub fn verify_composition(&self, mode: VerifyMode) -> Result<Report, AlgebraError> {
        let n = self.norm()?;
        let law = match mode {
            VerifyMode::Symbolic => self.symbolic_check("n(xy) = n(x)n(y)", 2, |e| {
                let nx = n.to_polynomial(&e[0]);
                let ny = n.to_polynomial(&e[1]);
                vec![n.to_polynomial(&self.mul_poly(&e[0], &e[1])).sub(&nx.mul(&ny))]
            }),
            VerifyMode::Exhaustive { cap } => self.exhaustive_composition(cap)?,
        };
        Ok(Report::new(&self.name, "composition", vec![self.norm_nonsingular_check()?, law]))
    }

    fn exhaustive_composition(&self, cap: u128) -> Result<Check, AlgebraError> {
        let f = &self.field;
        let n = self.norm()?;
        let q = f.size().ok_or_else(|| AlgebraError::ModeUnavailable(format!("{} is infinite", f.name())))?;
        let count = q.checked_pow(self.dim() as u32).filter(|c| c.checked_mul(*c).is_some_and(|p| p <= cap));
        let Some(count) = count else {
            return Err(AlgebraError::ModeUnavailable(format!(
                "{}^{} element pairs exceed the cap {cap}",
                q,
                2 * self.dim()
            )));
        };
        let element = |mut idx: u128| -> Vector {
            (0..self.dim())
                .map(|_| {
                    let c = f.element_at(idx % q);
                    idx /= q;
                    c
                })
                .collect()
        };
        let elems: Vec<Vector> = (0..count).map(element).collect();
        let norms: Vec<_> = elems.iter().map(|x| n.eval(x)).collect();
        let total = count * count;
        let failure = (0..total).into_par_iter().find_first(|&idx| {
            let (a, b) = ((idx / count) as usize, (idx % count) as usize);
            n.eval(&self.mul(&elems[a], &elems[b])) != f.mul(&norms[a], &norms[b])
        });
        let witness = failure.map(|idx| Witness::Elements {
            elements: vec![
                self.format_element(&elems[(idx / count) as usize]),
                self.format_element(&elems[(idx % count) as usize]),
            ],
        });
        Ok(Check {
            name: "n(xy) = n(x)n(y)".into(),
            mode: Mode::Exhaustive,
            passed: witness.is_none(),
            witness,
            detail: Some(format!("{total} pairs")),
        })
    }

    /// The identities every Hurwitz algebra satisfies.
    pub fn verify_hurwitz_properties(&self) -> Result<Report, AlgebraError> {
        let n = self.norm()?;
        let one = self.unit()?.clone();
        let conj: Vec<Vector> = (0..self.dim()).map(|i| self.conjugate(&self.basis(i))).collect::<Result<_, _>>()?;
        let conj_of = |v: &Vector| -> Vector { self.conjugate(v).expect("unit and norm present") };
        let mut checks = Vec::new();
        checks.push(self.basis_check("conjugation is involutive", 1, |t| conj_of(&conj[t[0]]) == self.basis(t[0])));
        checks.push(self.basis_check("conjugation reverses products", 2, |t| {
            conj_of(&self.basis_product_vector(t[0], t[1])) == self.mul(&conj[t[1]], &conj[t[0]])
        }));
        checks.push(self.symbolic_check("x^2 - n(x,1)x + n(x)1 = 0", 1, |e| {
            let x = &e[0];
            let nvars = x[0].nvars;
            let u = self.constant_poly(&one, nvars);
            let sum: Vec<Polynomial> = x.iter().zip(&u).map(|(a, b)| a.add(b)).collect();
            let nx = n.to_polynomial(x);
            let trace = n.to_polynomial(&sum).sub(&nx).sub(&n.to_polynomial(&u));
            let xx = self.mul_poly(x, x);
            (0..self.dim()).map(|k| xx[k].sub(&x[k].mul(&trace)).add(&u[k].mul(&nx))).collect()
        }));
        checks.push(self.symbolic_check("x(xy) = (xx)y", 2, |e| {
            let (x, y) = (&e[0], &e[1]);
            let lhs = self.mul_poly(x, &self.mul_poly(x, y));
            let rhs = self.mul_poly(&self.mul_poly(x, x), y);
            lhs.iter().zip(&rhs).map(|(a, b)| a.sub(b)).collect()
        }));
        checks.push(self.symbolic_check("(yx)x = y(xx)", 2, |e| {
            let (x, y) = (&e[0], &e[1]);
            let lhs = self.mul_poly(&self.mul_poly(y, x), x);
            let rhs = self.mul_poly(y, &self.mul_poly(x, x));
            lhs.iter().zip(&rhs).map(|(a, b)| a.sub(b)).collect()
        }));
        checks.push(self.basis_check("n(xy, z) = n(y, conj(x) z)", 3, |t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            n.polar(&self.basis_product_vector(x, y), &self.basis(z)) == n.polar(&self.basis(y), &self.mul(&conj[x], &self.basis(z)))
        }));
        checks.push(self.basis_check("n(yx, z) = n(y, z conj(x))", 3, |t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            n.polar(&self.basis_product_vector(y, x), &self.basis(z)) == n.polar(&self.basis(y), &self.mul(&self.basis(z), &conj[x]))
        }));
        Ok(Report::new(&self.name, "Hurwitz identities", checks))
    }

    /// Symmetric composition: `n(x*y, z) = n(x, y*z)` and `(x*y)*x = n(x)y = x*(y*x)`.
    pub fn verify_symmetric(&self) -> Result<Report, AlgebraError> {
        let n = self.norm()?;
        let mut checks = Vec::new();
        checks.push(self.basis_check("n(x*y, z) = n(x, y*z)", 3, |t| {
            n.polar(&self.basis_product_vector(t[0], t[1]), &self.basis(t[2]))
                == n.polar(&self.basis(t[0]), &self.basis_product_vector(t[1], t[2]))
        }));
        checks.push(self.symbolic_check("(x*y)*x = n(x)y", 2, |e| {
            let (x, y) = (&e[0], &e[1]);
            let lhs = self.mul_poly(&self.mul_poly(x, y), x);
            let nx = n.to_polynomial(x);
            lhs.iter().zip(y).map(|(a, b)| a.sub(&b.mul(&nx))).collect()
        }));
        checks.push(self.symbolic_check("x*(y*x) = n(x)y", 2, |e| {
            let (x, y) = (&e[0], &e[1]);
            let lhs = self.mul_poly(x, &self.mul_poly(y, x));
            let nx = n.to_polynomial(x);
            lhs.iter().zip(y).map(|(a, b)| a.sub(&b.mul(&nx))).collect()
        }));
        Ok(Report::new(&self.name, "symmetric composition", checks))
    }

    pub fn verify_law(&self, law: Law) -> Report {
        let check = match law {
            Law::Associative => self.basis_check("(xy)z = x(yz)", 3, |t| {
                let xy = self.basis_product_vector(t[0], t[1]);
                let yz = self.basis_product_vector(t[1], t[2]);
                self.mul(&xy, &self.basis(t[2])) == self.mul(&self.basis(t[0]), &yz)
            }),
            Law::Commutative => self.basis_check("xy = yx", 2, |t| self.basis_product(t[0], t[1]) == self.basis_product(t[1], t[0])),
            Law::Flexible => self.symbolic_check("(xy)x = x(yx)", 2, |e| {
                let (x, y) = (&e[0], &e[1]);
                let lhs = self.mul_poly(&self.mul_poly(x, y), x);
                let rhs = self.mul_poly(x, &self.mul_poly(y, x));
                lhs.iter().zip(&rhs).map(|(a, b)| a.sub(b)).collect()
            }),
        };
        let property = match law {
            Law::Associative => "associative",
            Law::Commutative => "commutative",
            Law::Flexible => "flexible",
        };
        Report::new(&self.name, property, vec![check])
    }

    /// `n(xy, xz) = n(x)n(y,z)` and `n(xy, tz) + n(ty, xz) = n(x,t)n(y,z)` on basis tuples.
    pub fn verify_linearized_composition(&self) -> Result<Report, AlgebraError> {
        let f = &self.field;
        let n = self.norm()?;
        let d = self.dim();
        let prods: Vec<Vector> = (0..d * d).map(|ij| self.basis_product_vector(ij / d, ij % d)).collect();
        let p = |i: usize, j: usize| &prods[i * d + j];
        let b = |i: usize| self.basis(i);
        let checks = vec![
            self.basis_check("n(xy, xz) = n(x)n(y,z)", 3, |t| {
                let (x, y, z) = (t[0], t[1], t[2]);
                n.polar(p(x, y), p(x, z)) == f.mul(&n.eval(&b(x)), &n.polar(&b(y), &b(z)))
            }),
            self.basis_check("n(xy, tz) + n(ty, xz) = n(x,t)n(y,z)", 4, |t| {
                let (x, y, z, w) = (t[0], t[1], t[2], t[3]);
                let lhs = f.add(&n.polar(p(x, y), p(w, z)), &n.polar(p(w, y), p(x, z)));
                lhs == f.mul(&n.polar(&b(x), &b(w)), &n.polar(&b(y), &b(z)))
            }),
        ];
        Ok(Report::new(&self.name, "linearized composition", checks))
    }

    /// Whether `(xy)z - x(yz)` vanishes on the given elements.
    pub fn associator_vanishes(&self, x: &Vector, y: &Vector, z: &Vector) -> bool {
        is_zero_vector(&vec_sub(&self.field, &self.mul(&self.mul(x, y), z), &self.mul(x, &self.mul(y, z))))
    }
}
