//! Sparse multivariate polynomials, used to check identities symbolically.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{Field, Scalar};

/// Exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Renders e.g. `x1^2*y3` given a name for each variable.
    pub fn format(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub field: Field,
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, Scalar>,
}

/// Outcome of expanding a polynomial identity.
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroTest {
    Zero,
    /// The largest surviving term in graded-lex order.
    NonZero { monomial: Monomial, coeff: Scalar },
}

impl Polynomial {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        Polynomial { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(field, nvars);
        p.terms.insert(Monomial::var(nvars, i), field.one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = self.field.add(v, c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.field.neg(v);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &self.field.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.field.mul(v, c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Self::zero(&self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn zero_test(&self) -> ZeroTest {
        match self.terms.iter().next_back() {
            None => ZeroTest::Zero,
            Some((m, c)) => ZeroTest::NonZero { monomial: m.clone(), coeff: c.clone() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_sum() {
        let q = Field::rationals();
        let x = Polynomial::var(&q, 2, 0);
        let y = Polynomial::var(&q, 2, 1);
        let s = x.add(&y);
        let lhs = s.mul(&s);
        let two_xy = x.mul(&y).scale(&q.from_i64(2));
        let rhs = x.mul(&x).add(&two_xy).add(&y.mul(&y));
        assert_eq!(lhs.sub(&rhs).zero_test(), ZeroTest::Zero);
        match lhs.sub(&x.mul(&x)).zero_test() {
            ZeroTest::NonZero { monomial, coeff } => {
                assert_eq!(monomial, Monomial(vec![1, 1]));
                assert_eq!(coeff, q.from_i64(2));
            }
            ZeroTest::Zero => panic!("expected nonzero"),
        }
    }

    #[test]
    fn char_two_cancels() {
        let f = Field::prime(2).unwrap();
        let x = Polynomial::var(&f, 1, 0);
        assert!(x.add(&x).is_zero());
    }

    #[test]
    fn graded_order() {
        assert!(Monomial(vec![0, 2]) > Monomial(vec![1, 0]));
        assert!(Monomial(vec![1, 1]) > Monomial(vec![0, 2]));
        assert_eq!(Monomial(vec![2, 0, 1]).format(&["a".into(), "b".into(), "c".into()]), "a^2*c");
    }
}
