//! Exact fields and their elements.
//!
//! A [`Field`] is a cheap, shareable handle describing one of: the
//! rationals, a prime field, a simple extension of degree 2 or 3, or a
//! rational function field in one variable. Elements are plain [`Scalar`]
//! values kept in canonical form, so equality is representational; all
//! arithmetic goes through the owning field.

mod parse;
pub mod poly;
pub mod rational;
pub mod upoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use poly::{Monomial, Polynomial, ZeroTest};
pub use rational::Rational;

/// Finite fields larger than this are never enumerated.
pub const ENUMERATION_CAP: u128 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("extension polynomial {0} is reducible over the base field")]
    ReducibleExtension(String),
    #[error("characteristic 3 has no primitive cube root of unity")]
    CharThree,
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// An element of some [`Field`], in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Rational number.
    Rat(Rational),
    /// Residue in `0..p`.
    Mod(u64),
    /// Extension element: remainder modulo the defining polynomial, low to high.
    Poly(Vec<Scalar>),
    /// Rational function with coprime numerator and monic denominator.
    Frac(Box<RatFun>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    pub num: Vec<Scalar>,
    pub den: Vec<Scalar>,
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(m) => *m == 0,
            Scalar::Poly(p) => p.is_empty(),
            Scalar::Frac(f) => f.num.is_empty(),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Mod(m) => write!(f, "{m}"),
            Scalar::Poly(p) => write!(f, "Poly{p:?}"),
            Scalar::Frac(r) => write!(f, "Frac({:?}/{:?})", r.num, r.den),
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
    /// `base[x]/(modulus)`; `radical` is set when the modulus is `x^3 - radical`.
    Extension {
        base: Field,
        modulus: Vec<Scalar>,
        symbol: String,
        radical: Option<Scalar>,
    },
    RationalFunctions {
        base: Field,
        symbol: String,
    },
}

/// Handle to an exact field. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<FieldKind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// JSON description of a field.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind")]
pub enum FieldDescriptor {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "GF")]
    Prime { p: u64 },
    /// Quadratic extension by `x^2 + minpoly[1] x + minpoly[0]`; defaults to `x^2 + x + 1`.
    #[serde(rename = "ext2")]
    Quadratic {
        base: Box<FieldDescriptor>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        minpoly: Option<[String; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol: Option<String>,
    },
    #[serde(rename = "ext3")]
    CubeRadical {
        base: Box<FieldDescriptor>,
        alpha: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol: Option<String>,
    },
    #[serde(rename = "ratfun")]
    RationalFunctions { base: Box<FieldDescriptor>, var: String },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldKind::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(FieldError::NonPrimeModulus(p));
        }
        Ok(Field(Arc::new(FieldKind::Prime(p))))
    }

    /// `base[x]/(x^2 + c1 x + c0)`.
    pub fn quadratic(base: &Field, c0: Scalar, c1: Scalar, symbol: &str) -> Result<Field, FieldError> {
        let modulus = vec![c0, c1, base.one()];
        if base.find_root(&modulus)?.is_some() {
            return Err(FieldError::ReducibleExtension(base.format_poly(&modulus, "x")));
        }
        Ok(Field(Arc::new(FieldKind::Extension {
            base: base.clone(),
            modulus,
            symbol: symbol.to_string(),
            radical: None,
        })))
    }

    /// `base[w]/(w^2 + w + 1)`.
    pub fn omega_extension(base: &Field) -> Result<Field, FieldError> {
        Self::quadratic(base, base.one(), base.one(), "w")
    }

    /// `base[c]/(c^3 - alpha)`.
    pub fn cube_radical(base: &Field, alpha: Scalar, symbol: &str) -> Result<Field, FieldError> {
        if alpha.is_zero() {
            return Err(FieldError::ReducibleExtension("x^3".into()));
        }
        let modulus = vec![base.neg(&alpha), base.zero(), base.zero(), base.one()];
        if base.cube_root(&alpha)?.is_some() {
            return Err(FieldError::ReducibleExtension(base.format_poly(&modulus, "x")));
        }
        Ok(Field(Arc::new(FieldKind::Extension {
            base: base.clone(),
            modulus,
            symbol: symbol.to_string(),
            radical: Some(alpha),
        })))
    }

    pub fn rational_functions(base: &Field, symbol: &str) -> Field {
        Field(Arc::new(FieldKind::RationalFunctions {
            base: base.clone(),
            symbol: symbol.to_string(),
        }))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            FieldKind::Extension { base, .. } | FieldKind::RationalFunctions { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => *p,
            FieldKind::Extension { base, .. } | FieldKind::RationalFunctions { base, .. } => base.characteristic(),
        }
    }

    /// Number of elements for finite fields.
    pub fn size(&self) -> Option<u128> {
        match &*self.0 {
            FieldKind::Rationals | FieldKind::RationalFunctions { .. } => None,
            FieldKind::Prime(p) => Some(*p as u128),
            FieldKind::Extension { base, modulus, .. } => {
                let q = base.size()?;
                q.checked_pow((modulus.len() - 1) as u32)
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// Short human-readable name, e.g. `GF(7)` or `GF(3)(t)`.
    pub fn name(&self) -> String {
        match &*self.0 {
            FieldKind::Rationals => "Q".into(),
            FieldKind::Prime(p) => format!("GF({p})"),
            FieldKind::Extension { base, symbol, .. } => format!("{}[{}]", base.name(), symbol),
            FieldKind::RationalFunctions { base, symbol } => format!("{}({})", base.name(), symbol),
        }
    }

    pub fn zero(&self) -> Scalar {
        match &*self.0 {
            FieldKind::Rationals => Scalar::Rat(Rational::ZERO),
            FieldKind::Prime(_) => Scalar::Mod(0),
            FieldKind::Extension { .. } => Scalar::Poly(Vec::new()),
            FieldKind::RationalFunctions { base, .. } => Scalar::Frac(Box::new(RatFun {
                num: Vec::new(),
                den: vec![base.one()],
            })),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match &*self.0 {
            FieldKind::Rationals => Scalar::Rat(Rational::from_int(n)),
            FieldKind::Prime(p) => Scalar::Mod(n.rem_euclid(*p as i64) as u64),
            FieldKind::Extension { base, .. } | FieldKind::RationalFunctions { base, .. } => {
                self.embed(&base.from_i64(n))
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match &*self.0 {
            FieldKind::Rationals => Scalar::Rat(Rational::from(n.clone())),
            FieldKind::Prime(p) => {
                let r = n % BigInt::from(*p);
                let r = if r < BigInt::zero() { r + BigInt::from(*p) } else { r };
                Scalar::Mod(r.to_u64().expect("residue fits"))
            }
            FieldKind::Extension { base, .. } | FieldKind::RationalFunctions { base, .. } => {
                self.embed(&base.from_bigint(n))
            }
        }
    }

    pub fn from_rational(&self, r: &Rational) -> Option<Scalar> {
        let n = self.from_bigint(&r.numer());
        let d = self.from_bigint(&r.denom());
        self.div(&n, &d)
    }

    /// Image of a base-field element.
    pub fn embed(&self, b: &Scalar) -> Scalar {
        match &*self.0 {
            FieldKind::Extension { .. } => {
                let mut v = vec![b.clone()];
                upoly::trim(&mut v);
                Scalar::Poly(v)
            }
            FieldKind::RationalFunctions { base, .. } => {
                let mut v = vec![b.clone()];
                upoly::trim(&mut v);
                Scalar::Frac(Box::new(RatFun { num: v, den: vec![base.one()] }))
            }
            _ => b.clone(),
        }
    }

    /// Element of `sub` (a field in this field's base chain) embedded here.
    pub fn embed_from(&self, sub: &Field, s: &Scalar) -> Scalar {
        if self == sub {
            return s.clone();
        }
        let base = self.base().expect("subfield must lie in the base chain");
        self.embed(&base.embed_from(sub, s))
    }

    /// The adjoined element of an extension or the variable of a function field.
    pub fn generator(&self) -> Option<Scalar> {
        match &*self.0 {
            FieldKind::Extension { base, .. } => Some(Scalar::Poly(vec![base.zero(), base.one()])),
            FieldKind::RationalFunctions { base, .. } => Some(Scalar::Frac(Box::new(RatFun {
                num: vec![base.zero(), base.one()],
                den: vec![base.one()],
            }))),
            _ => None,
        }
    }

    pub fn symbol(&self) -> Option<&str> {
        match &*self.0 {
            FieldKind::Extension { symbol, .. } | FieldKind::RationalFunctions { symbol, .. } => Some(symbol),
            _ => None,
        }
    }

    /// Resolves a generator symbol anywhere in the tower.
    pub fn symbol_value(&self, name: &str) -> Option<Scalar> {
        match &*self.0 {
            FieldKind::Extension { base, symbol, .. } | FieldKind::RationalFunctions { base, symbol } => {
                if symbol == name {
                    self.generator()
                } else {
                    base.symbol_value(name).map(|b| self.embed(&b))
                }
            }
            _ => None,
        }
    }

    pub fn is_one(&self, s: &Scalar) -> bool {
        *s == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x.add(y)),
            (FieldKind::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            (FieldKind::Extension { base, .. }, Scalar::Poly(x), Scalar::Poly(y)) => {
                Scalar::Poly(upoly::add(base, x, y))
            }
            (FieldKind::RationalFunctions { base, .. }, Scalar::Frac(x), Scalar::Frac(y)) => {
                if x.den == y.den {
                    return Self::frac_normalize(base, upoly::add(base, &x.num, &y.num), x.den.clone());
                }
                let num = upoly::add(base, &upoly::mul(base, &x.num, &y.den), &upoly::mul(base, &y.num, &x.den));
                Self::frac_normalize(base, num, upoly::mul(base, &x.den, &y.den))
            }
            _ => panic!("scalar does not belong to field {}", self.name()),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (&*self.0, a) {
            (FieldKind::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.neg()),
            (FieldKind::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            (FieldKind::Extension { base, .. }, Scalar::Poly(x)) => Scalar::Poly(upoly::neg(base, x)),
            (FieldKind::RationalFunctions { base, .. }, Scalar::Frac(x)) => Scalar::Frac(Box::new(RatFun {
                num: upoly::neg(base, &x.num),
                den: x.den.clone(),
            })),
            _ => panic!("scalar does not belong to field {}", self.name()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x.sub(y)),
            (FieldKind::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + p - y) % p),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x.mul(y)),
            (FieldKind::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(x * y % p),
            (FieldKind::Extension { base, modulus, .. }, Scalar::Poly(x), Scalar::Poly(y)) => {
                Scalar::Poly(upoly::rem(base, &upoly::mul(base, x, y), modulus))
            }
            (FieldKind::RationalFunctions { base, .. }, Scalar::Frac(x), Scalar::Frac(y)) => {
                if x.num.is_empty() || y.num.is_empty() {
                    return self.zero();
                }
                Self::frac_normalize(
                    base,
                    upoly::mul(base, &x.num, &y.num),
                    upoly::mul(base, &x.den, &y.den),
                )
            }
            _ => panic!("scalar does not belong to field {}", self.name()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        Some(match (&*self.0, a) {
            (FieldKind::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.inv()?),
            (FieldKind::Prime(p), Scalar::Mod(x)) => Scalar::Mod(pow_mod(*x, p - 2, *p)),
            (FieldKind::Extension { base, modulus, .. }, Scalar::Poly(x)) => {
                Scalar::Poly(upoly::inv_mod(base, x, modulus)?)
            }
            (FieldKind::RationalFunctions { base, .. }, Scalar::Frac(x)) => {
                Self::frac_normalize(base, x.den.clone(), x.num.clone())
            }
            _ => panic!("scalar does not belong to field {}", self.name()),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        Some(self.mul(a, &self.inv(b)?))
    }

    /// `a^e`; negative exponents require `a != 0`.
    pub fn pow(&self, a: &Scalar, e: i64) -> Option<Scalar> {
        let mut base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(acc)
    }

    fn frac_normalize(base: &Field, num: Vec<Scalar>, den: Vec<Scalar>) -> Scalar {
        if num.is_empty() {
            return Scalar::Frac(Box::new(RatFun { num, den: vec![base.one()] }));
        }
        let g = upoly::gcd(base, &num, &den);
        let (mut num, mut den) = if upoly::is_one(base, &g) {
            (num, den)
        } else {
            (upoly::divrem(base, &num, &g).0, upoly::divrem(base, &den, &g).0)
        };
        let lead = den.last().expect("nonzero denominator").clone();
        if !base.is_one(&lead) {
            let li = base.inv(&lead).expect("nonzero");
            num = upoly::scale(base, &num, &li);
            den = upoly::scale(base, &den, &li);
        }
        Scalar::Frac(Box::new(RatFun { num, den }))
    }

    /// Coordinates of an extension element over the immediate base (length = degree).
    pub fn ext_coords(&self, s: &Scalar) -> Vec<Scalar> {
        match (&*self.0, s) {
            (FieldKind::Extension { base, modulus, .. }, Scalar::Poly(p)) => {
                let mut v = p.clone();
                v.resize(modulus.len() - 1, base.zero());
                v
            }
            _ => vec![s.clone()],
        }
    }

    /// Degree of this field over `sub`, which must be an extension-tower ancestor.
    pub fn degree_over(&self, sub: &Field) -> usize {
        if self == sub {
            return 1;
        }
        match &*self.0 {
            FieldKind::Extension { base, modulus, .. } => (modulus.len() - 1) * base.degree_over(sub),
            _ => panic!("{} is not a finite extension of {}", self.name(), sub.name()),
        }
    }

    /// Flattened coordinates of `s` over an ancestor field `sub`.
    pub fn coords_over(&self, sub: &Field, s: &Scalar) -> Vec<Scalar> {
        if self == sub {
            return vec![s.clone()];
        }
        let base = self.base().expect("ancestor");
        self.ext_coords(s).iter().flat_map(|c| base.coords_over(sub, c)).collect()
    }

    /// Enumerates a finite field in index order, if it is small enough.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        let q = self.size()?;
        if q > ENUMERATION_CAP {
            return None;
        }
        Some((0..q).map(|i| self.element_at(i)).collect())
    }

    /// The `index`-th element of a finite field: residues in order, extension
    /// elements by mixed radix over the base with the constant term least significant.
    pub fn element_at(&self, index: u128) -> Scalar {
        match &*self.0 {
            FieldKind::Prime(p) => Scalar::Mod((index % *p as u128) as u64),
            FieldKind::Extension { base, modulus, .. } => {
                let q = base.size().expect("finite base");
                let mut idx = index;
                let mut coeffs = Vec::new();
                for _ in 0..modulus.len() - 1 {
                    coeffs.push(base.element_at(idx % q));
                    idx /= q;
                }
                upoly::trim(&mut coeffs);
                Scalar::Poly(coeffs)
            }
            _ => panic!("{} is infinite", self.name()),
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match &*self.0 {
            FieldKind::Rationals => {
                let n = rng.random_range(-9i64..=9);
                let d = rng.random_range(1i64..=5);
                Scalar::Rat(Rational::new(n, d))
            }
            FieldKind::Prime(p) => Scalar::Mod(rng.random_range(0..*p)),
            FieldKind::Extension { base, modulus, .. } => {
                let mut v: Vec<Scalar> = (0..modulus.len() - 1).map(|_| base.random(rng)).collect();
                upoly::trim(&mut v);
                Scalar::Poly(v)
            }
            FieldKind::RationalFunctions { base, .. } => {
                let dn = rng.random_range(0..=2usize);
                let dd = rng.random_range(0..=1usize);
                let mut num: Vec<Scalar> = (0..=dn).map(|_| base.random(rng)).collect();
                upoly::trim(&mut num);
                let mut den: Vec<Scalar> = (0..dd).map(|_| base.random(rng)).collect();
                den.push(base.one());
                Self::frac_normalize(base, num, den)
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    // ----- formatting and parsing -----

    /// Canonical string form of a scalar.
    pub fn format(&self, s: &Scalar) -> String {
        match (&*self.0, s) {
            (FieldKind::Rationals, Scalar::Rat(r)) => r.to_string(),
            (FieldKind::Prime(_), Scalar::Mod(m)) => m.to_string(),
            (FieldKind::Extension { base, symbol, .. }, Scalar::Poly(p)) => base.format_poly(p, symbol),
            (FieldKind::RationalFunctions { base, symbol }, Scalar::Frac(r)) => {
                let num = base.format_poly(&r.num, symbol);
                if upoly::is_one(base, &r.den) {
                    return num;
                }
                let den = base.format_poly(&r.den, symbol);
                let num = if is_compound(&num) { format!("({num})") } else { num };
                let den = if is_compound(&den) { format!("({den})") } else { den };
                format!("{num}/{den}")
            }
            _ => panic!("scalar does not belong to field {}", self.name()),
        }
    }

    /// Formats a polynomial with coefficients in this field in the variable `symbol`.
    pub fn format_poly(&self, p: &[Scalar], symbol: &str) -> String {
        let mut terms: Vec<String> = Vec::new();
        let minus_one = self.neg(&self.one());
        for (i, c) in p.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let power = match i {
                0 => String::new(),
                1 => symbol.to_string(),
                _ => format!("{symbol}^{i}"),
            };
            let term = if i == 0 {
                self.format(c)
            } else if self.is_one(c) {
                power
            } else if *c == minus_one {
                format!("-{power}")
            } else {
                let cs = self.format(c);
                if is_compound(&cs) {
                    format!("({cs})*{power}")
                } else {
                    format!("{cs}*{power}")
                }
            };
            terms.push(term);
        }
        join_terms(&terms)
    }

    /// Parses an arithmetic expression (`+ - * / ^`, parentheses, integers and
    /// generator symbols) and evaluates it in this field.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        parse::parse_scalar(self, s)
    }

    // ----- roots -----

    /// A root in this field of a polynomial of degree at most 3 (coefficients low to high).
    pub fn find_root(&self, poly: &[Scalar]) -> Result<Option<Scalar>, FieldError> {
        let mut p = poly.to_vec();
        upoly::trim(&mut p);
        let deg = match upoly::degree(&p) {
            None => return Ok(Some(self.zero())),
            Some(d) => d,
        };
        if deg == 0 {
            return Ok(None);
        }
        if p[0].is_zero() {
            return Ok(Some(self.zero()));
        }
        let p = upoly::monic(self, &p);
        if deg == 1 {
            return Ok(Some(self.neg(&p[0])));
        }
        if deg > 3 {
            return Err(FieldError::Unsupported(format!("root search in degree {deg}")));
        }
        if let Some(elems) = self.elements() {
            return Ok(elems.into_iter().find(|x| upoly::eval(self, &p, x).is_zero()));
        }
        // x^3 - a
        if deg == 3 && p[1].is_zero() && p[2].is_zero() {
            return self.cube_root(&self.neg(&p[0]));
        }
        match &*self.0 {
            FieldKind::Rationals => {
                if deg == 2 {
                    // x^2 + b x + c: roots (-b ± sqrt(b^2 - 4c)) / 2
                    let (Scalar::Rat(c), Scalar::Rat(b)) = (&p[0], &p[1]) else { unreachable!() };
                    let disc = b.mul(b).sub(&Rational::from_int(4).mul(c));
                    return Ok(disc.sqrt().map(|r| {
                        Scalar::Rat(b.neg().add(&r).mul(&Rational::new(1, 2)))
                    }));
                }
                Ok(rational_root_theorem(&p))
            }
            FieldKind::RationalFunctions { base, .. } => {
                let constant: Option<Vec<Scalar>> = p
                    .iter()
                    .map(|c| match c {
                        Scalar::Frac(r) if upoly::is_one(base, &r.den) && r.num.len() <= 1 => {
                            Some(r.num.first().cloned().unwrap_or_else(|| base.zero()))
                        }
                        _ => None,
                    })
                    .collect();
                match constant {
                    // A field is algebraically closed in its rational function field.
                    Some(bp) => Ok(base.find_root(&bp)?.map(|r| self.embed(&r))),
                    None => Err(FieldError::Unsupported(format!(
                        "root search over {} for a non-constant polynomial",
                        self.name()
                    ))),
                }
            }
            FieldKind::Extension { modulus, .. } => {
                let own: Vec<Scalar> = modulus.iter().map(|c| self.embed(c)).collect();
                if own == p {
                    return Ok(self.generator());
                }
                Err(FieldError::Unsupported(format!("root search over {}", self.name())))
            }
            FieldKind::Prime(_) => unreachable!("finite fields are enumerated"),
        }
    }

    /// A cube root of `a` in this field, if one exists.
    pub fn cube_root(&self, a: &Scalar) -> Result<Option<Scalar>, FieldError> {
        if a.is_zero() {
            return Ok(Some(self.zero()));
        }
        if let Some(elems) = self.elements() {
            return Ok(elems.into_iter().find(|x| self.mul(&self.mul(x, x), x) == *a));
        }
        match (&*self.0, a) {
            (FieldKind::Rationals, Scalar::Rat(r)) => Ok(r.cube_root().map(Scalar::Rat)),
            (FieldKind::RationalFunctions { base, .. }, Scalar::Frac(r)) if self.characteristic() == 3 => {
                let num = poly_cube_root_char3(base, &r.num)?;
                let den = poly_cube_root_char3(base, &r.den)?;
                Ok(match (num, den) {
                    (Some(n), Some(d)) => Some(Self::frac_normalize(base, n, d)),
                    _ => None,
                })
            }
            (FieldKind::Extension { base, radical: Some(alpha), .. }, _) if self.characteristic() == 3 => {
                self.radical_cube_root_char3(base, alpha, a)
            }
            _ => Err(FieldError::Unsupported(format!("cube roots in {}", self.name()))),
        }
    }

    /// Cube root in `E = F(c)`, `c^3 = alpha`, char 3. Every cube `y^3 = sum c_k^3 alpha^k`
    /// lies in `F`; decompose over the `p`-basis `{1, t, t^2}` of `F = k(t)` and solve for `c_k`.
    fn radical_cube_root_char3(&self, base: &Field, alpha: &Scalar, a: &Scalar) -> Result<Option<Scalar>, FieldError> {
        let coords = self.ext_coords(a);
        if coords[1..].iter().any(|c| !c.is_zero()) {
            return Ok(None);
        }
        let alpha2 = base.mul(alpha, alpha);
        let rows = [
            base.frobenius_decompose(&base.one())?,
            base.frobenius_decompose(alpha)?,
            base.frobenius_decompose(&alpha2)?,
        ];
        let rhs = base.frobenius_decompose(&coords[0])?;
        // Solve sum_k c_k rows[k][r] = rhs[r] by Cramer's rule.
        let m = |r: usize, k: usize| rows[k][r].clone();
        let det3 = |col: &dyn Fn(usize, usize) -> Scalar| -> Scalar {
            let t1 = base.mul(&col(0, 0), &base.sub(&base.mul(&col(1, 1), &col(2, 2)), &base.mul(&col(1, 2), &col(2, 1))));
            let t2 = base.mul(&col(0, 1), &base.sub(&base.mul(&col(1, 0), &col(2, 2)), &base.mul(&col(1, 2), &col(2, 0))));
            let t3 = base.mul(&col(0, 2), &base.sub(&base.mul(&col(1, 0), &col(2, 1)), &base.mul(&col(1, 1), &col(2, 0))));
            base.add(&base.sub(&t1, &t2), &t3)
        };
        let det = det3(&m);
        let Some(det_inv) = base.inv(&det) else {
            return Err(FieldError::Unsupported("radical lies in the subfield of cubes".into()));
        };
        let mut c = Vec::new();
        for k in 0..3 {
            let mk = |r: usize, j: usize| if j == k { rhs[r].clone() } else { m(r, j) };
            c.push(base.mul(&det3(&mk), &det_inv));
        }
        upoly::trim(&mut c);
        let y = Scalar::Poly(c);
        if self.mul(&self.mul(&y, &y), &y) == *a {
            Ok(Some(y))
        } else {
            Ok(None)
        }
    }

    /// For `k(t)` in characteristic 3 with finite `k`: returns `z_0, z_1, z_2` with
    /// `x = z_0^3 + t z_1^3 + t^2 z_2^3`.
    fn frobenius_decompose(&self, x: &Scalar) -> Result<[Scalar; 3], FieldError> {
        let (FieldKind::RationalFunctions { base, .. }, Scalar::Frac(r)) = (&*self.0, x) else {
            return Err(FieldError::Unsupported(format!("p-basis decomposition in {}", self.name())));
        };
        let d2 = upoly::mul(base, &r.den, &r.den);
        let m = upoly::mul(base, &r.num, &d2);
        let mut out = [self.zero(), self.zero(), self.zero()];
        for (res, slot) in out.iter_mut().enumerate() {
            let mut q = Vec::new();
            for (k, c) in m.iter().enumerate().skip(res).step_by(3) {
                let root = base
                    .cube_root(c)?
                    .ok_or_else(|| FieldError::Unsupported("coefficient is not a cube".into()))?;
                let idx = (k - res) / 3;
                q.resize(idx + 1, base.zero());
                q[idx] = root;
            }
            upoly::trim(&mut q);
            *slot = Self::frac_normalize(base, q, r.den.clone());
        }
        Ok(out)
    }

    /// A root of `x^2 + x + 1` in this field, if any.
    pub fn primitive_cube_root(&self) -> Result<Option<Scalar>, FieldError> {
        if self.characteristic() == 3 {
            return Err(FieldError::CharThree);
        }
        self.find_root(&[self.one(), self.one(), self.one()])
    }

    /// Returns a field containing a primitive cube root of unity `w` together with `w`:
    /// this field itself when it already has one, otherwise `F[w]/(w^2+w+1)`.
    pub fn adjoin_omega(&self) -> Result<(Field, Scalar), FieldError> {
        if let Some(w) = self.primitive_cube_root()? {
            return Ok((self.clone(), w));
        }
        let k = Field::omega_extension(self)?;
        let w = k.generator().expect("extension has a generator");
        Ok((k, w))
    }

    /// Whether `w` satisfies `w^2 + w + 1 = 0`.
    pub fn is_primitive_cube_root(&self, w: &Scalar) -> bool {
        let v = self.add(&self.add(&self.mul(w, w), w), &self.one());
        v.is_zero()
    }

    // ----- descriptors -----

    pub fn descriptor(&self) -> FieldDescriptor {
        match &*self.0 {
            FieldKind::Rationals => FieldDescriptor::Rationals,
            FieldKind::Prime(p) => FieldDescriptor::Prime { p: *p },
            FieldKind::Extension { base, modulus, symbol, radical } => match radical {
                Some(alpha) => FieldDescriptor::CubeRadical {
                    base: Box::new(base.descriptor()),
                    alpha: base.format(alpha),
                    symbol: (symbol != "c").then(|| symbol.clone()),
                },
                None => {
                    let omega = base.is_one(&modulus[0]) && base.is_one(&modulus[1]);
                    FieldDescriptor::Quadratic {
                        base: Box::new(base.descriptor()),
                        minpoly: (!omega).then(|| [base.format(&modulus[0]), base.format(&modulus[1])]),
                        symbol: (symbol != "w").then(|| symbol.clone()),
                    }
                }
            },
            FieldKind::RationalFunctions { base, symbol } => FieldDescriptor::RationalFunctions {
                base: Box::new(base.descriptor()),
                var: symbol.clone(),
            },
        }
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field, FieldError> {
        Ok(match d {
            FieldDescriptor::Rationals => Field::rationals(),
            FieldDescriptor::Prime { p } => Field::prime(*p)?,
            FieldDescriptor::Quadratic { base, minpoly, symbol } => {
                let b = Field::from_descriptor(base)?;
                let (c0, c1) = match minpoly {
                    Some([c0, c1]) => (b.parse(c0)?, b.parse(c1)?),
                    None => (b.one(), b.one()),
                };
                Field::quadratic(&b, c0, c1, symbol.as_deref().unwrap_or("w"))?
            }
            FieldDescriptor::CubeRadical { base, alpha, symbol } => {
                let b = Field::from_descriptor(base)?;
                let a = b.parse(alpha)?;
                Field::cube_radical(&b, a, symbol.as_deref().unwrap_or("c"))?
            }
            FieldDescriptor::RationalFunctions { base, var } => {
                Field::rational_functions(&Field::from_descriptor(base)?, var)
            }
        })
    }

    /// Parses the command-line shorthand: `q`, `gf:7`, `<field>(t)` for a rational
    /// function field, `<field>[w]` for adjoining a cube root of unity, or a JSON descriptor.
    pub fn from_shorthand(s: &str) -> Result<Field, FieldError> {
        let s = s.trim();
        let bad = |reason: &str| FieldError::Parse { input: s.to_string(), reason: reason.to_string() };
        if s.starts_with('{') {
            let d: FieldDescriptor = serde_json::from_str(s).map_err(|e| bad(&e.to_string()))?;
            return Field::from_descriptor(&d);
        }
        if let Some(inner) = s.strip_suffix(']') {
            let open = inner.rfind('[').ok_or_else(|| bad("unbalanced ["))?;
            let base = Field::from_shorthand(&inner[..open])?;
            return Field::quadratic(&base, base.one(), base.one(), &inner[open + 1..]);
        }
        if let Some(inner) = s.strip_suffix(')') {
            let open = inner.rfind('(').ok_or_else(|| bad("unbalanced ("))?;
            let base = Field::from_shorthand(&inner[..open])?;
            let var = &inner[open + 1..];
            if var.is_empty() || !var.chars().all(char::is_alphabetic) {
                return Err(bad("variable must be alphabetic"));
            }
            return Ok(Field::rational_functions(&base, var));
        }
        let lower = s.to_ascii_lowercase();
        if lower == "q" {
            return Ok(Field::rationals());
        }
        if let Some(p) = lower.strip_prefix("gf:").or_else(|| lower.strip_prefix("gf")) {
            let p: u64 = p.parse().map_err(|_| bad("expected gf:<prime>"))?;
            return Field::prime(p);
        }
        Err(bad("expected q, gf:<p>, <field>(t), <field>[w] or a JSON descriptor"))
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// True if the rendered expression has a top-level `+`/`-` past its first character.
pub(crate) fn is_compound(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if i > 0 && depth == 0 => return true,
            _ => {}
        }
    }
    false
}

pub(crate) fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        if !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(t);
    }
    out
}

fn poly_cube_root_char3(base: &Field, p: &[Scalar]) -> Result<Option<Vec<Scalar>>, FieldError> {
    let mut out = Vec::new();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if i % 3 != 0 {
            return Ok(None);
        }
        let Some(r) = base.cube_root(c)? else { return Ok(None) };
        out.resize(i / 3 + 1, base.zero());
        out[i / 3] = r;
    }
    Ok(Some(out))
}

/// Rational roots of a monic rational polynomial via the rational root theorem.
fn rational_root_theorem(p: &[Scalar]) -> Option<Scalar> {
    use num_integer::Integer;
    let rats: Vec<Rational> = p
        .iter()
        .map(|c| match c {
            Scalar::Rat(r) => r.clone(),
            _ => unreachable!(),
        })
        .collect();
    let lcm = rats.iter().fold(BigInt::from(1), |acc, r| acc.lcm(&r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let a0 = ints[0].magnitude().to_u64()?;
    let an = ints.last()?.magnitude().to_u64()?;
    let divisors = |n: u64| -> Vec<u64> {
        let mut v = Vec::new();
        let mut d = 1u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                v.push(d);
                v.push(n / d);
            }
            d += 1;
        }
        v
    };
    let field = Field::rationals();
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1i64, -1] {
                let cand = Scalar::Rat(Rational::new(sign * num as i64, den as i64));
                if upoly::eval(&field, p, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn prime_field_inverse() {
        let f = gf(7);
        assert_eq!(f.inv(&Scalar::Mod(3)), Some(Scalar::Mod(5)));
        assert_eq!(f.mul(&Scalar::Mod(3), &Scalar::Mod(5)), f.one());
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert_eq!(Field::prime(9), Err(FieldError::NonPrimeModulus(9)));
        assert_eq!(Field::prime(1), Err(FieldError::NonPrimeModulus(1)));
    }

    #[test]
    fn rational_canonical_sum() {
        let q = Field::rationals();
        let s = q.add(&q.parse("2/3").unwrap(), &q.parse("1/6").unwrap());
        assert_eq!(q.format(&s), "5/6");
    }

    #[test]
    fn omega_squared_reduces() {
        let q = Field::rationals();
        let k = Field::omega_extension(&q).unwrap();
        let w = k.generator().unwrap();
        let w2 = k.mul(&w, &w);
        assert_eq!(w2, k.sub(&k.neg(&w), &k.one()));
        assert_eq!(k.format(&w2), "-w-1");
        assert_eq!(k.pow(&w, 3), Some(k.one()));
    }

    #[test]
    fn adjoin_omega_cases() {
        let (f7, w) = gf(7).adjoin_omega().unwrap();
        assert_eq!(f7, gf(7));
        assert_eq!(w, Scalar::Mod(2));
        let (f25, w) = gf(5).adjoin_omega().unwrap();
        assert_eq!(f25.size(), Some(25));
        assert!(f25.is_primitive_cube_root(&w));
        assert_eq!(f25.pow(&w, 3), Some(f25.one()));
        let (qw, w) = Field::rationals().adjoin_omega().unwrap();
        assert_eq!(qw.name(), "Q[w]");
        assert!(qw.is_primitive_cube_root(&w));
        assert_eq!(gf(3).adjoin_omega(), Err(FieldError::CharThree));
    }

    #[test]
    fn reducible_extension_rejected() {
        assert!(matches!(Field::omega_extension(&gf(7)), Err(FieldError::ReducibleExtension(_))));
        let qw = Field::omega_extension(&Field::rationals()).unwrap();
        assert!(matches!(Field::omega_extension(&qw), Err(FieldError::ReducibleExtension(_))));
        assert!(matches!(
            Field::cube_radical(&Field::rationals(), Scalar::Rat(Rational::from_int(8)), "c"),
            Err(FieldError::ReducibleExtension(_))
        ));
        assert!(Field::cube_radical(&Field::rationals(), Scalar::Rat(Rational::from_int(2)), "c").is_ok());
    }

    #[test]
    fn rational_function_field_formats_canonically() {
        let f = Field::rational_functions(&gf(3), "t");
        let x = f.parse("t/(t+1)").unwrap();
        assert_eq!(f.format(&x), "t/(t+1)");
        let y = f.parse("(2*t+2)/(2*t^2+2)").unwrap();
        assert_eq!(f.format(&y), "(t+1)/(t^2+1)");
        assert_eq!(f.parse("t^3/t^2").unwrap(), f.generator().unwrap());
    }

    #[test]
    fn char3_cube_roots() {
        let f = Field::rational_functions(&gf(3), "t");
        let t = f.generator().unwrap();
        assert_eq!(f.cube_root(&t).unwrap(), None);
        let x = f.parse("(t^3+2)/t^6").unwrap();
        let r = f.cube_root(&x).unwrap().unwrap();
        assert_eq!(f.pow(&r, 3).unwrap(), x);
        // In F(t^(1/3)) every element of F is a cube.
        let e = Field::cube_radical(&f, t.clone(), "c").unwrap();
        let beta = e.embed(&f.parse("t^2+t+1").unwrap());
        let y = e.cube_root(&beta).unwrap().unwrap();
        assert_eq!(e.pow(&y, 3).unwrap(), beta);
    }

    #[test]
    fn inverses_for_every_field() {
        let q = Field::rationals();
        let fields = vec![
            q.clone(),
            gf(2),
            gf(7),
            Field::omega_extension(&q).unwrap(),
            Field::omega_extension(&gf(5)).unwrap(),
            Field::rational_functions(&gf(3), "t"),
            Field::cube_radical(&Field::rational_functions(&gf(3), "t"), Field::rational_functions(&gf(3), "t").generator().unwrap(), "c").unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in &fields {
            for _ in 0..1000 {
                let a = f.random_nonzero(&mut rng);
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), f.one(), "{}", f.name());
            }
            let p = f.characteristic();
            if p > 0 {
                assert!(f.from_i64(p as i64).is_zero());
            }
        }
    }

    #[test]
    fn format_parse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t3 = Field::rational_functions(&gf(3), "t");
        let fields = vec![
            Field::rationals(),
            gf(7),
            Field::omega_extension(&Field::rationals()).unwrap(),
            t3.clone(),
            Field::cube_radical(&t3, t3.generator().unwrap(), "c").unwrap(),
        ];
        for f in &fields {
            for _ in 0..200 {
                let a = f.random(&mut rng);
                let s = f.format(&a);
                assert_eq!(f.parse(&s).unwrap(), a, "{} {s}", f.name());
            }
        }
    }

    #[test]
    fn descriptors_round_trip() {
        let t3 = Field::rational_functions(&gf(3), "t");
        let fields = vec![
            Field::rationals(),
            gf(7),
            Field::omega_extension(&gf(5)).unwrap(),
            t3.clone(),
            Field::cube_radical(&t3, t3.generator().unwrap(), "c").unwrap(),
        ];
        for f in fields {
            let json = serde_json::to_string(&f.descriptor()).unwrap();
            let back = Field::from_descriptor(&serde_json::from_str(&json).unwrap()).unwrap();
            assert_eq!(back, f, "{json}");
        }
        let d: FieldDescriptor = serde_json::from_str(r#"{"kind":"GF","p":7}"#).unwrap();
        assert_eq!(Field::from_descriptor(&d).unwrap(), gf(7));
    }

    #[test]
    fn shorthand() {
        assert_eq!(Field::from_shorthand("q").unwrap(), Field::rationals());
        assert_eq!(Field::from_shorthand("gf:7").unwrap(), gf(7));
        assert_eq!(Field::from_shorthand("gf:3(t)").unwrap(), Field::rational_functions(&gf(3), "t"));
        assert_eq!(Field::from_shorthand("gf:5[w]").unwrap().size(), Some(25));
        assert!(Field::from_shorthand("gf:8").is_err());
        assert!(Field::from_shorthand("r").is_err());
    }
}
