//! Dense univariate polynomials over a [`Field`], coefficients stored low to high.
//!
//! These back the arithmetic of extension fields and rational function
//! fields. All functions keep the result trimmed (no trailing zeros).

use super::{Field, Scalar};

pub fn trim(p: &mut Vec<Scalar>) {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
}

pub fn degree(p: &[Scalar]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn add(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    trim(&mut out);
    out
}

pub fn neg(f: &Field, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| f.neg(x)).collect()
}

pub fn sub(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    add(f, a, &neg(f, b))
}

pub fn scale(f: &Field, a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    if c.is_zero() {
        return Vec::new();
    }
    let mut out: Vec<Scalar> = a.iter().map(|x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

pub fn mul(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let p = f.mul(x, y);
            out[i + j] = f.add(&out[i + j], &p);
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division. Panics if `b` is zero.
pub fn divrem(f: &Field, a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("trimmed polynomial has nonzero leading coefficient");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(&r[dr], &lead_inv);
        let shift = dr - db;
        for (i, bi) in b.iter().enumerate() {
            if !bi.is_zero() {
                let t = f.mul(&c, bi);
                r[i + shift] = f.sub(&r[i + shift], &t);
            }
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    divrem(f, a, b).1
}

pub fn monic(f: &Field, a: &[Scalar]) -> Vec<Scalar> {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(f, a, &f.inv(l).expect("nonzero leading coefficient")),
    }
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(f: &Field, a: &[Scalar], m: &[Scalar]) -> Option<Vec<Scalar>> {
    // Extended Euclid tracking only the coefficient of `a`.
    let mut r0 = m.to_vec();
    let mut r1 = rem(f, a, m);
    let mut s0: Vec<Scalar> = Vec::new();
    let mut s1: Vec<Scalar> = vec![f.one()];
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = f.inv(&r0[0])?;
    Some(rem(f, &scale(f, &s0, &c), m))
}

pub fn eval(f: &Field, a: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = f.zero();
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

pub fn is_one(f: &Field, a: &[Scalar]) -> bool {
    a.len() == 1 && a[0] == f.one()
}
