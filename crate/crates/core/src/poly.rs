//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] lives in a [`Ring`], an ordered list of variable names. Terms
//! are kept in a `BTreeMap` keyed by dense exponent vectors aligned with the
//! ring, so the map order is lexicographic with the *first* ring variable
//! most significant. Zero coefficients are never stored, which makes the
//! stored form canonical: equal polynomials compare equal structurally.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings ({0} vs {1})")]
    RingMismatch(String, String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not exactly divisible")]
    NotDivisible,
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` is not in the target ring")]
    UnknownVariable(String),
    #[error("expected a ring with {expected} variables, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("missing image for variable `{0}`")]
    MissingImage(String),
}

/// An ordered list of distinct variable names.
#[derive(Clone)]
pub struct Ring {
    vars: Arc<[String]>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Ring, PolyError> {
        let mut out: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref();
            if !valid_name(v) {
                return Err(PolyError::InvalidVariable(v.to_string()));
            }
            if out.iter().any(|w| w == v) {
                return Err(PolyError::DuplicateVariable(v.to_string()));
            }
            out.push(v.to_string());
        }
        Ok(Ring { vars: out.into() })
    }

    /// The ring `Q[x,y,z]`.
    pub fn xyz() -> Ring {
        Ring::new(&["x", "y", "z"]).unwrap()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    /// A variable name not already used by this ring, derived from `base`.
    pub fn fresh_name(&self, base: &str, avoid: &[String]) -> String {
        let taken = |n: &str| self.index_of(n).is_some() || avoid.iter().any(|a| a == n);
        if !taken(base) {
            return base.to_string();
        }
        (0..)
            .map(|k| format!("{base}_{k}"))
            .find(|n| !taken(n))
            .unwrap()
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]", self.vars.join(","))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Exponent vector aligned with a ring's variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// A polynomial over `Q` in a named ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(ring: &Ring) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, c: Rational) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.len()), c);
        }
        p
    }

    pub fn from_int(ring: &Ring, c: i64) -> Poly {
        Poly::constant(ring, Rational::from_integer(c.into()))
    }

    /// The `i`-th ring variable.
    pub fn var(ring: &Ring, i: usize) -> Poly {
        Poly::monomial(ring, Monomial::var(ring.len(), i), Rational::one())
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<Poly, PolyError> {
        ring.index_of(name)
            .map(|i| Poly::var(ring, i))
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Rational) -> Poly {
        debug_assert_eq!(m.0.len(), ring.len());
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(ring: &Ring, terms: I) -> Poly {
        let mut p = Poly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Terms in descending lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.ring.len()))
    }

    /// Leading term under lex with the first ring variable greatest.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Indices of the variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or [`PolyError::NotDivisible`].
    ///
    /// Lex division: when `divisor` divides `self`, the running remainder is
    /// always a multiple of `divisor`, so its leading monomial is divisible by
    /// the divisor's leading monomial at every step.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(divisor)?;
        let (lm, lc) = divisor.leading().ok_or(PolyError::DivisionByZero)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((rm, rc)) = rem.leading() {
            if !lm.divides(rm) {
                return Err(PolyError::NotDivisible);
            }
            let m = rm.div(&lm);
            let c = rc / &lc;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&m), -(dc * &c));
            }
            quot.add_term(m, c);
        }
        Ok(quot)
    }

    /// Formal partial derivative with respect to the `var`-th variable.
    pub fn diff(&self, var: usize) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut nm = m.clone();
                nm.0[var] -= 1;
                out.add_term(nm, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Substitute `images[i]` for the `i`-th variable. All images share the
    /// target ring, which may differ from `self`'s ring.
    pub fn subst(&self, images: &[Poly]) -> Result<Poly, PolyError> {
        if images.len() != self.ring.len() {
            return Err(PolyError::WrongArity {
                expected: self.ring.len(),
                found: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        for im in images {
            if im.ring != target {
                return Err(PolyError::RingMismatch(target.to_string(), im.ring.to_string()));
            }
        }
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(&target)]; images.len()];
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Substitute by variable name; variables without an image map to themselves.
    pub fn subst_named(&self, images: &[(&str, Poly)]) -> Result<Poly, PolyError> {
        let mut full: Vec<Poly> = (0..self.ring.len()).map(|i| Poly::var(&self.ring, i)).collect();
        for (name, img) in images {
            let i = self
                .ring
                .index_of(name)
                .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
            full[i] = img.clone();
        }
        self.subst(&full)
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.len(), "point arity");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Rename into another ring by matching variable names.
    pub fn to_ring(&self, target: &Ring) -> Result<Poly, PolyError> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.ring.len());
        for (i, name) in self.ring.vars().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if self.involves(i) => return Err(PolyError::UnknownVariable(name.clone())),
                None => map.push(None),
            }
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] = k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`,
    /// lowest degree first. Coefficients stay in the same ring.
    pub fn to_univariate(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(&self.ring); deg + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            let e = std::mem::replace(&mut nm.0[var], 0) as usize;
            out[e].add_term(nm, c.clone());
        }
        out
    }

    pub fn from_univariate(ring: &Ring, var: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(ring);
        for (e, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(ring.len(), var);
            let m = Monomial(m.0.iter().map(|&k| k * e as u32).collect());
            for (cm, cc) in &c.terms {
                out.add_term(cm.mul(&m), cc.clone());
            }
        }
        out
    }

    /// Lowest common multiple of the denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// `self = content * primitive` where `primitive` has coprime integer
    /// coefficients and a positive leading coefficient. The zero polynomial
    /// returns `(0, 0)`.
    pub fn content_and_primitive(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let den = self.denominator_lcm();
        let num = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&den / c.denom()))));
        let mut content = Rational::new(num, den);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        let prim = self.scale(&content.recip());
        (content, prim)
    }

    /// Primitive integer representative with positive lex-leading coefficient.
    pub fn normalized(&self) -> Poly {
        self.content_and_primitive().1
    }

    /// Monic rescaling (leading coefficient 1).
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Determinant of the Jacobian matrix of `(f, g, h)` in a three-variable ring.
    pub fn jacobian3(f: &Poly, g: &Poly, h: &Poly) -> Result<Poly, PolyError> {
        f.check_ring(g)?;
        f.check_ring(h)?;
        if f.ring.len() != 3 {
            return Err(PolyError::WrongArity {
                expected: 3,
                found: f.ring.len(),
            });
        }
        let rows: Vec<[Poly; 3]> = [f, g, h]
            .iter()
            .map(|p| [p.diff(0), p.diff(1), p.diff(2)])
            .collect();
        let minor = |r1: &[Poly; 3], r2: &[Poly; 3], i: usize, j: usize| &(&r1[i] * &r2[j]) - &(&r1[j] * &r2[i]);
        let t0 = &rows[0][0] * &minor(&rows[1], &rows[2], 1, 2);
        let t1 = &rows[0][1] * &minor(&rows[1], &rows[2], 0, 2);
        let t2 = &rows[0][2] * &minor(&rows[1], &rows[2], 0, 1);
        Ok(&(&t0 - &t1) + &t2)
    }

    /// Univariate coefficient list (lowest first) if only `var` occurs.
    pub fn univariate_coeffs(&self, var: usize) -> Option<Vec<Rational>> {
        if self.support_vars().iter().any(|&v| v != var) {
            return None;
        }
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Rational::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            out[m.0[var] as usize] = c.clone();
        }
        Some(out)
    }

    /// `sum coeffs[i] * var^i`.
    pub fn from_coeffs(ring: &Ring, var: usize, coeffs: &[Rational]) -> Poly {
        let mut out = Poly::zero(ring);
        for (e, c) in coeffs.iter().enumerate() {
            let mut m = Monomial::one(ring.len());
            m.0[var] = e as u32;
            out.add_term(m, c.clone());
        }
        out
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, 'b> $tr<&'b Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'b Poly) -> Poly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Expression syntax accepted by [`crate::parse_poly`], terms in
    /// descending lex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || !abs.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ring.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.ring)
    }
}

/// One invertible substitution of a two-variable ring `Q[a,b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismStep {
    /// `a ↦ m[0][0]a + m[0][1]b + shift[0]`, `b ↦ m[1][0]a + m[1][1]b + shift[1]`.
    Affine {
        matrix: [[Rational; 2]; 2],
        shift: [Rational; 2],
    },
    /// `b ↦ b + h(a)` (or `a ↦ a + h(b)` when `swapped`), `h` given by its
    /// coefficients, lowest degree first.
    Elementary { swapped: bool, h: Vec<Rational> },
}

impl AutomorphismStep {
    pub fn inverse(&self) -> AutomorphismStep {
        match self {
            AutomorphismStep::Affine { matrix, shift } => {
                let [[a, b], [c, d]] = matrix.clone();
                let det = &a * &d - &b * &c;
                assert!(!det.is_zero(), "singular affine step");
                let inv = [
                    [&d / &det, -&b / &det],
                    [-&c / &det, &a / &det],
                ];
                let s = [
                    -(&inv[0][0] * &shift[0] + &inv[0][1] * &shift[1]),
                    -(&inv[1][0] * &shift[0] + &inv[1][1] * &shift[1]),
                ];
                AutomorphismStep::Affine {
                    matrix: inv,
                    shift: s,
                }
            }
            AutomorphismStep::Elementary { swapped, h } => AutomorphismStep::Elementary {
                swapped: *swapped,
                h: h.iter().map(|c| -c.clone()).collect(),
            },
        }
    }

    /// Images of the two ring variables.
    pub fn images(&self, ring: &Ring) -> [Poly; 2] {
        let a = Poly::var(ring, 0);
        let b = Poly::var(ring, 1);
        match self {
            AutomorphismStep::Affine { matrix, shift } => {
                let img = |row: &[Rational; 2], t: &Rational| {
                    &(&a.scale(&row[0]) + &b.scale(&row[1])) + &Poly::constant(ring, t.clone())
                };
                [img(&matrix[0], &shift[0]), img(&matrix[1], &shift[1])]
            }
            AutomorphismStep::Elementary { swapped: false, h } => {
                let hb = Poly::from_coeffs(ring, 0, h);
                [a, &b + &hb]
            }
            AutomorphismStep::Elementary { swapped: true, h } => {
                let ha = Poly::from_coeffs(ring, 1, h);
                [&a + &ha, b]
            }
        }
    }

    pub fn is_invertible(&self) -> bool {
        match self {
            AutomorphismStep::Affine { matrix, .. } => {
                !(&matrix[0][0] * &matrix[1][1] - &matrix[0][1] * &matrix[1][0]).is_zero()
            }
            AutomorphismStep::Elementary { .. } => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// A composition of invertible substitutions of a two-variable ring.
///
/// `Forward` applies the steps in order, each as a substitution of the
/// current polynomial; `Inverse` applies the inverted steps in reverse.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Automorphism2 {
    pub steps: Vec<AutomorphismStep>,
}

impl Automorphism2 {
    pub fn identity() -> Automorphism2 {
        Automorphism2 { steps: Vec::new() }
    }

    pub fn push(&mut self, step: AutomorphismStep) {
        assert!(step.is_invertible(), "non-invertible step");
        self.steps.push(step);
    }

    pub fn apply(&self, p: &Poly, direction: Direction) -> Result<Poly, PolyError> {
        if p.ring().len() != 2 {
            return Err(PolyError::WrongArity {
                expected: 2,
                found: p.ring().len(),
            });
        }
        let ring = p.ring().clone();
        let mut cur = p.clone();
        match direction {
            Direction::Forward => {
                for s in &self.steps {
                    cur = cur.subst(&s.images(&ring))?;
                }
            }
            Direction::Inverse => {
                for s in self.steps.iter().rev() {
                    cur = cur.subst(&s.inverse().images(&ring))?;
                }
            }
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s, &Ring::xyz()).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn arith_examples() {
        assert_eq!(&p("x+y") + &p("x-y"), p("2*x"));
        assert_eq!(&p("x-y") * &p("x+y"), p("x^2-y^2"));
        assert_eq!(&p("x*z - y^2") + &Poly::zero(&Ring::xyz()), p("x*z-y^2"));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let r2 = Ring::new(&["x", "y"]).unwrap();
        let a = Poly::var(&r2, 0);
        assert!(matches!(a.checked_add(&p("x")), Err(PolyError::RingMismatch(..))));
    }

    #[test]
    fn ring_rejects_bad_names() {
        assert!(Ring::new(&["1x"]).is_err());
        assert!(Ring::new(&["x", "x"]).is_err());
        assert!(Ring::new(&["x_1", "_y"]).is_ok());
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("x^2-y^2").exact_div(&p("x-y")).unwrap(), p("x+y"));
        assert_eq!(p("x^2+1").exact_div(&p("x-y")), Err(PolyError::NotDivisible));
        assert_eq!(p("x*z").exact_div(&p("x")).unwrap(), p("z"));
        assert_eq!(p("x").exact_div(&Poly::zero(&Ring::xyz())), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn derivative() {
        assert_eq!(p("x*z - y^2").diff(1), p("-2*y"));
        assert!(p("x^3 + 5").diff(2).is_zero());
    }

    #[test]
    fn substitution() {
        let r = Ring::xyz();
        let id: Vec<Poly> = (0..3).map(|i| Poly::var(&r, i)).collect();
        assert_eq!(p("x*z-y^2").subst(&id).unwrap(), p("x*z-y^2"));
        let got = p("y + x^2").subst_named(&[("y", p("y - x^2"))]).unwrap();
        assert_eq!(got, p("y"));
        let got = p("x^2").subst_named(&[("x", Poly::zero(&r))]).unwrap();
        assert!(got.is_zero());
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(Poly::jacobian3(&p("x"), &p("x*z-y^2"), &p("y")).unwrap(), p("-x"));
        assert_eq!(Poly::jacobian3(&p("x"), &p("y"), &p("z")).unwrap(), p("1"));
        let f = p("x^2*y + z");
        assert!(Poly::jacobian3(&f, &p("y*z - x"), &f).unwrap().is_zero());
    }

    #[test]
    fn display_round_trips_through_parser() {
        for s in ["x*z - y^2", "1/2*x^2 - 3*y", "-x + 7", "0", "-5/3", "x^3*y^2*z - 2*x*y + 1"] {
            let a = p(s);
            assert_eq!(p(&a.to_string()), a, "{s}");
        }
        assert_eq!(p("1/2*x^2 + -3*y").to_string(), "1/2*x^2 - 3*y");
    }

    #[test]
    fn normalization() {
        let (c, prim) = p("-2/3*x + 4/9").content_and_primitive();
        assert_eq!(prim, p("3*x - 2"));
        assert_eq!(c, Rational::new((-2).into(), 9.into()));
    }

    #[test]
    fn automorphism_single_step() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let mut s = Automorphism2::identity();
        s.push(AutomorphismStep::Elementary {
            swapped: false,
            h: vec![q(0), q(0), q(-1)],
        });
        let f = parse_poly("y + x^2", &r).unwrap();
        assert_eq!(s.apply(&f, Direction::Forward).unwrap(), Poly::var(&r, 1));
        assert_eq!(Automorphism2::identity().apply(&f, Direction::Forward).unwrap(), f);
    }

    #[test]
    fn affine_inverse() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let step = AutomorphismStep::Affine {
            matrix: [[q(2), q(1)], [q(1), q(1)]],
            shift: [q(3), q(-1)],
        };
        let mut s = Automorphism2::identity();
        s.push(step);
        let f = parse_poly("x^2*y - 3*y + 1", &r).unwrap();
        let g = s.apply(&f, Direction::Forward).unwrap();
        assert_eq!(s.apply(&g, Direction::Inverse).unwrap(), f);
    }
}
