//! Multivariate gcd by recursive primitive polynomial remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::poly::{Monomial, Poly};
use crate::Rational;

/// Content of `p` viewed as a polynomial in `var`: the normalized gcd of its
/// coefficients.
pub(crate) fn content_in(p: &Poly, var: usize) -> Poly {
    let mut acc = Poly::zero(p.ring());
    for c in p.to_univariate(var) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return acc;
        }
    }
    acc
}

/// Normalized gcd; `gcd(0, 0)` is zero.
pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.ring());
    }
    let var = (0..a.ring().len())
        .find(|&v| a.involves(v) || b.involves(v))
        .unwrap();
    if !a.involves(var) {
        return gcd(a, &content_in(b, var));
    }
    if !b.involves(var) {
        return gcd(&content_in(a, var), b);
    }
    if let Some(g) = heuristic_gcd(&a.normalized(), &b.normalized()) {
        return g.normalized();
    }
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let cg = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, var);
    (&cg * &g).normalized()
}

/// Gcd by evaluation at a large integer and ξ-adic reconstruction, for
/// nonzero integer polynomials. `None` when every evaluation point fails;
/// a returned value is the gcd up to sign.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let (ca, a) = a.content_and_primitive();
    let (cb, b) = b.content_and_primitive();
    let c = Rational::from_integer(ca.numer().abs().gcd(&cb.numer().abs()));
    if a.is_constant() || b.is_constant() {
        return Some(Poly::constant(a.ring(), c));
    }
    let ring = a.ring().clone();
    let var = (0..ring.len()).find(|&v| a.involves(v) || b.involves(v)).unwrap();
    let norm = |p: &Poly| p.terms().map(|(_, c)| c.numer().abs()).max().unwrap();
    let mut xi: BigInt = 2 * norm(&a).min(norm(&b)) + 29;
    for _ in 0..6 {
        let (av, bv) = (eval_at(&a, var, &xi), eval_at(&b, var, &xi));
        if !av.is_zero() && !bv.is_zero() {
            let gv = heuristic_gcd(&av, &bv)?;
            let g = reconstruct(&gv, var, &xi).normalized();
            if !g.is_zero() && a.exact_div(&g).is_ok() && b.exact_div(&g).is_ok() {
                return Some(g.scale(&c));
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn eval_at(p: &Poly, var: usize, xi: &BigInt) -> Poly {
    Poly::from_terms(
        p.ring(),
        p.terms().map(|(m, c)| {
            let mut nm = m.clone();
            let e = std::mem::replace(&mut nm.0[var], 0);
            (nm, c * Rational::from_integer(num_traits::pow(xi.clone(), e as usize)))
        }),
    )
}

/// Inverse of `eval_at` for coefficients in the symmetric range mod `xi`.
fn reconstruct(p: &Poly, var: usize, xi: &BigInt) -> Poly {
    let mut terms: Vec<(Monomial, Rational)> = Vec::new();
    for (m, c) in p.terms() {
        let mut c = c.numer().clone();
        let mut e = 0;
        while !c.is_zero() {
            let mut r = c.mod_floor(xi);
            if &r * 2 > *xi {
                r -= xi;
            }
            let mut nm = m.clone();
            nm.0[var] = e;
            terms.push((nm, Rational::from_integer(r.clone())));
            c = (c - r) / xi;
            e += 1;
        }
    }
    Poly::from_terms(p.ring(), terms)
}

fn primitive_part_in(p: &Poly, var: usize) -> Poly {
    let c = content_in(p, var);
    p.exact_div(&c).expect("content divides").normalized()
}

/// Gcd of two polynomials primitive in `var`, by the subresultant
/// remainder sequence; contents are only removed at the end.
fn primitive_prs(a: Poly, b: Poly, var: usize) -> Poly {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    let ring = a.ring().clone();
    let mut g = Poly::one(&ring);
    let mut h = Poly::one(&ring);
    loop {
        let delta = a.degree_in(var).unwrap() - b.degree_in(var).unwrap();
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            return primitive_part_in(&b, var);
        }
        if !r.involves(var) {
            return Poly::one(&ring);
        }
        let div = &g * &h.pow(delta);
        a = b;
        b = r.exact_div(&div).expect("subresultant division is exact");
        g = a.to_univariate(var).pop().unwrap();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
}

/// Pseudo-remainder of `a` by `b` with respect to `var`: the remainder of
/// `lc(b)^(deg a - deg b + 1) * a`.
pub(crate) fn pseudo_rem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var).unwrap();
    let lb = b.to_univariate(var).pop().unwrap();
    let mut steps = (a.degree_in(var).unwrap_or(0) + 1).saturating_sub(db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var).unwrap() >= db {
        let dr = r.degree_in(var).unwrap();
        let lr = r.to_univariate(var).pop().unwrap();
        let mut shift = crate::poly::Monomial::one(a.ring().len());
        shift.0[var] = dr - db;
        let t = Poly::monomial(a.ring(), shift, crate::Rational::from_integer(1.into()));
        r = &(&lb * &r) - &(&(&lr * &t) * b);
        steps -= 1;
    }
    &r * &lb.pow(steps)
}
