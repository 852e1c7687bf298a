//! Lexicographic Gröbner bases and elimination ideals.
//!
//! Internally every polynomial is a `BTreeMap` over exponent vectors
//! permuted so that the greatest variable comes first; plain vector
//! comparison is then the requested lex order.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Monomial, Poly, Ring};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("Gröbner basis computation exceeded its time budget")]
    Timeout,
    #[error("no generators given")]
    EmptyInput,
    #[error("generators live in different rings")]
    RingMismatch,
    #[error("monomial order does not list exactly the ring variables: {0}")]
    OrderMismatch(String),
    #[error("kept variables are not the least block of the order")]
    BlockMismatch,
}

/// Lex order given by variable precedence, least to greatest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    precedence: Vec<String>,
}

impl MonomialOrder {
    /// `vars[0] ≺ vars[1] ≺ ...`
    pub fn lex<S: AsRef<str>>(vars: &[S]) -> MonomialOrder {
        MonomialOrder {
            precedence: vars.iter().map(|v| v.as_ref().to_string()).collect(),
        }
    }

    pub fn precedence(&self) -> &[String] {
        &self.precedence
    }

    /// Ring indices from greatest to least variable.
    fn permutation(&self, ring: &Ring) -> Result<Vec<usize>, GroebnerError> {
        let mismatch = || GroebnerError::OrderMismatch(format!("{:?} vs {}", self.precedence, ring));
        if self.precedence.len() != ring.len() {
            return Err(mismatch());
        }
        let mut perm = Vec::with_capacity(ring.len());
        for v in self.precedence.iter().rev() {
            let i = ring.index_of(v).ok_or_else(mismatch)?;
            if perm.contains(&i) {
                return Err(mismatch());
            }
            perm.push(i);
        }
        Ok(perm)
    }
}

type Exps = Vec<u32>;
type GPoly = BTreeMap<Exps, Rational>;

#[derive(Clone)]
struct Ctx {
    ring: Ring,
    perm: Vec<usize>,
}

impl Ctx {
    fn to_internal(&self, p: &Poly) -> GPoly {
        p.terms()
            .map(|(m, c)| (self.perm.iter().map(|&i| m.0[i]).collect(), c.clone()))
            .collect()
    }

    fn to_poly(&self, g: &GPoly) -> Poly {
        Poly::from_terms(
            &self.ring,
            g.iter().map(|(e, c)| {
                let mut m = vec![0; self.ring.len()];
                for (k, &i) in self.perm.iter().enumerate() {
                    m[i] = e[k];
                }
                (Monomial(m), c.clone())
            }),
        )
    }
}

fn lead(g: &GPoly) -> (&Exps, &Rational) {
    g.iter().next_back().expect("nonzero polynomial")
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn monic(mut g: GPoly) -> GPoly {
    let inv = lead(&g).1.recip();
    for c in g.values_mut() {
        *c *= &inv;
    }
    g
}

/// `acc -= coeff * x^shift * g`
fn sub_scaled(acc: &mut GPoly, g: &GPoly, shift: &[u32], coeff: &Rational) {
    for (e, c) in g {
        let m: Exps = e.iter().zip(shift).map(|(a, b)| a + b).collect();
        let delta = c * coeff;
        match acc.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(-delta);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() -= delta;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

struct Deadline(Option<Instant>);

impl Deadline {
    fn check(&self) -> Result<(), GroebnerError> {
        match self.0 {
            Some(t) if Instant::now() > t => Err(GroebnerError::Timeout),
            _ => Ok(()),
        }
    }
}

/// Full reduction of `p` modulo the monic `basis`.
fn reduce(mut p: GPoly, basis: &[GPoly], deadline: &Deadline) -> Result<GPoly, GroebnerError> {
    let mut rem = GPoly::new();
    while let Some((e, c)) = p.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        deadline.check()?;
        match basis.iter().find(|g| divides(lead(g).0, &e)) {
            Some(g) => {
                let shift: Exps = e.iter().zip(lead(g).0).map(|(a, b)| a - b).collect();
                sub_scaled(&mut p, g, &shift, &c);
            }
            None => {
                p.remove(&e);
                rem.insert(e, c);
            }
        }
    }
    Ok(rem)
}

fn spoly(f: &GPoly, g: &GPoly) -> GPoly {
    let (lf, lg) = (lead(f).0, lead(g).0);
    let l = lcm(lf, lg);
    let sf: Exps = l.iter().zip(lf).map(|(a, b)| a - b).collect();
    let sg: Exps = l.iter().zip(lg).map(|(a, b)| a - b).collect();
    let mut out = GPoly::new();
    sub_scaled(&mut out, f, &sf, &-Rational::one());
    sub_scaled(&mut out, g, &sg, &Rational::one());
    out
}

/// A reduced Gröbner basis: monic elements sorted by leading term ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub generators: Vec<Poly>,
    pub order: MonomialOrder,
}

impl GroebnerBasis {
    fn ctx(&self) -> Result<Option<Ctx>, GroebnerError> {
        match self.generators.first() {
            None => Ok(None),
            Some(g) => {
                let ring = g.ring().clone();
                let perm = self.order.permutation(&ring)?;
                Ok(Some(Ctx { ring, perm }))
            }
        }
    }

    /// Whether the basis is the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_one()
    }

    /// Every S-polynomial reduces to zero.
    pub fn satisfies_s_pair_criterion(&self) -> bool {
        let Ok(Some(ctx)) = self.ctx() else { return true };
        let basis: Vec<GPoly> = self.generators.iter().map(|g| ctx.to_internal(g)).collect();
        let none = Deadline(None);
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                if !reduce(spoly(&basis[i], &basis[j]), &basis, &none).unwrap().is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Elements involving only `keep`; `keep` must be the least block.
    pub fn elimination_part<S: AsRef<str>>(&self, keep: &[S]) -> Result<Vec<Poly>, GroebnerError> {
        let least: Vec<&str> = self.order.precedence.iter().take(keep.len()).map(String::as_str).collect();
        if keep.iter().any(|k| !least.contains(&k.as_ref())) {
            return Err(GroebnerError::BlockMismatch);
        }
        Ok(self
            .generators
            .iter()
            .filter(|g| {
                g.support_vars()
                    .iter()
                    .all(|&v| keep.iter().any(|k| k.as_ref() == g.ring().name(v)))
            })
            .cloned()
            .collect())
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Pairs are treated smallest-lcm first; pairs with coprime leading
/// monomials and pairs covered by Buchberger's chain criterion are skipped.
pub fn buchberger(
    gens: &[Poly],
    order: &MonomialOrder,
    deadline: Option<Instant>,
) -> Result<GroebnerBasis, GroebnerError> {
    let first = gens.first().ok_or(GroebnerError::EmptyInput)?;
    let ring = first.ring().clone();
    if gens.iter().any(|g| g.ring() != &ring) {
        return Err(GroebnerError::RingMismatch);
    }
    let ctx = Ctx {
        perm: order.permutation(&ring)?,
        ring,
    };
    let deadline = Deadline(deadline);

    let mut basis: Vec<GPoly> = Vec::new();
    // pending pairs (i, j) with i < j, plus their lcm
    let mut pairs: Vec<(usize, usize, Exps)> = Vec::new();
    let add = |basis: &mut Vec<GPoly>, pairs: &mut Vec<(usize, usize, Exps)>, g: GPoly| {
        let g = monic(g);
        let j = basis.len();
        for (i, b) in basis.iter().enumerate() {
            pairs.push((i, j, lcm(lead(b).0, lead(&g).0)));
        }
        basis.push(g);
    };

    for g in gens {
        let r = reduce(ctx.to_internal(g), &basis, &deadline)?;
        if !r.is_empty() {
            add(&mut basis, &mut pairs, r);
        }
    }

    while !pairs.is_empty() {
        deadline.check()?;
        let k = (0..pairs.len()).min_by(|&a, &b| pairs[a].2.cmp(&pairs[b].2)).unwrap();
        let (i, j, l) = pairs.swap_remove(k);
        let (li, lj) = (lead(&basis[i]).0, lead(&basis[j]).0);
        if li.iter().zip(lj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let pending = |a: usize, b: usize| {
            let (a, b) = (a.min(b), a.max(b));
            pairs.iter().any(|(x, y, _)| *x == a && *y == b)
        };
        let chain = (0..basis.len()).any(|m| {
            m != i && m != j && divides(lead(&basis[m]).0, &l) && !pending(i, m) && !pending(j, m)
        });
        if chain {
            continue;
        }
        let h = reduce(spoly(&basis[i], &basis[j]), &basis, &deadline)?;
        if !h.is_empty() {
            add(&mut basis, &mut pairs, h);
        }
    }

    // minimalize, then interreduce
    let mut minimal: Vec<GPoly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lg = lead(g).0;
        let redundant = basis.iter().enumerate().any(|(m, h)| {
            let lh = lead(h).0;
            m != k && divides(lh, lg) && (lh != lg || m < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<GPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, g)| g.clone())
            .collect();
        let g = &minimal[k];
        let (le, lc) = lead(g);
        let mut tail = g.clone();
        tail.remove(le);
        let mut r = reduce(tail, &others, &deadline)?;
        r.insert(le.clone(), lc.clone());
        reduced.push(monic(r));
    }
    reduced.sort_by(|a, b| lead(a).0.cmp(lead(b).0));
    Ok(GroebnerBasis {
        generators: reduced.iter().map(|g| ctx.to_poly(g)).collect(),
        order: order.clone(),
    })
}

/// Remainder of `p` on division by `basis`; zero iff `p` is in the ideal.
pub fn normal_form(p: &Poly, basis: &GroebnerBasis) -> Result<Poly, GroebnerError> {
    let Some(ctx) = basis.ctx()? else { return Ok(p.clone()) };
    if p.ring() != &ctx.ring {
        return Err(GroebnerError::RingMismatch);
    }
    let gs: Vec<GPoly> = basis.generators.iter().map(|g| ctx.to_internal(g)).collect();
    let r = reduce(ctx.to_internal(p), &gs, &Deadline(None))?;
    Ok(ctx.to_poly(&r))
}

/// Generators of the elimination ideal `<gens> ∩ Q[keep]`.
pub fn eliminate<S: AsRef<str>>(
    gens: &[Poly],
    keep: &[S],
    order: &MonomialOrder,
) -> Result<Vec<Poly>, GroebnerError> {
    let least: Vec<&str> = order.precedence.iter().take(keep.len()).map(String::as_str).collect();
    if keep.iter().any(|k| !least.contains(&k.as_ref())) {
        return Err(GroebnerError::BlockMismatch);
    }
    buchberger(gens, order, None)?.elimination_part(keep)
}

/// Leading monomial of `p` under `order`, as a ring-aligned [`Monomial`].
pub fn leading_monomial(p: &Poly, order: &MonomialOrder) -> Result<Option<Monomial>, GroebnerError> {
    let ctx = Ctx {
        perm: order.permutation(p.ring())?,
        ring: p.ring().clone(),
    };
    let g = ctx.to_internal(p);
    Ok(g.iter().next_back().map(|(e, _)| {
        let mut m = vec![0; ctx.ring.len()];
        for (k, &i) in ctx.perm.iter().enumerate() {
            m[i] = e[k];
        }
        Monomial(m)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;

    fn ring6() -> Ring {
        Ring::new(&["u1", "u2", "u3", "x", "y", "z"]).unwrap()
    }

    fn order6() -> MonomialOrder {
        MonomialOrder::lex(&["u1", "u2", "u3", "x", "y", "z"])
    }

    fn ps(r: &Ring, xs: &[&str]) -> Vec<Poly> {
        xs.iter().map(|s| parse_poly(s, r).unwrap()).collect()
    }

    #[test]
    fn already_a_basis() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let g = buchberger(&ps(&r, &["x", "y"]), &MonomialOrder::lex(&["x", "y"]), None).unwrap();
        assert_eq!(g.generators, ps(&r, &["x", "y"]));
    }

    #[test]
    fn worked_plinth_ideal() {
        let r = ring6();
        let g = buchberger(&ps(&r, &["x", "x - u1", "x*z - y^2 - u2", "y - u3"]), &order6(), None).unwrap();
        assert_eq!(g.generators, ps(&r, &["u1", "u3^2 + u2", "x", "y - u3"]));
        assert!(g.satisfies_s_pair_criterion());
        assert_eq!(g.elimination_part(&["u1", "u2", "u3"]).unwrap(), ps(&r, &["u1", "u3^2 + u2"]));
        // x*z - y^2 ≡ u2 modulo the ideal
        let nf = normal_form(&parse_poly("x*z - y^2", &r).unwrap(), &g).unwrap();
        assert_eq!(nf, parse_poly("u2", &r).unwrap());
    }

    #[test]
    fn twisted_cubic_elimination() {
        let r = Ring::new(&["u", "v", "x"]).unwrap();
        let order = MonomialOrder::lex(&["u", "v", "x"]);
        let e = eliminate(&ps(&r, &["x^2 - u", "x^3 - v"]), &["u", "v"], &order).unwrap();
        assert_eq!(e, ps(&r, &["v^2 - u^3"]));
        let e = eliminate(&ps(&r, &["x - u"]), &["u"], &MonomialOrder::lex(&["u", "v", "x"])).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn order_and_block_errors() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let gens = ps(&r, &["x"]);
        assert!(matches!(buchberger(&gens, &MonomialOrder::lex(&["x"]), None), Err(GroebnerError::OrderMismatch(_))));
        assert_eq!(eliminate(&gens, &["y"], &MonomialOrder::lex(&["x", "y"])), Err(GroebnerError::BlockMismatch));
        assert_eq!(buchberger(&[], &MonomialOrder::lex(&["x"]), None), Err(GroebnerError::EmptyInput));
    }

    #[test]
    fn unit_ideal_and_normal_forms() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let o = MonomialOrder::lex(&["y", "x"]);
        let g = buchberger(&ps(&r, &["x*y - 1", "x"]), &o, None).unwrap();
        assert!(g.is_unit());
        let g = buchberger(&ps(&r, &["x^2 + y", "x*y - 1"]), &o, None).unwrap();
        assert_eq!(normal_form(&Poly::one(&r), &g).unwrap(), Poly::one(&r));
        for gen in ps(&r, &["x^2 + y", "x*y - 1"]) {
            assert!(normal_form(&gen, &g).unwrap().is_zero());
        }
    }

    #[test]
    fn expired_deadline_times_out() {
        let r = Ring::new(&["x", "y", "z"]).unwrap();
        let gens = ps(&r, &["x^3 - y*z + 1", "y^3 - x*z", "z^3 - x*y + 2"]);
        let past = Instant::now() - std::time::Duration::from_secs(1);
        assert_eq!(buchberger(&gens, &MonomialOrder::lex(&["x", "y", "z"]), Some(past)), Err(GroebnerError::Timeout));
    }
}
