//! Minimal local slices and the generator of the plinth ideal.
//!
//! A local slice `s` reduces by a prime `p | D(s)` when `s + a ∈ pA` for some
//! kernel element `a`. Membership is decided by eliminating `x, y, z` from
//! `⟨p, f - u1, g - u2, s - u3⟩` under lex `u1 ≺ u2 ≺ u3 ≺ x ≺ y ≺ z`: a
//! reduction exists iff the reduced basis has an element whose leading term
//! is a constant times `u3`.

use std::time::Instant;

use thiserror::Error;

use crate::derivation::{Derivation, DerivationError, KernelPair, LocalSlice};
use crate::factor::{factor_multi, FactorError};
use crate::groebner::{buchberger, leading_monomial, normal_form, GroebnerError, MonomialOrder};
use crate::poly::{Monomial, Poly, PolyError, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlinthError {
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("kernel pair does not verify for this derivation")]
    InvalidKernelPair,
    #[error("generator {0} is not a polynomial in the kernel pair")]
    NotInKernelAlgebra(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl PlinthError {
    pub fn is_timeout(&self) -> bool {
        matches!(self, PlinthError::Groebner(GroebnerError::Timeout))
    }
}

/// One attempted reduction of the current slice by a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRecord {
    pub prime: Poly,
    /// `a(f, g)` with `s + a(f, g) = prime * quotient`, when the reduction succeeded.
    pub kernel_element: Option<Poly>,
    pub quotient: Option<Poly>,
}

impl ReductionRecord {
    pub fn succeeded(&self) -> bool {
        self.quotient.is_some()
    }
}

/// Successful reduction `s + a(f, g) = p * s1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// `a` in the two kernel coordinates.
    pub a_abstract: Poly,
    /// `a(f, g)`.
    pub a: Poly,
    pub s1: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlinthCertificate {
    pub initial: LocalSlice,
    /// Minimal slice, rescaled so that `slice.value == generator`.
    pub slice: LocalSlice,
    /// Primitive generator with positive leading coefficient.
    pub generator: Poly,
    /// `generator = generator_abstract(f, g)`, in the ring `kernel_ring`.
    pub generator_abstract: Poly,
    pub kernel_ring: Ring,
    /// Reductions attempted in order.
    pub trail: Vec<ReductionRecord>,
    /// Prime factors of the generator, each re-checked to admit no reduction.
    pub certified_primes: Vec<Poly>,
}

fn fresh_names(ring: &Ring, bases: &[&str]) -> Vec<String> {
    let mut taken: Vec<String> = ring.vars().to_vec();
    let mut out = Vec::new();
    for b in bases {
        let n = ring.fresh_name(b, &taken);
        taken.push(n.clone());
        out.push(n);
    }
    out
}

/// Ring `[u1, u2]` of kernel coordinates, with names avoiding `ring`.
pub fn kernel_ring(ring: &Ring) -> Ring {
    Ring::new(&fresh_names(ring, &["u1", "u2"])).unwrap()
}

/// Try to reduce the local slice `s` by the prime `p`.
pub fn reduction_step(
    d: &Derivation,
    kp: &KernelPair,
    s: &Poly,
    p: &Poly,
    deadline: Option<Instant>,
) -> Result<Option<Reduction>, PlinthError> {
    let r = d.ring();
    let u = fresh_names(r, &["u1", "u2", "u3"]);
    let mut names = u.clone();
    names.extend(r.vars().iter().cloned());
    let big = Ring::new(&names)?;
    let order = MonomialOrder::lex(&names);
    let lift = |q: &Poly| q.to_ring(&big);
    let uvar = |i: usize| Poly::var(&big, i);
    let gens = vec![
        lift(p)?,
        &lift(&kp.f)? - &uvar(0),
        &lift(&kp.g)? - &uvar(1),
        &lift(s)? - &uvar(2),
    ];
    let gb = buchberger(&gens, &order, deadline)?;
    let g1 = gb.elimination_part(&u)?;
    let u3 = Monomial::var(big.len(), 2);
    let mut found = None;
    for g in &g1 {
        if leading_monomial(g, &order)?.as_ref() == Some(&u3) {
            found = Some(g);
            break;
        }
    }
    let Some(g) = found else { return Ok(None) };
    // g = u3 + a(u1, u2) after making it monic
    let g = g.scale(&g.coeff(&u3).recip());
    let a_big = &g - &uvar(2);
    let kr = kernel_ring(r);
    let a_abstract = a_big.to_ring(&kr)?;
    let a = a_abstract.subst(&[kp.f.clone(), kp.g.clone()])?;
    let s1 = (s + &a).exact_div(p).map_err(|_| {
        PlinthError::Inconsistent(format!("{} + {} is not divisible by {}", s, a, p))
    })?;
    Ok(Some(Reduction { a_abstract, a, s1 }))
}

/// Algorithm for a minimal local slice of an irreducible locally nilpotent `d`.
pub fn minimal_local_slice(
    d: &Derivation,
    kp: &KernelPair,
    deadline: Option<Instant>,
) -> Result<PlinthCertificate, PlinthError> {
    if !d.verify_kernel_pair(kp) {
        return Err(PlinthError::InvalidKernelPair);
    }
    let initial = d.initial_local_slice(None)?;
    let mut s = initial.s.clone();
    let mut trail = Vec::new();
    if !initial.value.is_constant() {
        let fact = factor_multi(&initial.value)?;
        for (p, m) in &fact.factors {
            for _ in 0..*m {
                match reduction_step(d, kp, &s, p, deadline)? {
                    Some(red) => {
                        trail.push(ReductionRecord {
                            prime: p.clone(),
                            kernel_element: Some(red.a),
                            quotient: Some(red.s1.clone()),
                        });
                        s = red.s1;
                    }
                    None => {
                        trail.push(ReductionRecord {
                            prime: p.clone(),
                            kernel_element: None,
                            quotient: None,
                        });
                        break;
                    }
                }
            }
        }
    }

    let value = d.apply(&s, 1);
    if value.is_zero() || !d.apply(&value, 1).is_zero() {
        return Err(PlinthError::Inconsistent(format!("{} is not a local slice", s)));
    }
    let (unit, generator) = value.content_and_primitive();
    let s = s.scale(&unit.recip());
    let slice = LocalSlice { s, value: generator.clone() };
    if initial.value.exact_div(&generator).is_err() {
        return Err(PlinthError::Inconsistent(format!(
            "{} does not divide {}",
            generator, initial.value
        )));
    }

    let mut certified_primes = Vec::new();
    if !generator.is_constant() {
        for (p, _) in factor_multi(&generator)?.factors {
            if reduction_step(d, kp, &slice.s, &p, deadline)?.is_some() {
                return Err(PlinthError::Inconsistent(format!(
                    "slice {} still reduces by {}",
                    slice.s, p
                )));
            }
            certified_primes.push(p);
        }
    }

    let (kernel_ring, generator_abstract) = express_in_kernel(&generator, kp, deadline)?;
    Ok(PlinthCertificate {
        initial,
        slice,
        generator,
        generator_abstract,
        kernel_ring,
        trail,
        certified_primes,
    })
}

/// Write `c ∈ Q[f, g]` as a polynomial `C(u1, u2)` with `C(f, g) = c`.
pub fn express_in_kernel(c: &Poly, kp: &KernelPair, deadline: Option<Instant>) -> Result<(Ring, Poly), PlinthError> {
    let r = c.ring();
    let kr = kernel_ring(r);
    if c.is_constant() {
        return Ok((kr.clone(), Poly::constant(&kr, c.constant_term())));
    }
    let mut names: Vec<String> = kr.vars().to_vec();
    names.extend(r.vars().iter().cloned());
    let big = Ring::new(&names)?;
    let gens = vec![
        &kp.f.to_ring(&big)? - &Poly::var(&big, 0),
        &kp.g.to_ring(&big)? - &Poly::var(&big, 1),
    ];
    let gb = buchberger(&gens, &MonomialOrder::lex(&names), deadline)?;
    let nf = normal_form(&c.to_ring(&big)?, &gb)?;
    let abs = nf
        .to_ring(&kr)
        .map_err(|_| PlinthError::NotInKernelAlgebra(c.to_string()))?;
    if abs.subst(&[kp.f.clone(), kp.g.clone()])? != *c {
        return Err(PlinthError::Inconsistent(format!("kernel expression of {} does not re-expand", c)));
    }
    Ok((kr, abs))
}

/// The plinth-ideal generator of `d`.
pub fn plinth_generator(d: &Derivation, kp: &KernelPair, deadline: Option<Instant>) -> Result<Poly, PlinthError> {
    Ok(minimal_local_slice(d, kp, deadline)?.generator)
}
