//! The rank of a locally nilpotent derivation of `Q[x,y,z]`.
//!
//! Rank 1 iff the plinth generator is a unit. Otherwise the generator,
//! written as `C(u1, u2)` in the kernel coordinates, decomposes as
//! `ℓ(u)` with `u` a coordinate of `Q[u1, u2]` iff the rank is 2.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::coordinates::{compose, uni_multivariate_decompose, CandidateRejection, CoordinateCertificate, DecompositionResult};
use crate::derivation::{Derivation, KernelPair};
use crate::plinth::{minimal_local_slice, PlinthCertificate, PlinthError};
use crate::poly::Poly;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("kernel pair does not verify for this derivation")]
    InvalidKernelPair,
    #[error(transparent)]
    Plinth(#[from] PlinthError),
    #[error("plinth generator is constant; the rank is 1")]
    ConstantGenerator,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl RankError {
    pub fn is_timeout(&self) -> bool {
        matches!(self, RankError::Plinth(e) if e.is_timeout())
    }
}

#[derive(Debug, Clone, Default)]
pub struct RankOptions {
    pub deadline: Option<Instant>,
}

impl RankOptions {
    pub fn with_budget(budget: Duration) -> RankOptions {
        RankOptions {
            deadline: Some(Instant::now() + budget),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankWitness {
    /// `reduced(s) = 1`.
    Slice { s: Poly },
    /// `generator = ℓ(inner)`, `inner = inner_abstract(f, g)`.
    RankTwo {
        outer: Vec<Rational>,
        inner_abstract: Poly,
        inner: Poly,
        certificate: CoordinateCertificate,
    },
    /// Every candidate inner polynomial was rejected.
    RankThree { rejections: Vec<CandidateRejection> },
}

#[derive(Debug, Clone)]
pub struct RankReport {
    pub rank: u8,
    pub content: Poly,
    pub reduced: Derivation,
    pub plinth: PlinthCertificate,
    pub witness: RankWitness,
    pub timings: Vec<(&'static str, Duration)>,
}

/// Rank 2 or 3 for a nonconstant generator in two abstract variables.
pub fn classify_plinth(c: &Poly) -> Result<(u8, DecompositionResult), RankError> {
    if c.is_constant() {
        return Err(RankError::ConstantGenerator);
    }
    let dec = uni_multivariate_decompose(c);
    Ok((if dec.found { 2 } else { 3 }, dec))
}

pub fn compute_rank(d: &Derivation, kp: &KernelPair, opts: &RankOptions) -> Result<RankReport, RankError> {
    let start = Instant::now();
    let mut timings = Vec::new();
    if !d.verify_kernel_pair(kp) {
        return Err(RankError::InvalidKernelPair);
    }
    let dec = d.irreducible_decompose();
    timings.push(("decompose", start.elapsed()));

    let t = Instant::now();
    let plinth = minimal_local_slice(&dec.reduced, kp, opts.deadline)?;
    timings.push(("plinth", t.elapsed()));

    let t = Instant::now();
    let (rank, witness) = if plinth.generator.is_constant() {
        (1, RankWitness::Slice { s: plinth.slice.s.clone() })
    } else {
        let (rank, res) = classify_plinth(&plinth.generator_abstract)?;
        if res.found {
            let inner_abstract = res.inner.unwrap();
            let inner = inner_abstract
                .subst(&[kp.f.clone(), kp.g.clone()])
                .map_err(|e| RankError::Inconsistent(e.to_string()))?;
            (
                rank,
                RankWitness::RankTwo {
                    outer: res.outer.unwrap(),
                    inner_abstract,
                    inner,
                    certificate: res.certificate.unwrap(),
                },
            )
        } else {
            (rank, RankWitness::RankThree { rejections: res.candidates_tried })
        }
    };
    timings.push(("classify", t.elapsed()));

    let report = RankReport {
        rank,
        content: dec.content,
        reduced: dec.reduced,
        plinth,
        witness,
        timings,
    };
    verify_report(&report)?;
    let mut report = report;
    report.timings.push(("total", start.elapsed()));
    Ok(report)
}

/// Re-check a report's witness from scratch.
pub fn verify_report(r: &RankReport) -> Result<(), RankError> {
    let bad = |m: &str| Err(RankError::Inconsistent(m.to_string()));
    let y = &r.reduced;
    let s = &r.plinth.slice.s;
    if y.apply(s, 1) != r.plinth.generator || !y.apply(&r.plinth.generator, 1).is_zero() {
        return bad("minimal slice equations fail");
    }
    match &r.witness {
        RankWitness::Slice { s } => {
            if r.rank != 1 || !y.apply(s, 1).is_one() {
                return bad("slice witness fails");
            }
        }
        RankWitness::RankTwo {
            outer,
            inner_abstract,
            inner,
            certificate,
        } => {
            if r.rank != 2
                || compose(outer, inner_abstract) != r.plinth.generator_abstract
                || compose(outer, inner) != r.plinth.generator
                || !certificate.validates(inner_abstract)
                || outer.len() < 2
            {
                return bad("rank-two witness fails");
            }
        }
        RankWitness::RankThree { rejections } => {
            if r.rank != 3 || rejections.is_empty() || r.plinth.generator.is_constant() {
                return bad("rank-three log is empty");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_poly, Ring};

    fn p(s: &str) -> Poly {
        parse_poly(s, &Ring::xyz()).unwrap()
    }

    fn rank(a: &str, b: &str, c: &str, f: &str, g: &str) -> RankReport {
        let d = Derivation::new(p(a), p(b), p(c)).unwrap();
        compute_rank(&d, &KernelPair { f: p(f), g: p(g) }, &RankOptions::default()).unwrap()
    }

    #[test]
    fn examples() {
        let r = rank("0", "0", "1", "x", "y");
        assert_eq!(r.rank, 1);
        assert_eq!(r.witness, RankWitness::Slice { s: p("z") });

        let r = rank("0", "x", "2*y", "x", "x*z - y^2");
        assert_eq!(r.rank, 2);
        match r.witness {
            RankWitness::RankTwo { outer, inner, .. } => {
                assert_eq!(inner, p("x"));
                assert_eq!(outer.len(), 2);
            }
            w => panic!("{:?}", w),
        }

        let r = rank("0", "x^2", "2*y", "x", "x^2*z - y^2");
        assert_eq!((r.rank, r.plinth.generator.clone()), (2, p("x^2")));

        let r = rank("0", "0", "x^2 + 1", "x", "y");
        assert_eq!((r.rank, r.content.clone()), (1, p("x^2 + 1")));
    }

    #[test]
    fn classify_examples() {
        let kr = Ring::new(&["u1", "u2"]).unwrap();
        let u = |s: &str| parse_poly(s, &kr).unwrap();
        assert_eq!(classify_plinth(&u("u1")).unwrap().0, 2);
        assert_eq!(classify_plinth(&u("u1*u2")).unwrap().0, 3);
        let (r, d) = classify_plinth(&u("(u2 + u1^2)^2")).unwrap();
        assert_eq!((r, d.inner.unwrap()), (2, u("u2 + u1^2")));
        assert_eq!(classify_plinth(&u("3")).unwrap_err(), RankError::ConstantGenerator);
    }

    #[test]
    fn bad_kernel_pair() {
        let d = Derivation::new(p("0"), p("0"), p("1")).unwrap();
        let e = compute_rank(&d, &KernelPair { f: p("x"), g: p("x^2") }, &RankOptions::default());
        assert_eq!(e.unwrap_err(), RankError::InvalidKernelPair);
    }
}
