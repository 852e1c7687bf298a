//! Coordinates of two-variable polynomial rings and uni-multivariate
//! decomposition `c = ℓ(u)` with `u` a coordinate.
//!
//! The coordinate test peels the Newton polygon: a coordinate of degrees
//! `(a, b)` in the two variables has support inside the triangle
//! `b·i + a·j ≤ a·b`, one degree divides the other, and the edge form is a
//! pure power `c·(x^q + μy)^b`, which an elementary substitution removes.

use num_traits::{One, Zero};

use crate::factor::factor_multi;
use crate::poly::{Automorphism2, AutomorphismStep, Direction, Monomial, Poly, Ring};
use crate::Rational;

/// Why a polynomial is not a coordinate, at the peeling stage it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordinateRejection {
    Constant,
    /// Involves one variable only, with degree above one.
    NonlinearUnivariate { degree: u32 },
    /// Support point `(i, j)` lies outside the Newton triangle.
    OutsideTriangle { point: (u32, u32), degrees: (u32, u32) },
    DegreesNotDividing { degrees: (u32, u32) },
    /// The edge form is not a pure power of a binomial.
    EdgeNotPower { degrees: (u32, u32) },
}

impl std::fmt::Display for CoordinateRejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoordinateRejection::Constant => write!(f, "constant"),
            CoordinateRejection::NonlinearUnivariate { degree } => {
                write!(f, "univariate of degree {}", degree)
            }
            CoordinateRejection::OutsideTriangle { point, degrees } => write!(
                f,
                "support point {:?} outside the Newton triangle of degrees {:?}",
                point, degrees
            ),
            CoordinateRejection::DegreesNotDividing { degrees } => {
                write!(f, "degrees {:?} do not divide one another", degrees)
            }
            CoordinateRejection::EdgeNotPower { degrees } => {
                write!(f, "edge form at degrees {:?} is not a binomial power", degrees)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateCertificate {
    pub is_coordinate: bool,
    /// Sends the input to the first variable (forward direction).
    pub witness: Option<Automorphism2>,
    /// Image of the second variable under the inverse witness.
    pub complement: Option<Poly>,
    pub rejection: Option<CoordinateRejection>,
}

impl CoordinateCertificate {
    /// Re-check the witness against `p` from scratch.
    pub fn validates(&self, p: &Poly) -> bool {
        let (Some(w), Some(c)) = (&self.witness, &self.complement) else {
            return !self.is_coordinate;
        };
        let r = p.ring();
        self.is_coordinate
            && w.apply(p, Direction::Forward).ok() == Some(Poly::var(r, 0))
            && w.apply(c, Direction::Forward).ok() == Some(Poly::var(r, 1))
            && (0..2).all(|i| {
                let v = Poly::var(r, i);
                w.apply(&v, Direction::Forward)
                    .and_then(|im| w.apply(&im, Direction::Inverse))
                    .ok()
                    == Some(v)
            })
    }
}

fn reject(reason: CoordinateRejection) -> CoordinateCertificate {
    CoordinateCertificate {
        is_coordinate: false,
        witness: None,
        complement: None,
        rejection: Some(reason),
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * q((n - i) as i64) / q((i + 1) as i64);
    }
    acc
}

/// Peel one Newton-polygon edge; `Ok(step)` removes it, `Err` rejects.
/// With `swapped`, the roles of the two variables are exchanged.
fn peel(p: &Poly, a: u32, b: u32, swapped: bool) -> Result<AutomorphismStep, CoordinateRejection> {
    // orient so that the reduced variable is "x" with degree da = q * db
    let (da, db) = if swapped { (b, a) } else { (a, b) };
    let at = |i: u32, j: u32| {
        let m = if swapped { vec![j, i] } else { vec![i, j] };
        p.coeff(&Monomial(m))
    };
    let qq = da / db;
    let c = at(da, 0);
    let mu = at(qq * (db - 1), 1) / (q(db as i64) * &c);
    let not_power = CoordinateRejection::EdgeNotPower { degrees: (a, b) };
    if mu.is_zero() {
        return Err(not_power);
    }
    // edge form: terms with db*i + da*j = da*db
    for (m, coeff) in p.terms() {
        let (i, j) = if swapped { (m.0[1], m.0[0]) } else { (m.0[0], m.0[1]) };
        if db * i + da * j == da * db {
            let expect = &c * binomial(db, j) * num_traits::pow(mu.clone(), j as usize);
            if *coeff != expect {
                return Err(not_power);
            }
        }
    }
    for j in 0..=db {
        let expect = &c * binomial(db, j) * num_traits::pow(mu.clone(), j as usize);
        if at(qq * (db - j), j) != expect {
            return Err(not_power);
        }
    }
    // y ↦ y - x^q / μ turns the edge into c μ^b y^b
    let mut h = vec![Rational::zero(); qq as usize + 1];
    h[qq as usize] = -mu.recip();
    Ok(AutomorphismStep::Elementary { swapped, h })
}

/// Decide whether `p ∈ Q[a, b]` is a coordinate, with a witness when it is.
pub fn coordinate_test(p: &Poly) -> CoordinateCertificate {
    assert_eq!(p.ring().len(), 2, "coordinate test needs a two-variable ring");
    let ring = p.ring().clone();
    let mut witness = Automorphism2::identity();
    let mut cur = p.clone();
    loop {
        let total = match cur.total_degree() {
            None | Some(0) => return reject(CoordinateRejection::Constant),
            Some(t) => t,
        };
        if total == 1 {
            let alpha = cur.coeff(&Monomial(vec![1, 0]));
            let beta = cur.coeff(&Monomial(vec![0, 1]));
            let gamma = cur.constant_term();
            let step = if !alpha.is_zero() {
                AutomorphismStep::Affine {
                    matrix: [[alpha.recip(), -&beta / &alpha], [q(0), q(1)]],
                    shift: [-&gamma / &alpha, q(0)],
                }
            } else {
                AutomorphismStep::Affine {
                    matrix: [[q(0), q(1)], [beta.recip(), q(0)]],
                    shift: [q(0), -&gamma / &beta],
                }
            };
            witness.push(step);
            let complement = witness
                .apply(&Poly::var(&ring, 1), Direction::Inverse)
                .expect("two-variable ring");
            let cert = CoordinateCertificate {
                is_coordinate: true,
                witness: Some(witness),
                complement: Some(complement),
                rejection: None,
            };
            assert!(cert.validates(p), "coordinate witness failed to validate");
            return cert;
        }
        let a = cur.degree_in(0).unwrap_or(0);
        let b = cur.degree_in(1).unwrap_or(0);
        if a == 0 || b == 0 {
            return reject(CoordinateRejection::NonlinearUnivariate { degree: total });
        }
        for (m, _) in cur.terms() {
            if b * m.0[0] + a * m.0[1] > a * b {
                return reject(CoordinateRejection::OutsideTriangle {
                    point: (m.0[0], m.0[1]),
                    degrees: (a, b),
                });
            }
        }
        let step = if a.is_multiple_of(b) {
            peel(&cur, a, b, false).or_else(|e| if a == b { peel(&cur, a, b, true) } else { Err(e) })
        } else if b.is_multiple_of(a) {
            peel(&cur, a, b, true)
        } else {
            Err(CoordinateRejection::DegreesNotDividing { degrees: (a, b) })
        };
        match step {
            Err(e) => return reject(e),
            Ok(step) => {
                cur = cur.subst(&step.images(&ring)).expect("two-variable ring");
                witness.push(step);
            }
        }
    }
}

/// Whether `u(t) - u(w)` divides `c(t) - c(w)` in four variables.
pub fn divides_diff(u: &Poly, c: &Poly) -> bool {
    let r = u.ring();
    assert_eq!(r.len(), 2, "divides_diff needs a two-variable ring");
    let w1 = r.fresh_name("w1", &[]);
    let w2 = r.fresh_name("w2", std::slice::from_ref(&w1));
    let big = Ring::new(&[r.name(0), r.name(1), &w1, &w2]).unwrap();
    let t = [Poly::var(&big, 0), Poly::var(&big, 1)];
    let w = [Poly::var(&big, 2), Poly::var(&big, 3)];
    let diff = |p: &Poly| &p.subst(&t).unwrap() - &p.subst(&w).unwrap();
    let du = diff(u);
    if du.is_zero() {
        return false;
    }
    diff(c).exact_div(&du).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectionReason {
    DivisibilityFailed,
    NotACoordinate(CoordinateRejection),
    NotAffineFactorForm,
}

impl std::fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectionReason::DivisibilityFailed => write!(f, "divisibility-failed"),
            RejectionReason::NotACoordinate(r) => write!(f, "not-a-coordinate ({})", r),
            RejectionReason::NotAffineFactorForm => write!(f, "not-affine-factor-form"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRejection {
    pub candidate: Poly,
    pub reason: RejectionReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult {
    pub found: bool,
    pub inner: Option<Poly>,
    /// `ℓ`, lowest degree first.
    pub outer: Option<Vec<Rational>>,
    pub certificate: Option<CoordinateCertificate>,
    pub candidates_tried: Vec<CandidateRejection>,
}

/// A successful candidate: `c = ℓ(inner)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub inner: Poly,
    pub outer: Vec<Rational>,
    pub certificate: CoordinateCertificate,
}

/// `ℓ(u)` for `ℓ` given lowest degree first.
pub fn compose(outer: &[Rational], u: &Poly) -> Poly {
    let mut acc = Poly::zero(u.ring());
    for c in outer.iter().rev() {
        acc = &(&acc * u) + &Poly::constant(u.ring(), c.clone());
    }
    acc
}

fn check_candidate(c: &Poly, cand: &Poly) -> Result<Decomposition, RejectionReason> {
    if !divides_diff(cand, c) {
        return Err(RejectionReason::DivisibilityFailed);
    }
    let cert = coordinate_test(cand);
    if !cert.is_coordinate {
        return Err(RejectionReason::NotACoordinate(cert.rejection.unwrap()));
    }
    let w = cert.witness.as_ref().unwrap();
    let image = w.apply(c, Direction::Forward).expect("two-variable ring");
    let outer = image.univariate_coeffs(0).ok_or(RejectionReason::NotAffineFactorForm)?;
    assert_eq!(compose(&outer, cand), *c, "decomposition does not re-expand");
    Ok(Decomposition {
        inner: cand.clone(),
        outer,
        certificate: cert,
    })
}

fn candidates(c: &Poly, base: &[Rational; 2]) -> Vec<Poly> {
    let shifted = c - &Poly::constant(c.ring(), c.eval(base));
    factor_multi(&shifted)
        .map(|f| f.factors.into_iter().map(|(p, _)| p).collect())
        .unwrap_or_default()
}

/// Decompose `c = ℓ(u)` with `u` a coordinate, trying the irreducible factors
/// of `c - c(base)` as `u`, with base point `(0, 0)`.
pub fn uni_multivariate_decompose(c: &Poly) -> DecompositionResult {
    uni_multivariate_decompose_at(c, &[q(0), q(0)])
}

pub fn uni_multivariate_decompose_at(c: &Poly, base: &[Rational; 2]) -> DecompositionResult {
    assert_eq!(c.ring().len(), 2, "decomposition needs a two-variable ring");
    let mut tried = Vec::new();
    for cand in candidates(c, base) {
        match check_candidate(c, &cand) {
            Ok(d) => {
                return DecompositionResult {
                    found: true,
                    inner: Some(d.inner),
                    outer: Some(d.outer),
                    certificate: Some(d.certificate),
                    candidates_tried: tried,
                }
            }
            Err(reason) => tried.push(CandidateRejection { candidate: cand, reason }),
        }
    }
    DecompositionResult {
        found: false,
        inner: None,
        outer: None,
        certificate: None,
        candidates_tried: tried,
    }
}

/// Every candidate factor that yields a decomposition.
pub fn all_decompositions(c: &Poly, base: &[Rational; 2]) -> Vec<Decomposition> {
    candidates(c, base)
        .iter()
        .filter_map(|cand| check_candidate(c, cand).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;

    fn r() -> Ring {
        Ring::new(&["x", "y"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &r()).unwrap()
    }

    fn t(s: &str) -> Poly {
        parse_poly(s, &Ring::new(&["t1", "t2"]).unwrap()).unwrap()
    }

    #[test]
    fn positives() {
        for s in ["y + x^2", "x", "3*y - 2", "x + (y + x^3)^2", "2*x + 3*y + 1", "y + x^2 + (x + y + x^2)^3"] {
            let c = coordinate_test(&p(s));
            assert!(c.is_coordinate, "{}", s);
            assert!(c.validates(&p(s)));
        }
    }

    #[test]
    fn negatives() {
        let rej = |s: &str| coordinate_test(&p(s)).rejection.unwrap();
        assert_eq!(rej("x^2"), CoordinateRejection::NonlinearUnivariate { degree: 2 });
        assert_eq!(rej("x*y"), CoordinateRejection::OutsideTriangle { point: (1, 1), degrees: (1, 1) });
        assert_eq!(rej("x + x^2*y"), CoordinateRejection::OutsideTriangle { point: (2, 1), degrees: (2, 1) });
        assert_eq!(rej("5"), CoordinateRejection::Constant);
        assert_eq!(rej("x^2 + y^3"), CoordinateRejection::DegreesNotDividing { degrees: (2, 3) });
        assert_eq!(rej("x^2 + y^2"), CoordinateRejection::EdgeNotPower { degrees: (2, 2) });
    }

    #[test]
    fn divides_diff_examples() {
        assert!(divides_diff(&t("t1"), &t("t1^2")));
        assert!(!divides_diff(&t("t1"), &t("t1*t2")));
        assert!(divides_diff(&t("t1 + t2^2"), &t("(t1 + t2^2)^3 - 5")));
    }

    #[test]
    fn decompositions() {
        let d = uni_multivariate_decompose(&t("t1^2"));
        assert_eq!((d.inner, d.outer), (Some(t("t1")), Some(vec![q(0), q(0), q(1)])));

        let d = uni_multivariate_decompose(&t("t1*t2"));
        assert!(!d.found);
        assert_eq!(d.candidates_tried.len(), 2);
        assert!(d.candidates_tried.iter().all(|c| c.reason == RejectionReason::DivisibilityFailed));

        let c = t("(t2 + t1^2)^3 + 2*(t2 + t1^2)");
        let d = uni_multivariate_decompose(&c);
        assert!(d.found);
        assert_eq!(d.inner.clone().unwrap(), t("t2 + t1^2"));
        assert_eq!(d.outer.unwrap(), vec![q(0), q(2), q(0), q(1)]);
    }

    #[test]
    fn non_coordinate_inner() {
        // candidates t1 and t2 both fail the divisibility check
        let d = uni_multivariate_decompose(&t("t1^2*t2^2 + 1"));
        assert!(!d.found);
    }
}
