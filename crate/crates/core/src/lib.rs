//! Plinth ideals and ranks of locally nilpotent derivations of `Q[x,y,z]`.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] — sparse exact-rational multivariate polynomials, rings,
//!   two-variable tame automorphisms.
//! * [`parse`] — the textual polynomial grammar shared by input and output.
//! * [`factor`] — gcds, squarefree decomposition and factorization over `Q`.
//! * [`groebner`] — lexicographic Gröbner bases and elimination.
//! * [`derivation`] — derivations of `Q[x,y,z]`, Jacobian derivations,
//!   local slices, irreducible decomposition, kernel-pair checks.
//! * [`plinth`] — minimal local slices and the plinth-ideal generator.
//! * [`coordinates`] — coordinate recognition in two variables and
//!   uni-multivariate decomposition.
//! * [`rank`] — the rank classifier.

pub mod coordinates;
pub mod derivation;
pub mod factor;
pub mod groebner;
pub mod parse;
pub mod plinth;
pub mod poly;
pub mod rank;

pub use coordinates::{
    coordinate_test, divides_diff, uni_multivariate_decompose, CandidateRejection,
    CoordinateCertificate, CoordinateRejection, DecompositionResult,
};
pub use derivation::{Derivation, DerivationError, IrreducibleDecomposition, KernelPair, LocalSlice};
pub use factor::{factor_multi, factor_uni, gcd_multi, squarefree, FactorError, Factorization};
pub use groebner::{buchberger, eliminate, normal_form, GroebnerBasis, GroebnerError, MonomialOrder};
pub use parse::{parse_poly, ParseError};
pub use plinth::{minimal_local_slice, plinth_generator, reduction_step, PlinthCertificate, PlinthError};
pub use poly::{Automorphism2, AutomorphismStep, Direction, Monomial, Poly, PolyError, Ring};
pub use rank::{classify_plinth, compute_rank, RankError, RankOptions, RankReport, RankWitness};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;
