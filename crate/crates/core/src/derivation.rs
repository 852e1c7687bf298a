//! Derivations of a three-variable polynomial ring.

use thiserror::Error;

use crate::factor::gcd_multi;
use crate::poly::{Poly, PolyError, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("the derivation is identically zero")]
    ZeroDerivation,
    #[error("derivations act on a ring with exactly three variables")]
    WrongRing,
    #[error("iterates of {variable} did not vanish within {cap} applications")]
    IterationCap { variable: String, cap: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `a1 ∂x + a2 ∂y + a3 ∂z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    coeffs: [Poly; 3],
}

/// Kernel generators `(f, g)` claimed for a derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelPair {
    pub f: Poly,
    pub g: Poly,
}

/// `s` with `D(s) = value ≠ 0` and `D(value) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSlice {
    pub s: Poly,
    pub value: Poly,
}

/// `D = content * reduced` with `reduced` irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibleDecomposition {
    pub content: Poly,
    pub reduced: Derivation,
}

/// Outcome of the nilpotency test for a Jacobian derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianRecognition {
    pub derivation: Derivation,
    /// `deg f * deg g`; the test checks the iterate of order `bound + 1`.
    pub bound: u32,
    pub locally_nilpotent: bool,
}

impl Derivation {
    pub fn new(a1: Poly, a2: Poly, a3: Poly) -> Result<Derivation, DerivationError> {
        if a1.ring().len() != 3 || a2.ring() != a1.ring() || a3.ring() != a1.ring() {
            return Err(DerivationError::WrongRing);
        }
        if a1.is_zero() && a2.is_zero() && a3.is_zero() {
            return Err(DerivationError::ZeroDerivation);
        }
        Ok(Derivation { coeffs: [a1, a2, a3] })
    }

    pub fn coeffs(&self) -> &[Poly; 3] {
        &self.coeffs
    }

    pub fn ring(&self) -> &Ring {
        self.coeffs[0].ring()
    }

    /// `D^times(p)`.
    pub fn apply(&self, p: &Poly, times: usize) -> Poly {
        let mut cur = p.clone();
        for _ in 0..times {
            if cur.is_zero() {
                break;
            }
            let mut next = Poly::zero(self.ring());
            for (i, a) in self.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    next = &next + &(a * &cur.diff(i));
                }
            }
            cur = next;
        }
        cur
    }

    /// `h ↦ Jac(f, g, h)`.
    pub fn from_jacobian(f: &Poly, g: &Poly) -> Result<Derivation, DerivationError> {
        if f.ring().len() != 3 || g.ring() != f.ring() {
            return Err(DerivationError::WrongRing);
        }
        let r = f.ring();
        let c = |i| Poly::jacobian3(f, g, &Poly::var(r, i));
        Derivation::new(c(0)?, c(1)?, c(2)?)
    }

    /// Local nilpotency test for `Jac(f, g, ·)`: the iterates of order
    /// `deg f * deg g + 1` of all three variables vanish.
    pub fn recognize_jacobian(f: &Poly, g: &Poly) -> Result<JacobianRecognition, DerivationError> {
        let d = Derivation::from_jacobian(f, g)?;
        let bound = f.total_degree().unwrap_or(0) * g.total_degree().unwrap_or(0);
        let r = d.ring().clone();
        let locally_nilpotent = (0..3).all(|i| d.apply(&Poly::var(&r, i), bound as usize + 1).is_zero());
        Ok(JacobianRecognition {
            derivation: d,
            bound,
            locally_nilpotent,
        })
    }

    pub fn is_locally_nilpotent_jacobian(f: &Poly, g: &Poly) -> Result<bool, DerivationError> {
        Ok(Derivation::recognize_jacobian(f, g)?.locally_nilpotent)
    }

    /// `(1 + max coefficient degree) * 64`.
    pub fn default_cap(&self) -> usize {
        let deg = self.coeffs.iter().filter_map(Poly::total_degree).max().unwrap_or(0);
        (1 + deg as usize) * 64
    }

    /// For the first variable `v` (in ring order) with `D(v) ≠ 0`, the last
    /// nonvanishing iterate's predecessor `D^(k-1)(v)`, where `D^(k+1)(v) = 0`.
    pub fn initial_local_slice(&self, cap: Option<usize>) -> Result<LocalSlice, DerivationError> {
        let cap = cap.unwrap_or_else(|| self.default_cap());
        let r = self.ring().clone();
        for i in 0..3 {
            let v = Poly::var(&r, i);
            let mut prev = v;
            let mut cur = self.apply(&prev, 1);
            if cur.is_zero() {
                continue;
            }
            let mut steps = 1;
            loop {
                let next = self.apply(&cur, 1);
                if next.is_zero() {
                    let slice = LocalSlice { s: prev, value: cur };
                    debug_assert!(self.is_local_slice(&slice.s));
                    return Ok(slice);
                }
                steps += 1;
                if steps > cap {
                    return Err(DerivationError::IterationCap {
                        variable: r.name(i).to_string(),
                        cap,
                    });
                }
                prev = std::mem::replace(&mut cur, next);
            }
        }
        Err(DerivationError::ZeroDerivation)
    }

    pub fn is_local_slice(&self, s: &Poly) -> bool {
        let v = self.apply(s, 1);
        !v.is_zero() && self.apply(&v, 1).is_zero()
    }

    /// Split off the gcd of the coefficients.
    pub fn irreducible_decompose(&self) -> IrreducibleDecomposition {
        let mut content = Poly::zero(self.ring());
        for a in &self.coeffs {
            content = gcd_multi(&content, a).unwrap_or(content);
        }
        let q = |a: &Poly| a.exact_div(&content).expect("gcd divides every coefficient");
        IrreducibleDecomposition {
            reduced: Derivation {
                coeffs: [q(&self.coeffs[0]), q(&self.coeffs[1]), q(&self.coeffs[2])],
            },
            content,
        }
    }

    /// `D(f) = D(g) = 0` and `(f, g)` has a nonzero 2×2 Jacobian minor.
    pub fn verify_kernel_pair(&self, kp: &KernelPair) -> bool {
        let r = self.ring();
        if kp.f.ring() != r || kp.g.ring() != r {
            return false;
        }
        if !self.apply(&kp.f, 1).is_zero() || !self.apply(&kp.g, 1).is_zero() {
            return false;
        }
        (0..3).any(|i| !Poly::jacobian3(&kp.f, &kp.g, &Poly::var(r, i)).unwrap().is_zero())
    }

    /// `c * D`.
    pub fn scaled(&self, c: &Poly) -> Result<Derivation, DerivationError> {
        let [a, b, d] = &self.coeffs;
        Derivation::new(a * c, b * c, d * c)
    }

    /// `φ ∘ D ∘ φ⁻¹` for the ring automorphism `φ: p ↦ p(images)` whose
    /// inverse is `p ↦ p(inverse)`. Its kernel is `φ(ker D)`.
    pub fn conjugate(&self, images: &[Poly; 3], inverse: &[Poly; 3]) -> Result<Derivation, DerivationError> {
        let c = |i: usize| -> Result<Poly, DerivationError> { Ok(self.apply(&inverse[i], 1).subst(images)?) };
        Derivation::new(c(0)?, c(1)?, c(2)?)
    }
}

impl std::fmt::Display for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = self.ring();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| format!("({})*d{}", a, r.name(i)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
