//! Gcds, squarefree decomposition and factorization over `Q`.
//!
//! Factorization of a squarefree primitive polynomial goes through a
//! Kronecker substitution `x_i ↦ c_i T^(e_i)` to one variable, a modular
//! factorization of the image, quadratic Hensel lifting, and Zassenhaus
//! recombination where each candidate is mapped back to the original
//! variables and accepted only by exact multivariate division. Univariate
//! inputs use the same path with the identity substitution.

mod gcd;
pub(crate) mod hensel;
pub(crate) mod modp;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::poly::{Monomial, Poly};
use crate::Rational;
use hensel::PolyZ;

pub(crate) use gcd::content_in;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("input is constant")]
    ConstantInput,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("expected a polynomial in one variable")]
    NotUnivariate,
}

/// `unit * Π factor^multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Multiply everything back out.
    pub fn expand(&self, ring: &crate::Ring) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(ring, self.unit.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Deterministic order on polynomials: total degree, then terms in
/// descending lex order.
pub fn canonical_cmp(a: &Poly, b: &Poly) -> Ordering {
    a.total_degree().cmp(&b.total_degree()).then_with(|| {
        for ((ma, ca), (mb, cb)) in a.terms().zip(b.terms()) {
            let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
            if o != Ordering::Equal {
                return o;
            }
        }
        a.num_terms().cmp(&b.num_terms())
    })
}

/// Greatest common divisor, primitive with positive lex-leading coefficient.
pub fn gcd_multi(p: &Poly, q: &Poly) -> Result<Poly, FactorError> {
    if p.is_zero() && q.is_zero() {
        return Err(FactorError::BothZero);
    }
    Ok(gcd::gcd(p, q))
}

/// Squarefree decomposition: pairwise coprime squarefree parts, sorted by
/// multiplicity, whose weighted product is `p` up to a rational unit.
pub fn squarefree(p: &Poly) -> Result<Vec<(Poly, u32)>, FactorError> {
    if p.is_constant() {
        return Err(FactorError::ConstantInput);
    }
    let mut parts = squarefree_rec(&p.normalized());
    parts.sort_by_key(|a| a.1);
    Ok(parts)
}

fn merge_part(parts: &mut Vec<(Poly, u32)>, f: Poly, m: u32) {
    if f.is_constant() {
        return;
    }
    match parts.iter_mut().find(|(_, k)| *k == m) {
        Some(entry) => entry.0 = (&entry.0 * &f).normalized(),
        None => parts.push((f.normalized(), m)),
    }
}

fn squarefree_rec(p: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let var = p.support_vars()[0];
    let cont = content_in(p, var);
    let prim = p.exact_div(&cont).unwrap();
    // Yun's algorithm in `var`
    let d = prim.diff(var);
    let a0 = gcd::gcd(&prim, &d);
    let mut b = prim.exact_div(&a0).unwrap();
    let mut c = d.exact_div(&a0).unwrap();
    let mut dd = &c - &b.diff(var);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd::gcd(&b, &dd);
        b = b.exact_div(&a).unwrap();
        c = dd.exact_div(&a).unwrap();
        dd = &c - &b.diff(var);
        merge_part(&mut out, a, i);
        i += 1;
    }
    for (f, m) in squarefree_rec(&cont) {
        merge_part(&mut out, f, m);
    }
    out
}

/// Factorization of a polynomial in a single variable.
pub fn factor_uni(p: &Poly) -> Result<Factorization, FactorError> {
    if p.is_constant() {
        return Err(FactorError::ConstantInput);
    }
    if p.support_vars().len() != 1 {
        return Err(FactorError::NotUnivariate);
    }
    factor_multi(p)
}

/// Irreducible factorization over `Q`.
pub fn factor_multi(p: &Poly) -> Result<Factorization, FactorError> {
    if p.is_constant() {
        return Err(FactorError::ConstantInput);
    }
    let ring = p.ring().clone();
    let n = ring.len();
    let mut factors: Vec<(Poly, u32)> = Vec::new();

    let prim = p.normalized();
    let mut mono = Monomial(vec![u32::MAX; n]);
    for (m, _) in prim.terms() {
        mono = mono.gcd(m);
    }
    for (i, &e) in mono.0.iter().enumerate() {
        if e > 0 {
            factors.push((Poly::var(&ring, i), e));
        }
    }
    let rest = prim
        .exact_div(&Poly::monomial(&ring, mono, Rational::one()))
        .unwrap();
    if !rest.is_constant() {
        for (part, mult) in squarefree(&rest)? {
            for f in irreducible_factors(&part) {
                factors.push((f, mult));
            }
        }
    }
    factors.sort_by(|a, b| canonical_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
    let prod = factors
        .iter()
        .fold(Poly::one(&ring), |acc, (f, m)| &acc * &f.pow(*m));
    let unit = p.leading_coeff() / prod.leading_coeff();
    debug_assert_eq!(prod.scale(&unit), *p);
    Ok(Factorization { unit, factors })
}

/// Mixed-radix Kronecker map on the variables that occur in a polynomial.
struct Kronecker {
    /// `(ring index, radix, weight, scale)` in ring order; the first entry
    /// carries the largest weight so T-degree order agrees with lex.
    slots: Vec<(usize, u64, u64, BigInt)>,
    total: u64,
    nvars: usize,
}

impl Kronecker {
    fn new(p: &Poly, scales: &[i64], extra: u64) -> Kronecker {
        let vars = p.support_vars();
        let mut slots = Vec::with_capacity(vars.len());
        let mut weight = 1u64;
        for (k, &v) in vars.iter().enumerate().rev() {
            let radix = p.degree_in(v).unwrap() as u64 + 1 + extra;
            slots.push((v, radix, weight, BigInt::from(scales[k])));
            weight = weight.checked_mul(radix).expect("Kronecker degree overflow");
        }
        slots.reverse();
        Kronecker {
            slots,
            total: weight,
            nvars: p.ring().len(),
        }
    }

    /// Integer image of an integer-coefficient polynomial, lowest degree first.
    fn image(&self, p: &Poly) -> PolyZ {
        let mut out: Vec<BigInt> = Vec::new();
        for (m, c) in p.terms() {
            debug_assert!(c.is_integer());
            let mut e = 0u64;
            let mut coeff = c.numer().clone();
            for (v, _, w, s) in &self.slots {
                e += m.0[*v] as u64 * w;
                coeff *= num_traits::pow(s.clone(), m.0[*v] as usize);
            }
            let e = e as usize;
            if out.len() <= e {
                out.resize(e + 1, BigInt::zero());
            }
            out[e] += coeff;
        }
        hensel::trim(out)
    }

    /// Preimage of `T^shift * h`; `None` when an exponent is out of range.
    fn preimage(&self, h: &[BigInt], shift: usize, ring: &crate::Ring) -> Option<Poly> {
        if (h.len() + shift) as u64 > self.total {
            return None;
        }
        let mut terms = Vec::new();
        for (k, c) in h.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = (k + shift) as u64;
            let mut m = vec![0u32; self.nvars];
            let mut scale = BigInt::one();
            for (v, _, w, s) in &self.slots {
                let digit = e / w;
                e %= w;
                m[*v] = digit as u32;
                scale *= num_traits::pow(s.clone(), digit as usize);
            }
            terms.push((Monomial(m), Rational::new(c.clone(), scale)));
        }
        Some(Poly::from_terms(ring, terms))
    }
}

const ODD_PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
    103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199,
];

/// Smallest odd prime not dividing the leading coefficient for which `f`
/// stays squarefree (equivalently: not dividing the discriminant).
fn choose_prime(f: &[BigInt]) -> Option<u64> {
    let lc = f.last().unwrap();
    ODD_PRIMES.iter().copied().find(|&p| {
        if (lc % BigInt::from(p)).is_zero() {
            return false;
        }
        modp::is_squarefree(&hensel::to_modp(f, p), p)
    })
}

/// Split off the largest power of `T`.
fn strip_t(img: PolyZ) -> (usize, PolyZ) {
    let m = img.iter().position(|c| !c.is_zero()).unwrap_or(0);
    (m, img[m..].to_vec())
}

/// Irreducible factors of a squarefree, primitive polynomial without
/// monomial content.
fn irreducible_factors(p: &Poly) -> Vec<Poly> {
    let nvars = p.support_vars().len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for attempt in 0..32u64 {
        let scales: Vec<i64> = if attempt == 0 {
            vec![1; nvars]
        } else {
            (0..nvars)
                .map(|_| {
                    let v: i64 = rng.gen_range(1..=4);
                    if rng.gen_bool(0.5) { v } else { -v }
                })
                .collect()
        };
        let kron = Kronecker::new(p, &scales, attempt / 8);
        let (_, j) = strip_t(kron.image(p));
        if j.len() < 2 {
            return vec![p.normalized()];
        }
        if let Some(prime) = choose_prime(&j) {
            return zassenhaus(p, &kron, &scales, prime);
        }
    }
    panic!("no squarefree Kronecker image found for {p}");
}

fn zassenhaus(p: &Poly, kron: &Kronecker, scales: &[i64], prime: u64) -> Vec<Poly> {
    let ring = p.ring().clone();
    let (_, j) = strip_t(kron.image(p));
    let mut rng = ChaCha8Rng::seed_from_u64(prime);
    let modular = modp::factor_squarefree(&hensel::to_modp(&j, prime), prime, &mut rng);
    if modular.len() == 1 {
        return vec![p.normalized()];
    }

    // Coefficients of any factor g of p obey |g_a| <= 2^(sum deg_i) * |p|_2,
    // and the image scales them by at most prod |c_i|^deg_i.
    let vars = p.support_vars();
    let mut bound = BigInt::one() << vars.iter().map(|&v| p.degree_in(v).unwrap() as usize).sum::<usize>();
    let norm2: BigInt = p.terms().map(|(_, c)| c.numer() * c.numer()).sum();
    bound *= norm2.sqrt() + 1u32;
    for (k, &v) in vars.iter().enumerate() {
        bound *= num_traits::pow(BigInt::from(scales[k].abs()), p.degree_in(v).unwrap() as usize);
    }
    let need = bound * j.last().unwrap().abs() * 2u32;
    let mut modulus = BigInt::from(prime);
    while modulus <= need {
        modulus *= prime;
    }
    let lifts = hensel::lift_factors(&j, &modular, prime, &modulus);

    let mut found = Vec::new();
    let mut pool: Vec<usize> = (0..lifts.len()).collect();
    let mut cur = p.normalized();
    let mut size = 1;
    'outer: while 2 * size <= pool.len() {
        let (m_cur, j_cur) = strip_t(kron.image(&cur));
        let lc = j_cur.last().unwrap().clone();
        let target0 = &lc * &j_cur[0];
        for subset in Combinations::new(pool.len(), size) {
            let picked: Vec<usize> = subset.iter().map(|&i| pool[i]).collect();
            let c0 = picked
                .iter()
                .fold(lc.clone(), |acc, &i| (acc * lifts[i].first().cloned().unwrap_or_default()).mod_floor(&modulus));
            let c0 = hensel::symmetric(&c0, &modulus);
            if c0.is_zero() || !(&target0 % &c0).is_zero() {
                continue;
            }
            let prod = picked
                .iter()
                .fold(vec![lc.clone()], |acc, &i| hensel::mul(&acc, &lifts[i], &modulus));
            let sym: PolyZ = prod.iter().map(|c| hensel::symmetric(c, &modulus)).collect();
            let h = hensel::primitive(&sym);
            for shift in 0..=m_cur {
                let Some(g) = kron.preimage(&h, shift, &ring) else { break };
                let g = g.normalized();
                if g.is_constant() {
                    continue;
                }
                if let Ok(q) = cur.exact_div(&g) {
                    found.push(g);
                    cur = q.normalized();
                    let mut keep = vec![true; pool.len()];
                    for &i in &subset {
                        keep[i] = false;
                    }
                    pool = pool.into_iter().zip(keep).filter(|(_, k)| *k).map(|(i, _)| i).collect();
                    continue 'outer;
                }
            }
        }
        size += 1;
    }
    if !cur.is_constant() {
        found.push(cur);
    }
    found
}

/// Index combinations of `k` out of `n` in lexicographic order.
struct Combinations {
    idx: Vec<usize>,
    n: usize,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Combinations {
        Combinations {
            idx: (0..k).collect(),
            n,
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
