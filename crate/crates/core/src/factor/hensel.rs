//! Integer univariate polynomials and quadratic Hensel lifting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{self, PolyP};

pub type PolyZ = Vec<BigInt>;

pub fn trim(mut a: PolyZ) -> PolyZ {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn md(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Symmetric residue in `(-m/2, m/2]`.
pub fn symmetric(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

pub fn reduce(a: &[BigInt], m: &BigInt) -> PolyZ {
    trim(a.iter().map(|c| md(c, m)).collect())
}

pub fn to_modp(a: &[BigInt], p: u64) -> PolyP {
    let pb = BigInt::from(p);
    modp::trim(
        a.iter()
            .map(|c| u64::try_from(md(c, &pb)).unwrap())
            .collect(),
    )
}

pub fn from_modp(a: &[u64]) -> PolyZ {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> PolyZ {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    reduce(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect::<Vec<_>>(),
        m,
    )
}

pub fn sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> PolyZ {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    reduce(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect::<Vec<_>>(),
        m,
    )
}

pub fn mul_raw(a: &[BigInt], b: &[BigInt]) -> PolyZ {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> PolyZ {
    reduce(&mul_raw(a, b), m)
}

/// Division by a monic `b` modulo `m`.
pub fn divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (PolyZ, PolyZ) {
    debug_assert!(b.last().is_some_and(|c| c.is_one()));
    if a.len() < b.len() {
        return (Vec::new(), reduce(a, m));
    }
    let mut r: Vec<BigInt> = a.iter().map(|c| md(c, m)).collect();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + b.len() - 1].clone();
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[k + j] = md(&(&r[k + j] - &c * y), m);
            }
        }
        q[k] = c;
    }
    r.truncate(b.len() - 1);
    (trim(q), trim(r))
}

/// Lift `f ≡ g*h (mod p)` with `g`, `h`, `f` monic and coprime mod `p`
/// to a factorization modulo `target` (a power of `p`).
fn lift_pair(f: &[BigInt], g: &PolyP, h: &PolyP, p: u64, target: &BigInt) -> (PolyZ, PolyZ) {
    let (one, s, t) = modp::ext_gcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let (mut g, mut h) = (from_modp(g), from_modp(h));
    let (mut s, mut t) = (from_modp(&s), from_modp(&t));
    let mut m = BigInt::from(p);
    while &m < target {
        let m2 = &m * &m;
        let e = sub(f, &mul(&g, &h, &m2), &m2);
        let (q, r) = divrem_monic(&mul(&s, &e, &m2), &h, &m2);
        let g2 = add(&add(&g, &mul(&t, &e, &m2), &m2), &mul(&q, &g, &m2), &m2);
        let h2 = add(&h, &r, &m2);
        let b = sub(&add(&mul(&s, &g2, &m2), &mul(&t, &h2, &m2), &m2), &[BigInt::one()], &m2);
        let (c, d) = divrem_monic(&mul(&s, &b, &m2), &h2, &m2);
        s = sub(&s, &d, &m2);
        t = sub(&sub(&t, &mul(&t, &b, &m2), &m2), &mul(&c, &g2, &m2), &m2);
        g = g2;
        h = h2;
        m = m2;
    }
    (reduce(&g, target), reduce(&h, target))
}

/// Monic lifts modulo `target` of the monic modular factors of `f`.
///
/// `f` is a squarefree integer polynomial with `p ∤ lc(f)`; the returned
/// lifts satisfy `f ≡ lc(f) * Π lifts (mod target)`.
pub fn lift_factors(f: &[BigInt], factors: &[PolyP], p: u64, target: &BigInt) -> Vec<PolyZ> {
    let lc = f.last().unwrap();
    let lc_inv = lc
        .extended_gcd(target)
        .x
        .mod_floor(target);
    let monic_f = reduce(&f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), target);
    lift_monic(&monic_f, factors, p, target)
}

fn lift_monic(f: &[BigInt], factors: &[PolyP], p: u64, target: &BigInt) -> Vec<PolyZ> {
    if factors.len() == 1 {
        return vec![reduce(f, target)];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[PolyP]| fs.iter().fold(vec![1u64], |acc, g| modp::mul(&acc, g, p));
    let g0 = prod(&factors[..mid]);
    let h0 = prod(&factors[mid..]);
    let (g, h) = lift_pair(f, &g0, &h0, p, target);
    let mut out = lift_monic(&g, &factors[..mid], p, target);
    out.extend(lift_monic(&h, &factors[mid..], p, target));
    out
}

pub fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive(a: &[BigInt]) -> PolyZ {
    let mut c = content(a);
    if c.is_zero() {
        return a.to_vec();
    }
    if a.last().unwrap().is_negative() {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> PolyZ {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn lifts_reconstruct_over_integers() {
        // (x^2 + 3x - 5)(x + 7)(x^2 - 2), factor mod 11 and lift to 11^8
        let f = mul_raw(&mul_raw(&z(&[-5, 3, 1]), &z(&[7, 1])), &z(&[-2, 0, 1]));
        let p = 11;
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
        let fp = to_modp(&f, p);
        assert!(modp::is_squarefree(&fp, p));
        let facs = modp::factor_squarefree(&fp, p, &mut rng);
        let target = num_traits::pow(BigInt::from(p), 8);
        let lifts = lift_factors(&f, &facs, p, &target);
        let prod = lifts.iter().fold(z(&[1]), |acc, g| mul(&acc, g, &target));
        assert_eq!(prod, reduce(&f, &target));
    }
}
