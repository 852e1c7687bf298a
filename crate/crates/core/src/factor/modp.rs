//! Dense univariate polynomials over a small prime field `F_p`.
//!
//! Coefficients are `u64` residues, lowest degree first, with no trailing
//! zeros. `p` stays below 2^31 so products fit in a `u64`.

use rand::Rng;

pub type PolyP = Vec<u64>;

pub fn trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &[u64]) -> isize {
    a.len() as isize - 1
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

#[cfg(test)]
pub fn add(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

pub fn scale(a: &[u64], c: u64, p: u64) -> PolyP {
    trim(a.iter().map(|&x| x * c % p).collect())
}

pub fn monic(a: &[u64], p: u64) -> PolyP {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(a, inv(lc, p), p),
    }
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP) {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lc_inv = inv(*b.last().unwrap(), p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + b.len() - 1] * lc_inv % p;
        q[k] = c;
        if c != 0 {
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * y % p) % p;
            }
        }
    }
    r.truncate(b.len() - 1);
    (trim(q), trim(r))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> PolyP {
    divrem(a, b, p).1
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP, PolyP) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let c = inv(*r0.last().expect("ext_gcd of zeros"), p);
    (scale(&r0, c, p), scale(&s0, c, p), scale(&t0, c, p))
}

pub fn derivative(a: &[u64], p: u64) -> PolyP {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

pub fn is_squarefree(a: &[u64], p: u64) -> bool {
    deg(&gcd(a, &derivative(a, p), p)) == 0
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> PolyP {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> PolyP {
    let mut base = rem(a, m, p);
    let mut acc = rem(&[1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

/// Rows `x^(p*j) mod f` for `j < deg f`, so that the Frobenius map
/// `g ↦ g^p mod f` is a matrix-vector product.
pub struct Frobenius {
    rows: Vec<PolyP>,
    modulus: PolyP,
    p: u64,
}

impl Frobenius {
    pub fn new(f: &[u64], p: u64) -> Frobenius {
        let n = f.len() - 1;
        let xp = powmod(&[0, 1], p, f, p);
        let mut rows = Vec::with_capacity(n);
        let mut cur = rem(&[1], f, p);
        for _ in 0..n {
            rows.push(cur.clone());
            cur = mulmod(&cur, &xp, f, p);
        }
        Frobenius {
            rows,
            modulus: f.to_vec(),
            p,
        }
    }

    /// `g^p mod f` for `deg g < deg f`.
    pub fn apply(&self, g: &[u64]) -> PolyP {
        let g = if g.len() > self.rows.len() {
            rem(g, &self.modulus, self.p)
        } else {
            g.to_vec()
        };
        let mut out = vec![0u64; self.rows.len()];
        for (j, &c) in g.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (k, &r) in self.rows[j].iter().enumerate() {
                out[k] = (out[k] + c * r) % self.p;
            }
        }
        trim(out)
    }
}

/// Distinct-degree factorization of a monic squarefree `f`.
pub fn distinct_degree(f: &[u64], frob: &Frobenius, p: u64) -> Vec<(PolyP, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let mut h = vec![0, 1];
    let mut d = 0;
    while 2 * (d + 1) <= deg(&rest) as usize {
        d += 1;
        h = frob.apply(&h);
        let g = gcd(&rest, &sub(&h, &[0, 1], p), p);
        if deg(&g) > 0 {
            rest = divrem(&rest, &g, p).0;
            out.push((g, d));
        }
    }
    if deg(&rest) > 0 {
        let dd = deg(&rest) as usize;
        out.push((rest, dd));
    }
    out
}

/// Cantor–Zassenhaus splitting of a monic squarefree `f` whose irreducible
/// factors all have degree `d`; `p` odd.
pub fn equal_degree<R: Rng>(f: &[u64], d: usize, frob: &Frobenius, p: u64, rng: &mut R) -> Vec<PolyP> {
    let n = deg(f) as usize;
    if n == d {
        return vec![f.to_vec()];
    }
    loop {
        let a: PolyP = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a) < 1 {
            continue;
        }
        let g = gcd(f, &a, p);
        if deg(&g) > 0 && deg(&g) < n as isize {
            return split_more(f, &g, d, frob, p, rng);
        }
        // a^(1 + p + ... + p^(d-1)) mod f, then raise to (p-1)/2
        let mut term = rem(&a, f, p);
        let mut norm = term.clone();
        for _ in 1..d {
            term = rem(&frob.apply(&term), f, p);
            norm = mulmod(&norm, &term, f, p);
        }
        let b = powmod(&norm, (p - 1) / 2, f, p);
        let g = gcd(f, &sub(&b, &[1], p), p);
        if deg(&g) > 0 && deg(&g) < n as isize {
            return split_more(f, &g, d, frob, p, rng);
        }
    }
}

fn split_more<R: Rng>(f: &[u64], g: &[u64], d: usize, frob: &Frobenius, p: u64, rng: &mut R) -> Vec<PolyP> {
    let h = divrem(f, g, p).0;
    let mut out = equal_degree(g, d, frob, p, rng);
    out.extend(equal_degree(&h, d, frob, p, rng));
    out
}

/// Monic irreducible factors of a squarefree `f` (`p` odd, `f` nonconstant),
/// sorted by degree then coefficients.
pub fn factor_squarefree<R: Rng>(f: &[u64], p: u64, rng: &mut R) -> Vec<PolyP> {
    let f = monic(f, p);
    let frob = Frobenius::new(&f, p);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&f, &frob, p) {
        out.extend(equal_degree(&g, d, &frob, p, rng));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn splits_into_product() {
        let p = 7;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x+1)(x+2)(x^2+1)(x^3 + x + 1) over F_7 (x^2+1 irreducible mod 7)
        let fs: Vec<PolyP> = vec![vec![1, 1], vec![2, 1], vec![1, 0, 1], vec![1, 1, 0, 1]];
        let f = fs.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert!(is_squarefree(&f, p));
        let got = factor_squarefree(&f, p, &mut rng);
        let prod = got.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, f);
        let degs: Vec<isize> = got.iter().map(|g| deg(g)).collect();
        assert_eq!(degs.iter().sum::<isize>(), 7);
        assert!(got.len() >= 3);
    }

    #[test]
    fn ext_gcd_identity() {
        let p = 11;
        let a = vec![3, 0, 1, 4];
        let b = vec![1, 5, 2];
        let (g, s, t) = ext_gcd(&a, &b, p);
        assert_eq!(add(&mul(&s, &a, p), &mul(&t, &b, p), p), g);
    }
}
