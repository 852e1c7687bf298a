//! Independent oracles, random generators and the derivation corpus shared
//! by the integration and acceptance tests.
//!
//! The oracles deliberately avoid the library's algorithms: resultants come
//! from Sylvester determinants at sample points plus interpolation, and
//! irreducibility from exhaustive small-coefficient trial division.

#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use plinth_core::poly::AutomorphismStep;
use plinth_core::{parse_poly, Derivation, KernelPair, Monomial, Poly, Rational, Ring};
use rand::Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn xyz(s: &str) -> Poly {
    parse_poly(s, &Ring::xyz()).unwrap()
}

/// Random polynomial with at most `terms` terms, total degree at most
/// `deg`, integer coefficients in `[-c, c]`.
pub fn random_poly<R: Rng>(rng: &mut R, ring: &Ring, deg: u32, terms: usize, c: i64) -> Poly {
    let n = ring.len();
    let mut out = Poly::zero(ring);
    for _ in 0..terms {
        let mut e = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=deg) {
            e[rng.gen_range(0..n)] += 1;
        }
        let coeff = rng.gen_range(-c..=c);
        out = &out + &Poly::monomial(ring, Monomial(e), q(coeff));
    }
    out
}

/// Random nonconstant polynomial.
pub fn random_nonconstant<R: Rng>(rng: &mut R, ring: &Ring, deg: u32, terms: usize, c: i64) -> Poly {
    loop {
        let p = random_poly(rng, ring, deg, terms, c);
        if !p.is_constant() {
            return p;
        }
    }
}

// ---------------------------------------------------------------------------
// Dense univariate rational polynomials, lowest degree first.

pub type Uni = Vec<Rational>;

pub fn uni_trim(mut a: Uni) -> Uni {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn uni_rem(a: &Uni, b: &Uni) -> Uni {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let c = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &c * y;
        }
        r = uni_trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn uni_div(a: &Uni, b: &Uni) -> Uni {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    let mut quo = vec![Rational::zero(); a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let c = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &c * y;
        }
        quo[shift] = c;
        r = uni_trim(r);
    }
    uni_trim(quo)
}

pub fn uni_monic(a: &Uni) -> Uni {
    let l = a.last().unwrap().clone();
    a.iter().map(|c| c / &l).collect()
}

pub fn uni_gcd(a: &Uni, b: &Uni) -> Uni {
    let (mut a, mut b) = (uni_trim(a.clone()), uni_trim(b.clone()));
    while !b.is_empty() {
        let r = uni_rem(&a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        uni_monic(&a)
    }
}

/// Monic squarefree part.
pub fn uni_squarefree(a: &Uni) -> Uni {
    let d: Uni = uni_trim(a.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect());
    if d.is_empty() {
        return uni_monic(a);
    }
    uni_monic(&uni_div(a, &uni_gcd(a, &d)))
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        let p = m[col][col].clone();
        acc *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    acc
}

/// Sylvester resultant of two univariate polynomials with formal degrees.
fn sylvester(a: &Uni, da: usize, b: &Uni, db: usize) -> Rational {
    let n = da + db;
    let mut m = vec![vec![Rational::zero(); n]; n];
    let at = |p: &Uni, i: usize| p.get(i).cloned().unwrap_or_else(Rational::zero);
    for r in 0..db {
        for i in 0..=da {
            m[r][r + i] = at(a, da - i);
        }
    }
    for r in 0..da {
        for i in 0..=db {
            m[db + r][r + i] = at(b, db - i);
        }
    }
    det(m)
}

/// Coefficients in `x` (index 1) of `p ∈ Q[u, x]` at `u = u0`.
fn specialize(p: &Poly, u0: &Rational) -> Uni {
    let d = p.degree_in(1).unwrap_or(0) as usize;
    let mut out = vec![Rational::zero(); d + 1];
    for (m, c) in p.terms() {
        out[m.0[1] as usize] += c * num_traits::pow(u0.clone(), m.0[0] as usize);
    }
    out
}

fn interpolate(xs: &[Rational], ys: &[Rational]) -> Uni {
    // Lagrange, accumulated densely
    let n = xs.len();
    let mut out = vec![Rational::zero(); n];
    for i in 0..n {
        let mut basis: Uni = vec![Rational::one()];
        let mut denom = Rational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let s = &ys[i] / denom;
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &s;
        }
    }
    uni_trim(out)
}

/// `Res_x(a, b)` for `a, b ∈ Q[u, x]` as a dense polynomial in `u`.
pub fn resultant_oracle(a: &Poly, b: &Poly) -> Uni {
    let da = a.degree_in(1).unwrap_or(0) as usize;
    let db = b.degree_in(1).unwrap_or(0) as usize;
    let ua = a.degree_in(0).unwrap_or(0) as usize;
    let ub = b.degree_in(0).unwrap_or(0) as usize;
    let bound = da * ub + db * ua;
    let xs: Vec<Rational> = (0..=bound as i64).map(q).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|u0| sylvester(&specialize(a, u0), da, &specialize(b, u0), db))
        .collect();
    interpolate(&xs, &ys)
}

pub fn uni_to_poly(ring: &Ring, var: usize, a: &Uni) -> Poly {
    Poly::from_coeffs(ring, var, a)
}

// ---------------------------------------------------------------------------
// Trial-division irreducibility oracle.

fn integer_at(p: &Poly, pt: &[i64]) -> BigInt {
    let v = p.eval(&pt.iter().map(|&k| q(k)).collect::<Vec<_>>());
    assert!(v.is_integer());
    v.to_integer()
}

fn divides_int(d: &BigInt, n: &BigInt) -> bool {
    if d.is_zero() {
        n.is_zero()
    } else {
        (n % d).is_zero()
    }
}

/// Search for a nonconstant divisor of the integer primitive `p` of total
/// degree at most `max_deg` whose coefficients lie in `[-bound, bound]`.
pub fn small_divisor(p: &Poly, max_deg: u32, bound: i64) -> Option<Poly> {
    let ring = p.ring().clone();
    let vars = p.support_vars();
    let mut monos: Vec<Monomial> = Vec::new();
    fn rec(vars: &[usize], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => out.push(Monomial(cur.clone())),
            Some((&v, rest)) => {
                for e in 0..=left {
                    cur[v] = e;
                    rec(rest, left - e, cur, out);
                }
                cur[v] = 0;
            }
        }
    }
    rec(&vars, max_deg, &mut vec![0; ring.len()], &mut monos);
    let points: Vec<Vec<i64>> = (0..4)
        .map(|k| (0..ring.len()).map(|i| 2 + k * 3 + i as i64 * 5).collect())
        .collect();
    let targets: Vec<BigInt> = points.iter().map(|pt| integer_at(p, pt)).collect();
    let mono_vals: Vec<Vec<BigInt>> = monos
        .iter()
        .map(|m| {
            points
                .iter()
                .map(|pt| integer_at(&Poly::monomial(&ring, m.clone(), q(1)), pt))
                .collect()
        })
        .collect();
    let mut coeffs = vec![-bound; monos.len()];
    loop {
        let nonconstant = monos.iter().zip(&coeffs).any(|(m, c)| *c != 0 && !m.is_one());
        if nonconstant {
            let ok = (0..points.len()).all(|k| {
                let v: BigInt = mono_vals.iter().zip(&coeffs).map(|(mv, c)| &mv[k] * c).sum();
                divides_int(&v, &targets[k])
            });
            if ok {
                let cand = Poly::from_terms(&ring, monos.iter().cloned().zip(coeffs.iter().map(|&c| q(c))));
                if cand.leading_coeff().is_positive() && p.exact_div(&cand).is_ok() {
                    return Some(cand);
                }
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return None;
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Tame automorphisms.

pub fn random_step<R: Rng>(rng: &mut R, linear: bool) -> AutomorphismStep {
    let r = |rng: &mut R| q(rng.gen_range(-3..=3));
    if linear {
        loop {
            let matrix = [[r(rng), r(rng)], [r(rng), r(rng)]];
            let step = AutomorphismStep::Affine {
                matrix,
                shift: [r(rng), r(rng)],
            };
            if step.is_invertible() {
                return step;
            }
        }
    } else {
        let deg = rng.gen_range(1..=3);
        let mut h: Vec<Rational> = (0..=deg).map(|_| r(rng)).collect();
        if h[deg].is_zero() {
            h[deg] = q(1);
        }
        AutomorphismStep::Elementary {
            swapped: rng.gen_bool(0.5),
            h,
        }
    }
}

/// Image of the first variable under a random alternating composition of
/// linear maps and elementary substitutions of the given depth.
pub fn random_tame_image<R: Rng>(rng: &mut R, ring: &Ring, depth: usize) -> Poly {
    let first_linear = rng.gen_bool(0.5);
    let mut p = Poly::var(ring, 0);
    for k in 0..depth {
        let step = random_step(rng, (k % 2 == 0) == first_linear);
        p = p.subst(&step.images(ring)).unwrap();
    }
    p
}

// ---------------------------------------------------------------------------
// Linear changes of x, y, z.

fn invert3(m: &[[Rational; 3]; 3]) -> Option<[[Rational; 3]; 3]> {
    let mut a: Vec<Vec<Rational>> = (0..3)
        .map(|i| {
            let mut row = m[i].to_vec();
            row.extend((0..3).map(|j| if i == j { q(1) } else { q(0) }));
            row
        })
        .collect();
    for col in 0..3 {
        let piv = (col..3).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for c in 0..6 {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..3 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..6 {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    let mut out: [[Rational; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][3 + j].clone();
        }
    }
    Some(out)
}

/// A random invertible linear substitution of `x, y, z` and its inverse.
pub fn random_linear<R: Rng>(rng: &mut R) -> ([Poly; 3], [Poly; 3]) {
    let ring = Ring::xyz();
    loop {
        let m: [[Rational; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| q(rng.gen_range(-2..=2))));
        let Some(inv) = invert3(&m) else { continue };
        let build = |m: &[[Rational; 3]; 3]| -> [Poly; 3] {
            std::array::from_fn(|i| {
                (0..3).fold(Poly::zero(&ring), |acc, j| &acc + &Poly::var(&ring, j).scale(&m[i][j]))
            })
        };
        return (build(&m), build(&inv));
    }
}

/// `φ(D)` together with the transformed kernel pair.
pub fn conjugate(d: &Derivation, kp: &KernelPair, images: &[Poly; 3], inverse: &[Poly; 3]) -> (Derivation, KernelPair) {
    let d2 = d.conjugate(images, inverse).unwrap();
    let kp2 = KernelPair {
        f: kp.f.subst(images).unwrap(),
        g: kp.g.subst(images).unwrap(),
    };
    (d2, kp2)
}

// ---------------------------------------------------------------------------
// Corpus of derivations with hand-derived ranks.

pub struct Case {
    pub name: &'static str,
    pub d: Derivation,
    pub kp: KernelPair,
    pub rank: u8,
    pub generator: Poly,
}

fn case(name: &'static str, a: [&str; 3], kp: [&str; 2], rank: u8, generator: &str) -> Case {
    Case {
        name,
        d: Derivation::new(xyz(a[0]), xyz(a[1]), xyz(a[2])).unwrap(),
        kp: KernelPair { f: xyz(kp[0]), g: xyz(kp[1]) },
        rank,
        generator: xyz(generator),
    }
}

/// Small derivations whose rank and plinth generator follow by hand.
pub fn corpus() -> Vec<Case> {
    vec![
        case("partial_z", ["0", "0", "1"], ["x", "y"], 1, "1"),
        case("partial_y", ["0", "1", "0"], ["x", "z"], 1, "1"),
        // D(x) = y, D(z) = 1: slice z after reducing x by y
        case("y_dx_plus_dz", ["y", "0", "1"], ["y", "x - y*z"], 1, "1"),
        // D(y) = 1, D(z) = y: slice y
        case("dy_plus_y_dz", ["0", "1", "y"], ["x", "2*z - y^2"], 1, "1"),
        case("x_dy_2y_dz", ["0", "x", "2*y"], ["x", "x*z - y^2"], 2, "x"),
        case("x2_dy_2y_dz", ["0", "x^2", "2*y"], ["x", "x^2*z - y^2"], 2, "x^2"),
        // kernel (x, (x+1)z - y^2); the generator is u1 + 1
        case("x1_dy_2y_dz", ["0", "x + 1", "2*y"], ["x", "x*z + z - y^2"], 2, "x + 1"),
        // D(y) = x, D(z) = y: kernel (x, 2xz - y^2)
        case("x_dy_y_dz", ["0", "x", "y"], ["x", "2*x*z - y^2"], 2, "x"),
        // generator x(x - 1): both factors give a decomposition
        case("x2mx_dy", ["0", "x^2 - x", "2*y"], ["x", "x^2*z - x*z - y^2"], 2, "x^2 - x"),
    ]
}

// ---------------------------------------------------------------------------
// Elimination against resultants.

/// Two generators in `Q[u, x]` of total degree at most 3, the first monic in
/// `x`, with a nonzero resultant.
pub fn elimination_instance<R: Rng>(rng: &mut R) -> (Poly, Poly) {
    let ring = Ring::new(&["u", "x"]).unwrap();
    loop {
        let da = rng.gen_range(1..=3u32);
        let mut a = Poly::monomial(&ring, Monomial(vec![0, da]), q(1));
        for _ in 0..3 {
            let j = rng.gen_range(0..da);
            let i = rng.gen_range(0..=3 - j);
            a = &a + &Poly::monomial(&ring, Monomial(vec![i, j]), q(rng.gen_range(-3..=3)));
        }
        let b = random_poly(rng, &ring, 3, 4, 3);
        if b.degree_in(1).unwrap_or(0) == 0 {
            continue;
        }
        if resultant_oracle(&a, &b).is_empty() {
            continue;
        }
        return (a, b);
    }
}

/// Outcome of comparing the elimination ideal with the resultant.
pub struct EliminationCheck {
    /// The resultant was squarefree, so the comparison was exact equality.
    pub exact: bool,
}

/// `⟨a, b⟩ ∩ Q[u]` versus `Res_x(a, b)` by mutual membership: the resultant
/// reduces to zero modulo the basis, and the elimination generator has the
/// same squarefree part as the resultant (equal to it when squarefree).
pub fn check_elimination(a: &Poly, b: &Poly) -> Result<EliminationCheck, String> {
    use plinth_core::{buchberger, normal_form, MonomialOrder};
    let ring = a.ring().clone();
    let gb = buchberger(&[a.clone(), b.clone()], &MonomialOrder::lex(&["u", "x"]), None).map_err(|e| e.to_string())?;
    let elim = gb.elimination_part(&["u"]).map_err(|e| e.to_string())?;
    let res = resultant_oracle(a, b);
    let res_poly = uni_to_poly(&ring, 0, &res);
    if !normal_form(&res_poly, &gb).unwrap().is_zero() {
        return Err(format!("resultant {} not in <{}, {}>", res_poly, a, b));
    }
    if elim.len() != 1 {
        return Err(format!("elimination ideal has {} generators", elim.len()));
    }
    let h = elim[0].univariate_coeffs(0).ok_or("generator not univariate")?;
    let sq_res = uni_squarefree(&res);
    if uni_squarefree(&h) != sq_res {
        return Err(format!("radicals differ: {} vs resultant {}", elim[0], res_poly));
    }
    let exact = sq_res.len() == res.len();
    if exact && uni_monic(&h) != uni_monic(&res) {
        return Err(format!("generator {} differs from squarefree resultant {}", elim[0], res_poly));
    }
    Ok(EliminationCheck { exact })
}

// ---------------------------------------------------------------------------
// Factorization round trip.

/// Product of one to three random factors of total degree at most 3 in
/// `x, y, z`, with the factors used.
pub fn random_product<R: Rng>(rng: &mut R) -> (Poly, Vec<Poly>) {
    let ring = Ring::xyz();
    let k = rng.gen_range(1..=3);
    let factors: Vec<Poly> = (0..k).map(|_| random_nonconstant(rng, &ring, 3, 4, 4)).collect();
    let p = factors.iter().fold(Poly::one(&ring), |acc, f| &acc * f);
    (p, factors)
}

/// Round trip plus the trial-division oracle on every claimed irreducible
/// factor of total degree at most 4. Returns the number of factors checked
/// by the oracle.
pub fn check_factorization(p: &Poly) -> Result<usize, String> {
    let f = plinth_core::factor_multi(p).map_err(|e| e.to_string())?;
    if f.expand(p.ring()) != *p {
        return Err(format!("factorization of {} does not reconstruct", p));
    }
    let mut checked = 0;
    for (g, _) in &f.factors {
        let d = g.total_degree().unwrap();
        if !(2..=4).contains(&d) {
            continue;
        }
        let (max_deg, bound) = if d <= 3 { (1, 4) } else { (2, 1) };
        if let Some(div) = small_divisor(g, max_deg, bound) {
            return Err(format!("claimed irreducible {} has divisor {}", g, div));
        }
        checked += 1;
    }
    Ok(checked)
}

/// `b = μ a + ν` for rationals `μ ≠ 0`, `ν`.
pub fn affinely_related(a: &Poly, b: &Poly) -> bool {
    let a0 = a - &Poly::constant(a.ring(), a.constant_term());
    let b0 = b - &Poly::constant(b.ring(), b.constant_term());
    let Some((m, c)) = a0.leading() else { return false };
    let mu = b0.coeff(m) / c;
    !num_traits::Zero::is_zero(&mu) && a0.scale(&mu) == b0
}
