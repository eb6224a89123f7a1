//! Polynomials over a prime field F_p and their factorization.
//!
//! Squarefree parts of degree at most three are split by exhaustive root
//! search; larger ones go through distinct-degree then equal-degree
//! (Cantor-Zassenhaus) splitting driven by a seedable generator. Factor lists
//! are sorted, so the output never depends on the random choices.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_prime, pow_mod, Int, Poly};
use crate::error::{invalid, Result};

/// Default seed for the randomized splitting step.
pub const DEFAULT_SEED: u64 = 0x5eed_d3d3_c1a5_0001;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    /// Reduces an integer polynomial modulo `p`.
    pub fn from_ints(p: u64, coeffs: &[Int]) -> Self {
        let bp = Int::from(p);
        FpPoly::new(
            p,
            coeffs
                .iter()
                .map(|c| {
                    let r = num_integer::Integer::mod_floor(c, &bp);
                    u64::try_from(&r).expect("reduced below p")
                })
                .collect(),
        )
    }

    /// Reduces a rational polynomial whose denominators are prime to `p`.
    pub fn from_poly(p: u64, f: &Poly) -> Option<Self> {
        let bp = Int::from(p);
        let mut out = Vec::with_capacity(f.coeffs().len());
        for c in f.coeffs() {
            let d = num_integer::Integer::mod_floor(c.denom(), &bp);
            if d.is_zero() {
                return None;
            }
            let n = num_integer::Integer::mod_floor(c.numer(), &bp);
            let n = u64::try_from(&n).ok()?;
            let d = u64::try_from(&d).ok()?;
            out.push(mulm(n, inv(d, p), p));
        }
        Some(FpPoly::new(p, out))
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn to_ints(&self) -> Vec<Int> {
        self.coeffs.iter().map(|&c| Int::from(c)).collect()
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = inv(self.leading(), self.p);
        self.scale(l)
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        FpPoly::new(self.p, self.coeffs.iter().map(|&a| mulm(a, c, self.p)).collect())
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        FpPoly::new(
            p,
            (0..n)
                .map(|i| (self.coeffs.get(i).unwrap_or(&0) + other.coeffs.get(i).unwrap_or(&0)) % p)
                .collect(),
        )
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        FpPoly::new(
            p,
            (0..n)
                .map(|i| (self.coeffs.get(i).unwrap_or(&0) + p - other.coeffs.get(i).unwrap_or(&0)) % p)
                .collect(),
        )
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % pp;
            }
        }
        FpPoly::new(p, out.into_iter().map(|c| c as u64).collect())
    }

    pub fn div_rem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let p = self.p;
        let li = inv(d.leading(), p);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let mut quo = vec![0u64; rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = mulm(rem[i + dd], li, p);
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - mulm(c, dc, p)) % p;
            }
            quo[i] = c;
        }
        rem.truncate(dd);
        (FpPoly::new(p, quo), FpPoly::new(p, rem))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `g = s a + t b` monic.
    pub fn ext_gcd(&self, other: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let ns = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, ns);
            let nt = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, nt);
        }
        let l = inv(r0.leading(), p);
        (r0.scale(l), s0.scale(l), t0.scale(l))
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulm(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mulm(acc, x, self.p) + c) % self.p)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::one(self.p);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    fn pth_root(&self) -> FpPoly {
        // Over F_p the Frobenius is the identity on coefficients.
        let p = self.p as usize;
        FpPoly::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    fn cmp_canonical(&self, other: &FpPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = Poly::from_ints(self.coeffs.iter().map(|&c| Int::from(c)));
        write!(f, "{} (mod {})", q.display_var("x"), self.p)
    }
}

/// Factors `f` over F_p into monic irreducibles with multiplicities, sorted
/// by degree and then coefficient list. Uses [`DEFAULT_SEED`].
pub fn factor_mod_p(f: &FpPoly) -> Result<Vec<(FpPoly, u32)>> {
    factor_mod_p_seeded(f, DEFAULT_SEED)
}

pub fn factor_mod_p_seeded(f: &FpPoly, seed: u64) -> Result<Vec<(FpPoly, u32)>> {
    if f.is_zero() {
        return invalid("cannot factor the zero polynomial");
    }
    if !is_prime(f.p) {
        return invalid(format!("{} is not prime", f.p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(FpPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic()) {
        for factor in split_squarefree(&part, &mut rng) {
            out.push((factor, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
    // the same irreducible can surface from different squarefree layers only
    // if it divides both, which Yun's algorithm rules out
    Ok(out)
}

/// Yun-style squarefree decomposition of a monic polynomial.
fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.deg() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if c.deg() > 0 {
        for (g, m) in squarefree_decomposition(&c.monic().pth_root()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn split_squarefree(f: &FpPoly, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    match f.deg() {
        0 => Vec::new(),
        1 => vec![f.monic()],
        2 | 3 => split_small(f),
        _ => {
            let mut out = Vec::new();
            for (g, d) in distinct_degree(f) {
                if g.deg() == d {
                    out.push(g);
                } else {
                    out.extend(equal_degree(&g, d, rng));
                }
            }
            out
        }
    }
}

/// Exhaustive root search; a degree-2 or 3 polynomial without roots is
/// irreducible.
fn split_small(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let mut rest = f.monic();
    let mut out = Vec::new();
    let mut x = 0u64;
    while rest.deg() > 1 && x < p {
        if rest.eval(x) == 0 {
            let lin = FpPoly::new(p, vec![(p - x) % p, 1]);
            rest = rest.div_rem(&lin).0;
            out.push(lin);
        } else {
            x += 1;
        }
    }
    if rest.deg() >= 1 {
        out.push(rest.monic());
    }
    out
}

/// Returns pairs `(product of all irreducible factors of degree d, d)`.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let bp = BigUint::from(p);
    let mut d = 1;
    while 2 * d <= rest.deg() {
        h = h.pow_mod(&bp, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.deg();
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    loop {
        let coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let a = FpPoly::new(p, coeffs);
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(md - 1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (num_traits::pow(BigUint::from(p), d) - BigUint::one()) / BigUint::from(2u32);
            a.pow_mod(&e, f).sub(&FpPoly::one(p))
        };
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_rem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h.monic(), d, rng));
            return out;
        }
    }
}

/// Multiplies out a factor list (used by property tests and sanity checks).
pub fn expand_factors(p: u64, factors: &[(FpPoly, u32)]) -> FpPoly {
    factors.iter().fold(FpPoly::one(p), |acc, (g, m)| {
        (0..*m).fold(acc, |a, _| a.mul(g))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::new(p, c.to_vec())
    }

    #[test]
    fn examples() {
        let f = factor_mod_p(&fp(5, &[1, 0, 1])).unwrap();
        assert_eq!(f, vec![(fp(5, &[2, 1]), 1), (fp(5, &[3, 1]), 1)]);
        let f = factor_mod_p(&fp(3, &[1, 0, 1])).unwrap();
        assert_eq!(f, vec![(fp(3, &[1, 0, 1]), 1)]);
        let f = factor_mod_p(&fp(2, &[0, 0, 1])).unwrap();
        assert_eq!(f, vec![(fp(2, &[0, 1]), 2)]);
        assert!(factor_mod_p(&FpPoly::zero(7)).is_err());
    }

    #[test]
    fn quartic_reducible_everywhere() {
        // x^4 - 10x^2 + 1 splits into factors of degree <= 2 modulo every prime
        for p in [3u64, 5, 7, 11, 13, 97] {
            let f = FpPoly::from_ints(p, &[1, 0, -10, 0, 1].map(Int::from));
            let fac = factor_mod_p(&f).unwrap();
            assert!(fac.iter().all(|(g, _)| g.deg() <= 2), "p = {p}");
            assert_eq!(expand_factors(p, &fac), f);
        }
    }

    #[test]
    fn inseparable_input() {
        // (x^2 + 1)^3 over F_3 has zero derivative after expansion
        let base = fp(3, &[1, 0, 1]);
        let f = base.mul(&base).mul(&base);
        assert_eq!(factor_mod_p(&f).unwrap(), vec![(base, 3)]);
    }

    #[test]
    fn seeds_do_not_change_output() {
        let f = FpPoly::from_ints(7, &[3, 1, 4, 1, 5, 2, 6, 1].map(Int::from));
        let a = factor_mod_p_seeded(&f, 1).unwrap();
        let b = factor_mod_p_seeded(&f, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(expand_factors(7, &a), f.monic());
    }
}
