//! Exact integer and rational arithmetic, polynomials over Q and F_p, and
//! integer lattice normal forms.

pub mod fp_poly;
pub mod matrix;
pub mod poly;
pub mod zfactor;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub use fp_poly::{factor_mod_p, FpPoly};
pub use matrix::{hnf, hnf_modular, hnf_with_transform, left_kernel_mod_p, row_times_matrix, IntMatrix, RatMatrix};
pub use poly::Poly;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Parses `"p/q"`, `"p"` or a decimal integer into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Int> {
        t.trim()
            .parse::<Int>()
            .map_err(|_| Error::InvalidArgument(format!("not a rational number: {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rat::new(parse_int(n)?, d))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Exponent of `p` in `n!`, by summing `floor(n / p^k)`.
pub fn legendre_valuation(n: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    let mut total = 0u64;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    Ok(total)
}

/// Exponent of the prime `p` in the non-zero integer `n`.
pub fn int_valuation(n: &Int, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = Int::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Trial division cap for [`factor_int`]; factors beyond it are reported as a
/// resource error rather than searched for.
pub const TRIAL_DIVISION_LIMIT: u64 = 20_000_000;

/// Factors a non-zero integer into primes (ascending, with multiplicity).
pub fn factor_int(n: &Int) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return invalid("cannot factor zero");
    }
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while !n.is_one() {
        if let Some(small) = n.to_u64() {
            if small < d.saturating_mul(d) || is_prime(small) {
                out.push((small, 1));
                break;
            }
        }
        if d > TRIAL_DIVISION_LIMIT {
            return Err(Error::ResourceCap(format!(
                "integer {n} has no prime factor below {TRIAL_DIVISION_LIMIT}"
            )));
        }
        let bd = Int::from(d);
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&bd);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    // merge a large leftover prime that coincides with an earlier factor
    out.sort();
    let mut merged: Vec<(u64, u32)> = Vec::new();
    for (p, e) in out {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(merged)
}

pub fn isqrt(n: &Int) -> Option<Int> {
    if n.sign() == Sign::Minus {
        return None;
    }
    Some(n.sqrt())
}

pub fn is_perfect_square(n: &Int) -> bool {
    match isqrt(n) {
        Some(r) => &r * &r == *n,
        None => false,
    }
}

/// Squarefree test by trial division up to `limit`; the cofactor left over is
/// squarefree unless it is a perfect square, provided it is below `limit^3`.
/// Returns `None` when the answer cannot be certified.
pub fn is_squarefree(n: &Int, limit: u64) -> Option<bool> {
    let mut n = n.abs();
    if n.is_zero() {
        return Some(false);
    }
    let mut d = 2u64;
    while d <= limit {
        let bd = Int::from(d);
        if &bd * &bd > n {
            return Some(true);
        }
        if (&n % &bd).is_zero() {
            n /= &bd;
            if (&n % &bd).is_zero() {
                return Some(false);
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        return Some(true);
    }
    let l = Int::from(limit);
    if n < &l * &l * &l {
        return Some(!is_perfect_square(&n));
    }
    None
}

/// Squarefree part and square cofactor: `n = k^2 * d` with `d` squarefree.
pub fn squarefree_decomposition(n: &Int) -> Result<(Int, Int)> {
    let sign = if n.is_negative() { -Int::one() } else { Int::one() };
    let mut k = Int::one();
    let mut d = sign;
    for (p, e) in factor_int(n)? {
        let bp = Int::from(p);
        k *= num_traits::pow(bp.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            d *= bp;
        }
    }
    Ok((k, d))
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> Int {
    xs.into_iter().fold(Int::one(), |acc, r| acc.lcm(r.denom()))
}

/// Representative of `a mod m` in `[0, m)` for `m > 0`.
pub fn mod_floor(a: &Int, m: &Int) -> Int {
    a.mod_floor(m)
}

/// Extended gcd: returns `(g, x, y)` with `g = x a + y b`, `g >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Decimal rendering of `r` truncated toward zero to `digits` places.
pub fn format_decimal(r: &Rat, digits: u32) -> String {
    let scale = num_traits::pow(Int::from(10), digits as usize);
    let scaled = (r.abs() * Rat::from_integer(scale.clone())).to_integer();
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let sign = if r.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits as usize)
}

/// Nearest integer to `r`, ties broken toward zero.
pub fn round_half_toward_zero(r: &Rat) -> Int {
    let fl = r.floor();
    let frac = r - &fl;
    let half = Rat::new(Int::one(), Int::from(2));
    let base = fl.to_integer();
    if frac > half {
        base + 1
    } else if frac < half {
        base
    } else if r.is_negative() {
        base + 1
    } else {
        base
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(format_decimal(&rat_frac(1, 4), 4), "0.2500");
        assert_eq!(format_decimal(&rat_frac(-2, 3), 3), "-0.666");
        assert_eq!(format_decimal(&rat(7), 0), "7");
    }

    fn factorial_valuation(n: u64, p: u64) -> u64 {
        // multiply out n! and trial-divide
        let mut f = Int::one();
        for k in 1..=n {
            f *= k;
        }
        int_valuation(&f, p) as u64
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_valuation(10, 2).unwrap(), 8);
        assert_eq!(legendre_valuation(9, 3).unwrap(), 4);
        for p in [2, 3, 5, 97] {
            assert_eq!(legendre_valuation(1, p).unwrap(), 0);
        }
        assert!(matches!(legendre_valuation(10, 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn legendre_matches_factorial_small() {
        for n in 1..60 {
            for p in [2, 3, 5, 7, 11] {
                assert_eq!(legendre_valuation(n, p).unwrap(), factorial_valuation(n, p));
            }
        }
    }

    #[test]
    fn primality_and_sieve_agree() {
        let sieve = primes_up_to(2000);
        let mr: Vec<u64> = (0..=2000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, mr);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn factoring_and_squarefree() {
        assert_eq!(factor_int(&int(360)).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_int(&int(-97)).unwrap(), vec![(97, 1)]);
        assert_eq!(is_squarefree(&int(-4), 1000), Some(false));
        assert_eq!(is_squarefree(&int(5 * 7 * 11), 1000), Some(true));
        let (k, d) = squarefree_decomposition(&int(-20)).unwrap();
        assert_eq!((k, d), (int(2), int(-5)));
    }

    #[test]
    fn rounding_ties_toward_zero() {
        assert_eq!(round_half_toward_zero(&rat_frac(5, 2)), int(2));
        assert_eq!(round_half_toward_zero(&rat_frac(-5, 2)), int(-2));
        assert_eq!(round_half_toward_zero(&rat_frac(7, 3)), int(2));
        assert_eq!(round_half_toward_zero(&rat_frac(-7, 3)), int(-2));
        assert_eq!(round_half_toward_zero(&rat_frac(-8, 3)), int(-3));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("-3/6").unwrap(), rat_frac(-1, 2));
        assert_eq!(parse_rat(" 7 ").unwrap(), rat(7));
        assert!(matches!(parse_rat("1/0"), Err(Error::DivisionByZero)));
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat_frac(3, -4)), "-3/4");
    }
}
