//! Factorization of monic squarefree integer polynomials by Hensel lifting
//! and exhaustive recombination. Degrees here stay at desk scale (<= 16), so
//! subset recombination is cheap.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::fp_poly::{factor_mod_p, FpPoly};
use super::{first_primes, Int};

type ZPoly = Vec<Int>;

fn trim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zmul(a: &[Int], b: &[Int]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn zsub(a: &[Int], b: &[Int]) -> ZPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

fn reduce_sym(a: &[Int], m: &Int) -> ZPoly {
    let half: Int = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Exact division by a monic divisor over Z; `None` if it does not divide.
fn zdiv_monic(a: &[Int], d: &[Int]) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if a.len() < d.len() {
        return a.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let mut rem = a.to_vec();
    let mut quo = vec![Int::zero(); a.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
        quo[i] = c;
    }
    rem[..dd].iter().all(|c| c.is_zero()).then(|| trim(quo))
}

fn to_fp(p: u64, a: &[Int]) -> FpPoly {
    FpPoly::from_ints(p, a)
}

/// Lifts `f = g h (mod p)` with `g` monic to `f = G H (mod p^k)`.
fn hensel_two(f: &[Int], g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = g.ext_gcd(h);
    debug_assert!(one.is_one(), "factors must be coprime mod p");
    let bp = Int::from(p);
    let mut gz = g.to_ints();
    let mut hz = h.to_ints();
    let mut pk = bp.clone();
    let modulus = num_traits::pow(bp.clone(), k as usize);
    for _ in 1..k {
        let err = zsub(f, &zmul(&gz, &hz));
        let err: ZPoly = err.iter().map(|c| (c.mod_floor(&modulus)) / &pk).collect();
        let e = to_fp(p, &err);
        let (q, r) = t.mul(&e).div_rem(g);
        let dh = s.mul(&e).add(&q.mul(h));
        let dg = r;
        let lift = |base: &mut ZPoly, delta: &FpPoly| {
            let dz = delta.to_ints();
            if base.len() < dz.len() {
                base.resize(dz.len(), Int::zero());
            }
            for (b, d) in base.iter_mut().zip(dz) {
                *b += d * &pk;
            }
        };
        lift(&mut gz, &dg);
        lift(&mut hz, &dh);
        pk *= &bp;
        gz = gz.iter().map(|c| c.mod_floor(&modulus)).collect();
        hz = hz.iter().map(|c| c.mod_floor(&modulus)).collect();
    }
    (trim(gz), trim(hz))
}

fn hensel_multi(f: &[Int], factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let m = num_traits::pow(Int::from(p), k as usize);
        return vec![f.iter().map(|c| c.mod_floor(&m)).collect()];
    }
    let g = &factors[0];
    let h = factors[1..].iter().fold(FpPoly::one(p), |acc, x| acc.mul(x));
    let (gz, hz) = hensel_two(f, g, &h, p, k);
    let mut out = vec![gz];
    out.extend(hensel_multi(&hz, &factors[1..], p, k));
    out
}

fn norm2_ceil(f: &[Int]) -> Int {
    let s: Int = f.iter().map(|c| c * c).sum();
    s.sqrt() + 1
}

/// Complete factorization over Z of a monic squarefree polynomial (constant
/// coefficient first). Factors are monic and returned in ascending degree.
pub fn factor_monic_squarefree(f: &[Int]) -> Vec<Vec<Int>> {
    let f = trim(f.to_vec());
    let n = f.len().saturating_sub(1);
    assert!(f.last().is_some_and(|c| c.is_one()), "polynomial must be monic");
    if n <= 1 {
        return vec![f];
    }
    // choose the prime with the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in first_primes(60) {
        let fp = to_fp(p, &f);
        if fp.degree() != Some(n) || !fp.gcd(&fp.derivative()).is_one() {
            continue;
        }
        let facs: Vec<FpPoly> = factor_mod_p(&fp)
            .expect("non-zero")
            .into_iter()
            .map(|(g, _)| g)
            .collect();
        if facs.len() == 1 {
            return vec![f];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 8 {
            break;
        }
    }
    let (p, facs) = best.expect("squarefree polynomial has a good prime");
    // coefficient bound for any factor: 2^n * ||f||_2
    let bound = norm2_ceil(&f) << n;
    let bp = Int::from(p);
    let mut k = 1u32;
    let mut pk = bp.clone();
    while pk <= &bound * 2 {
        pk *= &bp;
        k += 1;
    }
    let lifted = hensel_multi(&f, &facs, p, k);
    recombine(f, lifted, &pk)
}

fn recombine(mut f: ZPoly, mut local: Vec<ZPoly>, m: &Int) -> Vec<ZPoly> {
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= local.len() {
        let mut progress = false;
        for subset in subsets(local.len(), size) {
            let cand = subset
                .iter()
                .fold(vec![Int::one()], |acc, &i| reduce_sym(&zmul(&acc, &local[i]), m));
            if let Some(q) = zdiv_monic(&f, &cand) {
                found.push(cand);
                f = q;
                let mut keep = Vec::new();
                for (i, g) in local.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g);
                    }
                }
                local = keep;
                progress = true;
                break;
            }
        }
        if !progress {
            size += 1;
        }
    }
    found.push(f);
    found.sort_by_key(|g| g.len());
    found
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// True when the monic polynomial has a non-trivial factorization over Z.
pub fn is_reducible_monic(f: &[Int]) -> bool {
    factor_monic_squarefree(f).len() > 1
}
