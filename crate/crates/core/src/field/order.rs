//! Lattice helpers for building orders: canonical bases and p-enlargement.

use num_traits::Zero;

use crate::arith::{hnf, lcm_of_denominators, Int, IntMatrix, Rat};

/// Canonical basis of the Z-span of `rows` (rational vectors), as HNF rows
/// with the zero rows dropped.
pub(crate) fn lattice_basis(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let Some(n) = rows.first().map(|r| r.len()) else {
        return Vec::new();
    };
    let d = lcm_of_denominators(rows.iter().flatten());
    let dr = Rat::from_integer(d.clone());
    let ints: Vec<Vec<Int>> = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * &dr).to_integer()).collect())
        .collect();
    hnf(&IntMatrix::new(ints, n))
        .nonzero_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| Rat::new(x, d.clone())).collect())
        .collect()
}

/// Lower-triangular canonical basis of a full-rank lattice: row `k` has
/// zeros after column `k` and a positive diagonal entry. For an order this
/// puts `1` first.
pub(crate) fn lower_hnf(rows: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return None;
    }
    let reversed: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().rev().cloned().collect()).collect();
    let h = lattice_basis(&reversed);
    if h.len() != n {
        return None;
    }
    Some(
        (0..n)
            .map(|k| h[n - 1 - k].iter().rev().cloned().collect())
            .collect(),
    )
}

/// Smallest lattice containing `rows` and closed under `mul`.
pub(crate) fn ring_closure<M>(rows: Vec<Vec<Rat>>, mul: &M) -> Vec<Vec<Rat>>
where
    M: Fn(&[Rat], &[Rat]) -> Vec<Rat>,
{
    let mut cur = lattice_basis(&rows);
    loop {
        let mut gens = cur.clone();
        for i in 0..cur.len() {
            for j in i..cur.len() {
                gens.push(mul(&cur[i], &cur[j]));
            }
        }
        let next = lattice_basis(&gens);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Some `(sum v_i r_i)/p` with `v` not divisible by `p` that passes
/// `integral`, searched in lexicographic order of `v`.
pub(crate) fn find_enlargement<I>(rows: &[Vec<Rat>], p: u64, integral: &I) -> Option<Vec<Rat>>
where
    I: Fn(&[Rat]) -> bool,
{
    let r = rows.len();
    let width = rows.first()?.len();
    let pr = Rat::from_integer(Int::from(p));
    let mut v = vec![0u64; r];
    loop {
        // next vector in [0, p)^r, last coordinate fastest
        let mut i = r;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < p {
                break;
            }
            v[i] = 0;
        }
        let mut cand = vec![Rat::zero(); width];
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = Rat::from_integer(Int::from(c));
            for (x, y) in cand.iter_mut().zip(&rows[k]) {
                *x += &c * y;
            }
        }
        for x in cand.iter_mut() {
            *x /= &pr;
        }
        if integral(&cand) {
            return Some(cand);
        }
    }
}

/// Enlarges the order spanned by `rows` until it is maximal at `p`.
pub(crate) fn enlarge_at<M, I>(rows: Vec<Vec<Rat>>, p: u64, mul: &M, integral: &I) -> Vec<Vec<Rat>>
where
    M: Fn(&[Rat], &[Rat]) -> Vec<Rat>,
    I: Fn(&[Rat]) -> bool,
{
    let mut cur = ring_closure(rows, mul);
    while let Some(extra) = find_enlargement(&cur, p, integral) {
        let mut gens = cur.clone();
        gens.push(extra);
        cur = ring_closure(gens, mul);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn lower_form_puts_one_first() {
        // basis {(1+t)/2, 1} of the golden ratio order
        let rows = vec![vec![r(1, 2), r(1, 2)], vec![r(1, 1), r(0, 1)]];
        let l = lower_hnf(&rows).unwrap();
        assert_eq!(l[0], vec![Rat::one(), Rat::zero()]);
        assert_eq!(l[1], vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn singular_rejected() {
        let rows = vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(4, 1)]];
        assert!(lower_hnf(&rows).is_none());
    }
}
