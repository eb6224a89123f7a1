//! Integer and rational matrices. Row vectors throughout: a lattice is the
//! Z-span of the rows of its basis matrix.
//!
//! Hermite normal form convention: upper triangular, positive pivots, every
//! entry above a pivot reduced into `[0, pivot)`, zero rows last. Ideal
//! equality is tested by comparing these forms entry for entry.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ext_gcd, Int, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<Int>>,
    ncols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<Int>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        IntMatrix { rows, ncols }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        IntMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
            ncols,
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        IntMatrix { rows, ncols: n }
    }

    pub fn zero(nrows: usize, ncols: usize) -> Self {
        IntMatrix { rows: vec![vec![Int::zero(); ncols]; nrows], ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.rows[i][j]
    }

    pub fn into_rows(self) -> Vec<Vec<Int>> {
        self.rows
    }

    /// Non-zero rows only.
    pub fn nonzero_rows(&self) -> Vec<Vec<Int>> {
        self.rows
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect()
    }

    /// Product of the diagonal of a square matrix.
    pub fn diagonal_product(&self) -> Int {
        (0..self.ncols.min(self.rows.len())).fold(Int::one(), |acc, i| acc * &self.rows[i][i])
    }

    pub fn is_hnf(&self) -> bool {
        let mut col = 0usize;
        let mut seen_zero_row = false;
        for (i, r) in self.rows.iter().enumerate() {
            let lead = r.iter().position(|x| !x.is_zero());
            match lead {
                None => seen_zero_row = true,
                Some(c) => {
                    if seen_zero_row || c < col || r[c].is_negative() {
                        return false;
                    }
                    for above in &self.rows[..i] {
                        if above[c].is_negative() || above[c] >= r[c] {
                            return false;
                        }
                    }
                    col = c + 1;
                }
            }
        }
        true
    }

    /// Solves `x * self = v` over Z for a matrix in Hermite normal form by
    /// back-substitution. Returns `None` when `v` is not in the row lattice.
    pub fn solve_hnf(&self, v: &[Int]) -> Option<Vec<Int>> {
        let mut rest = v.to_vec();
        let mut x = vec![Int::zero(); self.rows.len()];
        for (i, r) in self.rows.iter().enumerate() {
            let Some(c) = r.iter().position(|e| !e.is_zero()) else {
                break;
            };
            if rest[..c].iter().any(|e| !e.is_zero()) {
                return None;
            }
            let (q, rem) = rest[c].div_rem(&r[c]);
            if !rem.is_zero() {
                return None;
            }
            for (j, e) in r.iter().enumerate().skip(c) {
                rest[j] -= &q * e;
            }
            x[i] = q;
        }
        rest.iter().all(|e| e.is_zero()).then_some(x)
    }

    pub fn contains_row(&self, v: &[Int]) -> bool {
        self.solve_hnf(v).is_some()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|r| row_times_matrix(r, other))
            .collect();
        IntMatrix::new(rows, other.ncols)
    }
}

/// `v * m` for a row vector `v`.
pub fn row_times_matrix(v: &[Int], m: &IntMatrix) -> Vec<Int> {
    let mut out = vec![Int::zero(); m.ncols];
    for (a, row) in v.iter().zip(m.rows.iter()) {
        if a.is_zero() {
            continue;
        }
        for (o, b) in out.iter_mut().zip(row) {
            *o += a * b;
        }
    }
    out
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn bareiss_det(mut m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Int::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Combines rows `a` and `b` on column `c` by a unimodular 2x2 transform so
/// that `a[c]` becomes `gcd(a[c], b[c]) >= 0` and `b[c]` becomes zero.
fn gcd_combine(a: &mut [Int], b: &mut [Int], c: usize) {
    if b[c].is_zero() {
        return;
    }
    let (g, x, y) = ext_gcd(&a[c], &b[c]);
    let ua = &a[c] / &g;
    let ub = &b[c] / &g;
    for j in 0..a.len() {
        let na = &x * &a[j] + &y * &b[j];
        let nb = &ua * &b[j] - &ub * &a[j];
        a[j] = na;
        b[j] = nb;
    }
}

/// Hermite normal form of the row lattice of `m`, keeping the shape (zero
/// rows at the bottom). The first `pivot_cols` columns drive the echelon
/// structure; any extra columns ride along (used for transform tracking).
fn hnf_rows(mut rows: Vec<Vec<Int>>, pivot_cols: usize) -> Vec<Vec<Int>> {
    let nrows = rows.len();
    let mut r = 0usize;
    let mut pivots = Vec::new();
    for c in 0..pivot_cols {
        if r == nrows {
            break;
        }
        let Some(first) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, first);
        for i in r + 1..nrows {
            if !rows[i][c].is_zero() {
                let (head, tail) = rows.split_at_mut(i);
                gcd_combine(&mut head[r], &mut tail[0], c);
            }
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    reduce_above(&mut rows, &pivots);
    rows
}

fn reduce_above(rows: &mut [Vec<Int>], pivots: &[(usize, usize)]) {
    for &(pr, pc) in pivots {
        let pivot_row = rows[pr].clone();
        let p = pivot_row[pc].clone();
        for row in rows.iter_mut().take(pr) {
            let q = row[pc].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &q * y;
            }
        }
    }
}

/// Hermite normal form (see module docs for the convention).
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    IntMatrix::new(hnf_rows(m.rows.clone(), m.ncols), m.ncols)
}

/// Hermite normal form of `span(rows) + d Z^n`, computed with all entries
/// reduced modulo `d`. Returns the square `n x n` basis.
pub fn hnf_modular(gens: &[Vec<Int>], n: usize, d: &Int) -> IntMatrix {
    assert!(d.is_positive(), "modulus must be positive");
    let mut work: Vec<Vec<Int>> = gens
        .iter()
        .map(|g| g.iter().map(|x| x.mod_floor(d)).collect())
        .collect();
    let mut out: Vec<Vec<Int>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut pivot = vec![Int::zero(); n];
        pivot[c] = d.clone();
        for row in work.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            gcd_combine(&mut pivot, row, c);
            for x in pivot.iter_mut().skip(c + 1) {
                *x = x.mod_floor(d);
            }
            for x in row.iter_mut().skip(c + 1) {
                *x = x.mod_floor(d);
            }
        }
        work.retain(|r| r.iter().any(|x| !x.is_zero()));
        out.push(pivot);
    }
    let pivots: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    reduce_above(&mut out, &pivots);
    IntMatrix::new(out, n)
}

/// Hermite normal form together with a transform: returns `(h, u)` where
/// `h` holds the non-zero HNF rows and `u * m = h`.
pub fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let nrows = m.nrows();
    let n = m.ncols;
    let aug: Vec<Vec<Int>> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..nrows).map(|j| if i == j { Int::one() } else { Int::zero() }));
            v
        })
        .collect();
    let reduced = hnf_rows(aug, n);
    let mut h = Vec::new();
    let mut u = Vec::new();
    for row in reduced {
        if row[..n].iter().all(|x| x.is_zero()) {
            continue;
        }
        h.push(row[..n].to_vec());
        u.push(row[n..].to_vec());
    }
    (IntMatrix::new(h, n), IntMatrix::new(u, nrows))
}

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: Vec<Vec<Rat>>,
    ncols: usize,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<Rat>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        RatMatrix { rows, ncols }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        RatMatrix { rows, ncols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.ncols, other.nrows());
        let rows = self.rows.iter().map(|r| other.left_apply(r)).collect();
        RatMatrix::new(rows, other.ncols)
    }

    /// `v * self`.
    pub fn left_apply(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.ncols];
        for (a, row) in v.iter().zip(self.rows.iter()) {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(row) {
                *o += a * b;
            }
        }
        out
    }

    pub fn trace(&self) -> Rat {
        (0..self.ncols).fold(Rat::zero(), |acc, i| acc + &self.rows[i][i])
    }

    pub fn det(&self) -> Rat {
        let n = self.rows.len();
        assert_eq!(n, self.ncols);
        let mut m = self.rows.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let piv = m[c][c].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] / &piv;
                for j in c..n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.rows.len();
        assert_eq!(n, self.ncols);
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut v = r.clone();
                v.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                v
            })
            .collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !m[i][c].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(p, c);
            let inv = m[c][c].recip();
            for x in m[c].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i == c || m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
        Ok(RatMatrix::new(m.into_iter().map(|r| r[n..].to_vec()).collect(), n))
    }

    /// Solves `x * self = v` (any solution), or `None` when `v` is outside
    /// the row space.
    pub fn solve_left(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        // Transpose and row-reduce the augmented system A^T x^T = v^T.
        let m = self.rows.len();
        let n = self.ncols;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                let mut r: Vec<Rat> = (0..m).map(|i| self.rows[i][j].clone()).collect();
                r.push(v[j].clone());
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i == r || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..=m {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        if a[r..].iter().any(|row| !row[m].is_zero()) {
            return None;
        }
        let mut x = vec![Rat::zero(); m];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = a[i][m].clone();
        }
        Some(x)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        let nrows = m.len();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, r);
            for i in r + 1..nrows {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] / &m[r][c];
                for j in c..self.ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
            r += 1;
        }
        r
    }

    /// Characteristic polynomial `det(x I - M)` by Faddeev-LeVerrier,
    /// coefficients constant first.
    pub fn charpoly(&self) -> Vec<Rat> {
        let n = self.rows.len();
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut mk = RatMatrix::identity(n);
        let mut am;
        for k in 1..=n {
            am = self.mul(&mk);
            let c = -am.trace() / Rat::from_integer(Int::from(k));
            coeffs[n - k] = c.clone();
            mk = am;
            for i in 0..n {
                mk.rows[i][i] += &c;
            }
        }
        coeffs
    }
}

/// Left null space of an `m x k` matrix over F_p (entries already reduced),
/// returned as a basis of row vectors of length `m` in reduced form.
pub fn left_kernel_mod_p(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let m = rows.len();
    let k = rows.first().map_or(0, |r| r.len());
    // Columns of the transpose system: solve x * A = 0, i.e. A^T x = 0.
    let mut a: Vec<Vec<u64>> = (0..k).map(|j| (0..m).map(|i| rows[i][j] % p).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..m {
        let Some(piv) = (r..k).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(piv, r);
        let inv = super::pow_mod(a[r][c], p - 2, p);
        for x in a[r].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        for i in 0..k {
            if i == r || a[i][c] == 0 {
                continue;
            }
            let f = a[i][c];
            for j in 0..m {
                let t = (f as u128 * a[r][j] as u128 % p as u128) as u64;
                a[i][j] = (a[i][j] + p - t) % p;
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..m).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; m];
            v[fc] = 1;
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - a[i][fc] % p) % p;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf(&IntMatrix::identity(3)), IntMatrix::identity(3));
        let m = IntMatrix::from_i64(&[&[2, 0], &[1, 1]]);
        assert_eq!(hnf(&m), IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
        assert_eq!(hnf(&IntMatrix::zero(2, 2)), IntMatrix::zero(2, 2));
        let m = IntMatrix::from_i64(&[&[4, 6, 2], &[2, 3, 7], &[0, 0, 4]]);
        let h = hnf(&m);
        assert!(h.is_hnf());
    }

    #[test]
    fn modular_hnf_matches_plain() {
        let gens = vec![vec![int(6), int(4)], vec![int(3), int(9)]];
        let d = int(42);
        let mut all = gens.clone();
        all.push(vec![d.clone(), int(0)]);
        all.push(vec![int(0), d.clone()]);
        let plain = hnf(&IntMatrix::new(all, 2));
        let modular = hnf_modular(&gens, 2, &d);
        assert_eq!(IntMatrix::new(plain.nonzero_rows(), 2), modular);
    }

    #[test]
    fn transform_reproduces_hnf() {
        let m = IntMatrix::from_i64(&[&[3, 5, 1], &[6, 1, 0], &[9, 6, 1], &[2, 2, 2]]);
        let (h, u) = hnf_with_transform(&m);
        assert_eq!(u.mul(&m), h);
        assert!(h.is_hnf());
        assert_eq!(IntMatrix::new(hnf(&m).nonzero_rows(), 3), h);
    }

    #[test]
    fn back_substitution_membership() {
        let h = IntMatrix::from_i64(&[&[1, 1], &[0, 2]]);
        assert!(h.contains_row(&[int(3), int(5)]));
        assert!(!h.contains_row(&[int(0), int(1)]));
        assert_eq!(h.solve_hnf(&[int(2), int(4)]).unwrap(), vec![int(2), int(1)]);
    }

    #[test]
    fn rational_linear_algebra() {
        let m = RatMatrix::new(vec![vec![rat(0), rat(-1)], vec![rat(1), rat(0)]], 2);
        assert_eq!(m.det(), rat(1));
        assert_eq!(m.charpoly(), vec![rat(1), rat(0), rat(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv.mul(&m), RatMatrix::identity(2));
        let x = m.solve_left(&[rat(3), rat(4)]).unwrap();
        assert_eq!(m.left_apply(&x), vec![rat(3), rat(4)]);
        assert_eq!(bareiss_det(vec![vec![int(2), int(3)], vec![int(4), int(5)]]), int(-2));
    }

    #[test]
    fn kernel_mod_p() {
        // x * [[1,2],[2,4]] = 0 over F_5 has the kernel spanned by (3, 1).
        let k = left_kernel_mod_p(&[vec![1, 2], vec![2, 4]], 5);
        assert_eq!(k, vec![vec![3, 1]]);
    }
}
