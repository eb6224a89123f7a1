//! Dense univariate polynomials over Q, constant coefficient first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::matrix::bareiss_det;
use super::{format_rat, Int, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints<I: Into<Int>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Poly::new(coeffs.into_iter().map(|c| Rat::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// `x^k`
    pub fn monomial(k: usize, c: Rat) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn int_coeffs(&self) -> Option<Vec<Int>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading().recip();
        self.scale(&l)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(Int::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * other) + &Poly::constant(c.clone()))
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Rat::zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quo[i] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quo), Poly::new(rem)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("non-zero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Divides by `x - root` style exact divisor, failing when the remainder
    /// is non-zero.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Squarefree part `f / gcd(f, f')`, made monic.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd non-zero").0.monic()
    }

    /// Resultant via the Sylvester determinant (fraction-free over Z after
    /// clearing denominators).
    pub fn resultant(&self, other: &Poly) -> Rat {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return Rat::zero();
        };
        if m == 0 && n == 0 {
            return Rat::one();
        }
        let da = super::lcm_of_denominators(self.coeffs.iter());
        let db = super::lcm_of_denominators(other.coeffs.iter());
        let a: Vec<Int> = self.coeffs.iter().map(|c| (c * &da).to_integer()).collect();
        let b: Vec<Int> = other.coeffs.iter().map(|c| (c * &db).to_integer()).collect();
        let size = m + n;
        let mut syl = vec![vec![Int::zero(); size]; size];
        for i in 0..n {
            for (j, c) in a.iter().rev().enumerate() {
                syl[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in b.iter().rev().enumerate() {
                syl[n + i][i + j] = c.clone();
            }
        }
        let det = bareiss_det(syl);
        let scale = num_traits::pow(Rat::from_integer(da), n) * num_traits::pow(Rat::from_integer(db), m);
        Rat::from_integer(det) / scale
    }

    /// Discriminant of a polynomial of degree `n >= 1`:
    /// `(-1)^(n(n-1)/2) res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Rat {
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return Rat::zero();
        }
        if n == 1 {
            return Rat::one();
        }
        let r = self.resultant(&self.derivative()) / self.leading();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Cyclotomic polynomial `Phi_m`.
    pub fn cyclotomic(m: u64) -> Poly {
        assert!(m >= 1);
        let mut num = Poly::one();
        let mut den = Poly::one();
        for d in 1..=m {
            if m % d != 0 {
                continue;
            }
            let mu = mobius(m / d);
            let xd = &Poly::monomial(d as usize, Rat::one()) - &Poly::one();
            if mu == 1 {
                num = &num * &xd;
            } else if mu == -1 {
                den = &den * &xd;
            }
        }
        num.exact_div(&den).expect("cyclotomic quotient is exact")
    }

    /// Content-free display, e.g. `x^2 - 2*x - 1`.
    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&format_rat(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{mono}", format_rat(&mag)));
            }
        }
        out
    }
}

pub(crate) fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub(crate) fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("x"))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    #[test]
    fn division_and_gcd() {
        let f = Poly::from_ints([-1, 0, 1]); // x^2 - 1
        let g = Poly::from_ints([1, 1]); // x + 1
        let (q, r) = f.div_rem(&g).unwrap();
        assert_eq!(q, Poly::from_ints([-1, 1]));
        assert!(r.is_zero());
        let h = Poly::from_ints([1, 2, 1]);
        assert_eq!(f.gcd(&h), g);
        assert!(f.div_rem(&Poly::zero()).is_err());
        assert_eq!(Poly::zero().degree(), None);
    }

    #[test]
    fn discriminants() {
        assert_eq!(Poly::from_ints([1, 0, 1]).discriminant(), rat(-4));
        assert_eq!(Poly::from_ints([-5, 0, 1]).discriminant(), rat(20));
        assert_eq!(Poly::from_ints([-1, -1, 1]).discriminant(), rat(5));
        // Phi_5 has discriminant 5^3
        assert_eq!(Poly::cyclotomic(5).discriminant(), rat(125));
        // x^3 + x + 1: -4 - 27
        assert_eq!(Poly::from_ints([1, 1, 0, 1]).discriminant(), rat(-31));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(Poly::cyclotomic(1), Poly::from_ints([-1, 1]));
        assert_eq!(Poly::cyclotomic(4), Poly::from_ints([1, 0, 1]));
        assert_eq!(Poly::cyclotomic(12), Poly::from_ints([1, 0, -1, 0, 1]));
        assert_eq!(euler_phi(12), 4);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
    }

    #[test]
    fn composition_and_eval() {
        let f = Poly::from_ints([-2, 0, 1]);
        let shifted = f.compose(&Poly::from_ints([-1, 1])); // (x-1)^2 - 2
        assert_eq!(shifted, Poly::from_ints([-1, -2, 1]));
        assert_eq!(shifted.eval(&rat_frac(1, 2)), rat_frac(-7, 4));
        assert_eq!(shifted.display_var("x"), "x^2 - 2*x - 1");
    }
}
