use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FieldElement, NumberField};
use crate::arith::matrix::hnf_modular;
use crate::arith::{row_times_matrix, Int, IntMatrix, Rat};
use crate::error::{invalid, Error, Result};

/// A fractional ideal `(1/denom) * L` where `L` is an integral ideal given
/// by its Hermite normal form over the integral basis. The representation is
/// canonical (least denominator), so equality is structural.
#[derive(Clone)]
pub struct FractionalIdeal {
    field: Arc<NumberField>,
    hnf: IntMatrix,
    denom: Int,
}

impl PartialEq for FractionalIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.denom == other.denom && self.hnf == other.hnf && self.field.same_as(&other.field)
    }
}

impl Eq for FractionalIdeal {}

impl fmt::Debug for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FractionalIdeal({self})")
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .hnf
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))?;
        if !self.denom.is_one() {
            write!(f, "/{}", self.denom)?;
        }
        Ok(())
    }
}

impl FractionalIdeal {
    fn normalized(field: &Arc<NumberField>, hnf: IntMatrix, denom: Int) -> Self {
        let content = hnf.rows().iter().flatten().fold(Int::zero(), |g, x| g.gcd(x));
        let g = content.gcd(&denom);
        if g.is_one() {
            return FractionalIdeal { field: field.clone(), hnf, denom };
        }
        let rows = hnf.rows().iter().map(|r| r.iter().map(|x| x / &g).collect()).collect();
        FractionalIdeal { field: field.clone(), hnf: IntMatrix::new(rows, field.degree()), denom: denom / g }
    }

    /// Integral ideal spanned by `gens` (integral-basis coordinates) plus
    /// `modulus * O`, where `modulus` must be a non-zero integer in it.
    pub fn from_omega_rows(field: &Arc<NumberField>, gens: &[Vec<Int>], modulus: &Int) -> Self {
        let n = field.degree();
        let mut rows = Vec::with_capacity(gens.len() * n);
        for g in gens {
            let m = field.omega_mult_matrix(g);
            rows.extend(m.into_rows());
        }
        let h = hnf_modular(&rows, n, &modulus.abs());
        FractionalIdeal { field: field.clone(), hnf: h, denom: Int::one() }
    }

    /// Ideal generated by the given elements (not all zero).
    pub fn from_generators(field: &Arc<NumberField>, gens: &[FieldElement]) -> Result<Self> {
        for g in gens {
            if !g.field().same_as(field) {
                return Err(Error::FieldMismatch);
            }
        }
        let gens: Vec<&FieldElement> = gens.iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return invalid("the zero ideal is not a fractional ideal");
        }
        let d = gens.iter().fold(Int::one(), |acc, g| acc.lcm(&g.denominator()));
        let dr = Rat::from_integer(d.clone());
        let ints: Vec<Vec<Int>> = gens
            .iter()
            .map(|g| g.scale(&dr).omega_coords().expect("cleared denominators"))
            .collect();
        let modulus = FieldElement::from_omega(field, &ints[0]).norm().to_integer().abs();
        let integral = Self::from_omega_rows(field, &ints, &modulus);
        Ok(Self::normalized(field, integral.hnf, d))
    }

    pub fn principal(x: &FieldElement) -> Result<Self> {
        Self::from_generators(x.field(), std::slice::from_ref(x))
    }

    pub fn unit(field: &Arc<NumberField>) -> Self {
        FractionalIdeal { field: field.clone(), hnf: IntMatrix::identity(field.degree()), denom: Int::one() }
    }

    /// `n O` for an integer `n != 0`.
    pub fn rational(field: &Arc<NumberField>, n: &Int) -> Self {
        let k = field.degree();
        let rows = (0..k)
            .map(|i| (0..k).map(|j| if i == j { n.abs() } else { Int::zero() }).collect())
            .collect();
        FractionalIdeal { field: field.clone(), hnf: IntMatrix::new(rows, k), denom: Int::one() }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    pub fn denominator(&self) -> &Int {
        &self.denom
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    /// Absolute norm.
    pub fn norm(&self) -> Rat {
        let n = self.field.degree() as u32;
        Rat::new(self.hnf.diagonal_product(), num_traits::pow(self.denom.clone(), n as usize))
    }

    /// Norm of the integral part `L` (an integer lying in `L`).
    fn lattice_norm(&self) -> Int {
        self.hnf.diagonal_product()
    }

    fn check(&self, other: &FractionalIdeal) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &FractionalIdeal) -> Result<FractionalIdeal> {
        self.check(other)?;
        let modulus = self.lattice_norm() * other.lattice_norm();
        Ok(self.mul_with_modulus(other, &modulus))
    }

    /// Product whose integral part is reduced modulo `modulus`, which must be
    /// an integer in the product of the integral parts.
    pub fn mul_with_modulus(&self, other: &FractionalIdeal, modulus: &Int) -> FractionalIdeal {
        let n = self.field.degree();
        let mut rows = Vec::with_capacity(n * n);
        for a in self.hnf.rows() {
            for b in other.hnf.rows() {
                rows.push(self.field.omega_mul(a, b));
            }
        }
        let h = hnf_modular(&rows, n, modulus);
        Self::normalized(&self.field, h, &self.denom * &other.denom)
    }

    pub fn pow(&self, k: u32) -> FractionalIdeal {
        let mut acc = FractionalIdeal::unit(&self.field);
        for _ in 0..k {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// Sum of ideals (the ideal generated by both).
    pub fn add(&self, other: &FractionalIdeal) -> Result<FractionalIdeal> {
        self.check(other)?;
        let d = self.denom.lcm(&other.denom);
        let sa = &d / &self.denom;
        let sb = &d / &other.denom;
        let mut rows: Vec<Vec<Int>> =
            self.hnf.rows().iter().map(|r| r.iter().map(|x| x * &sa).collect()).collect();
        rows.extend(other.hnf.rows().iter().map(|r| r.iter().map(|x| x * &sb).collect::<Vec<_>>()));
        let modulus = (self.lattice_norm() * &sa).gcd(&(other.lattice_norm() * &sb));
        let h = hnf_modular(&rows, self.field.degree(), &modulus);
        Ok(Self::normalized(&self.field, h, d))
    }

    pub fn contains(&self, x: &FieldElement) -> Result<bool> {
        if !x.field().same_as(&self.field) {
            return Err(Error::FieldMismatch);
        }
        if x.is_zero() {
            return Ok(true);
        }
        let Some(v) = x.scale(&Rat::from_integer(self.denom.clone())).omega_coords() else {
            return Ok(false);
        };
        Ok(self.hnf.contains_row(&v))
    }

    /// Membership for an integral element given in integral-basis coordinates.
    pub fn contains_omega(&self, v: &[Int]) -> bool {
        if self.denom.is_one() {
            self.hnf.contains_row(v)
        } else {
            let s: Vec<Int> = v.iter().map(|x| x * &self.denom).collect();
            self.hnf.contains_row(&s)
        }
    }

    /// True when the lattice is closed under multiplication by every
    /// integral-basis element.
    pub fn is_ideal(&self) -> bool {
        let n = self.field.degree();
        for i in 0..n {
            let mut e = vec![Int::zero(); n];
            e[i] = Int::one();
            for r in self.hnf.rows() {
                if !self.hnf.contains_row(&self.field.omega_mul(r, &e)) {
                    return false;
                }
            }
        }
        true
    }

    /// Image under a ring automorphism given by its matrix on
    /// integral-basis row vectors.
    pub fn map_by(&self, m: &IntMatrix) -> FractionalIdeal {
        let rows: Vec<Vec<Int>> = self.hnf.rows().iter().map(|r| row_times_matrix(r, m)).collect();
        let h = hnf_modular(&rows, self.field.degree(), &self.lattice_norm());
        FractionalIdeal { field: self.field.clone(), hnf: h, denom: self.denom.clone() }
    }

    /// HNF basis elements as field elements (integral part only).
    pub fn lattice_elements(&self) -> Vec<FieldElement> {
        self.hnf.rows().iter().map(|r| FieldElement::from_omega(&self.field, r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Poly};
    use crate::field::make_field;

    fn gauss() -> Arc<NumberField> {
        make_field(&Poly::from_ints([1, 0, 1]), None).unwrap()
    }

    #[test]
    fn ramified_square_is_two() {
        let k = gauss();
        let p = FractionalIdeal::from_generators(
            &k,
            &[FieldElement::from_ints(&k, &[2]), FieldElement::from_ints(&k, &[1, 1])],
        )
        .unwrap();
        assert_eq!(p.norm(), Rat::from_integer(int(2)));
        assert_eq!(p.mul(&p).unwrap(), FractionalIdeal::rational(&k, &int(2)));
        assert_eq!(p.mul(&FractionalIdeal::unit(&k)).unwrap(), p);
    }

    #[test]
    fn membership() {
        let k = gauss();
        let two = FractionalIdeal::rational(&k, &int(2));
        assert!(!two.contains(&FieldElement::from_ints(&k, &[1, 1])).unwrap());
        assert!(two.contains(&FieldElement::from_ints(&k, &[2, -4])).unwrap());
        assert!(two.is_ideal());
    }

    #[test]
    fn fractional_inverse_of_two() {
        let k = gauss();
        let half = FieldElement::from_rat(&k, Rat::new(int(1), int(2)));
        let a = FractionalIdeal::principal(&half).unwrap();
        assert_eq!(a.denominator(), &int(2));
        assert_eq!(a.mul(&FractionalIdeal::rational(&k, &int(2))).unwrap(), FractionalIdeal::unit(&k));
    }

    #[test]
    fn sums() {
        let k = gauss();
        let a = FractionalIdeal::rational(&k, &int(4));
        let b = FractionalIdeal::rational(&k, &int(6));
        assert_eq!(a.add(&b).unwrap(), FractionalIdeal::rational(&k, &int(2)));
    }
}
