use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::NumberField;
use crate::arith::{format_rat, lcm_of_denominators, parse_rat, Int, Poly, Rat};
use crate::error::{invalid, Error, Result};

/// An element of a number field, stored over the power basis of `theta`.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<Rat>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field.same_as(&other.field)
    }
}

impl Eq for FieldElement {}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Poly::new(self.coords.clone()).display_var("t"))
    }
}

impl FieldElement {
    /// Element with the given power-basis coordinates; shorter vectors are
    /// padded with zeros.
    pub fn new(field: &Arc<NumberField>, mut coords: Vec<Rat>) -> Self {
        let n = field.degree();
        assert!(coords.len() <= n, "too many coordinates for a degree-{n} field");
        coords.resize(n, Rat::zero());
        FieldElement { field: field.clone(), coords }
    }

    pub fn from_ints(field: &Arc<NumberField>, coords: &[i64]) -> Self {
        Self::new(field, coords.iter().map(|&c| Rat::from_integer(Int::from(c))).collect())
    }

    pub fn from_rat(field: &Arc<NumberField>, r: Rat) -> Self {
        Self::new(field, vec![r])
    }

    pub fn from_int(field: &Arc<NumberField>, n: Int) -> Self {
        Self::from_rat(field, Rat::from_integer(n))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rat(field, Rat::one())
    }

    /// Element with the given integral-basis coordinates.
    pub fn from_omega(field: &Arc<NumberField>, v: &[Int]) -> Self {
        Self::new(field, field.from_omega(v))
    }

    /// Parses comma-separated power-basis coordinates, e.g. `"0,1"` for
    /// `theta` or `"1/2,0,3"`.
    pub fn parse(field: &Arc<NumberField>, s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|t| parse_rat(t))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() > field.degree() {
            return invalid(format!(
                "element has {} coordinates but the field has degree {}",
                coords.len(),
                field.degree()
            ));
        }
        Ok(Self::new(field, coords))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rat).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rat> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| self.coords[0].clone())
    }

    pub fn check_same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Integral-basis coordinates (possibly non-integral).
    pub fn omega_rat(&self) -> Vec<Rat> {
        self.field.to_omega(&self.coords)
    }

    /// Integral-basis coordinates when the element is an algebraic integer.
    pub fn omega_coords(&self) -> Option<Vec<Int>> {
        self.field.omega_coords(&self.coords)
    }

    pub fn is_integral(&self) -> bool {
        self.omega_coords().is_some()
    }

    /// Least positive integer `d` with `d * self` integral.
    pub fn denominator(&self) -> Int {
        lcm_of_denominators(self.omega_rat().iter())
    }

    pub fn scale(&self, r: &Rat) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * r).collect() }
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.degree();
        let m = self.field.mult_matrix(&self.coords);
        let mut e = vec![Rat::zero(); n];
        e[0] = Rat::one();
        let x = m.solve_left(&e).expect("non-zero elements of a field are invertible");
        Ok(FieldElement::new(&self.field, x))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, mut k: u64) -> FieldElement {
        let mut acc = FieldElement::one(&self.field);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, k: i64) -> Result<FieldElement> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            Ok(self.inverse()?.pow(k.unsigned_abs()))
        }
    }

    /// Characteristic polynomial of multiplication by `self` over Q.
    pub fn charpoly(&self) -> Poly {
        Poly::new(self.field.mult_matrix(&self.coords).charpoly())
    }

    pub fn norm(&self) -> Rat {
        self.field.mult_matrix(&self.coords).det()
    }

    pub fn trace(&self) -> Rat {
        self.field.mult_matrix(&self.coords).trace()
    }

    /// Minimal polynomial over Q (monic). The characteristic polynomial is a
    /// power of it, so it is the squarefree part.
    pub fn minimal_polynomial(&self) -> Poly {
        self.charpoly().squarefree_part()
    }

    /// Evaluates a polynomial with coefficients in this field at `self`.
    pub fn eval_poly(coeffs: &[FieldElement], x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(x.field());
        for c in coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Evaluates a rational polynomial at `self`.
    pub fn eval_rat_poly(&self, f: &Poly) -> FieldElement {
        let mut acc = FieldElement::zero(&self.field);
        for c in f.coeffs().iter().rev() {
            acc = &(&acc * self) + &FieldElement::from_rat(&self.field, c.clone());
        }
        acc
    }
}

fn same(a: &FieldElement, b: &FieldElement) {
    assert!(a.field.same_as(&b.field), "elements of different fields");
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        same(self, rhs);
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        same(self, rhs);
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        same(self, rhs);
        FieldElement { field: self.field.clone(), coords: self.field.mul_coords(&self.coords, &rhs.coords) }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};
    use crate::field::make_field;

    fn gauss() -> Arc<NumberField> {
        make_field(&Poly::from_ints([1, 0, 1]), None).unwrap()
    }

    #[test]
    fn norms_and_traces() {
        let k = gauss();
        let a = FieldElement::from_ints(&k, &[1, 1]);
        assert_eq!(a.norm(), rat(2));
        let one = FieldElement::one(&k);
        assert_eq!(one.norm(), rat(1));
        assert_eq!(one.trace(), rat(2));
    }

    #[test]
    fn minimal_polynomials() {
        let k = make_field(&Poly::from_ints([-2, 0, 1]), None).unwrap();
        let a = FieldElement::from_ints(&k, &[1, 1]);
        assert_eq!(a.minimal_polynomial(), Poly::from_ints([-1, -2, 1]));
        let r = FieldElement::from_ints(&k, &[3]);
        assert_eq!(r.minimal_polynomial(), Poly::from_ints([-3, 1]));
    }

    #[test]
    fn inverse_and_division() {
        let k = gauss();
        let a = FieldElement::from_ints(&k, &[1, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.coords(), &[rat_frac(1, 2), rat_frac(-1, 2)]);
        assert!((&a * &inv).is_one());
        assert!(matches!(FieldElement::zero(&k).inverse(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn parsing() {
        let k = gauss();
        let t = FieldElement::parse(&k, "0,1").unwrap();
        assert_eq!(&t * &t, FieldElement::from_ints(&k, &[-1]));
        assert!(FieldElement::parse(&k, "1,2,3").is_err());
        assert_eq!(t.to_string(), "t");
    }
}
