use std::sync::Arc;

use num_traits::{One, Zero};

use super::{FieldElement, NumberField};
use crate::arith::{Int, IntMatrix, Rat, RatMatrix};
use crate::error::{invalid, Error, Result};

/// An embedding `K -> L` determined by the image of `K`'s generator.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    source: Arc<NumberField>,
    target: Arc<NumberField>,
    image: FieldElement,
    power_matrix: RatMatrix,
    omega_matrix: IntMatrix,
}

impl SubfieldEmbedding {
    /// Validates that `image` is a root of the source's defining polynomial.
    pub fn new(source: &Arc<NumberField>, target: &Arc<NumberField>, image: FieldElement) -> Result<Self> {
        if !image.field().same_as(target) {
            return Err(Error::FieldMismatch);
        }
        let (k, n) = (source.degree(), target.degree());
        if n % k != 0 {
            return invalid(format!("degree {k} does not divide degree {n}"));
        }
        if !image.eval_rat_poly(source.defining_polynomial()).is_zero() {
            return invalid("image does not satisfy the source polynomial");
        }
        let mut rows = Vec::with_capacity(k);
        let mut cur = FieldElement::one(target);
        for _ in 0..k {
            rows.push(cur.coords().to_vec());
            cur = &cur * &image;
        }
        let power_matrix = RatMatrix::new(rows, n);
        let mut omega_rows = Vec::with_capacity(k);
        for b in source.integral_basis().rows() {
            let img = power_matrix.left_apply(b);
            let v = target
                .omega_coords(&img)
                .ok_or_else(|| Error::InvalidArgument("embedding does not preserve integrality".into()))?;
            omega_rows.push(v);
        }
        Ok(SubfieldEmbedding {
            source: source.clone(),
            target: target.clone(),
            image,
            power_matrix,
            omega_matrix: IntMatrix::new(omega_rows, n),
        })
    }

    pub fn identity(field: &Arc<NumberField>) -> Self {
        Self::new(field, field, super::generator(field)).expect("identity embedding")
    }

    /// The unique embedding of the rationals (given as a degree-one field).
    pub fn from_rationals(rationals: &Arc<NumberField>, target: &Arc<NumberField>) -> Result<Self> {
        if rationals.degree() != 1 {
            return invalid("source is not the rational field");
        }
        let root = -Rat::from_integer(rationals.defining_coeffs()[0].clone());
        Self::new(rationals, target, FieldElement::from_rat(target, root))
    }

    pub fn source(&self) -> &Arc<NumberField> {
        &self.source
    }

    pub fn target(&self) -> &Arc<NumberField> {
        &self.target
    }

    pub fn image(&self) -> &FieldElement {
        &self.image
    }

    /// `[L : K]`.
    pub fn relative_degree(&self) -> usize {
        self.target.degree() / self.source.degree()
    }

    pub fn is_trivial(&self) -> bool {
        self.relative_degree() == 1
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        if !x.field().same_as(&self.source) {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElement::new(&self.target, self.power_matrix.left_apply(x.coords())))
    }

    /// Integral-basis images: row `i` holds the `L`-coordinates of `omega_i`.
    pub fn omega_matrix(&self) -> &IntMatrix {
        &self.omega_matrix
    }

    /// The element of `K` mapping to `y`, if `y` lies in the image.
    pub fn preimage(&self, y: &FieldElement) -> Result<Option<FieldElement>> {
        if !y.field().same_as(&self.target) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.power_matrix.solve_left(y.coords()).map(|x| FieldElement::new(&self.source, x)))
    }

    /// True when `y` lies in the image of the ring of integers of `K`.
    pub fn contains_integer(&self, y: &FieldElement) -> Result<bool> {
        Ok(self.preimage(y)?.is_some_and(|x| x.is_integral()))
    }

    /// Composition `self` after `inner` (`inner: J -> K`, `self: K -> L`).
    pub fn compose(&self, inner: &SubfieldEmbedding) -> Result<SubfieldEmbedding> {
        if !inner.target.same_as(&self.source) {
            return Err(Error::FieldMismatch);
        }
        let img = self.apply(&inner.image)?;
        SubfieldEmbedding::new(&inner.source, &self.target, img)
    }
}

pub(crate) fn unit_vector(n: usize, i: usize) -> Vec<Int> {
    (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;
    use crate::field::{make_field, rationals};

    #[test]
    fn sqrt2_into_biquadratic() {
        let k = make_field(&Poly::from_ints([-2, 0, 1]), None).unwrap();
        let l = make_field(&Poly::from_ints([1, 0, -10, 0, 1]), None).unwrap();
        // sqrt 2 = (theta^3 - 9 theta)/2 in Q(sqrt 2 + sqrt 3)
        let img = FieldElement::new(
            &l,
            vec![Rat::zero(), Rat::new((-9).into(), 2.into()), Rat::zero(), Rat::new(1.into(), 2.into())],
        );
        let emb = SubfieldEmbedding::new(&k, &l, img).unwrap();
        assert_eq!(emb.relative_degree(), 2);
        let t = FieldElement::from_ints(&k, &[0, 1]);
        assert_eq!(emb.preimage(&emb.apply(&t).unwrap()).unwrap().unwrap(), t);
        let bad = SubfieldEmbedding::new(&k, &l, crate::field::generator(&l));
        assert!(bad.is_err());
    }

    #[test]
    fn rationals_embed_everywhere() {
        let q = rationals();
        let l = make_field(&Poly::from_ints([1, 0, 1]), None).unwrap();
        let e = SubfieldEmbedding::from_rationals(&q, &l).unwrap();
        let half = FieldElement::from_rat(&q, Rat::new(1.into(), 2.into()));
        assert_eq!(e.apply(&half).unwrap().coords()[0], Rat::new(1.into(), 2.into()));
        assert!(e.contains_integer(&FieldElement::from_ints(&l, &[3])).unwrap());
        assert!(!e.contains_integer(&FieldElement::from_ints(&l, &[3, 1])).unwrap());
    }
}
