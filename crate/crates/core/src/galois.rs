//! Galois groups of supported fields, decomposition groups and fields,
//! Frobenius elements and prime censuses.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{
    factor_int, format_decimal, int_valuation, primes_up_to, row_times_matrix, Int, IntMatrix, Rat, RatMatrix,
};
use crate::error::{invalid, Error, Result};
use crate::field::order::enlarge_at;
use crate::field::{generator, make_field, rationals, FieldElement, Family, NumberField, SubfieldEmbedding};
use crate::par::{map_ordered, Execution};
use crate::splitting::{contract, factor_prime, PrimeIdeal};

/// Number of trial elements tried when searching for a primitive element of
/// a fixed field.
pub const FIXED_FIELD_TRIALS: usize = 32;

/// A field automorphism, determined by the image of `theta`.
#[derive(Clone, Debug)]
pub struct Automorphism {
    image: FieldElement,
    power_matrix: RatMatrix,
    omega_matrix: IntMatrix,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
    }
}

impl Eq for Automorphism {}

impl Automorphism {
    /// Checks that `image` is a root of the defining polynomial and that the
    /// induced map preserves the ring of integers.
    pub fn new(field: &Arc<NumberField>, image: FieldElement) -> Result<Self> {
        if !image.field().same_as(field) {
            return Err(Error::FieldMismatch);
        }
        if !image.eval_rat_poly(field.defining_polynomial()).is_zero() {
            return Err(Error::InvalidAutomorphism(format!("{image} is not a root of the defining polynomial")));
        }
        let n = field.degree();
        let mut rows = Vec::with_capacity(n);
        let mut cur = FieldElement::one(field);
        for _ in 0..n {
            rows.push(cur.coords().to_vec());
            cur = &cur * &image;
        }
        let power_matrix = RatMatrix::new(rows, n);
        if power_matrix.rank() != n {
            return Err(Error::InvalidAutomorphism(format!("{image} does not generate the field")));
        }
        let mut omega_rows = Vec::with_capacity(n);
        for b in field.integral_basis().rows() {
            let img = power_matrix.left_apply(b);
            let v = field
                .omega_coords(&img)
                .ok_or_else(|| Error::InvalidAutomorphism("map does not preserve integrality".into()))?;
            omega_rows.push(v);
        }
        Ok(Automorphism { image, power_matrix, omega_matrix: IntMatrix::new(omega_rows, n) })
    }

    pub fn identity(field: &Arc<NumberField>) -> Self {
        Self::new(field, generator(field)).expect("identity is an automorphism")
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.image.field()
    }

    /// The image of `theta`.
    pub fn image(&self) -> &FieldElement {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image == generator(self.field())
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        FieldElement::new(self.field(), self.power_matrix.left_apply(x.coords()))
    }

    /// Action on integral-basis coordinates.
    pub fn apply_omega(&self, v: &[Int]) -> Vec<Int> {
        row_times_matrix(v, &self.omega_matrix)
    }

    /// Row `i` holds the integral-basis coordinates of `sigma(omega_i)`.
    pub fn omega_matrix(&self) -> &IntMatrix {
        &self.omega_matrix
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Automorphism) -> Automorphism {
        Automorphism::new(self.field(), self.apply(&inner.image)).expect("composition of automorphisms")
    }

    pub fn apply_to_prime(&self, q: &PrimeIdeal) -> PrimeIdeal {
        q.map_by(&self.omega_matrix, self.apply(q.generator()))
    }
}

/// `Gal(L / K)` for a base field `K` embedded in `L`. The identity is
/// always element 0.
#[derive(Clone, Debug)]
pub struct GaloisGroup {
    field: Arc<NumberField>,
    base: SubfieldEmbedding,
    elements: Vec<Automorphism>,
    table: Vec<Vec<usize>>,
}

fn family_images(field: &Arc<NumberField>) -> Result<Vec<FieldElement>> {
    let theta = generator(field);
    let coeffs = field.defining_coeffs();
    Ok(match field.family() {
        Family::Rational => vec![theta],
        Family::Quadratic { .. } => {
            let b = Rat::from_integer(coeffs[1].clone());
            let conj = FieldElement::new(field, vec![-b, -Rat::one()]);
            vec![theta, conj]
        }
        Family::Cyclotomic { m } => (1..*m)
            .filter(|a| num_integer::gcd(*a, *m) == 1)
            .map(|a| theta.pow(a))
            .collect(),
        Family::Biquadratic { s } => {
            let s_over = theta.inverse()?.scale(&Rat::from_integer(s.clone()));
            vec![theta.clone(), -&theta, s_over.clone(), -&s_over]
        }
        Family::Other => match field.automorphism_images() {
            Some(list) => list.iter().map(|c| FieldElement::new(field, c.clone())).collect(),
            None => return Err(Error::AutomorphismsRequired),
        },
    })
}

impl GaloisGroup {
    /// The automorphism group of `L` over the image of `base`. Images of
    /// `theta` come from the field's family, from the field spec, or from
    /// `table` (which takes precedence).
    pub fn new(field: &Arc<NumberField>, base: &SubfieldEmbedding, table: Option<&[FieldElement]>) -> Result<Self> {
        if !base.target().same_as(field) {
            return Err(Error::FieldMismatch);
        }
        let images = match table {
            Some(t) => t.to_vec(),
            None => family_images(field)?,
        };
        let mut elements = vec![Automorphism::identity(field)];
        for img in images {
            let a = Automorphism::new(field, img)?;
            if elements.contains(&a) {
                continue;
            }
            elements.push(a);
        }
        let base_gen = base.image();
        elements.retain(|a| a.apply(base_gen) == *base_gen);
        let want = base.relative_degree();
        if elements.len() != want {
            return Err(Error::InvalidAutomorphism(format!(
                "found {} automorphisms over the base, expected {want}",
                elements.len()
            )));
        }
        let mut table = vec![vec![0; want]; want];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let c = a.compose(b);
                table[i][j] = elements
                    .iter()
                    .position(|x| *x == c)
                    .ok_or_else(|| Error::InvalidAutomorphism("table is not closed under composition".into()))?;
            }
        }
        Ok(GaloisGroup { field: field.clone(), base: base.clone(), elements, table })
    }

    /// `Gal(L / Q)`.
    pub fn over_rationals(field: &Arc<NumberField>) -> Result<Self> {
        let base = SubfieldEmbedding::from_rationals(&rationals(), field)?;
        Self::new(field, &base, None)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn base(&self) -> &SubfieldEmbedding {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Automorphism {
        &self.elements[i]
    }

    /// `table()[i][j]` is the index of `sigma_i ∘ sigma_j`.
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order()).find(|&j| self.table[i][j] == 0).expect("group elements are invertible")
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.table[cur][i];
            k += 1;
        }
        k
    }

    /// The cyclic subgroup generated by `i`, in order of powers.
    pub fn cyclic_subgroup(&self, i: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut cur = i;
        while cur != 0 {
            out.push(cur);
            cur = self.table[cur][i];
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        !h.is_empty()
            && h.iter().all(|&i| i < self.order())
            && h.iter().all(|&i| h.iter().all(|&j| h.contains(&self.table[i][j])))
    }

    /// Conjugacy classes, each sorted, listed by least member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|h| self.table[self.table[h][g]][self.inverse(h)]).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// True when every element of `h` fixes `c`.
    pub fn fixes(&self, h: &[usize], c: &FieldElement) -> bool {
        h.iter().all(|&i| self.elements[i].apply(c) == *c)
    }
}

/// `{sigma : sigma(Q) = Q}` as sorted indices.
pub fn decomposition_group(g: &GaloisGroup, q: &PrimeIdeal) -> Result<Vec<usize>> {
    if !q.field().same_as(g.field()) {
        return Err(Error::FieldMismatch);
    }
    Ok((0..g.order())
        .filter(|&i| q.ideal().map_by(g.elements[i].omega_matrix()) == *q.ideal())
        .collect())
}

/// The decomposition group of `Q`, its fixed field `Z` and `Q ∩ Z`.
#[derive(Clone, Debug)]
pub struct DecompositionData {
    pub prime: PrimeIdeal,
    pub group: Vec<usize>,
    pub field: Arc<NumberField>,
    pub embedding: SubfieldEmbedding,
    pub contracted: PrimeIdeal,
}

impl DecompositionData {
    /// `Q_Z` has the same absolute ramification index and residue degree as
    /// the prime of the base below `Q`.
    pub fn has_trivial_local_degree(&self, base: &SubfieldEmbedding) -> Result<bool> {
        let below = contract(&self.prime, base)?;
        Ok(below.e() == self.contracted.e() && below.f() == self.contracted.f())
    }
}

pub fn decomposition_field(g: &GaloisGroup, q: &PrimeIdeal) -> Result<DecompositionData> {
    let group = decomposition_group(g, q)?;
    let (field, embedding) = fixed_field(g, &group)?;
    let contracted = contract(q, &embedding)?;
    Ok(DecompositionData { prime: q.clone(), group, field, embedding, contracted })
}

fn trial_elements(field: &Arc<NumberField>, count: usize) -> Vec<FieldElement> {
    let n = field.degree();
    let limit = 3u64.saturating_pow(n as u32);
    (3..limit)
        .map(|mut t| {
            let mut c = Vec::with_capacity(n);
            for _ in 0..n {
                c.push(Rat::from_integer(Int::from(t % 3)));
                t /= 3;
            }
            FieldElement::new(field, c)
        })
        .take(count)
        .collect()
}

/// The fixed field of a subgroup `H`, as an abstract field with its
/// embedding into `L`.
pub fn fixed_field(g: &GaloisGroup, h: &[usize]) -> Result<(Arc<NumberField>, SubfieldEmbedding)> {
    if !g.is_subgroup(h) {
        return invalid("indices do not form a subgroup");
    }
    let l = g.field();
    if h.len() == g.order() {
        return Ok((g.base.source().clone(), g.base.clone()));
    }
    if h.len() == 1 {
        return Ok((l.clone(), SubfieldEmbedding::identity(l)));
    }
    let target = l.degree() / h.len();
    for gamma in trial_elements(l, FIXED_FIELD_TRIALS) {
        let mut alpha = FieldElement::zero(l);
        for &i in h {
            alpha = &alpha + &g.elements[i].apply(&gamma);
        }
        if alpha.minimal_polynomial().degree() == Some(target) {
            return subfield_generated_by(&alpha);
        }
    }
    Err(Error::PrimitiveElementNotFound { trials: FIXED_FIELD_TRIALS })
}

/// `Q(alpha)` for an algebraic integer `alpha` of `L`, with a small
/// generator and its ring of integers `O_L ∩ Q(alpha)`.
pub fn subfield_generated_by(alpha: &FieldElement) -> Result<(Arc<NumberField>, SubfieldEmbedding)> {
    let l = alpha.field().clone();
    if !alpha.is_integral() {
        return invalid("generator must be an algebraic integer");
    }
    let (alpha, minpoly) = polish(alpha);
    let d = minpoly.degree().expect("non-zero");
    let field = match make_field(&minpoly, None) {
        Ok(f) => f,
        Err(Error::BasisRequired { disc }) => {
            let mut pows = Vec::with_capacity(d);
            let mut cur = FieldElement::one(&l);
            for _ in 0..d {
                pows.push(cur.coords().to_vec());
                cur = &cur * &alpha;
            }
            let a = RatMatrix::new(pows, l.degree());
            let to_l = |v: &[Rat]| FieldElement::new(&l, a.left_apply(v));
            let mul = |x: &[Rat], y: &[Rat]| {
                let prod = &to_l(x) * &to_l(y);
                a.solve_left(prod.coords()).expect("subfield is closed")
            };
            let integral = |v: &[Rat]| to_l(v).is_integral();
            let mut rows: Vec<Vec<Rat>> = (0..d)
                .map(|i| (0..d).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
                .collect();
            for (p, e) in factor_int(&disc)? {
                if e >= 2 {
                    rows = enlarge_at(rows, p, &mul, &integral);
                }
            }
            make_field(&minpoly, Some(RatMatrix::new(rows, d)))?
        }
        Err(e) => return Err(e),
    };
    let emb = SubfieldEmbedding::new(&field, &l, alpha)?;
    Ok((field, emb))
}

/// Divides `alpha` by integers while it stays integral, so that e.g. the
/// orbit sum `2 sqrt 2` becomes `sqrt 2`.
fn polish(alpha: &FieldElement) -> (FieldElement, crate::arith::Poly) {
    let mut alpha = alpha.clone();
    let mut g = alpha.minimal_polynomial();
    'outer: loop {
        let d = g.degree().expect("non-zero");
        let content = g.coeffs()[..d]
            .iter()
            .fold(Int::zero(), |acc, c| num_integer::Integer::gcd(&acc, &c.to_integer()));
        if content.is_zero() {
            break;
        }
        let candidates: Vec<u64> = match content.to_u64() {
            Some(c) if c <= 1 << 20 => primes_up_to(c).into_iter().filter(|p| c % p == 0).collect(),
            _ => primes_up_to(1000),
        };
        for p in candidates {
            // alpha/p has minimal polynomial with coefficients a_{d-i} / p^i
            let ok = (1..=d).all(|i| {
                let c = g.coeffs()[d - i].to_integer();
                c.is_zero() || int_valuation(&c.abs(), p) >= i as u32
            });
            if ok {
                alpha = alpha.scale(&Rat::new(Int::one(), Int::from(p)));
                g = alpha.minimal_polynomial();
                continue 'outer;
            }
        }
        break;
    }
    (alpha, g)
}

/// The Frobenius element of an unramified prime, as an index into `g`.
pub fn frobenius(g: &GaloisGroup, q: &PrimeIdeal) -> Result<usize> {
    if !q.field().same_as(g.field()) {
        return Err(Error::FieldMismatch);
    }
    let below = contract(q, g.base())?;
    if q.e() != below.e() {
        return Err(Error::RamifiedPrime { p: q.p() });
    }
    frobenius_with_norm(g, q, below.f())
}

fn frobenius_with_norm(g: &GaloisGroup, q: &PrimeIdeal, base_f: u32) -> Result<usize> {
    let l = g.field();
    let n = l.degree();
    let p = Int::from(q.p());
    let norm: BigUint = num_traits::pow(BigUint::from(q.p()), base_f as usize);
    let powers: Vec<Vec<Int>> = (0..n)
        .map(|i| l.omega_pow_mod(&crate::field::unit_vector(n, i), &norm, &p))
        .collect();
    for (idx, sigma) in g.elements().iter().enumerate() {
        let ok = (0..n).all(|i| {
            let diff: Vec<Int> = sigma.omega_matrix().row(i).iter().zip(&powers[i]).map(|(a, b)| a - b).collect();
            q.ideal().contains_omega(&diff)
        });
        if ok {
            return Ok(idx);
        }
    }
    invalid("no automorphism acts as Frobenius; the group is incomplete")
}

/// Tally of Frobenius classes over the unramified primes up to a bound.
#[derive(Clone, Debug)]
pub struct ClassTally {
    pub representative: usize,
    pub members: Vec<usize>,
    pub count: u64,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub bound: u64,
    pub group_order: usize,
    /// Primes counted, in ascending order, with the Frobenius of the first
    /// prime above each.
    pub frobenius: Vec<(u64, usize)>,
    /// Primes up to the bound that were skipped (ramified or index divisors).
    pub skipped: Vec<u64>,
    pub classes: Vec<ClassTally>,
    /// For each group element `sigma`, the least prime whose Frobenius is
    /// `sigma`, so that `L^<sigma>` is its decomposition field.
    pub least_prime: Vec<Option<u64>>,
}

impl Census {
    pub fn total(&self) -> u64 {
        self.frobenius.len() as u64
    }

    pub fn empirical(&self, class: &ClassTally) -> Rat {
        if self.total() == 0 {
            return Rat::zero();
        }
        Rat::new(Int::from(class.count), Int::from(self.total()))
    }

    pub fn predicted(&self, class: &ClassTally) -> Rat {
        Rat::new(Int::from(class.members.len()), Int::from(self.group_order))
    }

    /// Largest `|empirical - predicted|` over all classes.
    pub fn max_deviation(&self) -> Rat {
        self.classes
            .iter()
            .map(|c| (self.empirical(c) - self.predicted(c)).abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// Rows `(representative, count, empirical, predicted)` with decimal
    /// frequencies.
    pub fn rows(&self) -> Vec<(usize, u64, String, String)> {
        self.classes
            .iter()
            .map(|c| {
                (
                    c.representative,
                    c.count,
                    format_decimal(&self.empirical(c), 6),
                    format_decimal(&self.predicted(c), 6),
                )
            })
            .collect()
    }
}

/// Frobenius classes of one prime above each unramified `p <= bound`.
/// Results are merged in ascending prime order whatever the schedule.
pub fn chebotarev_census(g: &GaloisGroup, bound: u64, exec: Execution) -> Result<Census> {
    if bound < 2 {
        return invalid("census bound must be at least 2");
    }
    if !g.base().source().is_rational() {
        return invalid("census requires the base field Q");
    }
    let l = g.field();
    let primes = primes_up_to(bound);
    let results = map_ordered(exec, &primes, |&p| -> Result<Option<usize>> {
        if (l.discriminant() % p).is_zero() || (l.index() % p).is_zero() {
            return Ok(None);
        }
        let split = factor_prime(l, p)?;
        frobenius_with_norm(g, &split.primes[0], 1).map(Some)
    });
    let classes_idx = g.conjugacy_classes();
    let mut classes: Vec<ClassTally> = classes_idx
        .iter()
        .map(|m| ClassTally { representative: m[0], members: m.clone(), count: 0 })
        .collect();
    let mut frob = Vec::new();
    let mut skipped = Vec::new();
    let mut least_prime = vec![None; g.order()];
    for (&p, r) in primes.iter().zip(results) {
        match r? {
            None => skipped.push(p),
            Some(s) => {
                frob.push((p, s));
                if least_prime[s].is_none() {
                    least_prime[s] = Some(p);
                }
                let c = classes.iter_mut().find(|c| c.members.contains(&s)).expect("classes partition G");
                c.count += 1;
            }
        }
    }
    Ok(Census { bound, group_order: g.order(), frobenius: frob, skipped, classes, least_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;
    use crate::field::{cyclotomic_field, quadratic_field};

    fn gauss() -> Arc<NumberField> {
        make_field(&Poly::from_ints([1, 0, 1]), None).unwrap()
    }

    fn biquad() -> Arc<NumberField> {
        make_field(&Poly::from_ints([1, 0, -10, 0, 1]), None).unwrap()
    }

    #[test]
    fn groups_of_families() {
        let g = GaloisGroup::over_rationals(&gauss()).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.element(1).image().coords(), &[Rat::zero(), -Rat::one()]);
        assert_eq!(GaloisGroup::over_rationals(&rationals()).unwrap().order(), 1);
        let k = GaloisGroup::over_rationals(&biquad()).unwrap();
        assert_eq!(k.order(), 4);
        assert!((1..4).all(|i| k.element_order(i) == 2));
        assert_eq!(k.conjugacy_classes().len(), 4);
        let c = GaloisGroup::over_rationals(&cyclotomic_field(5).unwrap()).unwrap();
        assert_eq!(c.order(), 4);
        assert!((1..4).any(|i| c.element_order(i) == 4));
    }

    #[test]
    fn unsupported_family_needs_table() {
        let f = make_field(&Poly::from_ints([1, 1, 0, 1]), None).unwrap();
        assert!(matches!(GaloisGroup::over_rationals(&f), Err(Error::AutomorphismsRequired)));
    }

    #[test]
    fn decomposition_and_frobenius() {
        let l = gauss();
        let g = GaloisGroup::over_rationals(&l).unwrap();
        let q5 = factor_prime(&l, 5).unwrap().primes.remove(0);
        assert_eq!(decomposition_group(&g, &q5).unwrap(), vec![0]);
        assert_eq!(frobenius(&g, &q5).unwrap(), 0);
        let q3 = factor_prime(&l, 3).unwrap().primes.remove(0);
        assert_eq!(decomposition_group(&g, &q3).unwrap(), vec![0, 1]);
        assert_eq!(frobenius(&g, &q3).unwrap(), 1);
        let q2 = factor_prime(&l, 2).unwrap().primes.remove(0);
        assert!(matches!(frobenius(&g, &q2), Err(Error::RamifiedPrime { p: 2 })));
        let z = decomposition_field(&g, &q3).unwrap();
        assert_eq!(z.field.degree(), 1);
        let z5 = decomposition_field(&g, &q5).unwrap();
        assert_eq!(z5.field.degree(), 2);
    }

    #[test]
    fn fixed_field_of_biquadratic() {
        let l = biquad();
        let g = GaloisGroup::over_rationals(&l).unwrap();
        let q7 = factor_prime(&l, 7).unwrap().primes.remove(0);
        let z = decomposition_field(&g, &q7).unwrap();
        // 2 is a square mod 7 and 3 is not: Z = Q(sqrt 2)
        assert_eq!(z.field.defining_polynomial(), &Poly::from_ints([-2, 0, 1]));
        assert_eq!(z.group.len() * z.field.degree(), 4);
        let base = g.base().clone();
        assert!(z.has_trivial_local_degree(&base).unwrap());
    }

    #[test]
    fn fixed_field_with_non_monogenic_ring() {
        // Q(sqrt 5) inside Q(zeta_5): orbit sums have index > 1 before polishing
        let l = cyclotomic_field(5).unwrap();
        let g = GaloisGroup::over_rationals(&l).unwrap();
        let h = (0..4).find(|&i| g.element_order(i) == 2).map(|i| g.cyclic_subgroup(i)).unwrap();
        let (z, emb) = fixed_field(&g, &h).unwrap();
        assert_eq!(z.degree(), 2);
        assert_eq!(z.discriminant(), &Int::from(5));
        assert_eq!(emb.relative_degree(), 2);
        let _ = quadratic_field(5).unwrap();
    }

    #[test]
    fn gaussian_census() {
        let g = GaloisGroup::over_rationals(&gauss()).unwrap();
        let c = chebotarev_census(&g, 100, Execution::Sequential).unwrap();
        let counts: Vec<u64> = c.classes.iter().map(|t| t.count).collect();
        assert_eq!(counts, vec![11, 13]);
        assert_eq!(c.skipped, vec![2]);
        assert_eq!(c.least_prime, vec![Some(5), Some(3)]);
        let par = chebotarev_census(&g, 100, Execution::Parallel).unwrap();
        assert_eq!(par.frobenius, c.frobenius);
    }
}
