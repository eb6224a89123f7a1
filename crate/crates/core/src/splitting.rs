//! Prime ideals: Kummer-Dedekind factorization of rational primes, valuations
//! and contraction to subfields.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::matrix::{hnf_modular, left_kernel_mod_p};
use crate::arith::{factor_mod_p, hnf, int_valuation, is_prime, FpPoly, Int, IntMatrix, Poly, Rat};
use crate::error::{invalid, Error, Result};
use crate::field::{FieldElement, FractionalIdeal, NumberField, SubfieldEmbedding};

/// A valuation value: an integer, or `Infinite` for zero. Ordering puts
/// every finite value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_at_least(self, k: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// A non-zero prime ideal `P = (p, alpha)` of a ring of integers.
#[derive(Clone)]
pub struct PrimeIdeal {
    field: Arc<NumberField>,
    p: u64,
    generator: FieldElement,
    e: u32,
    f: u32,
    ideal: FractionalIdeal,
    /// `gamma` with `gamma * P` inside `pO` but `gamma` outside `pO`, so
    /// `gamma / p` has valuation -1 here and is integral at every other prime.
    gamma: Vec<Int>,
    powers: Arc<Mutex<Vec<FractionalIdeal>>>,
}

impl fmt::Debug for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeIdeal{} (e = {}, f = {})", self, self.e, self.f)
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.generator)
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ideal == other.ideal
    }
}

impl Eq for PrimeIdeal {}

fn anti_uniformizer_numerator(field: &NumberField, p: u64, ideal: &FractionalIdeal) -> Vec<Int> {
    let n = field.degree();
    let bp = Int::from(p);
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let e = crate::field::unit_vector(n, i);
            ideal
                .hnf()
                .rows()
                .iter()
                .flat_map(|h| field.omega_mul(&e, h))
                .map(|x| x.mod_floor(&bp).to_u64().expect("reduced mod p"))
                .collect()
        })
        .collect();
    let kernel = left_kernel_mod_p(&rows, p);
    kernel
        .into_iter()
        .find(|v| v.iter().any(|&x| x != 0))
        .expect("P strictly contains pO, so the kernel is non-trivial")
        .into_iter()
        .map(Int::from)
        .collect()
}

fn all_divisible(v: &[Int], p: &Int) -> bool {
    v.iter().all(|x| (x % p).is_zero())
}

impl PrimeIdeal {
    fn assemble(field: &Arc<NumberField>, p: u64, generator: FieldElement, e: u32, f: u32, ideal: FractionalIdeal) -> Self {
        let gamma = anti_uniformizer_numerator(field, p, &ideal);
        PrimeIdeal {
            field: field.clone(),
            p,
            generator,
            e,
            f,
            ideal,
            gamma,
            powers: Arc::new(Mutex::new(Vec::new())),
        }
    }

    /// Builds the prime from an integral ideal lattice known to be prime and
    /// to contain `p`; `e` and `f` are derived from the lattice.
    pub fn from_lattice(field: &Arc<NumberField>, p: u64, ideal: FractionalIdeal) -> Result<Self> {
        let norm = ideal.norm().to_integer();
        let f = int_valuation(&norm, p);
        if num_traits::pow(Int::from(p), f as usize) != norm || f == 0 {
            return invalid(format!("ideal of norm {norm} is not a prime above {p}"));
        }
        let generator = two_element_generator(field, p, &ideal);
        let mut prime = Self::assemble(field, p, generator, 0, f, ideal);
        let bp = crate::field::unit_vector(field.degree(), 0)
            .into_iter()
            .map(|x| x * p)
            .collect::<Vec<Int>>();
        let mut e = 1;
        while prime.power(e + 1).contains_omega(&bp) {
            e += 1;
        }
        prime.e = e;
        Ok(prime)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// The rational prime below.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The second generator `alpha` of `P = (p, alpha)`.
    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    /// Ramification index over Q.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Residue degree over F_p.
    pub fn f(&self) -> u32 {
        self.f
    }

    /// Size of the residue field, `p^f`.
    pub fn norm(&self) -> Int {
        num_traits::pow(Int::from(self.p), self.f as usize)
    }

    pub fn ideal(&self) -> &FractionalIdeal {
        &self.ideal
    }

    /// An element of valuation -1 here and non-negative valuation at every
    /// other prime.
    pub fn anti_uniformizer(&self) -> FieldElement {
        FieldElement::from_omega(&self.field, &self.gamma)
            .scale(&Rat::new(Int::one(), Int::from(self.p)))
    }

    pub(crate) fn gamma(&self) -> &[Int] {
        &self.gamma
    }

    /// `P^k` (cached), computed modulo `p^k`.
    pub fn power(&self, k: u32) -> FractionalIdeal {
        if k == 0 {
            return FractionalIdeal::unit(&self.field);
        }
        let mut cache = self.powers.lock().expect("power cache poisoned");
        if cache.is_empty() {
            cache.push(self.ideal.clone());
        }
        while cache.len() < k as usize {
            let j = cache.len() as u32 + 1;
            let modulus = num_traits::pow(Int::from(self.p), j as usize);
            let next = cache.last().expect("non-empty").mul_with_modulus(&self.ideal, &modulus);
            cache.push(next);
        }
        cache[k as usize - 1].clone()
    }

    /// Valuation of an element of integral-basis coordinates (non-zero,
    /// integral).
    pub(crate) fn valuation_omega(&self, v: &[Int]) -> i64 {
        assert!(v.iter().any(|x| !x.is_zero()), "valuation of zero");
        let bp = Int::from(self.p);
        let mut a = v.to_vec();
        let mut s: i64 = 0;
        while all_divisible(&a, &bp) {
            for x in a.iter_mut() {
                *x /= &bp;
            }
            s += 1;
        }
        let mut t: i64 = 0;
        loop {
            let b = self.field.omega_mul(&a, &self.gamma);
            if !all_divisible(&b, &bp) {
                break;
            }
            a = b.into_iter().map(|x| x / &bp).collect();
            t += 1;
        }
        self.e as i64 * s + t
    }

    /// `v_P(c)`, normalised so that the value group is Z.
    pub fn valuation(&self, c: &FieldElement) -> Result<Valuation> {
        if !c.field().same_as(&self.field) {
            return Err(Error::FieldMismatch);
        }
        if c.is_zero() {
            return Ok(Valuation::Infinite);
        }
        let d = c.denominator();
        let v = c.scale(&Rat::from_integer(d.clone())).omega_coords().expect("cleared");
        let e = self.e as i64;
        let vd = if d.is_one() { 0 } else { int_valuation(&d, self.p) as i64 };
        Ok(Valuation::Finite(self.valuation_omega(&v) - e * vd))
    }

    /// `v_P(c) >= k` via ideal membership in `P^k` (for integral `c`).
    pub fn in_power(&self, c: &FieldElement, k: u32) -> Result<bool> {
        self.power(k).contains(c)
    }

    /// Applies a ring automorphism given by its integral-basis matrix.
    pub fn map_by(&self, m: &IntMatrix, image_generator: FieldElement) -> PrimeIdeal {
        let ideal = self.ideal.map_by(m);
        let gamma = crate::arith::row_times_matrix(&self.gamma, m);
        PrimeIdeal {
            field: self.field.clone(),
            p: self.p,
            generator: image_generator,
            e: self.e,
            f: self.f,
            ideal,
            gamma,
            powers: Arc::new(Mutex::new(Vec::new())),
        }
    }

    /// Lexicographic key on the second generator, used for deterministic
    /// tie-breaks between primes over the same `p`.
    pub fn sort_key(&self) -> Vec<Rat> {
        self.generator.coords().to_vec()
    }
}

/// Tries HNF rows and small combinations for `alpha` with `P = (p, alpha)`.
fn two_element_generator(field: &Arc<NumberField>, p: u64, ideal: &FractionalIdeal) -> FieldElement {
    let bp = Int::from(p);
    let rows = ideal.hnf().rows().to_vec();
    let n = rows.len();
    let works = |v: &[Int]| FractionalIdeal::from_omega_rows(field, &[v.to_vec()], &bp) == *ideal;
    let mut candidates: Vec<Vec<Int>> = rows.clone();
    for i in 0..n {
        for j in i + 1..n {
            candidates.push(rows[i].iter().zip(&rows[j]).map(|(a, b)| a + b).collect());
        }
    }
    for c in &candidates {
        if works(c) {
            return FieldElement::from_omega(field, c);
        }
    }
    // small mixed combinations
    for mask in 1u64..3u64.pow(n.min(8) as u32) {
        let mut m = mask;
        let mut v = vec![Int::zero(); n];
        for r in rows.iter().take(8) {
            let c = (m % 3) as i64;
            m /= 3;
            for (x, y) in v.iter_mut().zip(r) {
                *x += y * c;
            }
        }
        if works(&v) {
            return FieldElement::from_omega(field, &v);
        }
    }
    FieldElement::from_omega(field, &rows[0])
}

/// The factorization of a rational prime in a ring of integers.
#[derive(Clone, Debug)]
pub struct SplittingData {
    pub p: u64,
    pub primes: Vec<PrimeIdeal>,
}

impl SplittingData {
    /// `sum e_i f_i`.
    pub fn degree_sum(&self) -> u32 {
        self.primes.iter().map(|q| q.e * q.f).sum()
    }

    /// Product of `P_i^(e_i)` as an ideal.
    pub fn product(&self) -> Result<FractionalIdeal> {
        let field = &self.primes[0].field;
        let mut acc = FractionalIdeal::unit(field);
        for q in &self.primes {
            acc = acc.mul(&q.power(q.e))?;
        }
        Ok(acc)
    }

    /// The product of the prime powers equals `pO` (HNF equality).
    pub fn verify_product(&self) -> Result<bool> {
        let field = &self.primes[0].field;
        Ok(self.product()? == FractionalIdeal::rational(field, &Int::from(self.p)))
    }

    pub fn is_ramified(&self) -> bool {
        self.primes.iter().any(|q| q.e > 1)
    }
}

/// Kummer-Dedekind factorization of `p` in the ring of integers of `field`.
pub fn factor_prime(field: &Arc<NumberField>, p: u64) -> Result<SplittingData> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if (field.index() % p).is_zero() {
        return Err(Error::IndexDivisorUnsupported { p, index: field.index().clone() });
    }
    let fp = FpPoly::from_ints(p, field.defining_coeffs());
    let factors = factor_mod_p(&fp)?;
    let theta = crate::field::generator(field);
    let bp = Int::from(p);
    let mut primes = Vec::with_capacity(factors.len());
    for (g, e) in factors {
        let lift = Poly::from_ints(g.to_ints());
        let alpha = theta.eval_rat_poly(&lift);
        let alpha_omega = alpha.omega_coords().expect("g(theta) is integral");
        let ideal = FractionalIdeal::from_omega_rows(field, &[alpha_omega], &bp);
        let f = g.degree().expect("non-constant factor") as u32;
        primes.push(PrimeIdeal::assemble(field, p, alpha, e, f, ideal));
    }
    Ok(SplittingData { p, primes })
}

/// The prime `Q ∩ K` of a subfield, computed as a lattice intersection.
pub fn contract(q: &PrimeIdeal, emb: &SubfieldEmbedding) -> Result<PrimeIdeal> {
    if !emb.target().same_as(q.field()) {
        return Err(Error::FieldMismatch);
    }
    let k = emb.source();
    let (nk, nl) = (k.degree(), q.field().degree());
    let mut rows = Vec::with_capacity(nk + nl);
    for i in 0..nk {
        let mut r = emb.omega_matrix().row(i).to_vec();
        r.extend(crate::field::unit_vector(nk, i));
        rows.push(r);
    }
    for h in q.ideal().hnf().rows() {
        let mut r = h.clone();
        r.extend(std::iter::repeat(Int::zero()).take(nk));
        rows.push(r);
    }
    let h = hnf(&IntMatrix::new(rows, nl + nk));
    let kernel: Vec<Vec<Int>> = h
        .rows()
        .iter()
        .filter(|r| r[..nl].iter().all(|x| x.is_zero()) && r[nl..].iter().any(|x| !x.is_zero()))
        .map(|r| r[nl..].to_vec())
        .collect();
    let bp = Int::from(q.p());
    let lattice = hnf_modular(&kernel, nk, &bp);
    let ideal = FractionalIdeal::from_omega_rows(k, &lattice.into_rows(), &bp);
    PrimeIdeal::from_lattice(k, q.p(), ideal)
}

/// `e(Q / (Q ∩ K))`: the index of the value group of `v_Q` restricted to `K`.
pub fn restricted_value_group(q: &PrimeIdeal, emb: &SubfieldEmbedding) -> Result<u32> {
    let below = contract(q, emb)?;
    Ok(q.e() / below.e())
}

/// Orders primes by `(p, generator)` lexicographically.
pub fn compare_primes(a: &PrimeIdeal, b: &PrimeIdeal) -> Ordering {
    a.p.cmp(&b.p).then_with(|| a.sort_key().cmp(&b.sort_key()))
}

/// `v_Q(x)` for a rational integer, via `e * v_p`.
pub fn rational_valuation(q: &PrimeIdeal, x: &Int) -> Valuation {
    if x.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(q.e() as i64 * int_valuation(&x.abs(), q.p()) as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, rationals};

    fn gauss() -> Arc<NumberField> {
        make_field(&Poly::from_ints([1, 0, 1]), None).unwrap()
    }

    #[test]
    fn gaussian_splitting() {
        let k = gauss();
        let s5 = factor_prime(&k, 5).unwrap();
        assert_eq!(s5.primes.len(), 2);
        assert!(s5.primes.iter().all(|q| q.e() == 1 && q.f() == 1));
        assert!(s5.verify_product().unwrap());
        let s2 = factor_prime(&k, 2).unwrap();
        assert_eq!(s2.primes.len(), 1);
        assert_eq!((s2.primes[0].e(), s2.primes[0].f()), (2, 1));
        assert!(s2.verify_product().unwrap());
        let s3 = factor_prime(&k, 3).unwrap();
        assert_eq!((s3.primes[0].e(), s3.primes[0].f()), (1, 2));
    }

    #[test]
    fn valuations() {
        let k = gauss();
        let q2 = factor_prime(&k, 2).unwrap().primes.remove(0);
        let a = FieldElement::from_ints(&k, &[1, 1]);
        assert_eq!(q2.valuation(&a).unwrap(), Valuation::Finite(1));
        assert_eq!(q2.valuation(&FieldElement::one(&k)).unwrap(), Valuation::Finite(0));
        assert_eq!(q2.valuation(&FieldElement::zero(&k)).unwrap(), Valuation::Infinite);
        assert_eq!(q2.valuation(&a.inverse().unwrap()).unwrap(), Valuation::Finite(-1));
        assert_eq!(q2.valuation(&q2.anti_uniformizer()).unwrap(), Valuation::Finite(-1));
        let s5 = factor_prime(&k, 5).unwrap();
        for q in &s5.primes {
            assert_eq!(q.valuation(&FieldElement::from_ints(&k, &[5])).unwrap(), Valuation::Finite(1));
        }
    }

    #[test]
    fn contraction_to_rationals() {
        let k = gauss();
        let q = rationals();
        let emb = SubfieldEmbedding::from_rationals(&q, &k).unwrap();
        let q2 = factor_prime(&k, 2).unwrap().primes.remove(0);
        assert_eq!(restricted_value_group(&q2, &emb).unwrap(), 2);
        let q5 = factor_prime(&k, 5).unwrap().primes.remove(0);
        assert_eq!(restricted_value_group(&q5, &emb).unwrap(), 1);
        let id = SubfieldEmbedding::identity(&k);
        assert_eq!(restricted_value_group(&q2, &id).unwrap(), 1);
        let below = contract(&q2, &emb).unwrap();
        assert_eq!(below.p(), 2);
        assert_eq!(below.e(), 1);
    }

    #[test]
    fn index_divisor_rejected() {
        let l = make_field(&Poly::from_ints([1, 0, -10, 0, 1]), None).unwrap();
        assert!(matches!(factor_prime(&l, 2), Err(Error::IndexDivisorUnsupported { p: 2, .. })));
        assert!(factor_prime(&l, 4).is_err());
    }
}
