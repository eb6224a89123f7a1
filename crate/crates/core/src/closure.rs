//! Q-adic closure of `O_K` inside `L`: a decomposition-group test, a
//! lattice approximation test, density/closedness predicates and a probe
//! for primes witnessing non-membership.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{first_primes, hnf_with_transform, int_valuation, Int, IntMatrix, Rat};
use crate::error::{Error, Result};
use crate::field::{rationals, FieldElement, NumberField, SubfieldEmbedding};
use crate::galois::{decomposition_group, GaloisGroup};
use crate::par::{find_first, Execution};
use crate::splitting::{contract, factor_prime, PrimeIdeal};

/// Largest `m` examined when searching for a failing approximation level.
pub const LEVEL_CAP: u32 = 64;

/// An extension `K ⊂ L`, with its Galois group when one is available.
#[derive(Clone, Debug)]
pub struct Extension {
    base: SubfieldEmbedding,
    group: Option<GaloisGroup>,
}

impl Extension {
    /// Computes the Galois group when the field family (or spec) provides
    /// automorphisms; otherwise only the approximation method is available.
    pub fn new(base: SubfieldEmbedding) -> Result<Self> {
        match GaloisGroup::new(base.target(), &base, None) {
            Ok(g) => Ok(Extension { base, group: Some(g) }),
            Err(Error::AutomorphismsRequired) => Ok(Extension { base, group: None }),
            Err(e) => Err(e),
        }
    }

    pub fn over_rationals(top: &Arc<NumberField>) -> Result<Self> {
        Self::new(SubfieldEmbedding::from_rationals(&rationals(), top)?)
    }

    pub fn with_group(group: GaloisGroup) -> Self {
        Extension { base: group.base().clone(), group: Some(group) }
    }

    pub fn base(&self) -> &SubfieldEmbedding {
        &self.base
    }

    pub fn bottom(&self) -> &Arc<NumberField> {
        self.base.source()
    }

    pub fn top(&self) -> &Arc<NumberField> {
        self.base.target()
    }

    pub fn group(&self) -> Option<&GaloisGroup> {
        self.group.as_ref()
    }

    fn require_group(&self) -> Result<&GaloisGroup> {
        self.group
            .as_ref()
            .ok_or_else(|| Error::MethodUnavailable("no Galois group for this extension".into()))
    }
}

/// Decomposition-group test: `c` lies in the closure iff every element of
/// `G_Q` fixes `c` and `v_Q(c) >= 0`.
pub fn closure_member(ext: &Extension, q: &PrimeIdeal, c: &FieldElement) -> Result<bool> {
    let g = ext.require_group()?;
    if !c.field().same_as(ext.top()) {
        return Err(Error::FieldMismatch);
    }
    if !q.valuation(c)?.is_at_least(0) {
        return Ok(false);
    }
    let gq = decomposition_group(g, q)?;
    Ok(g.fixes(&gq, c))
}

/// Result of the approximation method.
#[derive(Clone, Debug)]
pub struct ClosureWitness {
    pub member: bool,
    /// For non-members: the least `k` with `(c + Q^k) ∩ O_K` empty.
    pub failing_level: Option<u32>,
    /// For non-members: the least `m` with `(c + Q^(e m)) ∩ O_K` empty,
    /// where `e = e(Q / Q ∩ K)`.
    pub m: Option<u32>,
    /// For members: approximants `a ∈ O_K` (as elements of `K`) with
    /// `v_Q(c - a) >= k`, one per requested level.
    pub approximants: Vec<(u32, FieldElement)>,
}

/// Lattice approximation of `c` by elements of `O_K` modulo powers of `Q`.
/// Works without a Galois group. Row reductions are cached per level.
pub struct Approximator {
    base: SubfieldEmbedding,
    q: PrimeIdeal,
    e_rel: u32,
    cache: Mutex<BTreeMap<u32, Arc<(IntMatrix, IntMatrix)>>>,
    /// `y = gamma^e / p^(e-1)`: a unit at `Q` lying in every other prime
    /// above `p`.
    y: Vec<Int>,
}

impl Approximator {
    pub fn new(base: &SubfieldEmbedding, q: &PrimeIdeal) -> Result<Self> {
        if !q.field().same_as(base.target()) {
            return Err(Error::FieldMismatch);
        }
        let below = contract(q, base)?;
        let l = q.field();
        let bp = Int::from(q.p());
        let mut y = q.gamma().to_vec();
        for _ in 1..q.e() {
            y = l.omega_mul(&y, q.gamma());
        }
        let scale = num_traits::pow(bp, q.e() as usize - 1);
        let y = y.into_iter().map(|x| x / &scale).collect();
        Ok(Approximator { base: base.clone(), q: q.clone(), e_rel: q.e() / below.e(), cache: Mutex::new(BTreeMap::new()), y })
    }

    /// `e(Q / Q ∩ K)`.
    pub fn relative_e(&self) -> u32 {
        self.e_rel
    }

    /// `ceil(k / e)` with `e` the absolute ramification index, so that
    /// `p^K ∈ Q^k`.
    fn p_level(&self, k: u32) -> u32 {
        k.div_ceil(self.q.e())
    }

    fn reduction(&self, k: u32) -> Arc<(IntMatrix, IntMatrix)> {
        if let Some(r) = self.cache.lock().expect("cache poisoned").get(&k) {
            return r.clone();
        }
        let mut rows: Vec<Vec<Int>> = self.base.omega_matrix().rows().to_vec();
        rows.extend(self.q.power(k).hnf().rows().iter().cloned());
        let n = self.q.field().degree();
        let r = Arc::new(hnf_with_transform(&IntMatrix::new(rows, n)));
        self.cache.lock().expect("cache poisoned").insert(k, r.clone());
        r
    }

    /// An integral element congruent to `c` modulo `Q^k` (requires
    /// `v_Q(c) >= 0`), in integral-basis coordinates.
    fn integral_representative(&self, c: &FieldElement, k: u32) -> Vec<Int> {
        let l = self.q.field();
        let d = c.denominator();
        let a = c.scale(&Rat::from_integer(d.clone())).omega_coords().expect("cleared");
        if d.is_one() {
            return a;
        }
        let p = self.q.p();
        let t = int_valuation(&d, p);
        let d_prime = &d / num_traits::pow(Int::from(p), t as usize);
        let modulus = num_traits::pow(Int::from(p), self.p_level(k) as usize);
        // c = a / (p^t d'), with a y^t / p^t integral and y a unit at Q
        let mut z = a;
        if t > 0 {
            let wide = &modulus * num_traits::pow(Int::from(p), t as usize);
            let yt = l.omega_pow_mod(&self.y, &BigUint::from(t), &wide);
            let zy = l.omega_mul_mod(&z, &yt, &wide);
            let pt = num_traits::pow(Int::from(p), t as usize);
            z = zy.into_iter().map(|x| x / &pt).collect();
            // multiply by (y^t)^(M-1), the inverse of y^t modulo Q^k
            let nq = BigUint::from(p).pow(self.q.f());
            let order = nq.pow(k - 1) * (&nq - 1u32);
            let inv = l.omega_pow_mod(&yt, &(order - 1u32), &modulus);
            z = l.omega_mul_mod(&z, &inv, &modulus);
        }
        let dinv = d_prime.extended_gcd(&modulus).x.mod_floor(&modulus);
        z.into_iter().map(|x| (x * &dinv).mod_floor(&modulus)).collect()
    }

    /// Some `a ∈ O_K` with `v_Q(c - a) >= k`, or `None`.
    pub fn approximant(&self, c: &FieldElement, k: u32) -> Result<Option<FieldElement>> {
        if !c.field().same_as(self.q.field()) {
            return Err(Error::FieldMismatch);
        }
        if !self.q.valuation(c)?.is_at_least(0) {
            return Ok(None);
        }
        let k_field = self.base.source();
        if k == 0 {
            return Ok(Some(FieldElement::zero(k_field)));
        }
        let target = self.integral_representative(c, k);
        let red = self.reduction(k);
        let (h, u) = (&red.0, &red.1);
        let Some(w) = h.solve_hnf(&target) else {
            return Ok(None);
        };
        let coeffs = crate::arith::row_times_matrix(&w, u);
        let nk = k_field.degree();
        let modulus = num_traits::pow(Int::from(self.q.p()), self.p_level(k) as usize);
        let x: Vec<Int> = coeffs[..nk].iter().map(|v| v.mod_floor(&modulus)).collect();
        Ok(Some(FieldElement::from_omega(k_field, &x)))
    }

    pub fn is_member_at(&self, c: &FieldElement, k: u32) -> Result<bool> {
        Ok(self.approximant(c, k)?.is_some())
    }

    /// Least failing level `k`, searched by doubling then bisection up to
    /// `LEVEL_CAP * e(Q / Q ∩ K)`; `None` if every level up to the cap passes.
    pub fn failing_level(&self, c: &FieldElement) -> Result<Option<u32>> {
        if !self.q.valuation(c)?.is_at_least(0) {
            return Ok(Some(0));
        }
        let cap = LEVEL_CAP * self.e_rel;
        let mut lo = 0u32; // known to pass
        let mut hi = 1u32;
        loop {
            if !self.is_member_at(c, hi)? {
                break;
            }
            lo = hi;
            if hi >= cap {
                return Ok(None);
            }
            hi = (hi * 2).min(cap);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.is_member_at(c, mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Some(hi))
    }

    /// Full witness: approximants at `levels` for members, or the least
    /// failing level and `m` for non-members.
    pub fn witness(&self, c: &FieldElement, levels: &[u32]) -> Result<ClosureWitness> {
        match self.failing_level(c)? {
            Some(k0) => Ok(ClosureWitness {
                member: false,
                failing_level: Some(k0),
                m: Some(k0.div_ceil(self.e_rel)),
                approximants: Vec::new(),
            }),
            None => {
                let mut approximants = Vec::with_capacity(levels.len());
                for &k in levels {
                    let a = self.approximant(c, k)?.expect("member at every level below the cap");
                    approximants.push((k, a));
                }
                Ok(ClosureWitness { member: true, failing_level: None, m: None, approximants })
            }
        }
    }

    /// Re-checks `v_Q(c - a) >= k` for an approximant.
    pub fn verify(&self, c: &FieldElement, k: u32, a: &FieldElement) -> Result<bool> {
        let diff = c - &self.base.apply(a)?;
        Ok(self.q.valuation(&diff)?.is_at_least(k as i64))
    }
}

/// Decides whether `(c + Q^k) ∩ O_K` is non-empty; returns a witness with
/// an approximant at level `k`, or the least failing level.
pub fn approx_member(ext: &Extension, q: &PrimeIdeal, c: &FieldElement, k: u32) -> Result<ClosureWitness> {
    let ap = Approximator::new(ext.base(), q)?;
    if let Some(a) = ap.approximant(c, k)? {
        return Ok(ClosureWitness { member: true, failing_level: None, m: None, approximants: vec![(k, a)] });
    }
    let k0 = ap.failing_level(c)?.expect("fails at level k");
    Ok(ClosureWitness {
        member: false,
        failing_level: Some(k0),
        m: Some(k0.div_ceil(ap.relative_e())),
        approximants: Vec::new(),
    })
}

/// Least failing level for a non-member, or `LevelCapExceeded`.
pub fn non_member_level(ext: &Extension, q: &PrimeIdeal, c: &FieldElement) -> Result<u32> {
    Approximator::new(ext.base(), q)?
        .failing_level(c)?
        .ok_or(Error::LevelCapExceeded { cap: LEVEL_CAP })
}

/// Primes of `L` lying over `Q ∩ K`, found by factoring `p` in `L`.
pub fn primes_above(ext: &Extension, q: &PrimeIdeal) -> Result<Vec<PrimeIdeal>> {
    let below = contract(q, ext.base())?;
    let split = factor_prime(ext.top(), q.p())?;
    let mut out = Vec::new();
    for cand in split.primes {
        if contract(&cand, ext.base())?.ideal() == below.ideal() {
            out.push(cand);
        }
    }
    Ok(out)
}

/// `O_K` is dense in `O_L` at `Q`: the prime below splits completely.
pub fn is_dense(ext: &Extension, q: &PrimeIdeal) -> Result<bool> {
    Ok(primes_above(ext, q)?.len() == ext.base().relative_degree())
}

/// `O_K` is closed at `Q`: `Q` is the only prime above `Q ∩ K`.
pub fn is_relatively_closed(ext: &Extension, q: &PrimeIdeal) -> Result<bool> {
    Ok(primes_above(ext, q)?.len() == 1)
}

#[derive(Clone, Debug)]
pub enum ProbeOutcome {
    /// A prime `Q` with `c` outside the closure at `Q`.
    Witness { prime: PrimeIdeal, primes_scanned: usize },
    /// `c` lies in `O_K`, so no witness exists.
    MemberOfBase,
    /// No witness among the scanned primes (not a refutation).
    Exhausted { primes_scanned: usize, skipped: Vec<u64> },
}

/// Scans the first `budget` rational primes for a prime `Q` of `L` with
/// `c` outside the closure of `O_K` at `Q`. The witness is the least
/// rational prime, then the least second generator.
pub fn closure_intersection_probe(
    ext: &Extension,
    c: &FieldElement,
    budget: usize,
    exec: Execution,
) -> Result<ProbeOutcome> {
    if !c.field().same_as(ext.top()) {
        return Err(Error::FieldMismatch);
    }
    if !c.is_integral() {
        return Err(Error::InvalidArgument("probe element must be an algebraic integer".into()));
    }
    if ext.base().contains_integer(c)? {
        return Ok(ProbeOutcome::MemberOfBase);
    }
    let l = ext.top();
    let primes = first_primes(budget);
    let found = find_first(exec, &primes, |&p| -> Option<Result<PrimeIdeal>> {
        if (l.index() % p).is_zero() {
            return None;
        }
        let split = match factor_prime(l, p) {
            Ok(s) => s,
            Err(e) => return Some(Err(e)),
        };
        let mut qs = split.primes;
        qs.sort_by(crate::splitting::compare_primes);
        for q in qs {
            match is_witness(ext, &q, c) {
                Ok(true) => return Some(Ok(q)),
                Ok(false) => {}
                Err(e) => return Some(Err(e)),
            }
        }
        None
    });
    match found {
        Some((i, r)) => Ok(ProbeOutcome::Witness { prime: r?, primes_scanned: i + 1 }),
        None => Ok(ProbeOutcome::Exhausted {
            primes_scanned: primes.len(),
            skipped: primes.iter().copied().filter(|p| (l.index() % p).is_zero()).collect(),
        }),
    }
}

fn is_witness(ext: &Extension, q: &PrimeIdeal, c: &FieldElement) -> Result<bool> {
    if ext.group().is_some() {
        return Ok(!closure_member(ext, q, c)?);
    }
    // without automorphisms fall back to the approximation method
    Ok(Approximator::new(ext.base(), q)?.failing_level(c)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;
    use crate::field::make_field;

    fn gauss_ext() -> Extension {
        let l = make_field(&Poly::from_ints([1, 0, 1]), None).unwrap();
        Extension::over_rationals(&l).unwrap()
    }

    fn prime(ext: &Extension, p: u64, which: usize) -> PrimeIdeal {
        let mut qs = factor_prime(ext.top(), p).unwrap().primes;
        qs.sort_by(crate::splitting::compare_primes);
        qs.remove(which)
    }

    #[test]
    fn decomposition_test() {
        let ext = gauss_ext();
        let theta = FieldElement::from_ints(ext.top(), &[0, 1]);
        assert!(closure_member(&ext, &prime(&ext, 5, 0), &theta).unwrap());
        assert!(!closure_member(&ext, &prime(&ext, 3, 0), &theta).unwrap());
        let seven = FieldElement::from_ints(ext.top(), &[7]);
        assert!(closure_member(&ext, &prime(&ext, 3, 0), &seven).unwrap());
    }

    #[test]
    fn hensel_approximant() {
        let ext = gauss_ext();
        let theta = FieldElement::from_ints(ext.top(), &[0, 1]);
        let q = factor_prime(ext.top(), 5)
            .unwrap()
            .primes
            .into_iter()
            .find(|q| q.ideal().contains(&FieldElement::from_ints(ext.top(), &[-2, 1])).unwrap())
            .unwrap();
        let w = approx_member(&ext, &q, &theta, 3).unwrap();
        assert!(w.member);
        let a = &w.approximants[0].1;
        assert_eq!(a.as_rational().unwrap(), Rat::from_integer(57.into()));
        let ap = Approximator::new(ext.base(), &q).unwrap();
        assert!(ap.verify(&theta, 3, a).unwrap());
    }

    #[test]
    fn inert_non_member() {
        let ext = gauss_ext();
        let theta = FieldElement::from_ints(ext.top(), &[0, 1]);
        let w = approx_member(&ext, &prime(&ext, 3, 0), &theta, 1).unwrap();
        assert!(!w.member);
        assert_eq!(w.m, Some(1));
    }

    #[test]
    fn non_integral_but_q_integral() {
        // c = theta / 5 has v_Q(c) = -1 at both primes over 5; c = theta / 3
        // is integral at the primes over 5
        let ext = gauss_ext();
        let q = prime(&ext, 5, 0);
        let c = FieldElement::new(ext.top(), vec![Rat::zero(), Rat::new(1.into(), 3.into())]);
        let ap = Approximator::new(ext.base(), &q).unwrap();
        for k in 1..=4 {
            let a = ap.approximant(&c, k).unwrap().unwrap();
            assert!(ap.verify(&c, k, &a).unwrap());
        }
        let bad = FieldElement::new(ext.top(), vec![Rat::zero(), Rat::new(1.into(), 5.into())]);
        assert_eq!(ap.failing_level(&bad).unwrap(), Some(0));
        // the ramified prime over 2: 1/(1+theta) = (1 - theta)/2 has v = -1
        let q2 = prime(&ext, 2, 0);
        let ap2 = Approximator::new(ext.base(), &q2).unwrap();
        let half = FieldElement::new(ext.top(), vec![Rat::new(1.into(), 2.into()), Rat::new(1.into(), 2.into())]);
        assert_eq!(ap2.failing_level(&half).unwrap(), Some(0));
        let ok = (&half * &FieldElement::from_ints(ext.top(), &[1, 1])).scale(&Rat::from_integer(3.into()));
        assert!(ap2.failing_level(&ok).unwrap().is_some());
    }

    #[test]
    fn density_predicates() {
        let ext = gauss_ext();
        assert!(is_dense(&ext, &prime(&ext, 5, 0)).unwrap());
        assert!(!is_dense(&ext, &prime(&ext, 2, 0)).unwrap());
        assert!(is_relatively_closed(&ext, &prime(&ext, 3, 0)).unwrap());
        assert!(!is_relatively_closed(&ext, &prime(&ext, 5, 1)).unwrap());
        let trivial = Extension::new(SubfieldEmbedding::identity(ext.top())).unwrap();
        let q = prime(&ext, 5, 0);
        assert!(is_dense(&trivial, &q).unwrap());
        assert!(is_relatively_closed(&trivial, &q).unwrap());
    }

    #[test]
    fn probe() {
        let ext = gauss_ext();
        let theta = FieldElement::from_ints(ext.top(), &[0, 1]);
        match closure_intersection_probe(&ext, &theta, 25, Execution::Sequential).unwrap() {
            ProbeOutcome::Witness { prime, .. } => assert_eq!(prime.p(), 2),
            other => panic!("unexpected {other:?}"),
        }
        let five = FieldElement::from_ints(ext.top(), &[5]);
        assert!(matches!(
            closure_intersection_probe(&ext, &five, 25, Execution::Parallel).unwrap(),
            ProbeOutcome::MemberOfBase
        ));
    }
}
