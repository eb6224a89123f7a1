//! Integer-valued polynomials: valuation counting, witness polynomials,
//! membership in `Int(D)` and the image overring `Int(D)[c]`.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factor_int, first_primes, int_valuation, lcm_of_denominators, Int, Rat, RatMatrix};
use crate::closure::{closure_member, Approximator, Extension};
use crate::error::{invalid, Error, Result};
use crate::field::{box_representatives, residue_system, FieldElement, NumberField, RESIDUE_CAP};
use crate::par::{map_ordered, Execution};
use crate::splitting::{compare_primes, contract, factor_prime, PrimeIdeal, Valuation};

/// `1 + q + ... + q^(m-1)` for a residue-field size `q`.
pub fn beta(residue_size: &Int, m: u32) -> Int {
    let mut acc = Int::zero();
    let mut pw = Int::one();
    for _ in 0..m {
        acc += &pw;
        pw *= residue_size;
    }
    acc
}

/// Both sides of the counting identity
/// `e * sum_k #{j : a_j ∈ c + Q^k} = e * sum_j v_Q(c - a_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductValuation {
    pub counting: i64,
    pub direct: i64,
}

/// Computes the counting side by ideal membership in `Q^k` and the direct
/// side by valuations. Inputs must be algebraic integers with `c != a_j`.
pub fn product_valuation_parts(
    c: &FieldElement,
    a_list: &[FieldElement],
    q: &PrimeIdeal,
    e: u32,
) -> Result<ProductValuation> {
    let mut diffs = Vec::with_capacity(a_list.len());
    for a in a_list {
        let d = c - a;
        if d.is_zero() {
            return invalid("c coincides with a list element; the product vanishes");
        }
        if !d.is_integral() || !c.is_integral() {
            return invalid("product_valuation expects algebraic integers");
        }
        diffs.push(d);
    }
    let mut direct = 0i64;
    for d in &diffs {
        direct += q.valuation(d)?.finite().expect("non-zero");
    }
    let mut counting = 0i64;
    let mut k = 1u32;
    loop {
        let power = q.power(k);
        let mut hits = 0i64;
        for d in &diffs {
            if power.contains(d)? {
                hits += 1;
            }
        }
        if hits == 0 {
            break;
        }
        counting += hits;
        k += 1;
    }
    Ok(ProductValuation { counting: e as i64 * counting, direct: e as i64 * direct })
}

/// `e * sum_j v_Q(c - a_j)` by the counting method, checked against the
/// direct valuation sum.
pub fn product_valuation(c: &FieldElement, a_list: &[FieldElement], q: &PrimeIdeal, e: u32) -> Result<i64> {
    let parts = product_valuation_parts(c, a_list, q, e)?;
    assert_eq!(parts.counting, parts.direct, "counting identity violated");
    Ok(parts.counting)
}

/// Outcome of the exhaustive minimum search for `g = prod (x - a_j)`.
#[derive(Clone, Debug)]
pub struct MinGValuation {
    pub min: i64,
    pub beta: Int,
    /// A residue `r` attaining the minimum.
    pub attained_at: FieldElement,
}

/// `min_r v_P(g(r))` for `g` built on the residue system of `P^m`, searched
/// over the residue system of `P^(m+1)`. Classes where `g(r) = 0` are
/// skipped; they contain elements of strictly larger valuation.
pub fn min_g_valuation(p: &PrimeIdeal, m: u32) -> Result<MinGValuation> {
    let a_list = residue_system(p, m)?;
    let rs = residue_system(p, m + 1)?;
    let field = p.field();
    let a_omega: Vec<Vec<Int>> = a_list.iter().map(|a| omega_or_zero(field, a)).collect();
    let mut best: Option<(i64, usize)> = None;
    for (idx, r) in rs.iter().enumerate() {
        let rv = omega_or_zero(field, r);
        let mut total = 0i64;
        let mut infinite = false;
        for a in &a_omega {
            let d: Vec<Int> = rv.iter().zip(a).map(|(x, y)| x - y).collect();
            if d.iter().all(|x| x.is_zero()) {
                infinite = true;
                break;
            }
            total += p.valuation_omega(&d);
        }
        if infinite {
            continue;
        }
        if best.is_none_or(|(b, _)| total < b) {
            best = Some((total, idx));
        }
    }
    let (min, idx) = best.expect("some residue avoids every a_j");
    Ok(MinGValuation { min, beta: beta(&p.norm(), m), attained_at: rs[idx].clone() })
}

fn omega_or_zero(field: &Arc<NumberField>, x: &FieldElement) -> Vec<Int> {
    x.omega_coords().unwrap_or_else(|| vec![Int::zero(); field.degree()])
}

/// Coefficients (constant first) of `prod (x - a_j)`.
pub fn product_polynomial(field: &Arc<NumberField>, roots: &[FieldElement]) -> Vec<FieldElement> {
    let integral: Option<Vec<Vec<Int>>> = roots.iter().map(|a| a.omega_coords()).collect();
    if let Some(rs) = integral {
        // integral roots: stay in integer coordinates
        let n = field.degree();
        let mut coeffs = vec![field.omega_one()];
        for a in &rs {
            let mut next = vec![vec![Int::zero(); n]; coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                for (x, y) in next[i + 1].iter_mut().zip(c) {
                    *x += y;
                }
                for (x, y) in next[i].iter_mut().zip(field.omega_mul(c, a)) {
                    *x -= y;
                }
            }
            coeffs = next;
        }
        return coeffs.iter().map(|c| FieldElement::from_omega(field, c)).collect();
    }
    let mut coeffs = vec![FieldElement::one(field)];
    for a in roots {
        let mut next = vec![FieldElement::zero(field); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * a);
        }
        coeffs = next;
    }
    coeffs
}

/// The witness `f = d * prod (x - a_j)` with `f ∈ Int(O_K)` and
/// `v_Q(f(c)) < 0`.
#[derive(Clone, Debug)]
pub struct WitnessPolynomial {
    /// Prime `Q` of the top field and `P = Q ∩ K`.
    pub prime: PrimeIdeal,
    pub prime_below: PrimeIdeal,
    /// `e(Q / P)`.
    pub e: u32,
    pub m: u32,
    /// `N(P)`.
    pub residue_size: Int,
    pub beta: Int,
    /// Scaling element of `K` with `v_P(d) = -beta`, integral elsewhere.
    pub d: FieldElement,
    /// Residue system of `P^m` in `O_K`.
    pub residues: Vec<FieldElement>,
    /// Coefficients of `f` over `K`, constant first.
    pub coefficients: Vec<FieldElement>,
    /// `v_Q(g(c))`.
    pub g_valuation: i64,
    /// `v_Q(f(c))`.
    pub f_valuation: i64,
}

impl WitnessPolynomial {
    pub fn degree(&self) -> usize {
        self.residues.len()
    }

    /// The bound `e * beta - 1` on `v_Q(g(c))`.
    pub fn g_bound(&self) -> Int {
        Int::from(self.e) * &self.beta - 1
    }
}

/// Builds the witness polynomial for `c` outside the `Q`-adic closure of
/// `O_K`, using the least level `m` with `(c + Q^(e m)) ∩ O_K` empty.
pub fn build_witness(ext: &Extension, q: &PrimeIdeal, c: &FieldElement) -> Result<WitnessPolynomial> {
    if !c.field().same_as(ext.top()) {
        return Err(Error::FieldMismatch);
    }
    if !q.valuation(c)?.is_at_least(0) {
        return Err(Error::NotAWitnessCase("v_Q(c) < 0, so c already lies outside E_Q".into()));
    }
    if ext.group().is_some() && closure_member(ext, q, c)? {
        return Err(Error::NotAWitnessCase("c lies in the Q-adic closure of O_K".into()));
    }
    let ap = Approximator::new(ext.base(), q)?;
    let k0 = ap
        .failing_level(c)?
        .ok_or_else(|| Error::NotAWitnessCase("c is approximable at every level up to the cap".into()))?;
    let e = ap.relative_e();
    let m = k0.div_ceil(e);
    let k = ext.bottom();
    let below = contract(q, ext.base())?;
    let residues = residue_system(&below, m)?;
    let residue_size = below.norm();
    let b = beta(&residue_size, m);
    let bu = b.to_u64().ok_or_else(|| Error::ResourceCap(format!("beta = {b} is too large")))?;
    let d = below.anti_uniformizer().pow(bu);
    let g = product_polynomial(k, &residues);
    let coefficients: Vec<FieldElement> = g.iter().map(|x| x * &d).collect();
    let mut g_valuation = 0i64;
    for a in &residues {
        let diff = c - &ext.base().apply(a)?;
        g_valuation += q.valuation(&diff)?.finite().expect("c is not in K");
    }
    let d_val = q.valuation(&ext.base().apply(&d)?)?.finite().expect("d is non-zero");
    Ok(WitnessPolynomial {
        prime: q.clone(),
        prime_below: below,
        e,
        m,
        residue_size,
        beta: b,
        d,
        residues,
        coefficients,
        g_valuation,
        f_valuation: g_valuation + d_val,
    })
}

/// Independent re-check of a witness: `f ∈ Int(O_K)`, `v_Q(f(c)) < 0`,
/// `v_Q(g(c)) <= e beta - 1` and `deg f = N(P)^m`.
pub fn verify_witness(ext: &Extension, w: &WitnessPolynomial, c: &FieldElement) -> Result<bool> {
    let f_at_c = {
        let lifted = w
            .coefficients
            .iter()
            .map(|x| ext.base().apply(x))
            .collect::<Result<Vec<_>>>()?;
        FieldElement::eval_poly(&lifted, c)
    };
    let fv = w.prime.valuation(&f_at_c)?;
    let deg_ok = Int::from(w.coefficients.len() - 1) == num_traits::pow(w.residue_size.clone(), w.m as usize);
    Ok(deg_ok
        && fv < Valuation::Finite(0)
        && Int::from(w.g_valuation) <= w.g_bound()
        && int_membership(&w.coefficients, ext.bottom())?)
}

/// An element of `P` outside `P^2`.
pub fn uniformizer(prime: &PrimeIdeal) -> Result<FieldElement> {
    let field = prime.field();
    let p = FieldElement::from_int(field, Int::from(prime.p()));
    if prime.e() == 1 {
        return Ok(p);
    }
    let basis = prime.ideal().lattice_elements();
    for x in basis.iter().chain(std::iter::once(prime.generator())) {
        if prime.valuation(x)? == Valuation::Finite(1) {
            return Ok(x.clone());
        }
    }
    // some sum of two basis elements avoids P^2 when no single one does
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            let s = x + y;
            if prime.valuation(&s)? == Valuation::Finite(1) {
                return Ok(s);
            }
        }
    }
    Err(Error::ResourceCap(format!("no uniformizer found for {prime}")))
}

/// The first `n` terms of a `P`-ordering of `O_K`: the `i`-th term is
/// `sum_j r_(d_j) pi^j` where `d_j` are the base-`N(P)` digits of `i`.
pub fn p_ordering(prime: &PrimeIdeal, n: usize) -> Result<Vec<FieldElement>> {
    let field = prime.field();
    let reps = residue_system(prime, 1)?;
    let q = reps.len();
    let pi = uniformizer(prime)?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = FieldElement::zero(field);
        let mut pw = FieldElement::one(field);
        let mut rest = i;
        while rest > 0 {
            x = &x + &(&reps[rest % q] * &pw);
            pw = &pw * &pi;
            rest /= q;
        }
        out.push(x);
    }
    Ok(out)
}

/// Tests `f(O_K) ⊆ O_K` for `f` with coefficients in `K` (constant first).
/// Only primes dividing the common denominator matter. At such a prime `P`
/// a polynomial of degree `n` is `P`-integer-valued iff its values at the
/// first `n + 1` terms of a `P`-ordering are `P`-integral, since the
/// interpolation basis on those points is a regular basis of `Int(O_P)`.
pub fn int_membership(coeffs: &[FieldElement], field: &Arc<NumberField>) -> Result<bool> {
    for c in coeffs {
        if !c.field().same_as(field) {
            return Err(Error::FieldMismatch);
        }
    }
    let den = coeffs.iter().fold(Int::one(), |acc, c| acc.lcm(&c.denominator()));
    if den.is_one() {
        return Ok(true);
    }
    let g = cleared(coeffs, &den);
    for (p, _) in factor_int(&den)? {
        for prime in factor_prime(field, p)?.primes {
            let points = p_ordering(&prime, coeffs.len())?;
            let pts: Vec<Vec<Int>> = points.iter().map(|x| omega_or_zero(field, x)).collect();
            if !values_in_power(&prime, &g, &den, &pts) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn cleared(coeffs: &[FieldElement], den: &Int) -> Vec<Vec<Int>> {
    let dr = Rat::from_integer(den.clone());
    coeffs
        .iter()
        .map(|c| c.scale(&dr).omega_coords().expect("cleared"))
        .collect()
}

/// `g(r) ∈ P^(e v_p(D))` for every `r` in `points`.
fn values_in_power(prime: &PrimeIdeal, g: &[Vec<Int>], den: &Int, points: &[Vec<Int>]) -> bool {
    let field = prime.field();
    let k = prime.e() * int_valuation(den, prime.p());
    let power = prime.power(k);
    let modulus = num_traits::pow(Int::from(prime.p()), k.div_ceil(prime.e()) as usize);
    points.iter().all(|r| {
        let mut acc = vec![Int::zero(); field.degree()];
        for coeff in g.iter().rev() {
            acc = field.omega_mul_mod(&acc, r, &modulus);
            for (a, b) in acc.iter_mut().zip(coeff) {
                *a = (&*a + b).mod_floor(&modulus);
            }
        }
        power.contains_omega(&acc)
    })
}

/// Exhaustive variant of [`int_membership`] over a full residue system of
/// each relevant prime power; exponential, kept as a cross-check.
pub fn int_membership_exhaustive(coeffs: &[FieldElement], field: &Arc<NumberField>) -> Result<bool> {
    let den = coeffs.iter().fold(Int::one(), |acc, c| acc.lcm(&c.denominator()));
    if den.is_one() {
        return Ok(true);
    }
    let g = cleared(coeffs, &den);
    for (p, _) in factor_int(&den)? {
        for prime in factor_prime(field, p)?.primes {
            let k = prime.e() * int_valuation(&den, p);
            let power = prime.power(k);
            let reps = box_representatives(&power, RESIDUE_CAP).map_err(|e| match e {
                Error::ResourceCap(_) => Error::ResidueCapExceeded {
                    p,
                    k,
                    size: power.norm().to_integer(),
                    cap: RESIDUE_CAP,
                },
                other => other,
            })?;
            if !values_in_power(&prime, &g, &den, &reps) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which case of the image-overring classification applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverringKind {
    /// `c ∈ D`: the image is `D` itself.
    EqualsD,
    /// `c ∈ K \ D`: a localization of `D` at the primes where `c` is integral.
    StrictOverringOfD,
    /// `c ∈ F \ K`: a strict overring of `E = O_F`.
    StrictOverringOfE,
}

impl OverringKind {
    pub fn tag(self) -> &'static str {
        match self {
            OverringKind::EqualsD => "equals-D",
            OverringKind::StrictOverringOfD => "strict-overring-of-D",
            OverringKind::StrictOverringOfE => "strict-overring-of-E",
        }
    }
}

/// One examined prime of `F` and whether `c` lies in the closure there.
#[derive(Clone, Debug)]
pub struct PrimeFlag {
    pub prime: PrimeIdeal,
    pub member: bool,
}

/// Description of `Int(D)[c]`: the intersection of `E_Q` over the primes
/// `Q` flagged as members.
#[derive(Clone, Debug)]
pub struct OverringDescription {
    pub field: Arc<NumberField>,
    pub base: Arc<NumberField>,
    pub element: FieldElement,
    pub kind: OverringKind,
    /// For `StrictOverringOfD`: the primes of `K` where `v_P(c) < 0`.
    pub excluded: Vec<PrimeIdeal>,
    /// For `StrictOverringOfE`: flags for every prime above the scanned
    /// rational primes, ascending.
    pub flags: Vec<PrimeFlag>,
    pub primes_scanned: usize,
    /// Scanned rational primes skipped because they divide the index.
    pub skipped: Vec<u64>,
    pub budget: usize,
}

impl OverringDescription {
    pub fn non_members(&self) -> impl Iterator<Item = &PrimeIdeal> {
        self.flags.iter().filter(|f| !f.member).map(|f| &f.prime)
    }
}

fn generates_over_base(ext: &Extension, c: &FieldElement) -> bool {
    let l = ext.top();
    let rel = ext.base().relative_degree();
    let mut rows = Vec::new();
    let mut pw = FieldElement::one(l);
    for _ in 0..rel {
        for b in ext.base().omega_matrix().rows() {
            let x = FieldElement::from_omega(l, b);
            rows.push((&x * &pw).coords().to_vec());
        }
        pw = &pw * c;
    }
    RatMatrix::new(rows, l.degree()).rank() == l.degree()
}

/// Classifies `Int(D)[c]` for `D = O_K` and `c` in `F = K(c)` (the top of
/// `ext`). In the third case the closure flags of primes above the first
/// `budget` rational primes are listed; if none is a non-member the result
/// is `IncompleteCensus` carrying the description.
pub fn image_description(
    ext: &Extension,
    c: &FieldElement,
    budget: usize,
    exec: Execution,
) -> Result<OverringDescription> {
    if !c.field().same_as(ext.top()) {
        return Err(Error::FieldMismatch);
    }
    let base = ext.bottom().clone();
    let mut desc = OverringDescription {
        field: ext.top().clone(),
        base: base.clone(),
        element: c.clone(),
        kind: OverringKind::EqualsD,
        excluded: Vec::new(),
        flags: Vec::new(),
        primes_scanned: 0,
        skipped: Vec::new(),
        budget,
    };
    if let Some(ck) = ext.base().preimage(c)? {
        if ck.is_integral() {
            return Ok(desc);
        }
        desc.kind = OverringKind::StrictOverringOfD;
        let den = lcm_of_denominators(ck.omega_rat().iter());
        for (p, _) in factor_int(&den)? {
            for prime in factor_prime(&base, p)?.primes {
                if prime.valuation(&ck)? < Valuation::Finite(0) {
                    desc.excluded.push(prime);
                }
            }
        }
        return Ok(desc);
    }
    if !generates_over_base(ext, c) {
        return invalid("the top field must be generated by c over the base");
    }
    desc.kind = OverringKind::StrictOverringOfE;
    let l = ext.top();
    let primes = first_primes(budget);
    let per_prime = map_ordered(exec, &primes, |&p| -> Result<Option<Vec<PrimeFlag>>> {
        if (l.index() % p).is_zero() {
            return Ok(None);
        }
        let mut qs = factor_prime(l, p)?.primes;
        qs.sort_by(compare_primes);
        let mut out = Vec::with_capacity(qs.len());
        for q in qs {
            let member = match ext.group() {
                Some(_) => closure_member(ext, &q, c)?,
                None => Approximator::new(ext.base(), &q)?.failing_level(c)?.is_none(),
            };
            out.push(PrimeFlag { prime: q, member });
        }
        Ok(Some(out))
    });
    for (&p, r) in primes.iter().zip(per_prime) {
        match r? {
            None => desc.skipped.push(p),
            Some(flags) => desc.flags.extend(flags),
        }
    }
    desc.primes_scanned = primes.len();
    if desc.non_members().next().is_none() {
        return Err(Error::IncompleteCensus { primes_scanned: primes.len(), description: Box::new(desc) });
    }
    Ok(desc)
}
