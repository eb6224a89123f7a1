//! Elementary (GE_2) reductions of unimodular pairs: a replay verifier,
//! Euclidean reducers for a table of norm-Euclidean rings and their
//! localizations, a bounded search, and the residue rings `Int(Z)/P`.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factor_int, lcm_of_denominators, round_half_toward_zero, Int, Poly, Rat};
use crate::closure::{closure_member, Approximator, Extension};
use crate::error::{invalid, Error, Result};
use crate::field::{make_field, quadratic_field, rationals, FieldElement, FractionalIdeal, NumberField};
use crate::intpoly::{image_description, OverringDescription, OverringKind};
use crate::par::Execution;
use crate::splitting::{factor_prime, PrimeIdeal};

/// Squarefree `d` for which the ring of integers of `Q(sqrt d)` is
/// norm-Euclidean and supported by the reducers.
pub const EUCLIDEAN_QUADRATIC: [i64; 9] = [-1, -2, -3, -7, -11, 2, 3, 5, 13];

/// Which entry an elementary operation changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `(a, b) -> (a + r b, b)`.
    First,
    /// `(a, b) -> (a, b + r a)`.
    Second,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::First => "first",
            Side::Second => "second",
        }
    }

    pub fn parse(s: &str) -> Result<Side> {
        match s {
            "first" => Ok(Side::First),
            "second" => Ok(Side::Second),
            other => invalid(format!("unknown side {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryOp {
    pub side: Side,
    pub multiplier: FieldElement,
}

impl ElementaryOp {
    pub fn new(side: Side, multiplier: FieldElement) -> Self {
        ElementaryOp { side, multiplier }
    }

    pub fn apply(&self, pair: &Pair) -> Pair {
        let (a, b) = pair;
        match self.side {
            Side::First => (a + &(&self.multiplier * b), b.clone()),
            Side::Second => (a.clone(), b + &(&self.multiplier * a)),
        }
    }
}

pub type Pair = (FieldElement, FieldElement);

/// The primes inverted in a localization of `O_F`.
#[derive(Clone, Debug)]
pub enum Inverted {
    /// A finite list of primes.
    Primes(Vec<PrimeIdeal>),
    /// Every prime `Q` at which `c` is outside the `Q`-adic closure of `Z`:
    /// the localization is then `Int(Z)[c]`.
    Closure { ext: Extension, element: FieldElement },
}

/// A ring in which pairs are reduced.
#[derive(Clone, Debug)]
pub enum RingHandle {
    /// The ring of integers `O_F`.
    Integers(Arc<NumberField>),
    /// `O_F` with some primes inverted.
    Localized { field: Arc<NumberField>, inverted: Inverted, name: String },
}

impl fmt::Display for RingHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingHandle::Integers(k) if k.is_rational() => write!(f, "Z"),
            RingHandle::Integers(k) => match quadratic_d(k) {
                Some(d) => write!(f, "O({d})"),
                None => write!(f, "O({k})"),
            },
            RingHandle::Localized { name, .. } => write!(f, "{name}"),
        }
    }
}

/// `d` with `F = Q(sqrt d)`, read off the discriminant.
fn quadratic_d(field: &NumberField) -> Option<i64> {
    if field.degree() != 2 {
        return None;
    }
    let disc = field.discriminant();
    let d = if (disc % 4i32).is_zero() { disc / 4i32 } else { disc.clone() };
    d.to_i64()
}

fn primes_above_all(field: &Arc<NumberField>, n: &Int) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for (p, _) in factor_int(n)? {
        out.extend(factor_prime(field, p)?.primes);
    }
    Ok(out)
}

impl RingHandle {
    pub fn integers(field: &Arc<NumberField>) -> Self {
        RingHandle::Integers(field.clone())
    }

    /// `O_F[1/n]`: every prime above a divisor of `n` is inverted.
    pub fn invert_integer(field: &Arc<NumberField>, n: &Int) -> Result<Self> {
        if n.is_zero() {
            return invalid("cannot invert zero");
        }
        let base = RingHandle::Integers(field.clone()).to_string();
        Ok(RingHandle::Localized {
            field: field.clone(),
            inverted: Inverted::Primes(primes_above_all(field, &n.abs())?),
            name: format!("{base}[1/{}]", n.abs()),
        })
    }

    /// Parses `Z`, `Z[i]`, `Z[sqrtD]`, `O(d)`, any of these followed by
    /// `[1/N]`, or `Int(Z)/(c0,c1,...)` for the residue ring modulo an
    /// irreducible polynomial (coefficients constant first).
    pub fn parse(spec: &str) -> Result<RingHandle> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = s.strip_prefix("Int(Z)/(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::InvalidArgument(format!("unbalanced ring spec {spec:?}")))?;
            let coeffs = inner.split(',').map(crate::arith::parse_rat).collect::<Result<Vec<_>>>()?;
            return Ok(residue_ring(&Poly::new(coeffs), 0, Execution::default())?.handle);
        }
        let (head, inv) = match s.find("[1/") {
            Some(i) if s.ends_with(']') => (&s[..i], Some(&s[i + 3..s.len() - 1])),
            _ => (s.as_str(), None),
        };
        let field = if head == "Z" {
            rationals()
        } else if head == "Z[i]" {
            quadratic_field(-1)?
        } else if let Some(d) = head.strip_prefix("Z[sqrt").and_then(|r| r.strip_suffix(']')) {
            let d: i64 = d.parse().map_err(|_| Error::InvalidArgument(format!("bad radicand in {spec:?}")))?;
            if d.rem_euclid(4) == 1 {
                return invalid(format!("Z[sqrt{d}] is not integrally closed; use O({d})"));
            }
            quadratic_field(d)?
        } else if let Some(d) = head.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let d: i64 = d.parse().map_err(|_| Error::InvalidArgument(format!("bad discriminant in {spec:?}")))?;
            quadratic_field(d)?
        } else {
            return invalid(format!("unrecognised ring {spec:?}"));
        };
        match inv {
            None => Ok(RingHandle::Integers(field)),
            Some(n) => {
                let n: Int = n.parse().map_err(|_| Error::InvalidArgument(format!("bad localization in {spec:?}")))?;
                let mut h = RingHandle::invert_integer(&field, &n)?;
                if let RingHandle::Localized { name, .. } = &mut h {
                    *name = format!("{head}[1/{n}]");
                }
                Ok(h)
            }
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        match self {
            RingHandle::Integers(f) => f,
            RingHandle::Localized { field, .. } => field,
        }
    }

    /// The underlying ring of integers is in the norm-Euclidean table.
    pub fn has_euclidean_base(&self) -> bool {
        let f = self.field();
        f.is_rational() || quadratic_d(f).is_some_and(|d| EUCLIDEAN_QUADRATIC.contains(&d))
    }

    pub fn inverts(&self, q: &PrimeIdeal) -> Result<bool> {
        match self {
            RingHandle::Integers(_) => Ok(false),
            RingHandle::Localized { inverted: Inverted::Primes(ps), .. } => Ok(ps.iter().any(|p| p == q)),
            RingHandle::Localized { inverted: Inverted::Closure { ext, element }, .. } => match ext.group() {
                Some(_) => Ok(!closure_member(ext, q, element)?),
                None => Ok(Approximator::new(ext.base(), q)?.failing_level(element)?.is_some()),
            },
        }
    }

    /// Primes of `F` where `x` has negative valuation.
    fn poles(&self, x: &FieldElement) -> Result<Vec<PrimeIdeal>> {
        let den = x.denominator();
        if den.is_one() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for q in primes_above_all(self.field(), &den)? {
            if q.valuation(x)?.finite().is_some_and(|v| v < 0) {
                out.push(q);
            }
        }
        Ok(out)
    }

    pub fn contains(&self, x: &FieldElement) -> Result<bool> {
        if !x.field().same_as(self.field()) {
            return Err(Error::FieldMismatch);
        }
        match self {
            RingHandle::Integers(_) => Ok(x.is_integral()),
            RingHandle::Localized { .. } => {
                for q in self.poles(x)? {
                    if !self.inverts(&q)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn require(&self, x: &FieldElement) -> Result<()> {
        if self.contains(x)? {
            Ok(())
        } else {
            Err(Error::NotInRing(format!("{x} is not in {self}")))
        }
    }

    pub fn is_unit(&self, x: &FieldElement) -> Result<bool> {
        if x.is_zero() {
            return Ok(false);
        }
        Ok(self.contains(x)? && self.contains(&x.inverse()?)?)
    }
}

/// `(a, b)` generates the unit ideal of `R`, decided from the prime
/// factorization of the ideal `a O_F + b O_F`.
pub fn is_unimodular(pair: &Pair, ring: &RingHandle) -> Result<bool> {
    let (a, b) = pair;
    ring.require(a)?;
    ring.require(b)?;
    if a.is_zero() && b.is_zero() {
        return Ok(false);
    }
    let field = ring.field();
    let ideal = FractionalIdeal::from_generators(field, &[a.clone(), b.clone()])?;
    match ring {
        RingHandle::Integers(_) => Ok(ideal == FractionalIdeal::unit(field)),
        RingHandle::Localized { .. } => {
            // every prime with positive valuation on the ideal divides the
            // norm of its integral multiple
            let s = ideal.denominator().clone();
            let n = ideal.norm() * Rat::from_integer(num_traits::pow(s, field.degree()));
            let n = n.to_integer();
            if n.is_one() {
                return Ok(true);
            }
            for q in primes_above_all(field, &n)? {
                let v = q.valuation(a)?.min(q.valuation(b)?);
                if v.finite().is_some_and(|v| v > 0) && !ring.inverts(&q)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

pub fn apply_ops(pair: &Pair, ops: &[ElementaryOp]) -> Pair {
    ops.iter().fold(pair.clone(), |p, op| op.apply(&p))
}

/// A start pair, the operations applied to it and the claimed end pair.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub ring: RingHandle,
    pub start: Pair,
    pub ops: Vec<ElementaryOp>,
    pub end: Pair,
}

impl ReductionTrace {
    fn new(ring: &RingHandle, start: &Pair, ops: Vec<ElementaryOp>) -> Self {
        let end = apply_ops(start, &ops);
        ReductionTrace { ring: ring.clone(), start: start.clone(), ops, end }
    }

    /// Intermediate pairs, start and end included.
    pub fn states(&self) -> Vec<Pair> {
        let mut out = vec![self.start.clone()];
        for op in &self.ops {
            let next = op.apply(out.last().expect("non-empty"));
            out.push(next);
        }
        out
    }
}

fn is_one_zero(p: &Pair) -> bool {
    p.0.is_one() && p.1.is_zero()
}

/// Replays the trace: the start pair is unimodular, every multiplier lies
/// in the ring, replay reproduces the stored end pair, and that pair is
/// `(1, 0)`.
pub fn verify_reduction(trace: &ReductionTrace) -> Result<bool> {
    let ring = &trace.ring;
    match is_unimodular(&trace.start, ring) {
        Ok(true) => {}
        Ok(false) | Err(Error::NotInRing(_)) => return Ok(false),
        Err(e) => return Err(e),
    }
    for op in &trace.ops {
        if !op.multiplier.field().same_as(ring.field()) || !ring.contains(&op.multiplier)? {
            return Ok(false);
        }
    }
    let end = apply_ops(&trace.start, &trace.ops);
    Ok(end == trace.end && is_one_zero(&end))
}

/// Operations taking `(u, 0)` or `(0, u)` with `u` a unit to `(1, 0)`:
/// `(u,0) -> (u,1) -> (1,1) -> (1,0)` and `(0,u) -> (1,u) -> (1,0)`.
pub fn unit_fixup(pair: &Pair) -> Result<Vec<ElementaryOp>> {
    let (a, b) = pair;
    let field = a.field();
    let one = FieldElement::one(field);
    if b.is_zero() {
        if a.is_one() {
            return Ok(Vec::new());
        }
        let inv = a.inverse()?;
        Ok(vec![
            ElementaryOp::new(Side::Second, inv),
            ElementaryOp::new(Side::First, &one - a),
            ElementaryOp::new(Side::Second, -&one),
        ])
    } else if a.is_zero() {
        Ok(vec![ElementaryOp::new(Side::First, b.inverse()?), ElementaryOp::new(Side::Second, -b)])
    } else {
        invalid("unit fix-up needs a pair with a zero entry")
    }
}

fn abs_norm(x: &FieldElement) -> Rat {
    x.norm().abs()
}

/// A quotient `q` with `|N(a - q b)| < |N(b)|`. Rational integers use
/// truncating division; quadratic rings round integral-basis coordinates
/// (ties toward zero) and fall back to the neighbouring lattice points.
pub fn euclidean_quotient(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    let field = a.field();
    let exact = a.div(b)?;
    if field.is_rational() {
        let r = exact.coords()[0].trunc();
        return Ok(FieldElement::from_rat(field, r));
    }
    let w = exact.omega_rat();
    let base: Vec<Int> = w.iter().map(round_half_toward_zero).collect();
    let nb = abs_norm(b);
    let q0 = FieldElement::from_omega(field, &base);
    if abs_norm(&(a - &(&q0 * b))) < nb {
        return Ok(q0);
    }
    let n = field.degree();
    let mut best: Option<(Rat, FieldElement)> = None;
    for mask in 0..3usize.pow(n as u32) {
        let mut m = mask;
        let mut v = base.clone();
        for x in v.iter_mut() {
            *x += Int::from(m % 3) - 1;
            m /= 3;
        }
        let q = FieldElement::from_omega(field, &v);
        let r = abs_norm(&(a - &(&q * b)));
        if best.as_ref().is_none_or(|(bn, _)| r < *bn) {
            best = Some((r, q));
        }
    }
    match best {
        Some((r, q)) if r < nb => Ok(q),
        _ => Err(Error::UnsupportedRing(format!("{field} is not norm-Euclidean at this pair"))),
    }
}

/// Euclidean steps on integral `(a, b)` until one entry vanishes.
fn euclid_ops(pair: &Pair) -> Result<(Vec<ElementaryOp>, Pair)> {
    let (mut a, mut b) = pair.clone();
    let mut ops = Vec::new();
    while !a.is_zero() && !b.is_zero() {
        if abs_norm(&a) >= abs_norm(&b) {
            let q = euclidean_quotient(&a, &b)?;
            let op = ElementaryOp::new(Side::First, -&q);
            a = &a - &(&q * &b);
            ops.push(op);
        } else {
            let q = euclidean_quotient(&b, &a)?;
            let op = ElementaryOp::new(Side::Second, -&q);
            b = &b - &(&q * &a);
            ops.push(op);
        }
    }
    Ok((ops, (a, b)))
}

fn check_pair(pair: &Pair, ring: &RingHandle) -> Result<()> {
    if !pair.0.field().same_as(ring.field()) || !pair.1.field().same_as(ring.field()) {
        return Err(Error::FieldMismatch);
    }
    if !is_unimodular(pair, ring)? {
        return Err(Error::NotUnimodular);
    }
    Ok(())
}

/// Euclidean reduction in a ring of integers from the table.
pub fn reduce_euclidean(pair: &Pair, ring: &RingHandle) -> Result<ReductionTrace> {
    if !matches!(ring, RingHandle::Integers(_)) || !ring.has_euclidean_base() {
        return Err(Error::UnsupportedRing(format!("{ring} is not in the Euclidean table")));
    }
    check_pair(pair, ring)?;
    let (mut ops, end) = euclid_ops(pair)?;
    ops.extend(unit_fixup(&end)?);
    Ok(ReductionTrace::new(ring, pair, ops))
}

/// Reduction in a localization of a Euclidean ring of integers: clear
/// denominators, run Euclid on the integral pair, and replay the same
/// operations on the original pair, which ends at a unit of the ring.
pub fn reduce_localized(pair: &Pair, ring: &RingHandle) -> Result<ReductionTrace> {
    if !ring.has_euclidean_base() {
        return Err(Error::UnsupportedRing(format!("{ring} is not a localization of a Euclidean ring")));
    }
    check_pair(pair, ring)?;
    let s = lcm_of_denominators(pair.0.omega_rat().iter().chain(pair.1.omega_rat().iter()));
    let sr = Rat::from_integer(s);
    let cleared = (pair.0.scale(&sr), pair.1.scale(&sr));
    let (mut ops, _) = euclid_ops(&cleared)?;
    let mid = apply_ops(pair, &ops);
    let unit = if mid.1.is_zero() { &mid.0 } else { &mid.1 };
    if !ring.is_unit(unit)? {
        return Err(Error::NotUnimodular);
    }
    ops.extend(unit_fixup(&mid)?);
    Ok(ReductionTrace::new(ring, pair, ops))
}

/// Dispatches to the Euclidean or localized reducer.
pub fn reduce(pair: &Pair, ring: &RingHandle) -> Result<ReductionTrace> {
    match ring {
        RingHandle::Integers(_) => reduce_euclidean(pair, ring),
        RingHandle::Localized { .. } => reduce_localized(pair, ring),
    }
}

/// Trace for `(u a, u b)` obtained from a trace for `(a, b)`: the same
/// operations end at `(u, 0)`, followed by a fresh unit fix-up.
pub fn scale_trace(trace: &ReductionTrace, u: &FieldElement) -> Result<ReductionTrace> {
    if !trace.ring.is_unit(u)? {
        return invalid("scaling element must be a unit of the ring");
    }
    let start = (u * &trace.start.0, u * &trace.start.1);
    let mut ops = trace.ops.clone();
    let mid = apply_ops(&start, &ops);
    ops.extend(unit_fixup(&mid)?);
    Ok(ReductionTrace::new(&trace.ring, &start, ops))
}

/// Outcome of [`bounded_search`]. `NotFound` is not a proof that the pair
/// is irreducible.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(ReductionTrace),
    NotFound { states_explored: usize },
}

fn height(x: &FieldElement) -> Int {
    x.omega_rat()
        .iter()
        .map(|c| c.numer().abs().max(c.denom().clone()))
        .max()
        .unwrap_or_else(Int::zero)
}

/// Roots of unity in `O_F` (elements of height at most one and order
/// dividing 12, which covers every quadratic field).
pub fn roots_of_unity(field: &Arc<NumberField>) -> Vec<FieldElement> {
    let n = field.degree();
    let mut out = Vec::new();
    for mask in 0..3usize.pow(n as u32) {
        let mut m = mask;
        let v: Vec<Int> = (0..n)
            .map(|_| {
                let d = Int::from(m % 3) - 1;
                m /= 3;
                d
            })
            .collect();
        let x = FieldElement::from_omega(field, &v);
        if !x.is_zero() && x.pow(12).is_one() {
            out.push(x);
        }
    }
    out
}

fn state_key(p: &Pair) -> Vec<Rat> {
    p.0.omega_rat().into_iter().chain(p.1.omega_rat()).collect()
}

/// Breadth-first search over elementary operations with integral
/// multipliers of height at most `height`, for at most `depth` operations
/// before the unit fix-up. States whose entries exceed both `height` and
/// the start height are pruned; states are identified up to roots of unity.
pub fn bounded_search(
    pair: &Pair,
    ring: &RingHandle,
    depth: usize,
    height_bound: u64,
    cap: usize,
) -> Result<SearchOutcome> {
    check_pair(pair, ring)?;
    let field = ring.field();
    let n = field.degree();
    let h = height_bound as i64;
    let width = (2 * h + 1) as usize;
    let mut multipliers = Vec::new();
    for mask in 0..width.pow(n as u32) {
        let mut m = mask;
        let v: Vec<Int> = (0..n)
            .map(|_| {
                let d = Int::from((m % width) as i64 - h);
                m /= width;
                d
            })
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            multipliers.push(FieldElement::from_omega(field, &v));
        }
    }
    let roots = roots_of_unity(field);
    let canonical = |p: &Pair| -> Vec<Rat> {
        roots
            .iter()
            .map(|z| state_key(&(z * &p.0, z * &p.1)))
            .min()
            .expect("1 is a root of unity")
    };
    let limit = Int::from(height_bound).max(height(&pair.0).max(height(&pair.1)));
    let is_goal = |p: &Pair| -> Result<bool> {
        Ok((p.1.is_zero() && ring.is_unit(&p.0)?) || (p.0.is_zero() && ring.is_unit(&p.1)?))
    };
    let finish = |p: &Pair, mut ops: Vec<ElementaryOp>| -> Result<SearchOutcome> {
        ops.extend(unit_fixup(&apply_ops(p, &ops))?);
        Ok(SearchOutcome::Found(ReductionTrace::new(ring, p, ops)))
    };
    if is_goal(pair)? {
        return finish(pair, Vec::new());
    }
    let mut visited: HashSet<Vec<Rat>> = HashSet::new();
    visited.insert(canonical(pair));
    let mut frontier: Vec<(Pair, Vec<ElementaryOp>)> = vec![(pair.clone(), Vec::new())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (state, path) in &frontier {
            for side in [Side::First, Side::Second] {
                for r in &multipliers {
                    let op = ElementaryOp::new(side, r.clone());
                    let s = op.apply(state);
                    if height(&s.0) > limit || height(&s.1) > limit {
                        continue;
                    }
                    if !visited.insert(canonical(&s)) {
                        continue;
                    }
                    if visited.len() > cap {
                        return Err(Error::SearchCap { cap });
                    }
                    let mut p = path.clone();
                    p.push(op);
                    if is_goal(&s)? {
                        return finish(pair, p);
                    }
                    next.push((s, p));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(SearchOutcome::NotFound { states_explored: visited.len() })
}

/// The ring `Int(Z)/P` for `P = Int(Z) ∩ f Q[x]`, realised as `Int(Z)[c]`
/// for a root `c` of `f`.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    pub handle: RingHandle,
    /// The class of `x`.
    pub c: FieldElement,
    pub kind: OverringKind,
    /// Closure flags over the first primes (third case only).
    pub description: Option<OverringDescription>,
}

impl ResidueRing {
    /// The element of `F` represented by a rational polynomial in `c`.
    pub fn element(&self, g: &Poly) -> FieldElement {
        self.c.eval_rat_poly(g)
    }
}

/// Identifies `Int(Z)/P` for an irreducible `f ∈ Q[x]`. The description
/// census uses the first `budget` primes (0 skips it).
pub fn residue_ring(f: &Poly, budget: usize, exec: Execution) -> Result<ResidueRing> {
    let Some(deg) = f.degree().filter(|&d| d >= 1) else {
        return invalid("f must have positive degree");
    };
    let h = f.monic();
    if deg == 1 {
        let q = rationals();
        let cval = -h.coeff(0);
        let c = FieldElement::from_rat(&q, cval.clone());
        if cval.is_integer() {
            return Ok(ResidueRing { handle: RingHandle::Integers(q), c, kind: OverringKind::EqualsD, description: None });
        }
        let den = cval.denom().clone();
        let handle = RingHandle::Localized {
            field: q.clone(),
            inverted: Inverted::Primes(primes_above_all(&q, &den)?),
            name: format!("Z[1/{den}]"),
        };
        return Ok(ResidueRing { handle, c, kind: OverringKind::StrictOverringOfD, description: None });
    }
    // c = theta / s where theta is a root of the monic integral s^n h(x/s)
    let s = lcm_of_denominators(h.coeffs().iter());
    let scaled: Vec<Rat> = h
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| a * Rat::from_integer(num_traits::pow(s.clone(), deg - i)))
        .collect();
    let field = make_field(&Poly::new(scaled), None)?;
    let c = crate::field::generator(&field).scale(&Rat::new(Int::one(), s));
    let ext = Extension::over_rationals(&field)?;
    let handle = RingHandle::Localized {
        field: field.clone(),
        inverted: Inverted::Closure { ext: ext.clone(), element: c.clone() },
        name: format!("Int(Z)[{}]", f.display_var("x")),
    };
    if !handle.has_euclidean_base() {
        return Err(Error::UnsupportedRing(format!(
            "the ring of integers of {field} is not in the Euclidean table"
        )));
    }
    let description = if budget == 0 {
        None
    } else {
        match image_description(&ext, &c, budget, exec) {
            Ok(d) => Some(d),
            Err(Error::IncompleteCensus { description, .. }) => Some(*description),
            Err(e) => return Err(e),
        }
    };
    Ok(ResidueRing { handle, c, kind: OverringKind::StrictOverringOfE, description })
}

/// Reduces a pair of `Int(Z)/P`, given as rational polynomials in the class
/// of `x`.
pub fn reduce_residue_ring(f: &Poly, pair: (&Poly, &Poly)) -> Result<(ResidueRing, ReductionTrace)> {
    let rr = residue_ring(f, 0, Execution::default())?;
    let p = (rr.element(pair.0), rr.element(pair.1));
    let trace = reduce(&p, &rr.handle)?;
    Ok((rr, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_pair(a: i64, b: i64) -> Pair {
        let q = rationals();
        (FieldElement::from_ints(&q, &[a]), FieldElement::from_ints(&q, &[b]))
    }

    fn ints(t: &ReductionTrace) -> Vec<(i64, i64)> {
        t.states()
            .iter()
            .map(|(a, b)| (a.coords()[0].to_integer().to_i64().unwrap(), b.coords()[0].to_integer().to_i64().unwrap()))
            .collect()
    }

    #[test]
    fn golden_integer_trace() {
        let z = RingHandle::parse("Z").unwrap();
        let t = reduce(&z_pair(5, 3), &z).unwrap();
        assert_eq!(ints(&t), vec![(5, 3), (2, 3), (2, 1), (0, 1), (1, 1), (1, 0)]);
        assert!(verify_reduction(&t).unwrap());
        assert!(reduce(&z_pair(1, 0), &z).unwrap().ops.is_empty());
    }

    #[test]
    fn unimodularity() {
        let z = RingHandle::parse("Z").unwrap();
        let z2 = RingHandle::parse("Z[1/2]").unwrap();
        assert!(is_unimodular(&z_pair(5, 3), &z).unwrap());
        assert!(!is_unimodular(&z_pair(2, 4), &z).unwrap());
        assert!(is_unimodular(&z_pair(2, 4), &z2).unwrap());
        assert!(is_unimodular(&z_pair(0, 1), &z).unwrap());
        let q = rationals();
        let third = FieldElement::from_rat(&q, Rat::new(Int::one(), Int::from(3)));
        assert!(matches!(is_unimodular(&(third, FieldElement::one(&q)), &z2), Err(Error::NotInRing(_))));
    }

    #[test]
    fn localized_fixup() {
        let z2 = RingHandle::parse("Z[1/2]").unwrap();
        let t = reduce(&z_pair(2, 0), &z2).unwrap();
        assert_eq!(ints(&t), vec![(2, 0), (2, 1), (1, 1), (1, 0)]);
        let q = rationals();
        let p = (FieldElement::from_rat(&q, Rat::new(Int::from(3), Int::from(2))), FieldElement::from_ints(&q, &[5]));
        assert!(verify_reduction(&reduce(&p, &z2).unwrap()).unwrap());
        let z6 = RingHandle::parse("Z[1/6]").unwrap();
        assert!(verify_reduction(&reduce(&z_pair(2, 3), &z6).unwrap()).unwrap());
    }

    #[test]
    fn gaussian_reduction_and_mutation() {
        let r = RingHandle::parse("Z[i]").unwrap();
        let f = r.field().clone();
        let p = (FieldElement::from_ints(&f, &[2, 1]), FieldElement::from_ints(&f, &[1, -1]));
        let t = reduce(&p, &r).unwrap();
        assert!(verify_reduction(&t).unwrap());
        let mut bad = t.clone();
        bad.ops[0].multiplier = &bad.ops[0].multiplier + &FieldElement::one(&f);
        assert!(!verify_reduction(&bad).unwrap());
        let i = FieldElement::from_ints(&f, &[0, 1]);
        assert!(verify_reduction(&scale_trace(&t, &i).unwrap()).unwrap());
    }

    #[test]
    fn hard_rings_need_the_window() {
        for spec in ["O(-7)", "O(-11)", "O(13)", "Z[sqrt-2]"] {
            let r = RingHandle::parse(spec).unwrap();
            let f = r.field().clone();
            let p = (FieldElement::from_ints(&f, &[37, 11]), FieldElement::from_ints(&f, &[5, 3]));
            if is_unimodular(&p, &r).unwrap() {
                assert!(verify_reduction(&reduce(&p, &r).unwrap()).unwrap(), "{spec}");
            }
        }
        assert!(matches!(
            reduce(&z_pair(2, 4), &RingHandle::parse("Z").unwrap()),
            Err(Error::NotUnimodular)
        ));
    }

    #[test]
    fn search_finds_integer_trace() {
        let z = RingHandle::parse("Z").unwrap();
        match bounded_search(&z_pair(5, 3), &z, 6, 2, 100_000).unwrap() {
            SearchOutcome::Found(t) => assert!(verify_reduction(&t).unwrap()),
            other => panic!("{other:?}"),
        }
        match bounded_search(&z_pair(1, 0), &z, 1, 1, 10).unwrap() {
            SearchOutcome::Found(t) => assert!(t.ops.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn residue_rings() {
        let (rr, t) = reduce_residue_ring(&Poly::from_ints([1, 0, 1]), (&Poly::x(), &Poly::from_ints([2]))).unwrap();
        assert_eq!(rr.kind, OverringKind::StrictOverringOfE);
        assert!(verify_reduction(&t).unwrap());
        let (rr, t) = reduce_residue_ring(&Poly::from_ints([-1, 2]), (&Poly::from_ints([1]), &Poly::from_ints([3]))).unwrap();
        assert_eq!(rr.kind, OverringKind::StrictOverringOfD);
        assert!(verify_reduction(&t).unwrap());
        let (rr, t) = reduce_residue_ring(&Poly::from_ints([-3, 1]), (&Poly::x(), &Poly::from_ints([2]))).unwrap();
        assert_eq!(rr.kind, OverringKind::EqualsD);
        assert!(verify_reduction(&t).unwrap());
        assert!(matches!(
            residue_ring(&Poly::from_ints([5, 0, 1]), 0, Execution::Sequential),
            Err(Error::UnsupportedRing(_))
        ));
    }
}
