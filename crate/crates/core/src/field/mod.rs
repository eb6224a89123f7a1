//! Number fields `K = Q[x]/(f)`, their rings of integers and ideals.

mod element;
mod embedding;
mod ideal;
pub(crate) mod order;
mod residue;

pub use element::FieldElement;
pub use embedding::SubfieldEmbedding;
pub(crate) use embedding::unit_vector;
pub use ideal::FractionalIdeal;
pub use residue::{box_representatives, residue_system, RESIDUE_CAP};

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::poly::euler_phi;
use crate::arith::zfactor::factor_monic_squarefree;
use crate::arith::{
    factor_mod_p, is_perfect_square, is_squarefree, parse_rat, squarefree_decomposition, FpPoly,
    Int, IntMatrix, Poly, Rat, RatMatrix,
};
use crate::error::{invalid, Error, Result};

/// Built-in families with a known integral basis and automorphism group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Rational,
    /// `Q(sqrt d)` with `d` squarefree.
    Quadratic { d: Int },
    /// `Q(zeta_m)` defined by the cyclotomic polynomial `Phi_m`.
    Cyclotomic { m: u64 },
    /// `x^4 + a x^2 + s^2`, a compositum of two quadratic fields.
    Biquadratic { s: Int },
    Other,
}

/// A number field together with a Z-basis of its ring of integers.
///
/// Elements are stored over the power basis `1, theta, ..., theta^(n-1)`;
/// lattice work uses coordinates over the integral basis `omega_i`.
pub struct NumberField {
    label: Option<String>,
    poly: Poly,
    poly_int: Vec<Int>,
    degree: usize,
    basis: RatMatrix,
    basis_inv: RatMatrix,
    structure: Vec<Vec<Vec<Int>>>,
    reduction: Vec<Vec<Rat>>,
    disc: Int,
    poly_disc: Int,
    index: Int,
    family: Family,
    power_basis_assumed: bool,
    automorphism_images: Option<Vec<Vec<Rat>>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("label", &self.label)
            .field("poly", &self.poly.to_string())
            .field("disc", &self.disc)
            .finish()
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "Q[x]/({})", self.poly),
        }
    }
}

/// On-disk description of a field (see the README for the format).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FieldSpec {
    pub defining_polynomial: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral_basis: Option<Vec<Vec<serde_json::Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphisms: Option<Vec<Vec<serde_json::Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn json_rat(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::Number(n) => parse_rat(&n.to_string()),
        serde_json::Value::String(s) => parse_rat(s),
        other => invalid(format!("expected a number or rational string, got {other}")),
    }
}

impl FieldSpec {
    pub fn from_json(text: &str) -> Result<FieldSpec> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("field spec: {e}")))
    }

    pub fn build(&self) -> Result<Arc<NumberField>> {
        let coeffs = self
            .defining_polynomial
            .iter()
            .map(json_rat)
            .collect::<Result<Vec<_>>>()?;
        let f = Poly::new(coeffs);
        let basis = match &self.integral_basis {
            None => None,
            Some(rows) => {
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(json_rat).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidBasis("integral basis must be square".into()));
                }
                Some(RatMatrix::new(rows, n))
            }
        };
        let auts = match &self.automorphisms {
            None => None,
            Some(list) => Some(
                list.iter()
                    .map(|r| r.iter().map(json_rat).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let mut field = build_field(&f, basis, self.label.clone())?;
        if let Some(a) = auts {
            let n = field.degree;
            let mut padded = Vec::with_capacity(a.len());
            for mut img in a {
                if img.len() > n {
                    return Err(Error::InvalidAutomorphism(format!(
                        "image has {} coordinates, field degree is {n}",
                        img.len()
                    )));
                }
                img.resize(n, Rat::zero());
                padded.push(img);
            }
            field.automorphism_images = Some(padded);
        }
        Ok(Arc::new(field))
    }
}

/// Builds a number field from a monic integer polynomial and an optional
/// integral basis (rows over the power basis).
pub fn make_field(f: &Poly, integral_basis: Option<RatMatrix>) -> Result<Arc<NumberField>> {
    build_field(f, integral_basis, None).map(Arc::new)
}

/// `make_field` with a display label.
pub fn make_labeled_field(
    f: &Poly,
    integral_basis: Option<RatMatrix>,
    label: &str,
) -> Result<Arc<NumberField>> {
    build_field(f, integral_basis, Some(label.to_string())).map(Arc::new)
}

/// The rationals, as the degree-one field `Q[x]/(x)`.
pub fn rationals() -> Arc<NumberField> {
    make_labeled_field(&Poly::x(), None, "Q").expect("x is irreducible")
}

/// `Q(sqrt d)` for a squarefree `d != 0, 1`, defined by a monogenic
/// polynomial so every prime is Kummer-Dedekind friendly.
pub fn quadratic_field(d: i64) -> Result<Arc<NumberField>> {
    let bd = Int::from(d);
    if d == 0 || d == 1 || is_squarefree(&bd, 1 << 20) != Some(true) {
        return invalid(format!("{d} is not a squarefree integer other than 0, 1"));
    }
    let f = if d.rem_euclid(4) == 1 {
        Poly::from_ints([-(d - 1) / 4, -1, 1])
    } else {
        Poly::from_ints([-d, 0, 1])
    };
    make_labeled_field(&f, None, &format!("Q(sqrt({d}))"))
}

/// `Q(zeta_m)` defined by `Phi_m`.
pub fn cyclotomic_field(m: u64) -> Result<Arc<NumberField>> {
    if m < 3 || m % 4 == 2 {
        return invalid(format!("use m >= 3, m != 2 mod 4 (got {m})"));
    }
    make_labeled_field(&Poly::cyclotomic(m), None, &format!("Q(zeta_{m})"))
}

fn build_field(f: &Poly, supplied: Option<RatMatrix>, label: Option<String>) -> Result<NumberField> {
    let Some(n) = f.degree().filter(|&d| d >= 1) else {
        return invalid("defining polynomial must have positive degree");
    };
    if !f.is_monic() {
        return invalid("defining polynomial must be monic");
    }
    let Some(poly_int) = f.int_coeffs() else {
        return invalid("defining polynomial must have integer coefficients");
    };
    if !is_irreducible(&poly_int) {
        return Err(Error::NotIrreducible);
    }
    let poly_disc = f.discriminant().to_integer();
    let reduction = power_reductions(&poly_int);
    let family = detect_family(f, &poly_int, &poly_disc);

    let mut power_basis_assumed = false;
    let was_supplied = supplied.is_some();
    let rows = match supplied {
        Some(b) => {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::InvalidBasis(format!("expected a {n} x {n} matrix")));
            }
            b.rows().to_vec()
        }
        None => match &family {
            Family::Rational | Family::Cyclotomic { .. } => identity_rows(n),
            Family::Quadratic { .. } => quadratic_basis(&poly_int)?,
            Family::Biquadratic { .. } => {
                let mul = |a: &[Rat], b: &[Rat]| mul_power(&reduction, a, b);
                let integral = |v: &[Rat]| charpoly_is_integral(&reduction, v);
                let mut rows = identity_rows(n);
                for (p, e) in crate::arith::factor_int(&poly_disc)? {
                    if e >= 2 {
                        rows = order::enlarge_at(rows, p, &mul, &integral);
                    }
                }
                rows
            }
            Family::Other => match is_squarefree(&poly_disc, 1_000_000) {
                Some(true) => {
                    power_basis_assumed = true;
                    identity_rows(n)
                }
                _ => return Err(Error::BasisRequired { disc: poly_disc }),
            },
        },
    };
    let rows = order::lower_hnf(&rows)
        .ok_or_else(|| Error::InvalidBasis("basis matrix is singular".into()))?;
    if rows[0][0] != Rat::one() {
        return Err(Error::InvalidBasis("lattice does not contain 1 as a primitive vector".into()));
    }
    let basis = RatMatrix::new(rows, n);
    let basis_inv = basis
        .inverse()
        .map_err(|_| Error::InvalidBasis("basis matrix is singular".into()))?;

    let mut field = NumberField {
        label,
        poly: f.clone(),
        poly_int,
        degree: n,
        basis,
        basis_inv,
        structure: Vec::new(),
        reduction,
        disc: Int::zero(),
        poly_disc,
        index: Int::one(),
        family,
        power_basis_assumed,
        automorphism_images: None,
    };
    field.structure = field.compute_structure()?;
    field.disc = field.trace_form_det();
    field.index = field.check_index()?;
    if was_supplied {
        field.check_maximality()?;
    }
    Ok(field)
}

fn identity_rows(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

/// Irreducibility over Q: degree patterns modulo small primes, then a full
/// factorization over Z when the patterns are inconclusive.
pub fn is_irreducible(f: &[Int]) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let disc = Poly::from_ints(f.iter().cloned()).discriminant();
    if disc.is_zero() {
        return false;
    }
    let disc = disc.to_integer();
    // possible degrees of a rational factor, intersected across primes
    let mut possible: Vec<bool> = (0..=n).map(|d| d > 0 && d < n).collect();
    let mut used = 0;
    for p in crate::arith::first_primes(200) {
        if (&disc % p).is_zero() {
            continue;
        }
        let fp = FpPoly::from_ints(p, f);
        let facs = factor_mod_p(&fp).expect("monic polynomial is non-zero");
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for (g, mult) in &facs {
            let d = g.degree().unwrap_or(0);
            for _ in 0..*mult {
                for s in (d..=n).rev() {
                    if sums[s - d] {
                        sums[s] = true;
                    }
                }
            }
        }
        for d in 0..=n {
            possible[d] &= sums[d];
        }
        if !possible.iter().any(|&b| b) {
            return true;
        }
        used += 1;
        if used == 25 {
            break;
        }
    }
    factor_monic_squarefree(f).len() == 1
}

/// `theta^(n+k) mod f` in power coordinates for `k = 0..n-1`.
fn power_reductions(f: &[Int]) -> Vec<Vec<Rat>> {
    let n = f.len() - 1;
    let mut cur: Vec<Rat> = f[..n].iter().map(|c| Rat::from_integer(-c)).collect();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(cur.clone());
        // multiply by theta
        let top = cur[n - 1].clone();
        let mut next = vec![Rat::zero(); n];
        for i in (1..n).rev() {
            next[i] = cur[i - 1].clone();
        }
        for i in 0..n {
            next[i] -= &top * Rat::from_integer(f[i].clone());
        }
        cur = next;
    }
    out
}

fn mul_power(reduction: &[Vec<Rat>], a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len();
    let mut prod = vec![Rat::zero(); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    let mut out: Vec<Rat> = prod[..n].to_vec();
    for (k, c) in prod[n..].iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(&reduction[k]) {
            *o += c * r;
        }
    }
    out
}

fn mult_matrix(reduction: &[Vec<Rat>], a: &[Rat]) -> RatMatrix {
    let n = a.len();
    let mut rows = Vec::with_capacity(n);
    let mut cur = a.to_vec();
    let mut theta = vec![Rat::zero(); n];
    if n > 1 {
        theta[1] = Rat::one();
    }
    for _ in 0..n {
        rows.push(cur.clone());
        cur = if n > 1 { mul_power(reduction, &cur, &theta) } else { vec![Rat::zero()] };
    }
    RatMatrix::new(rows, n)
}

fn charpoly_is_integral(reduction: &[Vec<Rat>], a: &[Rat]) -> bool {
    mult_matrix(reduction, a).charpoly().iter().all(|c| c.is_integer())
}

fn detect_family(f: &Poly, c: &[Int], disc: &Int) -> Family {
    let n = c.len() - 1;
    if n == 1 {
        return Family::Rational;
    }
    if n == 2 {
        if let Ok((_, d)) = squarefree_decomposition(disc) {
            return Family::Quadratic { d };
        }
        return Family::Other;
    }
    let bound = 2 * (n as u64) * (n as u64) + 2;
    for m in 3..=bound {
        if euler_phi(m) == n as u64 && m % 4 != 2 && Poly::cyclotomic(m) == *f {
            return Family::Cyclotomic { m };
        }
    }
    if n == 4 && c[1].is_zero() && c[3].is_zero() && is_perfect_square(&c[0]) {
        return Family::Biquadratic { s: c[0].sqrt() };
    }
    Family::Other
}

/// Integral basis of `Q[x]/(x^2 + b x + c)`: with `b^2 - 4c = k^2 d`, the
/// element `sqrt d = (2 theta + b)/k` and the usual `(1 + sqrt d)/2` when
/// `d = 1 mod 4`.
fn quadratic_basis(c: &[Int]) -> Result<Vec<Vec<Rat>>> {
    let b = &c[1];
    let disc = b * b - Int::from(4) * &c[0];
    let (k, d) = squarefree_decomposition(&disc)?;
    let two = Int::from(2);
    let sqrt_d = vec![Rat::new(b.clone(), k.clone()), Rat::new(two.clone(), k.clone())];
    let omega = if d.mod_floor(&Int::from(4)) == Int::one() {
        vec![(Rat::one() + &sqrt_d[0]) / Rat::from_integer(two.clone()), &sqrt_d[1] / Rat::from_integer(two)]
    } else {
        sqrt_d
    };
    Ok(vec![vec![Rat::one(), Rat::zero()], omega])
}

impl NumberField {
    fn compute_structure(&self) -> Result<Vec<Vec<Vec<Int>>>> {
        let n = self.degree;
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = mul_power(&self.reduction, self.basis.rows()[i].as_slice(), &self.basis.rows()[j]);
                let coords = self.basis_inv.left_apply(&prod);
                if coords.iter().any(|c| !c.is_integer()) {
                    return Err(Error::InvalidBasis(format!(
                        "product of basis elements {i} and {j} leaves the lattice"
                    )));
                }
                let v: Vec<Int> = coords.iter().map(|c| c.to_integer()).collect();
                table[i][j] = v.clone();
                table[j][i] = v;
            }
        }
        Ok(table)
    }

    fn trace_form_det(&self) -> Int {
        let n = self.degree;
        let traces: Vec<Rat> = (0..n)
            .map(|i| mult_matrix(&self.reduction, &self.basis.rows()[i]).trace())
            .collect();
        // Tr(omega_i omega_j) from the structure constants
        let mut m = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = self.structure[i][j]
                    .iter()
                    .zip(&traces)
                    .map(|(c, t)| Rat::from_integer(c.clone()) * t)
                    .sum();
            }
        }
        RatMatrix::new(m, n).det().to_integer()
    }

    fn check_index(&self) -> Result<Int> {
        for row in self.basis.rows() {
            if !charpoly_is_integral(&self.reduction, row) {
                return Err(Error::InvalidBasis("a basis element is not integral".into()));
            }
        }
        if self.disc.is_zero() || (&self.poly_disc % &self.disc) != Int::zero() {
            return Err(Error::InvalidBasis(format!(
                "disc(f) = {} is not a multiple of the lattice discriminant {}",
                self.poly_disc, self.disc
            )));
        }
        let ratio = &self.poly_disc / &self.disc;
        if ratio.is_negative() || !is_perfect_square(&ratio) {
            return Err(Error::InvalidBasis(format!(
                "disc(f) / disc(basis) = {ratio} is not a square"
            )));
        }
        Ok(ratio.sqrt())
    }

    /// No `(sum v_i omega_i)/p` is integral at any prime with `p^2 | disc`,
    /// checked exhaustively when the candidate count is small.
    fn check_maximality(&self) -> Result<()> {
        if self.degree == 1 {
            return Ok(());
        }
        let factors = match crate::arith::factor_int(&self.disc) {
            Ok(f) => f,
            Err(_) => return Ok(()),
        };
        let integral = |v: &[Rat]| charpoly_is_integral(&self.reduction, v);
        for (p, e) in factors {
            if e < 2 {
                continue;
            }
            let count = (p as f64).powi(self.degree as i32);
            if count > 65_536.0 {
                continue;
            }
            let rows = self.basis.rows().to_vec();
            if order::find_enlargement(&rows, p, &integral).is_some() {
                return Err(Error::InvalidBasis(format!("order is not maximal at {p}")));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn defining_polynomial(&self) -> &Poly {
        &self.poly
    }

    pub fn defining_coeffs(&self) -> &[Int] {
        &self.poly_int
    }

    /// Field discriminant (of the ring of integers).
    pub fn discriminant(&self) -> &Int {
        &self.disc
    }

    pub fn polynomial_discriminant(&self) -> &Int {
        &self.poly_disc
    }

    /// `[O_K : Z[theta]]`.
    pub fn index(&self) -> &Int {
        &self.index
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Set when the power basis was taken as integral because `disc(f)` is
    /// squarefree.
    pub fn power_basis_assumed(&self) -> bool {
        self.power_basis_assumed
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    /// Rows of the integral basis over the power basis.
    pub fn integral_basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub(crate) fn automorphism_images(&self) -> Option<&[Vec<Rat>]> {
        self.automorphism_images.as_deref()
    }

    /// Structural equality: same defining polynomial and integral basis.
    pub fn same_as(&self, other: &NumberField) -> bool {
        std::ptr::eq(self, other) || (self.poly_int == other.poly_int && self.basis == other.basis)
    }

    pub(crate) fn mul_coords(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        mul_power(&self.reduction, a, b)
    }

    pub(crate) fn mult_matrix(&self, a: &[Rat]) -> RatMatrix {
        mult_matrix(&self.reduction, a)
    }

    /// Power coordinates to integral-basis coordinates.
    pub fn to_omega(&self, a: &[Rat]) -> Vec<Rat> {
        self.basis_inv.left_apply(a)
    }

    /// Integral-basis coordinates to power coordinates.
    pub fn from_omega(&self, v: &[Int]) -> Vec<Rat> {
        let r: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
        self.basis.left_apply(&r)
    }

    /// Integral-basis coordinates of an integral element, or `None`.
    pub fn omega_coords(&self, a: &[Rat]) -> Option<Vec<Int>> {
        let v = self.to_omega(a);
        v.iter().all(|c| c.is_integer()).then(|| v.iter().map(|c| c.to_integer()).collect())
    }

    /// Product in integral-basis coordinates via the structure constants.
    pub fn omega_mul(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        let n = self.degree;
        let mut out = vec![Int::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (o, s) in out.iter_mut().zip(&self.structure[i][j]) {
                    if !s.is_zero() {
                        *o += &xy * s;
                    }
                }
            }
        }
        out
    }

    /// `omega_mul` with every coordinate reduced into `[0, m)`.
    pub fn omega_mul_mod(&self, a: &[Int], b: &[Int], m: &Int) -> Vec<Int> {
        self.omega_mul(a, b).into_iter().map(|x| x.mod_floor(m)).collect()
    }

    /// `a^e mod m` in integral-basis coordinates.
    pub fn omega_pow_mod(&self, a: &[Int], e: &num_bigint::BigUint, m: &Int) -> Vec<Int> {
        let mut acc = self.omega_one();
        let mut base: Vec<Int> = a.iter().map(|x| x.mod_floor(m)).collect();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.omega_mul_mod(&acc, &base, m);
            }
            if i + 1 < bits {
                base = self.omega_mul_mod(&base, &base, m);
            }
        }
        acc.into_iter().map(|x| x.mod_floor(m)).collect()
    }

    /// Integral-basis coordinates of 1 (the basis is normalised so
    /// `omega_0 = 1`).
    pub fn omega_one(&self) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.degree];
        v[0] = Int::one();
        v
    }

    /// Multiplication-by-`a` matrix acting on integral-basis row vectors.
    pub fn omega_mult_matrix(&self, a: &[Int]) -> IntMatrix {
        let n = self.degree;
        let rows = (0..n)
            .map(|i| {
                let mut e = vec![Int::zero(); n];
                e[i] = Int::one();
                self.omega_mul(&e, a)
            })
            .collect();
        IntMatrix::new(rows, n)
    }

    pub fn summary(&self) -> String {
        format!(
            "{} (degree {}, disc {}, index {})",
            self,
            self.degree,
            self.disc,
            self.index.to_u64().map_or_else(|| self.index.to_string(), |i| i.to_string())
        )
    }
}

/// Convenience: the field element `theta`.
pub fn generator(field: &Arc<NumberField>) -> FieldElement {
    let n = field.degree();
    let mut c = vec![Rat::zero(); n];
    if n > 1 {
        c[1] = Rat::one();
    } else {
        // theta is the root of the degree-one polynomial x + c0
        c[0] = Rat::from_integer(-field.defining_coeffs()[0].clone());
    }
    FieldElement::new(field, c)
}
