use num_traits::{ToPrimitive, Zero};

use super::{FieldElement, FractionalIdeal};
use crate::arith::Int;
use crate::error::{invalid, Error, Result};
use crate::splitting::PrimeIdeal;

/// Representatives of `O / I` for an integral ideal `I`: the fundamental box
/// `{sum c_i omega_i : 0 <= c_i < h_ii}` of its HNF, in lexicographic order
/// (first coordinate most significant). Fails when the box has more than
/// `cap` points.
pub fn box_representatives(ideal: &FractionalIdeal, cap: u64) -> Result<Vec<Vec<Int>>> {
    if !ideal.is_integral() {
        return invalid("residue systems need an integral ideal");
    }
    let n = ideal.field().degree();
    let diag: Vec<Int> = (0..n).map(|i| ideal.hnf().get(i, i).clone()).collect();
    let size: Int = diag.iter().product();
    match size.to_u64() {
        Some(s) if s <= cap => {}
        _ => return Err(Error::ResourceCap(format!("residue system of size {size} exceeds {cap}"))),
    }
    let bounds: Vec<u64> = diag.iter().map(|d| d.to_u64().expect("bounded by cap")).collect();
    let mut out = Vec::with_capacity(size.to_usize().unwrap_or(0));
    let mut cur = vec![0u64; n];
    loop {
        out.push(cur.iter().map(|&c| Int::from(c)).collect());
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Default bound on the size of enumerated residue systems.
pub const RESIDUE_CAP: u64 = 1 << 20;

/// A complete system of residues of `O / P^m`, `N(P)^m` elements in a fixed
/// lexicographic order.
pub fn residue_system(prime: &PrimeIdeal, m: u32) -> Result<Vec<FieldElement>> {
    if m < 1 {
        return invalid("level m must be at least 1");
    }
    let power = prime.power(m);
    let reps = box_representatives(&power, RESIDUE_CAP).map_err(|e| match e {
        Error::ResourceCap(_) => Error::ResidueCapExceeded {
            p: prime.p(),
            k: m,
            size: power.norm().to_integer(),
            cap: RESIDUE_CAP,
        },
        other => other,
    })?;
    let field = prime.field();
    Ok(reps
        .iter()
        .map(|v| {
            if v.iter().all(|x| x.is_zero()) {
                FieldElement::zero(field)
            } else {
                FieldElement::from_omega(field, v)
            }
        })
        .collect())
}
