//! Fixed points of elliptic elements on `P^1(O/p)`, i.e. on the right cosets
//! `Gamma_0(p) \ PSL_2(O)`.

use super::matrix::Mat2;
use super::residue::{ProjPoint, Residue, ResidueField};
use crate::error::{Error, Result};
use crate::field::{FieldContext, PrimeIdealData};

pub fn reduce_matrix(k: &ResidueField, g: &Mat2) -> [Residue; 4] {
    [k.reduce(&g.a), k.reduce(&g.b), k.reduce(&g.c), k.reduce(&g.d)]
}

/// Cosets fixed by right multiplication with `g`: the `alpha` with
/// `c + (a - d) alpha - b alpha^2 = 0` in `O/p`, plus infinity when `b` is in `p`.
pub fn fixed_cosets(field: &FieldContext, g: &Mat2, prime: &PrimeIdealData) -> Result<Vec<ProjPoint>> {
    let k = ResidueField::new(field, prime);
    let [a, b, c, d] = reduce_matrix(&k, g);
    let amd = k.sub(a, d);
    if k.is_zero(b) && k.is_zero(c) && k.is_zero(amd) {
        return Err(Error::Hypothesis(format!("{g} is scalar modulo the prime of norm {}", prime.norm)));
    }
    let mut out: Vec<ProjPoint> = k
        .elements()
        .into_iter()
        .filter(|&x| {
            let v = k.sub(k.add(c, k.mul(amd, x)), k.mul(b, k.mul(x, x)));
            k.is_zero(v)
        })
        .map(ProjPoint::Finite)
        .collect();
    if k.is_zero(b) {
        out.push(ProjPoint::Infinity);
    }
    Ok(out)
}

/// Number of cosets of `Gamma_0(p)` fixed by `g`.
pub fn count_fixed_cosets(field: &FieldContext, g: &Mat2, prime: &PrimeIdealData) -> Result<u64> {
    fixed_cosets(field, g, prime).map(|v| v.len() as u64)
}

/// Matrix of `SL_2(O)` whose bottom row reduces to the given point.
pub fn coset_matrix(field: &FieldContext, k: &ResidueField, pt: ProjPoint) -> Mat2 {
    let disc = field.disc();
    match pt {
        ProjPoint::Finite(alpha) => {
            let one = crate::field::FieldElement::one(disc);
            let zero = crate::field::FieldElement::zero(disc);
            Mat2::new(one.clone(), zero, k.lift(disc, alpha), one)
        }
        ProjPoint::Infinity => Mat2::from_ints(disc, 0, -1, 1, 0),
    }
}

/// Bottom row of `h` as a point of `P^1(O/p)`.
pub fn bottom_row(k: &ResidueField, h: &Mat2) -> ProjPoint {
    k.projective(k.reduce(&h.c), k.reduce(&h.d))
}

/// Smallest point in the orbit of `pt` under powers of `g`.
pub fn orbit_min(k: &ResidueField, pt: ProjPoint, g: &Mat2) -> (ProjPoint, usize) {
    let m = reduce_matrix(k, g);
    let mut cur = pt;
    let mut best = pt;
    let mut len = 0;
    loop {
        cur = k.act_right(cur, m);
        len += 1;
        if cur < best {
            best = cur;
        }
        if cur == pt {
            return (best, len);
        }
    }
}
