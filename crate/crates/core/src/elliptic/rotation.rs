//! Exact rotation types of elliptic elements.
//!
//! For `g` with totally positive determinant `delta` and trace `t`, the
//! rotation angle `2 theta_j` at the fixed point in the `j`-th factor satisfies
//! `cos 2theta_j = sigma_j(t^2 / (2 delta)) - 1` and
//! `sign sin 2theta_j = sign(sigma_j c) * sign(sigma_j t)`. The cosine lies in
//! `E`, so it is matched exactly against the finitely many `cos(2 pi k / n)`
//! that lie in `E`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::matrix::Mat2;
use crate::error::{Error, Result};
use crate::field::FieldElement;

/// Rotation type `(n; 1, b)` with `b` reduced to `(-n/2, n/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RotationType {
    pub n: u32,
    pub a: i32,
    pub b: i32,
}

impl RotationType {
    pub fn new(n: u32, b: i64) -> Self {
        let n_i = n as i64;
        let mut b = b.rem_euclid(n_i);
        if 2 * b > n_i {
            b -= n_i;
        }
        RotationType { n, a: 1, b: b as i32 }
    }

    /// `+` for `(n;1,1)`, `-` for `(n;1,-1)` (same thing when `n = 2`).
    pub fn label(&self) -> String {
        format!("({};{},{})", self.n, self.a, self.b)
    }
}

impl fmt::Display for RotationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `(U + V sqrt D) / (2 den)`, den > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
struct QuadRational {
    u: BigInt,
    v: BigInt,
    den: BigInt,
}

impl QuadRational {
    fn conj(&self) -> Self {
        QuadRational { u: self.u.clone(), v: -&self.v, den: self.den.clone() }
    }

    fn same(&self, o: &QuadRational) -> bool {
        &self.u * &o.den == &o.u * &self.den && &self.v * &o.den == &o.v * &self.den
    }
}

/// `cos(2 pi k/n)` values that can lie in `Q(sqrt D)`.
fn cos_table(disc: i64) -> Vec<(u32, u32, QuadRational)> {
    let q = |u: i64, v: i64, den: i64| QuadRational { u: u.into(), v: v.into(), den: den.into() };
    let mut t = vec![
        (2, 1, q(-2, 0, 1)),
        (3, 1, q(-1, 0, 1)),
        (3, 2, q(-1, 0, 1)),
        (4, 1, q(0, 0, 1)),
        (4, 3, q(0, 0, 1)),
        (6, 1, q(1, 0, 1)),
        (6, 5, q(1, 0, 1)),
    ];
    if disc == 5 {
        // cos(2pi/5) = (sqrt5 - 1)/4, cos(4pi/5) = -(sqrt5 + 1)/4
        t.extend([
            (5, 1, q(-1, 1, 2)),
            (5, 4, q(-1, 1, 2)),
            (5, 2, q(-1, -1, 2)),
            (5, 3, q(-1, -1, 2)),
            (10, 1, q(1, 1, 2)),
            (10, 9, q(1, 1, 2)),
            (10, 3, q(1, -1, 2)),
            (10, 7, q(1, -1, 2)),
        ]);
    }
    if disc == 8 {
        // cos(pi/4) = sqrt8 / 4
        t.extend([(8, 1, q(0, 1, 2)), (8, 7, q(0, 1, 2)), (8, 3, q(0, -1, 2)), (8, 5, q(0, -1, 2))]);
    }
    if disc == 12 {
        t.extend([(12, 1, q(0, 1, 2)), (12, 11, q(0, 1, 2)), (12, 5, q(0, -1, 2)), (12, 7, q(0, -1, 2))]);
    }
    t
}

fn sign_int(o: Ordering) -> i32 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Angle `2 pi k / n` at one embedding, given the exact cosine and the sign
/// of the sine.
fn match_angle(disc: i64, cos: &QuadRational, sin_sign: i32) -> Option<(u32, u32)> {
    cos_table(disc).into_iter().find_map(|(n, k, c)| {
        let s = if 2 * k == n {
            0
        } else if 2 * k < n {
            1
        } else {
            -1
        };
        (c.same(cos) && (s == sin_sign || s == 0)).then_some((n, k))
    })
}

/// Rotation type of an elliptic element with totally positive determinant.
pub fn rotation_type(g: &Mat2) -> Result<RotationType> {
    let disc = g.disc();
    let delta = g.det();
    if delta.is_zero() || !delta.is_totally_positive() {
        return Err(Error::NotElliptic(format!("determinant {delta} is not totally positive")));
    }
    let t = g.trace();
    let t2 = &t * &t;
    let four_delta = &delta * &FieldElement::from_int(disc, 4);
    let gap = &four_delta - &t2;
    if !(gap.is_totally_positive()) {
        return Err(Error::NotElliptic(format!("{g} has |tr| >= 2 sqrt(det) somewhere")));
    }
    if g.c.is_zero() {
        return Err(Error::NotElliptic(format!("{g} fixes a cusp")));
    }
    // x = (t^2 - 2 delta) / (2 delta) = (t^2 - 2delta) * conj(2 delta) / N(2 delta)
    let two_delta = &delta * &FieldElement::from_int(disc, 2);
    let num = &(&t2 - &two_delta) * &two_delta.conj();
    let n2d = two_delta.norm();
    let cos1 = QuadRational { u: num.u().clone(), v: num.v().clone(), den: n2d.clone() };
    debug_assert!(n2d.is_positive());
    let cos2 = cos1.conj();
    let s1 = sign_int(g.c.sign()) * sign_int(t.sign());
    let s2 = sign_int(g.c.conj_sign()) * sign_int(t.conj_sign());
    let (n1, k1) = match_angle(disc, &cos1, s1).ok_or(Error::RotationNotRootOfUnity)?;
    let (n2, k2) = match_angle(disc, &cos2, s2).ok_or(Error::RotationNotRootOfUnity)?;
    if n1 != n2 {
        return Err(Error::RotationNotRootOfUnity);
    }
    let n = n1 as i64;
    let inv = (k1 as i64).extended_gcd(&n).x.rem_euclid(n);
    Ok(RotationType::new(n1, k2 as i64 * inv))
}

/// Order of the image of `g` in `PGL_2`.
pub fn rotation_order(g: &Mat2) -> Result<u32> {
    rotation_type(g).map(|r| r.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: i64, e: [(i64, i64); 4]) -> Mat2 {
        let f = |(x, y): (i64, i64)| FieldElement::from_basis(d, x, y);
        Mat2::new(f(e[0]), f(e[1]), f(e[2]), f(e[3]))
    }

    fn numeric_type(g: &Mat2) -> (u32, i64) {
        // Independent oracle: rotation factor ((c z + d)^{-2}) at each fixed point.
        let z = g.fixed_point().unwrap();
        let det = g.det().embeddings();
        let mut angles = vec![];
        for (j, w) in [(0usize, z.0), (1, z.1)] {
            let [_, _, c, d] = g.embedded(j);
            let dj = if j == 0 { det.0 } else { det.1 };
            let jac = (w * c + d).powi(-2) * dj;
            angles.push(jac.arg().rem_euclid(std::f64::consts::TAU));
        }
        for n in 2u32..=12 {
            let unit = std::f64::consts::TAU / n as f64;
            let k1 = (angles[0] / unit).round();
            let k2 = (angles[1] / unit).round();
            if (angles[0] - k1 * unit).abs() < 1e-9 && (angles[1] - k2 * unit).abs() < 1e-9 {
                let (k1, k2) = (k1 as i64 % n as i64, k2 as i64 % n as i64);
                if k1.gcd(&(n as i64)) == 1 {
                    let inv = k1.extended_gcd(&(n as i64)).x.rem_euclid(n as i64);
                    return (n, k2 * inv);
                }
            }
        }
        panic!("not a root of unity");
    }

    #[test]
    fn small_examples() {
        // S has order 2 everywhere
        let s = Mat2::from_ints(13, 0, -1, 1, 0);
        assert_eq!(rotation_type(&s).unwrap(), RotationType::new(2, 1));
        let r = Mat2::from_ints(13, 0, -1, 1, 1);
        let ty = rotation_type(&r).unwrap();
        assert_eq!(ty.n, 3);
        assert_eq!(ty.b, 1);
    }

    #[test]
    fn agrees_with_numeric_rotation() {
        let d = 13;
        let gens = [Mat2::from_ints(d, 0, -1, 1, 0), Mat2::from_ints(d, 0, -1, 1, 1), Mat2::from_ints(d, 1, -1, 1, 0)];
        let conjs = [
            m(d, [(1, 0), (0, 1), (0, 0), (1, 0)]),
            m(d, [(1, 0), (0, 0), (2, 1), (1, 0)]),
            m(d, [(2, 1), (1, 0), (1, 0), (0, 0)]).mul(&Mat2::from_ints(d, 0, 1, -1, 0)),
        ];
        for g in &gens {
            for c in &conjs {
                if c.det() != FieldElement::one(d) && c.det() != -FieldElement::one(d) {
                    continue;
                }
                let h = c.mul(g).mul(&c.adjugate());
                let h = if h.det().is_totally_positive() { h } else { continue };
                let ty = rotation_type(&h).unwrap();
                let (n, b) = numeric_type(&h);
                assert_eq!(ty, RotationType::new(n, b), "{h}");
            }
        }
    }

    #[test]
    fn order_five_and_ten_for_sqrt5() {
        let d = 5;
        // trace omega = (1+sqrt5)/2: cos theta = cos(pi/5), order 5 in PGL
        let g = m(d, [(0, 0), (-1, 0), (1, 0), (0, 1)]);
        let ty = rotation_type(&g).unwrap();
        assert_eq!(ty.n, 5);
        let (n, b) = numeric_type(&g);
        assert_eq!(ty, RotationType::new(n, b));
    }

    #[test]
    fn rejects_hyperbolic_and_parabolic() {
        assert!(rotation_type(&Mat2::from_ints(13, 2, 1, 1, 1)).is_err());
        assert!(rotation_type(&Mat2::from_ints(13, 1, 1, 0, 1)).is_err());
    }
}
