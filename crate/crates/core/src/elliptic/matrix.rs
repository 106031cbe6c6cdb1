use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::FieldElement;

/// A 2x2 matrix over `O_E`, acting on `H^2` through both real embeddings.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

/// A point of `H x H`.
pub type Point = (Complex64, Complex64);

impl Mat2 {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(disc: i64, a: i64, b: i64, c: i64, d: i64) -> Self {
        let f = |x: i64| FieldElement::from_int(disc, x);
        Mat2::new(f(a), f(b), f(c), f(d))
    }

    pub fn identity(disc: i64) -> Self {
        Mat2::from_ints(disc, 1, 0, 0, 1)
    }

    pub fn disc(&self) -> i64 {
        self.a.disc()
    }

    pub fn det(&self) -> FieldElement {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> FieldElement {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Adjugate; the inverse in `PGL_2`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2 { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    /// `self * g * self^{-1}` for `det self = 1` (adjugate otherwise, which
    /// agrees up to a scalar).
    pub fn conjugate(&self, g: &Mat2) -> Mat2 {
        self.mul(g).mul(&self.adjugate())
    }

    /// Largest basis coordinate among the entries.
    pub fn height(&self) -> u64 {
        [&self.a, &self.b, &self.c, &self.d].iter().map(|x| elem_height(x)).max().unwrap_or(0)
    }

    /// Entries under embedding `j` (0 = fixed, 1 = conjugate).
    pub fn embedded(&self, j: usize) -> [f64; 4] {
        let pick = |x: &FieldElement| {
            let (e1, e2) = x.embeddings();
            if j == 0 {
                e1
            } else {
                e2
            }
        };
        [pick(&self.a), pick(&self.b), pick(&self.c), pick(&self.d)]
    }

    /// Moebius action on each factor.
    pub fn apply(&self, z: &Point) -> Point {
        let act = |j: usize, w: Complex64| {
            let [a, b, c, d] = self.embedded(j);
            (w * a + b) / (w * c + d)
        };
        (act(0, z.0), act(1, z.1))
    }

    /// Fixed point in `H^2` of an elliptic matrix.
    pub fn fixed_point(&self) -> Option<Point> {
        let one = |j: usize| {
            let [a, b, c, d] = self.embedded(j);
            let t = a + d;
            let det = a * d - b * c;
            let disc = t * t - 4.0 * det;
            if disc >= 0.0 || c == 0.0 {
                return None;
            }
            Some(Complex64::new((a - d) / (2.0 * c), (-disc).sqrt() / (2.0 * c.abs())))
        };
        Some((one(0)?, one(1)?))
    }
}

pub fn elem_height(x: &FieldElement) -> u64 {
    use num_traits::{Signed, ToPrimitive};
    let (p, q) = x.basis_coords();
    p.abs().max(q.abs()).to_u64().unwrap_or(u64::MAX)
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
