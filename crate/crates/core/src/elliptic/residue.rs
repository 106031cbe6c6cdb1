//! Residue fields `O / p` for primes of `O_E`.
//!
//! Elements of `O` are written `x + y omega`. For a split or ramified prime
//! the residue field is `F_p` with `omega` sent to a root `r` of its minimal
//! polynomial, chosen so that the generator of the prime maps to zero. For
//! an inert prime it is `F_p[omega]` modulo the (irreducible) minimal
//! polynomial of `omega`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::field::{FieldContext, FieldElement, PrimeIdealData, Splitting};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    pub x: u64,
    pub y: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidueKind {
    /// `F_p` with `omega -> root`.
    Prime { root: u64 },
    /// `F_p[w] / (w^2 - trace w + norm)`.
    Quadratic { trace: u64, norm: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueField {
    pub p: u64,
    pub kind: ResidueKind,
}

fn modp(x: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    (((x % &m) + &m) % &m).to_u64().unwrap()
}

impl ResidueField {
    pub fn new(field: &FieldContext, prime: &PrimeIdealData) -> Self {
        let p = prime.p;
        let (tr, nm) = field.omega_min_poly();
        let (tr_p, nm_p) = (tr.rem_euclid(p as i64) as u64, nm.rem_euclid(p as i64) as u64);
        match prime.splitting {
            Splitting::Inert => ResidueField { p, kind: ResidueKind::Quadratic { trace: tr_p, norm: nm_p } },
            _ => {
                let (gx, gy) = prime.generator.basis_coords();
                let (gx, gy) = (modp(&gx, p), modp(&gy, p));
                let root = (0..p)
                    .find(|&r| (r * r + nm_p) % p == (tr_p * r) % p && (gx + gy * r) % p == 0)
                    .expect("generator reduces to zero at some root of the minimal polynomial");
                ResidueField { p, kind: ResidueKind::Prime { root } }
            }
        }
    }

    pub fn size(&self) -> u64 {
        match self.kind {
            ResidueKind::Prime { .. } => self.p,
            ResidueKind::Quadratic { .. } => self.p * self.p,
        }
    }

    /// All residues in a fixed order.
    pub fn elements(&self) -> Vec<Residue> {
        match self.kind {
            ResidueKind::Prime { .. } => (0..self.p).map(|x| Residue { x, y: 0 }).collect(),
            ResidueKind::Quadratic { .. } => {
                (0..self.p).flat_map(|y| (0..self.p).map(move |x| Residue { x, y })).collect()
            }
        }
    }

    pub fn reduce(&self, e: &FieldElement) -> Residue {
        let (x, y) = e.basis_coords();
        let (x, y) = (modp(&x, self.p), modp(&y, self.p));
        match self.kind {
            ResidueKind::Prime { root } => Residue { x: (x + y * root) % self.p, y: 0 },
            ResidueKind::Quadratic { .. } => Residue { x, y },
        }
    }

    pub fn zero(&self) -> Residue {
        Residue { x: 0, y: 0 }
    }

    pub fn one(&self) -> Residue {
        Residue { x: 1 % self.p, y: 0 }
    }

    pub fn is_zero(&self, r: Residue) -> bool {
        r.x == 0 && r.y == 0
    }

    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        Residue { x: (a.x + b.x) % self.p, y: (a.y + b.y) % self.p }
    }

    pub fn neg(&self, a: Residue) -> Residue {
        Residue { x: (self.p - a.x) % self.p, y: (self.p - a.y) % self.p }
    }

    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        let p = self.p;
        match self.kind {
            ResidueKind::Prime { .. } => Residue { x: a.x * b.x % p, y: 0 },
            ResidueKind::Quadratic { trace, norm } => {
                // w^2 = trace w - norm
                let xx = a.x * b.x % p;
                let xy = (a.x * b.y + a.y * b.x) % p;
                let yy = a.y * b.y % p;
                Residue { x: (xx + p * p - yy * norm % p) % p, y: (xy + yy * trace) % p }
            }
        }
    }

    pub fn inv(&self, a: Residue) -> Option<Residue> {
        if self.is_zero(a) {
            return None;
        }
        self.elements().into_iter().find(|&b| self.mul(a, b) == self.one())
    }

    /// Lift a residue back to `O` (as `x + y omega` for inert primes, `x`
    /// otherwise).
    pub fn lift(&self, disc: i64, r: Residue) -> FieldElement {
        match self.kind {
            ResidueKind::Prime { .. } => FieldElement::from_int(disc, r.x),
            ResidueKind::Quadratic { .. } => FieldElement::from_basis(disc, r.x, r.y),
        }
    }
}

/// A point `(c : d)` of `P^1(O/p)`, normalised to `(x : 1)` or `(1 : 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProjPoint {
    Finite(Residue),
    Infinity,
}

impl ResidueField {
    pub fn projective(&self, c: Residue, d: Residue) -> ProjPoint {
        if self.is_zero(d) {
            assert!(!self.is_zero(c), "(0 : 0) is not a projective point");
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(self.mul(c, self.inv(d).unwrap()))
        }
    }

    /// Right action of a matrix (reduced mod p) on the bottom row `(c : d)`.
    pub fn act_right(&self, pt: ProjPoint, m: [Residue; 4]) -> ProjPoint {
        let (c, d) = match pt {
            ProjPoint::Finite(x) => (x, self.one()),
            ProjPoint::Infinity => (self.one(), self.zero()),
        };
        let [a, b, mc, md] = m;
        let c2 = self.add(self.mul(c, a), self.mul(d, mc));
        let d2 = self.add(self.mul(c, b), self.mul(d, md));
        self.projective(c2, d2)
    }

    pub fn proj_points(&self) -> Vec<ProjPoint> {
        let mut v: Vec<ProjPoint> = self.elements().into_iter().map(ProjPoint::Finite).collect();
        v.push(ProjPoint::Infinity);
        v
    }
}
