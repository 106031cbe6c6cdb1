//! Exact arithmetic in real quadratic fields `Q(sqrt D)` of narrow class
//! number one, their rings of integers, units and prime ideals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_fundamental_discriminant, is_prime, kronecker_prime};
use crate::error::{Error, Result};
use crate::forms;

/// An element `(u + v sqrt D) / 2` of `Q(sqrt D)`.
///
/// Elements built through the public constructors are integral, i.e.
/// `u = v D (mod 2)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    #[serde(with = "crate::serde_util::bigint")]
    u: BigInt,
    #[serde(with = "crate::serde_util::bigint")]
    v: BigInt,
    disc: i64,
}

impl FieldElement {
    /// Integral element from its doubled coordinates. Panics when the
    /// pair does not describe an algebraic integer.
    pub fn new(disc: i64, u: impl Into<BigInt>, v: impl Into<BigInt>) -> Self {
        let (u, v) = (u.into(), v.into());
        assert!((&u - &v * disc).is_even(), "({u} + {v} sqrt {disc})/2 is not integral");
        FieldElement { u, v, disc }
    }

    /// `a + b sqrt D`.
    pub fn from_parts(disc: i64, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        FieldElement::new(disc, a.into() * 2, b.into() * 2)
    }

    /// `x + y omega` in the integral basis.
    pub fn from_basis(disc: i64, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        let (x, y) = (x.into(), y.into());
        let (ou, ov) = omega_coords(disc);
        FieldElement::new(disc, &x * 2 + &y * ou, y * ov)
    }

    pub fn from_int(disc: i64, a: impl Into<BigInt>) -> Self {
        FieldElement::new(disc, a.into() * 2, 0)
    }

    pub fn zero(disc: i64) -> Self {
        FieldElement::from_int(disc, 0)
    }

    pub fn one(disc: i64) -> Self {
        FieldElement::from_int(disc, 1)
    }

    /// The generator `omega` of the ring of integers over `Z`.
    pub fn omega(disc: i64) -> Self {
        let (u, v) = omega_coords(disc);
        FieldElement::new(disc, u, v)
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Doubled rational coordinate.
    pub fn u(&self) -> &BigInt {
        &self.u
    }

    /// Doubled irrational coordinate.
    pub fn v(&self) -> &BigInt {
        &self.v
    }

    /// Coordinates `(x, y)` with `self = x + y omega`.
    pub fn basis_coords(&self) -> (BigInt, BigInt) {
        let (ou, ov) = omega_coords(self.disc);
        let y = &self.v / ov;
        let x = (&self.u - &y * ou) / 2;
        (x, y)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn conj(&self) -> Self {
        FieldElement { u: self.u.clone(), v: -&self.v, disc: self.disc }
    }

    pub fn trace(&self) -> BigInt {
        self.u.clone()
    }

    pub fn norm(&self) -> BigInt {
        (&self.u * &self.u - &self.v * &self.v * self.disc) / 4
    }

    /// Sign of the image under the fixed embedding `sqrt D > 0`, decided by
    /// comparing `u^2` with `v^2 D`.
    pub fn sign(&self) -> Ordering {
        signed_surd(&self.u, &self.v, self.disc)
    }

    /// Sign under the conjugate embedding.
    pub fn conj_sign(&self) -> Ordering {
        signed_surd(&self.u, &-&self.v, self.disc)
    }

    pub fn is_totally_positive(&self) -> bool {
        self.sign() == Ordering::Greater && self.conj_sign() == Ordering::Greater
    }

    /// Floating point images under both embeddings.
    pub fn embeddings(&self) -> (f64, f64) {
        let s = (self.disc as f64).sqrt();
        let u = self.u.to_f64().unwrap_or(f64::NAN);
        let v = self.v.to_f64().unwrap_or(f64::NAN);
        ((u + v * s) / 2.0, (u - v * s) / 2.0)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElement::one(self.disc);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self / other` when the quotient is again integral.
    pub fn div_exact(&self, other: &FieldElement) -> Option<FieldElement> {
        let n = other.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &other.conj();
        let (u, v) = (&num.u, &num.v);
        if !(u % &n).is_zero() || !(v % &n).is_zero() {
            return None;
        }
        let (u, v) = (u / &n, v / &n);
        if !(&u - &v * self.disc).is_even() {
            return None;
        }
        Some(FieldElement { u, v, disc: self.disc })
    }

    pub fn divides(&self, other: &FieldElement) -> bool {
        other.div_exact(self).is_some()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    fn check_same(&self, other: &FieldElement) {
        assert_eq!(self.disc, other.disc, "elements of different fields");
    }
}

fn omega_coords(disc: i64) -> (i64, i64) {
    if disc.rem_euclid(4) == 1 {
        (1, 1)
    } else {
        // D = 4m: omega = sqrt m = sqrt D / 2
        (0, 1)
    }
}

fn signed_surd(u: &BigInt, v: &BigInt, disc: i64) -> Ordering {
    let su = u.sign();
    let sv = v.sign();
    use num_bigint::Sign::*;
    match (su, sv) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
        (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
        (Plus, Minus) => (u * u).cmp(&(v * v * disc)),
        (Minus, Plus) => (v * v * disc).cmp(&(u * u)),
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            return write!(f, "{}", &self.u / 2);
        }
        let two = BigInt::from(2);
        if self.u.is_even() && self.v.is_even() {
            let (a, b) = (&self.u / &two, &self.v / &two);
            if a.is_zero() {
                write!(f, "{b}*sqrt({})", self.disc)
            } else {
                write!(f, "{a}{}{}*sqrt({})", if b.is_negative() { "-" } else { "+" }, b.abs(), self.disc)
            }
        } else {
            write!(
                f,
                "({}{}{}*sqrt({}))/2",
                self.u,
                if self.v.is_negative() { "-" } else { "+" },
                self.v.abs(),
                self.disc
            )
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        FieldElement { u: &self.u + &rhs.u, v: &self.v + &rhs.v, disc: self.disc }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        FieldElement { u: &self.u - &rhs.u, v: &self.v - &rhs.v, disc: self.disc }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        let u = &self.u * &rhs.u + &self.v * &rhs.v * self.disc;
        let v = &self.u * &rhs.v + &self.v * &rhs.u;
        FieldElement { u: u / 2, v: v / 2, disc: self.disc }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { u: -&self.u, v: -&self.v, disc: self.disc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// A validated real quadratic field with its fundamental unit and narrow
/// class number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldContext {
    disc: i64,
    fundamental_unit: FieldElement,
    unit_norm: i32,
    narrow_class_number: u64,
}

impl FieldContext {
    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// The fundamental unit, normalised to be `> 1` under the fixed embedding.
    pub fn fundamental_unit(&self) -> &FieldElement {
        &self.fundamental_unit
    }

    pub fn unit_norm(&self) -> i32 {
        self.unit_norm
    }

    pub fn narrow_class_number(&self) -> u64 {
        self.narrow_class_number
    }

    /// Generator of the totally positive units: `eps^2` when `N(eps) = -1`.
    pub fn totally_positive_unit(&self) -> FieldElement {
        if self.unit_norm == -1 {
            self.fundamental_unit.pow(2)
        } else {
            self.fundamental_unit.clone()
        }
    }

    pub fn omega(&self) -> FieldElement {
        FieldElement::omega(self.disc)
    }

    pub fn elem(&self, u: impl Into<BigInt>, v: impl Into<BigInt>) -> FieldElement {
        FieldElement::new(self.disc, u, v)
    }

    pub fn int(&self, a: impl Into<BigInt>) -> FieldElement {
        FieldElement::from_int(self.disc, a)
    }

    /// Trace and norm of `omega`; its minimal polynomial is
    /// `x^2 - trace x + norm`.
    pub fn omega_min_poly(&self) -> (i64, i64) {
        if self.disc.rem_euclid(4) == 1 {
            (1, (1 - self.disc) / 4)
        } else {
            (0, -self.disc / 4)
        }
    }
}

/// Build and validate `Q(sqrt D)`.
///
/// Rejects non-fundamental discriminants, discriminants other than a prime
/// `= 1 mod 4` or `8`, and fields whose narrow class number is not one,
/// each with its own error variant.
pub fn make_field(disc: i64) -> Result<FieldContext> {
    let field = make_field_unchecked(disc)?;
    if field.narrow_class_number != 1 {
        return Err(Error::NarrowClassNumber { disc, class_number: field.narrow_class_number });
    }
    Ok(field)
}

/// Like [`make_field`] but keeps fields of larger narrow class number.
pub fn make_field_unchecked(disc: i64) -> Result<FieldContext> {
    if disc < 5 || !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let prime_shape = disc.rem_euclid(4) == 1 && is_prime(disc as u64);
    if !(prime_shape || disc == 8) {
        return Err(Error::UnsupportedDiscriminant(disc));
    }
    let fundamental_unit = fundamental_unit(disc);
    let unit_norm = fundamental_unit.norm().to_i32().expect("unit norm is +-1");
    let narrow_class_number = forms::h_narrow_indefinite(disc)?;
    Ok(FieldContext { disc, fundamental_unit, unit_norm, narrow_class_number })
}

/// Fundamental unit `> 1` from the regular continued fraction of `omega`:
/// the first convergent `p/q` with `p - q omega^c` a unit.
pub fn fundamental_unit(disc: i64) -> FieldElement {
    let omega_conj = FieldElement::omega(disc).conj();
    let s = arith::isqrt_u64(disc as u64) as i64;
    // omega = (P + sqrt D) / Q
    let (mut p_state, mut q_state) = (disc.rem_euclid(2), 2i64);
    let (mut p_prev, mut p_cur) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q_cur) = (BigInt::zero(), BigInt::one());
    loop {
        let a = (p_state + s).div_euclid(q_state);
        let p_next = &p_prev * a + &p_cur;
        let q_next = &q_prev * a + &q_cur;
        // shift so that (p_prev, q_prev) is the newest convergent
        p_cur = std::mem::replace(&mut p_prev, p_next);
        q_cur = std::mem::replace(&mut q_prev, q_next);
        let candidate = &FieldElement::from_int(disc, p_prev.clone())
            - &(&omega_conj * &FieldElement::from_int(disc, q_prev.clone()));
        if candidate.is_unit() {
            return if candidate.sign() == Ordering::Greater { candidate } else { -candidate };
        }
        let p_new = a * q_state - p_state;
        q_state = (disc - p_new * p_new) / q_state;
        p_state = p_new;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal of `O_E` with a totally positive generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeIdealData {
    pub p: u64,
    pub splitting: Splitting,
    pub residue_degree: u32,
    /// Norm `q = p^f`.
    pub norm: u64,
    pub generator: FieldElement,
    /// `q + 1`, the index of `Gamma_0(p)` in `PSL_2(O)`.
    pub index: u64,
}

impl PrimeIdealData {
    /// Ideal membership: `generator | x`.
    pub fn contains(&self, x: &FieldElement) -> bool {
        self.generator.divides(x)
    }

    /// True for the ideal `(2)` with 2 inert.
    pub fn is_inert_two(&self) -> bool {
        self.p == 2 && self.splitting == Splitting::Inert
    }

    /// True for the ideal `(3)` with 3 inert.
    pub fn is_inert_three(&self) -> bool {
        self.p == 3 && self.splitting == Splitting::Inert
    }

    /// Same ideal: the generators differ by a unit.
    pub fn same_ideal(&self, other: &FieldElement) -> bool {
        self.generator.divides(other) && other.divides(&self.generator)
    }
}

/// Window for the unit-power scan in [`split_prime`].
pub const GENERATOR_WINDOW: i32 = 64;

/// Primes of `O_E` above the rational prime `p`, each with a totally
/// positive generator of minimal trace.
pub fn split_prime(field: &FieldContext, p: u64) -> Result<Vec<PrimeIdealData>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let disc = field.disc;
    match kronecker_prime(disc, p) {
        -1 => Ok(vec![PrimeIdealData {
            p,
            splitting: Splitting::Inert,
            residue_degree: 2,
            norm: p * p,
            generator: field.int(p),
            index: p * p + 1,
        }]),
        k => {
            let seed = element_of_norm(field, p)?;
            let generator = totally_positive_associate(field, &seed, p)?;
            let splitting = if k == 0 { Splitting::Ramified } else { Splitting::Split };
            let mut gens = vec![generator.clone()];
            if splitting == Splitting::Split {
                gens.push(minimal_trace_associate(field, &generator.conj()));
            }
            gens.sort_by(|a, b| (a.u(), a.v()).cmp(&(b.u(), b.v())));
            Ok(gens
                .into_iter()
                .map(|generator| PrimeIdealData { p, splitting, residue_degree: 1, norm: p, generator, index: p + 1 })
                .collect())
        }
    }
}

/// Find some `x` in `O_E` with `|N(x)| = p` by scanning the irrational
/// coordinate. The search bound comes from a balanced generator.
fn element_of_norm(field: &FieldContext, p: u64) -> Result<FieldElement> {
    let disc = field.disc;
    let eps = field.fundamental_unit.embeddings().0;
    let bound = (4.0 * ((p as f64) * eps).sqrt() / (disc as f64).sqrt()).ceil() as i64 + 2;
    if bound > 50_000_000 {
        return Err(Error::NoTotallyPositiveGenerator { p });
    }
    let four_p = BigInt::from(4 * p);
    for v in 0..=bound {
        let dv2 = BigInt::from(v) * v * disc;
        for target in [&dv2 + &four_p, &dv2 - &four_p] {
            if target.is_negative() {
                continue;
            }
            let u = arith::isqrt_big(&target);
            if &u * &u == target && (&u - BigInt::from(v) * disc).is_even() {
                return Ok(FieldElement::new(disc, u, v));
            }
        }
    }
    Err(Error::NoTotallyPositiveGenerator { p })
}

fn totally_positive_associate(field: &FieldContext, seed: &FieldElement, p: u64) -> Result<FieldElement> {
    let eps = &field.fundamental_unit;
    let eps_inv = eps.conj() * FieldElement::from_int(field.disc, field.unit_norm);
    for k in 0..=GENERATOR_WINDOW {
        let up = seed * &eps.pow(k as u32);
        let down = seed * &eps_inv.pow(k as u32);
        for cand in [up, down] {
            for signed in [cand.clone(), -cand] {
                if signed.is_totally_positive() {
                    return Ok(minimal_trace_associate(field, &signed));
                }
            }
        }
    }
    Err(Error::NoTotallyPositiveGenerator { p })
}

/// Among `x * eta^k` (`eta` the totally positive fundamental unit), the one
/// of least trace. `x` must be totally positive.
pub fn minimal_trace_associate(field: &FieldContext, x: &FieldElement) -> FieldElement {
    let eta = field.totally_positive_unit();
    let eta_inv = eta.conj();
    let mut best = x.clone();
    for step in [&eta, &eta_inv] {
        loop {
            let next = &best * step;
            if next.trace() < best.trace() {
                best = next;
            } else {
                break;
            }
        }
    }
    best
}

/// Every unit `u` with `1 < u < bound` under the fixed embedding, found by
/// scanning `(u + v sqrt D)/2` with `|v| <= v_max`.
pub fn units_below(disc: i64, v_max: i64, bound: &FieldElement) -> Vec<FieldElement> {
    let mut out = Vec::new();
    let one = FieldElement::one(disc);
    for v in -v_max..=v_max {
        let dv2: BigInt = BigInt::from(v) * v * disc;
        for target in [&dv2 + 4u32, &dv2 - 4u32] {
            if target.is_negative() {
                continue;
            }
            let u = arith::isqrt_big(&target);
            if &u * &u != target {
                continue;
            }
            for uu in [u.clone(), -u.clone()] {
                if !(&uu - BigInt::from(v) * disc).is_even() {
                    continue;
                }
                let x = FieldElement::new(disc, uu, v);
                if (&x - &one).sign() == Ordering::Greater && (bound - &x).sign() == Ordering::Greater {
                    out.push(x);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(d: i64, u: i64, v: i64) -> FieldElement {
        FieldElement::new(d, u, v)
    }

    #[test]
    fn element_arithmetic() {
        let a = FieldElement::from_parts(13, 4, 1);
        assert_eq!(a.norm(), BigInt::from(3));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(el(5, 1, 1).trace(), BigInt::from(1));
        let b = el(13, 3, 1);
        assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        assert_eq!(a.div_exact(&a), Some(FieldElement::one(13)));
        assert!(FieldElement::from_int(13, 2).div_exact(&FieldElement::from_int(13, 4)).is_none());
    }

    #[test]
    fn signs_are_exact() {
        // 4 - sqrt 13 > 0, 3 - sqrt 13 < 0
        assert_eq!(FieldElement::from_parts(13, 4, -1).sign(), Ordering::Greater);
        assert_eq!(FieldElement::from_parts(13, 3, -1).sign(), Ordering::Less);
        assert!(FieldElement::from_parts(13, 4, 1).is_totally_positive());
        assert!(!el(5, 1, 1).is_totally_positive());
    }

    #[test]
    fn basis_round_trip() {
        for d in [5, 8, 13] {
            let x = FieldElement::from_basis(d, 3, -7);
            assert_eq!(x.basis_coords(), (BigInt::from(3), BigInt::from(-7)));
        }
    }

    #[test]
    fn field_examples() {
        let f5 = make_field(5).unwrap();
        assert_eq!(f5.fundamental_unit(), &el(5, 1, 1));
        assert_eq!(f5.unit_norm(), -1);
        assert_eq!(f5.narrow_class_number(), 1);
        let f13 = make_field(13).unwrap();
        assert_eq!(f13.fundamental_unit(), &el(13, 3, 1));
        assert_eq!(f13.unit_norm(), -1);
        let f8 = make_field(8).unwrap();
        assert_eq!(f8.fundamental_unit(), &FieldElement::from_basis(8, 1, 1));
    }

    #[test]
    fn field_rejections_are_distinguishable() {
        assert_eq!(make_field(12).unwrap_err(), Error::UnsupportedDiscriminant(12));
        assert_eq!(make_field(20).unwrap_err(), Error::NotFundamental(20));
        assert_eq!(make_field(9).unwrap_err(), Error::NotFundamental(9));
        assert!(matches!(make_field(229), Err(Error::NarrowClassNumber { class_number: 3, .. })));
        assert_eq!(make_field(21).unwrap_err(), Error::UnsupportedDiscriminant(21));
    }

    #[test]
    fn fundamental_unit_is_minimal() {
        for d in [5, 8, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97] {
            let f = make_field(d).unwrap();
            let eps = f.fundamental_unit();
            assert!(eps.is_unit());
            let (_, vmax) = eps.basis_coords();
            let found = units_below(d, vmax.to_i64().unwrap().abs() + 2, eps);
            assert!(found.is_empty(), "D={d}: smaller unit {:?}", found);
        }
    }

    #[test]
    fn split_prime_examples() {
        let f13 = make_field(13).unwrap();
        let two = split_prime(&f13, 2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].splitting, Splitting::Inert);
        assert_eq!((two[0].norm, two[0].index), (4, 5));

        let three = split_prime(&f13, 3).unwrap();
        assert_eq!(three.len(), 2);
        assert!(three.iter().all(|p| p.splitting == Splitting::Split && p.norm == 3 && p.index == 4));
        assert!(three[0].same_ideal(&FieldElement::from_parts(13, 4, 1)));
        assert!(three[1].same_ideal(&FieldElement::from_parts(13, 4, -1)));
        assert_eq!(three[0].generator.conj(), three[1].generator);

        let f5 = make_field(5).unwrap();
        let five = split_prime(&f5, 5).unwrap();
        assert_eq!(five.len(), 1);
        assert_eq!(five[0].splitting, Splitting::Ramified);
        assert_eq!(five[0].norm, 5);
        assert!(split_prime(&f5, 6).is_err());
    }

    #[test]
    fn generators_are_totally_positive() {
        for d in [5, 8, 13, 17, 29, 41, 97, 101] {
            let f = make_field(d).unwrap();
            for p in [2u64, 3, 5, 7, 11, 13] {
                for prime in split_prime(&f, p).unwrap() {
                    assert!(prime.generator.is_totally_positive(), "D={d} p={p}");
                    assert_eq!(prime.generator.norm(), BigInt::from(prime.norm));
                    assert_eq!(prime.index, prime.norm + 1);
                }
            }
        }
    }
}
