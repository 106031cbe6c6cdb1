//! Certified real intervals with dyadic endpoints.
//!
//! An [`Interval`] holds integers `lo <= hi` meaning `[lo / 2^bits, hi / 2^bits]`.
//! Every operation rounds its lower endpoint down and its upper endpoint up,
//! so the true value always lies inside. Transcendental constants and
//! functions (`pi`, `ln`, `sqrt`) carry explicit truncation bounds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precision used unless a caller asks for more.
pub const DEFAULT_BITS: u32 = 128;

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

impl Interval {
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        let scaled = r.numer() * pow2(bits);
        Interval { lo: floor_div(&scaled, r.denom()), hi: ceil_div(&scaled, r.denom()), bits }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        let v = BigInt::from(n) << bits;
        Interval { lo: v.clone(), hi: v, bits }
    }

    pub fn from_ratio(n: i64, d: i64, bits: u32) -> Self {
        Interval::from_rational(&BigRational::new(n.into(), d.into()), bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.bits))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.bits))
    }

    pub fn midpoint_f64(&self) -> f64 {
        let mid = BigRational::new(&self.lo + &self.hi, pow2(self.bits + 1));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, pow2(self.bits))
    }

    /// Certainly `> 0`.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Certainly `< 0`.
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// Compare against another interval when they do not overlap.
    pub fn certain_cmp(&self, other: &Interval) -> Option<Ordering> {
        let (a, b) = align(self, other);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if a.lo > b.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, bits: self.bits }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let (a, b) = align(self, other);
        Interval { lo: &a.lo + &b.lo, hi: &a.hi + &b.hi, bits: a.bits }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let (a, b) = align(self, other);
        let scale = pow2(a.bits);
        let prods = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = prods.iter().min().unwrap();
        let max = prods.iter().max().unwrap();
        Interval { lo: floor_div(min, &scale), hi: ceil_div(max, &scale), bits: a.bits }
    }

    /// Division; `None` when the divisor may vanish.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        let (a, b) = align(self, other);
        if !(b.lo.is_positive() || b.hi.is_negative()) {
            return None;
        }
        let scale = pow2(a.bits);
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for n in [&a.lo, &a.hi] {
            for d in [&b.lo, &b.hi] {
                let num = n * &scale;
                let f = floor_div(&num, d);
                let c = ceil_div(&num, d);
                lo = Some(match lo {
                    Some(x) if x <= f => x,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(x) if x >= c => x,
                    _ => c,
                });
            }
        }
        Some(Interval { lo: lo.unwrap(), hi: hi.unwrap(), bits: a.bits })
    }

    pub fn scale_int(&self, k: i64) -> Interval {
        self.mul(&Interval::from_int(k, self.bits))
    }

    pub fn div_int(&self, k: i64) -> Interval {
        self.div(&Interval::from_int(k, self.bits)).expect("nonzero integer divisor")
    }

    /// Square root of a nonnegative interval.
    pub fn sqrt(&self) -> Interval {
        assert!(!self.lo.is_negative(), "sqrt of a possibly negative interval");
        let scale = pow2(self.bits);
        let lo = (&self.lo * &scale).sqrt();
        let hi_sq = &self.hi * &scale;
        let mut hi = hi_sq.sqrt();
        if &hi * &hi < hi_sq {
            hi += 1;
        }
        Interval { lo, hi, bits: self.bits }
    }

    /// Natural logarithm of a positive interval (monotone, so endpoints map
    /// to endpoints).
    pub fn ln(&self) -> Interval {
        assert!(self.lo.is_positive(), "ln of a possibly nonpositive interval");
        let lo = ln_rational(&self.lower(), self.bits).lo;
        let hi = ln_rational(&self.upper(), self.bits).hi;
        Interval { lo, hi, bits: self.bits }
    }

    pub fn square(&self) -> Interval {
        let sq = self.mul(self);
        if self.contains_zero() {
            let hi = sq.hi.clone();
            Interval { lo: BigInt::zero(), hi, bits: sq.bits }
        } else {
            sq
        }
    }

    /// Enclosure of pi by Machin's formula.
    pub fn pi(bits: u32) -> Interval {
        let a = atan_inv(5, bits + 8);
        let b = atan_inv(239, bits + 8);
        a.scale_int(16).sub(&b.scale_int(4)).with_bits(bits)
    }

    /// Re-express at another precision, rounding outward.
    pub fn with_bits(&self, bits: u32) -> Interval {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = bits - self.bits;
                Interval { lo: &self.lo << s, hi: &self.hi << s, bits }
            }
            Ordering::Less => {
                let scale = pow2(self.bits - bits);
                Interval { lo: floor_div(&self.lo, &scale), hi: ceil_div(&self.hi, &scale), bits }
            }
        }
    }
}

fn align(a: &Interval, b: &Interval) -> (Interval, Interval) {
    let bits = a.bits.max(b.bits);
    (a.with_bits(bits), b.with_bits(bits))
}

/// `atan(1/k)` for an integer `k >= 2` by its alternating series.
fn atan_inv(k: i64, bits: u32) -> Interval {
    let x = Interval::from_ratio(1, k, bits);
    let x2 = x.mul(&x);
    let mut power = x.clone();
    let mut sum = Interval::from_int(0, bits);
    let mut n = 0i64;
    let ulp = BigRational::new(BigInt::one(), pow2(bits));
    loop {
        let term = power.div_int(2 * n + 1);
        sum = if n % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        power = power.mul(&x2);
        n += 1;
        if power.upper() <= ulp {
            break;
        }
    }
    // remainder of an alternating series is bounded by the next term
    let rem = power.upper() / BigRational::from_integer((2 * n + 1).into());
    let slack = Interval::from_rational(&rem, bits);
    Interval { lo: &sum.lo - &slack.hi, hi: &sum.hi + &slack.hi, bits }
}

/// `ln r` for a positive rational, via `r = 2^e m`, `m` in `[1, 2)`, and
/// `ln m = 2 atanh((m - 1)/(m + 1))`.
fn ln_rational(r: &BigRational, bits: u32) -> Interval {
    assert!(r.is_positive());
    let work = bits + 16;
    let mut e: i64 = 0;
    let mut m = r.clone();
    let two = BigRational::from_integer(2.into());
    let one = BigRational::one();
    while m >= two {
        m /= &two;
        e += 1;
    }
    while m < one {
        m *= &two;
        e -= 1;
    }
    let t = (&m - &one) / (&m + &one);
    let ln_m = atanh_series(&t, work).scale_int(2);
    let ln2 = atanh_series(&BigRational::new(1.into(), 3.into()), work).scale_int(2);
    ln_m.add(&ln2.scale_int(e)).with_bits(bits)
}

/// `atanh t` for rational `0 <= t <= 1/3`.
fn atanh_series(t: &BigRational, bits: u32) -> Interval {
    let x = Interval::from_rational(t, bits);
    if t.is_zero() {
        return x;
    }
    let x2 = x.mul(&x);
    let mut power = x.clone();
    let mut sum = Interval::from_int(0, bits);
    let mut n = 0i64;
    let ulp = BigRational::new(BigInt::one(), pow2(bits));
    loop {
        sum = sum.add(&power.div_int(2 * n + 1));
        power = power.mul(&x2);
        n += 1;
        if power.upper() <= ulp {
            break;
        }
    }
    // tail: sum_{j>=n} t^(2j+1)/(2j+1) <= t^(2n+1) / ((2n+1)(1 - t^2))
    let t2 = t * t;
    let rem = power.upper() / (BigRational::from_integer((2 * n + 1).into()) * (BigRational::one() - t2));
    let slack = Interval::from_rational(&rem, bits);
    Interval { lo: sum.lo, hi: &sum.hi + &slack.hi, bits }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.12}, {:.12}]",
            self.lower().to_f64().unwrap_or(f64::NAN),
            self.upper().to_f64().unwrap_or(f64::NAN)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encloses(iv: &Interval, x: f64) -> bool {
        let lo = iv.lower().to_f64().unwrap();
        let hi = iv.upper().to_f64().unwrap();
        lo <= x + 1e-15 * x.abs().max(1.0) && x - 1e-15 * x.abs().max(1.0) <= hi
    }

    #[test]
    fn pi_and_logs() {
        let pi = Interval::pi(DEFAULT_BITS);
        assert!(encloses(&pi, std::f64::consts::PI));
        assert!(pi.width() < BigRational::new(1.into(), pow2(120)));
        for n in [2i64, 3, 10, 52, 853, 2559, 100_000] {
            let l = Interval::from_int(n, DEFAULT_BITS).ln();
            assert!(encloses(&l, (n as f64).ln()), "ln {n}: {l:?}");
            assert!(l.width() < BigRational::new(1.into(), pow2(100)));
        }
        let half = Interval::from_ratio(1, 2, DEFAULT_BITS).ln();
        assert!(encloses(&half, 0.5f64.ln()));
    }

    #[test]
    fn sqrt_and_division() {
        let s = Interval::from_int(13, DEFAULT_BITS).sqrt();
        assert!(encloses(&s, 13f64.sqrt()));
        let q = Interval::from_int(1, 64).div(&Interval::from_int(3, 64)).unwrap();
        assert!(encloses(&q, 1.0 / 3.0));
        assert!(Interval::from_int(1, 64).div(&Interval::from_int(0, 64)).is_none());
        let exact = Interval::from_int(16, 64).sqrt();
        assert_eq!(exact.lower(), exact.upper());
    }
}
