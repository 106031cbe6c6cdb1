//! Small integer utilities shared by the field, form and cusp code.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, Zero};

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduce `a` into `[0, m)`.
pub fn rem_euclid(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Fundamental discriminant test for either sign of `disc`.
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    let r = disc.rem_euclid(4);
    if r == 1 {
        return is_squarefree(disc.unsigned_abs());
    }
    if r == 0 {
        let m = disc / 4;
        let mr = m.rem_euclid(4);
        return (mr == 2 || mr == 3) && is_squarefree(m.unsigned_abs());
    }
    false
}

/// Kronecker symbol `(d | p)` for a rational prime `p`.
pub fn kronecker_prime(d: i64, p: u64) -> i32 {
    if p == 2 {
        if d % 2 == 0 {
            return 0;
        }
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    let a = d.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo the odd prime `p`, by exhaustive search.
/// Residue fields here are tiny, so no Tonelli-Shanks.
pub fn sqrt_mod(a: i64, p: u64) -> Option<u64> {
    let a = a.rem_euclid(p as i64) as u64;
    (0..p).find(|&x| mul_mod(x, x, p) == a)
}

/// Number of positive divisors.
pub fn sigma0(n: u64) -> u64 {
    divisor_fold(n, 1, |e, _| e + 1)
}

/// Sum of positive divisors.
pub fn sigma1(n: u64) -> u64 {
    divisor_fold(n, 1, |e, p| (p.pow(e as u32 + 1) - 1) / (p - 1))
}

fn divisor_fold(mut n: u64, init: u64, local: impl Fn(u64, u64) -> u64) -> u64 {
    assert!(n > 0, "divisor functions need n > 0");
    let mut acc = init;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            acc *= local(e, p);
        }
        p += 1;
    }
    if n > 1 {
        acc *= local(1, n);
    }
    acc
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = vec![];
    let mut large = vec![];
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn isqrt_u64(n: u64) -> u64 {
    n.sqrt()
}

/// Floor of the square root of a nonnegative big integer.
pub fn isqrt_big(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "square root of a negative integer");
    if n.is_zero() {
        return BigInt::zero();
    }
    n.sqrt()
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Prime factors of `n` with multiplicity.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_divisors() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
        assert_eq!(sigma0(12), 6);
        assert_eq!(sigma1(12), 28);
        assert_eq!(sigma1(1), 1);
        assert_eq!(sigma0(1), 1);
    }

    #[test]
    fn kronecker_matches_splitting_rule() {
        // 2 splits iff D = 1 mod 8
        assert_eq!(kronecker_prime(13, 2), -1);
        assert_eq!(kronecker_prime(17, 2), 1);
        assert_eq!(kronecker_prime(13, 3), 1);
        assert_eq!(kronecker_prime(5, 5), 0);
        assert_eq!(kronecker_prime(8, 2), 0);
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [5, 8, 12, 13, -3, -4, -8, -39, -52, -20] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [9, 20, 45, -12, -27, 1, 0, 6] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
    }
}
