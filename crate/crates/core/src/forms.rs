//! Binary quadratic forms: definite class numbers `h(-N)` (feeding the
//! elliptic point counts), the narrow class number as a count of cycles of
//! reduced indefinite forms, and the analytic upper bound for `h(-D)`.

use std::collections::{BTreeSet, HashMap};
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_i64, is_fundamental_discriminant, isqrt_u64};
use crate::error::{Error, Result};
use crate::interval::Interval;

/// The form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormTriple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl FormTriple {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        FormTriple { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd_i64(gcd_i64(self.a, self.b), self.c) == 1
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced_definite(&self) -> bool {
        let FormTriple { a, b, c } = *self;
        if !(b.abs() <= a && a <= c) {
            return false;
        }
        if (b.abs() == a || a == c) && b < 0 {
            return false;
        }
        true
    }

    /// `0 < b < sqrt(disc)` and `sqrt(disc) - b < 2|a| < sqrt(disc) + b`,
    /// decided with integer comparisons only.
    pub fn is_reduced_indefinite(&self) -> bool {
        let disc = self.discriminant();
        let FormTriple { a, b, .. } = *self;
        if disc <= 0 || b <= 0 || b * b >= disc {
            return false;
        }
        let two_a = 2 * a.abs();
        // sqrt(disc) < 2|a| + b
        let lower = (two_a + b) * (two_a + b) > disc;
        // 2|a| - b < sqrt(disc)
        let upper = two_a - b <= 0 || (two_a - b) * (two_a - b) < disc;
        lower && upper
    }

    /// One step of the reduction cycle of an indefinite reduced form:
    /// `(a, b, c) -> (c, b', (b'^2 - disc) / 4c)` with `b' = -b mod 2|c|`
    /// and `sqrt(disc) - 2|c| < b' < sqrt(disc)`.
    pub fn rho(&self) -> FormTriple {
        let disc = self.discriminant();
        let s = isqrt_u64(disc as u64) as i64;
        let m = 2 * self.c.abs();
        // largest b' = -b (mod m) with b' <= floor(sqrt disc)
        let r = (-self.b).rem_euclid(m);
        let b_new = r + (s - r).div_euclid(m) * m;
        let c_new = (b_new * b_new - disc) / (4 * self.c);
        FormTriple { a: self.c, b: b_new, c: c_new }
    }
}

/// Reduced primitive positive definite forms of discriminant `-n`.
pub fn reduced_definite_forms(n: i64) -> Result<Vec<FormTriple>> {
    check_definite(n)?;
    let mut out = Vec::new();
    let mut b = n % 2;
    while 3 * b * b <= n {
        let m = (b * b + n) / 4;
        let mut a = b.max(1);
        while a * a <= m {
            if m % a == 0 {
                let c = m / a;
                for f in [FormTriple::new(a, b, c), FormTriple::new(a, -b, c)] {
                    if f.is_reduced_definite() && f.is_primitive() && !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort();
    Ok(out)
}

fn check_definite(n: i64) -> Result<()> {
    if n <= 0 || !matches!(n.rem_euclid(4), 0 | 3) {
        return Err(Error::InvalidDiscriminant(n));
    }
    Ok(())
}

/// Class number `h(-n)` of primitive positive definite forms of
/// discriminant `-n` (no conductor correction, no weighting).
pub fn h_definite(n: i64) -> Result<u64> {
    Ok(reduced_definite_forms(n)?.len() as u64)
}

/// Reduced primitive indefinite forms of discriminant `disc`.
pub fn reduced_indefinite_forms(disc: i64) -> Vec<FormTriple> {
    let s = isqrt_u64(disc as u64) as i64;
    let mut out = Vec::new();
    for b in 1..=s {
        if (b * b - disc) % 4 != 0 || b * b >= disc {
            continue;
        }
        let ac = (b * b - disc) / 4;
        for a in 1..=ac.abs() {
            if ac % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let f = FormTriple::new(sa, b, ac / sa);
                if f.is_primitive() && f.is_reduced_indefinite() {
                    out.push(f);
                }
            }
        }
    }
    out.sort();
    out
}

/// The cycles of reduced indefinite forms of discriminant `disc`.
pub fn indefinite_cycles(disc: i64) -> Vec<Vec<FormTriple>> {
    let forms = reduced_indefinite_forms(disc);
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for f in forms {
        if seen.contains(&f) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut g = f;
        while seen.insert(g) {
            cycle.push(g);
            g = g.rho();
        }
        cycles.push(cycle);
    }
    cycles
}

/// Narrow class number of `Q(sqrt disc)`, counted as the number of cycles
/// of reduced indefinite forms.
pub fn h_narrow_indefinite(disc: i64) -> Result<u64> {
    if disc <= 1 || !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc));
    }
    Ok(indefinite_cycles(disc).len() as u64)
}

/// Interval enclosure of `sqrt(n) log(n) / pi`.
pub fn h_bound_interval(n: i64, bits: u32) -> Interval {
    let x = Interval::from_int(n, bits);
    x.sqrt().mul(&x.ln()).div(&Interval::pi(bits)).expect("pi is positive")
}

/// Rational upper bound `r >= sqrt(n) log(n) / pi`.
pub fn h_bound(n: i64) -> BigRational {
    assert!(n > 1, "bound needs n > 1");
    h_bound_interval(n, crate::interval::DEFAULT_BITS).upper()
}

/// Memo table from discriminant to class number, optionally backed by a
/// newline-delimited `disc,count` file.
///
/// Negative keys hold definite class numbers `h(disc)`; positive keys hold
/// narrow class numbers.
#[derive(Debug, Default)]
pub struct ClassNumberCache {
    table: RwLock<HashMap<i64, u64>>,
    file: Option<Mutex<PathBuf>>,
}

impl ClassNumberCache {
    pub fn in_memory() -> Self {
        ClassNumberCache::default()
    }

    /// Load an existing cache file (missing file is fine) and append new
    /// entries to it.
    pub fn with_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut table = HashMap::new();
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(e.to_string()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (d, c) =
                    line.split_once(',').ok_or_else(|| Error::Parse(format!("cache line {}: {line:?}", lineno + 1)))?;
                let d: i64 = d.trim().parse().map_err(|_| Error::Parse(format!("cache line {}", lineno + 1)))?;
                let c: u64 = c.trim().parse().map_err(|_| Error::Parse(format!("cache line {}", lineno + 1)))?;
                table.insert(d, c);
            }
        }
        Ok(ClassNumberCache { table: RwLock::new(table), file: Some(Mutex::new(path)) })
    }

    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `h(-n)` through the cache.
    pub fn h_definite(&self, n: i64) -> Result<u64> {
        self.get_or_insert(-n, || h_definite(n))
    }

    pub fn h_narrow(&self, disc: i64) -> Result<u64> {
        self.get_or_insert(disc, || h_narrow_indefinite(disc))
    }

    fn get_or_insert(&self, key: i64, compute: impl FnOnce() -> Result<u64>) -> Result<u64> {
        if let Some(v) = self.table.read().unwrap().get(&key) {
            return Ok(*v);
        }
        let value = compute()?;
        let fresh = self.table.write().unwrap().insert(key, value).is_none();
        if fresh {
            if let Some(file) = &self.file {
                let path = file.lock().unwrap();
                let mut f =
                    OpenOptions::new().create(true).append(true).open(&*path).map_err(|e| Error::Io(e.to_string()))?;
                // one write per record so concurrent appenders never interleave a line
                f.write_all(format!("{key},{value}\n").as_bytes()).map_err(|e| Error::Io(e.to_string()))?;
            }
        }
        Ok(value)
    }
}
