//! Chern numbers of `X_0^+(p)`, the general-type criterion and the table of
//! `(D, n)` for which it applies.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, kronecker_prime};
use crate::cusp::{self, CuspCycle};
use crate::elliptic::{
    self, atkin_lehner_action, atkin_lehner_refine, counts_gamma0_exact, gamma0_elliptic_points, log_term, CountMode,
    EllipticCounts, GroupTag,
};
use crate::error::{Error, Result};
use crate::field::{FieldContext, PrimeIdealData};
use crate::fixtures::{self, PaperRow};
use crate::interval::{Interval, DEFAULT_BITS};

/// Above this discriminant the lower bound for `c` replaces the exact value.
pub const SMALL_D_LIMIT: i64 = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChernMode {
    Exact,
    PaperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    GeneralType,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaSource {
    /// `zeta_E(-1) >= D^{3/2} / 360`.
    Bound,
    Exact,
}

/// Which `zeta` value the bound pipeline uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaPolicy {
    Bound,
    Exact,
    /// Exact for `D <= 500`, bound above.
    SmallDExact,
}

impl ZetaPolicy {
    pub fn source(&self, disc: i64) -> ZetaSource {
        match self {
            ZetaPolicy::Bound => ZetaSource::Bound,
            ZetaPolicy::Exact => ZetaSource::Exact,
            ZetaPolicy::SmallDExact if disc <= SMALL_D_LIMIT => ZetaSource::Exact,
            ZetaPolicy::SmallDExact => ZetaSource::Bound,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CMode {
    ExactC,
    BoundC,
}

impl CMode {
    pub fn for_disc(disc: i64) -> CMode {
        if disc > SMALL_D_LIMIT {
            CMode::BoundC
        } else {
            CMode::ExactC
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyCase {
    Generic,
    P2Inert,
    P3Inert,
}

impl PenaltyCase {
    pub fn of_prime(p: &PrimeIdealData) -> PenaltyCase {
        if p.is_inert_two() {
            PenaltyCase::P2Inert
        } else if p.is_inert_three() {
            PenaltyCase::P3Inert
        } else {
            PenaltyCase::Generic
        }
    }

    /// Case in force at index `n` when `n` is treated as a free integer:
    /// `n = 5` forces `p = (2)` when 2 is inert, `n = 10` forces `(3)`.
    pub fn for_index(disc: i64, n: u64) -> PenaltyCase {
        if n == 5 && kronecker_prime(disc, 2) == -1 {
            PenaltyCase::P2Inert
        } else if n == 10 && kronecker_prime(disc, 3) == -1 {
            PenaltyCase::P3Inert
        } else {
            PenaltyCase::Generic
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub zeta_policy: ZetaPolicy,
    pub bits: u32,
    pub strict_n: bool,
    /// Largest height tried when exact mode enumerates elliptic points.
    pub max_height: u32,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { zeta_policy: ZetaPolicy::SmallDExact, bits: DEFAULT_BITS, strict_n: false, max_height: 8 }
    }
}

fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `n D^{3/2} / 360 > 12`, decided exactly as `n^2 D^3 > 4320^2`.
pub fn c2_lower_check(disc: i64, n: u64) -> bool {
    let lhs = BigInt::from(n).pow(2) * BigInt::from(disc).pow(3);
    lhs > BigInt::from(4320u32).pow(2)
}

/// Per-discriminant terms of the `c_1^2` bound, computed once.
#[derive(Clone, Debug)]
pub struct DiscTerms {
    pub disc: i64,
    pub bits: u32,
    pub zeta: BigRational,
    pub c_exact: i64,
    /// `D^{3/2} / 180`
    pub vol_bound_per_n: Interval,
    pub c_bound: Option<Interval>,
    pub penalty_generic: Interval,
    pub penalty_p3: Interval,
    pub penalty_p2: Interval,
}

impl DiscTerms {
    pub fn new(disc: i64, bits: u32) -> Result<Self> {
        let d = Interval::from_int(disc, bits);
        let generic = log_term(disc, 3, 1, 4, bits);
        Ok(DiscTerms {
            disc,
            bits,
            zeta: cusp::zeta_minus_one_disc(disc).zeta,
            c_exact: cusp::local_chern_divisor_sum_disc(disc)?,
            vol_bound_per_n: d.mul(&d.sqrt()).div_int(180),
            c_bound: (disc > SMALL_D_LIMIT).then(|| cusp::c_lower_bound(disc, bits)),
            penalty_p3: log_term(disc, 3, 4, 1, bits),
            penalty_p2: generic.add(&log_term(disc, 4, 3, 1, bits)),
            penalty_generic: generic,
        })
    }

    pub fn penalty(&self, case: PenaltyCase) -> &Interval {
        match case {
            PenaltyCase::Generic => &self.penalty_generic,
            PenaltyCase::P2Inert => &self.penalty_p2,
            PenaltyCase::P3Inert => &self.penalty_p3,
        }
    }

    pub fn c1sq(&self, n: u64, case: PenaltyCase, c_mode: CMode, zeta: ZetaSource) -> Result<C1Bound> {
        let n_i = n as i64;
        let volume = match zeta {
            ZetaSource::Bound => self.vol_bound_per_n.scale_int(n_i),
            ZetaSource::Exact => Interval::from_rational(&(&self.zeta * q(2 * n_i)), self.bits),
        };
        let cusp = match c_mode {
            CMode::ExactC => Interval::from_int(self.c_exact, self.bits),
            CMode::BoundC => self.c_bound.clone().ok_or_else(|| {
                Error::Hypothesis(format!("the bound for c needs D > {SMALL_D_LIMIT}, got {}", self.disc))
            })?,
        };
        let penalty = self.penalty(case).clone();
        let total = volume.add(&cusp).sub(&penalty);
        Ok(C1Bound { n, case, c_mode, zeta, volume, cusp, penalty, total })
    }
}

/// Certified lower bound for `c_1^2` with its terms.
#[derive(Clone, Debug)]
pub struct C1Bound {
    pub n: u64,
    pub case: PenaltyCase,
    pub c_mode: CMode,
    pub zeta: ZetaSource,
    pub volume: Interval,
    pub cusp: Interval,
    pub penalty: Interval,
    pub total: Interval,
}

impl C1Bound {
    pub fn is_positive(&self) -> bool {
        self.total.is_positive()
    }

    pub fn lower(&self) -> BigRational {
        self.total.lower()
    }
}

/// Lower bound for `c_1^2(X_0^+(p))` with `n = N p + 1`.
pub fn c1sq_lower_bound(disc: i64, n: u64, case: PenaltyCase, c_mode: CMode, zeta: ZetaSource) -> Result<C1Bound> {
    if c_mode == CMode::BoundC && disc <= SMALL_D_LIMIT {
        return Err(Error::Hypothesis(format!("the bound for c needs D > {SMALL_D_LIMIT}, got {disc}")));
    }
    DiscTerms::new(disc, DEFAULT_BITS)?.c1sq(n, case, c_mode, zeta)
}

/// Chern numbers and verdict. In exact mode `c2` and `chi` are affine in the
/// unknown number of new `(2;1,1)` points: value `c2 + c2_a2_coeff * a2_new`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernReport {
    pub disc: i64,
    pub prime_norm: Option<u64>,
    pub n: u64,
    #[serde(with = "crate::serde_util::rational")]
    pub zeta: BigRational,
    pub c: i64,
    pub l: u64,
    pub counts: EllipticCounts,
    pub mode: ChernMode,
    #[serde(with = "crate::serde_util::rational")]
    pub c1_sq: BigRational,
    pub c1_sq_is_lower_bound: bool,
    #[serde(with = "crate::serde_util::rational")]
    pub c2: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub c2_a2_coeff: BigRational,
    pub c2_is_lower_bound: bool,
    #[serde(with = "crate::serde_util::rational")]
    pub chi: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub chi_a2_coeff: BigRational,
    pub verdict: Verdict,
}

impl ChernReport {
    /// `chi` is certainly `> 1` (for every value of the open `a2`).
    pub fn chi_exceeds_one(&self) -> bool {
        self.chi > q(1)
    }
}

fn decide(c1_sq: &BigRational, chi: &BigRational) -> Verdict {
    if c1_sq.is_positive() && *chi > q(1) {
        Verdict::GeneralType
    } else {
        Verdict::Inconclusive
    }
}

/// Assemble `c_1^2`, `c_2` and `chi` from `W Gamma_0(p)` counts.
///
/// Exact mode expects exact counts and an exact `zeta`; paper-bound mode
/// expects upper-bound counts and a lower bound for `zeta`, and keeps only
/// the volume term of `c_2`.
pub fn chern_numbers(
    disc: i64,
    n: u64,
    counts: &EllipticCounts,
    cusp: &CuspCycle,
    zeta: &BigRational,
    mode: ChernMode,
) -> Result<ChernReport> {
    let expected = match mode {
        ChernMode::Exact => CountMode::Exact,
        ChernMode::PaperBound => CountMode::UpperBound,
    };
    if counts.mode != expected {
        return Err(Error::MixedModes(format!("{mode:?} Chern numbers with {:?} counts", counts.mode)));
    }
    if counts.group != GroupTag::WGamma0 && !(n == 0 && counts.group == GroupTag::Full) {
        return Err(Error::MixedModes(format!("counts for {:?}, expected W Gamma_0", counts.group)));
    }
    let nq = q(n);
    let c = q(cusp.c);
    let l = q(cusp.l);
    let c = &c;
    let k = counts;
    let c1_sq = &nq * zeta * q(2) + c - frac(1, 3) * &k.a3_plus - &k.a4_plus - frac(8, 3) * &k.a6_plus;
    let (c2, coeff) = match mode {
        ChernMode::Exact => {
            let c2 = &nq * zeta
                + &l
                + frac(3, 2) * &k.a2
                + frac(5, 3) * &k.a3_plus
                + frac(8, 3) * &k.a3_minus
                + frac(7, 4) * &k.a4_plus
                + frac(15, 4) * &k.a4_minus
                + frac(11, 6) * &k.a6_plus
                + frac(35, 6) * &k.a6_minus;
            let coeff = if k.a2_open { frac(3, 2) } else { q(0) };
            (c2, coeff)
        }
        ChernMode::PaperBound => (&nq * zeta, q(0)),
    };
    let chi = (&c1_sq + &c2) / q(12);
    let verdict = decide(&c1_sq, &chi);
    Ok(ChernReport {
        disc,
        prime_norm: n.checked_sub(1).filter(|_| n > 0),
        n,
        zeta: zeta.clone(),
        c: cusp.c,
        l: cusp.l as u64,
        counts: counts.clone(),
        mode,
        c1_sq,
        c1_sq_is_lower_bound: mode == ChernMode::PaperBound,
        c2,
        chi_a2_coeff: &coeff / q(12),
        c2_a2_coeff: coeff,
        c2_is_lower_bound: mode == ChernMode::PaperBound,
        chi,
        verdict,
    })
}

/// Exact `W Gamma_0(p)` counts from explicit representatives.
pub fn exact_w_counts(
    field: &FieldContext,
    prime: &PrimeIdealData,
    config: &ClassifierConfig,
) -> Result<EllipticCounts> {
    let cat = enumerate_auto(field, config.max_height)?;
    let g0 = gamma0_elliptic_points(field, &cat, prime)?;
    let al = atkin_lehner_action(&cat, &g0)?;
    atkin_lehner_refine(&counts_gamma0_exact(&g0), prime, Some(&al))
}

/// Enumerate with increasing height until the completeness check passes.
pub fn enumerate_auto(field: &FieldContext, max_height: u32) -> Result<elliptic::Catalogue> {
    let mut last = None;
    for h in 1..=max_height {
        match elliptic::enumerate_catalogue(field, h) {
            Ok(c) => return Ok(c),
            Err(e @ Error::Certificate { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(Error::Certificate { height: 0, detail: "no heights tried".into() }))
}

/// Apply the general-type criterion to `X_0^+(p)`.
pub fn classify(
    field: &FieldContext,
    prime: &PrimeIdealData,
    mode: ChernMode,
    config: &ClassifierConfig,
) -> Result<ChernReport> {
    let disc = field.disc();
    if disc <= 12 {
        return Err(Error::Hypothesis(format!("the Chern formulas need D > 12, got {disc}")));
    }
    let n = prime.index;
    match mode {
        ChernMode::Exact => {
            let counts = exact_w_counts(field, prime, config)?;
            let cusp = cusp::cusp_resolution(field)?;
            let zeta = cusp::zeta_minus_one(field).zeta;
            let mut r = chern_numbers(disc, n, &counts, &cusp, &zeta, ChernMode::Exact)?;
            r.prime_norm = Some(prime.norm);
            Ok(r)
        }
        ChernMode::PaperBound => {
            let mut r = classify_index(disc, n, PenaltyCase::of_prime(prime), config)?;
            r.prime_norm = Some(prime.norm);
            Ok(r)
        }
    }
}

/// Paper-bound classification for a free index `n` and penalty case.
pub fn classify_index(disc: i64, n: u64, case: PenaltyCase, config: &ClassifierConfig) -> Result<ChernReport> {
    let terms = DiscTerms::new(disc, config.bits)?;
    let c1 = terms.c1sq(n, case, CMode::for_disc(disc), config.zeta_policy.source(disc))?;
    let cusp = cusp::cusp_resolution_disc(disc);
    let c2_iv = terms.vol_bound_per_n.scale_int(n as i64).div_int(2);
    let c1_sq = c1.lower();
    let c2 = c2_iv.lower();
    let chi = (&c1_sq + &c2) / q(12);
    let general = c1.is_positive() && c2_lower_check(disc, n);
    let mut counts = EllipticCounts::zero(GroupTag::WGamma0, CountMode::UpperBound);
    counts.a2_open = true;
    Ok(ChernReport {
        disc,
        prime_norm: None,
        n,
        zeta: terms.zeta.clone(),
        c: cusp.c,
        l: cusp.l as u64,
        counts,
        mode: ChernMode::PaperBound,
        c1_sq,
        c1_sq_is_lower_bound: true,
        c2,
        c2_a2_coeff: q(0),
        c2_is_lower_bound: true,
        chi,
        chi_a2_coeff: q(0),
        verdict: if general { Verdict::GeneralType } else { Verdict::Inconclusive },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSource {
    Computed,
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exclusion {
    pub n: u64,
    pub reason: PenaltyCase,
}

/// General type for `n >= n_min`, except the excluded `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub disc: i64,
    /// `None` when no `n` up to the search limit passes.
    pub n_min: Option<u64>,
    pub exclusions: Vec<Exclusion>,
    pub source: RowSource,
}

impl TableRow {
    pub fn from_paper(row: &PaperRow) -> TableRow {
        let reason = |n| if n == 5 { PenaltyCase::P2Inert } else { PenaltyCase::P3Inert };
        TableRow {
            disc: row.disc,
            n_min: Some(row.n_min),
            exclusions: row.exclusions.iter().map(|&n| Exclusion { n, reason: reason(n) }).collect(),
            source: RowSource::Paper,
        }
    }

    /// `(n_min, exclusions >= n_min)` with an excluded `n_min` moved up, the
    /// form in which the published table states its rows.
    pub fn normalized(&self) -> (Option<u64>, Vec<u64>) {
        let Some(mut n) = self.n_min else { return (None, vec![]) };
        let mut ex: BTreeSet<u64> = self.exclusions.iter().map(|e| e.n).filter(|&e| e >= n).collect();
        while ex.remove(&n) {
            n += 1;
        }
        (Some(n), ex.into_iter().collect())
    }

    pub fn excludes(&self, n: u64) -> bool {
        self.exclusions.iter().any(|e| e.n == n)
    }

    /// Text form such as `n>=6; n!=10`.
    pub fn describe(&self) -> String {
        let (n, ex) = self.normalized();
        let Some(n) = n else { return "none".into() };
        let mut s = if n <= 3 { "any n".to_string() } else { format!("n>={n}") };
        for e in ex {
            s.push_str(&format!("; n!={e}"));
        }
        s
    }
}

/// Terms behind one evaluation, for discrepancy reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermBreakdown {
    pub n: u64,
    pub case: PenaltyCase,
    pub zeta: ZetaSource,
    pub c_mode: CMode,
    pub volume: f64,
    pub cusp: f64,
    pub penalty: f64,
    #[serde(with = "crate::serde_util::rational")]
    pub c1_sq_lower: BigRational,
    pub c1_sq_positive: bool,
    pub c2_check: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub disc: i64,
    pub computed: String,
    pub paper: String,
    pub terms: Vec<TermBreakdown>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub config: ClassifierConfig,
    pub n_max: u64,
    pub rows: Vec<TableRow>,
    pub discrepancies: Vec<Discrepancy>,
}

/// Narrow class number one primes `D = 1 mod 4` with `12 < D <= dmax`.
pub fn table_discriminants(dmax: i64) -> Vec<i64> {
    (13..=dmax)
        .filter(|&d| d % 4 == 1 && is_prime(d as u64))
        .filter(|&d| crate::forms::h_narrow_indefinite(d).map(|h| h == 1).unwrap_or(false))
        .collect()
}

/// `n - 1` is the norm of a prime ideal.
pub fn achievable_index(disc: i64, n: u64) -> bool {
    let Some(q) = n.checked_sub(1) else { return false };
    if q >= 2 && is_prime(q) {
        return kronecker_prime(disc, q) != -1;
    }
    let r = crate::arith::isqrt_u64(q);
    r * r == q && is_prime(r) && kronecker_prime(disc, r) == -1
}

struct RowEval {
    terms: DiscTerms,
    zeta: ZetaSource,
    c_mode: CMode,
}

impl RowEval {
    fn passes(&self, n: u64, case: PenaltyCase) -> Result<bool> {
        Ok(c2_lower_check(self.terms.disc, n) && self.terms.c1sq(n, case, self.c_mode, self.zeta)?.is_positive())
    }

    fn breakdown(&self, n: u64, case: PenaltyCase) -> Result<TermBreakdown> {
        let b = self.terms.c1sq(n, case, self.c_mode, self.zeta)?;
        Ok(TermBreakdown {
            n,
            case,
            zeta: self.zeta,
            c_mode: self.c_mode,
            volume: b.volume.midpoint_f64(),
            cusp: b.cusp.midpoint_f64(),
            penalty: b.penalty.midpoint_f64(),
            c1_sq_positive: b.is_positive(),
            c1_sq_lower: b.lower(),
            c2_check: c2_lower_check(self.terms.disc, n),
        })
    }
}

/// One row of the table.
pub fn table_row(disc: i64, n_max: u64, config: &ClassifierConfig) -> Result<TableRow> {
    let eval = RowEval {
        terms: DiscTerms::new(disc, config.bits)?,
        zeta: config.zeta_policy.source(disc),
        c_mode: CMode::for_disc(disc),
    };
    let mut n_min = None;
    for n in 3..=n_max {
        if config.strict_n && !achievable_index(disc, n) {
            continue;
        }
        if eval.passes(n, PenaltyCase::Generic)? {
            n_min = Some(n);
            break;
        }
    }
    let mut exclusions = vec![];
    for (n, p, case) in [(5u64, 2u64, PenaltyCase::P2Inert), (10, 3, PenaltyCase::P3Inert)] {
        if kronecker_prime(disc, p) == -1 && !eval.passes(n, case)? {
            exclusions.push(Exclusion { n, reason: case });
        }
    }
    Ok(TableRow { disc, n_min, exclusions, source: RowSource::Computed })
}

fn discrepancy(
    disc: i64,
    row: &TableRow,
    paper: &TableRow,
    n_max: u64,
    config: &ClassifierConfig,
) -> Result<Discrepancy> {
    let eval = RowEval {
        terms: DiscTerms::new(disc, config.bits)?,
        zeta: config.zeta_policy.source(disc),
        c_mode: CMode::for_disc(disc),
    };
    let mut ns = BTreeSet::new();
    for r in [row, paper] {
        if let (Some(n), _) = r.normalized() {
            ns.extend([n.saturating_sub(1), n]);
        }
        ns.extend(r.exclusions.iter().map(|e| e.n));
    }
    let mut terms = vec![];
    for n in ns.into_iter().filter(|&n| (3..=n_max).contains(&n)) {
        terms.push(eval.breakdown(n, PenaltyCase::for_index(disc, n))?);
    }
    Ok(Discrepancy { disc, computed: row.describe(), paper: paper.describe(), terms })
}

/// Rows for every `D` in `discs` (ascending), compared with the published
/// table.
pub fn theorem_table(discs: &[i64], n_max: u64, config: &ClassifierConfig) -> Result<TableReport> {
    let mut discs: Vec<i64> = discs.to_vec();
    discs.sort_unstable();
    discs.dedup();
    let rows: Vec<TableRow> = discs.par_iter().map(|&d| table_row(d, n_max, config)).collect::<Result<_>>()?;
    let mut discrepancies = vec![];
    for row in &rows {
        if config.strict_n {
            continue;
        }
        if let Some(p) = fixtures::paper_row(row.disc) {
            let paper = TableRow::from_paper(&p);
            if row.normalized() != paper.normalized() {
                discrepancies.push(discrepancy(row.disc, row, &paper, n_max, config)?);
            }
        }
    }
    Ok(TableReport { config: *config, n_max, rows, discrepancies })
}

/// Rows in CSV form: `disc,n_min,exclusions,normalized`.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("disc,n_min,exclusions,statement\n");
    for r in rows {
        let n = r.n_min.map(|n| n.to_string()).unwrap_or_default();
        let ex: Vec<String> = r.exclusions.iter().map(|e| e.n.to_string()).collect();
        s.push_str(&format!("{},{},{},{}\n", r.disc, n, ex.join(";"), r.describe()));
    }
    s
}

/// Genus of `X_0(N)`.
pub fn genus_gamma0_rational(level: u64) -> Result<u64> {
    if level == 0 {
        return Err(Error::Parse("level must be positive".into()));
    }
    let fac = crate::arith::factorize(level);
    let mut mu = BigRational::from_integer(level.into());
    let mut nu2 = 1i64;
    let mut nu3 = 1i64;
    for &(p, e) in &fac {
        mu *= BigRational::new((p + 1).into(), p.into());
        nu2 *= if p == 2 {
            if e >= 2 {
                0
            } else {
                1
            }
        } else {
            1 + kronecker_prime(-4, p) as i64
        };
        nu3 *= if p == 3 {
            if e >= 2 {
                0
            } else {
                1
            }
        } else {
            1 + kronecker_prime(-3, p) as i64
        };
    }
    let nu_inf: u64 =
        crate::arith::divisors(level).into_iter().map(|d| euler_phi(num_integer::gcd(d, level / d))).sum();
    let g = BigRational::one() + mu / q(12) - frac(nu2, 4) - frac(nu3, 3) - BigRational::new(nu_inf.into(), 2.into());
    if !g.is_integer() || g.is_negative() {
        return Err(Error::Internal(format!("genus formula gave {g} for N = {level}")));
    }
    Ok(g.to_integer().to_u64().unwrap())
}

fn euler_phi(n: u64) -> u64 {
    crate::arith::factorize(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// The unique `(n3, n4)` within the available counts making
/// `vol + cusp + n3/3 + n4/2` an integer, and that integer.
pub fn curve_chern_integrality(
    vol_term: &BigRational,
    cusp_term: i64,
    avail_n3: u64,
    avail_n4: u64,
) -> Result<(u64, u64, i64)> {
    let mut found = vec![];
    for n3 in 0..=avail_n3 {
        for n4 in 0..=avail_n4 {
            let v = vol_term + q(cusp_term) + frac(n3 as i64, 3) + frac(n4 as i64, 2);
            if v.is_integer() {
                found.push((n3, n4, v.to_integer().to_i64().unwrap()));
            }
        }
    }
    match found.len() {
        1 => Ok(found[0]),
        k => Err(Error::Integrality(k)),
    }
}

/// `F^2 = 2g - 2 + c_1.F` for a smooth curve `F`.
pub fn adjunction_self_intersection(c1_f: i64, genus: u64) -> i64 {
    2 * genus as i64 - 2 + c1_f
}
