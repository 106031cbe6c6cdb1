//! Elliptic fixed points: counts for `PSL_2(O_E)`, `Gamma_0(p)` and
//! `W Gamma_0(p)`, and explicit class representatives.

pub mod cosets;
pub mod enumerate;
pub mod matrix;
pub mod reduce;
pub mod residue;
pub mod rotation;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldContext, PrimeIdealData};
use crate::forms;
use crate::interval::Interval;

pub use cosets::count_fixed_cosets;
pub use enumerate::{
    atkin_lehner_action, enumerate_catalogue, enumerate_elliptic_reps, gamma0_elliptic_points, scan_elliptic_classes,
    AtkinLehnerData, Catalogue, EllipticClassRep, Gamma0Data, Gamma0Point,
};
pub use matrix::{Mat2, Point};
pub use rotation::{rotation_type, RotationType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    Exact,
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupTag {
    Full,
    Gamma0,
    WGamma0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSubMode {
    Analytic,
    ClassNumberThreefold,
}

/// Numbers of elliptic points by rotation type. In upper-bound mode the
/// values are bounds; `a2_open` marks an unknown number of additional
/// `(2;1,1)` points created by the Atkin-Lehner involution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticCounts {
    pub group: GroupTag,
    pub mode: CountMode,
    pub sub_mode: Option<BoundSubMode>,
    #[serde(with = "crate::serde_util::rational")]
    pub a2: BigRational,
    pub a2_open: bool,
    #[serde(with = "crate::serde_util::rational")]
    pub a3_plus: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub a3_minus: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub a4_plus: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub a4_minus: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub a6_plus: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub a6_minus: BigRational,
    pub assumptions: Vec<String>,
}

pub const A3_MINUS_ASSUMPTION: &str = "a3_minus = h(-3D)/2";

fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl EllipticCounts {
    pub fn zero(group: GroupTag, mode: CountMode) -> Self {
        EllipticCounts {
            group,
            mode,
            sub_mode: None,
            a2: q(0),
            a2_open: false,
            a3_plus: q(0),
            a3_minus: q(0),
            a4_plus: q(0),
            a4_minus: q(0),
            a6_plus: q(0),
            a6_minus: q(0),
            assumptions: vec![],
        }
    }

    pub fn entries(&self) -> [(&'static str, &BigRational); 7] {
        [
            ("a2", &self.a2),
            ("a3_plus", &self.a3_plus),
            ("a3_minus", &self.a3_minus),
            ("a4_plus", &self.a4_plus),
            ("a4_minus", &self.a4_minus),
            ("a6_plus", &self.a6_plus),
            ("a6_minus", &self.a6_minus),
        ]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries().iter().all(|(_, v)| !v.is_negative())
    }
}

fn require_large(field: &FieldContext) -> Result<()> {
    if field.disc() <= 12 {
        return Err(Error::Hypothesis(format!("elliptic counts need D > 12, got {}", field.disc())));
    }
    Ok(())
}

/// Exact counts for `PSL_2(O_E)`: `a2 = h(-4D)`, `a3+ = h(-3D)/2`, and
/// `a3- = h(-3D)/2` under an explicit assumption.
pub fn counts_full_group(field: &FieldContext, assume_a3_minus: bool) -> Result<EllipticCounts> {
    require_large(field)?;
    let d = field.disc();
    let h4 = forms::h_definite(4 * d)?;
    let h3 = forms::h_definite(3 * d)?;
    if !assume_a3_minus {
        return Err(Error::Hypothesis(format!(
            "a3_minus is only available under the assumption {A3_MINUS_ASSUMPTION}"
        )));
    }
    let mut c = EllipticCounts::zero(GroupTag::Full, CountMode::Exact);
    c.a2 = q(h4);
    c.a3_plus = BigRational::new(h3.into(), 2.into());
    c.a3_minus = c.a3_plus.clone();
    c.assumptions.push(A3_MINUS_ASSUMPTION.into());
    Ok(c)
}

/// Exact counts from explicit representatives, without assumptions.
pub fn counts_from_catalogue(cat: &Catalogue) -> EllipticCounts {
    let mut c = EllipticCounts::zero(GroupTag::Full, CountMode::Exact);
    for cls in &cat.classes {
        bump(&mut c, cls.rotation);
    }
    c
}

fn bump(c: &mut EllipticCounts, t: RotationType) {
    let slot = match (t.n, t.b) {
        (2, _) => &mut c.a2,
        (3, 1) => &mut c.a3_plus,
        (3, -1) => &mut c.a3_minus,
        (4, 1) => &mut c.a4_plus,
        (4, -1) => &mut c.a4_minus,
        (6, 1) => &mut c.a6_plus,
        (6, -1) => &mut c.a6_minus,
        _ => return,
    };
    *slot += q(1);
}

/// Exact counts for `Gamma_0(p)` from explicit representatives.
pub fn counts_gamma0_exact(g0: &Gamma0Data) -> EllipticCounts {
    let mut c = EllipticCounts::zero(GroupTag::Gamma0, CountMode::Exact);
    for p in &g0.points {
        bump(&mut c, p.rotation);
    }
    c
}

fn upper(iv: &Interval) -> BigRational {
    iv.upper()
}

/// `(k / pi) sqrt(m D) log(m D)` as an interval.
pub fn log_term(disc: i64, m: i64, k_num: i64, k_den: i64, bits: u32) -> Interval {
    let md = Interval::from_int(m * disc, bits);
    md.sqrt().mul(&md.ln()).scale_int(k_num).div(&Interval::pi(bits).scale_int(k_den)).expect("pi > 0")
}

/// Upper bounds for `Gamma_0(p)` counts, valid for every prime `p`.
pub fn bounds_gamma0(field: &FieldContext, sub_mode: BoundSubMode, bits: u32) -> Result<EllipticCounts> {
    require_large(field)?;
    let d = field.disc();
    let mut c = EllipticCounts::zero(GroupTag::Gamma0, CountMode::UpperBound);
    c.sub_mode = Some(sub_mode);
    match sub_mode {
        BoundSubMode::Analytic => {
            c.a2 = upper(&log_term(d, 4, 3, 1, bits));
            c.a3_plus = upper(&log_term(d, 3, 3, 2, bits));
        }
        BoundSubMode::ClassNumberThreefold => {
            c.a2 = q(3 * forms::h_definite(4 * d)?);
            c.a3_plus = BigRational::new((3 * forms::h_definite(3 * d)?).into(), 2.into());
        }
    }
    c.a3_minus = c.a3_plus.clone();
    c.assumptions.push(A3_MINUS_ASSUMPTION.into());
    Ok(c)
}

fn halve_exact(total: &BigRational, fixed: u64, what: &str) -> Result<BigRational> {
    let rest = total - q(fixed);
    if rest.is_negative() || !rest.is_integer() || !rest.to_integer().is_even() {
        return Err(Error::InconsistentCounts(format!("{what}: {total} points with {fixed} fixed")));
    }
    Ok(rest / q(2))
}

/// Counts for `W Gamma_0(p)` from counts for `Gamma_0(p)`.
///
/// Points of order 4 or 6 only arise from fixed points of `W` when `p` is
/// the inert prime `(2)` or `(3)`. In exact mode those fixed points must be
/// supplied; in upper-bound mode the worst case for `c_1^2` is used.
pub fn atkin_lehner_refine(
    counts: &EllipticCounts,
    prime: &PrimeIdealData,
    al: Option<&AtkinLehnerData>,
) -> Result<EllipticCounts> {
    if counts.group != GroupTag::Gamma0 {
        return Err(Error::Hypothesis("atkin_lehner_refine expects Gamma_0 counts".into()));
    }
    let mut w = EllipticCounts::zero(GroupTag::WGamma0, counts.mode);
    w.sub_mode = counts.sub_mode;
    w.assumptions = counts.assumptions.clone();
    w.a2_open = true;
    match counts.mode {
        CountMode::Exact => {
            let t = |n, b| RotationType::new(n, b);
            let (f4p, f4m, f6p, f6m) = match al {
                Some(al) => {
                    if let Some(f) = al.fixed.iter().find(|f| ![4, 6].contains(&f.1.n) || f.1.b.abs() != 1) {
                        return Err(Error::InconsistentCounts(format!("unexpected fixed type {}", f.1)));
                    }
                    (
                        al.fixed_of_type(t(4, 1)),
                        al.fixed_of_type(t(4, -1)),
                        al.fixed_of_type(t(6, 1)),
                        al.fixed_of_type(t(6, -1)),
                    )
                }
                None if prime.is_inert_two() || prime.is_inert_three() => {
                    return Err(Error::Hypothesis(format!(
                        "exact counts for the inert prime ({}) need the Atkin-Lehner action",
                        prime.p
                    )));
                }
                None => (0, 0, 0, 0),
            };
            if (f4p + f4m > 0 && !prime.is_inert_two()) || (f6p + f6m > 0 && !prime.is_inert_three()) {
                return Err(Error::InconsistentCounts("points of order 4 or 6 away from (2), (3)".into()));
            }
            w.a4_plus = q(f4p);
            w.a4_minus = q(f4m);
            w.a6_plus = q(f6p);
            w.a6_minus = q(f6m);
            w.a3_plus = halve_exact(&counts.a3_plus, f6p, "a3_plus")?;
            w.a3_minus = halve_exact(&counts.a3_minus, f6m, "a3_minus")?;
            w.a2 = halve_exact(&counts.a2, f4p + f4m, "a2")?;
        }
        CountMode::UpperBound => {
            let two = q(2);
            if prime.is_inert_three() {
                w.a6_plus = counts.a3_plus.clone();
                w.a6_minus = counts.a3_minus.clone();
            } else {
                w.a3_plus = &counts.a3_plus / &two;
                w.a3_minus = &counts.a3_minus / &two;
            }
            if prime.is_inert_two() {
                w.a4_plus = counts.a2.clone();
                w.a4_minus = counts.a2.clone();
            }
            w.a2 = &counts.a2 / &two;
        }
    }
    debug_assert_eq!(&w.a3_plus * q(2) + &w.a6_plus, counts.a3_plus);
    Ok(w)
}

/// Check `2 a3+(W) + a6+(W) = a3+(Gamma_0)` and its minus analogue.
pub fn satisfies_relation(gamma0: &EllipticCounts, w: &EllipticCounts) -> bool {
    let two = q(2);
    &w.a3_plus * &two + &w.a6_plus == gamma0.a3_plus && &w.a3_minus * &two + &w.a6_minus == gamma0.a3_minus
}
