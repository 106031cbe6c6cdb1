//! Reference data: the general-type table and the worked `D = 5` and
//! `D = 13` examples.

use num_complex::Complex64;

use crate::elliptic::{Mat2, Point, RotationType};
use crate::error::{Error, Result};
use crate::field::FieldElement;

pub const PAPER_TABLE_CSV: &str = include_str!("../data/paper_table.csv");

/// One row: general type for every `n >= n_min` outside `exclusions`.
/// `from_here` marks the open-ended row covering every larger `D`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PaperRow {
    pub disc: i64,
    pub n_min: u64,
    pub exclusions: Vec<u64>,
    pub from_here: bool,
}

pub fn parse_table(csv: &str) -> Result<Vec<PaperRow>> {
    let mut rows = vec![];
    for (i, line) in csv.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("table line {}: {line:?}", i + 1));
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(bad());
        }
        let (d, from_here) = match cols[0].strip_suffix('+') {
            Some(d) => (d, true),
            None => (cols[0], false),
        };
        let exclusions = if cols[2].is_empty() {
            vec![]
        } else {
            cols[2].split(';').map(|s| s.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        rows.push(PaperRow {
            disc: d.parse().map_err(|_| bad())?,
            n_min: cols[1].parse().map_err(|_| bad())?,
            exclusions,
            from_here,
        });
    }
    Ok(rows)
}

pub fn paper_table() -> Vec<PaperRow> {
    parse_table(PAPER_TABLE_CSV).expect("embedded table parses")
}

/// Row of the table governing `disc`, if any.
pub fn paper_row(disc: i64) -> Option<PaperRow> {
    let rows = paper_table();
    if let Some(r) = rows.iter().find(|r| r.disc == disc && !r.from_here) {
        return Some(r.clone());
    }
    rows.into_iter().find(|r| r.from_here && disc >= r.disc).map(|r| PaperRow { disc, from_here: false, ..r })
}

fn m(d: i64, e: [(i64, i64); 4]) -> Mat2 {
    let f = |(u, v): (i64, i64)| FieldElement::new(d, u, v);
    Mat2::new(f(e[0]), f(e[1]), f(e[2]), f(e[3]))
}

/// Isotropy generators for the `Gamma_0((2))`-classes of elliptic points,
/// `D = 5`. Entries are `(u, v)` for `(u + v sqrt 5) / 2`.
pub fn d5_p2_gamma0() -> Vec<(RotationType, Mat2)> {
    let t = RotationType::new;
    vec![
        (t(2, 1), m(5, [(2, 0), (-2, 0), (4, 0), (-2, 0)])),
        (t(2, 1), m(5, [(-2, 0), (-1, 1), (-2, -2), (2, 0)])),
        (t(3, 1), m(5, [(1, 1), (-2, 0), (4, 0), (1, -1)])),
        (t(3, 1), m(5, [(3, 1), (-2, 0), (6, 2), (-1, -1)])),
        (t(3, -1), m(5, [(1, -1), (-1, 1), (-2, -2), (1, 1)])),
        (t(3, -1), m(5, [(-1, -1), (-1, 1), (-8, -4), (3, 1)])),
    ]
}

/// `W Gamma_0((2))`, `D = 5`: both `(2;1,1)` classes are fixed and become
/// one `(4;1,1)` and one `(4;1,-1)` point; the order-3 classes are swapped in
/// pairs.
pub fn d5_p2_atkin_lehner_fixed() -> Vec<RotationType> {
    vec![RotationType::new(4, 1), RotationType::new(4, -1)]
}

/// Isotropy generators for `Gamma_0((4 + sqrt 13))`, `D = 13`.
pub fn d13_p4_gamma0() -> Vec<(RotationType, Mat2)> {
    let t = RotationType::new;
    vec![
        (t(3, 1), m(13, [(-2, 0), (2, 0), (-6, 0), (4, 0)])),
        (t(3, 1), m(13, [(-1, 1), (-4, 0), (5, -1), (3, -1)])),
        (t(3, -1), m(13, [(4, 0), (-1, 1), (-1, -1), (-2, 0)])),
        (t(3, -1), m(13, [(5, 1), (3, 1), (-2, -2), (-3, -1)])),
    ]
}

/// The two `(2;1,1)` points of `Gamma_0((2))`, `D = 13`.
pub fn d13_p2_order_two_points() -> Vec<Point> {
    let s = 13f64.sqrt();
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    vec![((i + one) / 2.0, (i + one) / 2.0), ((i + one) / (3.0 + s), (i - one) / (-3.0 + s))]
}

/// Published counts for `D = 13`, `p = (2)`: `Gamma_0` then `W Gamma_0`
/// (`a2` of the latter excludes the new points).
pub struct D13P2Counts {
    pub gamma0: [u64; 3],
    pub w_a3_plus: u64,
    pub w_a3_minus: u64,
    pub w_a4_plus: u64,
    pub w_a4_minus: u64,
}

pub fn d13_p2_counts() -> D13P2Counts {
    D13P2Counts { gamma0: [2, 4, 4], w_a3_plus: 2, w_a3_minus: 2, w_a4_plus: 1, w_a4_minus: 1 }
}
