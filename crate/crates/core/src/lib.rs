//! Exact invariants of the Hilbert modular surfaces `X_0^+(p)` attached to
//! real quadratic fields of narrow class number one: class numbers, special
//! zeta values, cusp resolutions, elliptic fixed points, Chern numbers and
//! the general-type criterion, plus the tree-centre formalism for orbits of
//! isogeny graphs.

pub mod arith;
pub mod chern;
pub mod cusp;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod forms;
pub mod interval;
pub mod serde_util;
pub mod tree;

pub use chern::{
    adjunction_self_intersection, c1sq_lower_bound, c2_lower_check, chern_numbers, classify, curve_chern_integrality,
    genus_gamma0_rational, theorem_table, CMode, ChernMode, ChernReport, ClassifierConfig, PenaltyCase, TableRow,
    Verdict, ZetaPolicy,
};
pub use cusp::{cusp_resolution, local_chern_divisor_sum, zeta_minus_one, CuspCycle, ZetaValue};
pub use elliptic::{
    atkin_lehner_refine, bounds_gamma0, count_fixed_cosets, counts_full_group, enumerate_elliptic_reps, rotation_type,
    EllipticClassRep, EllipticCounts, Mat2, RotationType,
};
pub use error::{Error, Result};
pub use field::{make_field, split_prime, FieldContext, FieldElement, PrimeIdealData, Splitting};
pub use forms::{h_definite, h_narrow_indefinite, ClassNumberCache, FormTriple};
pub use interval::Interval;
pub use tree::{tree_center, verify_center_invariance, verify_equidistance, CenterResult, GroupAction, TreeGraph};
