use hms_core::chern::{
    c1sq_lower_bound, c2_lower_check, chern_numbers, classify, classify_index, table_discriminants, table_row,
    theorem_table, CMode, ChernMode, ChernReport, ClassifierConfig, PenaltyCase, TableRow, Verdict, ZetaPolicy,
    ZetaSource, SMALL_D_LIMIT,
};
use hms_core::cusp::CuspCycle;
use hms_core::elliptic::{CountMode, EllipticCounts, GroupTag};
use hms_core::{make_field, split_prime, Error};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn table_disc() -> impl Strategy<Value = i64> {
    prop::sample::select(table_discriminants(1200))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_nondecreasing_in_n(d in table_disc(), n in 3u64..300) {
        let c_mode = CMode::for_disc(d);
        for case in [PenaltyCase::Generic, PenaltyCase::P2Inert, PenaltyCase::P3Inert] {
            for z in [ZetaSource::Bound, ZetaSource::Exact] {
                let a = c1sq_lower_bound(d, n, case, c_mode, z).unwrap().lower();
                let b = c1sq_lower_bound(d, n + 1, case, c_mode, z).unwrap().lower();
                prop_assert!(a <= b);
            }
        }
        prop_assert!(!c2_lower_check(d, n) || c2_lower_check(d, n + 1));
    }

    #[test]
    fn bound_zeta_below_exact(d in table_disc(), n in 3u64..300) {
        let c_mode = CMode::for_disc(d);
        let b = c1sq_lower_bound(d, n, PenaltyCase::Generic, c_mode, ZetaSource::Bound).unwrap();
        let e = c1sq_lower_bound(d, n, PenaltyCase::Generic, c_mode, ZetaSource::Exact).unwrap();
        prop_assert!(b.total.upper() <= e.total.upper());
    }

    #[test]
    fn binary_search_agrees_with_scan(d in table_disc()) {
        let config = ClassifierConfig::default();
        let row = table_row(d, 400, &config).unwrap();
        let passes = |n: u64| classify_index(d, n, PenaltyCase::Generic, &config).unwrap().verdict == Verdict::GeneralType;
        let (mut lo, mut hi) = (3u64, 400u64);
        if !passes(hi) {
            prop_assert_eq!(row.n_min, None);
        } else {
            while lo < hi {
                let mid = (lo + hi) / 2;
                if passes(mid) { hi = mid } else { lo = mid + 1 }
            }
            prop_assert_eq!(row.n_min, Some(lo));
        }
    }
}

#[test]
fn c2_check_examples() {
    assert!(c2_lower_check(13, 93));
    assert!(!c2_lower_check(13, 92));
    assert!(c2_lower_check(17, 62));
    assert!(!c2_lower_check(17, 61));
    assert!(c2_lower_check(853, 3));
}

#[test]
fn bound_c_needs_large_d() {
    let r = c1sq_lower_bound(SMALL_D_LIMIT, 3, PenaltyCase::Generic, CMode::BoundC, ZetaSource::Bound);
    assert!(matches!(r, Err(Error::Hypothesis(_))));
    assert!(c1sq_lower_bound(853, 3, PenaltyCase::Generic, CMode::BoundC, ZetaSource::Bound).unwrap().is_positive());
    assert!(c1sq_lower_bound(853, 5, PenaltyCase::P2Inert, CMode::BoundC, ZetaSource::Bound).unwrap().is_positive());
}

#[test]
fn d109_bound_zeta_threshold() {
    let f = |n| c1sq_lower_bound(109, n, PenaltyCase::Generic, CMode::ExactC, ZetaSource::Bound).unwrap();
    assert!(!f(4).is_positive());
    assert!(f(5).is_positive());
}

#[test]
fn zero_inputs_give_zero() {
    let counts = EllipticCounts::zero(GroupTag::Full, CountMode::Exact);
    let cusp = CuspCycle { bs: vec![], c: 0, l: 0 };
    let r = chern_numbers(13, 0, &counts, &cusp, &q(1, 6), ChernMode::Exact).unwrap();
    assert!(r.c1_sq.is_zero() && r.c2.is_zero());
    let bound = EllipticCounts::zero(GroupTag::Full, CountMode::UpperBound);
    assert!(matches!(chern_numbers(13, 0, &bound, &cusp, &q(1, 6), ChernMode::Exact), Err(Error::MixedModes(_))));
}

fn exact_cases() -> Vec<(i64, u64)> {
    let mut v = vec![];
    for d in [13, 17, 29, 37, 41] {
        for p in [2, 3, 5, 7] {
            v.push((d, p));
        }
    }
    v
}

#[test]
fn exact_mode_invariants_and_bound_below_exact() {
    let config = ClassifierConfig::default();
    for (d, p) in exact_cases() {
        let f = make_field(d).unwrap();
        for prime in split_prime(&f, p).unwrap() {
            let ex = classify(&f, &prime, ChernMode::Exact, &config).unwrap();
            assert_eq!(&ex.chi * q(12, 1), &ex.c1_sq + &ex.c2, "D={d} q={}", prime.norm);
            assert_eq!(&ex.chi_a2_coeff * q(12, 1), ex.c2_a2_coeff);
            assert!(ex.counts.is_nonnegative());
            if ex.c1_sq <= q(0, 1) {
                assert_eq!(ex.verdict, Verdict::Inconclusive);
            }
            let pb = classify(&f, &prime, ChernMode::PaperBound, &config).unwrap();
            assert!(pb.c1_sq <= ex.c1_sq, "D={d} q={}: {} > {}", prime.norm, pb.c1_sq, ex.c1_sq);
            assert!(pb.c2 <= ex.c2);
            if pb.verdict == Verdict::GeneralType {
                assert_eq!(ex.verdict, Verdict::GeneralType);
            }
        }
    }
}

#[test]
fn classify_examples() {
    let config = ClassifierConfig::default();
    let f = make_field(13).unwrap();
    let big = (92u64..)
        .filter(|&p| hms_core::arith::is_prime(p))
        .flat_map(|p| split_prime(&f, p).unwrap())
        .find(|p| p.norm >= 92)
        .unwrap();
    let r = classify(&f, &big, ChernMode::PaperBound, &config).unwrap();
    assert_eq!(r.verdict, Verdict::GeneralType);
    assert!(r.c1_sq_is_lower_bound && r.c2_is_lower_bound);
    let r = classify_index(97, 5, PenaltyCase::for_index(97, 5), &config).unwrap();
    assert_eq!(r.verdict, Verdict::GeneralType);
}

#[test]
fn table_is_deterministic_and_policy_sensitive() {
    let discs = table_discriminants(300);
    let config = ClassifierConfig::default();
    let a = theorem_table(&discs, 200, &config).unwrap();
    let mut rev = discs.clone();
    rev.reverse();
    let b = theorem_table(&rev, 200, &config).unwrap();
    assert_eq!(a, b);
    for row in &a.rows {
        assert!(row.n_min.unwrap() >= 3);
        for e in &row.exclusions {
            assert!(e.n == 5 || e.n == 10);
        }
    }
    let bound = ClassifierConfig { zeta_policy: ZetaPolicy::Bound, ..config };
    let c = theorem_table(&discs, 200, &bound).unwrap();
    for (x, y) in a.rows.iter().zip(&c.rows) {
        assert!(x.n_min <= y.n_min, "exact zeta never raises n_min at D={}", x.disc);
    }
}

#[test]
fn strict_mode_uses_prime_norms() {
    let config = ClassifierConfig { strict_n: true, ..ClassifierConfig::default() };
    for d in [13, 17, 29, 101] {
        let row = table_row(d, 400, &config).unwrap();
        let n = row.n_min.unwrap();
        assert!(hms_core::chern::achievable_index(d, n));
        let loose = table_row(d, 400, &ClassifierConfig::default()).unwrap();
        assert!(n >= loose.n_min.unwrap());
    }
}

#[test]
fn reports_round_trip_through_json() {
    let f = make_field(13).unwrap();
    let p = split_prime(&f, 2).unwrap().remove(0);
    let r = classify(&f, &p, ChernMode::Exact, &ClassifierConfig::default()).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    assert!(s.contains("\"c1_sq\":[-3,1]"));
    let back: ChernReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
    let row = table_row(29, 200, &ClassifierConfig::default()).unwrap();
    let back: TableRow = serde_json::from_str(&serde_json::to_string(&row).unwrap()).unwrap();
    assert_eq!(back, row);
}
