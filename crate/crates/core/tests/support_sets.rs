use icpen_core::{
    maximal_intersections, maximal_intersections_truncated, support_for, Dataset, Observation,
};
use proptest::prelude::*;

fn build(rows: &[(f64, f64, f64)]) -> Dataset {
    Dataset::new(
        rows.iter()
            .map(|&(l, r, v)| Observation::new(l, r, vec![0.0]).with_truncation(v))
            .collect(),
    )
    .unwrap()
}

fn rows_strategy(max: usize) -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((0u8..12, 1u8..6, any::<bool>(), 0u8..=100), 1..max).prop_map(|v| {
        v.into_iter()
            .map(|(l, w, cens, frac)| {
                let l = l as f64 * 0.5;
                let r = if cens { f64::INFINITY } else { l + w as f64 * 0.5 };
                let v = (l * frac as f64 / 100.0 * 2.0).round() / 2.0;
                (l, r, v.min(l))
            })
            .collect()
    })
}

/// Pairs `(l, r]` with `l` a left endpoint, `r` a finite right endpoint or an
/// entry time, `l > 0`, and no endpoint or entry time strictly inside.
fn truncated_pairs(rows: &[(f64, f64, f64)]) -> Vec<(f64, f64)> {
    let lefts: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mut rights: Vec<f64> = rows.iter().map(|r| r.1).filter(|r| r.is_finite()).collect();
    rights.extend(rows.iter().map(|r| r.2));
    let all: Vec<f64> = lefts.iter().chain(rights.iter()).copied().collect();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &l in &lefts {
        for &r in &rights {
            if l > 0.0 && l < r && !all.iter().any(|x| *x > l && *x < r) && !out.contains(&(l, r)) {
                out.push((l, r));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

proptest! {
    #[test]
    fn intervals_are_sorted_disjoint_and_anchored(rows in rows_strategy(30)) {
        let d = build(&rows);
        let s = maximal_intersections(&d);
        let iv = s.intervals();
        for w in iv.windows(2) {
            prop_assert!(w[0].upper <= w[1].lower);
        }
        for x in iv {
            prop_assert!(x.lower < x.upper);
            prop_assert!(rows.iter().any(|r| r.0 == x.lower));
            prop_assert!(rows.iter().any(|r| r.1 == x.upper));
        }
    }

    #[test]
    fn every_finite_interval_brackets_some_support(rows in rows_strategy(30)) {
        let d = build(&rows);
        let s = maximal_intersections(&d);
        for &(l, r, _) in &rows {
            if r.is_finite() {
                prop_assert!(s.intervals().iter().any(|iv| l <= iv.lower && iv.upper <= r));
            }
        }
    }

    #[test]
    fn subject_order_is_irrelevant(rows in rows_strategy(20)) {
        let mut rev = rows.clone();
        rev.reverse();
        prop_assert_eq!(maximal_intersections(&build(&rows)), maximal_intersections(&build(&rev)));
    }

    #[test]
    fn truncated_rule_matches_pair_enumeration(rows in rows_strategy(20)) {
        let got: Vec<(f64, f64)> = maximal_intersections_truncated(&build(&rows))
            .intervals()
            .iter()
            .map(|iv| (iv.lower, iv.upper))
            .collect();
        prop_assert_eq!(got, truncated_pairs(&rows));
    }
}

#[test]
fn entry_time_splits_an_interval() {
    let d = build(&[(2.0, 5.0, 0.0), (4.0, 6.0, 3.0)]);
    let s = maximal_intersections_truncated(&d);
    let got: Vec<(f64, f64)> = s.intervals().iter().map(|iv| (iv.lower, iv.upper)).collect();
    assert_eq!(got, vec![(2.0, 3.0), (4.0, 5.0)]);
}

#[test]
fn truncation_flag_without_entry_times_keeps_plain_rule() {
    let d = build(&[(0.0, 1.0, 0.0), (0.5, 2.0, 0.0)]);
    assert_eq!(support_for(&d, true), maximal_intersections(&d));
    assert_eq!(support_for(&d, true).intervals()[0].lower, 0.5);
}

#[test]
fn all_right_censored_gives_empty_support() {
    let d = build(&[(1.0, f64::INFINITY, 0.0), (2.0, f64::INFINITY, 0.0)]);
    assert!(maximal_intersections(&d).is_empty());
}
