mod common;

use arena_core::policies::{PolicyId, Style};
use arena_tournament::pve::{pve_specs, PveError};
use arena_tournament::{passes_gate, pve_eval, Stage};
use common::small_config;

#[test]
fn built_in_line_ups() {
    let one = Stage::One.opponents();
    assert_eq!(one.len(), 15);
    assert_eq!(one.iter().filter(|s| **s == Style::Mixture).count(), 8);
    assert_eq!(one.iter().filter(|s| **s == Style::Combat).count(), 7);
    let two = Stage::Two.opponents();
    for s in [Style::Reckless, Style::Ruthless, Style::Coward] {
        assert_eq!(two.iter().filter(|x| **x == s).count(), 5);
    }
}

#[test]
fn gate_is_inclusive_at_point_four() {
    assert!(passes_gate(4.0 / 10.0, 0.4));
    assert!(passes_gate(1.0, 0.4));
    assert!(!passes_gate(0.39, 0.4));
    assert!(!passes_gate(3.0 / 10.0, 0.4));
}

#[test]
fn candidate_lands_in_varied_slots() {
    let cand = PolicyId::Builtin(Style::Combat);
    let specs = pve_specs(&cand, Stage::One, 10, 99, &small_config());
    assert_eq!(specs.len(), 10);
    for (spec, at) in &specs {
        assert_eq!(spec.slots.len(), 16);
        assert_eq!(spec.slots[*at].submission, "candidate");
        assert_eq!(spec.slots.iter().filter(|s| s.submission == "candidate").count(), 1);
    }
    let distinct: std::collections::BTreeSet<_> = specs.iter().map(|(_, at)| *at).collect();
    assert!(distinct.len() > 1);
    assert_eq!(specs, pve_specs(&cand, Stage::One, 10, 99, &small_config()));
}

#[test]
fn ten_rounds_give_ten_records() {
    let report = pve_eval(&PolicyId::Builtin(Style::Combat), Stage::One, 10, 1, &small_config(), 0.4, None).unwrap();
    assert_eq!(report.records.len(), 10);
    assert_eq!(report.ranks.len(), 10);
    assert!((0.0..=1.0).contains(&report.top1_ratio));
    let firsts = report.ranks.iter().filter(|r| **r == 1).count();
    assert_eq!(report.top1_ratio, firsts as f64 / 10.0);
    assert_eq!(report.eligible, firsts >= 4);
}

#[test]
fn zero_rounds_and_broken_candidates_are_errors() {
    let cand = PolicyId::Builtin(Style::Coward);
    assert!(matches!(pve_eval(&cand, Stage::Two, 0, 1, &small_config(), 0.4, None), Err(PveError::NoRounds)));
    let broken = PolicyId::Command("/no/such/binary".into());
    assert!(matches!(pve_eval(&broken, Stage::Two, 1, 1, &small_config(), 0.4, None), Err(PveError::Match { .. })));
}
