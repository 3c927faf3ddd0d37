mod common;

use arena_core::policies::{PolicyId, Style};
use arena_core::replay::{read_bytes, read_replay};
use arena_tournament::{resimulate, run_match, MatchError, Slot};
use common::spec;

#[test]
fn identical_specs_give_identical_hashes_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(7, |_| Style::Mixture);
    let a = run_match(&s, Some(&dir.path().join("a.jsonl")));
    let b = run_match(&s, Some(&dir.path().join("b.jsonl.gz")));
    assert!(a.error.is_none() && b.error.is_none());
    assert_eq!(a.final_state_hash, b.final_state_hash);
    assert_eq!(a.score, b.score);
    assert_eq!(read_bytes(&dir.path().join("a.jsonl")).unwrap(), read_bytes(&dir.path().join("b.jsonl.gz")).unwrap());
}

#[test]
fn stored_score_recomputes_from_the_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.jsonl");
    let rec = run_match(&spec(3, |i| Style::ALL[i % 5]), Some(&path));
    let replay = read_replay(&path).unwrap();
    assert_eq!(Some(replay.recompute_score().unwrap()), rec.score);
    assert_eq!(Some(resimulate(&replay).unwrap()), rec.score);
    assert_eq!(rec.replay.as_deref(), Some(path.as_path()));
}

#[test]
fn resimulation_catches_a_forged_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.jsonl");
    run_match(&spec(4, |_| Style::Combat), Some(&path));
    let mut replay = read_replay(&path).unwrap();
    replay.header.policies[0] = "coward".into();
    assert!(matches!(resimulate(&replay), Err(MatchError::Divergence(_))));
}

#[test]
fn unloadable_policy_becomes_an_error_record() {
    let mut s = spec(5, |_| Style::Combat);
    s.slots[4] = Slot::builtin(PolicyId::Command("/no/such/binary".into()));
    let rec = run_match(&s, None);
    assert!(rec.is_error());
    assert!(rec.score.is_none());
    assert!(rec.final_state_hash.is_none());
}

#[test]
fn wrong_slot_count_is_an_error_record() {
    let mut s = spec(5, |_| Style::Combat);
    s.slots.truncate(15);
    assert!(run_match(&s, None).error.unwrap().contains("16"));
}
