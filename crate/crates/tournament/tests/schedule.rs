mod common;

use std::collections::BTreeSet;

use arena_core::policies::{PolicyId, Style};
use arena_tournament::schedule::ScheduleError;
use arena_tournament::{appearances, load_pool, pvp_schedule};
use common::{pool, small_config};
use proptest::prelude::*;

#[test]
fn pool_of_sixteen_fills_every_match_with_everyone() {
    let specs = pvp_schedule(&pool(16), 5, 1, &small_config(), "p").unwrap();
    assert_eq!(specs.len(), 5);
    let orders: BTreeSet<Vec<String>> =
        specs.iter().map(|s| s.slots.iter().map(|x| x.submission.clone()).collect()).collect();
    for s in &specs {
        let names: BTreeSet<_> = s.slots.iter().map(|x| &x.submission).collect();
        assert_eq!(names.len(), 16);
    }
    assert!(orders.len() > 1, "slots should be permuted");
}

#[test]
fn small_pools_sample_opponents_with_replacement() {
    let specs = pvp_schedule(&pool(3), 10, 2, &small_config(), "p").unwrap();
    for s in &specs {
        assert_eq!(s.slots.len(), 16);
        let names: BTreeSet<_> = s.slots.iter().map(|x| x.submission.as_str()).collect();
        assert!(names.len() >= 2);
    }
    // The focal submission of a two-member pool plays exactly one slot.
    for s in pvp_schedule(&pool(2), 4, 3, &small_config(), "p").unwrap() {
        let counts: Vec<usize> =
            ["sub00", "sub01"].iter().map(|n| s.slots.iter().filter(|x| x.submission == *n).count()).collect();
        assert!(counts.contains(&1) && counts.contains(&15), "{counts:?}");
    }
}

#[test]
fn daily_schedule_over_twenty_reaches_one_hundred_each() {
    let specs = pvp_schedule(&pool(20), 100, 4, &small_config(), "daily").unwrap();
    let seen = appearances(&specs);
    assert_eq!(seen.len(), 20);
    assert!(seen.values().all(|&n| n >= 100), "{seen:?}");
    let ids: BTreeSet<_> = specs.iter().map(|s| &s.match_id).collect();
    assert_eq!(ids.len(), specs.len());
}

#[test]
fn bad_pools_are_rejected() {
    assert!(matches!(pvp_schedule(&[], 1, 0, &small_config(), "p"), Err(ScheduleError::EmptyPool)));
    assert!(matches!(pvp_schedule(&pool(1), 1, 0, &small_config(), "p"), Err(ScheduleError::PoolTooSmall(1))));
    let mut dup = pool(3);
    dup[2].name = dup[0].name.clone();
    assert!(matches!(pvp_schedule(&dup, 1, 0, &small_config(), "p"), Err(ScheduleError::Duplicate(_))));
}

#[test]
fn pool_directories_load_sorted() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("zeta.policy"), "coward\n").unwrap();
    std::fs::write(dir.path().join("alpha.policy"), "ruthless").unwrap();
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let pool = load_pool(dir.path()).unwrap();
    assert_eq!(pool.len(), 2);
    assert_eq!(pool[0].name, "alpha");
    assert_eq!(pool[0].policy, PolicyId::Builtin(Style::Ruthless));
    assert_eq!(pool[1].policy, PolicyId::Builtin(Style::Coward));
    std::fs::write(dir.path().join("bad.policy"), "berserker").unwrap();
    assert!(load_pool(dir.path()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_submission_gets_its_appearances(size in 2usize..30, n in 1u32..25, seed in any::<u64>()) {
        let p = pool(size);
        let specs = pvp_schedule(&p, n, seed, &small_config(), "p").unwrap();
        let seen = appearances(&specs);
        prop_assert_eq!(seen.len(), size);
        prop_assert!(seen.values().all(|&c| c >= n));
        for s in &specs {
            prop_assert_eq!(s.slots.len(), 16);
            let names: BTreeSet<_> = s.slots.iter().map(|x| &x.submission).collect();
            if size >= 16 {
                prop_assert_eq!(names.len(), 16);
            }
        }
        prop_assert_eq!(specs, pvp_schedule(&p, n, seed, &small_config(), "p").unwrap());
    }
}
