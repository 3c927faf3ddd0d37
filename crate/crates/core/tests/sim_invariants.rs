mod common;

use arena_core::replay::audit;
use arena_core::sim::invariants::InvariantMonitor;
use arena_core::{sim, GameConfig};
use common::{mixed_style, play, play_with, small_config};
use proptest::prelude::*;

fn checked_match(seed: u64, cfg: &GameConfig) -> Result<(), TestCaseError> {
    let styles: Vec<_> = (0..16).map(|t| mixed_style(seed, t)).collect();
    let mut monitor = InvariantMonitor::new();
    let played = play_with(seed, cfg, &styles, |w| monitor.check(w));
    prop_assert!(monitor.is_clean(), "seed {seed}: {:?}", &monitor.violations[..monitor.violations.len().min(3)]);

    let ledger = audit(played.ticks.iter().flat_map(|(t, es)| es.iter().map(move |e| (*t, e))))
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    ledger.check_state(&played.world).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let held: u64 = ledger.held.values().sum();
    prop_assert_eq!(
        ledger.items_created,
        ledger.items_consumed + ledger.items_destroyed + held + ledger.listings.len() as u64
    );
    Ok(())
}

#[test]
fn full_size_match_is_clean_and_conserves_gold() {
    checked_match(42, &GameConfig::default()).unwrap();
}

#[test]
fn reset_is_deterministic() {
    let cfg = GameConfig::default();
    let (a, obs_a) = sim::reset(9, &cfg).unwrap();
    let (b, obs_b) = sim::reset(9, &cfg).unwrap();
    assert_eq!(a.state_hash(), b.state_hash());
    assert_eq!(obs_a, obs_b);
    assert_eq!(obs_a.len(), 16);
    let (c, _) = sim::reset(10, &cfg).unwrap();
    assert_ne!(a.state_hash(), c.state_hash());
}

#[test]
fn matches_end_by_the_horizon() {
    let cfg = small_config();
    let played = play(17, &cfg);
    assert!(played.world.done);
    assert!(played.world.tick <= cfg.sim.horizon);
    assert!(played.world.teams_alive() <= 1 || played.world.tick == cfg.sim.horizon);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn seeded_small_matches_hold_every_invariant(seed in any::<u64>()) {
        checked_match(seed, &small_config())?;
    }
}
