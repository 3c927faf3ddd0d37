#![allow(dead_code)]

use arena_core::policies::{PolicyId, Style};
use arena_core::GameConfig;
use arena_tournament::{MatchSpec, Slot, Submission};

pub fn small_config() -> GameConfig {
    GameConfig::parse("map_size = 96\nnpc_count = 80\nhorizon = 300\nfog_start = 60\nfog_interval = 4\n").unwrap()
}

pub fn spec(seed: u64, styles: impl Fn(usize) -> Style) -> MatchSpec {
    MatchSpec {
        match_id: format!("t-{seed}"),
        seed,
        config: small_config(),
        slots: (0..16).map(|i| Slot::builtin(PolicyId::Builtin(styles(i)))).collect(),
        slot_permutation_seed: 0,
    }
}

pub fn pool(n: usize) -> Vec<Submission> {
    (0..n).map(|i| Submission::new(format!("sub{i:02}"), PolicyId::Builtin(Style::ALL[i % 5]))).collect()
}
