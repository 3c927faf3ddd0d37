#![allow(dead_code)]

use arena_core::policies::{Policy, Scripted, Style};
use arena_core::replay::{parse_replay, Replay, ReplayHeader, ReplayWriter, FORMAT_VERSION};
use arena_core::scoring::match_score;
use arena_core::sim::event::Event;
use arena_core::sim::{self, WorldState};
use arena_core::GameConfig;

/// Style of team `t` in the mixed line-up used throughout the tests.
pub fn mixed_style(seed: u64, t: usize) -> Style {
    Style::ALL[(t + seed as usize) % Style::ALL.len()]
}

pub struct Played {
    pub world: WorldState,
    pub bytes: Vec<u8>,
    pub ticks: Vec<(u32, Vec<Event>)>,
}

impl Played {
    pub fn replay(&self) -> Replay {
        parse_replay(&self.bytes).expect("fresh replay parses")
    }
}

/// Play one match, calling `watch` after every step.
pub fn play_with(seed: u64, cfg: &GameConfig, styles: &[Style], mut watch: impl FnMut(&WorldState)) -> Played {
    let mut teams: Vec<Scripted> = styles.iter().map(|s| Scripted::new(*s)).collect();
    let header = ReplayHeader {
        format_version: FORMAT_VERSION,
        seed,
        config: cfg.clone(),
        policies: styles.iter().map(|s| s.name().to_string()).collect(),
        horizon: cfg.sim.horizon,
    };
    let mut writer = ReplayWriter::new(Vec::new(), &header).unwrap();
    let (mut world, mut obs) = sim::reset(seed, cfg).unwrap();
    let mut ticks = Vec::new();
    while !world.done {
        let actions: Vec<_> = teams.iter_mut().zip(&obs).map(|(p, o)| p.act(o)).collect();
        let t = world.tick;
        let events = world.step(&actions);
        watch(&world);
        writer.tick(t, &events).unwrap();
        ticks.push((t, events));
        obs = world.observe_all();
    }
    let bytes = writer.finish(&world.state_hash(), &match_score(&world)).unwrap();
    Played { world, bytes, ticks }
}

pub fn play(seed: u64, cfg: &GameConfig) -> Played {
    let styles: Vec<Style> = (0..16).map(|t| mixed_style(seed, t)).collect();
    play_with(seed, cfg, &styles, |_| {})
}

/// A small, short match for tests that need many runs.
pub fn small_config() -> GameConfig {
    GameConfig::parse("map_size = 96\nnpc_count = 80\nhorizon = 300\nfog_start = 60\nfog_interval = 4\n").unwrap()
}
