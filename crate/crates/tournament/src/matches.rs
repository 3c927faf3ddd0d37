use std::path::{Path, PathBuf};
use std::time::Instant;

use arena_core::policies::{Policy, PolicyId};
use arena_core::replay::{create_sink, Replay, ReplayError, ReplayHeader, ReplayWriter, FORMAT_VERSION};
use arena_core::scoring::{match_score, MatchScore};
use arena_core::sim::{self, WorldState};
use arena_core::worldgen::TEAMS;
use arena_core::GameConfig;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("a match needs {TEAMS} slots, got {0}")]
    SlotCount(usize),
    #[error("policy: {0}")]
    Policy(#[from] arena_core::policies::PolicyError),
    #[error("world: {0}")]
    World(#[from] arena_core::worldgen::WorldgenError),
    #[error("replay: {0}")]
    Replay(#[from] ReplayError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("replay disagrees with re-simulation: {0}")]
    Divergence(String),
}

/// One team of a match: who submitted it and how to run it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub submission: String,
    pub policy: PolicyId,
}

impl Slot {
    pub fn builtin(policy: PolicyId) -> Self {
        Slot { submission: policy.to_string(), policy }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSpec {
    pub match_id: String,
    pub seed: u64,
    pub config: GameConfig,
    /// Team `i` plays `slots[i]`.
    pub slots: Vec<Slot>,
    /// Seed of the shuffle that assigned submissions to team numbers.
    pub slot_permutation_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub match_id: String,
    pub spec: MatchSpec,
    pub score: Option<MatchScore>,
    pub replay: Option<PathBuf>,
    pub final_state_hash: Option<String>,
    pub ticks: u32,
    pub duration_ms: u64,
    /// Set when the match could not be played; such records are never rated.
    pub error: Option<String>,
}

impl MatchRecord {
    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }
}

fn header(spec: &MatchSpec) -> ReplayHeader {
    ReplayHeader {
        format_version: FORMAT_VERSION,
        seed: spec.seed,
        config: spec.config.clone(),
        policies: spec.slots.iter().map(|s| s.policy.to_string()).collect(),
        horizon: spec.config.sim.horizon,
    }
}

/// Play `policies` from `seed` to the end, handing every tick's events to `on_tick`.
pub fn play(
    seed: u64,
    cfg: &GameConfig,
    policies: &mut [Box<dyn Policy>],
    mut on_tick: impl FnMut(u32, &[arena_core::sim::event::Event], &WorldState) -> Result<(), MatchError>,
) -> Result<WorldState, MatchError> {
    if policies.len() != TEAMS {
        return Err(MatchError::SlotCount(policies.len()));
    }
    let (mut world, mut obs) = sim::reset(seed, cfg)?;
    while !world.done {
        let actions: Vec<_> = policies.iter_mut().zip(&obs).map(|(p, o)| p.act(o)).collect();
        let t = world.tick;
        let events = world.step(&actions);
        on_tick(t, &events, &world)?;
        obs = world.observe_all();
    }
    Ok(world)
}

fn instantiate(spec: &MatchSpec) -> Result<Vec<Box<dyn Policy>>, MatchError> {
    if spec.slots.len() != TEAMS {
        return Err(MatchError::SlotCount(spec.slots.len()));
    }
    Ok(spec.slots.iter().map(|s| s.policy.instantiate()).collect::<Result<_, _>>()?)
}

fn play_spec(spec: &MatchSpec, replay: Option<&Path>) -> Result<(WorldState, MatchScore, String), MatchError> {
    let mut policies = instantiate(spec)?;
    let mut writer = match replay {
        Some(p) => Some(ReplayWriter::new(create_sink(p)?, &header(spec))?),
        None => None,
    };
    let world = play(spec.seed, &spec.config, &mut policies, |t, events, _| {
        if let Some(w) = writer.as_mut() {
            w.tick(t, events)?;
        }
        Ok(())
    })?;
    let score = match_score(&world);
    let hash = world.state_hash();
    if let Some(w) = writer {
        w.finish(&hash, &score)?;
    }
    Ok((world, score, hash))
}

/// Play a match, optionally writing its replay. Failures become error records.
pub fn run_match(spec: &MatchSpec, replay: Option<&Path>) -> MatchRecord {
    let start = Instant::now();
    let mut record = MatchRecord {
        match_id: spec.match_id.clone(),
        spec: spec.clone(),
        score: None,
        replay: None,
        final_state_hash: None,
        ticks: 0,
        duration_ms: 0,
        error: None,
    };
    match play_spec(spec, replay) {
        Ok((world, score, hash)) => {
            record.score = Some(score);
            record.final_state_hash = Some(hash);
            record.ticks = world.tick;
            record.replay = replay.map(Path::to_path_buf);
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record.duration_ms = start.elapsed().as_millis() as u64;
    record
}

/// Play the match described by a replay header again and check that the
/// events, final hash and score all agree with the file.
pub fn resimulate(replay: &Replay) -> Result<MatchScore, MatchError> {
    let h = &replay.header;
    let mut policies: Vec<Box<dyn Policy>> = h
        .policies
        .iter()
        .map(|p| p.parse::<PolicyId>().map_err(MatchError::from).and_then(|id| Ok(id.instantiate()?)))
        .collect::<Result<_, _>>()?;
    let mut expected = replay.ticks.iter();
    let world = play(h.seed, &h.config, &mut policies, |t, events, _| {
        match expected.next() {
            Some(rec) if rec.t == t && rec.events == events => Ok(()),
            _ => Err(MatchError::Divergence(format!("events differ at tick {t}"))),
        }
    })?;
    if expected.next().is_some() {
        return Err(MatchError::Divergence("replay has extra ticks".into()));
    }
    let hash = world.state_hash();
    if hash != replay.footer.final_state_hash {
        return Err(MatchError::Divergence(format!("hash {hash} vs {}", replay.footer.final_state_hash)));
    }
    let score = match_score(&world);
    if score != replay.footer.score || replay.recompute_score()? != score {
        return Err(MatchError::Divergence("score".into()));
    }
    Ok(score)
}
