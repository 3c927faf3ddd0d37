use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use arena_core::policies::{PolicyError, PolicyId};
use arena_core::worldgen::TEAMS;
use arena_core::GameConfig;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matches::{MatchSpec, Slot};

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("the pool is empty")]
    EmptyPool,
    #[error("a pool needs at least two submissions, got {0}")]
    PoolTooSmall(usize),
    #[error("duplicate submission name `{0}`")]
    Duplicate(String),
    #[error("{path}: {source}")]
    Policy { path: String, source: PolicyError },
    #[error("reading pool: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    pub name: String,
    pub policy: PolicyId,
}

impl Submission {
    pub fn new(name: impl Into<String>, policy: PolicyId) -> Self {
        Submission { name: name.into(), policy }
    }

    fn slot(&self) -> Slot {
        Slot { submission: self.name.clone(), policy: self.policy.clone() }
    }
}

/// Every `*.policy` file in `dir`: the file stem names the submission, the
/// content is its policy identifier.
pub fn load_pool(dir: &Path) -> Result<Vec<Submission>, ScheduleError> {
    let mut pool = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_none_or(|e| e != "policy") {
            continue;
        }
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let text = fs::read_to_string(&path)?;
        let policy = text
            .parse()
            .map_err(|source| ScheduleError::Policy { path: path.display().to_string(), source })?;
        pool.push(Submission { name, policy });
    }
    pool.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(pool)
}

/// Matches in which every submission of the pool plays at least
/// `appearances` times.
///
/// Each match is built around the least-played submission. Its fifteen
/// opponents are drawn uniformly from the rest of the pool, without
/// replacement when the pool allows it. Team numbers are then shuffled.
/// A submission filling several slots of one match counts once.
pub fn pvp_schedule(
    pool: &[Submission],
    appearances: u32,
    seed: u64,
    cfg: &GameConfig,
    label: &str,
) -> Result<Vec<MatchSpec>, ScheduleError> {
    match pool.len() {
        0 => return Err(ScheduleError::EmptyPool),
        1 => return Err(ScheduleError::PoolTooSmall(1)),
        _ => {}
    }
    let mut names = BTreeSet::new();
    for s in pool {
        if !names.insert(&s.name) {
            return Err(ScheduleError::Duplicate(s.name.clone()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = vec![0u32; pool.len()];
    let mut specs = Vec::new();
    while count.iter().any(|&c| c < appearances) {
        let focal = (0..pool.len()).min_by_key(|&i| (count[i], i)).expect("non-empty pool");
        let others: Vec<usize> = (0..pool.len()).filter(|&i| i != focal).collect();
        let mut members = vec![focal];
        if others.len() >= TEAMS - 1 {
            members.extend(index::sample(&mut rng, others.len(), TEAMS - 1).into_iter().map(|k| others[k]));
        } else {
            members.extend((0..TEAMS - 1).map(|_| others[rng.gen_range(0..others.len())]));
        }
        let perm_seed: u64 = rng.gen();
        members.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        for i in members.iter().copied().collect::<BTreeSet<_>>() {
            count[i] += 1;
        }
        specs.push(MatchSpec {
            match_id: format!("{label}-{:06}", specs.len()),
            seed: rng.gen(),
            config: cfg.clone(),
            slots: members.iter().map(|&i| pool[i].slot()).collect(),
            slot_permutation_seed: perm_seed,
        });
    }
    Ok(specs)
}

/// Distinct matches each submission appears in.
pub fn appearances(specs: &[MatchSpec]) -> std::collections::BTreeMap<String, u32> {
    let mut out = std::collections::BTreeMap::new();
    for spec in specs {
        for name in spec.slots.iter().map(|s| &s.submission).collect::<BTreeSet<_>>() {
            *out.entry(name.clone()).or_default() += 1;
        }
    }
    out
}
