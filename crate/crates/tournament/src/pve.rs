use std::path::Path;

use arena_core::policies::{PolicyId, Style};
use arena_core::rating::top1_ratio;
use arena_core::worldgen::TEAMS;
use arena_core::GameConfig;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matches::{run_match, MatchRecord, MatchSpec, Slot};

#[derive(Debug, Error)]
pub enum PveError {
    #[error("rounds must be positive")]
    NoRounds,
    #[error("match {match_id} failed: {reason}")]
    Match { match_id: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    One,
    Two,
}

impl Stage {
    pub fn parse(s: &str) -> Option<Stage> {
        match s {
            "1" | "one" => Some(Stage::One),
            "2" | "two" => Some(Stage::Two),
            _ => None,
        }
    }

    /// The fifteen built-in opponents, before shuffling.
    pub fn opponents(self) -> Vec<Style> {
        let (mix, counts): (&[Style], &[usize]) = match self {
            Stage::One => (&[Style::Mixture, Style::Combat], &[8, 7]),
            Stage::Two => (&[Style::Reckless, Style::Ruthless, Style::Coward], &[5, 5, 5]),
        };
        mix.iter().zip(counts).flat_map(|(s, n)| std::iter::repeat(*s).take(*n)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PveReport {
    pub candidate: PolicyId,
    pub stage: Stage,
    /// Team slot the candidate played in each round.
    pub slots: Vec<usize>,
    pub ranks: Vec<u32>,
    pub top1_ratio: f64,
    pub eligible: bool,
    pub records: Vec<MatchRecord>,
}

pub fn passes_gate(ratio: f64, gate: f64) -> bool {
    ratio >= gate
}

/// The candidate plays `rounds` matches, each time in a random slot among
/// fifteen shuffled built-ins.
pub fn pve_specs(candidate: &PolicyId, stage: Stage, rounds: u32, seed: u64, cfg: &GameConfig) -> Vec<(MatchSpec, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rounds)
        .map(|round| {
            let match_seed: u64 = rng.gen();
            let perm_seed: u64 = rng.gen();
            let mut perm = ChaCha8Rng::seed_from_u64(perm_seed);
            let mut slots: Vec<Slot> =
                stage.opponents().into_iter().map(|s| Slot::builtin(PolicyId::Builtin(s))).collect();
            slots.shuffle(&mut perm);
            let at = perm.gen_range(0..TEAMS);
            slots.insert(at, Slot { submission: "candidate".into(), policy: candidate.clone() });
            let spec = MatchSpec {
                match_id: format!("pve{}-{seed:016x}-{round:03}", if stage == Stage::One { 1 } else { 2 }),
                seed: match_seed,
                config: cfg.clone(),
                slots,
                slot_permutation_seed: perm_seed,
            };
            (spec, at)
        })
        .collect()
}

pub fn pve_eval(
    candidate: &PolicyId,
    stage: Stage,
    rounds: u32,
    seed: u64,
    cfg: &GameConfig,
    gate: f64,
    replay_dir: Option<&Path>,
) -> Result<PveReport, PveError> {
    if rounds == 0 {
        return Err(PveError::NoRounds);
    }
    let specs = pve_specs(candidate, stage, rounds, seed, cfg);
    let records: Vec<MatchRecord> = specs
        .par_iter()
        .map(|(spec, _)| {
            let path = replay_dir.map(|d| d.join(format!("{}.jsonl.gz", spec.match_id)));
            run_match(spec, path.as_deref())
        })
        .collect();
    let mut ranks = Vec::with_capacity(records.len());
    for ((_, at), rec) in specs.iter().zip(&records) {
        match (&rec.score, &rec.error) {
            (Some(score), None) => ranks.push(score.rank_of(*at)),
            (_, err) => {
                return Err(PveError::Match {
                    match_id: rec.match_id.clone(),
                    reason: err.clone().unwrap_or_else(|| "no score".into()),
                })
            }
        }
    }
    let ratio = top1_ratio(&ranks).expect("rounds > 0");
    Ok(PveReport {
        candidate: candidate.clone(),
        stage,
        slots: specs.iter().map(|(_, at)| *at).collect(),
        ranks,
        top1_ratio: ratio,
        eligible: passes_gate(ratio, gate),
        records,
    })
}
