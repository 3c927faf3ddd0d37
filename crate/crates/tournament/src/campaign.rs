use std::path::PathBuf;
use std::sync::mpsc;

use arena_core::{GameConfig, TrueSkillParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matches::{run_match, MatchRecord, MatchSpec};
use crate::schedule::{pvp_schedule, ScheduleError, Submission};
use crate::store::{LeaderboardRow, Store, StoreError, REPLAY_DIR};

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid campaign config: {0}")]
    Config(String),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cadence {
    Daily,
    Weekly,
}

impl Cadence {
    pub fn parse(s: &str) -> Option<Cadence> {
        match s {
            "daily" => Some(Cadence::Daily),
            "weekly" => Some(Cadence::Weekly),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Cadence::Daily => "daily",
            Cadence::Weekly => "weekly",
        }
    }
}

/// When finished matches are rated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatingOrder {
    /// Schedule order; ratings are reproducible.
    Schedule,
    /// Completion order; ratings depend on worker timing.
    Completion,
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub pve_rounds: u32,
    pub stage_gate: f64,
    pub daily_matches: u32,
    pub weekly_matches: u32,
    pub parallelism: usize,
    pub store: PathBuf,
    pub seed: u64,
    pub game: GameConfig,
    pub params: TrueSkillParams,
    pub order: RatingOrder,
    pub keep_replays: bool,
}

impl CampaignConfig {
    pub fn new(store: impl Into<PathBuf>) -> Self {
        CampaignConfig {
            pve_rounds: 10,
            stage_gate: 0.4,
            daily_matches: 100,
            weekly_matches: 1000,
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
            store: store.into(),
            seed: 0,
            game: GameConfig::default(),
            params: TrueSkillParams::default(),
            order: RatingOrder::Schedule,
            keep_replays: true,
        }
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        let bad = |what: &str| Err(CampaignError::Config(format!("{what} must be positive")));
        if self.pve_rounds == 0 {
            return bad("pve_rounds");
        }
        if self.daily_matches == 0 || self.weekly_matches == 0 {
            return bad("match counts");
        }
        if self.parallelism == 0 {
            return bad("parallelism");
        }
        if !(self.stage_gate > 0.0 && self.stage_gate <= 1.0) {
            return Err(CampaignError::Config("stage_gate must lie in (0, 1]".into()));
        }
        self.params.validate().map_err(|e| CampaignError::Config(e.to_string()))
    }

    pub fn matches_for(&self, cadence: Cadence) -> u32 {
        match cadence {
            Cadence::Daily => self.daily_matches,
            Cadence::Weekly => self.weekly_matches,
        }
    }

    pub fn schedule(&self, pool: &[Submission], cadence: Cadence) -> Result<Vec<MatchSpec>, CampaignError> {
        let label = format!("{}-{:016x}", cadence.name(), self.seed);
        Ok(pvp_schedule(pool, self.matches_for(cadence), self.seed, &self.game, &label)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignReport {
    pub scheduled: usize,
    /// Matches played by this call.
    pub played: usize,
    /// Stored but unrated matches rated on start-up.
    pub resumed: usize,
    pub errors: usize,
    /// Whether the run stopped early on request.
    pub interrupted: bool,
    pub leaderboard: Vec<LeaderboardRow>,
}

/// Run a campaign to completion.
pub fn run_campaign(cfg: &CampaignConfig, pool: &[Submission], cadence: Cadence) -> Result<CampaignReport, CampaignError> {
    run_campaign_until(cfg, pool, cadence, None)
}

/// Like [`run_campaign`], but return after `stop_after` newly played matches
/// as if the process had died. Calling again resumes where it stopped.
pub fn run_campaign_until(
    cfg: &CampaignConfig,
    pool: &[Submission],
    cadence: Cadence,
    stop_after: Option<usize>,
) -> Result<CampaignReport, CampaignError> {
    cfg.validate()?;
    let schedule = cfg.schedule(pool, cadence)?;
    let mut store = Store::open(&cfg.store)?;

    let mut resumed = 0;
    for record in store.unrated() {
        if store.book.apply(&record, &cfg.params).map_err(StoreError::from)? {
            resumed += 1;
        }
    }
    if resumed > 0 {
        store.save_ratings()?;
    }

    let todo: Vec<&MatchSpec> = schedule.iter().filter(|s| !store.has(&s.match_id)).collect();
    let budget = stop_after.unwrap_or(usize::MAX).min(todo.len());
    let todo = &todo[..budget];
    let replay_dir = cfg.keep_replays.then(|| cfg.store.join(REPLAY_DIR));
    if let Some(d) = &replay_dir {
        std::fs::create_dir_all(d).map_err(StoreError::from)?;
    }
    let workers = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| CampaignError::Pool(e.to_string()))?;
    let play = |spec: &MatchSpec| {
        let path = replay_dir.as_ref().map(|d| d.join(format!("{}.jsonl.gz", spec.match_id)));
        run_match(spec, path.as_deref())
    };

    let mut errors = 0;
    let mut finish = |store: &mut Store, record: MatchRecord| -> Result<(), CampaignError> {
        errors += record.is_error() as usize;
        store.append(&record)?;
        if store.book.apply(&record, &cfg.params).map_err(StoreError::from)? {
            store.save_ratings()?;
        }
        Ok(())
    };

    match cfg.order {
        RatingOrder::Schedule => {
            for chunk in todo.chunks(cfg.parallelism * 4) {
                let records: Vec<MatchRecord> = workers.install(|| chunk.par_iter().map(|s| play(s)).collect());
                for record in records {
                    finish(&mut store, record)?;
                }
            }
        }
        RatingOrder::Completion => {
            let (tx, rx) = mpsc::channel();
            let mut outcome = Ok(());
            workers.in_place_scope(|scope| {
                for spec in todo {
                    let tx = tx.clone();
                    let play = &play;
                    scope.spawn(move |_| {
                        let _ = tx.send(play(spec));
                    });
                }
                drop(tx);
                for record in rx.iter() {
                    if outcome.is_ok() {
                        outcome = finish(&mut store, record);
                    }
                }
            });
            outcome?;
        }
    }

    let leaderboard = store.write_leaderboard()?;
    Ok(CampaignReport {
        scheduled: schedule.len(),
        played: todo.len(),
        resumed,
        errors,
        interrupted: schedule.iter().any(|s| !store.has(&s.match_id)),
        leaderboard,
    })
}
