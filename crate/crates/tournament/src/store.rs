//! Filesystem result store.
//!
//! ```text
//! STORE/matches.jsonl     one {"checksum","record"} line per finished match, append-only
//! STORE/ratings.json      current ratings and the set of rated match ids, replaced atomically
//! STORE/leaderboard.csv   submission, mu, sigma, conservative, matches
//! STORE/replays/          optional replay files
//! ```
//!
//! Any line or file whose checksum does not match makes [`Store::open`] fail.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use arena_core::rating::{leaderboard_score, rate_match, RatingError};
use arena_core::{Rating, TrueSkillParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::matches::MatchRecord;

pub const MATCHES_FILE: &str = "matches.jsonl";
pub const RATINGS_FILE: &str = "ratings.json";
pub const LEADERBOARD_FILE: &str = "leaderboard.csv";
pub const REPLAY_DIR: &str = "replays";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("store i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("store is corrupt: {0}")]
    Corrupt(String),
    #[error("rating: {0}")]
    Rating(#[from] RatingError),
    #[error("leaderboard: {0}")]
    Csv(#[from] csv::Error),
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("store types serialize")
}

#[derive(Serialize, Deserialize)]
struct Line {
    checksum: String,
    record: MatchRecord,
}

/// Ratings plus the bookkeeping that makes rating idempotent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RatingBook {
    pub ratings: BTreeMap<String, Rating>,
    pub matches: BTreeMap<String, u32>,
    pub applied: BTreeSet<String>,
}

#[derive(Serialize, Deserialize)]
struct RatingsFile {
    checksum: String,
    book: RatingBook,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardRow {
    pub submission: String,
    pub mu: f64,
    pub sigma: f64,
    pub conservative: f64,
    pub matches: u32,
}

impl RatingBook {
    /// Rate one finished match unless it was rated before. Error records are
    /// never rated. Returns whether ratings changed.
    pub fn apply(&mut self, record: &MatchRecord, params: &TrueSkillParams) -> Result<bool, RatingError> {
        let Some(score) = record.score.as_ref().filter(|_| record.error.is_none()) else {
            return Ok(false);
        };
        if self.applied.contains(&record.match_id) {
            return Ok(false);
        }
        let slots = &record.spec.slots;
        let prior: Vec<Rating> =
            slots.iter().map(|s| self.ratings.get(&s.submission).copied().unwrap_or_else(|| params.prior())).collect();
        let ranks: Vec<u32> = (0..slots.len()).map(|i| score.rank_of(i)).collect();
        let post = rate_match(&prior, &ranks, params)?;
        // A submission in several slots keeps the posterior of its best-ranked slot.
        let mut best: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, s) in slots.iter().enumerate() {
            best.entry(&s.submission).and_modify(|b| if ranks[i] < ranks[*b] { *b = i }).or_insert(i);
        }
        for (name, i) in best {
            self.ratings.insert(name.to_string(), post[i]);
            *self.matches.entry(name.to_string()).or_default() += 1;
        }
        self.applied.insert(record.match_id.clone());
        Ok(true)
    }

    /// Rows sorted by conservative score, best first.
    pub fn leaderboard(&self) -> Vec<LeaderboardRow> {
        let mut rows: Vec<LeaderboardRow> = self
            .ratings
            .iter()
            .map(|(name, r)| LeaderboardRow {
                submission: name.clone(),
                mu: r.mu,
                sigma: r.sigma,
                conservative: leaderboard_score(r),
                matches: self.matches.get(name).copied().unwrap_or(0),
            })
            .collect();
        rows.sort_by(|a, b| b.conservative.total_cmp(&a.conservative).then_with(|| a.submission.cmp(&b.submission)));
        rows
    }
}

/// Single-writer handle on a store directory.
pub struct Store {
    dir: PathBuf,
    records: Vec<MatchRecord>,
    ids: BTreeSet<String>,
    pub book: RatingBook,
    log: File,
}

impl Store {
    /// Open or create a store, verifying every checksum.
    pub fn open(dir: &Path) -> Result<Store, StoreError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(MATCHES_FILE);
        let mut records = Vec::new();
        let mut ids = BTreeSet::new();
        if path.exists() {
            for (i, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
                let line = line?;
                let bad = |why: &str| StoreError::Corrupt(format!("{MATCHES_FILE} line {}: {why}", i + 1));
                let parsed: Line = serde_json::from_str(&line).map_err(|e| bad(&e.to_string()))?;
                if digest(to_json(&parsed.record).as_bytes()) != parsed.checksum {
                    return Err(bad("checksum mismatch"));
                }
                if !ids.insert(parsed.record.match_id.clone()) {
                    return Err(bad("duplicate match id"));
                }
                records.push(parsed.record);
            }
        }
        let book = match fs::read_to_string(dir.join(RATINGS_FILE)) {
            Ok(text) => {
                let file: RatingsFile = serde_json::from_str(&text)
                    .map_err(|e| StoreError::Corrupt(format!("{RATINGS_FILE}: {e}")))?;
                if digest(to_json(&file.book).as_bytes()) != file.checksum {
                    return Err(StoreError::Corrupt(format!("{RATINGS_FILE}: checksum mismatch")));
                }
                if let Some(id) = file.book.applied.iter().find(|id| !ids.contains(*id)) {
                    return Err(StoreError::Corrupt(format!("{RATINGS_FILE}: rated match {id} has no record")));
                }
                file.book
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => RatingBook::default(),
            Err(e) => return Err(e.into()),
        };
        let log = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Store { dir: dir.to_path_buf(), records, ids, book, log })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn records(&self) -> &[MatchRecord] {
        &self.records
    }

    pub fn has(&self, match_id: &str) -> bool {
        self.ids.contains(match_id)
    }

    /// Append a record. A record whose id is already stored is ignored.
    pub fn append(&mut self, record: &MatchRecord) -> Result<bool, StoreError> {
        if self.ids.contains(&record.match_id) {
            return Ok(false);
        }
        let line = Line { checksum: digest(to_json(record).as_bytes()), record: record.clone() };
        let mut text = to_json(&line);
        text.push('\n');
        self.log.write_all(text.as_bytes())?;
        self.log.sync_data()?;
        self.ids.insert(record.match_id.clone());
        self.records.push(record.clone());
        Ok(true)
    }

    /// Stored records not yet rated, in storage order.
    pub fn unrated(&self) -> Vec<MatchRecord> {
        self.records
            .iter()
            .filter(|r| !r.is_error() && !self.book.applied.contains(&r.match_id))
            .cloned()
            .collect()
    }

    /// Replace the ratings file atomically.
    pub fn save_ratings(&self) -> Result<(), StoreError> {
        let file = RatingsFile { checksum: digest(to_json(&self.book).as_bytes()), book: self.book.clone() };
        let tmp = self.dir.join(format!("{RATINGS_FILE}.tmp"));
        {
            let mut f = File::create(&tmp)?;
            f.write_all(to_json(&file).as_bytes())?;
            f.sync_data()?;
        }
        fs::rename(&tmp, self.dir.join(RATINGS_FILE))?;
        Ok(())
    }

    pub fn write_leaderboard(&self) -> Result<Vec<LeaderboardRow>, StoreError> {
        let rows = self.book.leaderboard();
        let mut w = csv::Writer::from_path(self.dir.join(LEADERBOARD_FILE))?;
        if rows.is_empty() {
            w.write_record(["submission", "mu", "sigma", "conservative", "matches"])?;
        }
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(rows)
    }
}
