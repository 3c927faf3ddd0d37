//! Line-delimited JSON replays.
//!
//! ```text
//! {"format_version":1,"seed":7,"config":{...},"policies":[...],"horizon":1280}
//! {"t":0,"events":[...]}
//! ...
//! {"final_state_hash":"...","score":{...},"checksum":"..."}
//! ```
//!
//! The checksum covers every byte before the footer line. Files whose name
//! ends in `.gz` are gzip-compressed; readers detect compression by content.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::GameConfig;
use crate::scoring::{match_score_of, outcomes_from_events, MatchScore, ScoringError};
use crate::sim::event::Event;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("replay i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Json { line: usize, msg: String },
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("checksum failure: {0}")]
    Checksum(String),
    #[error("tick {0} out of order")]
    TickOrder(u32),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayHeader {
    pub format_version: u32,
    pub seed: u64,
    pub config: GameConfig,
    /// Policy identifier per team slot.
    pub policies: Vec<String>,
    pub horizon: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TickRecord {
    pub t: u32,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayFooter {
    pub final_state_hash: String,
    pub score: MatchScore,
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub header: ReplayHeader,
    pub ticks: Vec<TickRecord>,
    pub footer: ReplayFooter,
}

impl Replay {
    /// Recompute the match score from the event stream alone.
    pub fn recompute_score(&self) -> Result<MatchScore, ReplayError> {
        let outcomes = outcomes_from_events(self.ticks.iter().map(|t| (t.t, t.events.as_slice())), self.header.horizon)?;
        Ok(match_score_of(&outcomes)?)
    }

    pub fn events(&self) -> impl Iterator<Item = (u32, &Event)> {
        self.ticks.iter().flat_map(|t| t.events.iter().map(move |e| (t.t, e)))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = ReplayWriter::new(Vec::new(), &self.header).expect("writing to memory");
        for t in &self.ticks {
            w.tick(t.t, &t.events).expect("writing to memory");
        }
        w.finish(&self.footer.final_state_hash, &self.footer.score).expect("writing to memory")
    }
}

fn checksum(hasher: &Sha256) -> String {
    hasher.clone().finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Streams a replay to `W` while hashing it.
pub struct ReplayWriter<W: Write> {
    out: W,
    hasher: Sha256,
    last_tick: Option<u32>,
}

impl<W: Write> ReplayWriter<W> {
    pub fn new(out: W, header: &ReplayHeader) -> Result<Self, ReplayError> {
        let mut w = ReplayWriter { out, hasher: Sha256::new(), last_tick: None };
        let line = serde_json::to_string(header).map_err(|e| ReplayError::Json { line: 1, msg: e.to_string() })?;
        w.line(&line)?;
        Ok(w)
    }

    fn line(&mut self, text: &str) -> Result<(), ReplayError> {
        self.hasher.update(text.as_bytes());
        self.hasher.update(b"\n");
        self.out.write_all(text.as_bytes())?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn tick(&mut self, t: u32, events: &[Event]) -> Result<(), ReplayError> {
        if self.last_tick.is_some_and(|last| t <= last) {
            return Err(ReplayError::TickOrder(t));
        }
        self.last_tick = Some(t);
        #[derive(Serialize)]
        struct Line<'a> {
            t: u32,
            events: &'a [Event],
        }
        let line = serde_json::to_string(&Line { t, events })
            .map_err(|e| ReplayError::Json { line: 0, msg: e.to_string() })?;
        self.line(&line)
    }

    pub fn finish(mut self, final_state_hash: &str, score: &MatchScore) -> Result<W, ReplayError> {
        let footer = ReplayFooter {
            final_state_hash: final_state_hash.to_string(),
            score: score.clone(),
            checksum: checksum(&self.hasher),
        };
        let line = serde_json::to_string(&footer).map_err(|e| ReplayError::Json { line: 0, msg: e.to_string() })?;
        self.out.write_all(line.as_bytes())?;
        self.out.write_all(b"\n")?;
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Open a replay sink; gzip when the path ends in `.gz`.
pub fn create_sink(path: &Path) -> std::io::Result<Box<dyn Write + Send>> {
    let file = BufWriter::new(File::create(path)?);
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(GzEncoder::new(file, Compression::fast())))
    } else {
        Ok(Box::new(file))
    }
}

pub fn write_replay(path: &Path, replay: &Replay) -> Result<(), ReplayError> {
    let mut sink = create_sink(path)?;
    sink.write_all(&replay.to_bytes())?;
    sink.flush()?;
    Ok(())
}

/// Raw bytes of a replay file, decompressed if needed.
pub fn read_bytes(path: &Path) -> Result<Vec<u8>, ReplayError> {
    let raw = std::fs::read(path)?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice()).read_to_end(&mut out)?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

pub fn read_replay(path: &Path) -> Result<Replay, ReplayError> {
    parse_replay(&read_bytes(path)?)
}

pub fn parse_replay(bytes: &[u8]) -> Result<Replay, ReplayError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ReplayError::Json { line: 0, msg: e.to_string() })?;
    let lines: Vec<&str> = text.split_terminator('\n').collect();
    let json = |i: usize, e: serde_json::Error| ReplayError::Json { line: i + 1, msg: e.to_string() };
    let Some((last, body)) = lines.split_last() else {
        return Err(ReplayError::Checksum("empty replay".into()));
    };
    if body.is_empty() || !last.starts_with("{\"final_state_hash\"") || !text.ends_with('\n') {
        return Err(ReplayError::Checksum("missing footer".into()));
    }
    let footer: ReplayFooter = serde_json::from_str(last).map_err(|e| json(lines.len() - 1, e))?;
    let mut hasher = Sha256::new();
    for l in body {
        hasher.update(l.as_bytes());
        hasher.update(b"\n");
    }
    let actual = checksum(&hasher);
    if actual != footer.checksum {
        return Err(ReplayError::Checksum(format!("expected {}, computed {actual}", footer.checksum)));
    }
    let version: serde_json::Value = serde_json::from_str(body[0]).map_err(|e| json(0, e))?;
    let found = version.get("format_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if found != FORMAT_VERSION {
        return Err(ReplayError::Version(found));
    }
    let header: ReplayHeader = serde_json::from_str(body[0]).map_err(|e| json(0, e))?;
    let mut ticks = Vec::with_capacity(body.len() - 1);
    for (i, l) in body.iter().enumerate().skip(1) {
        let rec: TickRecord = serde_json::from_str(l).map_err(|e| json(i, e))?;
        if ticks.last().is_some_and(|p: &TickRecord| rec.t <= p.t) {
            return Err(ReplayError::TickOrder(rec.t));
        }
        ticks.push(rec);
    }
    Ok(Replay { header, ticks, footer })
}
