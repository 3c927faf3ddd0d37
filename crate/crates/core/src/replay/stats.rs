//! Trade and combat aggregates over a set of replays, and their CSV form.
//!
//! | file | columns |
//! |------|---------|
//! | `item_distribution.csv` | category, count |
//! | `item_quantity.csv` | kind, category, count |
//! | `buy_sell_ratio.csv` | category, buys, sells, ratio (`inf` when nothing was listed but something bought) |
//! | `price_grid.csv` | kind, level, quantity, mean_price |
//! | `team_radar.csv` | policy, teams, defeat_credits, survival_tick, damage_dealt, damage_taken, gold_earned, equipment_score (means per team) |
//!
//! Items counted in the distributions are those that entered the world
//! through harvesting or NPC loot.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use super::format::{read_replay, Replay, ReplayError};
use crate::economy::{ItemCategory, ItemKind};
use crate::sim::event::Event;
use crate::worldgen::{TEAMS, TEAM_SIZE};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("no replays given")]
    Empty,
    #[error("{path}: {source}")]
    Replay { path: PathBuf, source: ReplayError },
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TradeCount {
    pub buys: u64,
    pub sells: u64,
}

impl TradeCount {
    /// Buys per listing; `None` stands for infinity.
    pub fn ratio(&self) -> Option<f64> {
        match (self.buys, self.sells) {
            (0, 0) => Some(0.0),
            (_, 0) => None,
            (b, s) => Some(b as f64 / s as f64),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PriceCell {
    pub quantity: u64,
    pub price_sum: u64,
}

impl PriceCell {
    pub fn mean_price(&self) -> f64 {
        self.price_sum as f64 / self.quantity.max(1) as f64
    }
}

/// Integer sums per policy; means are taken on output.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Radar {
    pub teams: u64,
    pub defeat_credits: u64,
    pub survival_tick: u64,
    pub damage_dealt: u64,
    pub damage_taken: u64,
    pub gold_earned: u64,
    pub equipment_score: u64,
}

impl Radar {
    fn merge(&mut self, o: &Radar) {
        self.teams += o.teams;
        self.defeat_credits += o.defeat_credits;
        self.survival_tick += o.survival_tick;
        self.damage_dealt += o.damage_dealt;
        self.damage_taken += o.damage_taken;
        self.gold_earned += o.gold_earned;
        self.equipment_score += o.equipment_score;
    }

    pub fn means(&self) -> [f64; 6] {
        let n = self.teams.max(1) as f64;
        [
            self.defeat_credits as f64 / n,
            self.survival_tick as f64 / n,
            self.damage_dealt as f64 / n,
            self.damage_taken as f64 / n,
            self.gold_earned as f64 / n,
            self.equipment_score as f64 / n,
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatsReport {
    pub replays: u64,
    pub item_distribution: BTreeMap<ItemCategory, u64>,
    pub item_quantity: BTreeMap<ItemKind, u64>,
    pub buy_sell: BTreeMap<ItemCategory, TradeCount>,
    pub price_grid: BTreeMap<(ItemKind, u8), PriceCell>,
    pub team_radar: BTreeMap<String, Radar>,
}

impl StatsReport {
    pub fn of_replay(r: &Replay) -> StatsReport {
        let mut s = StatsReport { replays: 1, ..Default::default() };
        for c in ItemCategory::ALL {
            s.buy_sell.insert(c, TradeCount::default());
        }
        let mut teams = [Radar::default(); TEAMS];
        let mut death_tick = [0u32; TEAMS];
        let team = |agent: u8| agent as usize / TEAM_SIZE;
        let created = |s: &mut StatsReport, kind: ItemKind, n: u64| {
            *s.item_distribution.entry(kind.category()).or_default() += n;
            *s.item_quantity.entry(kind).or_default() += n;
        };
        for (tick, e) in r.events() {
            match e {
                Event::Harvest { item: Some(item), .. } => created(&mut s, item.kind, item.quantity as u64),
                Event::Loot { agent, item, gold, .. } => {
                    if let Some(item) = item {
                        created(&mut s, item.kind, item.quantity as u64);
                    }
                    teams[team(*agent)].gold_earned += *gold as u64;
                }
                Event::List { kind, level, price, .. } => {
                    s.buy_sell.entry(kind.category()).or_default().sells += 1;
                    let cell = s.price_grid.entry((*kind, *level)).or_default();
                    cell.quantity += 1;
                    cell.price_sum += *price as u64;
                }
                Event::Buy { seller, kind, price, .. } => {
                    s.buy_sell.entry(kind.category()).or_default().buys += 1;
                    teams[team(*seller)].gold_earned += *price as u64;
                }
                Event::Attack { by, target, dmg, .. } => {
                    if let Some(a) = by.agent_index() {
                        teams[a / TEAM_SIZE].damage_dealt += *dmg as u64;
                    }
                    if let Some(t) = target.agent_index() {
                        teams[t / TEAM_SIZE].damage_taken += *dmg as u64;
                    }
                }
                Event::Death { agent, credit, equip_score, .. } => {
                    let t = team(*agent);
                    death_tick[t] = death_tick[t].max(tick);
                    teams[t].equipment_score += *equip_score as u64;
                    if let Some(c) = credit {
                        teams[*c as usize].defeat_credits += 1;
                    }
                }
                Event::End { survivors } => {
                    for sv in survivors {
                        let t = team(sv.agent);
                        death_tick[t] = r.header.horizon + 1;
                        teams[t].equipment_score += sv.equip_score as u64;
                    }
                }
                _ => {}
            }
        }
        for (t, radar) in teams.iter_mut().enumerate() {
            radar.teams = 1;
            radar.survival_tick = death_tick[t] as u64;
            let name = r.header.policies.get(t).cloned().unwrap_or_else(|| format!("team{t}"));
            s.team_radar.entry(name).or_default().merge(radar);
        }
        s
    }

    pub fn merge(mut self, o: StatsReport) -> StatsReport {
        self.replays += o.replays;
        for (k, v) in o.item_distribution {
            *self.item_distribution.entry(k).or_default() += v;
        }
        for (k, v) in o.item_quantity {
            *self.item_quantity.entry(k).or_default() += v;
        }
        for (k, v) in o.buy_sell {
            let e = self.buy_sell.entry(k).or_default();
            e.buys += v.buys;
            e.sells += v.sells;
        }
        for (k, v) in o.price_grid {
            let e = self.price_grid.entry(k).or_default();
            e.quantity += v.quantity;
            e.price_sum += v.price_sum;
        }
        for (k, v) in o.team_radar {
            self.team_radar.entry(k).or_default().merge(&v);
        }
        self
    }
}

pub fn compute_stats(replays: &[Replay]) -> Result<StatsReport, StatsError> {
    if replays.is_empty() {
        return Err(StatsError::Empty);
    }
    Ok(replays.par_iter().map(StatsReport::of_replay).reduce(StatsReport::default, StatsReport::merge))
}

/// Replay files (`*.jsonl`, `*.jsonl.gz`) directly inside `dir`, sorted.
pub fn replay_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.ends_with(".jsonl") || name.ends_with(".jsonl.gz")
        })
        .collect();
    files.sort();
    Ok(files)
}

/// Read and aggregate files in parallel, one replay in memory per worker.
pub fn compute_stats_from_files(files: &[PathBuf]) -> Result<StatsReport, StatsError> {
    if files.is_empty() {
        return Err(StatsError::Empty);
    }
    files
        .par_iter()
        .map(|p| {
            read_replay(p)
                .map(|r| StatsReport::of_replay(&r))
                .map_err(|source| StatsError::Replay { path: p.clone(), source })
        })
        .try_reduce(StatsReport::default, |a, b| Ok(a.merge(b)))
}

pub const CSV_FILES: [&str; 5] =
    ["item_distribution.csv", "item_quantity.csv", "buy_sell_ratio.csv", "price_grid.csv", "team_radar.csv"];

pub fn emit_csv(report: &StatsReport, out_dir: &Path) -> Result<(), StatsError> {
    fs::create_dir_all(out_dir)?;
    let open = |name: &str| csv::Writer::from_path(out_dir.join(name));

    let mut w = open(CSV_FILES[0])?;
    w.write_record(["category", "count"])?;
    for (c, n) in &report.item_distribution {
        w.write_record([c.name().to_string(), n.to_string()])?;
    }
    w.flush()?;

    let mut w = open(CSV_FILES[1])?;
    w.write_record(["kind", "category", "count"])?;
    for (k, n) in &report.item_quantity {
        w.write_record([format!("{k:?}"), k.category().name().to_string(), n.to_string()])?;
    }
    w.flush()?;

    let mut w = open(CSV_FILES[2])?;
    w.write_record(["category", "buys", "sells", "ratio"])?;
    for (c, t) in &report.buy_sell {
        let ratio = t.ratio().map_or_else(|| "inf".to_string(), |r| r.to_string());
        w.write_record([c.name().to_string(), t.buys.to_string(), t.sells.to_string(), ratio])?;
    }
    w.flush()?;

    let mut w = open(CSV_FILES[3])?;
    w.write_record(["kind", "level", "quantity", "mean_price"])?;
    for ((k, lvl), cell) in &report.price_grid {
        w.write_record([format!("{k:?}"), lvl.to_string(), cell.quantity.to_string(), cell.mean_price().to_string()])?;
    }
    w.flush()?;

    let mut w = open(CSV_FILES[4])?;
    w.write_record([
        "policy",
        "teams",
        "defeat_credits",
        "survival_tick",
        "damage_dealt",
        "damage_taken",
        "gold_earned",
        "equipment_score",
    ])?;
    for (name, r) in &report.team_radar {
        let mut row = vec![name.clone(), r.teams.to_string()];
        row.extend(r.means().iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
