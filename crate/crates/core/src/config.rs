//! Engine constants and the flat `key = value` config file.
//!
//! Every tunable constant of the engine has one key. Unknown keys are an
//! error. Map keys:
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `map_size` | 128 | tiles per side |
//! | `npc_count` | 192 | NPCs placed at reset |
//! | `ratio_<kind>` | see [`MapGenConfig`] | fraction of interior tiles for `lava`, `water`, `forest`, `stone`, `ore`, `tree`, `crystal`, `herb`, `fish` |
//!
//! Simulation keys share the field names of [`SimConfig`].

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::worldgen::{MapGenConfig, TerrainKind};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading config: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing config: {0}")]
    Parse(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {msg}")]
    BadValue { key: String, msg: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    /// Last tick of a match.
    pub horizon: u32,
    pub fog_start: u32,
    /// Ticks per one-tile shrink.
    pub fog_interval: u32,
    /// Fog damage per tile of distance per tick.
    pub fog_damage: u32,
    /// Food and water decay in half-points per tick.
    pub food_decay: u16,
    pub water_decay: u16,
    pub starvation_damage: u32,
    pub dehydration_damage: u32,
    /// Food and water must both exceed this (points) to regenerate.
    pub regen_threshold: u32,
    pub regen_amount: u32,
    pub respawn_ticks: u32,
    pub xp_per_level: u32,
    pub base_damage: u32,
    pub skill_damage: u32,
    pub weapon_damage: u32,
    pub ammo_damage: u32,
    pub armor_defense: u32,
    pub min_damage: u32,
    pub dominance_multiplier: f64,
    /// Points restored per consumable level.
    pub consumable_restore: u32,
    pub npc_hp_per_level: u32,
    pub npc_vision: i32,
    pub npc_attack_range: i32,
    /// Radius of the square observation window (7 gives 15x15).
    pub vision_radius: i32,
    pub market_window: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            horizon: 1280,
            fog_start: 240,
            fog_interval: 16,
            fog_damage: 1,
            food_decay: 1,
            water_decay: 1,
            starvation_damage: 1,
            dehydration_damage: 1,
            regen_threshold: 50,
            regen_amount: 1,
            respawn_ticks: 50,
            xp_per_level: 10,
            base_damage: 10,
            skill_damage: 2,
            weapon_damage: 3,
            ammo_damage: 1,
            armor_defense: 2,
            min_damage: 1,
            dominance_multiplier: 1.5,
            consumable_restore: 10,
            npc_hp_per_level: 10,
            npc_vision: 7,
            npc_attack_range: 1,
            vision_radius: 7,
            market_window: 170,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub map: MapGenConfig,
    pub sim: SimConfig,
}

fn terrain_key(name: &str) -> Option<TerrainKind> {
    TerrainKind::GENERATABLE
        .into_iter()
        .find(|k| format!("{k:?}").eq_ignore_ascii_case(name))
}

impl GameConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        let mut cfg = GameConfig::default();
        let mut sim_keys = toml::Table::new();
        for (key, value) in table {
            let bad = |msg: &str| ConfigError::BadValue { key: key.clone(), msg: msg.to_string() };
            if value.is_table() {
                return Err(bad("nested tables are not allowed"));
            }
            match key.as_str() {
                "map_size" => {
                    cfg.map.size = value.as_integer().ok_or_else(|| bad("expected integer"))? as i32;
                }
                "npc_count" => {
                    let n = value.as_integer().filter(|n| *n >= 0).ok_or_else(|| bad("expected count"))?;
                    cfg.map.npc_count = n as usize;
                }
                k if k.starts_with("ratio_") => {
                    let kind = terrain_key(&k["ratio_".len()..]).ok_or_else(|| ConfigError::UnknownKey(key.clone()))?;
                    let r = value
                        .as_float()
                        .or_else(|| value.as_integer().map(|i| i as f64))
                        .ok_or_else(|| bad("expected number"))?;
                    cfg.map.terrain_ratios.insert(kind, r);
                }
                _ => {
                    sim_keys.insert(key, value);
                }
            }
        }
        // Merge onto the defaults field by field so unknown keys are caught.
        let defaults = toml::Table::try_from(SimConfig::default()).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let mut merged = defaults.clone();
        for (key, value) in sim_keys {
            if !defaults.contains_key(&key) {
                return Err(ConfigError::UnknownKey(key));
            }
            merged.insert(key, value);
        }
        cfg.sim = merged
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        cfg.map.validate().map_err(|e| ConfigError::BadValue { key: "map".into(), msg: e.to_string() })?;
        Ok(cfg)
    }

    /// Flat key/value rendering, parseable by [`GameConfig::parse`].
    pub fn to_flat(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("map_size = {}\nnpc_count = {}\n", self.map.size, self.map.npc_count));
        for (k, r) in &self.map.terrain_ratios {
            out.push_str(&format!("ratio_{} = {:?}\n", format!("{k:?}").to_lowercase(), r));
        }
        let sim: BTreeMap<String, toml::Value> = toml::Table::try_from(&self.sim)
            .map(|t| t.into_iter().collect())
            .unwrap_or_default();
        for (k, v) in sim {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}
