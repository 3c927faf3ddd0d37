//! The shrinking safe zone.

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::geom::{Pos, Rect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafeZone {
    /// Tiles shrunk from each side so far (not capped).
    pub inset: u32,
    pub rect: Rect,
}

/// Number of one-tile shrinks that have happened by `tick`.
pub fn shrink_count(tick: u32, cfg: &SimConfig) -> u32 {
    if tick < cfg.fog_start {
        0
    } else {
        (tick - cfg.fog_start) / cfg.fog_interval.max(1) + 1
    }
}

/// The safe rectangle at `tick`. Each side moves in by the shrink count but
/// never past the center tile `size / 2`.
pub fn fog_rectangle(tick: u32, size: i32, cfg: &SimConfig) -> SafeZone {
    let inset = shrink_count(tick, cfg);
    let c = size / 2;
    let i = inset.min(size as u32) as i32;
    let lo = i.min(c);
    let hi = (size - 1 - i).max(c);
    SafeZone { inset, rect: Rect { min: Pos::new(lo, lo), max: Pos::new(hi, hi) } }
}

/// `fog_damage` hit points per tile of Chebyshev distance outside `safe`.
pub fn fog_damage(pos: Pos, safe: &Rect, fog_damage: u32) -> u32 {
    fog_damage * safe.distance(pos) as u32
}
