//! Shared per-tick team context: what the team knows about terrain and
//! entities, plus greedy stepping with tile reservations.

use std::collections::HashSet;

use crate::geom::{Direction, Pos, Rect};
use crate::sim::observe::{EntityView, TeamObservation};
use crate::worldgen::TerrainKind;

/// Kinds the policies look for, indexed by `TerrainKind::index`.
const KINDS: usize = 16;

pub struct TeamContext<'a> {
    pub obs: &'a TeamObservation,
    /// Known tiles of each terrain kind across all teammates' windows.
    /// Overlapping windows may list a tile twice.
    sightings: Vec<Vec<Pos>>,
    occupied: HashSet<Pos>,
    reserved: HashSet<Pos>,
    /// Listing ids already claimed by a teammate this tick.
    pub claimed: HashSet<u64>,
}

impl<'a> TeamContext<'a> {
    pub fn new(obs: &'a TeamObservation) -> Self {
        let mut sightings = vec![Vec::new(); KINDS];
        for m in &obs.members {
            for (p, k) in m.patch.iter() {
                if interesting(k) {
                    sightings[k.index() as usize].push(p);
                }
            }
        }
        let occupied = obs
            .entities
            .iter()
            .map(|e| e.pos)
            .chain(obs.members.iter().filter(|m| m.agent.alive).map(|m| m.agent.pos))
            .collect();
        TeamContext { obs, sightings, occupied, reserved: HashSet::new(), claimed: HashSet::new() }
    }

    pub fn terrain(&self, member: usize, p: Pos) -> Option<TerrainKind> {
        self.obs.members[member].patch.get(p)
    }

    /// Nearest known tile of `kind` to `from`, ties by position.
    pub fn nearest(&self, kind: TerrainKind, from: Pos, within: &Rect) -> Option<Pos> {
        self.sightings[kind.index() as usize]
            .iter()
            .filter(|p| within.contains(**p))
            .min_by_key(|p| (p.chebyshev(from), p.manhattan(from), **p))
            .copied()
    }

    pub fn enemies(&self) -> impl Iterator<Item = &EntityView> {
        self.obs.entities.iter()
    }

    fn can_enter(&self, member: usize, p: Pos) -> bool {
        self.terrain(member, p).is_some_and(|k| k.passable()) && !self.occupied.contains(&p) && !self.reserved.contains(&p)
    }

    /// Hold the current tile.
    pub fn hold(&mut self, from: Pos) -> Direction {
        self.reserved.insert(from);
        Direction::Stay
    }

    /// Greedy step toward `goal`: the best strictly-closer move, else a
    /// sidestep that keeps the Chebyshev distance, else stay.
    pub fn toward(&mut self, member: usize, from: Pos, goal: Pos) -> Direction {
        let here = (from.chebyshev(goal), from.manhattan(goal));
        let options: Vec<(Direction, Pos, (i32, i32))> = Direction::MOVES
            .into_iter()
            .map(|d| (d, from.step(d)))
            .filter(|&(_, p)| self.can_enter(member, p))
            .map(|(d, p)| (d, p, (p.chebyshev(goal), p.manhattan(goal))))
            .collect();
        let closer = options.iter().filter(|o| o.2 < here).min_by_key(|o| o.2);
        let side = || options.iter().filter(|o| o.2 .0 <= here.0 && o.2 != here).min_by_key(|o| o.2);
        match closer.or_else(side) {
            Some(&(d, p, _)) => {
                self.reserved.insert(p);
                d
            }
            None => self.hold(from),
        }
    }

    /// Step that maximizes distance from `threat`.
    pub fn away(&mut self, member: usize, from: Pos, threat: Pos) -> Direction {
        let here = (from.chebyshev(threat), from.manhattan(threat));
        let best = Direction::MOVES
            .into_iter()
            .map(|d| (d, from.step(d)))
            .filter(|&(_, p)| self.can_enter(member, p))
            .map(|(d, p)| (d, p, (p.chebyshev(threat), p.manhattan(threat))))
            .filter(|o| o.2 > here)
            .max_by_key(|o| o.2);
        match best {
            Some((d, p, _)) => {
                self.reserved.insert(p);
                d
            }
            None => self.hold(from),
        }
    }
}

fn interesting(k: TerrainKind) -> bool {
    matches!(
        k,
        TerrainKind::Forest
            | TerrainKind::Water
            | TerrainKind::Ore
            | TerrainKind::Tree
            | TerrainKind::Crystal
            | TerrainKind::Herb
            | TerrainKind::Fish
    )
}

/// Closest point of `r` to `p`.
pub fn clamp_into(r: &Rect, p: Pos) -> Pos {
    Pos::new(p.row.clamp(r.min.row, r.max.row), p.col.clamp(r.min.col, r.max.col))
}

/// `r` shrunk by up to `by` on each side without inverting.
pub fn shrink(r: &Rect, by: i32) -> Rect {
    let by = by.min((r.height() - 1) / 2).min((r.width() - 1) / 2).max(0);
    r.inset(by)
}
