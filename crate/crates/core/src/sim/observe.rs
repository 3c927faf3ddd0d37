//! Team-level observations.
//!
//! Teammates see each other in full wherever they are. Everything else is
//! visible only inside some living teammate's square window, and then only
//! through public fields.

use serde::{Deserialize, Serialize};

use crate::combat::{AttackStyle, NpcType};
use crate::economy::Listing;
use crate::geom::{Pos, Rect};
use crate::sim::agent::{main_style_of, AgentState, EntityId};
use crate::sim::WorldState;
use crate::worldgen::{TerrainKind, TEAM_SIZE};

/// Terrain around one agent, clipped at the map edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Patch {
    pub origin: Pos,
    pub rows: i32,
    pub cols: i32,
    pub kinds: Vec<TerrainKind>,
}

impl Patch {
    pub fn get(&self, p: Pos) -> Option<TerrainKind> {
        let r = p.row - self.origin.row;
        let c = p.col - self.origin.col;
        if r < 0 || c < 0 || r >= self.rows || c >= self.cols {
            return None;
        }
        Some(self.kinds[(r * self.cols + c) as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Pos, TerrainKind)> + '_ {
        self.kinds.iter().enumerate().map(move |(i, &k)| {
            let i = i as i32;
            (Pos::new(self.origin.row + i / self.cols, self.origin.col + i % self.cols), k)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberObs {
    pub agent: AgentState,
    pub patch: Patch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntityKind {
    Agent { team: u8 },
    Npc { npc_type: NpcType },
}

/// Public view of a non-teammate entity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityView {
    pub id: EntityId,
    pub kind: EntityKind,
    pub pos: Pos,
    pub hp: u32,
    /// Melee, range and mage levels.
    pub combat_levels: [u8; 3],
    pub main_style: AttackStyle,
    /// Weapon, hat, top and bottom levels (0 when empty).
    pub equipment_levels: [u8; 4],
}

impl EntityView {
    pub fn is_agent(&self) -> bool {
        matches!(self.kind, EntityKind::Agent { .. })
    }

    pub fn combat_level_sum(&self) -> u32 {
        self.combat_levels.iter().map(|&l| l as u32).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommHeard {
    pub speaker: EntityId,
    pub token: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamObservation {
    pub team_id: u8,
    pub tick: u32,
    pub map_size: i32,
    pub vision_radius: i32,
    pub fog: Rect,
    pub members: Vec<MemberObs>,
    pub entities: Vec<EntityView>,
    pub market: Vec<Listing>,
    pub comms: Vec<CommHeard>,
}

impl TeamObservation {
    pub fn entity(&self, id: EntityId) -> Option<&EntityView> {
        self.entities.iter().find(|e| e.id == id)
    }

    /// Whether a living teammate stands on `p`.
    pub fn member_at(&self, p: Pos) -> bool {
        self.members.iter().any(|m| m.agent.alive && m.agent.pos == p)
    }
}

fn window(center: Pos, radius: i32, size: i32) -> Rect {
    Rect {
        min: Pos::new((center.row - radius).max(0), (center.col - radius).max(0)),
        max: Pos::new((center.row + radius).min(size - 1), (center.col + radius).min(size - 1)),
    }
}

fn patch_of(state: &WorldState, center: Pos) -> Patch {
    let w = window(center, state.config.vision_radius, state.map.size);
    let kinds = (w.min.row..=w.max.row)
        .flat_map(|r| (w.min.col..=w.max.col).map(move |c| Pos::new(r, c)))
        .map(|p| state.map.kind(p))
        .collect();
    Patch { origin: w.min, rows: w.height(), cols: w.width(), kinds }
}

fn view_of(state: &WorldState, id: EntityId) -> EntityView {
    match (id.agent_index(), id.npc_index()) {
        (Some(i), _) => {
            let a = &state.agents[i];
            let e = &a.equipment;
            let lvl = |s: &Option<crate::economy::ItemStack>| s.map_or(0, |i| i.level);
            let levels = [a.skills[0].level, a.skills[1].level, a.skills[2].level];
            EntityView {
                id,
                kind: EntityKind::Agent { team: a.team_id },
                pos: a.pos,
                hp: a.hp,
                combat_levels: levels,
                main_style: main_style_of(levels),
                equipment_levels: [lvl(&e.weapon), lvl(&e.hat), lvl(&e.top), lvl(&e.bottom)],
            }
        }
        (_, Some(n)) => {
            let npc = &state.npcs[n];
            EntityView {
                id,
                kind: EntityKind::Npc { npc_type: npc.npc_type },
                pos: npc.pos,
                hp: npc.hp,
                combat_levels: [npc.level; 3],
                main_style: npc.style,
                equipment_levels: [0; 4],
            }
        }
        _ => unreachable!(),
    }
}

/// Build the observation for `team`.
pub fn observe(state: &WorldState, team: usize) -> TeamObservation {
    let radius = state.config.vision_radius;
    let size = state.map.size;
    let first = team * TEAM_SIZE;
    let members: Vec<MemberObs> = state.agents[first..first + TEAM_SIZE]
        .iter()
        .map(|a| MemberObs {
            agent: a.clone(),
            patch: if a.alive {
                patch_of(state, a.pos)
            } else {
                Patch { origin: a.pos, rows: 0, cols: 0, kinds: Vec::new() }
            },
        })
        .collect();

    let mut seen: Vec<EntityId> = Vec::new();
    let windows: Vec<Rect> = members
        .iter()
        .filter(|m| m.agent.alive)
        .map(|m| window(m.agent.pos, radius, size))
        .collect();
    for w in &windows {
        for r in w.min.row..=w.max.row {
            for c in w.min.col..=w.max.col {
                if let Some(id) = state.occupant(Pos::new(r, c)) {
                    let teammate = id.agent_index().is_some_and(|i| i / TEAM_SIZE == team);
                    if !teammate {
                        seen.push(id);
                    }
                }
            }
        }
    }
    seen.sort_unstable();
    seen.dedup();
    let entities = seen.into_iter().map(|id| view_of(state, id)).collect();

    let comms = state
        .comms
        .iter()
        .filter(|(speaker, _)| {
            let pos = state.agents[speaker.agent_index().unwrap_or(0)].pos;
            windows.iter().any(|w| w.contains(pos))
        })
        .map(|&(speaker, token)| CommHeard { speaker, token })
        .collect();

    let market = state.window.iter().filter_map(|id| state.market.get(*id).cloned()).collect();

    TeamObservation {
        team_id: team as u8,
        tick: state.tick,
        map_size: size,
        vision_radius: radius,
        fog: state.fog.rect,
        members,
        entities,
        market,
        comms,
    }
}
