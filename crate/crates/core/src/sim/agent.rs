use serde::{Deserialize, Serialize};

use crate::combat::AttackStyle;
use crate::economy::{Equipment, Inventory};
use crate::geom::Pos;
use crate::worldgen::{AGENTS, TEAM_SIZE};

pub const MAX_LEVEL: u8 = 10;
pub const MAX_VITAL: u32 = 100;

/// Identifies an agent (`0..128`) or an NPC (`128 + npc index`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub u32);

impl EntityId {
    pub fn agent(index: usize) -> Self {
        EntityId(index as u32)
    }

    pub fn npc(index: usize) -> Self {
        EntityId((AGENTS + index) as u32)
    }

    pub fn agent_index(self) -> Option<usize> {
        ((self.0 as usize) < AGENTS).then_some(self.0 as usize)
    }

    pub fn npc_index(self) -> Option<usize> {
        (self.0 as usize).checked_sub(AGENTS)
    }

    pub fn is_agent(self) -> bool {
        self.agent_index().is_some()
    }
}

pub fn team_of(agent: usize) -> usize {
    agent / TEAM_SIZE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SkillKind {
    Melee,
    Range,
    Mage,
    Fishing,
    Herbalism,
    Prospecting,
    Carving,
    Alchemy,
}

impl SkillKind {
    pub const ALL: [SkillKind; 8] = [
        SkillKind::Melee,
        SkillKind::Range,
        SkillKind::Mage,
        SkillKind::Fishing,
        SkillKind::Herbalism,
        SkillKind::Prospecting,
        SkillKind::Carving,
        SkillKind::Alchemy,
    ];
    pub const PROFESSIONS: [SkillKind; 5] = [
        SkillKind::Fishing,
        SkillKind::Herbalism,
        SkillKind::Prospecting,
        SkillKind::Carving,
        SkillKind::Alchemy,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn combat_style(self) -> Option<AttackStyle> {
        match self {
            SkillKind::Melee => Some(AttackStyle::Melee),
            SkillKind::Range => Some(AttackStyle::Range),
            SkillKind::Mage => Some(AttackStyle::Mage),
            _ => None,
        }
    }

    pub fn is_combat(self) -> bool {
        self.combat_style().is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skill {
    pub level: u8,
    pub xp: u32,
}

impl Default for Skill {
    fn default() -> Self {
        Skill { level: 1, xp: 0 }
    }
}

/// Food or water, stored in half-points so the 0.5/tick decay stays integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vital(u16);

impl Vital {
    pub const FULL: Vital = Vital(2 * MAX_VITAL as u16);

    pub fn from_points(points: u32) -> Self {
        Vital((2 * points.min(MAX_VITAL)) as u16)
    }

    pub fn half_points(self) -> u16 {
        self.0
    }

    pub fn points(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn decay(&mut self, half_points: u16) {
        self.0 = self.0.saturating_sub(half_points);
    }

    pub fn restore(&mut self, points: u32) {
        self.0 = (self.0 as u32 + 2 * points).min(Self::FULL.0 as u32) as u16;
    }

    /// Strictly above `points`.
    pub fn above(self, points: u32) -> bool {
        self.0 as u32 > 2 * points
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentState {
    pub agent_id: u8,
    pub team_id: u8,
    pub pos: Pos,
    pub hp: u32,
    pub food: Vital,
    pub water: Vital,
    pub skills: [Skill; 8],
    pub inventory: Inventory,
    pub equipment: Equipment,
    pub gold: u32,
    pub alive: bool,
    /// Set when the agent dies.
    pub death_tick: Option<u32>,
    /// Sum of the eight skill levels, frozen at death.
    pub level_snapshot: Option<u32>,
    pub last_hitter: Option<EntityId>,
}

impl AgentState {
    pub fn spawn(agent_id: usize, pos: Pos) -> Self {
        AgentState {
            agent_id: agent_id as u8,
            team_id: team_of(agent_id) as u8,
            pos,
            hp: MAX_VITAL,
            food: Vital::FULL,
            water: Vital::FULL,
            skills: [Skill::default(); 8],
            inventory: Inventory::default(),
            equipment: Equipment::default(),
            gold: 0,
            alive: true,
            death_tick: None,
            level_snapshot: None,
            last_hitter: None,
        }
    }

    pub fn id(&self) -> EntityId {
        EntityId::agent(self.agent_id as usize)
    }

    pub fn skill(&self, kind: SkillKind) -> &Skill {
        &self.skills[kind.index()]
    }

    pub fn level(&self, kind: SkillKind) -> u8 {
        self.skills[kind.index()].level
    }

    /// Add experience; level = min(10, 1 + xp / xp_per_level).
    pub fn gain_xp(&mut self, kind: SkillKind, xp: u32, xp_per_level: u32) {
        let s = &mut self.skills[kind.index()];
        s.xp += xp;
        s.level = (1 + s.xp / xp_per_level.max(1)).min(MAX_LEVEL as u32) as u8;
    }

    pub fn level_sum(&self) -> u32 {
        self.skills.iter().map(|s| s.level as u32).sum()
    }

    /// Highest combat skill, ties broken Melee > Range > Mage.
    pub fn main_style(&self) -> AttackStyle {
        main_style_of([
            self.level(SkillKind::Melee),
            self.level(SkillKind::Range),
            self.level(SkillKind::Mage),
        ])
    }

    pub fn max_combat_level(&self) -> u8 {
        AttackStyle::ALL.iter().map(|s| self.level(s.skill())).max().unwrap_or(1)
    }

    /// Mean of the three combat levels.
    pub fn combat_level(&self) -> f64 {
        AttackStyle::ALL.iter().map(|s| self.level(s.skill()) as f64).sum::<f64>() / 3.0
    }

    pub fn damage(&mut self, amount: u32) {
        self.hp = self.hp.saturating_sub(amount);
    }

    pub fn heal(&mut self, amount: u32) {
        self.hp = (self.hp + amount).min(MAX_VITAL);
    }
}

/// Main style from `[melee, range, mage]` levels.
pub fn main_style_of(levels: [u8; 3]) -> AttackStyle {
    let mut best = AttackStyle::Melee;
    let mut best_level = levels[0];
    for (style, &lvl) in AttackStyle::ALL.iter().zip(levels.iter()).skip(1) {
        if lvl > best_level {
            best = *style;
            best_level = lvl;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_level_curve_caps_at_ten() {
        let mut a = AgentState::spawn(0, Pos::new(1, 1));
        a.gain_xp(SkillKind::Fishing, 9, 10);
        assert_eq!(a.level(SkillKind::Fishing), 1);
        a.gain_xp(SkillKind::Fishing, 1, 10);
        assert_eq!(a.level(SkillKind::Fishing), 2);
        a.gain_xp(SkillKind::Fishing, 500, 10);
        assert_eq!(a.level(SkillKind::Fishing), 10);
    }

    #[test]
    fn main_style_tie_break() {
        assert_eq!(main_style_of([1, 1, 1]), AttackStyle::Melee);
        assert_eq!(main_style_of([1, 2, 2]), AttackStyle::Range);
        assert_eq!(main_style_of([1, 1, 2]), AttackStyle::Mage);
    }

    #[test]
    fn vital_half_points() {
        let mut v = Vital::FULL;
        v.decay(1);
        assert_eq!(v.points(), 99.5);
        assert!(v.above(50));
        v.restore(10);
        assert_eq!(v, Vital::FULL);
        let mut v = Vital::from_points(0);
        v.decay(1);
        assert!(v.is_empty());
    }

    #[test]
    fn entity_ids() {
        assert_eq!(EntityId::agent(5).agent_index(), Some(5));
        assert_eq!(EntityId::npc(3).npc_index(), Some(3));
        assert_eq!(EntityId::npc(0).agent_index(), None);
        assert_eq!(team_of(15), 1);
    }
}
