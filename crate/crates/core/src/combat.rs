//! Style dominance, damage arithmetic, NPC behaviour, loot and defeat attribution.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::economy::{ItemCategory, ItemKind, ItemStack};
use crate::geom::{Direction, Pos};
use crate::sim::agent::{team_of, AgentState, EntityId, SkillKind};

/// Damage factor of the dominant style.
pub const DOMINANCE: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AttackStyle {
    Melee,
    Range,
    Mage,
}

impl AttackStyle {
    pub const ALL: [AttackStyle; 3] = [AttackStyle::Melee, AttackStyle::Range, AttackStyle::Mage];

    pub fn skill(self) -> SkillKind {
        match self {
            AttackStyle::Melee => SkillKind::Melee,
            AttackStyle::Range => SkillKind::Range,
            AttackStyle::Mage => SkillKind::Mage,
        }
    }

    /// Melee beats Range, Range beats Mage, Mage beats Melee.
    pub fn dominates(self, other: AttackStyle) -> bool {
        matches!(
            (self, other),
            (AttackStyle::Melee, AttackStyle::Range)
                | (AttackStyle::Range, AttackStyle::Mage)
                | (AttackStyle::Mage, AttackStyle::Melee)
        )
    }

    /// The style that beats `self`.
    pub fn counter(self) -> AttackStyle {
        match self {
            AttackStyle::Melee => AttackStyle::Mage,
            AttackStyle::Range => AttackStyle::Melee,
            AttackStyle::Mage => AttackStyle::Range,
        }
    }
}

pub fn dominance_multiplier(attacker_style: AttackStyle, defender_main: AttackStyle) -> f64 {
    if attacker_style.dominates(defender_main) {
        DOMINANCE
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NpcType {
    /// Never initiates; moves away from agents.
    Passive,
    /// Attacks only its last attacker.
    Neutral,
    /// Attacks the nearest agent in view.
    Hostile,
}

impl NpcType {
    pub const ALL: [NpcType; 3] = [NpcType::Passive, NpcType::Neutral, NpcType::Hostile];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpcState {
    pub pos: Pos,
    pub npc_type: NpcType,
    pub level: u8,
    pub style: AttackStyle,
    pub hp: u32,
    pub last_hitter: Option<EntityId>,
    pub alive: bool,
}

/// Offensive numbers of one attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackerStats {
    pub skill_level: u8,
    /// Level of the equipped weapon if it matches the style, else 0.
    pub weapon_level: u8,
    /// Level of the equipped ammunition if it matches the style, else 0.
    pub ammo_level: u8,
}

impl AttackerStats {
    pub fn of_agent(agent: &AgentState, style: AttackStyle) -> Self {
        let matching = |s: Option<&ItemStack>| {
            s.filter(|i| i.kind.style() == Some(style) && i.quantity > 0).map_or(0, |i| i.level)
        };
        AttackerStats {
            skill_level: agent.level(style.skill()),
            weapon_level: matching(agent.equipment.weapon.as_ref()),
            ammo_level: matching(agent.equipment.ammo.as_ref()),
        }
    }

    pub fn of_npc(npc: &NpcState) -> Self {
        AttackerStats { skill_level: npc.level, weapon_level: 0, ammo_level: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefenderStats {
    pub main_style: AttackStyle,
    /// Sum of hat, top and bottom levels.
    pub armor_levels: u32,
}

impl DefenderStats {
    pub fn of_agent(agent: &AgentState) -> Self {
        DefenderStats { main_style: agent.main_style(), armor_levels: agent.equipment.armor_levels() }
    }

    pub fn of_npc(npc: &NpcState) -> Self {
        DefenderStats { main_style: npc.style, armor_levels: 0 }
    }
}

/// `max(min, round(dominance * power - defense))`.
pub fn damage(cfg: &SimConfig, style: AttackStyle, attacker: AttackerStats, defender: DefenderStats) -> u32 {
    let power = cfg.base_damage
        + cfg.skill_damage * attacker.skill_level as u32
        + cfg.weapon_damage * attacker.weapon_level as u32
        + cfg.ammo_damage * attacker.ammo_level as u32;
    let defense = cfg.armor_defense * defender.armor_levels;
    let factor = if style.dominates(defender.main_style) { cfg.dominance_multiplier } else { 1.0 };
    let raw = (factor * power as f64 - defense as f64).round();
    (raw.max(0.0) as u32).max(cfg.min_damage)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NpcAction {
    Idle,
    Move(Direction),
    Attack { target: EntityId, style: AttackStyle },
}

/// An agent as seen by an NPC.
#[derive(Debug, Clone, Copy)]
pub struct SeenAgent {
    pub id: EntityId,
    pub pos: Pos,
    pub main_style: AttackStyle,
}

/// Decide one NPC's action. `seen` holds agents within its vision, and
/// `can_enter` reports whether a tile is free to step onto.
pub fn npc_act(npc: &NpcState, seen: &[SeenAgent], can_enter: impl Fn(Pos) -> bool, cfg: &SimConfig) -> NpcAction {
    let nearest = seen.iter().min_by_key(|a| (a.pos.chebyshev(npc.pos), a.id));
    let engage = |target: &SeenAgent| {
        if target.pos.chebyshev(npc.pos) <= cfg.npc_attack_range {
            NpcAction::Attack { target: target.id, style: target.main_style.counter() }
        } else {
            step_toward(npc.pos, target.pos, &can_enter).map_or(NpcAction::Idle, NpcAction::Move)
        }
    };
    match npc.npc_type {
        NpcType::Passive => match nearest {
            Some(a) => step_away(npc.pos, a.pos, &can_enter).map_or(NpcAction::Idle, NpcAction::Move),
            None => NpcAction::Idle,
        },
        NpcType::Neutral => match npc.last_hitter.and_then(|h| seen.iter().find(|a| a.id == h)) {
            Some(target) => engage(target),
            None => NpcAction::Idle,
        },
        NpcType::Hostile => nearest.map_or(NpcAction::Idle, engage),
    }
}

fn step_toward(from: Pos, to: Pos, can_enter: &impl Fn(Pos) -> bool) -> Option<Direction> {
    let here = (from.chebyshev(to), from.manhattan(to));
    Direction::MOVES
        .into_iter()
        .map(|d| (d, from.step(d)))
        .filter(|&(_, p)| can_enter(p))
        .map(|(d, p)| (d, (p.chebyshev(to), p.manhattan(to))))
        .filter(|&(_, key)| key < here)
        .min_by_key(|&(_, key)| key)
        .map(|(d, _)| d)
}

fn step_away(from: Pos, threat: Pos, can_enter: &impl Fn(Pos) -> bool) -> Option<Direction> {
    let here = (from.chebyshev(threat), from.manhattan(threat));
    Direction::MOVES
        .into_iter()
        .map(|d| (d, from.step(d)))
        .filter(|&(_, p)| can_enter(p))
        .map(|(d, p)| (d, (p.chebyshev(threat), p.manhattan(threat))))
        .filter(|&(_, key)| key > here)
        .max_by_key(|&(_, key)| key)
        .map(|(d, _)| d)
}

/// Gold equal to the NPC level plus one item of that level, category and
/// kind drawn uniformly.
pub fn npc_loot(npc_level: u8, rng: &mut impl Rng) -> (ItemStack, u32) {
    let category = ItemCategory::ALL[rng.gen_range(0..ItemCategory::ALL.len())];
    let kinds = category.kinds();
    let kind: ItemKind = kinds[rng.gen_range(0..kinds.len())];
    (ItemStack::single(kind, npc_level.clamp(1, 10)), npc_level as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeathCause {
    /// Final blow by an agent or NPC.
    Attack(EntityId),
    Fog,
    Starvation,
}

/// The team credited with a defeat, if any. Only player agents felled by
/// another agent's final blow count.
pub fn record_defeat(victim: EntityId, cause: DeathCause) -> Option<usize> {
    victim.agent_index()?;
    match cause {
        DeathCause::Attack(hitter) => hitter.agent_index().map(team_of),
        DeathCause::Fog | DeathCause::Starvation => None,
    }
}
