//! Items, equipment, inventory and the global market.

mod item;
mod market;

pub use item::{EquipSlot, Equipment, Inventory, ItemCategory, ItemKind, ItemStack, INVENTORY_SLOTS};
pub use market::{resolve_purchases, BuyFailure, BuyOrder, Listing, Market, Transfer};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::SimConfig;
use crate::sim::agent::{AgentState, SkillKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum UseError {
    #[error("inventory slot is empty")]
    EmptySlot,
    #[error("item level {item} exceeds skill level {skill}")]
    LevelGate { item: u8, skill: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum ListError {
    #[error("inventory slot is empty")]
    EmptySlot,
    #[error("price must be at least 1")]
    InvalidPrice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UseOutcome {
    Equipped { item: ItemStack, replaced: Option<ItemStack> },
    Consumed { item: ItemStack },
}

/// Skill level an item's level must not exceed, or `None` if ungated.
pub fn gate_level(agent: &AgentState, kind: ItemKind) -> Option<u8> {
    match kind.category() {
        ItemCategory::Weapon | ItemCategory::Ammunition => kind.style().map(|s| agent.level(s.skill())),
        ItemCategory::Armor => Some(agent.max_combat_level()),
        ItemCategory::Tool => kind.profession().map(|p| agent.level(p)),
        ItemCategory::Consumable => None,
    }
}

pub fn can_use(agent: &AgentState, item: &ItemStack) -> bool {
    gate_level(agent, item.kind).is_none_or(|lvl| item.level <= lvl)
}

/// Equip gear (the displaced item takes its inventory slot) or eat one unit
/// of a consumable.
pub fn use_item(agent: &mut AgentState, index: usize, cfg: &SimConfig) -> Result<UseOutcome, UseError> {
    let item = *agent.inventory.get(index).ok_or(UseError::EmptySlot)?;
    if let Some(skill) = gate_level(agent, item.kind) {
        if item.level > skill {
            return Err(UseError::LevelGate { item: item.level, skill });
        }
    }
    match item.kind.slot() {
        Some(slot) => {
            let stack = agent.inventory.take(index).ok_or(UseError::EmptySlot)?;
            let replaced = agent.equipment.slot_mut(slot).replace(stack);
            if let Some(old) = replaced {
                agent.inventory.put(index, old);
            }
            Ok(UseOutcome::Equipped { item: stack, replaced })
        }
        None => {
            let one = agent.inventory.take_one(index).ok_or(UseError::EmptySlot)?;
            let amount = cfg.consumable_restore * one.level as u32;
            match one.kind {
                ItemKind::Ration => {
                    agent.food.restore(amount);
                    agent.water.restore(amount);
                }
                ItemKind::Poultice => agent.heal(amount),
                _ => unreachable!("only consumables lack an equip slot"),
            }
            Ok(UseOutcome::Consumed { item: one })
        }
    }
}

/// Move one unit out of the inventory into a new listing.
pub fn list_item(agent: &mut AgentState, index: usize, price: u32, market: &mut Market) -> Result<Listing, ListError> {
    if price < 1 {
        return Err(ListError::InvalidPrice);
    }
    let one = agent.inventory.take_one(index).ok_or(ListError::EmptySlot)?;
    Ok(market.insert(agent.agent_id, one, price))
}

/// Level of the product yielded by a harvest of `skill`: the equipped tool's
/// level when it matches, else 1.
pub fn harvest_level(agent: &AgentState, skill: SkillKind) -> u8 {
    agent
        .equipment
        .tool
        .filter(|t| t.kind.profession() == Some(skill))
        .map_or(1, |t| t.level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Pos;
    use crate::sim::agent::Vital;

    fn agent() -> AgentState {
        AgentState::spawn(0, Pos::new(2, 2))
    }

    #[test]
    fn sword_above_skill_is_gated() {
        let mut a = agent();
        a.gain_xp(SkillKind::Melee, 20, 10);
        assert_eq!(a.level(SkillKind::Melee), 3);
        a.inventory.add(ItemStack::single(ItemKind::Sword, 5)).unwrap();
        assert_eq!(use_item(&mut a, 0, &SimConfig::default()), Err(UseError::LevelGate { item: 5, skill: 3 }));
        assert!(a.equipment.weapon.is_none());
    }

    #[test]
    fn poultice_clamps_hp() {
        let mut a = agent();
        a.hp = 95;
        a.inventory.add(ItemStack::single(ItemKind::Poultice, 1)).unwrap();
        use_item(&mut a, 0, &SimConfig::default()).unwrap();
        assert_eq!(a.hp, 100);
        assert!(a.inventory.is_empty());
    }

    #[test]
    fn ration_restores_food_and_water() {
        let mut a = agent();
        a.food = Vital::from_points(0);
        a.water = Vital::from_points(50);
        a.inventory.add(ItemStack { kind: ItemKind::Ration, level: 2, quantity: 3 }).unwrap();
        use_item(&mut a, 0, &SimConfig::default()).unwrap();
        assert_eq!(a.food.points(), 20.0);
        assert_eq!(a.water.points(), 70.0);
        assert_eq!(a.inventory.get(0).unwrap().quantity, 2);
    }

    #[test]
    fn equip_swaps_previous_item_into_slot() {
        let mut a = agent();
        a.inventory.add(ItemStack::single(ItemKind::Hat, 1)).unwrap();
        a.inventory.add(ItemStack::single(ItemKind::Hat, 1)).unwrap();
        a.inventory.add(ItemStack::single(ItemKind::Sword, 1)).unwrap();
        use_item(&mut a, 0, &SimConfig::default()).unwrap();
        assert_eq!(a.equipment.hat.unwrap().level, 1);
        assert!(a.inventory.get(0).is_none());
        let out = use_item(&mut a, 1, &SimConfig::default()).unwrap();
        assert!(matches!(out, UseOutcome::Equipped { replaced: Some(_), .. }));
        assert_eq!(a.inventory.get(1).unwrap().kind, ItemKind::Hat);
        assert_eq!(use_item(&mut a, 5, &SimConfig::default()), Err(UseError::EmptySlot));
    }

    #[test]
    fn listing_moves_one_unit() {
        let mut a = agent();
        let mut m = Market::default();
        a.inventory.add(ItemStack::single(ItemKind::Hat, 3)).unwrap();
        let l = list_item(&mut a, 0, 7, &mut m).unwrap();
        assert_eq!(l.item, ItemStack::single(ItemKind::Hat, 3));
        assert_eq!(l.price, 7);
        assert!(a.inventory.is_empty());
        assert_eq!(list_item(&mut a, 0, 7, &mut m), Err(ListError::EmptySlot));
        a.inventory.add(ItemStack::single(ItemKind::Hat, 3)).unwrap();
        assert_eq!(list_item(&mut a, 0, 0, &mut m), Err(ListError::InvalidPrice));
        assert_eq!(a.inventory.len(), 1);
    }

    #[test]
    fn tool_sets_harvest_level() {
        let mut a = agent();
        assert_eq!(harvest_level(&a, SkillKind::Prospecting), 1);
        a.equipment.tool = Some(ItemStack::single(ItemKind::Pickaxe, 5));
        assert_eq!(harvest_level(&a, SkillKind::Prospecting), 5);
        assert_eq!(harvest_level(&a, SkillKind::Fishing), 1);
    }
}
