use serde::{Deserialize, Serialize};

use crate::combat::AttackStyle;
use crate::sim::agent::SkillKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ItemCategory {
    Ammunition,
    Weapon,
    Armor,
    Consumable,
    Tool,
}

impl ItemCategory {
    pub const ALL: [ItemCategory; 5] = [
        ItemCategory::Weapon,
        ItemCategory::Armor,
        ItemCategory::Consumable,
        ItemCategory::Tool,
        ItemCategory::Ammunition,
    ];

    pub fn kinds(self) -> &'static [ItemKind] {
        use ItemKind::*;
        match self {
            ItemCategory::Ammunition => &[Shaving, Scrap, Shard],
            ItemCategory::Weapon => &[Sword, Bow, Wand],
            ItemCategory::Armor => &[Hat, Top, Bottom],
            ItemCategory::Consumable => &[Ration, Poultice],
            ItemCategory::Tool => &[Rod, Gloves, Pickaxe, Chisel, ArcaneFocus],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ItemCategory::Ammunition => "ammunition",
            ItemCategory::Weapon => "weapon",
            ItemCategory::Armor => "armor",
            ItemCategory::Consumable => "consumable",
            ItemCategory::Tool => "tool",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ItemKind {
    Shaving,
    Scrap,
    Shard,
    Sword,
    Bow,
    Wand,
    Hat,
    Top,
    Bottom,
    Ration,
    Poultice,
    Rod,
    Gloves,
    Pickaxe,
    Chisel,
    ArcaneFocus,
}

/// Where an item sits once equipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquipSlot {
    Weapon,
    Hat,
    Top,
    Bottom,
    Ammo,
    Tool,
}

impl ItemKind {
    pub const ALL: [ItemKind; 16] = [
        ItemKind::Shaving,
        ItemKind::Scrap,
        ItemKind::Shard,
        ItemKind::Sword,
        ItemKind::Bow,
        ItemKind::Wand,
        ItemKind::Hat,
        ItemKind::Top,
        ItemKind::Bottom,
        ItemKind::Ration,
        ItemKind::Poultice,
        ItemKind::Rod,
        ItemKind::Gloves,
        ItemKind::Pickaxe,
        ItemKind::Chisel,
        ItemKind::ArcaneFocus,
    ];

    pub fn category(self) -> ItemCategory {
        use ItemKind::*;
        match self {
            Shaving | Scrap | Shard => ItemCategory::Ammunition,
            Sword | Bow | Wand => ItemCategory::Weapon,
            Hat | Top | Bottom => ItemCategory::Armor,
            Ration | Poultice => ItemCategory::Consumable,
            Rod | Gloves | Pickaxe | Chisel | ArcaneFocus => ItemCategory::Tool,
        }
    }

    /// Combat style of a weapon or ammunition.
    pub fn style(self) -> Option<AttackStyle> {
        use ItemKind::*;
        match self {
            Sword | Shaving => Some(AttackStyle::Melee),
            Bow | Scrap => Some(AttackStyle::Range),
            Wand | Shard => Some(AttackStyle::Mage),
            _ => None,
        }
    }

    /// Profession a tool boosts.
    pub fn profession(self) -> Option<SkillKind> {
        use ItemKind::*;
        match self {
            Rod => Some(SkillKind::Fishing),
            Gloves => Some(SkillKind::Herbalism),
            Pickaxe => Some(SkillKind::Prospecting),
            Chisel => Some(SkillKind::Carving),
            ArcaneFocus => Some(SkillKind::Alchemy),
            _ => None,
        }
    }

    pub fn slot(self) -> Option<EquipSlot> {
        use ItemKind::*;
        match self {
            Sword | Bow | Wand => Some(EquipSlot::Weapon),
            Hat => Some(EquipSlot::Hat),
            Top => Some(EquipSlot::Top),
            Bottom => Some(EquipSlot::Bottom),
            Shaving | Scrap | Shard => Some(EquipSlot::Ammo),
            Rod | Gloves | Pickaxe | Chisel | ArcaneFocus => Some(EquipSlot::Tool),
            Ration | Poultice => None,
        }
    }

    pub fn stackable(self) -> bool {
        matches!(self.category(), ItemCategory::Ammunition | ItemCategory::Consumable)
    }

    pub fn weapon_for(style: AttackStyle) -> ItemKind {
        match style {
            AttackStyle::Melee => ItemKind::Sword,
            AttackStyle::Range => ItemKind::Bow,
            AttackStyle::Mage => ItemKind::Wand,
        }
    }

    pub fn ammo_for(style: AttackStyle) -> ItemKind {
        match style {
            AttackStyle::Melee => ItemKind::Shaving,
            AttackStyle::Range => ItemKind::Scrap,
            AttackStyle::Mage => ItemKind::Shard,
        }
    }

    pub fn tool_for(skill: SkillKind) -> Option<ItemKind> {
        ItemKind::ALL.into_iter().find(|k| k.profession() == Some(skill))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ItemStack {
    pub kind: ItemKind,
    pub level: u8,
    pub quantity: u32,
}

impl ItemStack {
    pub fn single(kind: ItemKind, level: u8) -> Self {
        ItemStack { kind, level, quantity: 1 }
    }

    pub fn merges_with(&self, other: &ItemStack) -> bool {
        self.kind.stackable() && self.kind == other.kind && self.level == other.level
    }
}

pub const INVENTORY_SLOTS: usize = 12;

/// Twelve fixed slots. Removing an item leaves a hole, so indices chosen
/// from an observation stay valid for the whole tick.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inventory {
    slots: [Option<ItemStack>; INVENTORY_SLOTS],
}

impl Inventory {
    pub fn get(&self, index: usize) -> Option<&ItemStack> {
        self.slots.get(index).and_then(|s| s.as_ref())
    }

    pub fn slots(&self) -> &[Option<ItemStack>; INVENTORY_SLOTS] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ItemStack)> {
        self.slots.iter().enumerate().filter_map(|(i, s)| s.as_ref().map(|s| (i, s)))
    }

    /// Whether `stack` could be added without overflowing.
    pub fn has_room_for(&self, stack: &ItemStack) -> bool {
        self.slots.iter().any(|s| match s {
            None => true,
            Some(existing) => existing.merges_with(stack),
        })
    }

    /// Merge into a matching stack or take the first free slot.
    pub fn add(&mut self, stack: ItemStack) -> Result<usize, ItemStack> {
        if let Some(i) = self.slots.iter().position(|s| s.as_ref().is_some_and(|e| e.merges_with(&stack))) {
            if let Some(existing) = self.slots[i].as_mut() {
                existing.quantity += stack.quantity;
            }
            return Ok(i);
        }
        match self.slots.iter().position(Option::is_none) {
            Some(i) => {
                self.slots[i] = Some(stack);
                Ok(i)
            }
            None => Err(stack),
        }
    }

    /// Take one unit from `index`.
    pub fn take_one(&mut self, index: usize) -> Option<ItemStack> {
        let slot = self.slots.get_mut(index)?;
        let stack = slot.as_mut()?;
        let one = ItemStack { quantity: 1, ..*stack };
        stack.quantity -= 1;
        if stack.quantity == 0 {
            *slot = None;
        }
        Some(one)
    }

    /// Take the whole stack at `index`.
    pub fn take(&mut self, index: usize) -> Option<ItemStack> {
        self.slots.get_mut(index)?.take()
    }

    pub fn put(&mut self, index: usize, stack: ItemStack) {
        debug_assert!(self.slots[index].is_none());
        self.slots[index] = Some(stack);
    }

    pub fn clear(&mut self) -> Vec<ItemStack> {
        self.slots.iter_mut().filter_map(Option::take).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equipment {
    pub weapon: Option<ItemStack>,
    pub hat: Option<ItemStack>,
    pub top: Option<ItemStack>,
    pub bottom: Option<ItemStack>,
    pub ammo: Option<ItemStack>,
    pub tool: Option<ItemStack>,
}

impl Equipment {
    pub fn slot_mut(&mut self, slot: EquipSlot) -> &mut Option<ItemStack> {
        match slot {
            EquipSlot::Weapon => &mut self.weapon,
            EquipSlot::Hat => &mut self.hat,
            EquipSlot::Top => &mut self.top,
            EquipSlot::Bottom => &mut self.bottom,
            EquipSlot::Ammo => &mut self.ammo,
            EquipSlot::Tool => &mut self.tool,
        }
    }

    pub fn slot(&self, slot: EquipSlot) -> Option<&ItemStack> {
        match slot {
            EquipSlot::Weapon => self.weapon.as_ref(),
            EquipSlot::Hat => self.hat.as_ref(),
            EquipSlot::Top => self.top.as_ref(),
            EquipSlot::Bottom => self.bottom.as_ref(),
            EquipSlot::Ammo => self.ammo.as_ref(),
            EquipSlot::Tool => self.tool.as_ref(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &ItemStack> {
        [&self.weapon, &self.hat, &self.top, &self.bottom, &self.ammo, &self.tool]
            .into_iter()
            .flatten()
    }

    pub fn armor_levels(&self) -> u32 {
        [&self.hat, &self.top, &self.bottom].into_iter().flatten().map(|s| s.level as u32).sum()
    }

    /// Sum of equipped item levels.
    pub fn score(&self) -> u32 {
        self.iter().map(|s| s.level as u32).sum()
    }

    pub fn clear(&mut self) -> Vec<ItemStack> {
        [
            &mut self.weapon,
            &mut self.hat,
            &mut self.top,
            &mut self.bottom,
            &mut self.ammo,
            &mut self.tool,
        ]
        .into_iter()
        .filter_map(Option::take)
        .collect()
    }
}
