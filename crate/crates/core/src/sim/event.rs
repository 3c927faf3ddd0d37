use serde::{Deserialize, Serialize};

use crate::combat::{AttackStyle, DeathCause};
use crate::economy::{ItemKind, ItemStack};
use crate::geom::Pos;
use crate::sim::action::{ActionKind, MaskReason};
use crate::sim::agent::EntityId;
use crate::worldgen::TerrainKind;

/// What an agent reported when the match ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub agent: u8,
    pub level_sum: u32,
    pub equip_score: u32,
}

/// Everything observable that happens in a tick. Field names are short
/// because replays store one JSON object per event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "e")]
pub enum Event {
    #[serde(rename = "comm")]
    Comm { agent: u8, token: u8 },
    #[serde(rename = "list")]
    List { listing: u64, seller: u8, kind: ItemKind, level: u8, price: u32 },
    #[serde(rename = "buy")]
    Buy { listing: u64, buyer: u8, seller: u8, kind: ItemKind, level: u8, price: u32 },
    #[serde(rename = "delist")]
    Delist { listing: u64, seller: u8, kind: ItemKind, level: u8 },
    #[serde(rename = "equip")]
    Equip { agent: u8, item: ItemStack },
    #[serde(rename = "use")]
    Consume { agent: u8, kind: ItemKind, level: u8 },
    #[serde(rename = "atk")]
    Attack { by: EntityId, target: EntityId, style: AttackStyle, dmg: u32 },
    #[serde(rename = "ammo")]
    AmmoSpent { agent: u8, kind: ItemKind, level: u8 },
    #[serde(rename = "mv")]
    Move { id: EntityId, to: Pos },
    #[serde(rename = "blk")]
    MoveBlocked { agent: u8, to: Pos },
    #[serde(rename = "hv")]
    Harvest { agent: u8, tile: TerrainKind, item: Option<ItemStack> },
    #[serde(rename = "hvl")]
    HarvestLost { agent: u8, tile: TerrainKind },
    #[serde(rename = "death")]
    Death { agent: u8, cause: DeathCause, credit: Option<u8>, level_sum: u32, equip_score: u32 },
    #[serde(rename = "destroy")]
    Destroy { agent: u8, items: Vec<ItemStack> },
    #[serde(rename = "npcdeath")]
    NpcDeath { id: EntityId, level: u8 },
    #[serde(rename = "loot")]
    Loot { agent: u8, npc: EntityId, item: Option<ItemStack>, gold: u32 },
    #[serde(rename = "fog")]
    FogShrink { inset: u32 },
    #[serde(rename = "mask")]
    Masked { agent: u8, action: ActionKind, reason: MaskReason },
    #[serde(rename = "end")]
    End { survivors: Vec<Survivor> },
}
