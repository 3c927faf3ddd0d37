use serde::{Deserialize, Serialize};

use crate::combat::AttackStyle;
use crate::geom::Direction;
use crate::sim::agent::EntityId;

pub const COMM_TOKENS: u8 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackOrder {
    pub target: EntityId,
    pub style: AttackStyle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SellOrder {
    pub index: u8,
    pub price: u32,
}

/// One agent's choices for a tick. Sub-actions are independent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentAction {
    #[serde(rename = "move")]
    pub mv: Direction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackOrder>,
    /// Inventory index to use.
    #[serde(rename = "use", skip_serializing_if = "Option::is_none")]
    pub use_item: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sell: Option<SellOrder>,
    /// Index into the observed market window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub buy: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comm: Option<u8>,
}

impl AgentAction {
    pub fn stay() -> Self {
        AgentAction::default()
    }

    pub fn moving(dir: Direction) -> Self {
        AgentAction { mv: dir, ..Default::default() }
    }
}

/// Actions for the eight members of one team, in member order.
pub type TeamActions = Vec<AgentAction>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionKind {
    Comm,
    Sell,
    Buy,
    Use,
    Attack,
    Move,
}

/// Why a sub-action was turned into a no-op.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MaskReason {
    Impassable,
    BadToken,
    UnknownTarget,
    DeadTarget,
    FriendlyTarget,
    OutOfRange,
    EmptySlot,
    LevelGate,
    InvalidPrice,
    BadIndex,
    OwnListing,
    InsufficientGold,
    InventoryFull,
    /// Another buyer with a lower agent id took the listing this tick.
    ListingGone,
}

impl MaskReason {
    /// Failures a policy cannot foresee from its own observation.
    pub fn is_contention(self) -> bool {
        matches!(self, MaskReason::ListingGone)
    }
}
