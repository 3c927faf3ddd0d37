//! Rebuild every agent's gold and holdings from the event stream and check
//! that no item or coin appears from nowhere.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::economy::{ItemKind, ItemStack};
use crate::sim::event::Event;
use crate::sim::WorldState;
use crate::worldgen::AGENTS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("tick {tick}: agent {agent} spends {kind:?} L{level} it does not hold")]
    PhantomItem { tick: u32, agent: u8, kind: ItemKind, level: u8 },
    #[error("tick {tick}: listing {listing} is not on the market")]
    PhantomListing { tick: u32, listing: u64 },
    #[error("tick {tick}: agent {agent} pays {price} with only {gold} gold")]
    Overdraft { tick: u32, agent: u8, price: u32, gold: u64 },
    #[error("final state differs from the ledger: {0}")]
    StateMismatch(String),
}

type Key = (u8, ItemKind, u8);

/// Holdings reconstructed from events. An agent's holding is its inventory
/// plus equipment; listings are tracked separately.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ledger {
    pub gold: BTreeMap<u8, u64>,
    pub held: BTreeMap<Key, u64>,
    pub listings: BTreeMap<u64, (u8, ItemKind, u8)>,
    pub minted_gold: u64,
    pub items_created: u64,
    pub items_consumed: u64,
    pub items_destroyed: u64,
}

impl Ledger {
    fn add(&mut self, agent: u8, item: &ItemStack) {
        *self.held.entry((agent, item.kind, item.level)).or_default() += item.quantity as u64;
    }

    fn remove(&mut self, tick: u32, agent: u8, kind: ItemKind, level: u8, n: u64) -> Result<(), AuditError> {
        let key = (agent, kind, level);
        let have = self.held.get(&key).copied().unwrap_or(0);
        if have < n {
            return Err(AuditError::PhantomItem { tick, agent, kind, level });
        }
        if have == n {
            self.held.remove(&key);
        } else {
            self.held.insert(key, have - n);
        }
        Ok(())
    }

    pub fn apply(&mut self, tick: u32, e: &Event) -> Result<(), AuditError> {
        match e {
            Event::Harvest { agent, item: Some(item), .. } => {
                self.items_created += item.quantity as u64;
                self.add(*agent, item);
            }
            Event::Loot { agent, item, gold, .. } => {
                self.minted_gold += *gold as u64;
                *self.gold.entry(*agent).or_default() += *gold as u64;
                if let Some(item) = item {
                    self.items_created += item.quantity as u64;
                    self.add(*agent, item);
                }
            }
            Event::List { listing, seller, kind, level, .. } => {
                self.remove(tick, *seller, *kind, *level, 1)?;
                self.listings.insert(*listing, (*seller, *kind, *level));
            }
            Event::Buy { listing, buyer, seller, kind, level, price } => {
                if self.listings.remove(listing).is_none() {
                    return Err(AuditError::PhantomListing { tick, listing: *listing });
                }
                let gold = self.gold.entry(*buyer).or_default();
                if *gold < *price as u64 {
                    return Err(AuditError::Overdraft { tick, agent: *buyer, price: *price, gold: *gold });
                }
                *gold -= *price as u64;
                *self.gold.entry(*seller).or_default() += *price as u64;
                self.add(*buyer, &ItemStack::single(*kind, *level));
            }
            Event::Delist { listing, .. } => {
                if self.listings.remove(listing).is_none() {
                    return Err(AuditError::PhantomListing { tick, listing: *listing });
                }
                self.items_destroyed += 1;
            }
            Event::Equip { agent, item } => {
                // Equipping only moves an item within the agent's holding.
                let have = self.held.get(&(*agent, item.kind, item.level)).copied().unwrap_or(0);
                if have < item.quantity as u64 {
                    return Err(AuditError::PhantomItem { tick, agent: *agent, kind: item.kind, level: item.level });
                }
            }
            Event::Consume { agent, kind, level } | Event::AmmoSpent { agent, kind, level } => {
                self.remove(tick, *agent, *kind, *level, 1)?;
                self.items_consumed += 1;
            }
            Event::Destroy { agent, items } => {
                for s in items {
                    self.remove(tick, *agent, s.kind, s.level, s.quantity as u64)?;
                    self.items_destroyed += s.quantity as u64;
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn total_gold(&self) -> u64 {
        self.gold.values().sum()
    }

    /// Compare with the real final state.
    pub fn check_state(&self, state: &WorldState) -> Result<(), AuditError> {
        let actual_gold: u64 = state.agents.iter().map(|a| a.gold as u64).sum();
        if actual_gold != self.minted_gold || self.total_gold() != self.minted_gold {
            return Err(AuditError::StateMismatch(format!(
                "gold held {actual_gold}, ledger {}, minted {}",
                self.total_gold(),
                self.minted_gold
            )));
        }
        for a in &state.agents {
            if self.gold.get(&a.agent_id).copied().unwrap_or(0) != a.gold as u64 {
                return Err(AuditError::StateMismatch(format!("gold of agent {}", a.agent_id)));
            }
        }
        let mut held: BTreeMap<Key, u64> = BTreeMap::new();
        for a in state.agents.iter().take(AGENTS) {
            for s in a.inventory.iter().map(|(_, s)| s).chain(a.equipment.iter()) {
                *held.entry((a.agent_id, s.kind, s.level)).or_default() += s.quantity as u64;
            }
        }
        if held != self.held {
            return Err(AuditError::StateMismatch("item holdings".into()));
        }
        let listings: BTreeMap<u64, (u8, ItemKind, u8)> =
            state.market.iter().map(|l| (l.listing_id, (l.seller, l.item.kind, l.item.level))).collect();
        if listings != self.listings {
            return Err(AuditError::StateMismatch("market listings".into()));
        }
        Ok(())
    }
}

/// Replay every event through a fresh ledger.
pub fn audit<'a>(events: impl IntoIterator<Item = (u32, &'a Event)>) -> Result<Ledger, AuditError> {
    let mut ledger = Ledger::default();
    for (t, e) in events {
        ledger.apply(t, e)?;
    }
    Ok(ledger)
}
