use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::item::ItemStack;
use crate::sim::agent::AgentState;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Listing {
    pub listing_id: u64,
    pub seller: u8,
    pub item: ItemStack,
    pub price: u32,
}

/// The global store. Listings never expire and carry no fee.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Market {
    listings: BTreeMap<u64, Listing>,
    next_id: u64,
}

impl Market {
    pub fn insert(&mut self, seller: u8, item: ItemStack, price: u32) -> Listing {
        let listing = Listing { listing_id: self.next_id, seller, item, price };
        self.next_id += 1;
        self.listings.insert(listing.listing_id, listing.clone());
        listing
    }

    pub fn get(&self, id: u64) -> Option<&Listing> {
        self.listings.get(&id)
    }

    pub fn remove(&mut self, id: u64) -> Option<Listing> {
        self.listings.remove(&id)
    }

    pub fn len(&self) -> usize {
        self.listings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.listings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Listing> {
        self.listings.values()
    }

    /// Up to `n` cheapest listings, by price then listing id.
    pub fn window(&self, n: usize) -> Vec<Listing> {
        let mut all: Vec<&Listing> = self.listings.values().collect();
        all.sort_by_key(|l| (l.price, l.listing_id));
        all.into_iter().take(n).cloned().collect()
    }

    /// Drop every listing of `seller`. The items are destroyed.
    pub fn delist_seller(&mut self, seller: u8) -> Vec<Listing> {
        let ids: Vec<u64> = self.listings.values().filter(|l| l.seller == seller).map(|l| l.listing_id).collect();
        ids.into_iter().filter_map(|id| self.listings.remove(&id)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuyOrder {
    pub buyer: u8,
    /// Index into the market window the buyer observed.
    pub window_index: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuyFailure {
    BadIndex,
    /// Sold earlier this tick to a lower agent id.
    ListingGone,
    OwnListing,
    InsufficientGold,
    InventoryFull,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub listing: Listing,
    pub buyer: u8,
}

/// Settle buy orders in ascending buyer id against the window snapshot
/// (`window` holds listing ids in window order). Gold moves buyer to seller,
/// the item moves listing to buyer.
pub fn resolve_purchases(
    market: &mut Market,
    agents: &mut [AgentState],
    window: &[u64],
    orders: &[BuyOrder],
) -> Vec<(BuyOrder, Result<Transfer, BuyFailure>)> {
    let mut sorted = orders.to_vec();
    sorted.sort_by_key(|o| o.buyer);
    sorted
        .into_iter()
        .map(|order| {
            let result = settle(market, agents, window, order);
            (order, result)
        })
        .collect()
}

fn settle(market: &mut Market, agents: &mut [AgentState], window: &[u64], order: BuyOrder) -> Result<Transfer, BuyFailure> {
    let id = *window.get(order.window_index as usize).ok_or(BuyFailure::BadIndex)?;
    let listing = market.get(id).ok_or(BuyFailure::ListingGone)?;
    if listing.seller == order.buyer {
        return Err(BuyFailure::OwnListing);
    }
    let buyer = &agents[order.buyer as usize];
    if buyer.gold < listing.price {
        return Err(BuyFailure::InsufficientGold);
    }
    if !buyer.inventory.has_room_for(&listing.item) {
        return Err(BuyFailure::InventoryFull);
    }
    let listing = market.remove(id).ok_or(BuyFailure::ListingGone)?;
    let buyer = &mut agents[order.buyer as usize];
    buyer.gold -= listing.price;
    buyer.inventory.add(listing.item).map_err(|_| BuyFailure::InventoryFull)?;
    agents[listing.seller as usize].gold += listing.price;
    Ok(Transfer { listing, buyer: order.buyer })
}
