//! The tick engine.
//!
//! A tick resolves in a fixed order: communication, market sells, market
//! buys, item use, attacks, moves, harvesting, NPC actions, metabolism and
//! fog, deaths, and finally resource regrowth. Within a phase agents act in
//! ascending id order.

pub mod action;
pub mod agent;
pub mod event;
pub mod fog;
pub mod harvest;
pub mod invariants;
pub mod metabolism;
pub mod observe;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::combat::{
    damage, npc_act, npc_loot, record_defeat, AttackStyle, AttackerStats, DeathCause, DefenderStats, NpcAction, NpcState,
    SeenAgent,
};
use crate::config::{GameConfig, SimConfig};
use crate::economy::{self, list_item, resolve_purchases, BuyFailure, BuyOrder, Market, UseError, UseOutcome};
use crate::geom::{Direction, Pos};
use crate::worldgen::{self, GameMap, WorldgenError, AGENTS, TEAMS, TEAM_SIZE};

use action::{ActionKind, AgentAction, MaskReason, TeamActions, COMM_TOKENS};
use agent::{AgentState, EntityId};
use event::{Event, Survivor};
use fog::{fog_rectangle, SafeZone};
use observe::TeamObservation;

pub use observe::observe;

#[derive(Debug, Clone, Serialize)]
pub struct WorldState {
    pub tick: u32,
    pub config: SimConfig,
    pub map: GameMap,
    pub agents: Vec<AgentState>,
    pub npcs: Vec<NpcState>,
    pub market: Market,
    /// Safe zone for the tick about to be simulated.
    pub fog: SafeZone,
    /// Defeat credits per team.
    pub team_defeats: Vec<u32>,
    /// Listing ids of the market window shown in the latest observation.
    pub window: Vec<u64>,
    /// Tokens spoken in the latest tick.
    pub comms: Vec<(EntityId, u8)>,
    pub done: bool,
    #[serde(skip)]
    occupancy: Vec<Option<EntityId>>,
    #[serde(skip)]
    rng: ChaCha8Rng,
}

/// Start a match: generate the map, spawn 128 agents and the NPCs.
pub fn reset(seed: u64, cfg: &GameConfig) -> Result<(WorldState, Vec<TeamObservation>), WorldgenError> {
    let map = worldgen::generate_map(&cfg.map.clone().with_seed(seed))?;
    let plan = worldgen::spawn_positions(seed, &map)?;
    let agents: Vec<AgentState> = (0..AGENTS)
        .map(|i| AgentState::spawn(i, plan.team_slots[i / TEAM_SIZE][i % TEAM_SIZE]))
        .collect();
    let npcs = worldgen::npc_placement(seed, &map, cfg.map.npc_count)
        .into_iter()
        .enumerate()
        .filter(|(_, n)| !agents.iter().any(|a| a.pos == n.pos))
        .map(|(i, n)| NpcState {
            pos: n.pos,
            npc_type: n.npc_type,
            level: n.level,
            style: AttackStyle::ALL[(i / 3) % 3],
            hp: cfg.sim.npc_hp_per_level * n.level as u32,
            last_hitter: None,
            alive: true,
        })
        .collect();
    let mut state = WorldState {
        tick: 0,
        config: cfg.sim.clone(),
        fog: fog_rectangle(0, map.size, &cfg.sim),
        map,
        agents,
        npcs,
        market: Market::default(),
        team_defeats: vec![0; TEAMS],
        window: Vec::new(),
        comms: Vec::new(),
        done: false,
        occupancy: Vec::new(),
        rng: ChaCha8Rng::seed_from_u64(seed ^ 0x7374_6570),
    };
    state.rebuild_occupancy();
    let obs = state.observe_all();
    Ok((state, obs))
}

impl WorldState {
    fn rebuild_occupancy(&mut self) {
        let size = self.map.size;
        self.occupancy = vec![None; (size * size) as usize];
        for a in self.agents.iter().filter(|a| a.alive) {
            let i = (a.pos.row * size + a.pos.col) as usize;
            self.occupancy[i] = Some(a.id());
        }
        for (n, npc) in self.npcs.iter().enumerate().filter(|(_, n)| n.alive) {
            let i = (npc.pos.row * size + npc.pos.col) as usize;
            self.occupancy[i] = Some(EntityId::npc(n));
        }
    }

    fn cell(&self, p: Pos) -> usize {
        (p.row * self.map.size + p.col) as usize
    }

    /// The living entity on `p`, if any.
    pub fn occupant(&self, p: Pos) -> Option<EntityId> {
        if !self.map.in_bounds(p) {
            return None;
        }
        self.occupancy[self.cell(p)]
    }

    fn can_enter(&self, p: Pos) -> bool {
        self.map.passable(p) && self.occupant(p).is_none()
    }

    fn relocate(&mut self, id: EntityId, from: Pos, to: Pos) {
        let (a, b) = (self.cell(from), self.cell(to));
        self.occupancy[a] = None;
        self.occupancy[b] = Some(id);
    }

    fn vacate(&mut self, p: Pos) {
        let i = self.cell(p);
        self.occupancy[i] = None;
    }

    pub fn entity_pos(&self, id: EntityId) -> Option<Pos> {
        match (id.agent_index(), id.npc_index()) {
            (Some(i), _) => self.agents.get(i).map(|a| a.pos),
            (_, Some(n)) => self.npcs.get(n).map(|n| n.pos),
            _ => None,
        }
    }

    fn entity_alive(&self, id: EntityId) -> bool {
        match (id.agent_index(), id.npc_index()) {
            (Some(i), _) => self.agents.get(i).is_some_and(|a| a.alive),
            (_, Some(n)) => self.npcs.get(n).is_some_and(|n| n.alive),
            _ => false,
        }
    }

    pub fn teams_alive(&self) -> usize {
        (0..TEAMS)
            .filter(|t| self.agents[t * TEAM_SIZE..(t + 1) * TEAM_SIZE].iter().any(|a| a.alive))
            .count()
    }

    pub fn observe_all(&self) -> Vec<TeamObservation> {
        (0..TEAMS).map(|t| observe(self, t)).collect()
    }

    /// 16-hex-digit digest of the serialized state.
    pub fn state_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("world state serializes");
        let digest = Sha256::digest(&bytes);
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Advance one tick. `actions[team][member]`; missing entries stay put.
    /// Illegal sub-actions become no-ops recorded as `Masked` events.
    pub fn step(&mut self, actions: &[TeamActions]) -> Vec<Event> {
        if self.done {
            return Vec::new();
        }
        let stay = AgentAction::stay();
        let acts: Vec<AgentAction> = (0..AGENTS)
            .map(|i| {
                actions
                    .get(i / TEAM_SIZE)
                    .and_then(|t| t.get(i % TEAM_SIZE))
                    .copied()
                    .unwrap_or(stay)
            })
            .collect();
        let mut ev = Vec::new();
        let mut fatal: Vec<Option<DeathCause>> = vec![None; AGENTS];

        self.phase_comm(&acts, &mut ev);
        self.phase_sell(&acts, &mut ev);
        self.phase_buy(&acts, &mut ev);
        self.phase_use(&acts, &mut ev);
        self.phase_attack(&acts, &mut fatal, &mut ev);
        self.phase_move(&acts, &mut ev);
        self.phase_harvest(&mut ev);
        self.phase_npcs(&mut fatal, &mut ev);
        self.phase_metabolism(&mut fatal);
        self.phase_deaths(&fatal, &mut ev);
        self.map.tick_respawns();

        self.tick += 1;
        let next = fog_rectangle(self.tick, self.map.size, &self.config);
        if next.rect != self.fog.rect {
            ev.push(Event::FogShrink { inset: next.inset });
        }
        self.fog = next;
        self.window = self.market.window(self.config.market_window).iter().map(|l| l.listing_id).collect();
        if self.tick >= self.config.horizon || self.teams_alive() <= 1 {
            self.done = true;
            let survivors = self
                .agents
                .iter()
                .filter(|a| a.alive)
                .map(|a| Survivor { agent: a.agent_id, level_sum: a.level_sum(), equip_score: a.equipment.score() })
                .collect();
            ev.push(Event::End { survivors });
        }
        ev
    }

    fn acting(&self, i: usize) -> bool {
        self.agents[i].alive && self.agents[i].hp > 0
    }

    fn phase_comm(&mut self, acts: &[AgentAction], ev: &mut Vec<Event>) {
        self.comms.clear();
        for (i, act) in acts.iter().enumerate() {
            let Some(token) = act.comm else { continue };
            if !self.agents[i].alive {
                continue;
            }
            if token >= COMM_TOKENS {
                ev.push(masked(i, ActionKind::Comm, MaskReason::BadToken));
                continue;
            }
            self.comms.push((EntityId::agent(i), token));
            ev.push(Event::Comm { agent: i as u8, token });
        }
    }

    fn phase_sell(&mut self, acts: &[AgentAction], ev: &mut Vec<Event>) {
        for (i, act) in acts.iter().enumerate() {
            let Some(order) = act.sell else { continue };
            if !self.agents[i].alive {
                continue;
            }
            match list_item(&mut self.agents[i], order.index as usize, order.price, &mut self.market) {
                Ok(l) => ev.push(Event::List {
                    listing: l.listing_id,
                    seller: l.seller,
                    kind: l.item.kind,
                    level: l.item.level,
                    price: l.price,
                }),
                Err(economy::ListError::EmptySlot) => ev.push(masked(i, ActionKind::Sell, MaskReason::EmptySlot)),
                Err(economy::ListError::InvalidPrice) => {
                    ev.push(masked(i, ActionKind::Sell, MaskReason::InvalidPrice))
                }
            }
        }
    }

    fn phase_buy(&mut self, acts: &[AgentAction], ev: &mut Vec<Event>) {
        let orders: Vec<BuyOrder> = acts
            .iter()
            .enumerate()
            .filter(|(i, _)| self.agents[*i].alive)
            .filter_map(|(i, a)| a.buy.map(|w| BuyOrder { buyer: i as u8, window_index: w }))
            .collect();
        if orders.is_empty() {
            return;
        }
        let window = self.window.clone();
        for (order, result) in resolve_purchases(&mut self.market, &mut self.agents, &window, &orders) {
            match result {
                Ok(t) => ev.push(Event::Buy {
                    listing: t.listing.listing_id,
                    buyer: t.buyer,
                    seller: t.listing.seller,
                    kind: t.listing.item.kind,
                    level: t.listing.item.level,
                    price: t.listing.price,
                }),
                Err(f) => {
                    let reason = match f {
                        BuyFailure::BadIndex => MaskReason::BadIndex,
                        BuyFailure::ListingGone => MaskReason::ListingGone,
                        BuyFailure::OwnListing => MaskReason::OwnListing,
                        BuyFailure::InsufficientGold => MaskReason::InsufficientGold,
                        BuyFailure::InventoryFull => MaskReason::InventoryFull,
                    };
                    ev.push(masked(order.buyer as usize, ActionKind::Buy, reason));
                }
            }
        }
    }

    fn phase_use(&mut self, acts: &[AgentAction], ev: &mut Vec<Event>) {
        for (i, act) in acts.iter().enumerate() {
            let Some(index) = act.use_item else { continue };
            if !self.agents[i].alive {
                continue;
            }
            match economy::use_item(&mut self.agents[i], index as usize, &self.config) {
                Ok(UseOutcome::Equipped { item, .. }) => ev.push(Event::Equip { agent: i as u8, item }),
                Ok(UseOutcome::Consumed { item }) => {
                    ev.push(Event::Consume { agent: i as u8, kind: item.kind, level: item.level })
                }
                Err(UseError::EmptySlot) => ev.push(masked(i, ActionKind::Use, MaskReason::EmptySlot)),
                Err(UseError::LevelGate { .. }) => ev.push(masked(i, ActionKind::Use, MaskReason::LevelGate)),
            }
        }
    }

    fn phase_attack(&mut self, acts: &[AgentAction], fatal: &mut [Option<DeathCause>], ev: &mut Vec<Event>) {
        for (i, act) in acts.iter().enumerate() {
            let Some(order) = act.attack else { continue };
            if !self.agents[i].alive {
                continue;
            }
            let attacker_pos = self.agents[i].pos;
            let target = order.target;
            let reason = match self.entity_pos(target) {
                None => Some(MaskReason::UnknownTarget),
                Some(_) if !self.entity_alive(target) => Some(MaskReason::DeadTarget),
                Some(_) if target.agent_index().is_some_and(|t| t / TEAM_SIZE == i / TEAM_SIZE) => {
                    Some(MaskReason::FriendlyTarget)
                }
                Some(p) if p.chebyshev(attacker_pos) > self.config.vision_radius => Some(MaskReason::OutOfRange),
                Some(_) => None,
            };
            if let Some(reason) = reason {
                ev.push(masked(i, ActionKind::Attack, reason));
                continue;
            }
            let stats = AttackerStats::of_agent(&self.agents[i], order.style);
            let defender = match target.agent_index() {
                Some(t) => DefenderStats::of_agent(&self.agents[t]),
                None => DefenderStats::of_npc(&self.npcs[target.npc_index().unwrap_or(0)]),
            };
            let dmg = damage(&self.config, order.style, stats, defender);
            let attacker_id = EntityId::agent(i);
            match (target.agent_index(), target.npc_index()) {
                (Some(t), _) => {
                    let d = &mut self.agents[t];
                    if d.hp > 0 {
                        d.last_hitter = Some(attacker_id);
                        d.damage(dmg);
                        if d.hp == 0 {
                            fatal[t] = Some(DeathCause::Attack(attacker_id));
                        }
                    }
                }
                (_, Some(n)) => {
                    let npc = &mut self.npcs[n];
                    if npc.hp > 0 {
                        npc.last_hitter = Some(attacker_id);
                        npc.hp = npc.hp.saturating_sub(dmg);
                    }
                }
                _ => {}
            }
            ev.push(Event::Attack { by: attacker_id, target, style: order.style, dmg });
            let a = &mut self.agents[i];
            a.gain_xp(order.style.skill(), 1, self.config.xp_per_level);
            if stats.ammo_level > 0 {
                if let Some(ammo) = a.equipment.ammo.as_mut() {
                    ammo.quantity -= 1;
                    ev.push(Event::AmmoSpent { agent: i as u8, kind: ammo.kind, level: ammo.level });
                    if ammo.quantity == 0 {
                        a.equipment.ammo = None;
                    }
                }
            }
        }
    }

    fn phase_move(&mut self, acts: &[AgentAction], ev: &mut Vec<Event>) {
        for (i, act) in acts.iter().enumerate() {
            if act.mv == Direction::Stay || !self.acting(i) {
                continue;
            }
            let from = self.agents[i].pos;
            let to = from.step(act.mv);
            if !self.map.passable(to) {
                ev.push(masked(i, ActionKind::Move, MaskReason::Impassable));
            } else if self.occupant(to).is_some() {
                ev.push(Event::MoveBlocked { agent: i as u8, to });
            } else {
                self.relocate(EntityId::agent(i), from, to);
                self.agents[i].pos = to;
                ev.push(Event::Move { id: EntityId::agent(i), to });
            }
        }
    }

    fn phase_harvest(&mut self, ev: &mut Vec<Event>) {
        for i in 0..AGENTS {
            if self.acting(i) {
                ev.extend(harvest::harvest(&mut self.agents[i], &mut self.map, &self.config));
            }
        }
    }

    fn phase_npcs(&mut self, fatal: &mut [Option<DeathCause>], ev: &mut Vec<Event>) {
        let vision = self.config.npc_vision;
        for n in 0..self.npcs.len() {
            if !self.npcs[n].alive || self.npcs[n].hp == 0 {
                continue;
            }
            let pos = self.npcs[n].pos;
            let mut seen = Vec::new();
            for r in pos.row - vision..=pos.row + vision {
                for c in pos.col - vision..=pos.col + vision {
                    if let Some(i) = self.occupant(Pos::new(r, c)).and_then(|id| id.agent_index()) {
                        let a = &self.agents[i];
                        if a.hp > 0 {
                            seen.push(SeenAgent { id: a.id(), pos: a.pos, main_style: a.main_style() });
                        }
                    }
                }
            }
            let action = npc_act(&self.npcs[n], &seen, |p| self.can_enter(p), &self.config);
            let id = EntityId::npc(n);
            match action {
                NpcAction::Idle => {}
                NpcAction::Move(dir) => {
                    let to = pos.step(dir);
                    self.relocate(id, pos, to);
                    self.npcs[n].pos = to;
                    ev.push(Event::Move { id, to });
                }
                NpcAction::Attack { target, style } => {
                    let Some(t) = target.agent_index() else { continue };
                    let dmg = damage(
                        &self.config,
                        style,
                        AttackerStats::of_npc(&self.npcs[n]),
                        DefenderStats::of_agent(&self.agents[t]),
                    );
                    let d = &mut self.agents[t];
                    d.last_hitter = Some(id);
                    d.damage(dmg);
                    if d.hp == 0 {
                        fatal[t] = Some(DeathCause::Attack(id));
                    }
                    ev.push(Event::Attack { by: id, target, style, dmg });
                }
            }
        }
    }

    fn phase_metabolism(&mut self, fatal: &mut [Option<DeathCause>]) {
        let safe = self.fog.rect;
        for i in 0..AGENTS {
            if !self.acting(i) {
                continue;
            }
            let a = &mut self.agents[i];
            metabolism::metabolism(a, &self.config);
            if a.hp == 0 {
                fatal[i] = Some(DeathCause::Starvation);
                continue;
            }
            let fog = fog::fog_damage(a.pos, &safe, self.config.fog_damage);
            if fog > 0 {
                a.damage(fog);
                if a.hp == 0 {
                    fatal[i] = Some(DeathCause::Fog);
                }
            }
        }
    }

    fn phase_deaths(&mut self, fatal: &[Option<DeathCause>], ev: &mut Vec<Event>) {
        let tick = self.tick;
        for i in 0..AGENTS {
            if !self.agents[i].alive || self.agents[i].hp > 0 {
                continue;
            }
            let cause = fatal[i].unwrap_or(DeathCause::Starvation);
            let credit = record_defeat(EntityId::agent(i), cause);
            if let Some(team) = credit {
                self.team_defeats[team] += 1;
            }
            let pos = self.agents[i].pos;
            self.vacate(pos);
            let a = &mut self.agents[i];
            let level_sum = a.level_sum();
            let equip_score = a.equipment.score();
            a.alive = false;
            a.death_tick = Some(tick);
            a.level_snapshot = Some(level_sum);
            let mut items = a.inventory.clear();
            items.extend(a.equipment.clear());
            ev.push(Event::Death { agent: i as u8, cause, credit: credit.map(|t| t as u8), level_sum, equip_score });
            if !items.is_empty() {
                ev.push(Event::Destroy { agent: i as u8, items });
            }
            for l in self.market.delist_seller(i as u8) {
                ev.push(Event::Delist { listing: l.listing_id, seller: l.seller, kind: l.item.kind, level: l.item.level });
            }
        }
        for n in 0..self.npcs.len() {
            if !self.npcs[n].alive || self.npcs[n].hp > 0 {
                continue;
            }
            let pos = self.npcs[n].pos;
            self.vacate(pos);
            let npc = &mut self.npcs[n];
            npc.alive = false;
            let level = npc.level;
            let hitter = npc.last_hitter.and_then(|h| h.agent_index());
            ev.push(Event::NpcDeath { id: EntityId::npc(n), level });
            if let Some(h) = hitter.filter(|&h| self.agents[h].alive) {
                let (item, gold) = npc_loot(level, &mut self.rng);
                let a = &mut self.agents[h];
                a.gold += gold;
                let kept = a.inventory.add(item).ok().map(|_| item);
                ev.push(Event::Loot { agent: h as u8, npc: EntityId::npc(n), item: kept, gold });
            }
        }
    }
}

fn masked(agent: usize, action: ActionKind, reason: MaskReason) -> Event {
    Event::Masked { agent: agent as u8, action, reason }
}
