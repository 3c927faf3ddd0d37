use serde::{Deserialize, Serialize};

use crate::combat::NpcType;
use crate::economy::{can_use, EquipSlot, ItemCategory, ItemKind, ItemStack};
use crate::geom::{Direction, Pos, Rect};
use crate::policies::nav::{clamp_into, shrink, TeamContext};
use crate::policies::Policy;
use crate::sim::action::{AgentAction, AttackOrder, SellOrder, TeamActions};
use crate::sim::agent::{AgentState, SkillKind};
use crate::sim::harvest::resource_of;
use crate::sim::observe::{EntityKind, EntityView, TeamObservation};
use crate::worldgen::{TerrainKind, TEAM_SIZE};

/// Behaviour families of the built-in teams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    /// One specialist per skill.
    Mixture,
    /// Attacks everything in sight.
    Combat,
    /// Combat plus full use of the market.
    Reckless,
    /// Reckless with focus fire and regrouping.
    Ruthless,
    /// Forages at the edge of the safe zone and only picks easy fights.
    Coward,
}

impl Style {
    pub const ALL: [Style; 5] = [Style::Mixture, Style::Combat, Style::Reckless, Style::Ruthless, Style::Coward];

    pub fn name(self) -> &'static str {
        match self {
            Style::Mixture => "mixture",
            Style::Combat => "combat",
            Style::Reckless => "reckless",
            Style::Ruthless => "ruthless",
            Style::Coward => "coward",
        }
    }

    pub fn parse(s: &str) -> Option<Style> {
        Style::ALL.into_iter().find(|st| st.name() == s)
    }

    fn sells(self) -> bool {
        matches!(self, Style::Mixture | Style::Reckless | Style::Ruthless)
    }

    fn buys(self) -> bool {
        matches!(self, Style::Reckless | Style::Ruthless)
    }
}

const HUNGRY: f64 = 50.0;
const EAT_BELOW: f64 = 40.0;
const HEAL_BELOW: u32 = 60;
const FOG_MARGIN: i32 = 2;
const REGROUP_RADIUS: i32 = 6;
const KEEP_CONSUMABLES: u32 = 3;

#[derive(Debug, Clone)]
pub struct Scripted {
    style: Style,
}

impl Scripted {
    pub fn new(style: Style) -> Self {
        Scripted { style }
    }
}

impl Policy for Scripted {
    fn name(&self) -> &str {
        self.style.name()
    }

    fn act(&mut self, obs: &TeamObservation) -> TeamActions {
        let mut ctx = TeamContext::new(obs);
        let focus = (self.style == Style::Ruthless).then(|| focus_target(obs)).flatten();
        (0..TEAM_SIZE.min(obs.members.len()))
            .map(|m| {
                if obs.members[m].agent.alive {
                    decide(&mut ctx, m, self.style, focus.as_ref())
                } else {
                    AgentAction::stay()
                }
            })
            .collect()
    }
}

/// The skill member `m` of a mixture team specializes in.
pub fn specialty(m: usize) -> SkillKind {
    SkillKind::ALL[m % SkillKind::ALL.len()]
}

fn decide(ctx: &mut TeamContext, m: usize, style: Style, focus: Option<&EntityView>) -> AgentAction {
    let obs = ctx.obs;
    let me = &obs.members[m].agent;
    let comfy = shrink(&obs.fog, FOG_MARGIN);
    let mut act = AgentAction::stay();

    act.use_item = choose_use(me, style, m);
    if style.sells() {
        act.sell = choose_sell(me, style, m, act.use_item);
    }
    if style.buys() {
        act.buy = choose_buy(ctx, me);
    }

    let target = match style {
        Style::Mixture => specialty(m).combat_style().and_then(|_| weakest_npc(obs, me.pos)),
        Style::Combat | Style::Reckless => nearest_enemy(obs, me.pos),
        Style::Ruthless => focus.cloned(),
        Style::Coward => nearest_weaker(obs, me),
    };
    let in_range = target.as_ref().filter(|t| t.pos.chebyshev(me.pos) <= obs.vision_radius);
    if let Some(t) = in_range {
        let style_used = match (style, specialty(m).combat_style()) {
            (Style::Mixture, Some(s)) => s,
            _ => t.main_style.counter(),
        };
        act.attack = Some(AttackOrder { target: t.id, style: style_used });
    }

    act.mv = if !comfy.contains(me.pos) {
        ctx.toward(m, me.pos, clamp_into(&comfy, me.pos))
    } else if let Some(dir) = forage(ctx, m, me, &comfy) {
        dir
    } else {
        match style {
            Style::Mixture => match specialty(m).combat_style() {
                Some(_) => chase(ctx, m, me.pos, target.as_ref(), in_range.is_some(), &comfy),
                None => gather(ctx, m, me, &comfy),
            },
            Style::Combat | Style::Reckless => match &target {
                Some(t) if in_range.is_none() => ctx.toward(m, me.pos, clamp_into(&comfy, t.pos)),
                Some(_) => ctx.hold(me.pos),
                None => ctx.toward(m, me.pos, center(obs)),
            },
            Style::Ruthless => {
                let centroid = team_centroid(obs);
                if me.pos.chebyshev(centroid) > REGROUP_RADIUS {
                    ctx.toward(m, me.pos, clamp_into(&comfy, centroid))
                } else {
                    match &target {
                        Some(t) if in_range.is_none() => ctx.toward(m, me.pos, clamp_into(&comfy, t.pos)),
                        Some(_) => ctx.hold(me.pos),
                        None => ctx.toward(m, me.pos, center(obs)),
                    }
                }
            }
            Style::Coward => match threat(obs, me) {
                Some(t) => ctx.away(m, me.pos, t),
                None => ctx.toward(m, me.pos, edge_point(&comfy, me.pos)),
            },
        }
    };
    act
}

fn center(obs: &TeamObservation) -> Pos {
    Pos::new(obs.map_size / 2, obs.map_size / 2)
}

/// Waypoint for an agent with nothing better to do; changes every 32 ticks.
fn wander(obs: &TeamObservation, me: &AgentState, comfy: &Rect) -> Pos {
    let mut x = (me.agent_id as u64) << 32 | (obs.tick / 32) as u64;
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    let r = comfy.min.row + (x % comfy.height() as u64) as i32;
    let c = comfy.min.col + ((x >> 32) % comfy.width() as u64) as i32;
    Pos::new(r, c)
}

fn forage(ctx: &mut TeamContext, m: usize, me: &AgentState, comfy: &Rect) -> Option<Direction> {
    let food = me.food.points();
    let water = me.water.points();
    if food >= HUNGRY && water >= HUNGRY {
        return None;
    }
    let kind = if water <= food { TerrainKind::Water } else { TerrainKind::Forest };
    let goal = ctx.nearest(kind, me.pos, comfy)?;
    if kind == TerrainKind::Water && me.pos.manhattan(goal) == 1 {
        return Some(ctx.hold(me.pos));
    }
    Some(ctx.toward(m, me.pos, goal))
}

fn gather(ctx: &mut TeamContext, m: usize, me: &AgentState, comfy: &Rect) -> Direction {
    let Some(kind) = resource_of(specialty(m)) else {
        return ctx.toward(m, me.pos, wander(ctx.obs, me, comfy));
    };
    match ctx.nearest(kind, me.pos, comfy) {
        Some(goal) if !kind.passable() && me.pos.manhattan(goal) == 1 => ctx.hold(me.pos),
        Some(goal) => ctx.toward(m, me.pos, goal),
        None => ctx.toward(m, me.pos, wander(ctx.obs, me, comfy)),
    }
}

fn chase(ctx: &mut TeamContext, m: usize, from: Pos, target: Option<&EntityView>, in_range: bool, comfy: &Rect) -> Direction {
    match target {
        Some(t) if !in_range || from.chebyshev(t.pos) > 3 => ctx.toward(m, from, clamp_into(comfy, t.pos)),
        Some(_) => ctx.hold(from),
        None => {
            let me = &ctx.obs.members[m].agent;
            ctx.toward(m, from, wander(ctx.obs, me, comfy))
        }
    }
}

fn weakest_npc(obs: &TeamObservation, from: Pos) -> Option<EntityView> {
    obs.entities
        .iter()
        .filter(|e| matches!(e.kind, EntityKind::Npc { .. }))
        .min_by_key(|e| (e.combat_levels[0], e.pos.chebyshev(from), e.id))
        .cloned()
}

/// Nearest enemy, agents before NPCs.
fn nearest_enemy(obs: &TeamObservation, from: Pos) -> Option<EntityView> {
    obs.entities.iter().min_by_key(|e| (!e.is_agent(), e.pos.chebyshev(from), e.id)).cloned()
}

/// Comparing sums is the same as comparing averages of three levels.
fn combat_sum(levels: [u8; 3]) -> u32 {
    levels.iter().map(|&l| l as u32).sum()
}

fn own_levels(me: &AgentState) -> [u8; 3] {
    [me.level(SkillKind::Melee), me.level(SkillKind::Range), me.level(SkillKind::Mage)]
}

/// Nearest enemy with a strictly lower average combat level.
fn nearest_weaker(obs: &TeamObservation, me: &AgentState) -> Option<EntityView> {
    let mine = combat_sum(own_levels(me));
    obs.entities
        .iter()
        .filter(|e| e.combat_level_sum() < mine)
        .min_by_key(|e| (e.pos.chebyshev(me.pos), e.id))
        .cloned()
}

/// A nearby agent or hostile NPC that is not weaker.
fn threat(obs: &TeamObservation, me: &AgentState) -> Option<Pos> {
    let mine = combat_sum(own_levels(me));
    obs.entities
        .iter()
        .filter(|e| e.pos.chebyshev(me.pos) <= 3)
        .filter(|e| e.combat_level_sum() >= mine)
        .filter(|e| !matches!(e.kind, EntityKind::Npc { npc_type: NpcType::Passive }))
        .min_by_key(|e| (e.pos.chebyshev(me.pos), e.id))
        .map(|e| e.pos)
}

fn edge_point(comfy: &Rect, p: Pos) -> Pos {
    let options = [
        Pos::new(comfy.min.row, p.col),
        Pos::new(comfy.max.row, p.col),
        Pos::new(p.row, comfy.min.col),
        Pos::new(p.row, comfy.max.col),
    ];
    let best = options.into_iter().min_by_key(|q| (q.chebyshev(p), *q)).unwrap_or(p);
    clamp_into(comfy, best)
}

fn team_centroid(obs: &TeamObservation) -> Pos {
    let alive: Vec<Pos> = obs.members.iter().filter(|m| m.agent.alive).map(|m| m.agent.pos).collect();
    let n = alive.len().max(1) as i32;
    let (r, c) = alive.iter().fold((0, 0), |(r, c), p| (r + p.row, c + p.col));
    Pos::new(r / n, c / n)
}

/// The enemy nearest the team centroid, agents before NPCs.
fn focus_target(obs: &TeamObservation) -> Option<EntityView> {
    nearest_enemy(obs, team_centroid(obs))
}

/// Whether the agent would wear `item` over what it has in that slot.
fn wants(me: &AgentState, style: Style, m: usize, item: &ItemStack) -> bool {
    let Some(slot) = item.kind.slot() else { return false };
    let matches_role = match item.kind.category() {
        ItemCategory::Weapon | ItemCategory::Ammunition => {
            let preferred = match (style, specialty(m).combat_style()) {
                (Style::Mixture, Some(s)) => Some(s),
                (Style::Mixture, None) => None,
                _ => Some(me.main_style()),
            };
            preferred.is_some() && item.kind.style() == preferred
        }
        ItemCategory::Tool => style == Style::Mixture && item.kind.profession() == Some(specialty(m)),
        ItemCategory::Armor => true,
        ItemCategory::Consumable => false,
    };
    let current = me.equipment.slot(slot).map_or(0, |s| s.level);
    let better = item.level > current || (slot == EquipSlot::Ammo && me.equipment.ammo.is_none());
    matches_role && better && can_use(me, item)
}

fn choose_use(me: &AgentState, style: Style, m: usize) -> Option<u8> {
    let find = |kind: ItemKind| me.inventory.iter().find(|(_, s)| s.kind == kind).map(|(i, _)| i as u8);
    if me.hp <= HEAL_BELOW {
        if let Some(i) = find(ItemKind::Poultice) {
            return Some(i);
        }
    }
    if me.food.points() < EAT_BELOW || me.water.points() < EAT_BELOW {
        if let Some(i) = find(ItemKind::Ration) {
            return Some(i);
        }
    }
    me.inventory.iter().find(|(_, s)| wants(me, style, m, s)).map(|(i, _)| i as u8)
}

fn choose_sell(me: &AgentState, style: Style, m: usize, using: Option<u8>) -> Option<SellOrder> {
    let surplus = |s: &ItemStack| match s.kind.category() {
        ItemCategory::Consumable => s.quantity > KEEP_CONSUMABLES,
        _ => !wants(me, style, m, s),
    };
    me.inventory
        .iter()
        .filter(|(i, _)| Some(*i as u8) != using)
        .find(|(_, s)| surplus(s))
        .map(|(i, s)| SellOrder { index: i as u8, price: s.level as u32 })
}

fn choose_buy(ctx: &mut TeamContext, me: &AgentState) -> Option<u16> {
    let obs = ctx.obs;
    let upgrade = |item: &ItemStack| {
        let Some(slot) = item.kind.slot() else { return false };
        let fits_style = item.kind.style().is_none_or(|s| s == me.main_style());
        let not_tool = item.kind.category() != ItemCategory::Tool;
        let current = me.equipment.slot(slot).map_or(0, |s| s.level);
        let held = me.inventory.iter().filter(|(_, s)| s.kind.slot() == Some(slot)).map(|(_, s)| s.level).max().unwrap_or(0);
        fits_style && not_tool && item.level > current.max(held) && can_use(me, item)
    };
    let pick = obs.market.iter().enumerate().find(|(_, l)| {
        l.seller != me.agent_id
            && l.price <= me.gold
            && !ctx.claimed.contains(&l.listing_id)
            && me.inventory.has_room_for(&l.item)
            && upgrade(&l.item)
    });
    let (i, l) = pick?;
    ctx.claimed.insert(l.listing_id);
    Some(i as u16)
}
