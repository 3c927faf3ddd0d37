use crate::config::SimConfig;
use crate::economy::{harvest_level, ItemKind, ItemStack};
use crate::geom::Pos;
use crate::sim::agent::{AgentState, SkillKind, Vital};
use crate::sim::event::Event;
use crate::worldgen::{GameMap, TerrainKind};

/// Item and governing profession for resource tiles that yield items.
pub fn product(tile: TerrainKind) -> Option<(ItemKind, SkillKind)> {
    match tile {
        TerrainKind::Ore => Some((ItemKind::Shaving, SkillKind::Prospecting)),
        TerrainKind::Tree => Some((ItemKind::Scrap, SkillKind::Carving)),
        TerrainKind::Crystal => Some((ItemKind::Shard, SkillKind::Alchemy)),
        TerrainKind::Herb => Some((ItemKind::Ration, SkillKind::Herbalism)),
        TerrainKind::Fish => Some((ItemKind::Poultice, SkillKind::Fishing)),
        _ => None,
    }
}

/// Resource tile a profession gathers from.
pub fn resource_of(skill: SkillKind) -> Option<TerrainKind> {
    match skill {
        SkillKind::Fishing => Some(TerrainKind::Fish),
        SkillKind::Herbalism => Some(TerrainKind::Herb),
        SkillKind::Prospecting => Some(TerrainKind::Ore),
        SkillKind::Carving => Some(TerrainKind::Tree),
        SkillKind::Alchemy => Some(TerrainKind::Crystal),
        _ => None,
    }
}

/// Gather from the tile the agent stands on and from adjacent water or fish.
///
/// Forest refills food and Water refills water without yielding items.
/// Resource tiles yield one unit at the matching tool's level and one
/// profession xp. A full inventory loses the harvest and leaves the tile.
pub fn harvest(agent: &mut AgentState, map: &mut GameMap, cfg: &SimConfig) -> Vec<Event> {
    let mut events = Vec::new();
    let here = map.kind(agent.pos);
    if here == TerrainKind::Forest {
        agent.food = Vital::FULL;
        let _ = map.degrade(agent.pos, cfg.respawn_ticks);
        events.push(Event::Harvest { agent: agent.agent_id, tile: here, item: None });
    } else if product(here).is_some() {
        gather(agent, map, agent.pos, cfg, &mut events);
    }

    let neighbours = agent.pos.neighbours4();
    if agent.water < Vital::FULL && neighbours.iter().any(|&p| map.in_bounds(p) && map.kind(p) == TerrainKind::Water) {
        agent.water = Vital::FULL;
        events.push(Event::Harvest { agent: agent.agent_id, tile: TerrainKind::Water, item: None });
    }
    if let Some(&fish) = neighbours.iter().find(|&&p| map.in_bounds(p) && map.kind(p) == TerrainKind::Fish) {
        gather(agent, map, fish, cfg, &mut events);
    }
    events
}

fn gather(agent: &mut AgentState, map: &mut GameMap, at: Pos, cfg: &SimConfig, events: &mut Vec<Event>) {
    let tile = map.kind(at);
    let Some((kind, skill)) = product(tile) else { return };
    let item = ItemStack::single(kind, harvest_level(agent, skill));
    if agent.inventory.add(item).is_err() {
        events.push(Event::HarvestLost { agent: agent.agent_id, tile });
        return;
    }
    agent.gain_xp(skill, 1, cfg.xp_per_level);
    let _ = map.degrade(at, cfg.respawn_ticks);
    events.push(Event::Harvest { agent: agent.agent_id, tile, item: Some(item) });
}
