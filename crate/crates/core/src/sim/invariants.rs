//! Per-tick state checks used by tests and the `--check` flag of the CLI.

use std::collections::HashSet;

use crate::economy::{can_use, INVENTORY_SLOTS};
use crate::geom::Rect;
use crate::sim::agent::{AgentState, MAX_VITAL};
use crate::sim::WorldState;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub tick: u32,
    pub what: String,
}

/// Remembers the previous tick so it can check monotone and frozen properties.
#[derive(Debug, Default)]
pub struct InvariantMonitor {
    last_fog: Option<Rect>,
    dead: Vec<Option<AgentState>>,
    pub violations: Vec<Violation>,
}

impl InvariantMonitor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn check(&mut self, state: &WorldState) {
        let tick = state.tick;
        let mut found = Vec::new();
        let mut fail = |what: String| found.push(Violation { tick, what });

        for a in &state.agents {
            if a.hp > MAX_VITAL || a.food.points() > MAX_VITAL as f64 || a.water.points() > MAX_VITAL as f64 {
                fail(format!("agent {} vitals out of range", a.agent_id));
            }
            if a.inventory.len() > INVENTORY_SLOTS {
                fail(format!("agent {} carries {} stacks", a.agent_id, a.inventory.len()));
            }
            if a.alive {
                for item in a.equipment.iter() {
                    if !can_use(a, item) {
                        fail(format!("agent {} wears {:?} above its level", a.agent_id, item));
                    }
                }
            } else if a.hp != 0 {
                fail(format!("dead agent {} has hp {}", a.agent_id, a.hp));
            }
        }

        let mut seen = HashSet::new();
        let positions = state
            .agents
            .iter()
            .filter(|a| a.alive)
            .map(|a| a.pos)
            .chain(state.npcs.iter().filter(|n| n.alive).map(|n| n.pos));
        for p in positions {
            if !seen.insert(p) {
                fail(format!("two entities on {p:?}"));
            }
            if !state.map.passable(p) {
                fail(format!("entity on impassable {p:?}"));
            }
        }

        if let Some(prev) = self.last_fog {
            if !prev.contains_rect(&state.fog.rect) {
                fail(format!("safe zone grew from {prev:?} to {:?}", state.fog.rect));
            }
        }

        for l in state.market.iter() {
            if !state.agents[l.seller as usize].alive {
                fail(format!("listing {} belongs to dead agent {}", l.listing_id, l.seller));
            }
        }

        if self.dead.is_empty() {
            self.dead = vec![None; state.agents.len()];
        }
        for (i, a) in state.agents.iter().enumerate() {
            match &self.dead[i] {
                Some(frozen) if frozen != a => fail(format!("dead agent {i} changed")),
                Some(_) => {}
                None if !a.alive => self.dead[i] = Some(a.clone()),
                None => {}
            }
        }
        self.last_fog = Some(state.fog.rect);
        self.violations.extend(found);
    }
}
