use crate::config::SimConfig;
use crate::sim::agent::{AgentState, MAX_VITAL};

/// One tick of hunger and thirst. Returns the hp lost.
pub fn metabolism(agent: &mut AgentState, cfg: &SimConfig) -> u32 {
    agent.food.decay(cfg.food_decay);
    agent.water.decay(cfg.water_decay);
    let mut loss = 0;
    if agent.food.is_empty() {
        loss += cfg.starvation_damage;
    }
    if agent.water.is_empty() {
        loss += cfg.dehydration_damage;
    }
    if loss > 0 {
        agent.damage(loss);
    } else if agent.food.above(cfg.regen_threshold) && agent.water.above(cfg.regen_threshold) && agent.hp < MAX_VITAL {
        agent.heal(cfg.regen_amount);
    }
    loss
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Pos;
    use crate::sim::agent::Vital;

    #[test]
    fn double_deprivation() {
        let mut a = AgentState::spawn(0, Pos::new(1, 1));
        a.food = Vital::from_points(0);
        a.water = Vital::from_points(0);
        a.hp = 10;
        metabolism(&mut a, &SimConfig::default());
        assert_eq!(a.hp, 8);
    }

    #[test]
    fn regen_caps_at_100() {
        let mut a = AgentState::spawn(0, Pos::new(1, 1));
        a.hp = 99;
        metabolism(&mut a, &SimConfig::default());
        assert_eq!(a.hp, 100);
        metabolism(&mut a, &SimConfig::default());
        assert_eq!(a.hp, 100);
        assert_eq!(a.food.half_points(), 198);
    }

    #[test]
    fn no_regen_at_threshold() {
        let mut a = AgentState::spawn(0, Pos::new(1, 1));
        a.hp = 50;
        a.food = Vital::from_points(50);
        metabolism(&mut a, &SimConfig::default());
        assert_eq!(a.hp, 50);
    }
}
