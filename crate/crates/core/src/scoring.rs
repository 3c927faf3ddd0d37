//! Match scoring: half a point per defeat plus a survival bonus by rank.
//!
//! Survival ranking orders teams by the tick their last member died (teams
//! alive at the end share the top), then by survivors, then by average level
//! at death. Fully tied teams split the bonus entries they span evenly.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Exact, Scalar};
use crate::sim::event::Event;
use crate::sim::WorldState;
use crate::worldgen::{TEAMS, TEAM_SIZE};

/// Survival bonus by rank; sums to 32.
pub const SURVIVAL_VECTOR: [u32; TEAMS] = [10, 6, 5, 4, 3, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ScoringError {
    #[error("expected {TEAMS} teams, got {0}")]
    TeamCount(usize),
    #[error("event log has no end event")]
    Unfinished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamOutcome {
    pub team_id: u8,
    pub defeat_credits: u32,
    /// Tick of the last member's death, or horizon + 1 if anyone survived.
    pub death_tick: u32,
    pub survivors_at_end: u32,
    /// Sum of every skill level of every member, frozen at death or the end.
    /// The average level is this divided by 64.
    pub level_sum: u32,
}

impl TeamOutcome {
    pub fn avg_level(&self) -> f64 {
        self.level_sum as f64 / (TEAM_SIZE * 8) as f64
    }

    fn survival_key(&self) -> (u32, u32, u32) {
        (self.death_tick, self.survivors_at_end, self.level_sum)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamScore {
    pub team_id: u8,
    pub defeat_score: f64,
    pub survival_score: f64,
    pub total: f64,
    /// 1-based; tied totals share the better rank.
    pub rank: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchScore {
    pub teams: Vec<TeamScore>,
}

impl MatchScore {
    pub fn rank_of(&self, team: usize) -> u32 {
        self.teams[team].rank
    }
}

pub fn defeat_score<T: Scalar>(credits: u32) -> T {
    T::of(credits) / T::of(2)
}

/// Survival bonus per team, in input order.
pub fn survival_scores<T: Scalar>(outcomes: &[TeamOutcome]) -> Result<Vec<T>, ScoringError> {
    if outcomes.len() != TEAMS {
        return Err(ScoringError::TeamCount(outcomes.len()));
    }
    let mut order: Vec<usize> = (0..TEAMS).collect();
    order.sort_by(|&a, &b| outcomes[b].survival_key().cmp(&outcomes[a].survival_key()));
    let mut scores = vec![T::zero(); TEAMS];
    let mut start = 0;
    while start < TEAMS {
        let key = outcomes[order[start]].survival_key();
        let end = (start..TEAMS).find(|&i| outcomes[order[i]].survival_key() != key).unwrap_or(TEAMS);
        let span: u32 = SURVIVAL_VECTOR[start..end].iter().sum();
        let share = T::of(span) / T::of((end - start) as u32);
        for &team in &order[start..end] {
            scores[team] = share.clone();
        }
        start = end;
    }
    Ok(scores)
}

/// Totals and shared ranks, computed in `T`.
pub fn score_outcomes<T: Scalar>(outcomes: &[TeamOutcome]) -> Result<Vec<(T, T, T, u32)>, ScoringError> {
    let survival = survival_scores::<T>(outcomes)?;
    let rows: Vec<(T, T, T)> = outcomes
        .iter()
        .zip(survival)
        .map(|(o, s)| {
            let d = defeat_score::<T>(o.defeat_credits);
            let total = d.clone() + s.clone();
            (d, s, total)
        })
        .collect();
    Ok(rows
        .iter()
        .map(|(d, s, total)| {
            let better = rows.iter().filter(|r| r.2.partial_cmp(total) == Some(Ordering::Greater)).count();
            (d.clone(), s.clone(), total.clone(), better as u32 + 1)
        })
        .collect())
}

/// Score computed exactly, reported as floats.
pub fn match_score_of(outcomes: &[TeamOutcome]) -> Result<MatchScore, ScoringError> {
    let rows = score_outcomes::<Exact>(outcomes)?;
    let teams = outcomes
        .iter()
        .zip(rows)
        .map(|(o, (d, s, t, rank))| TeamScore {
            team_id: o.team_id,
            defeat_score: d.to_f64_lossy(),
            survival_score: s.to_f64_lossy(),
            total: t.to_f64_lossy(),
            rank,
        })
        .collect();
    Ok(MatchScore { teams })
}

/// Outcomes of a finished match.
pub fn outcomes_of_state(state: &WorldState) -> Vec<TeamOutcome> {
    (0..TEAMS)
        .map(|t| {
            let members = &state.agents[t * TEAM_SIZE..(t + 1) * TEAM_SIZE];
            let survivors = members.iter().filter(|a| a.alive).count() as u32;
            let death_tick = if survivors > 0 {
                state.config.horizon + 1
            } else {
                members.iter().filter_map(|a| a.death_tick).max().unwrap_or(0)
            };
            TeamOutcome {
                team_id: t as u8,
                defeat_credits: state.team_defeats[t],
                death_tick,
                survivors_at_end: survivors,
                level_sum: members.iter().map(|a| a.level_snapshot.unwrap_or_else(|| a.level_sum())).sum(),
            }
        })
        .collect()
}

pub fn match_score(state: &WorldState) -> MatchScore {
    match_score_of(&outcomes_of_state(state)).expect("a world always has sixteen teams")
}

/// Rebuild outcomes from `(tick, events)` pairs alone.
pub fn outcomes_from_events<'a>(
    ticks: impl IntoIterator<Item = (u32, &'a [Event])>,
    horizon: u32,
) -> Result<Vec<TeamOutcome>, ScoringError> {
    let mut out: Vec<TeamOutcome> = (0..TEAMS)
        .map(|t| TeamOutcome { team_id: t as u8, defeat_credits: 0, death_tick: 0, survivors_at_end: 0, level_sum: 0 })
        .collect();
    let mut ended = false;
    for (tick, events) in ticks {
        for e in events {
            match e {
                Event::Death { agent, credit, level_sum, .. } => {
                    let t = *agent as usize / TEAM_SIZE;
                    out[t].death_tick = out[t].death_tick.max(tick);
                    out[t].level_sum += level_sum;
                    if let Some(c) = credit {
                        out[*c as usize].defeat_credits += 1;
                    }
                }
                Event::End { survivors } => {
                    ended = true;
                    for s in survivors {
                        let t = s.agent as usize / TEAM_SIZE;
                        out[t].survivors_at_end += 1;
                        out[t].level_sum += s.level_sum;
                        out[t].death_tick = horizon + 1;
                    }
                }
                _ => {}
            }
        }
    }
    if !ended {
        return Err(ScoringError::Unfinished);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dead(team: u8, tick: u32) -> TeamOutcome {
        TeamOutcome { team_id: team, defeat_credits: 0, death_tick: tick, survivors_at_end: 0, level_sum: 64 }
    }

    #[test]
    fn defeat_points() {
        assert_eq!(defeat_score::<f64>(5), 2.5);
        assert_eq!(defeat_score::<f64>(0), 0.0);
        assert_eq!(defeat_score::<Exact>(16), Exact::from_integer(8));
    }

    #[test]
    fn strict_order_gets_the_vector() {
        let o: Vec<_> = (0..16).map(|t| dead(t, 100 + t as u32)).collect();
        let s = survival_scores::<f64>(&o).unwrap();
        let expected: Vec<f64> = SURVIVAL_VECTOR.iter().rev().map(|&v| v as f64).collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn two_way_tie_for_first_splits() {
        let mut o: Vec<_> = (0..16).map(|t| dead(t, t as u32)).collect();
        o[3].death_tick = 500;
        o[9].death_tick = 500;
        let s = survival_scores::<f64>(&o).unwrap();
        assert_eq!(s[3], 8.0);
        assert_eq!(s[9], 8.0);
    }

    #[test]
    fn identical_outcomes_split_evenly() {
        let o: Vec<_> = (0..16).map(|t| dead(t, 7)).collect();
        assert!(survival_scores::<f64>(&o).unwrap().iter().all(|&s| s == 2.0));
    }

    #[test]
    fn worked_example_scores_twelve_and_a_half() {
        let mut o: Vec<_> = (0..16).map(|t| dead(t, t as u32)).collect();
        o[0].defeat_credits = 5;
        o[0].death_tick = 1281;
        o[0].survivors_at_end = 2;
        let m = match_score_of(&o).unwrap();
        assert_eq!(m.teams[0].total, 12.5);
        assert_eq!(m.teams[0].rank, 1);
    }

    #[test]
    fn tied_totals_share_better_rank() {
        let o: Vec<_> = (0..16).map(|t| dead(t, 7)).collect();
        let m = match_score_of(&o).unwrap();
        assert!(m.teams.iter().all(|t| t.rank == 1));
    }

    #[test]
    fn wrong_team_count() {
        assert_eq!(survival_scores::<f64>(&[dead(0, 1)]), Err(ScoringError::TeamCount(1)));
    }
}
