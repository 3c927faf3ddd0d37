use arena_core::scoring::{match_score_of, score_outcomes, survival_scores, SURVIVAL_VECTOR};
use arena_core::worldgen::TEAMS;
use arena_core::{Exact, TeamOutcome};
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Survival bonus by direct definition: a team strictly behind `g` others and
/// tied with `e` teams (itself included) gets the mean of entries g..g+e.
fn oracle(outcomes: &[TeamOutcome]) -> Vec<(Exact, u32)> {
    let key = |o: &TeamOutcome| (o.death_tick, o.survivors_at_end, o.level_sum);
    let totals: Vec<Exact> = outcomes
        .iter()
        .map(|o| {
            let g = outcomes.iter().filter(|p| key(p) > key(o)).count();
            let e = outcomes.iter().filter(|p| key(p) == key(o)).count();
            let span: i64 = SURVIVAL_VECTOR[g..g + e].iter().map(|&v| v as i64).sum();
            Exact::new(span, e as i64) + Exact::new(o.defeat_credits as i64, 2)
        })
        .collect();
    totals
        .iter()
        .map(|t| (*t, 1 + totals.iter().filter(|u| *u > t).count() as u32))
        .collect()
}

fn outcome(team: u8, credits: u32, death_tick: u32, survivors: u32, level_sum: u32) -> TeamOutcome {
    TeamOutcome { team_id: team, defeat_credits: credits, death_tick, survivors_at_end: survivors, level_sum }
}

fn outcomes_strategy() -> impl Strategy<Value = Vec<TeamOutcome>> {
    // Narrow ranges so ties on every key component are common.
    prop::collection::vec((0u32..12, 0u32..6, 0u32..3, 0u32..4), TEAMS).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (credits, death, survivors, level))| {
                let alive = death == 5;
                outcome(
                    i as u8,
                    credits,
                    if alive { 1281 } else { 600 + death * 100 },
                    if alive { survivors + 1 } else { 0 },
                    64 + level,
                )
            })
            .collect()
    })
}

#[test]
fn five_defeats_and_longest_survival_score_twelve_and_a_half() {
    let mut outcomes: Vec<TeamOutcome> = (0..TEAMS as u8).map(|t| outcome(t, 0, 500 + t as u32, 0, 64)).collect();
    outcomes[3] = outcome(3, 5, 1281, 2, 80);
    let score = match_score_of(&outcomes).unwrap();
    assert_eq!(score.teams[3].total, 12.5);
    assert_eq!(score.teams[3].rank, 1);
    let exact = score_outcomes::<Exact>(&outcomes).unwrap();
    assert_eq!(exact[3].2, Exact::new(25, 2));
}

#[test]
fn all_tied_teams_split_two_points_each() {
    let outcomes: Vec<TeamOutcome> = (0..TEAMS as u8).map(|t| outcome(t, 0, 1281, 8, 64)).collect();
    let s = survival_scores::<Exact>(&outcomes).unwrap();
    assert!(s.iter().all(|v| *v == Exact::from_integer(2)));
    let score = match_score_of(&outcomes).unwrap();
    assert!(score.teams.iter().all(|t| t.rank == 1));
}

#[test]
fn wrong_team_count_is_rejected() {
    let outcomes: Vec<TeamOutcome> = (0..3).map(|t| outcome(t, 0, 10, 0, 64)).collect();
    assert!(match_score_of(&outcomes).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scores_match_the_brute_force_oracle(outcomes in outcomes_strategy()) {
        let survival = survival_scores::<Exact>(&outcomes).unwrap();
        prop_assert_eq!(survival.iter().sum::<Exact>(), Exact::from_integer(32));

        let expected = oracle(&outcomes);
        let exact = score_outcomes::<Exact>(&outcomes).unwrap();
        let reported = match_score_of(&outcomes).unwrap();
        for i in 0..TEAMS {
            prop_assert_eq!(exact[i].2, expected[i].0);
            prop_assert_eq!(exact[i].3, expected[i].1);
            prop_assert_eq!(reported.teams[i].total, expected[i].0.to_f64().unwrap());
            prop_assert_eq!(reported.teams[i].rank, expected[i].1);
        }
    }

    #[test]
    fn scoring_ignores_input_order(outcomes in outcomes_strategy(), rot in 0usize..TEAMS) {
        let mut rotated = outcomes.clone();
        rotated.rotate_left(rot);
        let a = match_score_of(&outcomes).unwrap();
        let b = match_score_of(&rotated).unwrap();
        for t in &a.teams {
            let u = b.teams.iter().find(|u| u.team_id == t.team_id).unwrap();
            prop_assert_eq!(t, u);
        }
    }
}
