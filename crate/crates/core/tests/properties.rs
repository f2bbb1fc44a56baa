mod common;

use std::collections::BTreeSet;

use lazymatch::bounds::{
    bal_bounds, max_sum_exact, normalize_solution, optimal_x0, psi_objective, psi_satisfied, psi_transform,
    validate_solution, AdversarySolution,
};
use lazymatch::matching::is_maximum;
use lazymatch::schedulers::{audit_balance_decision, balance_decide};
use lazymatch::{
    max_matching, replay, run_game, run_game_recorded, Adversary, BipartiteGraph, GameConfig, GameState,
    RandomScheduler, RoundMove, Scheduler, ScriptedBuilder,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn script(d: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::btree_set(0..d, 0..=d), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|s| s.into_iter().collect()).collect())
}

fn game() -> impl Strategy<Value = (usize, usize, Vec<Vec<usize>>, u64)> {
    (1usize..=10, 1usize..=4).prop_flat_map(|(d, a)| (Just(d), Just(a), script(d, 16), any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn engine_keeps_invariants((d, alpha, moves, seed) in game(), pick in 0usize..4) {
        let cfg = GameConfig::new(alpha, d).unwrap();
        let mut sched = common::all_schedulers(seed).swap_remove(pick);
        let mut builder = ScriptedBuilder::new(moves.clone());
        let (state, t) = run_game_recorded(&mut sched, &mut builder, cfg, moves.len()).unwrap();
        let snaps = t.snapshots.as_ref().unwrap();
        for (r, snap) in snaps.iter().enumerate() {
            prop_assert!(snap.check_invariants(state.graph(), alpha).is_ok());
            if r > 0 {
                for u in 0..r {
                    prop_assert!(snap.group(u).is_subset(snaps[r - 1].group(u)));
                }
            }
        }
        prop_assert_eq!(replay(&t).unwrap(), state.result());
    }

    #[test]
    fn rejected_moves_leave_state_untouched((d, alpha, moves, seed) in game(), extra in 0usize..3) {
        let cfg = GameConfig::new(alpha, d).unwrap();
        let mut state = GameState::new(cfg).unwrap();
        let mut sched = RandomScheduler::new(seed);
        for hood in moves {
            let mv = RoundMove::new(state.round(), hood);
            let chosen = sched.decide(&state, &mv).chosen;
            let before = state.clone();
            let mut bad = chosen.clone();
            bad.insert(d + extra);
            prop_assert!(state.apply_round(&mv, &bad).is_err());
            prop_assert_eq!(&state, &before);
            state.apply_round(&mv, &chosen).unwrap();
        }
    }

    #[test]
    fn balance_decisions_pass_audit((d, alpha, moves, seed) in game(), last in prop::collection::btree_set(0usize..10, 0..=10)) {
        let cfg = GameConfig::new(alpha, d).unwrap();
        let mut builder = ScriptedBuilder::new(moves.clone());
        let (state, _) = run_game_recorded(&mut RandomScheduler::new(seed), &mut builder, cfg, moves.len()).unwrap();
        let hood: Vec<usize> = last.into_iter().filter(|&x| x < d).collect();
        let mv = RoundMove::new(state.round(), hood);
        let decision = balance_decide(state.assignment(), &mv, alpha);
        prop_assert_eq!(audit_balance_decision(state.assignment(), &mv, alpha, &decision), Ok(()));
        let mut next = state.clone();
        prop_assert!(next.apply_round(&mv, &decision.chosen).is_ok());
    }

    #[test]
    fn matching_is_maximum_and_monotone(d in 1usize..=8, moves in script(8, 10)) {
        let mut g = BipartiteGraph::new(d);
        let mut last = 0;
        for hood in moves {
            g.push_vertex(hood.into_iter().filter(|&x| x < d).collect()).unwrap();
            let m = max_matching(&g);
            prop_assert!(m.is_valid_for(&g));
            prop_assert!(is_maximum(&g, &m));
            prop_assert!(m.size() == last || m.size() == last + 1);
            last = m.size();
        }
    }

    #[test]
    fn normalization_keeps_feasibility(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, alpha, x) = common::random_feasible(&mut rng, 80, 6);
        let y = normalize_solution(n, alpha, &x).unwrap();
        prop_assert!(validate_solution(n, alpha, &y));
        prop_assert_eq!(y[0], optimal_x0(n, alpha));
        prop_assert!(y.iter().sum::<i64>() >= x.iter().sum::<i64>());
    }

    #[test]
    fn count_transform_matches_objective(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, alpha, x) = common::random_feasible(&mut rng, 80, 6);
        let x = normalize_solution(n, alpha, &x).unwrap();
        let y = psi_transform(&x).unwrap();
        prop_assert!(psi_satisfied(n, x[0], &y));
        prop_assert_eq!(psi_objective(x[0], &y), x.iter().sum::<i64>());
    }

    #[test]
    fn adversary_holds_every_scheduler(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, alpha, x) = common::random_feasible(&mut rng, 40, 5);
        let bound = n - x.iter().sum::<i64>();
        for mut sched in common::all_schedulers(seed) {
            let mut adv = Adversary::new(AdversarySolution::new(n, alpha, x.clone()).unwrap()).unwrap();
            let cfg = GameConfig::new(alpha as usize, n as usize).unwrap();
            let (res, _) = run_game(&mut sched, &mut adv, cfg, 10 * n as usize).unwrap();
            prop_assert!(res.matched_count as i64 <= bound);
            prop_assert_eq!(res.game_size_n, n as usize);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_value_inside_lp_bracket(n in 1i64..=300, alpha in 1i64..=6) {
        let exact = n - max_sum_exact(n, alpha).unwrap().best_sum;
        let b = bal_bounds(n, alpha).unwrap();
        prop_assert!(b.lower <= exact && exact <= b.upper, "{} <= {} <= {}", b.lower, exact, b.upper);
    }
}

#[test]
fn balance_audit_sees_cheating() {
    let mut state = GameState::new(GameConfig::new(2, 3).unwrap()).unwrap();
    state.apply_round(&RoundMove::new(0, vec![0, 1, 2]), &BTreeSet::from([0, 1])).unwrap();
    let mv = RoundMove::new(1, vec![0, 1, 2]);
    let mut decision = balance_decide(state.assignment(), &mv, 2);
    assert!(audit_balance_decision(state.assignment(), &mv, 2, &decision).is_ok());
    decision.chosen.remove(&2);
    assert!(audit_balance_decision(state.assignment(), &mv, 2, &decision).is_err());
}
