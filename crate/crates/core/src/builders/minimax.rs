//! Exhaustive worst-case search over builder strategies at tiny sizes.
//!
//! The builder is restricted to games with `|U| = |D| = n` whose final graph
//! has a perfect matching, presenting a nonempty neighborhood each round.
//! Such a prefix can always be completed iff its presented vertices are all
//! matchable (the remaining vertices may take all of `D`), which is the
//! pruning rule. The tree has at most `(2^n − 1)^n` leaves.

use rayon::prelude::*;

use crate::error::GameError;
use crate::game::{GameConfig, GameState, GameTranscript, RoundMove};
use crate::matching::max_matching;
use crate::schedulers::Scheduler;

use super::ScriptedBuilder;

/// Largest `n` searched unless a caller raises the cap explicitly.
pub const DEFAULT_MINIMAX_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimaxOutcome {
    /// Minimum matched count over all admissible builder sequences.
    pub value: usize,
    /// A sequence attaining it, replayable through the engine.
    pub worst_case: GameTranscript,
    /// Leaves visited.
    pub leaves: u64,
}

/// Worst-case matched count of `scheduler` over all restricted builders.
pub fn minimax_value<S>(n: usize, alpha: usize, scheduler: &S) -> Result<usize, GameError>
where
    S: Scheduler + Clone + Send + Sync,
{
    minimax_search(n, alpha, scheduler, DEFAULT_MINIMAX_CAP).map(|o| o.value)
}

/// Full search with an explicit size cap.
pub fn minimax_search<S>(n: usize, alpha: usize, scheduler: &S, cap: usize) -> Result<MinimaxOutcome, GameError>
where
    S: Scheduler + Clone + Send + Sync,
{
    if n > cap {
        return Err(GameError::Unsupported(format!("minimax search is capped at n = {cap}, got n = {n}")));
    }
    if n == 0 || n >= usize::BITS as usize {
        return Err(GameError::InvalidConfig("minimax needs 1 <= n".into()));
    }
    let config = GameConfig::new(alpha, n)?;
    let root = GameState::new(config)?;
    let masks: Vec<u32> = (1..(1u32 << n)).collect();

    // Fan out over the first move; ties resolve to the lowest mask.
    let branches: Vec<(Node, u64)> = masks
        .par_iter()
        .map(|&mask| {
            let mut sched = scheduler.clone();
            let mut state = root.clone();
            let mut leaves = 0;
            let node = step(&mut state, &mut sched, mask, n, &mut leaves)
                .map(|mut node| {
                    node.path.insert(0, mask);
                    node
                });
            (node, leaves)
        })
        .filter_map(|(node, leaves)| node.map(|node| (node, leaves)))
        .collect();
    let leaves: u64 = branches.iter().map(|(_, l)| l).sum();
    let best = branches
        .into_iter()
        .map(|(node, _)| node)
        .min_by_key(|node| node.value)
        .expect("the identity neighborhoods are always admissible");

    let worst_case = replay_path(config, scheduler.clone(), &best.path)?;
    Ok(MinimaxOutcome { value: best.value, worst_case, leaves })
}

/// A builder that replays the worst case found against `scheduler`.
pub fn minimax_builder<S>(n: usize, alpha: usize, scheduler: &S) -> Result<ScriptedBuilder, GameError>
where
    S: Scheduler + Clone + Send + Sync,
{
    let outcome = minimax_search(n, alpha, scheduler, DEFAULT_MINIMAX_CAP)?;
    let script = outcome.worst_case.moves.into_iter().map(|m| m.neighbors).collect();
    Ok(ScriptedBuilder::labeled("minimax", script))
}

struct Node {
    value: usize,
    path: Vec<u32>,
}

fn neighbors_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|d| mask >> d & 1 == 1).collect()
}

/// Plays `mask` as the next move, then searches the rest. `None` if the
/// move makes a perfect matching unreachable.
fn step<S: Scheduler + Clone>(
    state: &mut GameState,
    sched: &mut S,
    mask: u32,
    n: usize,
    leaves: &mut u64,
) -> Option<Node> {
    let mv = RoundMove::new(state.round(), neighbors_of(mask, n));
    let mut graph = state.graph().clone();
    graph.push_vertex(mv.neighbors.clone()).expect("in range");
    if max_matching(&graph).size() < graph.u_count() {
        return None;
    }
    let decision = sched.decide(state, &mv);
    state
        .apply_round(&mv, &decision.chosen)
        .expect("scheduler under search must obey the rules");
    if state.round() == n {
        *leaves += 1;
        return Some(Node { value: state.matched_count(), path: Vec::new() });
    }
    let mut best: Option<Node> = None;
    for next in 1..(1u32 << n) {
        let mut child_state = state.clone();
        let mut child_sched = sched.clone();
        if let Some(mut node) = step(&mut child_state, &mut child_sched, next, n, leaves) {
            if best.as_ref().is_none_or(|b| node.value < b.value) {
                node.path.insert(0, next);
                best = Some(node);
            }
        }
    }
    best
}

fn replay_path<S: Scheduler>(config: GameConfig, mut sched: S, path: &[u32]) -> Result<GameTranscript, GameError> {
    let n = config.d_count;
    let mut state = GameState::new(config)?;
    let mut t = GameTranscript::new(config);
    for &mask in path {
        let mv = RoundMove::new(state.round(), neighbors_of(mask, n));
        let decision = sched.decide(&state, &mv);
        state.apply_round(&mv, &decision.chosen)?;
        t.moves.push(mv);
        t.decisions.push(decision.chosen.into_iter().collect());
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::replay;
    use crate::matching::has_perfect_matching;
    use crate::schedulers::{Balance, Greedy};

    #[test]
    fn greedy_two_vertices() {
        let o = minimax_search(2, 1, &Greedy, 4).unwrap();
        assert_eq!(o.value, 1);
        let r = replay(&o.worst_case).unwrap();
        assert_eq!((r.matched_count, r.game_size_n), (1, 2));
    }

    #[test]
    fn balance_two_vertices_with_two_servers() {
        assert_eq!(minimax_value(2, 2, &Balance).unwrap(), 2);
    }

    #[test]
    fn single_vertex() {
        assert_eq!(minimax_value(1, 1, &Balance).unwrap(), 1);
    }

    #[test]
    fn worst_case_graph_is_perfectly_matchable() {
        let o = minimax_search(3, 2, &Balance, 4).unwrap();
        let state = crate::game::replay_state(&o.worst_case).unwrap();
        assert!(has_perfect_matching(state.graph()).unwrap());
        assert_eq!(state.matched_count(), o.value);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(minimax_search(5, 2, &Balance, 4), Err(GameError::Unsupported(_))));
        assert!(minimax_search(0, 2, &Balance, 4).is_err());
    }
}
