//! Scheduler strategies and the availability predicates of α-BALANCE.
//!
//! For the vertex `u` being presented:
//! * `d` is *available* if `d ∈ N(u)` and no earlier group equals `{d}`;
//! * `d` is *strongly available* if it is available and belongs to no group;
//! * an earlier vertex `e` is *ready* if `m(e)` holds an available element.
//!
//! α-BALANCE first takes up to α strongly available servers, then keeps
//! stealing one available server from the largest ready group while that
//! group is at least two larger than `m(u)`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GameError;
use crate::game::{AssignmentState, GameState, RoundMove};

/// One server moved from `donor`'s group into the new vertex's group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transfer {
    pub donor: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchedulerDecision {
    /// The group `m(u)` for the presented vertex.
    pub chosen: BTreeSet<usize>,
    /// Steals performed by the balancing loop, in order.
    pub transfers: Vec<Transfer>,
}

pub trait Scheduler {
    fn name(&self) -> String;

    /// Picks `m(u)` for the vertex described by `mv`, given the position
    /// before the round.
    fn decide(&mut self, state: &GameState, mv: &RoundMove) -> SchedulerDecision;
}

impl<S: Scheduler + ?Sized> Scheduler for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn decide(&mut self, state: &GameState, mv: &RoundMove) -> SchedulerDecision {
        (**self).decide(state, mv)
    }
}

/// `d ∈ N(u)` and no group other than `m(u)` equals `{d}`.
pub fn available(state: &AssignmentState, d: usize, mv: &RoundMove) -> bool {
    if !mv.contains(d) {
        return false;
    }
    match state.owner(d) {
        Some(x) if x != mv.u => state.group_len(x) != 1,
        _ => true,
    }
}

pub fn strongly_available(state: &AssignmentState, d: usize, mv: &RoundMove) -> bool {
    available(state, d, mv) && state.is_unowned(d)
}

/// `m(e)` contains an element available for the presented vertex.
pub fn ready(state: &AssignmentState, e: usize, mv: &RoundMove) -> bool {
    e != mv.u && state.group(e).iter().any(|&d| available(state, d, mv))
}

/// α-BALANCE for the vertex `mv.u`, computed against `state` as it stands
/// before the round.
pub fn balance_decide(state: &AssignmentState, mv: &RoundMove, alpha: usize) -> SchedulerDecision {
    let mut work = state.clone();
    let u = work.open_group();
    debug_assert_eq!(u, mv.u);

    // Lowest indices first.
    let picks: Vec<usize> = mv
        .neighbors
        .iter()
        .copied()
        .filter(|&d| strongly_available(&work, d, mv))
        .take(alpha)
        .collect();
    for &d in &picks {
        work.move_to(d, u);
    }

    let mut transfers = Vec::new();
    while let Some(donor) = pick_donor(&work, mv) {
        let d = work
            .group(donor)
            .iter()
            .copied()
            .find(|&d| available(&work, d, mv))
            .expect("donor is ready");
        work.move_to(d, u);
        transfers.push(Transfer { donor, d });
    }

    SchedulerDecision { chosen: work.group(u).clone(), transfers }
}

// Ready e with |m(u)| + 2 <= |m(e)|, largest group first, then lowest index.
fn pick_donor(work: &AssignmentState, mv: &RoundMove) -> Option<usize> {
    let own = work.group_len(mv.u);
    let mut best: Option<(usize, usize)> = None;
    for e in 0..mv.u {
        let size = work.group_len(e);
        if size < own + 2 || best.is_some_and(|(_, s)| s >= size) {
            continue;
        }
        if ready(work, e, mv) {
            best = Some((e, size));
        }
    }
    best.map(|(e, _)| e)
}

/// Classical greedy: the lowest unowned neighbor, or nothing.
pub fn greedy_decide(state: &AssignmentState, mv: &RoundMove) -> SchedulerDecision {
    let chosen = mv
        .neighbors
        .iter()
        .copied()
        .find(|&d| strongly_available(state, d, mv))
        .into_iter()
        .collect();
    SchedulerDecision { chosen, transfers: Vec::new() }
}

/// Re-executes a BALANCE decision step by step and checks it: the initial
/// picks are strongly available, every transfer met the size-gap condition
/// with a maximal ready donor, the loop exited only when no ready donor was
/// left, and `|chosen| <= alpha`.
pub fn audit_balance_decision(
    before: &AssignmentState,
    mv: &RoundMove,
    alpha: usize,
    decision: &SchedulerDecision,
) -> Result<(), String> {
    let transferred: BTreeSet<usize> = decision.transfers.iter().map(|t| t.d).collect();
    if transferred.len() != decision.transfers.len() {
        return Err("an element was transferred twice".into());
    }
    if decision.chosen.len() > alpha {
        return Err(format!("|chosen| = {} exceeds alpha = {alpha}", decision.chosen.len()));
    }
    let picks: Vec<usize> = decision.chosen.difference(&transferred).copied().collect();
    if !transferred.is_subset(&decision.chosen) {
        return Err("a transferred element is missing from chosen".into());
    }
    let mut work = before.clone();
    let u = work.open_group();
    let strong = mv.neighbors.iter().filter(|&&d| strongly_available(&work, d, mv)).count();
    if picks.len() != alpha.min(strong) {
        return Err(format!("{} initial picks, expected min(alpha, {strong})", picks.len()));
    }
    for &d in &picks {
        if !strongly_available(&work, d, mv) {
            return Err(format!("initial pick d{d} was not strongly available"));
        }
        work.move_to(d, u);
    }
    let any_available_at_start = mv.neighbors.iter().any(|&d| available(before, d, mv));
    for t in &decision.transfers {
        if t.donor >= u || t.d >= work.d_count() || work.owner(t.d) != Some(t.donor) {
            return Err(format!("d{} is not in m(u{})", t.d, t.donor));
        }
        let own = work.group_len(u);
        let donor_size = work.group_len(t.donor);
        if own + 2 > donor_size {
            return Err(format!("transfer from u{} without size gap ({own} vs {donor_size})", t.donor));
        }
        if !available(&work, t.d, mv) {
            return Err(format!("transferred d{} was not available", t.d));
        }
        let max_ready = (0..u)
            .filter(|&e| ready(&work, e, mv))
            .map(|e| work.group_len(e))
            .max()
            .unwrap_or(0);
        if donor_size < max_ready {
            return Err(format!("donor u{} is not a largest ready group", t.donor));
        }
        work.move_to(t.d, u);
    }
    let own = work.group_len(u);
    if let Some(e) = (0..u).find(|&e| ready(&work, e, mv) && own + 2 <= work.group_len(e)) {
        return Err(format!("loop exited while u{e} still qualified as donor"));
    }
    if any_available_at_start && decision.chosen.is_empty() {
        return Err("left m(u) empty although an element was available".into());
    }
    Ok(())
}

/// α-BALANCE with the canonical tie-breaks (lowest index first).
#[derive(Debug, Clone, Copy, Default)]
pub struct Balance;

impl Scheduler for Balance {
    fn name(&self) -> String {
        "balance".into()
    }

    fn decide(&mut self, state: &GameState, mv: &RoundMove) -> SchedulerDecision {
        balance_decide(state.assignment(), mv, state.alpha())
    }
}

/// Greedy one-server assignment, whatever α is.
#[derive(Debug, Clone, Copy, Default)]
pub struct Greedy;

impl Scheduler for Greedy {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn decide(&mut self, state: &GameState, mv: &RoundMove) -> SchedulerDecision {
        greedy_decide(state.assignment(), mv)
    }
}

/// Never assigns anything.
#[derive(Debug, Clone, Copy, Default)]
pub struct Noop;

impl Scheduler for Noop {
    fn name(&self) -> String {
        "noop".into()
    }

    fn decide(&mut self, _state: &GameState, _mv: &RoundMove) -> SchedulerDecision {
        SchedulerDecision::default()
    }
}

/// Takes a uniformly random subset of `N(u)` with a random size in
/// `0..=min(α, |N(u)|)`. Obeys the game rules, nothing more; stealing
/// someone's last server is allowed.
#[derive(Debug, Clone)]
pub struct RandomScheduler {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomScheduler {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Scheduler for RandomScheduler {
    fn name(&self) -> String {
        format!("random:seed={}", self.seed)
    }

    fn decide(&mut self, state: &GameState, mv: &RoundMove) -> SchedulerDecision {
        let cap = state.alpha().min(mv.neighbors.len());
        let size = self.rng.gen_range(0..=cap);
        let chosen = mv.neighbors.choose_multiple(&mut self.rng, size).copied().collect();
        SchedulerDecision { chosen, transfers: Vec::new() }
    }
}

/// A scheduler chosen by name at run time.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum NamedScheduler {
    Balance(Balance),
    Greedy(Greedy),
    Noop(Noop),
    Random(RandomScheduler),
}

impl Scheduler for NamedScheduler {
    fn name(&self) -> String {
        match self {
            Self::Balance(s) => s.name(),
            Self::Greedy(s) => s.name(),
            Self::Noop(s) => s.name(),
            Self::Random(s) => s.name(),
        }
    }

    fn decide(&mut self, state: &GameState, mv: &RoundMove) -> SchedulerDecision {
        match self {
            Self::Balance(s) => s.decide(state, mv),
            Self::Greedy(s) => s.decide(state, mv),
            Self::Noop(s) => s.decide(state, mv),
            Self::Random(s) => s.decide(state, mv),
        }
    }
}

/// Parses `balance`, `greedy`, `noop`, `random` or `random:seed=S`.
/// A bare `random` uses `default_seed`.
pub fn scheduler_by_name(spec: &str, default_seed: u64) -> Result<NamedScheduler, GameError> {
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    match name.trim() {
        "balance" => Ok(NamedScheduler::Balance(Balance)),
        "greedy" => Ok(NamedScheduler::Greedy(Greedy)),
        "noop" => Ok(NamedScheduler::Noop(Noop)),
        "random" => {
            let mut seed = default_seed;
            for kv in params.split(',').filter(|s| !s.trim().is_empty()) {
                match kv.split_once('=') {
                    Some(("seed", v)) => {
                        seed = v
                            .trim()
                            .parse()
                            .map_err(|_| GameError::InvalidConfig(format!("bad seed '{v}'")))?;
                    }
                    _ => return Err(GameError::InvalidConfig(format!("unknown scheduler option '{kv}'"))),
                }
            }
            Ok(NamedScheduler::Random(RandomScheduler::new(seed)))
        }
        other => Err(GameError::InvalidConfig(format!(
            "unknown scheduler '{other}' (expected balance, greedy, noop or random)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    /// Plays the given rounds with explicit decisions.
    fn position(alpha: usize, d_count: usize, rounds: &[(&[usize], &[usize])]) -> GameState {
        let mut s = GameState::new(GameConfig::new(alpha, d_count).unwrap()).unwrap();
        for (i, (n, c)) in rounds.iter().enumerate() {
            s.apply_round(&RoundMove::new(i, n.to_vec()), &set(c)).unwrap();
        }
        s
    }

    #[test]
    fn availability_predicates() {
        // m(u0) = {0,1}, m(u1) = {2}; u2 presented with N = {0, 2, 3, 4}
        let s = position(2, 5, &[(&[0, 1], &[0, 1]), (&[2], &[2])]);
        let a = s.assignment();
        let mv = RoundMove::new(2, vec![0, 2, 3]);
        assert!(available(a, 3, &mv));
        assert!(strongly_available(a, 3, &mv));
        assert!(!available(a, 2, &mv), "sole element of m(u1)");
        assert!(available(a, 0, &mv), "non-sole element");
        assert!(!strongly_available(a, 0, &mv));
        assert!(!strongly_available(a, 4, &mv), "not a neighbor");
        assert!(!available(a, 1, &mv));

        assert!(ready(a, 0, &mv));
        assert!(!ready(a, 1, &mv), "singleton group is never ready");
        let s2 = position(2, 5, &[(&[0], &[])]);
        assert!(!ready(s2.assignment(), 0, &RoundMove::new(1, vec![0])), "empty group");
    }

    #[test]
    fn balance_fresh_game_takes_alpha_lowest() {
        let s = position(2, 5, &[]);
        let d = balance_decide(s.assignment(), &RoundMove::new(0, vec![0, 1, 2, 3, 4]), 2);
        assert_eq!(d.chosen, set(&[0, 1]));
        assert!(d.transfers.is_empty());
    }

    #[test]
    fn balance_single_transfer_evens_out() {
        let s = position(2, 2, &[(&[0, 1], &[0, 1])]);
        let mv = RoundMove::new(1, vec![0, 1]);
        let d = balance_decide(s.assignment(), &mv, 2);
        assert_eq!(d.transfers, vec![Transfer { donor: 0, d: 0 }]);
        assert_eq!(d.chosen, set(&[0]));
        audit_balance_decision(s.assignment(), &mv, 2, &d).unwrap();
    }

    #[test]
    fn balance_prefers_largest_donor() {
        // m(u0) = {0,1}, m(u1) = {2,3,4}; u2 sees everything
        let s = position(3, 5, &[(&[0, 1], &[0, 1]), (&[2, 3, 4], &[2, 3, 4])]);
        let mv = RoundMove::new(2, vec![0, 1, 2, 3, 4]);
        let d = balance_decide(s.assignment(), &mv, 3);
        assert_eq!(d.transfers[0], Transfer { donor: 1, d: 2 });
        audit_balance_decision(s.assignment(), &mv, 3, &d).unwrap();
        // after one steal: sizes 2, 2, 1 -> loop stops
        assert_eq!(d.chosen, set(&[2]));
    }

    #[test]
    fn greedy_decisions() {
        let s = position(1, 3, &[(&[0], &[0])]);
        let d = greedy_decide(s.assignment(), &RoundMove::new(1, vec![0, 2]));
        assert_eq!(d.chosen, set(&[2]));
        let d = greedy_decide(s.assignment(), &RoundMove::new(1, vec![0]));
        assert!(d.chosen.is_empty());
    }

    #[test]
    fn balance_at_alpha_one_is_greedy() {
        let s = position(1, 4, &[(&[0, 1], &[1]), (&[2], &[2])]);
        for n in [vec![0, 1, 2], vec![1, 2], vec![3], vec![]] {
            let mv = RoundMove::new(2, n);
            assert_eq!(balance_decide(s.assignment(), &mv, 1), greedy_decide(s.assignment(), &mv));
        }
    }

    #[test]
    fn audit_catches_bad_decisions() {
        let s = position(2, 2, &[(&[0, 1], &[0, 1])]);
        let mv = RoundMove::new(1, vec![0, 1]);
        let lazy = SchedulerDecision::default();
        assert!(audit_balance_decision(s.assignment(), &mv, 2, &lazy).is_err());
        let greedy_steal = SchedulerDecision {
            chosen: set(&[0, 1]),
            transfers: vec![Transfer { donor: 0, d: 0 }, Transfer { donor: 0, d: 1 }],
        };
        assert!(audit_balance_decision(s.assignment(), &mv, 2, &greedy_steal).is_err());
    }

    #[test]
    fn selectors() {
        for name in ["balance", "greedy", "noop", "random", "random:seed=9"] {
            assert!(scheduler_by_name(name, 1).is_ok(), "{name}");
        }
        assert_eq!(scheduler_by_name("random:seed=9", 1).unwrap().name(), "random:seed=9");
        assert!(scheduler_by_name("ranking", 1).is_err());
        assert!(scheduler_by_name("random:seed=x", 1).is_err());
    }
}
