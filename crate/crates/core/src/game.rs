//! Rules of the α-lazy matching game.
//!
//! Each round the builder presents a new vertex `u` together with its
//! neighborhood `N(u) ⊆ D`, and the scheduler assigns `u` a group
//! `m(u) ⊆ N(u)` of at most α servers. Servers taken for `u` are removed
//! from every earlier group, so groups stay pairwise disjoint and only ever
//! shrink after their owner's round. The score is the number of nonempty
//! groups at the end, compared against the maximum matching size `n` of the
//! whole revealed graph.
//!
//! The engine enforces the game rules only. Scheduler-specific restrictions
//! (availability in BALANCE, for instance) live with the schedulers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::builders::Builder;
use crate::error::GameError;
use crate::matching::{max_matching, BipartiteGraph};
use crate::schedulers::Scheduler;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub alpha: usize,
    pub d_count: usize,
    /// Treat α as `|D|`.
    #[serde(default)]
    pub infinite_mode: bool,
}

impl GameConfig {
    pub fn new(alpha: usize, d_count: usize) -> Result<Self, GameError> {
        let cfg = Self { alpha, d_count, infinite_mode: false };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The ∞-lazy game on `d_count` servers.
    pub fn infinite(d_count: usize) -> Result<Self, GameError> {
        let cfg = Self { alpha: d_count, d_count, infinite_mode: true };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.d_count < 1 {
            return Err(GameError::InvalidConfig("d_count must be at least 1".into()));
        }
        if self.alpha < 1 && !self.infinite_mode {
            return Err(GameError::InvalidConfig("alpha must be at least 1".into()));
        }
        Ok(())
    }

    pub fn effective_alpha(&self) -> usize {
        if self.infinite_mode {
            self.d_count
        } else {
            self.alpha
        }
    }
}

/// One builder move: vertex `u` (its presentation index) and `N(u)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundMove {
    pub u: usize,
    /// Sorted, without duplicates.
    pub neighbors: Vec<usize>,
}

impl RoundMove {
    pub fn new(u: usize, mut neighbors: Vec<usize>) -> Self {
        neighbors.sort_unstable();
        neighbors.dedup();
        Self { u, neighbors }
    }

    pub fn contains(&self, d: usize) -> bool {
        self.neighbors.binary_search(&d).is_ok()
    }
}

/// The family of groups `m(u)` plus the reverse index `d -> owner`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentState {
    groups: Vec<BTreeSet<usize>>,
    owner: Vec<Option<usize>>,
    round: usize,
}

impl AssignmentState {
    pub fn new(d_count: usize) -> Self {
        Self { groups: Vec::new(), owner: vec![None; d_count], round: 0 }
    }

    /// Rounds completed so far (= number of presented vertices).
    pub fn round(&self) -> usize {
        self.round
    }

    pub fn d_count(&self) -> usize {
        self.owner.len()
    }

    pub fn group(&self, u: usize) -> &BTreeSet<usize> {
        &self.groups[u]
    }

    pub fn group_len(&self, u: usize) -> usize {
        self.groups[u].len()
    }

    pub fn groups(&self) -> &[BTreeSet<usize>] {
        &self.groups
    }

    pub fn owner(&self, d: usize) -> Option<usize> {
        self.owner[d]
    }

    pub fn is_unowned(&self, d: usize) -> bool {
        self.owner[d].is_none()
    }

    /// True if `d` is the only element of some group.
    pub fn is_sole_element(&self, d: usize) -> bool {
        self.owner[d].is_some_and(|x| self.groups[x].len() == 1)
    }

    pub fn matched_count(&self) -> usize {
        self.groups.iter().filter(|g| !g.is_empty()).count()
    }

    /// Servers in `D` that belong to no group.
    pub fn unowned(&self) -> impl Iterator<Item = usize> + '_ {
        self.owner.iter().enumerate().filter(|(_, o)| o.is_none()).map(|(d, _)| d)
    }

    /// Moves `d` into the group of `to`, removing it from its current owner.
    /// Does not check any game rule; schedulers use this for mid-round planning.
    pub fn move_to(&mut self, d: usize, to: usize) {
        if let Some(prev) = self.owner[d] {
            self.groups[prev].remove(&d);
        }
        self.groups[to].insert(d);
        self.owner[d] = Some(to);
    }

    /// Opens an empty group for the next vertex and returns its index.
    pub fn open_group(&mut self) -> usize {
        self.groups.push(BTreeSet::new());
        self.groups.len() - 1
    }

    /// Checks disjointness (through the owner index), capacity and
    /// neighborhood containment.
    pub fn check_invariants(&self, graph: &BipartiteGraph, alpha: usize) -> Result<(), String> {
        let mut seen = vec![None; self.owner.len()];
        for (u, group) in self.groups.iter().enumerate() {
            if group.len() > alpha {
                return Err(format!("|m(u{u})| = {} exceeds alpha = {alpha}", group.len()));
            }
            for &d in group {
                if let Some(other) = seen[d] {
                    return Err(format!("d{d} in both m(u{other}) and m(u{u})"));
                }
                seen[d] = Some(u);
                if !graph.has_edge(u, d) {
                    return Err(format!("d{d} in m(u{u}) but not in N(u{u})"));
                }
            }
        }
        if seen != self.owner {
            return Err("owner index out of sync with groups".into());
        }
        Ok(())
    }
}

/// Full game position: configuration, revealed graph, and assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    config: GameConfig,
    graph: BipartiteGraph,
    assignment: AssignmentState,
}

impl GameState {
    pub fn new(config: GameConfig) -> Result<Self, GameError> {
        config.validate()?;
        Ok(Self {
            config,
            graph: BipartiteGraph::new(config.d_count),
            assignment: AssignmentState::new(config.d_count),
        })
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn alpha(&self) -> usize {
        self.config.effective_alpha()
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn assignment(&self) -> &AssignmentState {
        &self.assignment
    }

    pub fn round(&self) -> usize {
        self.assignment.round
    }

    pub fn matched_count(&self) -> usize {
        self.assignment.matched_count()
    }

    /// Plays one round: `m(u) := chosen`, and `chosen` is stripped from every
    /// earlier group. Rejected moves leave the state untouched.
    pub fn apply_round(&mut self, mv: &RoundMove, chosen: &BTreeSet<usize>) -> Result<(), GameError> {
        let round = self.assignment.round;
        if mv.u != round {
            return Err(GameError::OutOfOrder { expected: round, got: mv.u });
        }
        let d_count = self.config.d_count;
        if let Some(&d) = mv.neighbors.iter().find(|&&d| d >= d_count) {
            return Err(GameError::NeighborOutOfRange { d, d_count });
        }
        if let Some(&d) = chosen.iter().find(|&&d| !mv.contains(d)) {
            return Err(GameError::NotANeighbor { round, d });
        }
        let alpha = self.alpha();
        if chosen.len() > alpha {
            return Err(GameError::OverCapacity { round, size: chosen.len(), alpha });
        }

        self.graph.push_vertex(mv.neighbors.clone())?;
        let u = self.assignment.open_group();
        for &d in chosen {
            self.assignment.move_to(d, u);
        }
        self.assignment.round += 1;
        Ok(())
    }

    pub fn result(&self) -> GameResult {
        GameResult {
            matched_count: self.matched_count(),
            game_size_n: max_matching(&self.graph).size(),
            groups: self
                .assignment
                .groups
                .iter()
                .map(|g| g.iter().copied().collect())
                .collect(),
        }
    }
}

/// Shorthand for [`GameState::new`].
pub fn new_game(config: GameConfig) -> Result<GameState, GameError> {
    GameState::new(config)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    /// Number of `u` with `m(u) ≠ ∅` at the end.
    pub matched_count: usize,
    /// Maximum matching size of the final revealed graph.
    pub game_size_n: usize,
    /// Final `m(u)` for every presented `u`, sorted.
    pub groups: Vec<Vec<usize>>,
}

impl GameResult {
    pub fn ratio(&self) -> f64 {
        if self.game_size_n == 0 {
            1.0
        } else {
            self.matched_count as f64 / self.game_size_n as f64
        }
    }
}

/// Round-by-round record of a game; replaying it reproduces the result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub config: GameConfig,
    pub moves: Vec<RoundMove>,
    /// `m(u)` as chosen when `u` was presented, sorted.
    pub decisions: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<AssignmentState>>,
}

impl GameTranscript {
    pub fn new(config: GameConfig) -> Self {
        Self { config, moves: Vec::new(), decisions: Vec::new(), snapshots: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, GameError> {
        serde_json::from_str(s).map_err(|e| GameError::CorruptTranscript(e.to_string()))
    }
}

/// Re-executes a transcript through the engine.
pub fn replay(transcript: &GameTranscript) -> Result<GameResult, GameError> {
    Ok(replay_state(transcript)?.result())
}

/// Like [`replay`], returning the final state.
pub fn replay_state(transcript: &GameTranscript) -> Result<GameState, GameError> {
    if transcript.moves.len() != transcript.decisions.len() {
        return Err(GameError::CorruptTranscript(format!(
            "{} moves but {} decisions",
            transcript.moves.len(),
            transcript.decisions.len()
        )));
    }
    let mut state = GameState::new(transcript.config)?;
    for (mv, decision) in transcript.moves.iter().zip(&transcript.decisions) {
        let chosen: BTreeSet<usize> = decision.iter().copied().collect();
        if chosen.len() != decision.len() {
            return Err(GameError::CorruptTranscript(format!(
                "round {}: duplicate elements in decision",
                mv.u
            )));
        }
        state.apply_round(mv, &chosen)?;
    }
    if let Some(snaps) = &transcript.snapshots {
        if snaps.last().is_some_and(|s| s != state.assignment()) {
            return Err(GameError::CorruptTranscript("final snapshot disagrees with replay".into()));
        }
    }
    Ok(state)
}

/// Plays `scheduler` against `builder` until the builder is done or
/// `max_rounds` rounds have been played.
pub fn run_game<S, B>(
    scheduler: &mut S,
    builder: &mut B,
    config: GameConfig,
    max_rounds: usize,
) -> Result<(GameResult, GameTranscript), GameError>
where
    S: Scheduler + ?Sized,
    B: Builder + ?Sized,
{
    let (state, transcript) = play(scheduler, builder, config, max_rounds, false)?;
    Ok((state.result(), transcript))
}

/// [`run_game`] that also records a snapshot after every round and returns
/// the final state.
pub fn run_game_recorded<S, B>(
    scheduler: &mut S,
    builder: &mut B,
    config: GameConfig,
    max_rounds: usize,
) -> Result<(GameState, GameTranscript), GameError>
where
    S: Scheduler + ?Sized,
    B: Builder + ?Sized,
{
    play(scheduler, builder, config, max_rounds, true)
}

fn play<S, B>(
    scheduler: &mut S,
    builder: &mut B,
    config: GameConfig,
    max_rounds: usize,
    record: bool,
) -> Result<(GameState, GameTranscript), GameError>
where
    S: Scheduler + ?Sized,
    B: Builder + ?Sized,
{
    let mut state = GameState::new(config)?;
    let mut transcript = GameTranscript::new(config);
    if record {
        transcript.snapshots = Some(Vec::new());
    }
    while state.round() < max_rounds {
        let Some(neighbors) = builder.next_move(&state)? else {
            break;
        };
        let mv = RoundMove::new(state.round(), neighbors);
        let decision = scheduler.decide(&state, &mv);
        state.apply_round(&mv, &decision.chosen).map_err(|e| GameError::SchedulerViolation {
            scheduler: scheduler.name(),
            source: Box::new(e),
        })?;
        transcript.moves.push(mv);
        transcript.decisions.push(decision.chosen.into_iter().collect());
        if let Some(snaps) = transcript.snapshots.as_mut() {
            snaps.push(state.assignment().clone());
        }
    }
    Ok((state, transcript))
}
