//! Simulation and verification toolkit for the α-lazy on-line bipartite
//! matching game.
//!
//! A lazy scheduler may assign each arriving vertex a whole group of up to
//! α servers and later give servers up to newer vertices; a vertex counts as
//! matched while its group is nonempty. This crate plays that game between
//! pluggable [`Scheduler`]s and [`Builder`]s. It also computes exact game
//! values and competitive ratios independently, so simulated games can be
//! checked against them.
//!
//! * [`game`]: rules, engine, transcripts and replay.
//! * [`matching`]: maximum bipartite matching oracle.
//! * [`schedulers`]: α-BALANCE, greedy, noop and a random rule-abiding player.
//! * [`builders`]: the adversary, random planted graphs and a minimax oracle.
//! * [`bounds`]: the integer system, LP closed forms and ratios.
//! * [`cli`]: the batch experiment driver behind the `lazymatch` binary.

pub mod bounds;
pub mod builders;
pub mod cli;
pub mod error;
pub mod game;
pub mod matching;
pub mod schedulers;

pub use builders::{Adversary, Builder, RandomPlantedBuilder, ScriptedBuilder};
pub use error::{BoundsError, GameError};
pub use game::{
    new_game, replay, run_game, run_game_recorded, AssignmentState, GameConfig, GameResult, GameState,
    GameTranscript, RoundMove,
};
pub use matching::{has_perfect_matching, max_matching, BipartiteGraph, Matching};
pub use schedulers::{Balance, Greedy, Noop, RandomScheduler, Scheduler, SchedulerDecision};
