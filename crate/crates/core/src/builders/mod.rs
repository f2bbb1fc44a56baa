//! Builder strategies: the adaptive adversary, a random planted-matching
//! builder, scripted sequences, and the exhaustive minimax oracle.

mod adversary;
mod minimax;
mod random;

pub use adversary::{Adversary, AdversaryState, PhaseRecord};
pub use minimax::{minimax_builder, minimax_search, minimax_value, MinimaxOutcome, DEFAULT_MINIMAX_CAP};
pub use random::RandomPlantedBuilder;

pub use crate::bounds::system::AdversarySolution;

use crate::bounds::system::max_sum_exact;
use crate::error::GameError;
use crate::game::GameState;
use crate::schedulers::NamedScheduler;

pub trait Builder {
    fn name(&self) -> String;

    /// Neighborhood of the next vertex, or `None` when the builder is done.
    /// Reads the live position; adaptive builders react to `m`.
    fn next_move(&mut self, state: &GameState) -> Result<Option<Vec<usize>>, GameError>;
}

impl<B: Builder + ?Sized> Builder for Box<B> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn next_move(&mut self, state: &GameState) -> Result<Option<Vec<usize>>, GameError> {
        (**self).next_move(state)
    }
}

/// Presents nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyBuilder;

impl Builder for EmptyBuilder {
    fn name(&self) -> String {
        "empty".into()
    }

    fn next_move(&mut self, _state: &GameState) -> Result<Option<Vec<usize>>, GameError> {
        Ok(None)
    }
}

/// Presents a fixed list of neighborhoods, ignoring the scheduler.
#[derive(Debug, Clone)]
pub struct ScriptedBuilder {
    label: String,
    script: Vec<Vec<usize>>,
    next: usize,
}

impl ScriptedBuilder {
    pub fn new(script: Vec<Vec<usize>>) -> Self {
        Self::labeled("scripted", script)
    }

    pub fn labeled(label: impl Into<String>, script: Vec<Vec<usize>>) -> Self {
        Self { label: label.into(), script, next: 0 }
    }
}

impl Builder for ScriptedBuilder {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn next_move(&mut self, _state: &GameState) -> Result<Option<Vec<usize>>, GameError> {
        let mv = self.script.get(self.next).cloned();
        self.next += 1;
        Ok(mv)
    }
}

/// A builder chosen by name at run time.
pub enum NamedBuilder {
    Empty(EmptyBuilder),
    Adversary(Box<Adversary>),
    Random(RandomPlantedBuilder),
    Scripted(ScriptedBuilder),
}

impl Builder for NamedBuilder {
    fn name(&self) -> String {
        match self {
            Self::Empty(b) => b.name(),
            Self::Adversary(b) => b.name(),
            Self::Random(b) => b.name(),
            Self::Scripted(b) => b.name(),
        }
    }

    fn next_move(&mut self, state: &GameState) -> Result<Option<Vec<usize>>, GameError> {
        match self {
            Self::Empty(b) => b.next_move(state),
            Self::Adversary(b) => b.next_move(state),
            Self::Random(b) => b.next_move(state),
            Self::Scripted(b) => b.next_move(state),
        }
    }
}

/// Key/value options of a selector like `random:seed=3,p=0.5` or
/// `adversary:k=2,x=6,1,1`. A token without `=` continues the previous
/// value, so list values may contain commas.
fn parse_options(params: &str) -> Result<Vec<(String, String)>, GameError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for token in params.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token.split_once('=') {
            Some((k, v)) => out.push((k.trim().to_string(), v.trim().to_string())),
            None => match out.last_mut() {
                Some((_, v)) => {
                    v.push(',');
                    v.push_str(token);
                }
                None => return Err(GameError::InvalidConfig(format!("expected key=value, got '{token}'"))),
            },
        }
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, GameError> {
    v.parse().map_err(|_| GameError::InvalidConfig(format!("bad value '{v}' for '{key}'")))
}

/// Parses a builder selector for a game of size `n` with capacity `alpha`:
///
/// * `empty`
/// * `adversary` (maximal solution) or `adversary:x=6,1,1` / `adversary:k=2,x=6,1,1`
/// * `random`, `random:seed=S,p=P` (defaults: `default_seed`, `p = 0.1`)
/// * `minimax` (worst case against `scheduler`, found by exhaustive search)
pub fn builder_by_name(
    spec: &str,
    n: usize,
    alpha: usize,
    default_seed: u64,
    scheduler: &NamedScheduler,
) -> Result<NamedBuilder, GameError> {
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let opts = parse_options(params)?;
    let unknown = |k: &str| GameError::InvalidConfig(format!("unknown option '{k}' for builder '{name}'"));
    match name.trim() {
        "empty" => Ok(NamedBuilder::Empty(EmptyBuilder)),
        "adversary" => {
            let mut x: Option<Vec<i64>> = None;
            let mut k: Option<usize> = None;
            for (key, v) in &opts {
                match key.as_str() {
                    "x" => {
                        x = Some(v.split(',').map(|t| parse_value("x", t.trim())).collect::<Result<_, _>>()?)
                    }
                    "k" => k = Some(parse_value("k", v)?),
                    other => return Err(unknown(other)),
                }
            }
            let x = match x {
                Some(x) => x,
                None => max_sum_exact(n as i64, alpha as i64)
                    .map_err(|e| GameError::InvalidConfig(e.to_string()))?
                    .witness,
            };
            if let Some(k) = k {
                if k + 1 != x.len() {
                    return Err(GameError::InvalidConfig(format!("k = {k} but x has {} entries", x.len())));
                }
            }
            let sol = AdversarySolution::new(n as i64, alpha as i64, x)
                .map_err(|e| GameError::InvalidConfig(e.to_string()))?;
            Ok(NamedBuilder::Adversary(Box::new(Adversary::new(sol)?)))
        }
        "random" => {
            let mut seed = default_seed;
            let mut p = 0.1;
            for (key, v) in &opts {
                match key.as_str() {
                    "seed" => seed = parse_value("seed", v)?,
                    "p" => p = parse_value("p", v)?,
                    other => return Err(unknown(other)),
                }
            }
            Ok(NamedBuilder::Random(RandomPlantedBuilder::new(seed, n, p)?))
        }
        "minimax" => {
            if let Some((k, _)) = opts.first() {
                return Err(unknown(k));
            }
            Ok(NamedBuilder::Scripted(minimax_builder(n, alpha, scheduler)?))
        }
        other => Err(GameError::InvalidConfig(format!(
            "unknown builder '{other}' (expected empty, adversary, random or minimax)"
        ))),
    }
}
