//! Adaptive adversary built from a solution `x = (x0, …, xk)` of the integer
//! system. It holds every scheduler to at most `n − Σx` matched vertices.
//!
//! The game has `|U| = |D| = n` and runs in phases `0..=k+1`:
//!
//! * phase 0 presents `x0` vertices adjacent to all of `D`, then retires a
//!   block `D0` of `x0` servers that no phase-0 group touches;
//! * phase `i ∈ 1..=k` presents `1 + x_i` vertices adjacent to every server
//!   not yet retired, then picks a special vertex `y_i` and retires a block
//!   `D_i` of `1 + x_i` servers taken from the servers no ordinary vertex
//!   holds, topped up from `m(y_i)`;
//! * phase `k+1` presents the remaining `n − k − Σx` vertices, adjacent to
//!   the leftover servers `S`.
//!
//! After each phase, every non-special vertex presented so far has a group
//! disjoint from the retired blocks. Groups only shrink, so at the end each
//! nonempty group either belongs to one of the `k` special vertices or lies
//! inside `S`.

use crate::bounds::system::{normalize_solution, AdversarySolution};
use crate::error::GameError;
use crate::game::{AssignmentState, GameState};

use super::Builder;

/// Bookkeeping of the adversary between moves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdversaryState {
    /// Phase currently being presented, `0..=k+1`.
    pub phase: usize,
    /// `U_0, U_1, …` as presentation indices; the last entry may be partial.
    pub u_sets: Vec<Vec<usize>>,
    /// Retired blocks `D_0, D_1, …`.
    pub d_sets: Vec<Vec<usize>>,
    /// Special vertices `y_1, …, y_i`.
    pub special: Vec<usize>,
    /// Free part `X` of the last block choice.
    pub last_free: Vec<usize>,
    /// Leftover servers `S`, fixed when phase `k+1` starts.
    pub leftover: Vec<usize>,
    /// Vertices of phase `k+1`.
    pub rest: Vec<usize>,
}

/// What happened when a phase was closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseRecord {
    pub phase: usize,
    pub vertices: Vec<usize>,
    pub block: Vec<usize>,
    pub special: Option<usize>,
    /// `|X|` at the time of the choice.
    pub free_count: usize,
}

#[derive(Debug, Clone)]
pub struct Adversary {
    solution: AdversarySolution,
    n: usize,
    state: AdversaryState,
    presented_in_phase: usize,
    retired: Vec<bool>,
    done: bool,
    log: Vec<PhaseRecord>,
}

impl Adversary {
    /// A solution with negative `x0` is first normalized, which only raises
    /// `Σx`.
    pub fn new(solution: AdversarySolution) -> Result<Self, GameError> {
        let mut solution = solution;
        if solution.x0() < 0 {
            let x = normalize_solution(solution.n, solution.alpha, &solution.x)
                .map_err(|e| GameError::InvalidConfig(e.to_string()))?;
            solution = AdversarySolution { x, ..solution };
        }
        if solution.n < 1 {
            return Err(GameError::InvalidConfig("adversary needs n >= 1".into()));
        }
        let n = solution.n as usize;
        Ok(Self {
            solution,
            n,
            state: AdversaryState { u_sets: vec![Vec::new()], ..Default::default() },
            presented_in_phase: 0,
            retired: vec![false; n],
            done: false,
            log: Vec::new(),
        })
    }

    pub fn solution(&self) -> &AdversarySolution {
        &self.solution
    }

    pub fn state(&self) -> &AdversaryState {
        &self.state
    }

    pub fn phase_log(&self) -> &[PhaseRecord] {
        &self.log
    }

    /// Upper bound on what any scheduler matches against this adversary.
    pub fn guaranteed_bound(&self) -> i64 {
        self.solution.value()
    }

    fn k(&self) -> usize {
        self.solution.k()
    }

    fn phase_size(&self, phase: usize) -> usize {
        let x = &self.solution.x;
        if phase == 0 {
            x[0] as usize
        } else {
            1 + x[phase] as usize
        }
    }

    fn rest_size(&self) -> usize {
        (self.solution.n - self.k() as i64 - self.solution.sum()) as usize
    }

    fn unretired(&self) -> Vec<usize> {
        (0..self.n).filter(|&d| !self.retired[d]).collect()
    }

    /// Closes phase `i ∈ 0..=k`: picks the block `D_i` (and `y_i` for
    /// `i ≥ 1`), then checks the disjointness invariant.
    fn close_phase(&mut self, a: &AssignmentState) -> Result<(), GameError> {
        let i = self.state.phase;
        let (block, special, free_count) = if i == 0 {
            let size = self.phase_size(0);
            let block = choose_first_block(a, &self.state.u_sets[0], size);
            if block.len() < size {
                return Err(GameError::AdversaryInvariant(format!(
                    "phase 0: only {} servers outside m(U_0), need {size}",
                    block.len()
                )));
            }
            (block, None, 0)
        } else {
            let (block, y, free) = self.choose_block(a, i)?;
            (block, Some(y), free)
        };
        for &d in &block {
            self.retired[d] = true;
        }
        if let Some(y) = special {
            self.state.special.push(y);
        }
        self.state.d_sets.push(block.clone());
        self.log.push(PhaseRecord {
            phase: i,
            vertices: self.state.u_sets[i].clone(),
            block,
            special,
            free_count,
        });
        self.check_disjointness(a)?;

        self.state.phase += 1;
        self.presented_in_phase = 0;
        if self.state.phase <= self.k() {
            self.state.u_sets.push(Vec::new());
        } else {
            self.state.leftover = self.unretired();
        }
        Ok(())
    }

    /// Block choice for phase `i ≥ 1`. `X` is the set of unretired servers
    /// not held by any ordinary (non-special) vertex presented so far.
    fn choose_block(&mut self, a: &AssignmentState, i: usize) -> Result<(Vec<usize>, usize, usize), GameError> {
        let size = self.phase_size(i);
        let ordinary: Vec<usize> = self
            .state
            .u_sets
            .iter()
            .flatten()
            .copied()
            .filter(|u| !self.state.special.contains(u))
            .collect();
        let mut held = vec![false; self.n];
        for &u in &ordinary {
            for &d in a.group(u) {
                held[d] = true;
            }
        }
        let free: Vec<usize> = (0..self.n).filter(|&d| !self.retired[d] && !held[d]).collect();

        // Largest group, lowest index on ties.
        let y = ordinary
            .iter()
            .copied()
            .fold(None::<usize>, |best, u| match best {
                Some(b) if a.group_len(b) >= a.group_len(u) => Some(b),
                _ => Some(u),
            })
            .ok_or_else(|| GameError::AdversaryInvariant(format!("phase {i}: no ordinary vertex left")))?;
        if free.len() + a.group_len(y) < size {
            return Err(GameError::AdversaryInvariant(format!(
                "phase {i}: |X| = {} and max |m(y)| = {} cannot fill a block of {size}",
                free.len(),
                a.group_len(y)
            )));
        }
        if let Some(&d) = a.group(y).iter().find(|&&d| self.retired[d]) {
            return Err(GameError::AdversaryInvariant(format!("phase {i}: m(u{y}) holds retired d{d}")));
        }
        let block: Vec<usize> = free.iter().chain(a.group(y).iter()).copied().take(size).collect();
        let mut block = block;
        block.sort_unstable();
        self.state.last_free = free.clone();
        Ok((block, y, free.len()))
    }

    /// Every ordinary vertex presented so far has a group disjoint from the
    /// retired servers.
    fn check_disjointness(&self, a: &AssignmentState) -> Result<(), GameError> {
        for &u in self.state.u_sets.iter().flatten() {
            if self.state.special.contains(&u) {
                continue;
            }
            if let Some(&d) = a.group(u).iter().find(|&&d| self.retired[d]) {
                return Err(GameError::AdversaryInvariant(format!(
                    "after phase {}: ordinary u{u} still holds retired d{d}",
                    self.state.phase
                )));
            }
        }
        Ok(())
    }
}

/// `D_0`: the lowest `size` servers outside `m(U_0)`.
fn choose_first_block(a: &AssignmentState, u0: &[usize], size: usize) -> Vec<usize> {
    let mut held = vec![false; a.d_count()];
    for &u in u0 {
        for &d in a.group(u) {
            held[d] = true;
        }
    }
    (0..a.d_count()).filter(|&d| !held[d]).take(size).collect()
}

impl Builder for Adversary {
    fn name(&self) -> String {
        let x: Vec<String> = self.solution.x.iter().map(i64::to_string).collect();
        format!("adversary:k={},x={}", self.k(), x.join(","))
    }

    fn next_move(&mut self, game: &GameState) -> Result<Option<Vec<usize>>, GameError> {
        if self.done {
            return Ok(None);
        }
        if game.config().d_count != self.n {
            return Err(GameError::InvalidConfig(format!(
                "adversary for n = {} needs d_count = {}, got {}",
                self.n,
                self.n,
                game.config().d_count
            )));
        }
        if game.alpha() as i64 > self.solution.alpha {
            return Err(GameError::InvalidConfig(format!(
                "solution was built for alpha = {}, game allows {}",
                self.solution.alpha,
                game.alpha()
            )));
        }
        loop {
            let phase = self.state.phase;
            if phase <= self.k() {
                if self.presented_in_phase < self.phase_size(phase) {
                    self.presented_in_phase += 1;
                    self.state.u_sets[phase].push(game.round());
                    return Ok(Some(self.unretired()));
                }
                self.close_phase(game.assignment())?;
            } else {
                if self.state.rest.len() < self.rest_size() {
                    self.state.rest.push(game.round());
                    return Ok(Some(self.state.leftover.clone()));
                }
                self.done = true;
                return Ok(None);
            }
        }
    }
}
