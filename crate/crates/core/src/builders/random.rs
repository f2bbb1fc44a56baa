use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GameError;
use crate::game::GameState;

use super::Builder;

/// Presents `n` vertices over `n` servers. A hidden random permutation plants
/// one perfect-matching edge per vertex; every other edge appears
/// independently with probability `p`. The whole graph is drawn up front, so
/// the sequence depends only on the seed.
#[derive(Debug, Clone)]
pub struct RandomPlantedBuilder {
    seed: u64,
    p: f64,
    script: Vec<Vec<usize>>,
    next: usize,
}

impl RandomPlantedBuilder {
    pub fn new(seed: u64, n: usize, p: f64) -> Result<Self, GameError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(GameError::InvalidConfig(format!("edge probability {p} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut planted: Vec<usize> = (0..n).collect();
        planted.shuffle(&mut rng);
        let script = planted
            .iter()
            .map(|&mate| (0..n).filter(|&d| d == mate || rng.gen_bool(p)).collect())
            .collect();
        Ok(Self { seed, p, script, next: 0 })
    }

    /// All neighborhoods in presentation order.
    pub fn script(&self) -> &[Vec<usize>] {
        &self.script
    }
}

impl Builder for RandomPlantedBuilder {
    fn name(&self) -> String {
        format!("random:seed={},p={}", self.seed, self.p)
    }

    fn next_move(&mut self, _state: &GameState) -> Result<Option<Vec<usize>>, GameError> {
        let mv = self.script.get(self.next).cloned();
        self.next += 1;
        Ok(mv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{run_game, GameConfig};
    use crate::schedulers::{Balance, Greedy, Noop};

    #[test]
    fn complete_graph_at_p_one() {
        let b = RandomPlantedBuilder::new(3, 10, 1.0).unwrap();
        assert!(b.script().iter().all(|n| n.len() == 10));
        let mut b = b;
        let (res, _) = run_game(&mut Greedy, &mut b, GameConfig::new(1, 10).unwrap(), 100).unwrap();
        assert_eq!(res.matched_count, 10);
    }

    #[test]
    fn perfect_matching_only_at_p_zero() {
        for mut sched in [Box::new(Balance) as Box<dyn crate::schedulers::Scheduler>, Box::new(Greedy)] {
            let mut b = RandomPlantedBuilder::new(11, 12, 0.0).unwrap();
            assert!(b.script().iter().all(|n| n.len() == 1));
            let (res, _) = run_game(&mut sched, &mut b, GameConfig::new(3, 12).unwrap(), 100).unwrap();
            assert_eq!((res.matched_count, res.game_size_n), (12, 12));
        }
        let mut b = RandomPlantedBuilder::new(11, 12, 0.0).unwrap();
        let (res, _) = run_game(&mut Noop, &mut b, GameConfig::new(3, 12).unwrap(), 100).unwrap();
        assert_eq!(res.matched_count, 0);
    }

    #[test]
    fn deterministic_in_seed() {
        let a = RandomPlantedBuilder::new(42, 20, 0.3).unwrap();
        let b = RandomPlantedBuilder::new(42, 20, 0.3).unwrap();
        assert_eq!(a.script(), b.script());
        assert_ne!(a.script(), RandomPlantedBuilder::new(43, 20, 0.3).unwrap().script());
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(RandomPlantedBuilder::new(1, 3, -0.1).is_err());
        assert!(RandomPlantedBuilder::new(1, 3, 1.5).is_err());
    }
}
