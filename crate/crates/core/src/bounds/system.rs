//! The integer system behind the worst case of a lazy scheduler:
//!
//! ```text
//! (1 + α)·x0 ≤ n
//! (x0 + … + x_i)(1 + x_i) ≤ n − i      for i = 1..k
//! x1 ≥ x2 ≥ … ≥ xk ≥ 0
//! x0 + … + xk ≥ 0
//! ```
//!
//! Every solution `(k, x)` gives a builder strategy holding any scheduler to
//! `n − Σx` matched vertices, and BALANCE always reaches `n − Σx` for some
//! solution, so the game value is `n − max Σx`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::BoundsError;

/// A solution candidate `x = (x0, x1, …, xk)` of the system for `(n, α)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarySolution {
    pub n: i64,
    pub alpha: i64,
    pub x: Vec<i64>,
}

impl AdversarySolution {
    /// Checks feasibility before returning.
    pub fn new(n: i64, alpha: i64, x: Vec<i64>) -> Result<Self, BoundsError> {
        if !validate_solution(n, alpha, &x) {
            return Err(BoundsError::Infeasible { n, alpha, x });
        }
        Ok(Self { n, alpha, x })
    }

    /// Number of phases `k`.
    pub fn k(&self) -> usize {
        self.x.len() - 1
    }

    pub fn x0(&self) -> i64 {
        self.x[0]
    }

    pub fn sum(&self) -> i64 {
        self.x.iter().sum()
    }

    /// Matched count the adversary guarantees not to exceed.
    pub fn value(&self) -> i64 {
        self.n - self.sum()
    }
}

/// True iff `x` (with `k = x.len() − 1 ≥ 1`) satisfies the system.
pub fn validate_solution(n: i64, alpha: i64, x: &[i64]) -> bool {
    if x.len() < 2 || alpha < 1 || n < 0 {
        return false;
    }
    if (1 + alpha) * x[0] > n {
        return false;
    }
    let mut prefix = x[0];
    for i in 1..x.len() {
        let xi = x[i];
        if xi < 0 || (i > 1 && xi > x[i - 1]) {
            return false;
        }
        prefix += xi;
        if prefix * (1 + xi) > n - i as i64 {
            return false;
        }
    }
    prefix >= 0
}

/// `⌊n / (1 + α)⌋`, the value of `x0` in some maximal solution.
pub fn optimal_x0(n: i64, alpha: i64) -> i64 {
    n.div_euclid(1 + alpha)
}

/// Raises `x0` to `⌊n/(1+α)⌋` without lowering the sum: each step moves one
/// unit from the last entry equal to `x1` into `x0`; once `x1 = 0` the answer
/// is `(⌊n/(1+α)⌋, 0)`.
pub fn normalize_solution(n: i64, alpha: i64, x: &[i64]) -> Result<Vec<i64>, BoundsError> {
    if !validate_solution(n, alpha, x) {
        return Err(BoundsError::Infeasible { n, alpha, x: x.to_vec() });
    }
    let target = optimal_x0(n, alpha);
    let mut x = x.to_vec();
    while x[0] < target {
        if x[1] == 0 {
            return Ok(vec![target, 0]);
        }
        let j = (1..x.len()).rev().find(|&j| x[j] == x[1]).expect("j = 1 qualifies");
        x[0] += 1;
        x[j] -= 1;
        debug_assert!(validate_solution(n, alpha, &x));
    }
    Ok(x)
}

/// Result of [`max_sum_exact`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxSum {
    pub best_sum: i64,
    /// Witness `(x0, …, xk)` with `x0 = ⌊n/(1+α)⌋`.
    pub witness: Vec<i64>,
}

impl MaxSum {
    pub fn k(&self) -> usize {
        self.witness.len() - 1
    }
}

/// Exact maximum of `Σx` over all solutions, by depth-first search over
/// non-increasing positive tails with `x0` fixed to `⌊n/(1+α)⌋`.
pub fn max_sum_exact(n: i64, alpha: i64) -> Result<MaxSum, BoundsError> {
    if n < 1 || alpha < 1 {
        return Err(BoundsError::InvalidParameters(format!("need n >= 1 and alpha >= 1, got n = {n}, alpha = {alpha}")));
    }
    let x0 = optimal_x0(n, alpha);
    let mut search = TailSearch { n, memo: HashMap::new() };
    let best = search.best(1, x0, n);
    let mut witness = vec![x0];
    let (mut i, mut sum, mut last) = (1, x0, n);
    while let Some(v) = search.memo[&(i, sum, last)].1 {
        witness.push(v);
        i += 1;
        sum += v;
        last = v;
    }
    // Trailing zeros never help; k ≥ 1 still needs one entry.
    if witness.len() == 1 {
        witness.push(0);
    }
    debug_assert!(validate_solution(n, alpha, &witness));
    Ok(MaxSum { best_sum: best, witness })
}

struct TailSearch {
    n: i64,
    /// (next index, prefix sum, previous entry) -> (best final sum, next entry)
    memo: HashMap<(i64, i64, i64), (i64, Option<i64>)>,
}

impl TailSearch {
    fn best(&mut self, i: i64, sum: i64, last: i64) -> i64 {
        if let Some(&(v, _)) = self.memo.get(&(i, sum, last)) {
            return v;
        }
        let mut best = (sum, None);
        // Largest first; the first maximum found is kept.
        for v in (1..=last).rev() {
            if (sum + v) * (1 + v) > self.n - i {
                continue;
            }
            let got = self.best(i + 1, sum + v, v);
            if got > best.0 {
                best = (got, Some(v));
            }
        }
        self.memo.insert((i, sum, last), best);
        best.0
    }
}

/// Change of variables to counts: `m = 1 + x1` and `y_j = #{i ≥ 1 : 1 + x_i = j}`.
/// Returns `(y_1, …, y_m)`.
pub fn psi_transform(x: &[i64]) -> Result<Vec<i64>, BoundsError> {
    if x.len() < 2 || x[1..].iter().any(|&v| v < 0) || x[1..].windows(2).any(|w| w[0] < w[1]) {
        return Err(BoundsError::InvalidParameters(format!("x = {x:?} is not a non-increasing nonnegative tail")));
    }
    let m = (1 + x[1]) as usize;
    let mut y = vec![0; m];
    for &xi in &x[1..] {
        y[xi as usize] += 1;
    }
    Ok(y)
}

/// Inverse of [`psi_transform`]: `y_j` copies of `j − 1`, largest first. An
/// all-zero `y` yields `(x0, 0)` so that `k ≥ 1`.
pub fn psi_inverse(x0: i64, y: &[i64]) -> Vec<i64> {
    let mut x = vec![x0];
    for (j, &count) in y.iter().enumerate().rev() {
        x.extend(std::iter::repeat_n(j as i64, count.max(0) as usize));
    }
    if x.len() == 1 {
        x.push(0);
    }
    x
}

/// Checks `t·x0 + Σ_{i=t..m} (1 + (i−1)t)·y_i ≤ n` for `t = 1..m` and `y ≥ 0`.
pub fn psi_satisfied(n: i64, x0: i64, y: &[i64]) -> bool {
    let m = y.len();
    if y.iter().any(|&v| v < 0) {
        return false;
    }
    (1..=m).all(|t| {
        let t = t as i64;
        let lhs: i64 = t * x0
            + (t..=m as i64)
                .map(|i| (1 + (i - 1) * t) * y[(i - 1) as usize])
                .sum::<i64>();
        lhs <= n
    })
}

/// `x0 + Σ (j − 1)·y_j`, the objective in count form.
pub fn psi_objective(x0: i64, y: &[i64]) -> i64 {
    x0 + y.iter().enumerate().map(|(j, &v)| j as i64 * v).sum::<i64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(validate_solution(18, 2, &[6, 1, 1]));
        // (6+2)(1+2) = 24 > 17
        assert!(!validate_solution(18, 2, &[6, 2, 1]));
        // 2·2 <= 5 and (2+0)·1 <= 4
        assert!(validate_solution(5, 1, &[2, 0]));
        assert!(!validate_solution(18, 2, &[7, 0]), "(1+α)x0 > n");
        assert!(!validate_solution(18, 2, &[6, 0, 1]), "increasing tail");
        assert!(!validate_solution(18, 2, &[6]), "k = 0");
        assert!(validate_solution(10, 1, &[-1, 1]), "negative x0 is allowed");
        assert!(!validate_solution(3, 1, &[-4, 0]), "negative total");
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_solution(18, 2, &[5, 1, 1]).unwrap(), vec![6, 1, 0]);
        assert_eq!(normalize_solution(18, 2, &[6, 1, 1]).unwrap(), vec![6, 1, 1]);
        assert_eq!(normalize_solution(18, 2, &[4, 0]).unwrap(), vec![6, 0]);
        assert!(normalize_solution(18, 2, &[6, 2, 1]).is_err());
    }

    #[test]
    fn max_sum_examples() {
        let r = max_sum_exact(18, 2).unwrap();
        assert_eq!((r.best_sum, r.witness.clone()), (8, vec![6, 1, 1]));
        let r = max_sum_exact(9, 2).unwrap();
        assert_eq!((r.best_sum, r.witness.clone()), (4, vec![3, 1]));
        assert_eq!(max_sum_exact(2, 2).unwrap().best_sum, 0);
        assert_eq!(max_sum_exact(2, 2).unwrap().witness, vec![0, 0]);
        assert_eq!(max_sum_exact(1, 1).unwrap().witness, vec![0, 0]);
        assert!(max_sum_exact(0, 1).is_err());
    }

    /// Enumerates x0 from slightly negative up to its cap and every
    /// non-increasing tail, pruning only on the per-index constraints.
    fn brute_force_max(n: i64, alpha: i64) -> i64 {
        fn prefix_ok(n: i64, x: &[i64]) -> bool {
            let mut prefix = x[0];
            for (i, &xi) in x.iter().enumerate().skip(1) {
                prefix += xi;
                if prefix * (1 + xi) > n - i as i64 {
                    return false;
                }
            }
            true
        }
        fn tails(n: i64, alpha: i64, x: &mut Vec<i64>, best: &mut i64) {
            if validate_solution(n, alpha, x) {
                *best = (*best).max(x.iter().sum());
            }
            if x.len() as i64 > n {
                return;
            }
            let cap = if x.len() == 1 { n } else { x[x.len() - 1] };
            for v in 0..=cap {
                x.push(v);
                if prefix_ok(n, x) {
                    tails(n, alpha, x, best);
                }
                x.pop();
            }
        }
        let mut best = i64::MIN;
        for x0 in -3..=n / (1 + alpha) {
            tails(n, alpha, &mut vec![x0], &mut best);
        }
        best
    }

    #[test]
    fn max_sum_agrees_with_unpruned_enumeration() {
        for n in 1..=14 {
            for alpha in 1..=4 {
                assert_eq!(max_sum_exact(n, alpha).unwrap().best_sum, brute_force_max(n, alpha), "n={n} α={alpha}");
            }
        }
    }

    #[test]
    fn psi_examples() {
        let y = psi_transform(&[6, 1, 1]).unwrap();
        assert_eq!(y, vec![0, 2]);
        assert!(psi_satisfied(18, 6, &y));
        assert_eq!(psi_objective(6, &y), 8);
        assert_eq!(psi_transform(&[4, 0, 0, 0]).unwrap(), vec![3]);
        assert_eq!(psi_transform(&[3, 1]).unwrap(), vec![0, 1]);
        assert_eq!(psi_inverse(6, &[0, 2]), vec![6, 1, 1]);
        assert_eq!(psi_inverse(3, &[0]), vec![3, 0]);
        assert!(psi_transform(&[1, 0, 1]).is_err());
    }
}
