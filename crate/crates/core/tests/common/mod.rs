#![allow(dead_code)]

use lazymatch::bounds::validate_solution;
use lazymatch::schedulers::NamedScheduler;
use lazymatch::{Balance, Greedy, Noop, RandomScheduler};
use rand::Rng;

/// A random feasible `(n, alpha, x)` with `2 <= n <= max_n`,
/// `1 <= alpha <= max_alpha` and `k >= 1`. `x0` is occasionally negative.
pub fn random_feasible<R: Rng>(rng: &mut R, max_n: i64, max_alpha: i64) -> (i64, i64, Vec<i64>) {
    loop {
        let n = rng.gen_range(2..=max_n);
        let alpha = rng.gen_range(1..=max_alpha);
        let x0 = rng.gen_range(-2..=n / (1 + alpha));
        let mut x = vec![x0];
        let mut prefix = x0;
        let mut prev = i64::MAX;
        for i in 1..n {
            if i > 1 && !rng.gen_bool(0.75) {
                break;
            }
            let cap = (0..=prev.min(n))
                .take_while(|&v| (prefix + v) * (1 + v) <= n - i)
                .last();
            let Some(cap) = cap else { break };
            let v = rng.gen_range(0..=cap);
            x.push(v);
            prefix += v;
            prev = v;
        }
        if validate_solution(n, alpha, &x) {
            return (n, alpha, x);
        }
    }
}

/// BALANCE, greedy, noop and a seeded random scheduler.
pub fn all_schedulers(seed: u64) -> Vec<NamedScheduler> {
    vec![
        NamedScheduler::Balance(Balance),
        NamedScheduler::Greedy(Greedy),
        NamedScheduler::Noop(Noop),
        NamedScheduler::Random(RandomScheduler::new(seed)),
    ]
}
