//! How far below the exact game value each scheduler falls when facing the
//! maximal adversary.
//!
//!     cargo run --example balance_vs_greedy -- 30 3

use lazymatch::bounds::{max_sum_exact, AdversarySolution};
use lazymatch::schedulers::NamedScheduler;
use lazymatch::{run_game, Adversary, Balance, GameConfig, Greedy, Noop, RandomScheduler};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let max_n: usize = args.next().map_or(Ok(24), |s| s.parse())?;
    let alpha: usize = args.next().map_or(Ok(2), |s| s.parse())?;

    println!("{:>4} {:>5} {:>8} {:>8} {:>6} {:>7}", "n", "value", "balance", "greedy", "noop", "random");
    for n in 2..=max_n {
        let best = max_sum_exact(n as i64, alpha as i64)?;
        let value = n as i64 - best.best_sum;
        let mut cells = Vec::new();
        for mut sched in [
            NamedScheduler::Balance(Balance),
            NamedScheduler::Greedy(Greedy),
            NamedScheduler::Noop(Noop),
            NamedScheduler::Random(RandomScheduler::new(n as u64)),
        ] {
            let sol = AdversarySolution::new(n as i64, alpha as i64, best.witness.clone())?;
            let mut adv = Adversary::new(sol)?;
            let (res, _) = run_game(&mut sched, &mut adv, GameConfig::new(alpha, n)?, 10 * n)?;
            assert!(res.matched_count as i64 <= value);
            cells.push(res.matched_count);
        }
        println!("{n:>4} {value:>5} {:>8} {:>8} {:>6} {:>7}", cells[0], cells[1], cells[2], cells[3]);
    }
    Ok(())
}
