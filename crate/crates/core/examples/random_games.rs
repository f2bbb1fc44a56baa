//! Average ratio of each scheduler on random graphs with a planted perfect
//! matching, across edge densities. Games run in parallel.
//!
//!     cargo run --release --example random_games -- 40 200

use lazymatch::builders::RandomPlantedBuilder;
use lazymatch::schedulers::scheduler_by_name;
use lazymatch::{run_game, GameConfig};
use rayon::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(30), |s| s.parse())?;
    let games: u64 = args.next().map_or(Ok(100), |s| s.parse())?;
    let alpha = 2;

    println!("n = {n}, alpha = {alpha}, {games} games per cell");
    println!("{:>6} {:>8} {:>8} {:>8}", "p", "balance", "greedy", "random");
    for p in [0.0, 0.05, 0.1, 0.2, 0.5] {
        let mut means = Vec::new();
        for name in ["balance", "greedy", "random"] {
            let total: f64 = (0..games)
                .into_par_iter()
                .map(|seed| {
                    let mut sched = scheduler_by_name(name, seed).expect("known name");
                    let mut builder = RandomPlantedBuilder::new(seed, n, p).expect("valid p");
                    let cfg = GameConfig::new(alpha, n).expect("valid config");
                    run_game(&mut sched, &mut builder, cfg, n).expect("rule-abiding").0.ratio()
                })
                .sum();
            means.push(total / games as f64);
        }
        println!("{p:>6.2} {:>8.4} {:>8.4} {:>8.4}", means[0], means[1], means[2]);
    }
    Ok(())
}
