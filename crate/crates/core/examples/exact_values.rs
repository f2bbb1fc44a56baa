//! Exact game values from the integer system with their maximizing vectors,
//! and the count transform of each witness.
//!
//!     cargo run --example exact_values -- 40 2

use lazymatch::bounds::{max_sum_exact, psi_objective, psi_satisfied, psi_transform};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let max_n: i64 = args.next().map_or(Ok(30), |s| s.parse())?;
    let alpha: i64 = args.next().map_or(Ok(2), |s| s.parse())?;
    for n in 1..=max_n {
        let best = max_sum_exact(n, alpha)?;
        let x0 = best.witness[0];
        let y = psi_transform(&best.witness)?;
        assert!(psi_satisfied(n, x0, &y));
        assert_eq!(psi_objective(x0, &y), best.best_sum);
        println!(
            "n = {n:>3}: value {:>3} = {n} - {:<3} witness {:?}  counts {:?}",
            n - best.best_sum,
            best.best_sum,
            best.witness,
            y
        );
    }
    Ok(())
}
