//! Exhaustive worst case of each scheduler at tiny sizes, next to the exact
//! game value.
//!
//!     cargo run --release --example minimax_oracle

use lazymatch::bounds::max_sum_exact;
use lazymatch::builders::{minimax_search, DEFAULT_MINIMAX_CAP};
use lazymatch::{Balance, Greedy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=DEFAULT_MINIMAX_CAP {
        for alpha in 1..=2 {
            let value = n as i64 - max_sum_exact(n as i64, alpha as i64)?.best_sum;
            let balance = minimax_search(n, alpha, &Balance, DEFAULT_MINIMAX_CAP)?;
            let greedy = minimax_search(n, alpha, &Greedy, DEFAULT_MINIMAX_CAP)?;
            println!(
                "n = {n} alpha = {alpha}: value {value}, balance {}, greedy {} ({} leaves)",
                balance.value, greedy.value, balance.leaves
            );
            if greedy.value < balance.value {
                let hoods: Vec<_> = greedy.worst_case.moves.iter().map(|m| m.neighbors.clone()).collect();
                println!("    greedy's worst sequence: {hoods:?}");
            }
        }
    }
    Ok(())
}
