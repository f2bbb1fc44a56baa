//! BALANCE against the adversary for `x = (6, 1, 1)`, `n = 18`, `α = 2`,
//! printing every phase and the surviving groups.
//!
//!     cargo run --example adversary_walkthrough

use lazymatch::bounds::AdversarySolution;
use lazymatch::{has_perfect_matching, run_game_recorded, Adversary, Balance, GameConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let solution = AdversarySolution::new(18, 2, vec![6, 1, 1])?;
    let mut adversary = Adversary::new(solution)?;
    let config = GameConfig::new(2, 18)?;
    let (state, transcript) = run_game_recorded(&mut Balance, &mut adversary, config, 1_000)?;

    for rec in adversary.phase_log() {
        println!(
            "phase {}: vertices {:?}, retired block {:?}, special {:?}",
            rec.phase, rec.vertices, rec.block, rec.special
        );
    }
    println!("leftover servers S = {:?}", adversary.state().leftover);
    println!();
    for (u, mv) in transcript.moves.iter().enumerate() {
        println!("u{u:<2} N = {:?}  ->  m = {:?}", mv.neighbors, state.assignment().group(u));
    }
    let result = state.result();
    println!();
    println!(
        "matched {} of {} (guaranteed at most {}), perfect matching exists: {}",
        result.matched_count,
        result.game_size_n,
        adversary.guaranteed_bound(),
        has_perfect_matching(state.graph())?
    );
    Ok(())
}
