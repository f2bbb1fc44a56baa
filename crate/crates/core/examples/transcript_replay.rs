//! Saves a game as JSON, loads it back, replays it, and shows that a
//! tampered transcript is rejected.
//!
//!     cargo run --example transcript_replay

use lazymatch::builders::RandomPlantedBuilder;
use lazymatch::{replay, run_game_recorded, Balance, GameConfig, GameTranscript};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut builder = RandomPlantedBuilder::new(7, 8, 0.3)?;
    let (state, transcript) = run_game_recorded(&mut Balance, &mut builder, GameConfig::new(2, 8)?, 100)?;

    let path = std::env::temp_dir().join("lazymatch-transcript.json");
    std::fs::write(&path, transcript.to_json())?;
    println!("wrote {}", path.display());

    let loaded = GameTranscript::from_json(&std::fs::read_to_string(&path)?)?;
    let replayed = replay(&loaded)?;
    assert_eq!(replayed, state.result());
    println!("replayed: matched {} of {}", replayed.matched_count, replayed.game_size_n);

    let mut tampered = loaded.clone();
    if let Some(first) = tampered.decisions.first_mut() {
        first.push(usize::MAX);
    }
    match replay(&tampered) {
        Ok(_) => println!("tampered transcript unexpectedly accepted"),
        Err(e) => println!("tampered transcript rejected: {e}"),
    }
    Ok(())
}
