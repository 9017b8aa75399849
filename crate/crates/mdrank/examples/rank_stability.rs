//! Paired-bootstrap rank stability: how often does one system outrank the
//! other when the same item resample is applied to both? The crossing
//! fixture flips its dominant system between measures.
//!
//! ```bash
//! cargo run -p mdrank --example rank_stability
//! ```

use mdrank::curves::Measure;
use mdrank::{crossing_pair, rank_stability};

fn main() -> mdrank::Result<()> {
    let (s1, s2) = crossing_pair();
    let systems = [s1, s2];

    println!("fraction of 2000 paired replicates where each system outranks the other\n");
    println!("{:<18} {:>10} {:>10} {:>8}", "measure", "s1 wins", "s2 wins", "ties");
    for measure in [
        Measure::AveragePrecision,
        Measure::AucRoc,
        Measure::SpecAt95,
        Measure::SpecAt98,
        Measure::SpecAt99,
        Measure::PartialAuc95,
    ] {
        let stability = rank_stability(&systems, measure, 2000, 99)?;
        println!(
            "{:<18} {:>10.3} {:>10.3} {:>8.3}",
            measure.label(),
            stability.win_fraction(0, 1),
            stability.win_fraction(1, 0),
            stability.tie_fraction(0, 1)
        );
    }
    println!("\na leaderboard built on one resample would flip depending on the measure.");
    Ok(())
}
