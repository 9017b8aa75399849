//! Rank a synthetic field of ten systems under every measure and show how
//! strongly the leaderboard depends on the chosen measure.
//!
//! ```bash
//! cargo run -p mdrank --example rank_field
//! ```

use mdrank::curves::Measure;
use mdrank::ranking::kendall_tau_with_flips;
use mdrank::report::{render_ranking_grid, sig6};
use mdrank::synth::{synth_challenge, SynthChallengeSpec};
use mdrank::{cross_ranking_table, measure_report};

fn main() -> mdrank::Result<()> {
    // Ten systems of comparable overall strength but different score
    // spreads; unequal sigmas make their ROC curves cross.
    let systems = (0..10)
        .map(|i| {
            let mu = 1.0 + 0.08 * i as f64;
            let sigma = 0.6 + 0.22 * i as f64;
            (format!("sys-{i:02}"), mu, sigma)
        })
        .collect();
    let field = synth_challenge(&SynthChallengeSpec {
        n_pos: 75,
        n_neg: 304,
        systems,
        seed: 2024,
    })?;

    let reports: Vec<_> = field.iter().map(measure_report).collect();
    let table = cross_ranking_table(&reports, &Measure::ALL)?;
    println!("{}", render_ranking_grid(&table));

    let ap_idx = 0;
    println!("kendall tau of each ranking against the average-precision ranking:");
    for (idx, measure) in table.measures.iter().enumerate().skip(1) {
        let (tau, flips) =
            kendall_tau_with_flips(&table.column_ranks(ap_idx), &table.column_ranks(idx))?;
        println!("  {:<18} tau {:+.3} ({flips} flipped pairs)", measure.label(), sig6(tau));
    }
    Ok(())
}
