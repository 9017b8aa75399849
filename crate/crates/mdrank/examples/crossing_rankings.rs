//! The built-in two-system fixture whose ranking reverses between
//! measures: S1 wins under average precision, S2 under every
//! high-sensitivity measure.
//!
//! ```bash
//! cargo run -p mdrank --example crossing_rankings
//! ```

use mdrank::curves::Measure;
use mdrank::report::render_ranking_grid;
use mdrank::{cross_ranking_table, crossing_pair, kendall_tau, measure_report};

fn main() -> mdrank::Result<()> {
    let (s1, s2) = crossing_pair();
    println!(
        "shared items: {} ({} malignant, {} benign)\n",
        s1.len(),
        s1.n_pos(),
        s1.n_neg()
    );

    let reports = vec![measure_report(&s1), measure_report(&s2)];
    let table = cross_ranking_table(&reports, &Measure::ALL)?;
    println!("{}", render_ranking_grid(&table));

    let ap = table.column_ranks(0);
    let spec98 = table.column_ranks(3);
    println!(
        "kendall tau between the AP ranking and the SE=98% ranking: {:+.0}",
        kendall_tau(&ap, &spec98)?
    );
    println!("one measure's winner is the other's loser: a rank reversal.");
    Ok(())
}
