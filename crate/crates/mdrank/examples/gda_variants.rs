//! Fit all four Gaussian discriminant variants on one heteroscedastic
//! cohort and compare their measures side by side. Similar classifiers,
//! same features, visibly different high-sensitivity behaviour.
//!
//! ```bash
//! cargo run -p mdrank --example gda_variants
//! ```

use mdrank::gda::Sweep;
use mdrank::report::render_measure_grid;
use mdrank::synth::heteroscedastic_features;
use mdrank::{measure_report, GdaModel, GdaVariant, PriorMode};

fn main() -> mdrank::Result<()> {
    let train = heteroscedastic_features(150, 600, 1.8, 1.5, 4, 11)?;
    let test = heteroscedastic_features(150, 600, 1.8, 1.5, 4, 12)?;

    let reports = GdaVariant::ALL
        .iter()
        .map(|&variant| {
            let model = GdaModel::fit(&train, variant, PriorMode::Empirical)?;
            let scores = model.sweep_scores(&test, variant.label(), Sweep::Prior)?;
            Ok(measure_report(&scores))
        })
        .collect::<mdrank::Result<Vec<_>>>()?;

    println!("{}", render_measure_grid(&reports));
    println!("pooled-covariance variants (LDA/dLDA) share one covariance across");
    println!("classes; the diagonal variants ignore feature correlations.");
    Ok(())
}
