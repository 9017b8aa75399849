//! Stratified k-fold cross-validation of a discriminant classifier. The
//! held-out scores of all folds are pooled and each measure is computed
//! once on the pool; per-fold values are kept for dispersion only, because
//! specificity at 99% sensitivity is meaningless on a fold holding a
//! handful of positives.
//!
//! ```bash
//! cargo run -p mdrank --example cross_validation
//! ```

use mdrank::curves::Measure;
use mdrank::synth::heteroscedastic_features;
use mdrank::{cv_measure, stratified_kfold, GdaVariant};

fn main() -> mdrank::Result<()> {
    let data = heteroscedastic_features(100, 400, 1.6, 1.3, 3, 21)?;

    let folds = stratified_kfold(&data, 5, 3)?;
    let sizes = folds.fold_indices(&data);
    println!(
        "5 stratified folds over {} items; fold sizes: {:?}\n",
        data.len(),
        sizes.iter().map(Vec::len).collect::<Vec<_>>()
    );

    println!(
        "{:<18} {:>8}  {:>24}",
        "measure", "pooled", "per-fold values"
    );
    for measure in [Measure::AucRoc, Measure::SpecAt95, Measure::SpecAt98] {
        let summary = cv_measure(&data, GdaVariant::Qda, 5, measure, 3)?;
        let folds: Vec<String> = summary
            .replicate_values
            .iter()
            .map(|v| format!("{v:.2}"))
            .collect();
        println!(
            "{:<18} {:>8.3}  {:>24}",
            measure.label(),
            summary.point_estimate,
            folds.join(" ")
        );
    }
    Ok(())
}
