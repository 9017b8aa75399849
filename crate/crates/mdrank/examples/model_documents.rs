//! Serialize a fitted discriminant model to its self-describing text
//! document and restore it with bit-identical behaviour.
//!
//! ```bash
//! cargo run -p mdrank --example model_documents
//! ```

use mdrank::synth::heteroscedastic_features;
use mdrank::{GdaModel, GdaVariant, PriorMode};

fn main() -> mdrank::Result<()> {
    let train = heteroscedastic_features(80, 240, 1.5, 1.3, 2, 31)?;
    let model = GdaModel::fit(&train, GdaVariant::Qda, PriorMode::Empirical)?;

    let document = model.to_text();
    println!("{document}");

    let restored = GdaModel::from_text(&document)?;
    let probe = [0.4, -0.7];
    let original = model.posterior(&probe, None)?;
    let reloaded = restored.posterior(&probe, None)?;
    assert_eq!(original, reloaded);
    println!("posterior at {probe:?}: {original} (identical after reload)");
    Ok(())
}
