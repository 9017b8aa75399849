//! Parse a submission and a truth table, join them, and print every
//! measure: the two global ones, the three high-sensitivity
//! specificities, and the 95-100% partial ROC AUC.
//!
//! ```bash
//! cargo run -p mdrank --example evaluate_submission
//! ```

use mdrank::report::render_measure_grid;
use mdrank::{join, measure_report, parse_predictions, parse_truth, spec_at_sensitivity};
use mdrank::SpecConvention;

fn main() -> mdrank::Result<()> {
    let predictions = "\
image_id,score
lesion-01,0.91
lesion-02,0.84
lesion-03,0.77
lesion-04,0.12
lesion-05,0.68
lesion-06,0.55
lesion-07,0.43
lesion-08,0.30
lesion-09,0.22
lesion-10,0.05
";
    let truth = "\
image_id,label
lesion-01,malignant
lesion-02,malignant
lesion-03,malignant
lesion-04,malignant
lesion-05,benign
lesion-06,benign
lesion-07,benign
lesion-08,benign
lesion-09,benign
lesion-10,benign
";

    let parsed = parse_predictions(predictions)?;
    let labels = parse_truth(truth)?;
    let joined = join(&parsed.value, &labels, "demo-system", false)?;
    for warning in parsed.warnings.iter().chain(&joined.warnings) {
        eprintln!("warning: {warning}");
    }
    let ps = joined.value;

    println!("{} items: {} malignant, {} benign\n", ps.len(), ps.n_pos(), ps.n_neg());
    let report = measure_report(&ps);
    println!("{}", render_measure_grid(std::slice::from_ref(&report)));

    // The two specificity conventions disagree when a target falls between
    // achievable sensitivities (here 0.95 needs 4 of 4 positives).
    for target in [0.95, 0.98, 0.99] {
        let at_least = spec_at_sensitivity(&ps, target, SpecConvention::AtLeast)?;
        let interp = spec_at_sensitivity(&ps, target, SpecConvention::Interpolate)?;
        println!("spec @ SE>={target}: at-least {at_least:.3}, interpolate {interp:.3}");
    }
    Ok(())
}
