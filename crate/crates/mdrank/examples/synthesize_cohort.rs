//! Generate a binormal score cohort with known analytic AUC, write it in
//! the submission/truth file formats, and read it back.
//!
//! ```bash
//! cargo run -p mdrank --example synthesize_cohort
//! ```

use mdrank::{auc_roc, binormal_scores, join, parse_predictions, parse_truth, BinormalSpec};

fn main() -> mdrank::Result<()> {
    let spec = BinormalSpec {
        n_pos: 75,
        n_neg: 304,
        mu: 1.19,
        sigma: 1.0,
        seed: 42,
    };
    let cohort = binormal_scores(&spec)?;
    println!(
        "cohort: {} malignant, {} benign",
        cohort.n_pos(),
        cohort.n_neg()
    );
    println!("analytic AUC  {:.4}", spec.analytic_auc());
    println!("empirical AUC {:.4}", auc_roc(&cohort));

    let dir = std::env::temp_dir().join("mdrank-synth-example");
    std::fs::create_dir_all(&dir).ok();
    let predictions_path = dir.join("cohort.predictions.csv");
    let truth_path = dir.join("cohort.truth.csv");
    std::fs::write(&predictions_path, cohort.to_predictions_csv()).unwrap();
    std::fs::write(&truth_path, cohort.to_truth_csv()).unwrap();
    println!("\nwrote {}", predictions_path.display());
    println!("wrote {}", truth_path.display());

    // Round-trip: the files parse back into the identical set.
    let parsed = parse_predictions(&std::fs::read_to_string(&predictions_path).unwrap())?;
    let truth = parse_truth(&std::fs::read_to_string(&truth_path).unwrap())?;
    let rebuilt = join(&parsed.value, &truth, "binormal", false)?.value;
    assert_eq!(rebuilt, cohort);
    println!("round-trip parse: identical");
    Ok(())
}
