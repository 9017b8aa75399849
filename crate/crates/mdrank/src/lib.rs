//! Evaluation, ranking, and stability analysis for binary diagnostic
//! classifiers that emit a malignancy score per item.
//!
//! The crate ingests score/label submissions, computes the standard
//! challenge measures (average precision, ROC AUC, specificity at 95/98/99%
//! sensitivity, and the 95-100% partial ROC AUC), quantifies how strongly a
//! leaderboard depends on the chosen measure, and ships the Gaussian
//! discriminant family (LDA, QDA, and their diagonal naive-Bayes variants)
//! with both threshold and prior-probability operating-point sweeps.
//!
//! Start with the runnable examples, one per capability:
//!
//! ```text
//! cargo run -p mdrank --example evaluate_submission
//! cargo run -p mdrank --example rank_field
//! cargo run -p mdrank --example crossing_rankings
//! cargo run -p mdrank --example bootstrap_ci
//! cargo run -p mdrank --example rank_stability
//! cargo run -p mdrank --example gda_variants
//! cargo run -p mdrank --example prior_vs_threshold_sweep
//! cargo run -p mdrank --example cross_validation
//! cargo run -p mdrank --example synthesize_cohort
//! cargo run -p mdrank --example roc_plot
//! cargo run -p mdrank --example model_documents
//! ```
//!
//! A thin `mdrank` binary exposes the same pipelines as the `evaluate`,
//! `rank`, `gda`, and `synth` subcommands.

pub mod cli;
pub mod curves;
pub mod data;
pub mod error;
pub mod gda;
pub mod plot;
pub mod ranking;
pub mod report;
pub mod resampling;
pub mod synth;

pub use curves::{
    auc_roc, average_precision, confusion_at_threshold, measure_report, measure_report_with,
    partial_auc, pr_curve, roc_curve, spec_at_sensitivity, ConfusionCounts, Measure,
    MeasureReport, OperatingPoint, PrCurve, RocCurve, SpecConvention,
};
pub use data::{
    join, parse_features, parse_predictions, parse_truth, FeatureDataset, FeatureItem, Label,
    LabeledScore, Parsed, PredictionSet,
};
pub use error::{Error, Result};
pub use gda::{CovarianceSpec, GdaModel, GdaVariant, PriorMode};
pub use ranking::{
    cross_ranking_table, kendall_tau, rank_by_measure, rank_stability, RankAgreement,
    RankStability, RankingTable,
};
pub use resampling::{
    bootstrap_measure, cv_measure, stratified_kfold, FoldAssignment, ResampleSummary,
};
pub use synth::{
    binormal_scores, crossing_pair, gaussian_features, synth_challenge, BinormalSpec,
    GaussianFeatureSpec, SynthChallengeSpec,
};
