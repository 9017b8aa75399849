//! Bootstrap and stratified cross-validation estimates of the measures.
//!
//! Small positive counts make point estimates of the high-sensitivity
//! measures fragile, so every reported figure can be accompanied by a
//! resampled distribution. Two protocols are provided:
//!
//! * **bootstrap** applies to a fixed submission (no refitting is
//!   possible), resampling its items with replacement;
//! * **cross-validation** applies to classifier experiments over a feature
//!   table, where refitting per fold is possible. Held-out scores are
//!   pooled and the measure computed once on the pool, because a measure
//!   like specificity at 99% sensitivity is degenerate on a fold holding a
//!   handful of positives.
//!
//! Replicate random streams are derived from (master seed, replicate
//! index), so results are bit-identical no matter how many threads run the
//! replicates.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use std::collections::BTreeMap;

use crate::curves::{measure_report, Measure, MeasureReport, SpecConvention};
use crate::curves::ScoreSet;
use crate::data::{FeatureDataset, Label, LabeledScore, PredictionSet};
use crate::error::{Error, Result};
use crate::gda::{GdaModel, GdaVariant, PriorMode, Sweep};

/// Confidence level of every percentile interval in this crate.
pub const CI_LEVEL: f64 = 0.95;

/// How many times a single-class unstratified replicate is redrawn before
/// giving up.
const MAX_REDRAWS: usize = 100;

/// A resampled measure distribution with percentile bounds.
#[derive(Clone, Debug, Serialize)]
pub struct ResampleSummary {
    pub measure: Measure,
    /// The measure on the full, unresampled data.
    pub point_estimate: f64,
    pub replicate_values: Vec<f64>,
    pub mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Confidence level of the percentile interval.
    pub level: f64,
    pub n_replicates: usize,
    pub seed: u64,
}

/// The independent random stream used for one replicate of one
/// experiment: stream `replicate` of the master seed. Exposed so callers
/// can reproduce any single replicate.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Nearest-rank percentile: an order statistic of `sorted`, never an
/// interpolated value.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if p <= 0.0 {
        return sorted[0];
    }
    let rank = (p * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

fn summarize(
    measure: Measure,
    point_estimate: f64,
    replicate_values: Vec<f64>,
    seed: u64,
) -> ResampleSummary {
    let n = replicate_values.len();
    let mean = replicate_values.iter().sum::<f64>() / n as f64;
    let mut sorted = replicate_values.clone();
    sorted.sort_by(f64::total_cmp);
    let alpha = 1.0 - CI_LEVEL;
    ResampleSummary {
        measure,
        point_estimate,
        mean,
        ci_lo: percentile(&sorted, alpha / 2.0),
        ci_hi: percentile(&sorted, 1.0 - alpha / 2.0),
        level: CI_LEVEL,
        n_replicates: n,
        replicate_values,
        seed,
    }
}

/// Draws one with-replacement resample of the items, preserving the
/// positive and negative counts exactly.
pub fn stratified_resample(ps: &PredictionSet, rng: &mut impl Rng) -> Vec<(f64, bool)> {
    let (pos, neg): (Vec<f64>, Vec<f64>) = {
        let mut pos = Vec::with_capacity(ps.n_pos());
        let mut neg = Vec::with_capacity(ps.n_neg());
        for item in ps.items() {
            if item.label.is_malignant() {
                pos.push(item.score);
            } else {
                neg.push(item.score);
            }
        }
        (pos, neg)
    };
    let mut drawn = Vec::with_capacity(ps.len());
    for _ in 0..pos.len() {
        drawn.push((pos[rng.random_range(0..pos.len())], true));
    }
    for _ in 0..neg.len() {
        drawn.push((neg[rng.random_range(0..neg.len())], false));
    }
    drawn
}

fn unstratified_resample(ps: &PredictionSet, rng: &mut impl Rng) -> Result<Vec<(f64, bool)>> {
    let items: Vec<(f64, bool)> = ps
        .items()
        .iter()
        .map(|i| (i.score, i.label.is_malignant()))
        .collect();
    for _ in 0..MAX_REDRAWS {
        let drawn: Vec<(f64, bool)> = (0..items.len())
            .map(|_| items[rng.random_range(0..items.len())])
            .collect();
        let n_pos = drawn.iter().filter(|(_, m)| *m).count();
        if n_pos > 0 && n_pos < drawn.len() {
            return Ok(drawn);
        }
    }
    Err(Error::ResampleExhausted {
        retries: MAX_REDRAWS,
    })
}

/// Bootstrap distribution of one measure over a fixed prediction set.
///
/// Stratified resampling redraws within each class so every replicate keeps
/// the original class counts; unstratified resampling redraws from the
/// pooled items and retries (boundedly) on single-class replicates.
pub fn bootstrap_measure(
    ps: &PredictionSet,
    measure: Measure,
    n_replicates: usize,
    seed: u64,
    stratified: bool,
) -> Result<ResampleSummary> {
    bootstrap_measure_with(ps, measure, n_replicates, seed, stratified, SpecConvention::AtLeast)
}

/// [`bootstrap_measure`] with an explicit specificity convention.
pub fn bootstrap_measure_with(
    ps: &PredictionSet,
    measure: Measure,
    n_replicates: usize,
    seed: u64,
    stratified: bool,
    convention: SpecConvention,
) -> Result<ResampleSummary> {
    if n_replicates == 0 {
        return Err(Error::invalid("n_replicates must be >= 1"));
    }
    let point_estimate = measure.evaluate_with(ps, convention);
    let values: Result<Vec<f64>> = (0..n_replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            let drawn = if stratified {
                stratified_resample(ps, &mut rng)
            } else {
                unstratified_resample(ps, &mut rng)?
            };
            let set = ScoreSet::from_pairs(drawn)?;
            Ok(measure.eval_scores(&set, convention))
        })
        .collect();
    Ok(summarize(measure, point_estimate, values?, seed))
}

/// Partition of a feature dataset into k folds, stratified by class.
#[derive(Clone, Debug)]
pub struct FoldAssignment {
    pub k: usize,
    /// Fold index per item id.
    pub fold_of: BTreeMap<String, usize>,
    pub stratified: bool,
}

impl FoldAssignment {
    /// Item indices of each fold, in dataset order.
    pub fn fold_indices(&self, ds: &FeatureDataset) -> Vec<Vec<usize>> {
        let mut folds = vec![Vec::new(); self.k];
        for (idx, item) in ds.items().iter().enumerate() {
            folds[self.fold_of[&item.item_id]].push(idx);
        }
        folds
    }
}

/// Assigns items to k stratified folds: within each class the shuffled
/// items are dealt round-robin, so per-fold class counts differ by at most
/// one. Deterministic in `seed`.
pub fn stratified_kfold(ds: &FeatureDataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::invalid(format!("k must be >= 2, got {k}")));
    }
    for label in [Label::Benign, Label::Malignant] {
        let size = ds.count(label);
        if size < k {
            return Err(Error::ClassTooSmall {
                label,
                size,
                needed: k,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = BTreeMap::new();
    for label in [Label::Benign, Label::Malignant] {
        let mut ids: Vec<&str> = ds
            .items()
            .iter()
            .filter(|i| i.label == label)
            .map(|i| i.item_id.as_str())
            .collect();
        ids.shuffle(&mut rng);
        for (pos, id) in ids.iter().enumerate() {
            fold_of.insert(id.to_string(), pos % k);
        }
    }
    Ok(FoldAssignment {
        k,
        fold_of,
        stratified: true,
    })
}

/// Pooled cross-validation scores: per fold, the classifier is fitted on
/// the other folds and the held-out items are scored with the posterior at
/// the model prior. Returns the pooled prediction set over all held-out
/// items plus the per-fold sets.
pub fn cv_scores(
    ds: &FeatureDataset,
    variant: GdaVariant,
    k: usize,
    seed: u64,
) -> Result<(PredictionSet, Vec<PredictionSet>)> {
    cv_scores_with(ds, variant, k, seed, Sweep::Threshold)
}

/// [`cv_scores`] with an explicit sweep: held-out items are scored in the
/// sweep's score space (posterior, or log-likelihood ratio for the prior
/// sweep) before pooling across folds.
pub fn cv_scores_with(
    ds: &FeatureDataset,
    variant: GdaVariant,
    k: usize,
    seed: u64,
    sweep: Sweep,
) -> Result<(PredictionSet, Vec<PredictionSet>)> {
    let assignment = stratified_kfold(ds, k, seed)?;
    let folds = assignment.fold_indices(ds);
    let mut fold_sets = Vec::with_capacity(k);
    let mut pooled: Vec<LabeledScore> = Vec::with_capacity(ds.len());
    for (fold, held_out) in folds.iter().enumerate() {
        let train_indices: Vec<usize> = (0..ds.len()).filter(|i| !held_out.contains(i)).collect();
        let train = ds.subset(&train_indices)?;
        let wrap = |e: Error| Error::FoldFit {
            fold,
            source: Box::new(e),
        };
        let model = GdaModel::fit(&train, variant, PriorMode::Empirical).map_err(wrap)?;
        let mut fold_items = Vec::with_capacity(held_out.len());
        for &idx in held_out {
            let item = &ds.items()[idx];
            let score = match sweep {
                Sweep::Threshold => model.posterior(&item.features, None),
                Sweep::Prior => model.log_likelihood_ratio(&item.features),
            }
            .map_err(wrap)?;
            fold_items.push(LabeledScore {
                item_id: item.item_id.clone(),
                score,
                label: item.label,
            });
        }
        pooled.extend(fold_items.iter().cloned());
        fold_sets.push(PredictionSet::new(format!("fold-{fold}"), fold_items)?);
    }
    let pooled = PredictionSet::new(format!("cv-{}", variant.name()), pooled)?;
    Ok((pooled, fold_sets))
}

/// Full cross-validated evaluation of one variant: the measure report on
/// the pooled held-out scores plus a per-measure dispersion summary over
/// the folds.
pub fn cv_evaluation(
    ds: &FeatureDataset,
    variant: GdaVariant,
    k: usize,
    seed: u64,
    sweep: Sweep,
    convention: SpecConvention,
) -> Result<(MeasureReport, Vec<ResampleSummary>)> {
    let (pooled, fold_sets) = cv_scores_with(ds, variant, k, seed, sweep)?;
    let report = crate::curves::measure_report_with(&pooled, convention);
    let summaries = Measure::ALL
        .iter()
        .map(|&measure| {
            let fold_values: Vec<f64> = fold_sets
                .iter()
                .map(|set| measure.evaluate_with(set, convention))
                .collect();
            summarize(measure, measure.evaluate_with(&pooled, convention), fold_values, seed)
        })
        .collect();
    Ok((report, summaries))
}

/// Cross-validated measure: the point estimate is the measure on the pooled
/// held-out scores; `replicate_values` carries the per-fold measures for
/// dispersion only.
pub fn cv_measure(
    ds: &FeatureDataset,
    variant: GdaVariant,
    k: usize,
    measure: Measure,
    seed: u64,
) -> Result<ResampleSummary> {
    let (pooled, fold_sets) = cv_scores(ds, variant, k, seed)?;
    let point_estimate = measure.evaluate(&pooled);
    let fold_values: Vec<f64> = fold_sets.iter().map(|set| measure.evaluate(set)).collect();
    Ok(summarize(measure, point_estimate, fold_values, seed))
}

/// Measure reports for the pooled cross-validation scores of one variant.
pub fn cv_measure_report(
    ds: &FeatureDataset,
    variant: GdaVariant,
    k: usize,
    seed: u64,
) -> Result<MeasureReport> {
    let (pooled, _) = cv_scores(ds, variant, k, seed)?;
    Ok(measure_report(&pooled))
}
