#![allow(dead_code)] // each test target compiles its own copy and uses a subset

//! Independent oracles shared by the property and acceptance suites.
//! Everything here recomputes from first principles and never calls the
//! implementation path it is used to check.

use mdrank::{Label, LabeledScore, PredictionSet};

/// Builds a prediction set from (score, is_malignant) pairs.
pub fn set_from_pairs(pairs: &[(f64, bool)], system_id: &str) -> PredictionSet {
    let items = pairs
        .iter()
        .enumerate()
        .map(|(i, &(score, malignant))| LabeledScore {
            item_id: format!("i{i:04}"),
            score,
            label: if malignant {
                Label::Malignant
            } else {
                Label::Benign
            },
        })
        .collect();
    PredictionSet::new(system_id, items).expect("both classes present")
}

/// Probability that a random positive outscores a random negative, with
/// half credit for ties, by direct enumeration of all pairs.
pub fn pairwise_auc_oracle(pairs: &[(f64, bool)]) -> f64 {
    let pos: Vec<f64> = pairs.iter().filter(|p| p.1).map(|p| p.0).collect();
    let neg: Vec<f64> = pairs.iter().filter(|p| !p.1).map(|p| p.0).collect();
    let mut credit = 0.0;
    for &p in &pos {
        for &n in &neg {
            if p > n {
                credit += 1.0;
            } else if p == n {
                credit += 0.5;
            }
        }
    }
    credit / (pos.len() * neg.len()) as f64
}

/// Step-sum average precision recomputed from scratch: at every distinct
/// threshold (descending) the confusion counts are re-derived by a full
/// pass over the items.
pub fn step_sum_ap_oracle(pairs: &[(f64, bool)]) -> f64 {
    let mut thresholds: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    thresholds.reverse();
    let n_pos = pairs.iter().filter(|p| p.1).count();

    let mut ap = 0.0;
    let mut recall_prev = 0.0;
    for &t in &thresholds {
        let tp = pairs.iter().filter(|(s, m)| *s >= t && *m).count();
        let fp = pairs.iter().filter(|(s, m)| *s >= t && !*m).count();
        let recall = tp as f64 / n_pos as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        ap += (recall - recall_prev) * precision;
        recall_prev = recall;
    }
    ap
}

/// Specificity at a sensitivity target under the fewest-predicted-positives
/// reading, recomputed from sorted score lists: the threshold is the k-th
/// largest positive score for the smallest k with k/n_pos >= target, and
/// negatives at or above it count as false positives.
pub fn spec_at_oracle(pairs: &[(f64, bool)], target: f64) -> f64 {
    let mut pos: Vec<f64> = pairs.iter().filter(|p| p.1).map(|p| p.0).collect();
    let neg: Vec<f64> = pairs.iter().filter(|p| !p.1).map(|p| p.0).collect();
    pos.sort_by(f64::total_cmp);
    pos.reverse();
    let n_pos = pos.len();
    let mut k = 1usize;
    while (k as f64 / n_pos as f64) < target {
        k += 1;
    }
    let threshold = pos[k - 1];
    let tn = neg.iter().filter(|&&s| s < threshold).count();
    tn as f64 / neg.len() as f64
}
