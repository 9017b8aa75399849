//! ROC and precision-recall curves and the accuracy measures computed
//! from them.
//!
//! Conventions, fixed across the whole crate:
//!
//! * the decision rule is `score >= threshold` predicts malignant, so every
//!   item is reachable as a positive at its own score;
//! * tied scores are grouped at a single operating point, which removes any
//!   dependence on input order and makes the trapezoidal ROC area equal the
//!   half-credit pairwise probability;
//! * average precision is the non-interpolated step sum over tie-grouped
//!   thresholds in decreasing-threshold order;
//! * specificity at a sensitivity target defaults to the `at-least`
//!   convention (the operating point with the fewest predicted positives
//!   whose sensitivity reaches the target). A linear `interpolate`
//!   convention is provided for comparison; see [`spec_at_sensitivity`].

use std::fmt;

use serde::Serialize;

use crate::data::PredictionSet;
use crate::error::{Error, Result};

/// Decision counts at one threshold; `malignant` is the positive class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

impl ConfusionCounts {
    /// TP / (TP + FN), the fraction of malignant items detected.
    pub fn sensitivity(&self) -> f64 {
        self.true_pos as f64 / (self.true_pos + self.false_neg) as f64
    }

    /// TN / (TN + FP), the fraction of benign items passed.
    pub fn specificity(&self) -> f64 {
        self.true_neg as f64 / (self.true_neg + self.false_pos) as f64
    }

    /// TP / (TP + FP); `None` when nothing is predicted positive.
    pub fn precision(&self) -> Option<f64> {
        let denom = self.true_pos + self.false_pos;
        (denom > 0).then(|| self.true_pos as f64 / denom as f64)
    }

    pub fn predicted_positive(&self) -> usize {
        self.true_pos + self.false_pos
    }
}

/// One (threshold, confusion) pair on a ROC curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatingPoint {
    /// Score cut; `f64::INFINITY` marks the virtual predict-nothing point.
    pub threshold: f64,
    pub counts: ConfusionCounts,
}

impl OperatingPoint {
    pub fn sensitivity(&self) -> f64 {
        self.counts.sensitivity()
    }

    pub fn specificity(&self) -> f64 {
        self.counts.specificity()
    }

    pub fn precision(&self) -> Option<f64> {
        self.counts.precision()
    }
}

/// Operating points ordered by decreasing threshold, beginning at the
/// virtual (SE = 0, SP = 1) point and ending at the all-positive
/// (SE = 1, SP = 0) point, one point per distinct score.
#[derive(Clone, Debug)]
pub struct RocCurve {
    points: Vec<OperatingPoint>,
}

impl RocCurve {
    pub fn points(&self) -> &[OperatingPoint] {
        &self.points
    }

    /// Trapezoidal area in (1 - specificity, sensitivity) space.
    pub fn auc(&self) -> f64 {
        let mut area = 0.0;
        for pair in self.points.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let n_neg = (a.counts.false_pos + a.counts.true_neg) as f64;
            let x0 = a.counts.false_pos as f64 / n_neg;
            let x1 = b.counts.false_pos as f64 / n_neg;
            area += (x1 - x0) * (a.sensitivity() + b.sensitivity()) / 2.0;
        }
        area
    }

    /// Distinct sensitivity levels with the best specificity achieved at
    /// each, in increasing sensitivity order.
    fn sensitivity_levels(&self) -> Vec<(f64, f64)> {
        let mut levels: Vec<(f64, f64)> = Vec::new();
        let mut last_tp = usize::MAX;
        for p in &self.points {
            if p.counts.true_pos != last_tp {
                levels.push((p.sensitivity(), p.specificity()));
                last_tp = p.counts.true_pos;
            }
        }
        levels
    }
}

/// One (recall, precision) point of a precision-recall curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrPoint {
    pub threshold: f64,
    pub recall: f64,
    pub precision: f64,
}

/// Precision-recall points ordered by decreasing threshold. There is no
/// virtual zero-recall point: precision is undefined when nothing is
/// predicted positive and the step-sum area never needs it.
#[derive(Clone, Debug)]
pub struct PrCurve {
    points: Vec<PrPoint>,
}

impl PrCurve {
    pub fn points(&self) -> &[PrPoint] {
        &self.points
    }
}

/// How to read specificity at a sensitivity target off a finite curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecConvention {
    /// Specificity of the operating point with the fewest predicted
    /// positives whose sensitivity is >= the target. Unambiguous and
    /// conservative; the default everywhere.
    AtLeast,
    /// Linear interpolation of specificity between the two adjacent curve
    /// points bracketing the target sensitivity.
    Interpolate,
}

impl SpecConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecConvention::AtLeast => "at-least",
            SpecConvention::Interpolate => "interpolate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "at-least" => Some(SpecConvention::AtLeast),
            "interpolate" => Some(SpecConvention::Interpolate),
            _ => None,
        }
    }
}

impl fmt::Display for SpecConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Internal score/label view shared by the public operations and the
/// resampling paths, which work on drawn (score, label) multisets rather
/// than validated prediction sets.
#[derive(Clone, Debug)]
pub(crate) struct ScoreSet {
    /// (score, is_malignant), sorted by decreasing score.
    pairs: Vec<(f64, bool)>,
    n_pos: usize,
    n_neg: usize,
}

impl ScoreSet {
    pub(crate) fn from_prediction_set(ps: &PredictionSet) -> Self {
        let pairs = ps
            .items()
            .iter()
            .map(|item| (item.score, item.label.is_malignant()))
            .collect();
        Self::from_counted(pairs, ps.n_pos(), ps.n_neg())
    }

    /// `pairs` must contain at least one item of each class.
    pub(crate) fn from_pairs(pairs: Vec<(f64, bool)>) -> Result<Self> {
        let n_pos = pairs.iter().filter(|(_, m)| *m).count();
        let n_neg = pairs.len() - n_pos;
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::invalid("both classes required"));
        }
        Ok(Self::from_counted(pairs, n_pos, n_neg))
    }

    fn from_counted(mut pairs: Vec<(f64, bool)>, n_pos: usize, n_neg: usize) -> Self {
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        ScoreSet {
            pairs,
            n_pos,
            n_neg,
        }
    }

    /// Cumulative (threshold, tp, fp) per distinct score, decreasing.
    fn grouped(&self) -> Vec<(f64, usize, usize)> {
        let mut groups: Vec<(f64, usize, usize)> = Vec::new();
        let mut tp = 0usize;
        let mut fp = 0usize;
        let mut i = 0usize;
        while i < self.pairs.len() {
            let threshold = self.pairs[i].0;
            while i < self.pairs.len() && self.pairs[i].0 == threshold {
                if self.pairs[i].1 {
                    tp += 1;
                } else {
                    fp += 1;
                }
                i += 1;
            }
            groups.push((threshold, tp, fp));
        }
        groups
    }

    fn counts(&self, tp: usize, fp: usize) -> ConfusionCounts {
        ConfusionCounts {
            true_pos: tp,
            false_pos: fp,
            true_neg: self.n_neg - fp,
            false_neg: self.n_pos - tp,
        }
    }

    pub(crate) fn roc_curve(&self) -> RocCurve {
        let groups = self.grouped();
        let mut points = Vec::with_capacity(groups.len() + 1);
        points.push(OperatingPoint {
            threshold: f64::INFINITY,
            counts: self.counts(0, 0),
        });
        for (threshold, tp, fp) in groups {
            points.push(OperatingPoint {
                threshold,
                counts: self.counts(tp, fp),
            });
        }
        RocCurve { points }
    }

    pub(crate) fn pr_curve(&self) -> PrCurve {
        let points = self
            .grouped()
            .into_iter()
            .map(|(threshold, tp, fp)| PrPoint {
                threshold,
                recall: tp as f64 / self.n_pos as f64,
                precision: tp as f64 / (tp + fp) as f64,
            })
            .collect();
        PrCurve { points }
    }

    pub(crate) fn auc_roc(&self) -> f64 {
        self.roc_curve().auc()
    }

    pub(crate) fn average_precision(&self) -> f64 {
        let mut ap = 0.0;
        let mut recall_prev = 0.0;
        for (_, tp, fp) in self.grouped() {
            let recall = tp as f64 / self.n_pos as f64;
            let precision = tp as f64 / (tp + fp) as f64;
            ap += (recall - recall_prev) * precision;
            recall_prev = recall;
        }
        ap
    }

    pub(crate) fn spec_at(&self, target: f64, convention: SpecConvention) -> Result<f64> {
        if !(target.is_finite() && target > 0.0 && target <= 1.0) {
            return Err(Error::invalid(format!(
                "sensitivity target must lie in (0, 1], got {target}"
            )));
        }
        let curve = self.roc_curve();
        let points = curve.points();
        match convention {
            SpecConvention::AtLeast => {
                let needed = min_detected_for_target(self.n_pos, target);
                let point = points
                    .iter()
                    .find(|p| p.counts.true_pos >= needed)
                    .expect("the all-positive point always reaches the target");
                Ok(point.specificity())
            }
            SpecConvention::Interpolate => {
                let j = points
                    .iter()
                    .position(|p| p.sensitivity() >= target)
                    .expect("the all-positive point always reaches the target");
                let hi = &points[j];
                if hi.sensitivity() == target || j == 0 {
                    return Ok(hi.specificity());
                }
                let lo = &points[j - 1];
                let span = hi.sensitivity() - lo.sensitivity();
                let frac = (target - lo.sensitivity()) / span;
                Ok(lo.specificity() + frac * (hi.specificity() - lo.specificity()))
            }
        }
    }

    /// Normalized area under the at-least staircase SP(SE) for
    /// SE in [lo, 1]; a perfect separator scores 1.
    pub(crate) fn partial_auc(&self, lo: f64) -> Result<f64> {
        if !(lo.is_finite() && (0.0..1.0).contains(&lo)) {
            return Err(Error::invalid(format!(
                "partial AUC lower bound must lie in [0, 1), got {lo}"
            )));
        }
        let curve = self.roc_curve();
        let levels = curve.sensitivity_levels();
        let mut area = 0.0;
        for pair in levels.windows(2) {
            let (se_prev, _) = pair[0];
            let (se, sp) = pair[1];
            let from = se_prev.max(lo);
            let to = se.min(1.0);
            if to > from {
                area += sp * (to - from);
            }
        }
        Ok(area / (1.0 - lo))
    }
}

/// Decision counts under the rule `score >= t` predicts malignant.
pub fn confusion_at_threshold(ps: &PredictionSet, t: f64) -> Result<ConfusionCounts> {
    if !t.is_finite() {
        return Err(Error::invalid(format!("threshold must be finite, got {t}")));
    }
    let mut counts = ConfusionCounts {
        true_pos: 0,
        false_pos: 0,
        true_neg: 0,
        false_neg: 0,
    };
    for item in ps.items() {
        match (item.score >= t, item.label.is_malignant()) {
            (true, true) => counts.true_pos += 1,
            (true, false) => counts.false_pos += 1,
            (false, false) => counts.true_neg += 1,
            (false, true) => counts.false_neg += 1,
        }
    }
    Ok(counts)
}

/// The ROC curve of a prediction set, ties grouped, with the virtual
/// (SE = 0, SP = 1) starting point.
pub fn roc_curve(ps: &PredictionSet) -> RocCurve {
    ScoreSet::from_prediction_set(ps).roc_curve()
}

/// The precision-recall curve of a prediction set, ties grouped.
pub fn pr_curve(ps: &PredictionSet) -> PrCurve {
    ScoreSet::from_prediction_set(ps).pr_curve()
}

/// Trapezoidal area under the ROC curve. Equals the probability that a
/// random malignant item outscores a random benign one, with half credit
/// for ties.
pub fn auc_roc(ps: &PredictionSet) -> f64 {
    ScoreSet::from_prediction_set(ps).auc_roc()
}

/// Average precision: the step sum over tie-grouped thresholds k, in
/// decreasing-threshold order, of (R_k - R_{k-1}) * P_k with R_0 = 0.
/// Invariant under strictly increasing score transforms.
pub fn average_precision(ps: &PredictionSet) -> f64 {
    ScoreSet::from_prediction_set(ps).average_precision()
}

/// Specificity at a sensitivity target in (0, 1].
///
/// The two conventions disagree whenever the target falls between
/// achievable sensitivities. With 75 positives, a 0.99 target needs all
/// 75 detected under `at-least`, because stopping one short reaches only
/// 74/75 ~ 0.9867; a reading that tolerates one missed melanoma is the
/// laxer rounding that `interpolate` approximates by bridging the two
/// operating points. Reports name the convention in force.
pub fn spec_at_sensitivity(
    ps: &PredictionSet,
    target: f64,
    convention: SpecConvention,
) -> Result<f64> {
    ScoreSet::from_prediction_set(ps).spec_at(target, convention)
}

/// Normalized partial ROC area: mean specificity of the at-least staircase
/// over sensitivities in [lo, 1]. `lo` defaults to 0.95 in reports.
pub fn partial_auc(ps: &PredictionSet, lo: f64) -> Result<f64> {
    ScoreSet::from_prediction_set(ps).partial_auc(lo)
}

/// Smallest detected-positive count whose sensitivity reaches `target`,
/// i.e. the least k with k / n_pos >= target.
pub fn min_detected_for_target(n_pos: usize, target: f64) -> usize {
    let n = n_pos as f64;
    let mut k = (target * n).ceil() as usize;
    k = k.min(n_pos);
    while k > 0 && (k - 1) as f64 / n >= target {
        k -= 1;
    }
    while k < n_pos && (k as f64 / n) < target {
        k += 1;
    }
    k
}

/// The default sensitivity targets reported everywhere.
pub const SPEC_TARGETS: [f64; 3] = [0.95, 0.98, 0.99];

/// Lower sensitivity bound of the reported partial AUC band.
pub const PARTIAL_AUC_LO: f64 = 0.95;

/// Specificity at the three standard sensitivity targets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpecAtTargets {
    #[serde(rename = "0.95")]
    pub at_95: f64,
    #[serde(rename = "0.98")]
    pub at_98: f64,
    #[serde(rename = "0.99")]
    pub at_99: f64,
}

impl SpecAtTargets {
    pub fn get(&self, target: f64) -> Option<f64> {
        if target == 0.95 {
            Some(self.at_95)
        } else if target == 0.98 {
            Some(self.at_98)
        } else if target == 0.99 {
            Some(self.at_99)
        } else {
            None
        }
    }
}

/// The full measure row-set for one system: the two global measures, the
/// three high-sensitivity specificities, and the 95-100% partial AUC.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub system_id: String,
    pub average_precision: f64,
    pub auc_roc: f64,
    pub spec_at: SpecAtTargets,
    pub pauc_95_100: f64,
}

impl MeasureReport {
    pub fn value(&self, measure: Measure) -> f64 {
        match measure {
            Measure::AveragePrecision => self.average_precision,
            Measure::AucRoc => self.auc_roc,
            Measure::SpecAt95 => self.spec_at.at_95,
            Measure::SpecAt98 => self.spec_at.at_98,
            Measure::SpecAt99 => self.spec_at.at_99,
            Measure::PartialAuc95 => self.pauc_95_100,
        }
    }
}

/// Computes every reported measure for one system. Specificity targets use
/// the given convention; the partial AUC always integrates the at-least
/// staircase.
pub fn measure_report_with(ps: &PredictionSet, convention: SpecConvention) -> MeasureReport {
    let set = ScoreSet::from_prediction_set(ps);
    MeasureReport {
        system_id: ps.system_id().to_string(),
        average_precision: set.average_precision(),
        auc_roc: set.auc_roc(),
        spec_at: SpecAtTargets {
            at_95: set.spec_at(0.95, convention).expect("target in range"),
            at_98: set.spec_at(0.98, convention).expect("target in range"),
            at_99: set.spec_at(0.99, convention).expect("target in range"),
        },
        pauc_95_100: set.partial_auc(PARTIAL_AUC_LO).expect("bound in range"),
    }
}

/// [`measure_report_with`] under the default at-least convention.
pub fn measure_report(ps: &PredictionSet) -> MeasureReport {
    measure_report_with(ps, SpecConvention::AtLeast)
}

/// Selector for one reported measure; all are higher-is-better.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Measure {
    #[serde(rename = "average_precision")]
    AveragePrecision,
    #[serde(rename = "auc_roc")]
    AucRoc,
    #[serde(rename = "spec_at_95")]
    SpecAt95,
    #[serde(rename = "spec_at_98")]
    SpecAt98,
    #[serde(rename = "spec_at_99")]
    SpecAt99,
    #[serde(rename = "pauc_95_100")]
    PartialAuc95,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::AveragePrecision,
        Measure::AucRoc,
        Measure::SpecAt95,
        Measure::SpecAt98,
        Measure::SpecAt99,
        Measure::PartialAuc95,
    ];

    /// Stable machine name used in reports and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Measure::AveragePrecision => "average_precision",
            Measure::AucRoc => "auc_roc",
            Measure::SpecAt95 => "spec_at_95",
            Measure::SpecAt98 => "spec_at_98",
            Measure::SpecAt99 => "spec_at_99",
            Measure::PartialAuc95 => "pauc_95_100",
        }
    }

    /// Human row label used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            Measure::AveragePrecision => "Average precision",
            Measure::AucRoc => "AUC of ROC",
            Measure::SpecAt95 => "SE = 95%",
            Measure::SpecAt98 => "SE = 98%",
            Measure::SpecAt99 => "SE = 99%",
            Measure::PartialAuc95 => "pAUC SE 95-100%",
        }
    }

    pub fn parse(s: &str) -> Option<Measure> {
        match s.to_ascii_lowercase().as_str() {
            "average_precision" | "ap" => Some(Measure::AveragePrecision),
            "auc_roc" | "auc" => Some(Measure::AucRoc),
            "spec_at_95" | "spec95" => Some(Measure::SpecAt95),
            "spec_at_98" | "spec98" => Some(Measure::SpecAt98),
            "spec_at_99" | "spec99" => Some(Measure::SpecAt99),
            "pauc_95_100" | "pauc" => Some(Measure::PartialAuc95),
            _ => None,
        }
    }

    pub fn evaluate_with(self, ps: &PredictionSet, convention: SpecConvention) -> f64 {
        self.eval_scores(&ScoreSet::from_prediction_set(ps), convention)
    }

    pub fn evaluate(self, ps: &PredictionSet) -> f64 {
        self.evaluate_with(ps, SpecConvention::AtLeast)
    }

    pub(crate) fn eval_scores(self, set: &ScoreSet, convention: SpecConvention) -> f64 {
        match self {
            Measure::AveragePrecision => set.average_precision(),
            Measure::AucRoc => set.auc_roc(),
            Measure::SpecAt95 => set.spec_at(0.95, convention).expect("target in range"),
            Measure::SpecAt98 => set.spec_at(0.98, convention).expect("target in range"),
            Measure::SpecAt99 => set.spec_at(0.99, convention).expect("target in range"),
            Measure::PartialAuc95 => set.partial_auc(PARTIAL_AUC_LO).expect("bound in range"),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
