//! Ingestion of prediction and ground-truth files.
//!
//! Two comma-separated formats are understood, both with a mandatory exact
//! header and one record per line:
//!
//! ```text
//! image_id,score          image_id,label
//! lesion-001,0.93         lesion-001,malignant
//! lesion-002,0.07         lesion-002,benign
//! ```
//!
//! Label tokens are `benign`/`malignant` (case-insensitive) or `0`/`1`
//! (1 = malignant). Fields are trimmed; `\n` and `\r\n` line endings are
//! accepted; ids may not contain commas. Scores must be finite but are
//! otherwise unrestricted: every measure in this crate depends on score
//! order only, so likelihood ratios or logits work as well as
//! probabilities. Scores outside [0, 1] produce a warning, not an error.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

pub const PREDICTIONS_HEADER: &str = "image_id,score";
pub const TRUTH_HEADER: &str = "image_id,label";

/// Diagnosis of one item; `Malignant` is the positive class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Benign,
    Malignant,
}

impl Label {
    pub fn is_malignant(self) -> bool {
        matches!(self, Label::Malignant)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Benign => "benign",
            Label::Malignant => "malignant",
        }
    }

    /// Accepts `benign`/`malignant` in any case, or the numeric aliases
    /// `0`/`1`.
    pub fn parse(token: &str) -> Option<Label> {
        match token.to_ascii_lowercase().as_str() {
            "benign" | "0" => Some(Label::Benign),
            "malignant" | "1" => Some(Label::Malignant),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One scored, labelled item of a submission.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledScore {
    pub item_id: String,
    pub score: f64,
    pub label: Label,
}

/// An immutable, validated submission: every item carries a finite score
/// and a truth label, ids are unique, and both classes are present.
///
/// Construction is the only place invariants are checked; afterwards the
/// set is safe to share across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictionSet {
    system_id: String,
    items: Vec<LabeledScore>,
    n_pos: usize,
    n_neg: usize,
}

impl PredictionSet {
    pub fn new(system_id: impl Into<String>, items: Vec<LabeledScore>) -> Result<Self> {
        let system_id = system_id.into();
        let mut seen = HashSet::with_capacity(items.len());
        let mut n_pos = 0usize;
        for (idx, item) in items.iter().enumerate() {
            if item.item_id.is_empty() {
                return Err(Error::EmptyItemId { line: idx + 1 });
            }
            if !item.score.is_finite() {
                return Err(Error::BadScore {
                    line: idx + 1,
                    token: item.score.to_string(),
                });
            }
            if !seen.insert(item.item_id.as_str()) {
                return Err(Error::DuplicateId {
                    line: idx + 1,
                    id: item.item_id.clone(),
                });
            }
            if item.label.is_malignant() {
                n_pos += 1;
            }
        }
        let n_neg = items.len() - n_pos;
        if n_pos == 0 {
            return Err(Error::ClassAbsent {
                label: Label::Malignant,
            });
        }
        if n_neg == 0 {
            return Err(Error::ClassAbsent {
                label: Label::Benign,
            });
        }
        Ok(PredictionSet {
            system_id,
            items,
            n_pos,
            n_neg,
        })
    }

    pub fn system_id(&self) -> &str {
        &self.system_id
    }

    pub fn items(&self) -> &[LabeledScore] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Count of malignant items.
    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    /// Count of benign items.
    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    pub fn with_system_id(&self, system_id: impl Into<String>) -> Self {
        PredictionSet {
            system_id: system_id.into(),
            ..self.clone()
        }
    }

    /// Serializes back to the `image_id,score` format, preserving item order.
    pub fn to_predictions_csv(&self) -> String {
        let mut out = String::from(PREDICTIONS_HEADER);
        out.push('\n');
        for item in &self.items {
            out.push_str(&format!("{},{}\n", item.item_id, item.score));
        }
        out
    }

    /// Serializes back to the `image_id,label` format, preserving item order.
    pub fn to_truth_csv(&self) -> String {
        let mut out = String::from(TRUTH_HEADER);
        out.push('\n');
        for item in &self.items {
            out.push_str(&format!("{},{}\n", item.item_id, item.label));
        }
        out
    }
}

/// A parse or join result together with any non-fatal warnings.
#[derive(Clone, Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

fn split_row(line: &str, line_no: usize, expected: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != expected {
        return Err(Error::MalformedRow {
            line: line_no,
            expected,
            found: fields.len(),
        });
    }
    Ok(fields)
}

fn check_header(line: Option<&str>, expected: &str) -> Result<()> {
    let found = line.ok_or(Error::EmptyFile)?;
    let normalized: Vec<&str> = found.split(',').map(str::trim).collect();
    let wanted: Vec<&str> = expected.split(',').collect();
    if normalized != wanted {
        return Err(Error::BadHeader {
            expected: expected.to_string(),
            found: found.trim().to_string(),
        });
    }
    Ok(())
}

/// Parses an `image_id,score` table. Row order is preserved; each error
/// names the offending 1-based line.
pub fn parse_predictions(text: &str) -> Result<Parsed<Vec<(String, f64)>>> {
    let mut lines = text.lines().enumerate();
    check_header(lines.next().map(|(_, l)| l), PREDICTIONS_HEADER)?;

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut out_of_range = 0usize;
    let mut first_out_of_range = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields = split_row(line, line_no, 2)?;
        let (id, token) = (fields[0], fields[1]);
        if id.is_empty() {
            return Err(Error::EmptyItemId { line: line_no });
        }
        let score: f64 = token.parse().map_err(|_| Error::BadScore {
            line: line_no,
            token: token.to_string(),
        })?;
        if !score.is_finite() {
            return Err(Error::BadScore {
                line: line_no,
                token: token.to_string(),
            });
        }
        if !seen.insert(id.to_string()) {
            return Err(Error::DuplicateId {
                line: line_no,
                id: id.to_string(),
            });
        }
        if !(0.0..=1.0).contains(&score) {
            out_of_range += 1;
            if out_of_range == 1 {
                first_out_of_range = line_no;
            }
        }
        records.push((id.to_string(), score));
    }
    if records.is_empty() {
        return Err(Error::EmptyFile);
    }
    let mut warnings = Vec::new();
    if out_of_range > 0 {
        warnings.push(format!(
            "{out_of_range} score(s) outside [0, 1] (first at line {first_out_of_range}); \
             accepted, measures depend on score order only"
        ));
    }
    Ok(Parsed {
        value: records,
        warnings,
    })
}

/// Parses an `image_id,label` table with normalized labels.
pub fn parse_truth(text: &str) -> Result<Vec<(String, Label)>> {
    let mut lines = text.lines().enumerate();
    check_header(lines.next().map(|(_, l)| l), TRUTH_HEADER)?;

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields = split_row(line, line_no, 2)?;
        let (id, token) = (fields[0], fields[1]);
        if id.is_empty() {
            return Err(Error::EmptyItemId { line: line_no });
        }
        let label = Label::parse(token).ok_or_else(|| Error::UnknownLabel {
            line: line_no,
            token: token.to_string(),
        })?;
        if !seen.insert(id.to_string()) {
            return Err(Error::DuplicateId {
                line: line_no,
                id: id.to_string(),
            });
        }
        records.push((id.to_string(), label));
    }
    if records.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok(records)
}

/// Inner-joins predictions with truth labels into a [`PredictionSet`].
///
/// Prediction ids absent from the truth table are always fatal. Truth ids
/// without a prediction are fatal by default; with `allow_partial` they are
/// demoted to a warning and the uncovered items are dropped.
pub fn join(
    predictions: &[(String, f64)],
    truth: &[(String, Label)],
    system_id: impl Into<String>,
    allow_partial: bool,
) -> Result<Parsed<PredictionSet>> {
    let truth_map: HashMap<&str, Label> = truth
        .iter()
        .map(|(id, label)| (id.as_str(), *label))
        .collect();

    let missing_from_truth: Vec<String> = predictions
        .iter()
        .filter(|(id, _)| !truth_map.contains_key(id.as_str()))
        .map(|(id, _)| id.clone())
        .collect();
    if !missing_from_truth.is_empty() {
        return Err(Error::MissingFromTruth {
            ids: missing_from_truth,
        });
    }

    let predicted: HashSet<&str> = predictions.iter().map(|(id, _)| id.as_str()).collect();
    let uncovered: Vec<String> = truth
        .iter()
        .filter(|(id, _)| !predicted.contains(id.as_str()))
        .map(|(id, _)| id.clone())
        .collect();
    let mut warnings = Vec::new();
    if !uncovered.is_empty() {
        if !allow_partial {
            return Err(Error::MissingFromPredictions { ids: uncovered });
        }
        warnings.push(format!(
            "partial submission: {} truth item(s) have no prediction and were dropped",
            uncovered.len()
        ));
    }

    let items: Vec<LabeledScore> = predictions
        .iter()
        .map(|(id, score)| LabeledScore {
            item_id: id.clone(),
            score: *score,
            label: truth_map[id.as_str()],
        })
        .collect();
    let set = PredictionSet::new(system_id, items)?;
    Ok(Parsed {
        value: set,
        warnings,
    })
}

/// One row of a feature table.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureItem {
    pub item_id: String,
    pub label: Label,
    pub features: Vec<f64>,
}

/// A labelled feature table with a fixed dimensionality and both classes
/// present. Stands in for upstream feature-extraction output.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureDataset {
    items: Vec<FeatureItem>,
    dim: usize,
}

impl FeatureDataset {
    pub fn new(items: Vec<FeatureItem>) -> Result<Self> {
        let first = items.first().ok_or(Error::EmptyFile)?;
        let dim = first.features.len();
        if dim == 0 {
            return Err(Error::invalid("feature vectors must have dimension >= 1"));
        }
        let mut seen = HashSet::with_capacity(items.len());
        let mut n_pos = 0usize;
        for (idx, item) in items.iter().enumerate() {
            if item.features.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: item.features.len(),
                });
            }
            if item.features.iter().any(|v| !v.is_finite()) {
                return Err(Error::BadFeature {
                    line: idx + 1,
                    token: "non-finite".to_string(),
                });
            }
            if !seen.insert(item.item_id.as_str()) {
                return Err(Error::DuplicateId {
                    line: idx + 1,
                    id: item.item_id.clone(),
                });
            }
            if item.label.is_malignant() {
                n_pos += 1;
            }
        }
        if n_pos == 0 {
            return Err(Error::ClassAbsent {
                label: Label::Malignant,
            });
        }
        if n_pos == items.len() {
            return Err(Error::ClassAbsent {
                label: Label::Benign,
            });
        }
        Ok(FeatureDataset { items, dim })
    }

    pub fn items(&self) -> &[FeatureItem] {
        &self.items
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.items.iter().filter(|i| i.label == label).count()
    }

    /// Feature rows of one class, in item order.
    pub fn class_rows(&self, label: Label) -> Vec<&[f64]> {
        self.items
            .iter()
            .filter(|i| i.label == label)
            .map(|i| i.features.as_slice())
            .collect()
    }

    /// Builds a new dataset from a subset of item indices.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let items = indices.iter().map(|&i| self.items[i].clone()).collect();
        FeatureDataset::new(items)
    }

    pub fn to_features_csv(&self) -> String {
        let header: Vec<String> = (1..=self.dim).map(|i| format!("f{i}")).collect();
        let mut out = format!("image_id,label,{}\n", header.join(","));
        for item in &self.items {
            let values: Vec<String> = item.features.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!(
                "{},{},{}\n",
                item.item_id,
                item.label,
                values.join(",")
            ));
        }
        out
    }
}

/// Parses the `image_id,label,f1,...,fd` feature format.
pub fn parse_features(text: &str) -> Result<FeatureDataset> {
    let mut lines = text.lines().enumerate();
    let header = lines.next().map(|(_, l)| l).ok_or(Error::EmptyFile)?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 3 || cols[0] != "image_id" || cols[1] != "label" {
        return Err(Error::BadHeader {
            expected: "image_id,label,f1,...,fd".to_string(),
            found: header.trim().to_string(),
        });
    }
    for (i, col) in cols[2..].iter().enumerate() {
        let expected = format!("f{}", i + 1);
        if *col != expected {
            return Err(Error::BadHeader {
                expected: "image_id,label,f1,...,fd".to_string(),
                found: header.trim().to_string(),
            });
        }
    }
    let dim = cols.len() - 2;

    let mut items = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields = split_row(line, line_no, dim + 2)?;
        let id = fields[0];
        if id.is_empty() {
            return Err(Error::EmptyItemId { line: line_no });
        }
        let label = Label::parse(fields[1]).ok_or_else(|| Error::UnknownLabel {
            line: line_no,
            token: fields[1].to_string(),
        })?;
        let mut features = Vec::with_capacity(dim);
        for token in &fields[2..] {
            let v: f64 = token.parse().map_err(|_| Error::BadFeature {
                line: line_no,
                token: token.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::BadFeature {
                    line: line_no,
                    token: token.to_string(),
                });
            }
            features.push(v);
        }
        if !seen.insert(id.to_string()) {
            return Err(Error::DuplicateId {
                line: line_no,
                id: id.to_string(),
            });
        }
        items.push(FeatureItem {
            item_id: id.to_string(),
            label,
            features,
        });
    }
    FeatureDataset::new(items)
}
