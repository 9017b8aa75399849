//! Machine-readable evaluation reports and rendered tables.
//!
//! JSON is the canonical format; CSV is a flattened projection carrying
//! the same numeric values. Numeric report values are rounded to six
//! significant digits before serialization, so identical inputs, flags,
//! and seed yield byte-identical output. Rendered tables show two decimals.
//!
//! Every report embeds the conventions in force; two reports are only
//! comparable when their convention blocks match.

use serde::Serialize;

use crate::curves::{Measure, MeasureReport, SpecConvention};
use crate::error::{Error, Result};
use crate::ranking::{RankAgreement, RankStability, RankingTable};
use crate::resampling::ResampleSummary;

/// Rounds to six significant digits, the fixed precision of every numeric
/// report value.
pub fn sig6(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    format!("{v:.5e}").parse().expect("sig6 re-parse")
}

/// The definitions this report was computed under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    /// `at-least` or `interpolate`.
    pub spec_at: &'static str,
    pub average_precision: &'static str,
    pub partial_auc: &'static str,
    pub ci: &'static str,
}

impl Conventions {
    pub fn with_spec_at(convention: SpecConvention) -> Self {
        Conventions {
            spec_at: match convention {
                SpecConvention::AtLeast => "at-least",
                SpecConvention::Interpolate => "interpolate",
            },
            average_precision: "step-sum",
            partial_auc: "at-least staircase, SE 95-100%",
            ci: "percentile-95",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportMeta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub n_pos: usize,
    pub n_neg: usize,
    pub conventions: Conventions,
}

impl ReportMeta {
    pub fn new(command: impl Into<String>, seed: u64, n_pos: usize, n_neg: usize,
               convention: SpecConvention) -> Self {
        ReportMeta {
            tool: "mdrank",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed,
            n_pos,
            n_neg,
            conventions: Conventions::with_spec_at(convention),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecAtBlock {
    #[serde(rename = "0.95")]
    pub at_95: f64,
    #[serde(rename = "0.98")]
    pub at_98: f64,
    #[serde(rename = "0.99")]
    pub at_99: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResampleBlock {
    pub measure: Measure,
    pub point_estimate: f64,
    pub mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub level: f64,
    pub n_replicates: usize,
    pub seed: u64,
    pub replicate_values: Vec<f64>,
}

impl From<&ResampleSummary> for ResampleBlock {
    fn from(s: &ResampleSummary) -> Self {
        ResampleBlock {
            measure: s.measure,
            point_estimate: sig6(s.point_estimate),
            mean: sig6(s.mean),
            ci_lo: sig6(s.ci_lo),
            ci_hi: sig6(s.ci_hi),
            level: s.level,
            n_replicates: s.n_replicates,
            seed: s.seed,
            replicate_values: s.replicate_values.iter().map(|&v| sig6(v)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemReport {
    pub system_id: String,
    pub average_precision: f64,
    pub auc_roc: f64,
    pub spec_at: SpecAtBlock,
    pub pauc_95_100: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resampling: Option<Vec<ResampleBlock>>,
}

impl SystemReport {
    pub fn new(report: &MeasureReport, resampling: Option<&[ResampleSummary]>) -> Self {
        SystemReport {
            system_id: report.system_id.clone(),
            average_precision: sig6(report.average_precision),
            auc_roc: sig6(report.auc_roc),
            spec_at: SpecAtBlock {
                at_95: sig6(report.spec_at.at_95),
                at_98: sig6(report.spec_at.at_98),
                at_99: sig6(report.spec_at.at_99),
            },
            pauc_95_100: sig6(report.pauc_95_100),
            resampling: resampling.map(|list| list.iter().map(ResampleBlock::from).collect()),
        }
    }

    fn value(&self, measure: Measure) -> f64 {
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

#[derive(Clone, Debug, Serialize)]
pub struct RankingBlock {
    pub systems: Vec<String>,
    pub measures: Vec<Measure>,
    pub scores: Vec<Vec<f64>>,
    pub ranks: Vec<Vec<usize>>,
}

impl From<&RankingTable> for RankingBlock {
    fn from(t: &RankingTable) -> Self {
        RankingBlock {
            systems: t.systems.clone(),
            measures: t.measures.clone(),
            scores: t
                .scores
                .iter()
                .map(|row| row.iter().map(|&v| sig6(v)).collect())
                .collect(),
            ranks: t.ranks.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementBlock {
    pub measure_a: Measure,
    pub measure_b: Measure,
    pub kendall_tau: f64,
    pub pairwise_flip_count: usize,
}

impl From<&RankAgreement> for AgreementBlock {
    fn from(a: &RankAgreement) -> Self {
        AgreementBlock {
            measure_a: a.measure_a,
            measure_b: a.measure_b,
            kendall_tau: sig6(a.kendall_tau),
            pairwise_flip_count: a.pairwise_flip_count,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityBlock {
    pub measure: Measure,
    pub systems: Vec<String>,
    pub n_replicates: usize,
    pub seed: u64,
    pub win_fraction: Vec<Vec<f64>>,
    pub tie_fraction: Vec<Vec<f64>>,
}

impl From<&RankStability> for StabilityBlock {
    fn from(s: &RankStability) -> Self {
        let n = s.systems.len();
        let fractions = |counts: &Vec<Vec<usize>>| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| sig6(counts[i][j] as f64 / s.n_replicates as f64))
                        .collect()
                })
                .collect()
        };
        StabilityBlock {
            measure: s.measure,
            systems: s.systems.clone(),
            n_replicates: s.n_replicates,
            seed: s.seed,
            win_fraction: fractions(&s.win_counts),
            tie_fraction: fractions(&s.tie_counts),
        }
    }
}

/// The machine-readable superset of every rendered table.
#[derive(Clone, Debug, Serialize)]
pub struct EvaluationReport {
    pub meta: ReportMeta,
    pub systems: Vec<SystemReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranking: Option<RankingBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_agreement: Option<Vec<AgreementBlock>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_stability: Option<Vec<StabilityBlock>>,
}

impl EvaluationReport {
    pub fn new(meta: ReportMeta, systems: Vec<SystemReport>) -> Self {
        EvaluationReport {
            meta,
            systems,
            ranking: None,
            rank_agreement: None,
            rank_stability: None,
        }
    }

    /// Errors if any numeric field failed to stay finite.
    pub fn validate(&self) -> Result<()> {
        let mut values: Vec<f64> = Vec::new();
        for s in &self.systems {
            values.extend([
                s.average_precision,
                s.auc_roc,
                s.spec_at.at_95,
                s.spec_at.at_98,
                s.spec_at.at_99,
                s.pauc_95_100,
            ]);
            if let Some(blocks) = &s.resampling {
                for b in blocks {
                    values.extend([b.point_estimate, b.mean, b.ci_lo, b.ci_hi]);
                    values.extend(b.replicate_values.iter().copied());
                }
            }
        }
        if let Some(ranking) = &self.ranking {
            values.extend(ranking.scores.iter().flatten().copied());
        }
        if let Some(agreements) = &self.rank_agreement {
            values.extend(agreements.iter().map(|a| a.kendall_tau));
        }
        if let Some(stability) = &self.rank_stability {
            for s in stability {
                values.extend(s.win_fraction.iter().flatten().copied());
                values.extend(s.tie_fraction.iter().flatten().copied());
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("report contains a non-finite value"));
        }
        Ok(())
    }

    /// Canonical pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }

    /// Flattened projection: one row per system and measure, with the
    /// resampling columns filled where a summary exists.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("system,measure,value,resample_mean,ci_lo,ci_hi,n_replicates\n");
        for system in &self.systems {
            for measure in Measure::ALL {
                let value = system.value(measure);
                let block = system
                    .resampling
                    .as_ref()
                    .and_then(|blocks| blocks.iter().find(|b| b.measure == measure));
                match block {
                    Some(b) => out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        system.system_id,
                        measure.name(),
                        value,
                        b.mean,
                        b.ci_lo,
                        b.ci_hi,
                        b.n_replicates
                    )),
                    None => out.push_str(&format!(
                        "{},{},{},,,,\n",
                        system.system_id,
                        measure.name(),
                        value
                    )),
                }
            }
        }
        out
    }
}

fn pad(s: &str, width: usize) -> String {
    format!("{s:>width$}")
}

fn pad_left(s: &str, width: usize) -> String {
    format!("{s:<width$}")
}

/// Renders measures as rows and systems as columns, two decimals per cell.
pub fn render_measure_grid(reports: &[MeasureReport]) -> String {
    render_measure_grid_for(reports, &Measure::ALL)
}

/// [`render_measure_grid`] restricted to a measure subset.
pub fn render_measure_grid_for(reports: &[MeasureReport], measures: &[Measure]) -> String {
    let label_width = measures
        .iter()
        .map(|m| m.label().len())
        .max()
        .unwrap_or(0);
    let col_widths: Vec<usize> = reports
        .iter()
        .map(|r| r.system_id.len().max(5))
        .collect();

    let mut out = pad_left("", label_width);
    for (r, width) in reports.iter().zip(&col_widths) {
        out.push_str("  ");
        out.push_str(&pad(&r.system_id, *width));
    }
    out.push('\n');
    for &measure in measures {
        out.push_str(&pad_left(measure.label(), label_width));
        for (r, width) in reports.iter().zip(&col_widths) {
            out.push_str("  ");
            out.push_str(&pad(&format!("{:.2}", r.value(measure)), *width));
        }
        out.push('\n');
    }
    out
}

/// Renders the cross-measure ranking grid: measures as rows, systems as
/// columns. A cell shows the score itself (two decimals) where the system
/// is ranked first for that measure, and the rank integer elsewhere.
pub fn render_ranking_grid(table: &RankingTable) -> String {
    let label_width = table
        .measures
        .iter()
        .map(|m| m.label().len())
        .max()
        .unwrap_or(0);
    let col_widths: Vec<usize> = table.systems.iter().map(|s| s.len().max(5)).collect();

    let mut out = pad_left("", label_width);
    for (system, width) in table.systems.iter().zip(&col_widths) {
        out.push_str("  ");
        out.push_str(&pad(system, *width));
    }
    out.push('\n');
    for (m_idx, measure) in table.measures.iter().enumerate() {
        out.push_str(&pad_left(measure.label(), label_width));
        for (s_idx, width) in (0..table.systems.len()).zip(&col_widths) {
            let cell = if table.rank(s_idx, m_idx) == 1 {
                format!("{:.2}", table.score(s_idx, m_idx))
            } else {
                table.rank(s_idx, m_idx).to_string()
            };
            out.push_str("  ");
            out.push_str(&pad(&cell, *width));
        }
        out.push('\n');
    }
    out
}

/// Renders pairwise Kendall tau values as a list, one row per measure pair.
pub fn render_agreement(agreements: &[RankAgreement]) -> String {
    let mut out = String::from("measure pair: kendall tau (discordant pairs)\n");
    for a in agreements {
        out.push_str(&format!(
            "{} vs {}: {:+.2} ({})\n",
            a.measure_a.label(),
            a.measure_b.label(),
            a.kendall_tau,
            a.pairwise_flip_count
        ));
    }
    out
}
