//! Ranking systems under each measure, cross-measure agreement, and
//! bootstrap rank stability.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{Measure, MeasureReport, ScoreSet, SpecConvention};
use crate::data::{Label, PredictionSet};
use crate::error::{Error, Result};
use crate::resampling::replicate_rng;
use rand::Rng;

/// Competition ranking of systems by descending score: tied scores share
/// the best rank and the next rank skips accordingly (1, 2, 2, 4).
pub fn rank_by_measure(scores: &BTreeMap<String, f64>) -> Result<BTreeMap<String, usize>> {
    if scores.is_empty() {
        return Err(Error::invalid("at least one system required"));
    }
    for (system, value) in scores {
        if !value.is_finite() {
            return Err(Error::NonFiniteScore {
                system: system.clone(),
            });
        }
    }
    let mut ordered: Vec<(&String, f64)> = scores.iter().map(|(k, v)| (k, *v)).collect();
    ordered.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut ranks = BTreeMap::new();
    let mut rank = 1usize;
    for (idx, (system, value)) in ordered.iter().enumerate() {
        if idx > 0 && *value != ordered[idx - 1].1 {
            rank = idx + 1;
        }
        ranks.insert((*system).clone(), rank);
    }
    Ok(ranks)
}

/// Scores and competition ranks of every system under every measure.
#[derive(Clone, Debug, Serialize)]
pub struct RankingTable {
    pub systems: Vec<String>,
    pub measures: Vec<Measure>,
    /// `scores[system_index][measure_index]`.
    pub scores: Vec<Vec<f64>>,
    /// `ranks[system_index][measure_index]`.
    pub ranks: Vec<Vec<usize>>,
}

impl RankingTable {
    pub fn score(&self, system: usize, measure: usize) -> f64 {
        self.scores[system][measure]
    }

    pub fn rank(&self, system: usize, measure: usize) -> usize {
        self.ranks[system][measure]
    }

    /// Ranking of one measure column as a system -> rank map.
    pub fn column_ranks(&self, measure_index: usize) -> BTreeMap<String, usize> {
        self.systems
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), self.ranks[i][measure_index]))
            .collect()
    }
}

/// Builds the systems-by-measures grid, ranking column-wise.
pub fn cross_ranking_table(
    reports: &[MeasureReport],
    measures: &[Measure],
) -> Result<RankingTable> {
    if reports.is_empty() {
        return Err(Error::invalid("at least one report required"));
    }
    if measures.is_empty() {
        return Err(Error::invalid("at least one measure required"));
    }
    let systems: Vec<String> = reports.iter().map(|r| r.system_id.clone()).collect();
    let scores: Vec<Vec<f64>> = reports
        .iter()
        .map(|r| measures.iter().map(|&m| r.value(m)).collect())
        .collect();
    let mut ranks = vec![vec![0usize; measures.len()]; reports.len()];
    for (m_idx, _) in measures.iter().enumerate() {
        let column: BTreeMap<String, f64> = systems
            .iter()
            .enumerate()
            .map(|(s_idx, s)| (s.clone(), scores[s_idx][m_idx]))
            .collect();
        let column_ranks = rank_by_measure(&column)?;
        for (s_idx, system) in systems.iter().enumerate() {
            ranks[s_idx][m_idx] = column_ranks[system];
        }
    }
    Ok(RankingTable {
        systems,
        measures: measures.to_vec(),
        scores,
        ranks,
    })
}

/// Agreement between the rankings induced by two measures.
#[derive(Clone, Debug, Serialize)]
pub struct RankAgreement {
    pub measure_a: Measure,
    pub measure_b: Measure,
    /// Tie-adjusted (tau-b) Kendall correlation of the two rankings.
    pub kendall_tau: f64,
    /// Number of system pairs ordered oppositely by the two measures.
    pub pairwise_flip_count: usize,
}

/// Tie-adjusted Kendall tau-b between two rankings of the same systems.
///
/// `tau = (C - D) / sqrt((n0 - n1)(n0 - n2))` with C/D the concordant and
/// discordant pair counts, n0 all pairs, and n1/n2 the pairs tied within
/// each ranking. Errors if either ranking is completely tied (the
/// denominator vanishes) or the key sets differ.
pub fn kendall_tau(
    rank_a: &BTreeMap<String, usize>,
    rank_b: &BTreeMap<String, usize>,
) -> Result<f64> {
    let (tau, _) = kendall_tau_with_flips(rank_a, rank_b)?;
    Ok(tau)
}

/// [`kendall_tau`] plus the discordant-pair count.
pub fn kendall_tau_with_flips(
    rank_a: &BTreeMap<String, usize>,
    rank_b: &BTreeMap<String, usize>,
) -> Result<(f64, usize)> {
    if rank_a.len() != rank_b.len() || rank_a.keys().any(|k| !rank_b.contains_key(k)) {
        return Err(Error::RankKeyMismatch);
    }
    let mut xs = Vec::with_capacity(rank_a.len());
    let mut ys = Vec::with_capacity(rank_a.len());
    for (system, &a) in rank_a {
        xs.push(a);
        ys.push(rank_b[system]);
    }
    kendall_tau_from_ranks(&xs, &ys)
}

/// Tau-b over two aligned rank slices.
pub fn kendall_tau_from_ranks(xs: &[usize], ys: &[usize]) -> Result<(f64, usize)> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::RankKeyMismatch);
    }
    if n < 2 {
        return Err(Error::invalid("at least two systems required"));
    }

    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = xs[i].cmp(&xs[j]);
            let dy = ys[i].cmp(&ys[j]);
            if dx.is_eq() || dy.is_eq() {
                continue;
            }
            if dx == dy {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }

    // Tie corrections from sorted group sizes, t(t-1)/2 per tied group.
    let tied_pairs = |ranks: &[usize]| -> i64 {
        let mut sorted = ranks.to_vec();
        sorted.sort_unstable();
        let mut total = 0i64;
        let mut run = 1i64;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                total += run * (run - 1) / 2;
                run = 1;
            }
        }
        total + run * (run - 1) / 2
    };
    let n0 = (n as i64) * (n as i64 - 1) / 2;
    let n1 = tied_pairs(xs);
    let n2 = tied_pairs(ys);
    let denom = (((n0 - n1) as f64) * ((n0 - n2) as f64)).sqrt();
    if denom == 0.0 {
        return Err(Error::DegenerateRanks);
    }
    Ok((
        (concordant - discordant) as f64 / denom,
        discordant as usize,
    ))
}

/// Pairwise outranking fractions under a paired bootstrap: per replicate
/// one shared stratified item resample is drawn and every system is
/// re-scored on it.
#[derive(Clone, Debug, Serialize)]
pub struct RankStability {
    pub measure: Measure,
    pub systems: Vec<String>,
    pub n_replicates: usize,
    pub seed: u64,
    /// `win_counts[i][j]`: replicates where system i scored strictly higher
    /// than system j.
    pub win_counts: Vec<Vec<usize>>,
    /// `tie_counts[i][j]`: replicates where the two scores were equal.
    pub tie_counts: Vec<Vec<usize>>,
}

impl RankStability {
    /// Fraction of replicates where system i outranked system j.
    pub fn win_fraction(&self, i: usize, j: usize) -> f64 {
        self.win_counts[i][j] as f64 / self.n_replicates as f64
    }

    pub fn tie_fraction(&self, i: usize, j: usize) -> f64 {
        self.tie_counts[i][j] as f64 / self.n_replicates as f64
    }
}

/// Computes pairwise outranking fractions for one measure across systems
/// that share a single item universe (ids and labels must match).
pub fn rank_stability(
    systems: &[PredictionSet],
    measure: Measure,
    n_replicates: usize,
    seed: u64,
) -> Result<RankStability> {
    if systems.len() < 2 {
        return Err(Error::invalid("at least two systems required"));
    }
    if n_replicates == 0 {
        return Err(Error::invalid("n_replicates must be >= 1"));
    }

    // Canonical item order from the first system, sorted by id.
    let mut universe: Vec<(&str, Label)> = systems[0]
        .items()
        .iter()
        .map(|item| (item.item_id.as_str(), item.label))
        .collect();
    universe.sort_by(|a, b| a.0.cmp(b.0));

    let mut score_rows: Vec<Vec<f64>> = Vec::with_capacity(systems.len());
    for ps in systems {
        if ps.len() != universe.len() {
            return Err(Error::InconsistentItems(format!(
                "`{}` has {} items, expected {}",
                ps.system_id(),
                ps.len(),
                universe.len()
            )));
        }
        let by_id: BTreeMap<&str, (f64, Label)> = ps
            .items()
            .iter()
            .map(|item| (item.item_id.as_str(), (item.score, item.label)))
            .collect();
        let mut row = Vec::with_capacity(universe.len());
        for (id, label) in &universe {
            match by_id.get(id) {
                Some((score, item_label)) if item_label == label => row.push(*score),
                Some(_) => {
                    return Err(Error::InconsistentItems(format!(
                        "`{}` disagrees on the label of `{id}`",
                        ps.system_id()
                    )))
                }
                None => {
                    return Err(Error::InconsistentItems(format!(
                        "`{}` is missing item `{id}`",
                        ps.system_id()
                    )))
                }
            }
        }
        score_rows.push(row);
    }

    let pos_indices: Vec<usize> = universe
        .iter()
        .enumerate()
        .filter(|(_, (_, label))| label.is_malignant())
        .map(|(i, _)| i)
        .collect();
    let neg_indices: Vec<usize> = universe
        .iter()
        .enumerate()
        .filter(|(_, (_, label))| !label.is_malignant())
        .map(|(i, _)| i)
        .collect();

    let n = systems.len();
    let per_replicate: Vec<Vec<f64>> = (0..n_replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            let mut drawn: Vec<usize> = Vec::with_capacity(universe.len());
            for _ in 0..pos_indices.len() {
                drawn.push(pos_indices[rng.random_range(0..pos_indices.len())]);
            }
            for _ in 0..neg_indices.len() {
                drawn.push(neg_indices[rng.random_range(0..neg_indices.len())]);
            }
            score_rows
                .iter()
                .map(|row| {
                    let pairs: Vec<(f64, bool)> = drawn
                        .iter()
                        .map(|&idx| (row[idx], universe[idx].1.is_malignant()))
                        .collect();
                    let set = ScoreSet::from_pairs(pairs).expect("stratified draw keeps classes");
                    measure.eval_scores(&set, SpecConvention::AtLeast)
                })
                .collect()
        })
        .collect();

    let mut win_counts = vec![vec![0usize; n]; n];
    let mut tie_counts = vec![vec![0usize; n]; n];
    for values in &per_replicate {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if values[i] > values[j] {
                    win_counts[i][j] += 1;
                } else if values[i] == values[j] {
                    tie_counts[i][j] += 1;
                }
            }
        }
    }
    for (i, row) in tie_counts.iter_mut().enumerate() {
        row[i] = n_replicates;
    }

    Ok(RankStability {
        measure,
        systems: systems.iter().map(|s| s.system_id().to_string()).collect(),
        n_replicates,
        seed,
        win_counts,
        tie_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::measure_report;
    use crate::data::LabeledScore;
    use crate::synth::{binormal_scores, crossing_pair, BinormalSpec};

    fn scores(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
        entries
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect()
    }

    fn ranks(entries: &[(&str, usize)]) -> BTreeMap<String, usize> {
        entries
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect()
    }

    #[test]
    fn rank_by_measure_descends() {
        let ranked = rank_by_measure(&scores(&[("A", 0.64), ("B", 0.60), ("C", 0.55)])).unwrap();
        assert_eq!(ranked, ranks(&[("A", 1), ("B", 2), ("C", 3)]));
    }

    #[test]
    fn rank_by_measure_uses_competition_ties() {
        let ranked = rank_by_measure(&scores(&[("A", 0.5), ("B", 0.5), ("C", 0.4)])).unwrap();
        assert_eq!(ranked, ranks(&[("A", 1), ("B", 1), ("C", 3)]));
    }

    #[test]
    fn rank_by_measure_single_system_and_errors() {
        let ranked = rank_by_measure(&scores(&[("only", 0.9)])).unwrap();
        assert_eq!(ranked["only"], 1);
        assert!(matches!(
            rank_by_measure(&scores(&[("bad", f64::NAN)])),
            Err(Error::NonFiniteScore { .. })
        ));
        assert!(rank_by_measure(&BTreeMap::new()).is_err());
    }

    #[test]
    fn kendall_tau_trivial_values() {
        let a = ranks(&[("x", 1), ("y", 2), ("z", 3)]);
        assert_eq!(kendall_tau(&a, &a).unwrap(), 1.0);
        let rev = ranks(&[("x", 3), ("y", 2), ("z", 1)]);
        assert_eq!(kendall_tau(&a, &rev).unwrap(), -1.0);
    }

    #[test]
    fn kendall_tau_single_swap_is_one_third() {
        let a = ranks(&[("x", 1), ("y", 2), ("z", 3)]);
        let b = ranks(&[("x", 2), ("y", 1), ("z", 3)]);
        let (tau, flips) = kendall_tau_with_flips(&a, &b).unwrap();
        assert!((tau - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(flips, 1);
    }

    #[test]
    fn kendall_tau_rejects_mismatched_or_degenerate_inputs() {
        let a = ranks(&[("x", 1), ("y", 2)]);
        let b = ranks(&[("x", 1), ("q", 2)]);
        assert!(matches!(kendall_tau(&a, &b), Err(Error::RankKeyMismatch)));
        let tied = ranks(&[("x", 1), ("y", 1)]);
        assert!(matches!(
            kendall_tau(&a, &tied),
            Err(Error::DegenerateRanks)
        ));
    }

    #[test]
    fn cross_ranking_table_matches_hand_ranked_grid() {
        let mk = |id: &str, ap: f64, auc: f64| {
            let mut report = measure_report(&crossing_pair().0);
            report.system_id = id.to_string();
            report.average_precision = ap;
            report.auc_roc = auc;
            report
        };
        let reports = vec![
            mk("a", 0.9, 0.6),
            mk("b", 0.8, 0.7),
            mk("c", 0.7, 0.8),
        ];
        let table = cross_ranking_table(
            &reports,
            &[Measure::AveragePrecision, Measure::AucRoc],
        )
        .unwrap();
        assert_eq!(table.ranks[0], vec![1, 3]);
        assert_eq!(table.ranks[1], vec![2, 2]);
        assert_eq!(table.ranks[2], vec![3, 1]);
    }

    #[test]
    fn stability_dominant_system_always_wins_auc() {
        let strong = binormal_scores(&BinormalSpec {
            n_pos: 20,
            n_neg: 40,
            mu: 8.0,
            sigma: 1.0,
            seed: 9,
        })
        .unwrap()
        .with_system_id("strong");
        // Same items, scores shifted to pure noise around zero.
        let weak_items: Vec<LabeledScore> = strong
            .items()
            .iter()
            .enumerate()
            .map(|(i, item)| LabeledScore {
                item_id: item.item_id.clone(),
                score: (i % 7) as f64 / 7.0 - 0.5,
                label: item.label,
            })
            .collect();
        let weak = PredictionSet::new("weak", weak_items).unwrap();

        let stability =
            rank_stability(&[strong, weak], Measure::AucRoc, 200, 11).unwrap();
        assert_eq!(stability.win_fraction(0, 1), 1.0);
        assert_eq!(stability.win_fraction(1, 0), 0.0);
        assert_eq!(stability.tie_fraction(0, 1), 0.0);
    }

    #[test]
    fn stability_self_comparison_always_ties() {
        let (s1, _) = crossing_pair();
        let twin = s1.with_system_id("twin");
        let stability = rank_stability(&[s1, twin], Measure::AveragePrecision, 50, 3).unwrap();
        assert_eq!(stability.tie_fraction(0, 1), 1.0);
        assert_eq!(stability.win_fraction(0, 1), 0.0);
    }

    #[test]
    fn stability_fractions_partition_unity_exactly() {
        let (s1, s2) = crossing_pair();
        let stability = rank_stability(&[s1, s2], Measure::SpecAt98, 101, 13).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    continue;
                }
                assert_eq!(
                    stability.win_counts[i][j]
                        + stability.win_counts[j][i]
                        + stability.tie_counts[i][j],
                    101
                );
                assert_eq!(stability.tie_counts[i][j], stability.tie_counts[j][i]);
            }
        }
    }

    #[test]
    fn stability_crossing_fixture_depends_on_the_measure() {
        let (s1, s2) = crossing_pair();
        let ap = rank_stability(
            &[s1.clone(), s2.clone()],
            Measure::AveragePrecision,
            400,
            21,
        )
        .unwrap();
        let spec98 = rank_stability(&[s1, s2], Measure::SpecAt98, 400, 21).unwrap();
        // S1 wins most replicates under average precision; S2 wins most
        // under the high-sensitivity measure.
        assert!(ap.win_fraction(0, 1) > 0.5, "{}", ap.win_fraction(0, 1));
        assert!(
            spec98.win_fraction(1, 0) > 0.5,
            "{}",
            spec98.win_fraction(1, 0)
        );
        assert!(ap.win_fraction(0, 1) != spec98.win_fraction(0, 1));
    }

    #[test]
    fn stability_rejects_inconsistent_universes() {
        let (s1, _) = crossing_pair();
        let other = binormal_scores(&BinormalSpec {
            n_pos: 5,
            n_neg: 10,
            mu: 1.0,
            sigma: 1.0,
            seed: 1,
        })
        .unwrap();
        assert!(matches!(
            rank_stability(&[s1, other], Measure::AucRoc, 10, 1),
            Err(Error::InconsistentItems(_))
        ));
    }
}
