//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the tolerance it enforced. Run with
//! `cargo test -p mdrank --test acceptance -- --nocapture`.

mod common;

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use common::{pairwise_auc_oracle, set_from_pairs, spec_at_oracle, step_sum_ap_oracle};
use mdrank::curves::{self, min_detected_for_target, Measure, SpecConvention};
use mdrank::data::{FeatureDataset, FeatureItem, Label};
use mdrank::gda::{CovarianceSpec, GdaModel, GdaVariant, PriorMode};
use mdrank::ranking::kendall_tau_from_ranks;
use mdrank::resampling::{bootstrap_measure, stratified_resample};
use mdrank::synth::{binormal_scores, crossing_pair, synth_challenge, BinormalSpec, SynthChallengeSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdrank"))
}

/// Random (score, label) pairs with both classes present and deliberate
/// score ties (half the draws land on a coarse grid).
fn random_pairs(rng: &mut ChaCha8Rng, min_len: usize, max_len: usize) -> Vec<(f64, bool)> {
    let n = rng.random_range(min_len..=max_len);
    let mut pairs: Vec<(f64, bool)> = (0..n)
        .map(|_| {
            let score = if rng.random_bool(0.5) {
                rng.random_range(-16i32..=16) as f64 / 8.0
            } else {
                rng.random_range(0.0..1.0)
            };
            (score, rng.random_bool(0.4))
        })
        .collect();
    pairs[0].1 = true;
    let last = pairs.len() - 1;
    pairs[last].1 = false;
    pairs
}

#[test]
fn criterion_01_auc_equals_pairwise_oracle_on_500_random_sets() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for case in 0..500 {
        let pairs = random_pairs(&mut rng, 2, 200);
        let ps = set_from_pairs(&pairs, "c1");
        let auc = curves::auc_roc(&ps);
        let oracle = pairwise_auc_oracle(&pairs);
        assert!(
            (auc - oracle).abs() <= 1e-12,
            "case {case}: trapezoid {auc} vs pairwise oracle {oracle}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!("PASS criterion 1: AUC == pairwise half-credit oracle within 1e-12 on 500 sets ({elapsed:?})");
}

/// Ten exactly order-preserving transforms on dyadic-grid scores.
fn increasing_transform(index: usize, x: f64) -> f64 {
    match index % 10 {
        0 => 2.0 * x + 0.25,
        1 => x / 4.0 - 3.0,
        2 => x * x * x,
        3 => x.exp(),
        4 => x.atan(),
        5 => x + 1_048_576.0,
        6 => 8.0 * x - 0.5,
        7 => 0.5 * x + 2.0,
        8 => x.tanh(),
        _ => 4.0 * x,
    }
}

#[test]
fn criterion_02_ap_equals_step_sum_oracle_and_is_transform_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for case in 0..500 {
        let n = rng.random_range(2..=50usize);
        let mut pairs: Vec<(f64, bool)> = (0..n)
            .map(|_| {
                (
                    rng.random_range(-32i32..=32) as f64 / 16.0,
                    rng.random_bool(0.4),
                )
            })
            .collect();
        pairs[0].1 = true;
        let last = pairs.len() - 1;
        pairs[last].1 = false;

        let ps = set_from_pairs(&pairs, "c2");
        let ap = curves::average_precision(&ps);
        let oracle = step_sum_ap_oracle(&pairs);
        assert_eq!(ap, oracle, "case {case}: AP differs from the step-sum oracle");

        for t in 0..10 {
            let mapped: Vec<(f64, bool)> = pairs
                .iter()
                .map(|&(s, m)| (increasing_transform(t, s), m))
                .collect();
            let mapped_ap = curves::average_precision(&set_from_pairs(&mapped, "c2t"));
            assert_eq!(ap, mapped_ap, "case {case}, transform {t}");
        }
    }
    println!("PASS criterion 2: AP == independent step-sum oracle exactly; invariant under 10 increasing transforms per set");
}

#[test]
fn criterion_03_binormal_analytic_auc_and_partial_auc() {
    let started = Instant::now();
    let spec = BinormalSpec {
        n_pos: 2000,
        n_neg: 2000,
        mu: 1.19,
        sigma: 1.0,
        seed: 303,
    };
    let analytic = spec.analytic_auc();
    assert!((analytic - 0.8).abs() < 5e-4, "analytic {analytic}");

    let ps = binormal_scores(&spec).unwrap();
    let auc = curves::auc_roc(&ps);
    assert!(
        (auc - analytic).abs() <= 0.02,
        "empirical {auc} vs analytic {analytic}"
    );

    // Fine-grid rectangle integration of the empirical at-least staircase:
    // at each grid sensitivity, the threshold is the k-th largest positive
    // score for the smallest sufficient k, and specificity counts the
    // negatives strictly below it.
    let mut pos: Vec<f64> = ps
        .items()
        .iter()
        .filter(|i| i.label.is_malignant())
        .map(|i| i.score)
        .collect();
    let mut neg: Vec<f64> = ps
        .items()
        .iter()
        .filter(|i| !i.label.is_malignant())
        .map(|i| i.score)
        .collect();
    pos.sort_by(f64::total_cmp);
    pos.reverse();
    neg.sort_by(f64::total_cmp);
    let n_pos = pos.len();
    let grid = 200_000usize;
    let lo = 0.95;
    let mut sum = 0.0;
    for step in 0..grid {
        let se = lo + (step as f64 + 0.5) * (1.0 - lo) / grid as f64;
        let mut k = (se * n_pos as f64).ceil() as usize;
        while k > 1 && (k - 1) as f64 / n_pos as f64 >= se {
            k -= 1;
        }
        while (k as f64 / n_pos as f64) < se {
            k += 1;
        }
        let threshold = pos[k - 1];
        let below = neg.partition_point(|&s| s < threshold);
        sum += below as f64 / neg.len() as f64;
    }
    let oracle_pauc = sum / grid as f64;
    let pauc = curves::partial_auc(&ps, lo).unwrap();
    assert!(
        (pauc - oracle_pauc).abs() <= 0.02,
        "partial AUC {pauc} vs grid oracle {oracle_pauc}"
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    println!(
        "PASS criterion 3: binormal AUC {auc:.4} within 0.02 of {analytic:.4}; \
         partial AUC {pauc:.4} within 0.02 of grid oracle {oracle_pauc:.4} ({elapsed:?})"
    );
}

#[test]
fn criterion_04_at_least_counting_on_the_default_composition() {
    assert_eq!(min_detected_for_target(75, 0.95), 72);
    assert_eq!(min_detected_for_target(75, 0.98), 74);
    assert_eq!(min_detected_for_target(75, 0.99), 75);
    // Stopping one melanoma short of a perfect catch reaches only
    // 74/75 ~ 0.9867, which misses the 0.99 target under this convention;
    // the interpolate convention is shipped for the laxer reading.
    let one_missed = (min_detected_for_target(75, 0.99) - 1) as f64 / 75.0;
    assert!(one_missed < 0.99);
    assert!((one_missed - 0.986_666_666_666_666_7).abs() < 1e-15);
    println!("PASS criterion 4: at-least requires 72/74/75 detected of 75 for targets 0.95/0.98/0.99; one missed = 0.9867 < 0.99 documented");
}

/// Random positive-definite covariance via L * L^T with positive diagonal.
#[allow(clippy::needless_range_loop)]
fn random_spd(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<f64>> {
    let mut l = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in 0..=i {
            l[i][j] = if i == j {
                rng.random_range(0.5..1.5)
            } else {
                rng.random_range(-0.5..0.5)
            };
        }
    }
    let mut cov = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            cov[i][j] = (0..dim).map(|k| l[i][k] * l[j][k]).sum();
        }
    }
    cov
}

#[allow(clippy::needless_range_loop)]
fn random_gaussian_dataset(rng: &mut ChaCha8Rng, dim: usize, n_per_class: usize) -> FeatureDataset {
    let cov_b = random_spd(rng, dim);
    let cov_m = random_spd(rng, dim);
    let chol = |cov: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        // Small-dim Cholesky by the classic recurrence.
        let mut l = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in 0..=i {
                let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
                if i == j {
                    l[i][j] = (cov[i][i] - s).sqrt();
                } else {
                    l[i][j] = (cov[i][j] - s) / l[j][j];
                }
            }
        }
        l
    };
    let l_b = chol(&cov_b);
    let l_m = chol(&cov_m);
    let shift: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();

    let mut items = Vec::new();
    for class in 0..2 {
        for idx in 0..n_per_class {
            let z: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
            let l = if class == 0 { &l_b } else { &l_m };
            let features: Vec<f64> = (0..dim)
                .map(|i| {
                    let base: f64 = (0..=i).map(|k| l[i][k] * z[k]).sum();
                    if class == 1 {
                        base + shift[i]
                    } else {
                        base
                    }
                })
                .collect();
            items.push(FeatureItem {
                item_id: format!("c{class}-{idx:03}"),
                label: if class == 1 { Label::Malignant } else { Label::Benign },
                features,
            });
        }
    }
    FeatureDataset::new(items).unwrap()
}

#[test]
fn criterion_05_prior_sweep_equals_llr_threshold_sweep_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let dims = [1usize, 2, 5];
    let mut compared_with_threshold = 0usize;
    let mut saturated = 0usize;

    for case in 0..100 {
        let variant = GdaVariant::ALL[case % 4];
        let dim = dims[case % 3];
        let train = random_gaussian_dataset(&mut rng, dim, 50);
        let test = random_gaussian_dataset(&mut rng, dim, 50);
        let model = GdaModel::fit(&train, variant, PriorMode::Empirical).unwrap();

        // Independent sweep: enumerate distinct llr thresholds and count
        // decisions by brute force.
        let llrs: Vec<(f64, bool)> = test
            .items()
            .iter()
            .map(|item| {
                (
                    model.log_likelihood_ratio(&item.features).unwrap(),
                    item.label.is_malignant(),
                )
            })
            .collect();
        let mut thresholds: Vec<f64> = llrs.iter().map(|p| p.0).collect();
        thresholds.sort_by(f64::total_cmp);
        thresholds.dedup();
        thresholds.reverse();
        let mut oracle_points: Vec<(usize, usize)> = vec![(0, 0)];
        for &t in &thresholds {
            let tp = llrs.iter().filter(|(s, m)| *s >= t && *m).count();
            let fp = llrs.iter().filter(|(s, m)| *s >= t && !*m).count();
            oracle_points.push((tp, fp));
        }

        let sweep = model.prior_sweep_roc(&test).unwrap();
        let sweep_points: Vec<(usize, usize)> = sweep
            .points()
            .iter()
            .map(|p| (p.counts.true_pos, p.counts.false_pos))
            .collect();
        assert_eq!(
            sweep_points, oracle_points,
            "case {case} ({variant}, d={dim}): prior sweep differs from the llr oracle"
        );

        // Wherever posteriors keep full resolution the threshold sweep must
        // produce the identical operating-point set.
        let posteriors: Vec<f64> = test
            .items()
            .iter()
            .map(|item| model.posterior(&item.features, None).unwrap())
            .collect();
        let mut distinct_posteriors = posteriors.clone();
        distinct_posteriors.sort_by(f64::total_cmp);
        distinct_posteriors.dedup();
        if distinct_posteriors.len() == thresholds.len() {
            let threshold_sweep = model.threshold_sweep_roc(&test).unwrap();
            let threshold_points: Vec<(usize, usize)> = threshold_sweep
                .points()
                .iter()
                .map(|p| (p.counts.true_pos, p.counts.false_pos))
                .collect();
            assert_eq!(threshold_points, sweep_points, "case {case}");
            compared_with_threshold += 1;
        } else {
            saturated += 1;
        }
    }
    println!(
        "PASS criterion 5: prior sweep == llr threshold sweep on 100 instances; \
         threshold sweep identical on {compared_with_threshold} unsaturated instances \
         ({saturated} saturated skipped)"
    );
}

#[test]
fn criterion_06_gda_posterior_closed_form_and_bayes_auc() {
    // Closed form: means 0 and 2, unit variance, prior 0.5 gives
    // posterior(x) = 1 / (1 + e^{2-2x}); an override pi scales the odds.
    let model = GdaModel::from_parts(
        GdaVariant::Lda,
        0.5,
        vec![0.0],
        vec![2.0],
        CovarianceSpec::PooledFull(vec![vec![1.0]]),
    )
    .unwrap();
    for i in 0..100 {
        let x = -4.0 + 8.0 * i as f64 / 99.0;
        let expected = 1.0 / (1.0 + (2.0 - 2.0 * x).exp());
        let got = model.posterior(&[x], None).unwrap();
        assert!((got - expected).abs() <= 1e-10, "x={x}: {got} vs {expected}");
        for prior in [0.3, 0.9] {
            let odds = (1.0 - prior) / prior;
            let expected = 1.0 / (1.0 + odds * (2.0 - 2.0 * x).exp());
            let got = model.posterior(&[x], Some(prior)).unwrap();
            assert!(
                (got - expected).abs() <= 1e-10,
                "x={x}, prior={prior}: {got} vs {expected}"
            );
        }
    }

    // QDA fitted on samples from its own generative model recovers the
    // Bayes AUC, estimated by a 10^6-pair Monte-Carlo oracle on the true
    // log-likelihood ratio (closed form, hand-coded 2x2 algebra).
    let mean_b = [0.0, 0.0];
    let mean_m = [1.0, 0.5];
    let cov_b = [[1.0, 0.3], [0.3, 1.0]];
    let cov_m = [[1.5, -0.4], [-0.4, 0.8]];

    let inv_logdet = |c: &[[f64; 2]; 2]| -> ([[f64; 2]; 2], f64) {
        let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        (
            [
                [c[1][1] / det, -c[0][1] / det],
                [-c[1][0] / det, c[0][0] / det],
            ],
            det.ln(),
        )
    };
    let (inv_b, logdet_b) = inv_logdet(&cov_b);
    let (inv_m, logdet_m) = inv_logdet(&cov_m);
    let true_llr = move |x: &[f64; 2]| -> f64 {
        let quad = |inv: &[[f64; 2]; 2], mean: &[f64; 2]| {
            let d = [x[0] - mean[0], x[1] - mean[1]];
            d[0] * (inv[0][0] * d[0] + inv[0][1] * d[1])
                + d[1] * (inv[1][0] * d[0] + inv[1][1] * d[1])
        };
        -0.5 * (quad(&inv_m, &mean_m) + logdet_m) + 0.5 * (quad(&inv_b, &mean_b) + logdet_b)
    };

    let chol = |c: &[[f64; 2]; 2]| -> [[f64; 2]; 2] {
        let l00 = c[0][0].sqrt();
        let l10 = c[0][1] / l00;
        let l11 = (c[1][1] - l10 * l10).sqrt();
        [[l00, 0.0], [l10, l11]]
    };
    let l_b = chol(&cov_b);
    let l_m = chol(&cov_m);
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let draw = |mean: &[f64; 2], l: &[[f64; 2]; 2], rng: &mut ChaCha8Rng| -> [f64; 2] {
        let z0: f64 = StandardNormal.sample(rng);
        let z1: f64 = StandardNormal.sample(rng);
        [
            mean[0] + l[0][0] * z0,
            mean[1] + l[1][0] * z0 + l[1][1] * z1,
        ]
    };

    let mut bayes_credit = 0.0;
    for _ in 0..1_000_000 {
        let xp = draw(&mean_m, &l_m, &mut rng);
        let xn = draw(&mean_b, &l_b, &mut rng);
        let lp = true_llr(&xp);
        let ln = true_llr(&xn);
        if lp > ln {
            bayes_credit += 1.0;
        } else if lp == ln {
            bayes_credit += 0.5;
        }
    }
    let bayes_auc = bayes_credit / 1_000_000.0;

    let build = |n: usize, tag: &str, rng: &mut ChaCha8Rng| -> FeatureDataset {
        let mut items = Vec::with_capacity(2 * n);
        for idx in 0..n {
            let x = draw(&mean_m, &l_m, rng);
            items.push(FeatureItem {
                item_id: format!("{tag}-m{idx}"),
                label: Label::Malignant,
                features: x.to_vec(),
            });
            let x = draw(&mean_b, &l_b, rng);
            items.push(FeatureItem {
                item_id: format!("{tag}-b{idx}"),
                label: Label::Benign,
                features: x.to_vec(),
            });
        }
        FeatureDataset::new(items).unwrap()
    };
    let train = build(5000, "train", &mut rng);
    let test = build(2000, "test", &mut rng);
    let model = GdaModel::fit(&train, GdaVariant::Qda, PriorMode::Empirical).unwrap();
    let scores = model.posterior_scores(&test, "qda").unwrap();
    let auc = curves::auc_roc(&scores);
    assert!(
        (auc - bayes_auc).abs() <= 0.02,
        "fitted QDA test AUC {auc} vs Bayes AUC {bayes_auc}"
    );
    println!(
        "PASS criterion 6: 1-D LDA matches the closed-form logistic to 1e-10 \
         (including prior overrides); QDA test AUC {auc:.4} within 0.02 of \
         Monte-Carlo Bayes AUC {bayes_auc:.4}"
    );
}

#[test]
fn criterion_07_four_variants_produce_distinct_high_sensitivity_triples() {
    let dir = tempfile::tempdir().unwrap();
    let train_prefix = dir.path().join("train");
    let test_prefix = dir.path().join("test");
    for (prefix, seed) in [(&train_prefix, "7001"), (&test_prefix, "7002")] {
        let status = bin()
            .args([
                "synth",
                "--features",
                "3",
                "--pos",
                "150",
                "--neg",
                "450",
                "--mu",
                "1.6",
                "--sigma",
                "1.5",
                "--seed",
                seed,
                "--out",
            ])
            .arg(prefix)
            .status()
            .unwrap();
        assert!(status.success());
    }

    let report_path = dir.path().join("gda.json");
    let output = bin()
        .args(["gda", "--train"])
        .arg(train_prefix.with_extension("features.csv"))
        .arg("--test")
        .arg(test_prefix.with_extension("features.csv"))
        .args(["--variant", "all", "--sweep", "prior", "--out"])
        .arg(&report_path)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");

    let stdout = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    let header = lines[0];
    let pos = |needle: &str| header.find(needle).unwrap_or_else(|| panic!("missing {needle}"));
    assert!(
        pos("LDA") < pos("QDA") && pos("QDA") < pos("dLDA") && pos("dLDA") < pos("dQDA"),
        "grid header out of order: {header}"
    );
    for row in ["SE = 95%", "SE = 98%", "SE = 99%"] {
        assert!(lines.iter().any(|l| l.starts_with(row)), "missing row {row}");
    }

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let systems = report["systems"].as_array().unwrap();
    assert_eq!(systems.len(), 4);
    let triples: Vec<(f64, f64, f64)> = systems
        .iter()
        .map(|s| {
            (
                s["spec_at"]["0.95"].as_f64().unwrap(),
                s["spec_at"]["0.98"].as_f64().unwrap(),
                s["spec_at"]["0.99"].as_f64().unwrap(),
            )
        })
        .collect();
    for i in 0..4 {
        for j in (i + 1)..4 {
            assert_ne!(
                triples[i], triples[j],
                "variants {i} and {j} produced identical spec@SE triples"
            );
        }
    }
    println!("PASS criterion 7: four variants, four distinct spec@SE triples, grid rendered with LDA/QDA/dLDA/dQDA columns");
}

#[test]
fn criterion_08_rank_reversal_and_field_disagreement() {
    // Fixture orderings, checked by the independent oracles.
    let (s1, s2) = crossing_pair();
    let to_pairs = |ps: &mdrank::PredictionSet| -> Vec<(f64, bool)> {
        ps.items()
            .iter()
            .map(|i| (i.score, i.label.is_malignant()))
            .collect()
    };
    let ap1 = step_sum_ap_oracle(&to_pairs(&s1));
    let ap2 = step_sum_ap_oracle(&to_pairs(&s2));
    assert!(ap1 > ap2, "AP oracle ordering: {ap1} vs {ap2}");
    let sp1 = spec_at_oracle(&to_pairs(&s1), 0.98);
    let sp2 = spec_at_oracle(&to_pairs(&s2), 0.98);
    assert!(sp2 > sp1, "spec@0.98 oracle ordering: {sp2} vs {sp1}");
    assert_eq!(curves::average_precision(&s1), ap1);
    assert_eq!(curves::average_precision(&s2), ap2);
    assert_eq!(
        curves::spec_at_sensitivity(&s1, 0.98, SpecConvention::AtLeast).unwrap(),
        sp1
    );
    assert_eq!(
        curves::spec_at_sensitivity(&s2, 0.98, SpecConvention::AtLeast).unwrap(),
        sp2
    );

    // A ten-system synthetic field: the AP ranking must disagree with at
    // least one high-sensitivity ranking.
    let systems = (0..10)
        .map(|i| {
            (
                format!("sys-{i:02}"),
                1.0 + 0.08 * i as f64,
                0.6 + 0.22 * i as f64,
            )
        })
        .collect();
    let field = synth_challenge(&SynthChallengeSpec {
        n_pos: 75,
        n_neg: 304,
        systems,
        seed: 2024,
    })
    .unwrap();

    let dir = tempfile::tempdir().unwrap();
    let subs = dir.path().join("subs");
    std::fs::create_dir(&subs).unwrap();
    for ps in &field {
        std::fs::write(
            subs.join(format!("{}.csv", ps.system_id())),
            ps.to_predictions_csv(),
        )
        .unwrap();
    }
    let truth_path = dir.path().join("truth.csv");
    std::fs::write(&truth_path, field[0].to_truth_csv()).unwrap();

    let report_path = dir.path().join("rank.json");
    let output = bin()
        .args(["rank", "--submissions"])
        .arg(&subs)
        .arg("--truth")
        .arg(&truth_path)
        .arg("--out")
        .arg(&report_path)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let agreements = report["rank_agreement"].as_array().unwrap();
    let high_sensitivity = ["spec_at_95", "spec_at_98", "spec_at_99", "pauc_95_100"];
    let taus: Vec<f64> = agreements
        .iter()
        .filter(|a| {
            a["measure_a"] == "average_precision"
                && high_sensitivity.contains(&a["measure_b"].as_str().unwrap())
        })
        .map(|a| a["kendall_tau"].as_f64().unwrap())
        .collect();
    assert_eq!(taus.len(), 4);
    assert!(
        taus.iter().any(|&tau| tau < 1.0),
        "AP ranking agrees perfectly with every high-sensitivity ranking: {taus:?}"
    );
    println!(
        "PASS criterion 8: crossing fixture reverses (AP {ap1:.3}>{ap2:.3}, spec@98 {sp2:.2}>{sp1:.2}); \
         field tau(AP, high-sens) = {taus:?}"
    );
}

#[test]
fn criterion_09_bootstrap_determinism_across_thread_counts() {
    let ps = binormal_scores(&BinormalSpec {
        n_pos: 75,
        n_neg: 304,
        mu: 1.19,
        sigma: 1.0,
        seed: 909,
    })
    .unwrap();

    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| bootstrap_measure(&ps, Measure::SpecAt95, 1000, 4242, true).unwrap())
    };
    let single = run(1);
    let multi = run(8);
    assert_eq!(single.replicate_values, multi.replicate_values);
    assert!(single.mean == multi.mean && single.ci_lo == multi.ci_lo && single.ci_hi == multi.ci_hi);
    assert_eq!(single.point_estimate, multi.point_estimate);

    // Stratified replicates preserve the class counts exactly.
    for replicate in 0..100u64 {
        let mut rng = mdrank::resampling::replicate_rng(4242, replicate);
        let drawn = stratified_resample(&ps, &mut rng);
        let n_pos = drawn.iter().filter(|(_, m)| *m).count();
        assert_eq!(n_pos, ps.n_pos());
        assert_eq!(drawn.len() - n_pos, ps.n_neg());
    }
    println!("PASS criterion 9: bit-identical bootstrap across 1 and 8 threads; stratified replicates preserve n_pos exactly");
}

/// All competition-rank vectors of length n (every weak order), via gapless
/// level assignments.
fn all_rank_vectors(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let total = n.pow(n as u32);
    'outer: for code in 0..total {
        let mut levels = vec![0usize; n];
        let mut c = code;
        let mut max_level = 0;
        for slot in levels.iter_mut() {
            *slot = c % n;
            max_level = max_level.max(*slot);
            c /= n;
        }
        // Levels must be used without gaps for a canonical representation.
        for level in 0..=max_level {
            if !levels.contains(&level) {
                continue 'outer;
            }
        }
        let ranks: Vec<usize> = levels
            .iter()
            .map(|&l| 1 + levels.iter().filter(|&&other| other < l).count())
            .collect();
        out.push(ranks);
    }
    out
}

/// Direct pair-classification tau-b: concordant/discordant and per-side
/// tie counts accumulated pair by pair.
fn tau_oracle(x: &[usize], y: &[usize]) -> Option<(f64, usize)> {
    let n = x.len();
    let (mut c, mut d, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i].cmp(&x[j]);
            let dy = y[i].cmp(&y[j]);
            match (dx.is_eq(), dy.is_eq()) {
                (true, true) => {}
                (true, false) => tx += 1,
                (false, true) => ty += 1,
                (false, false) => {
                    if dx == dy {
                        c += 1;
                    } else {
                        d += 1;
                    }
                }
            }
        }
    }
    let denom = (((c + d + ty) as f64) * ((c + d + tx) as f64)).sqrt();
    if denom == 0.0 {
        return None;
    }
    Some(((c - d) as f64 / denom, d as usize))
}

#[test]
fn criterion_10_kendall_tau_exhaustive_up_to_six() {
    use rayon::prelude::*;
    let started = Instant::now();
    let mut checked = 0u64;
    for n in 2..=6usize {
        let vectors = all_rank_vectors(n);
        let counts: Vec<u64> = vectors
            .par_iter()
            .map(|x| {
                let mut local = 0u64;
                for y in &vectors {
                    let oracle = tau_oracle(x, y);
                    let ours = kendall_tau_from_ranks(x, y).ok();
                    match (oracle, ours) {
                        (None, None) => {}
                        (Some((tau, flips)), Some((got_tau, got_flips))) => {
                            assert_eq!(tau, got_tau, "x={x:?} y={y:?}");
                            assert_eq!(flips, got_flips, "x={x:?} y={y:?}");
                        }
                        (o, g) => panic!("definedness mismatch for x={x:?} y={y:?}: {o:?} vs {g:?}"),
                    }
                    local += 1;
                }
                local
            })
            .collect();
        checked += counts.iter().sum::<u64>();
    }
    println!(
        "PASS criterion 10: tau-b equals the brute-force pair count on {checked} rank-vector pairs (n <= 6, with ties) ({:?})",
        started.elapsed()
    );
}

#[test]
fn criterion_11_end_to_end_golden_report() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("cohort");
    let status = bin()
        .args(["synth", "--seed", "42", "--out"])
        .arg(&prefix)
        .status()
        .unwrap();
    assert!(status.success());

    let report_path = dir.path().join("report.json");
    let status = bin()
        .args(["evaluate", "--predictions"])
        .arg(prefix.with_extension("predictions.csv"))
        .arg("--truth")
        .arg(prefix.with_extension("truth.csv"))
        .arg("--out")
        .arg(&report_path)
        .status()
        .unwrap();
    assert!(status.success());

    let produced = std::fs::read(&report_path).unwrap();
    let golden_path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/evaluate_synth42.json"
    );
    let golden = std::fs::read(golden_path).unwrap_or_else(|_| {
        panic!("golden file missing; generate with the synth/evaluate pipeline and commit it")
    });
    assert_eq!(
        produced,
        golden,
        "report bytes differ from the checked-in golden file"
    );
    println!("PASS criterion 11: synth(seed 42) -> evaluate produces a byte-identical golden report");
}
