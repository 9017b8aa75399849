//! Synthetic score cohorts and Gaussian feature datasets with known
//! analytic ground truth.
//!
//! The binormal family (benign scores N(0, 1), malignant scores
//! N(mu, sigma^2)) has the closed-form area `AUC = Phi(mu / sqrt(1 +
//! sigma^2))`, which makes it the reference oracle for everything
//! downstream. The default cohort shape, 75 malignant and 304 benign,
//! keeps small-positive-count effects visible: one melanoma is already
//! 1.33% sensitivity.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use statrs::distribution::{ContinuousCDF, Normal as GaussianDist};

use crate::data::{FeatureDataset, FeatureItem, Label, LabeledScore, PredictionSet};
use crate::error::{Error, Result};

/// Default cohort composition for synthetic score files.
pub const DEFAULT_N_POS: usize = 75;
pub const DEFAULT_N_NEG: usize = 304;
/// Default separation; gives an analytic AUC of about 0.8.
pub const DEFAULT_MU: f64 = 1.19;
pub const DEFAULT_SIGMA: f64 = 1.0;

/// Parameters of a binormal score cohort: benign scores are N(0, 1),
/// malignant scores are N(mu, sigma^2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinormalSpec {
    pub n_pos: usize,
    pub n_neg: usize,
    pub mu: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl Default for BinormalSpec {
    fn default() -> Self {
        BinormalSpec {
            n_pos: DEFAULT_N_POS,
            n_neg: DEFAULT_N_NEG,
            mu: DEFAULT_MU,
            sigma: DEFAULT_SIGMA,
            seed: 42,
        }
    }
}

impl BinormalSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_pos == 0 || self.n_neg == 0 {
            return Err(Error::invalid("both class counts must be >= 1"));
        }
        if !self.mu.is_finite() {
            return Err(Error::invalid("mu must be finite"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::invalid("sigma must be finite and > 0"));
        }
        Ok(())
    }

    /// Closed-form AUC of the generating model:
    /// `Phi(mu / sqrt(1 + sigma^2))`.
    pub fn analytic_auc(&self) -> f64 {
        let std_normal = GaussianDist::standard();
        std_normal.cdf(self.mu / (1.0 + self.sigma * self.sigma).sqrt())
    }
}

/// Item ids shared by every cohort drawn over the same composition:
/// `item-00001..` with the malignant items first.
fn cohort_ids(n_pos: usize, n_neg: usize) -> Vec<(String, Label)> {
    (0..n_pos + n_neg)
        .map(|i| {
            let label = if i < n_pos {
                Label::Malignant
            } else {
                Label::Benign
            };
            (format!("item-{:05}", i + 1), label)
        })
        .collect()
}

fn draw_binormal_scores(
    spec: &BinormalSpec,
    ids: &[(String, Label)],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<LabeledScore>> {
    let pos_dist = Normal::new(spec.mu, spec.sigma).map_err(|e| Error::invalid(e.to_string()))?;
    let neg_dist = Normal::new(0.0, 1.0).expect("unit normal");
    Ok(ids
        .iter()
        .map(|(id, label)| LabeledScore {
            item_id: id.clone(),
            score: if label.is_malignant() {
                pos_dist.sample(rng)
            } else {
                neg_dist.sample(rng)
            },
            label: *label,
        })
        .collect())
}

/// Draws one binormal cohort, deterministic in the seed.
pub fn binormal_scores(spec: &BinormalSpec) -> Result<PredictionSet> {
    spec.validate()?;
    let ids = cohort_ids(spec.n_pos, spec.n_neg);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let items = draw_binormal_scores(spec, &ids, &mut rng)?;
    PredictionSet::new("binormal", items)
}

/// A synthetic field of systems scoring one shared item set, for ranking
/// experiments. Each entry is (system id, mu, sigma).
#[derive(Clone, Debug)]
pub struct SynthChallengeSpec {
    pub n_pos: usize,
    pub n_neg: usize,
    pub systems: Vec<(String, f64, f64)>,
    pub seed: u64,
}

/// Generates one prediction set per system over the identical item
/// universe; system i draws from stream i of the master seed.
pub fn synth_challenge(spec: &SynthChallengeSpec) -> Result<Vec<PredictionSet>> {
    if spec.systems.is_empty() {
        return Err(Error::invalid("at least one system required"));
    }
    let ids = cohort_ids(spec.n_pos, spec.n_neg);
    spec.systems
        .iter()
        .enumerate()
        .map(|(index, (system_id, mu, sigma))| {
            let single = BinormalSpec {
                n_pos: spec.n_pos,
                n_neg: spec.n_neg,
                mu: *mu,
                sigma: *sigma,
                seed: spec.seed,
            };
            single.validate()?;
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(index as u64);
            let items = draw_binormal_scores(&single, &ids, &mut rng)?;
            PredictionSet::new(system_id.clone(), items)
        })
        .collect()
}

/// Parameters of a two-class multivariate Gaussian feature cohort.
#[derive(Clone, Debug)]
pub struct GaussianFeatureSpec {
    pub n_benign: usize,
    pub n_malignant: usize,
    pub mean_benign: Vec<f64>,
    pub mean_malignant: Vec<f64>,
    pub cov_benign: Vec<Vec<f64>>,
    pub cov_malignant: Vec<Vec<f64>>,
    pub seed: u64,
}

fn cholesky_factor(cov: &[Vec<f64>], dim: usize) -> Result<DMatrix<f64>> {
    if cov.len() != dim || cov.iter().any(|row| row.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: cov.len(),
        });
    }
    let mat = DMatrix::from_fn(dim, dim, |i, j| cov[i][j]);
    let chol = Cholesky::new(mat).ok_or(Error::NonPositiveDefinite)?;
    Ok(chol.unpack())
}

/// Draws labelled multivariate normal features, deterministic in the seed.
pub fn gaussian_features(spec: &GaussianFeatureSpec) -> Result<FeatureDataset> {
    let dim = spec.mean_benign.len();
    if dim == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    if spec.mean_malignant.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: spec.mean_malignant.len(),
        });
    }
    if spec.n_benign == 0 || spec.n_malignant == 0 {
        return Err(Error::invalid("both class counts must be >= 1"));
    }
    let l_benign = cholesky_factor(&spec.cov_benign, dim)?;
    let l_malignant = cholesky_factor(&spec.cov_malignant, dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut draw = |mean: &[f64], l: &DMatrix<f64>, label: Label, index: usize| {
        let z = DVector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
        let x = DVector::from_row_slice(mean) + l * z;
        FeatureItem {
            item_id: format!("{}-{:05}", label, index + 1),
            label,
            features: x.iter().copied().collect(),
        }
    };

    let mut items = Vec::with_capacity(spec.n_benign + spec.n_malignant);
    for i in 0..spec.n_malignant {
        items.push(draw(&spec.mean_malignant, &l_malignant, Label::Malignant, i));
    }
    for i in 0..spec.n_benign {
        items.push(draw(&spec.mean_benign, &l_benign, Label::Benign, i));
    }
    FeatureDataset::new(items)
}

/// A heteroscedastic feature cohort: benign features are unit-variance
/// with Toeplitz correlation 0.3, malignant features are shifted by
/// `mu / sqrt(d)` per coordinate and scaled by `sigma` with Toeplitz
/// correlation 0.6. Class covariances differ and are non-diagonal, so all
/// four discriminant variants genuinely disagree on it.
pub fn heteroscedastic_features(
    n_pos: usize,
    n_neg: usize,
    mu: f64,
    sigma: f64,
    dim: usize,
    seed: u64,
) -> Result<FeatureDataset> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    let toeplitz = |rho: f64, scale: f64| -> Vec<Vec<f64>> {
        (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| scale * rho.powi((i as i32 - j as i32).abs()))
                    .collect()
            })
            .collect()
    };
    let shift = mu / (dim as f64).sqrt();
    gaussian_features(&GaussianFeatureSpec {
        n_benign: n_neg,
        n_malignant: n_pos,
        mean_benign: vec![0.0; dim],
        mean_malignant: vec![shift; dim],
        cov_benign: toeplitz(0.3, 1.0),
        cov_malignant: toeplitz(0.6, sigma * sigma),
        seed,
    })
}

/// A constant two-system fixture over one shared item set whose ranking
/// reverses between measures: S1 wins under average precision while S2
/// wins under specificity at 98% sensitivity (and the other
/// high-sensitivity measures).
///
/// S1 ranks four of its five positives on top but buries the fifth below
/// every negative, which barely dents its average precision yet drags the
/// full-detection operating point to zero specificity. S2 ranks all five
/// positives above eight of ten negatives: mediocre average precision,
/// robust specificity once every positive is caught.
pub fn crossing_pair() -> (PredictionSet, PredictionSet) {
    const S1: [f64; 15] = [
        0.99, 0.98, 0.97, 0.96, 0.01, // positives it-01..it-05
        0.90, 0.85, 0.80, 0.75, 0.70, 0.30, 0.25, 0.20, 0.15, 0.10,
    ];
    const S2: [f64; 15] = [
        0.715, 0.64, 0.63, 0.62, 0.61, // positives it-01..it-05
        0.72, 0.71, 0.45, 0.40, 0.35, 0.33, 0.28, 0.22, 0.18, 0.12,
    ];
    let build = |system_id: &str, scores: &[f64; 15]| {
        let items = scores
            .iter()
            .enumerate()
            .map(|(i, &score)| LabeledScore {
                item_id: format!("it-{:02}", i + 1),
                score,
                label: if i < 5 { Label::Malignant } else { Label::Benign },
            })
            .collect();
        PredictionSet::new(system_id, items).expect("fixture is valid")
    };
    (build("s1", &S1), build("s2", &S2))
}
