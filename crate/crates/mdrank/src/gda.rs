//! Gaussian discriminant classifiers: LDA, QDA, and their diagonal
//! (naive-Bayes) variants dLDA and dQDA.
//!
//! A fitted model scores an observation with the posterior probability of
//! malignancy. Operating points can be generated two ways:
//!
//! * **threshold sweep** — score every item with the posterior at the
//!   model prior and sweep the decision threshold over (0, 1);
//! * **prior sweep** — fix the decision cut at posterior >= 0.5 and sweep
//!   the malignant prior over (0, 1). Deciding `posterior(x, pi) >= 0.5`
//!   is equivalent to `llr(x) >= ln((1 - pi) / pi)`, so the sweep is
//!   realized exactly as a threshold sweep of the per-item log-likelihood
//!   ratio, computed in log space. This sidesteps the resolution loss when
//!   many posteriors round to 1.0 in double precision, which is the reason
//!   the prior sweep exists.
//!
//! All density arithmetic happens on log scale; posteriors never divide
//! raw densities, so widely separated classes cannot produce 0/0.

use std::fmt;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::Serialize;

use crate::curves::{roc_curve, RocCurve};
use crate::data::{FeatureDataset, Label, LabeledScore, PredictionSet};
use crate::error::{Error, Result};

/// Ridge factor: every fitted covariance receives `RIDGE_FACTOR * mean
/// diagonal` added to its diagonal, unconditionally. The applied value is
/// stated in the model document.
pub const RIDGE_FACTOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GdaVariant {
    /// Pooled full covariance.
    Lda,
    /// Per-class full covariance.
    Qda,
    /// Pooled diagonal covariance (naive Bayes with shared variances).
    DLda,
    /// Per-class diagonal covariance (naive Bayes).
    DQda,
}

impl GdaVariant {
    pub const ALL: [GdaVariant; 4] = [
        GdaVariant::Lda,
        GdaVariant::Qda,
        GdaVariant::DLda,
        GdaVariant::DQda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GdaVariant::Lda => "lda",
            GdaVariant::Qda => "qda",
            GdaVariant::DLda => "dlda",
            GdaVariant::DQda => "dqda",
        }
    }

    /// Column label used in rendered grids.
    pub fn label(self) -> &'static str {
        match self {
            GdaVariant::Lda => "LDA",
            GdaVariant::Qda => "QDA",
            GdaVariant::DLda => "dLDA",
            GdaVariant::DQda => "dQDA",
        }
    }

    pub fn parse(s: &str) -> Option<GdaVariant> {
        match s.to_ascii_lowercase().as_str() {
            "lda" => Some(GdaVariant::Lda),
            "qda" => Some(GdaVariant::Qda),
            "dlda" => Some(GdaVariant::DLda),
            "dqda" => Some(GdaVariant::DQda),
            _ => None,
        }
    }

    /// Whether covariances are restricted to their diagonal.
    pub fn is_diagonal(self) -> bool {
        matches!(self, GdaVariant::DLda | GdaVariant::DQda)
    }

    /// Whether one covariance is pooled across classes.
    pub fn is_pooled(self) -> bool {
        matches!(self, GdaVariant::Lda | GdaVariant::DLda)
    }
}

impl fmt::Display for GdaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the malignant prior of a fitted model is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PriorMode {
    /// Class fraction of the training set.
    Empirical,
    /// A fixed prior in (0, 1).
    Fixed(f64),
}

/// Which operating-point sweep scores the evaluation items.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    /// Posterior at the model prior, decision threshold swept.
    Threshold,
    /// Malignant prior swept at a fixed 0.5 cut; scored as the
    /// log-likelihood ratio, which is exactly equivalent and immune to
    /// posterior saturation.
    Prior,
}

impl Sweep {
    pub fn name(self) -> &'static str {
        match self {
            Sweep::Threshold => "threshold",
            Sweep::Prior => "prior",
        }
    }

    pub fn parse(s: &str) -> Option<Sweep> {
        match s.to_ascii_lowercase().as_str() {
            "threshold" => Some(Sweep::Threshold),
            "prior" => Some(Sweep::Prior),
            _ => None,
        }
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Covariance parameters for direct model construction.
#[derive(Clone, Debug)]
pub enum CovarianceSpec {
    PooledFull(Vec<Vec<f64>>),
    PerClassFull {
        benign: Vec<Vec<f64>>,
        malignant: Vec<Vec<f64>>,
    },
    PooledDiagonal(Vec<f64>),
    PerClassDiagonal {
        benign: Vec<f64>,
        malignant: Vec<f64>,
    },
}

/// Prepared per-class Gaussian: whatever is needed to evaluate the log
/// density quickly.
#[derive(Clone, Debug)]
enum Density {
    Full {
        chol: Cholesky<f64, Dyn>,
        logdet: f64,
    },
    Diag {
        vars: Vec<f64>,
        logdet: f64,
    },
}

impl Density {
    fn from_full(cov: &DMatrix<f64>) -> Result<Self> {
        let chol = Cholesky::new(cov.clone()).ok_or(Error::NonPositiveDefinite)?;
        let logdet = 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        Ok(Density::Full { chol, logdet })
    }

    fn from_diag(vars: &[f64]) -> Result<Self> {
        if vars.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::NonPositiveDefinite);
        }
        let logdet = vars.iter().map(|v| v.ln()).sum();
        Ok(Density::Diag {
            vars: vars.to_vec(),
            logdet,
        })
    }

    /// ln N(x; mean, Sigma), including the normalizing constant.
    fn log_density(&self, x: &[f64], mean: &DVector<f64>) -> f64 {
        const LN_2PI: f64 = 1.837_877_066_409_345_5;
        let d = mean.len();
        match self {
            Density::Full { chol, logdet } => {
                let diff = DVector::from_iterator(d, x.iter().zip(mean.iter()).map(|(a, b)| a - b));
                let solved = chol.solve(&diff);
                let quad = diff.dot(&solved);
                -0.5 * (quad + logdet + d as f64 * LN_2PI)
            }
            Density::Diag { vars, logdet } => {
                let quad: f64 = x
                    .iter()
                    .zip(mean.iter())
                    .zip(vars.iter())
                    .map(|((a, b), v)| {
                        let diff = a - b;
                        diff * diff / v
                    })
                    .sum();
                -0.5 * (quad + logdet + d as f64 * LN_2PI)
            }
        }
    }
}

/// Stored covariance parameters, after any ridge, as written to the model
/// document.
#[derive(Clone, Debug)]
enum StoredCovariance {
    PooledFull(DMatrix<f64>),
    PerClassFull {
        benign: DMatrix<f64>,
        malignant: DMatrix<f64>,
    },
    PooledDiag(Vec<f64>),
    PerClassDiag {
        benign: Vec<f64>,
        malignant: Vec<f64>,
    },
}

/// Ridge amounts that were added to each covariance diagonal; equal for
/// the two classes of a pooled variant, zero for directly constructed
/// models.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RidgeApplied {
    pub benign: f64,
    pub malignant: f64,
}

/// A fitted (or directly constructed) Gaussian discriminant model.
/// Immutable; scoring is pure and safe to share across threads.
#[derive(Clone, Debug)]
pub struct GdaModel {
    variant: GdaVariant,
    prior_malignant: f64,
    dim: usize,
    mean_benign: DVector<f64>,
    mean_malignant: DVector<f64>,
    cov: StoredCovariance,
    ridge: RidgeApplied,
    benign: Density,
    malignant: Density,
}

fn stable_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn validate_prior(prior: f64) -> Result<f64> {
    if !(prior.is_finite() && prior > 0.0 && prior < 1.0) {
        return Err(Error::invalid(format!(
            "prior must lie strictly inside (0, 1), got {prior}"
        )));
    }
    Ok(prior)
}

fn class_mean(rows: &[&[f64]], dim: usize) -> DVector<f64> {
    let mut mean = DVector::zeros(dim);
    for row in rows {
        for (j, v) in row.iter().enumerate() {
            mean[j] += v;
        }
    }
    mean / rows.len() as f64
}

/// Maximum-likelihood scatter sum (not yet divided by n).
fn scatter(rows: &[&[f64]], mean: &DVector<f64>, dim: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(dim, dim);
    for row in rows {
        let diff = DVector::from_iterator(dim, row.iter().zip(mean.iter()).map(|(a, b)| a - b));
        s.ger(1.0, &diff, &diff, 1.0);
    }
    s
}

/// Adds `RIDGE_FACTOR * mean diagonal` to the diagonal. Fails when the
/// whole diagonal is zero, i.e. every feature is constant in scope; the
/// error names the first constant feature.
fn ridge_full(cov: &mut DMatrix<f64>) -> Result<f64> {
    let dim = cov.nrows();
    let mean_diag = cov.diagonal().sum() / dim as f64;
    let lambda = RIDGE_FACTOR * mean_diag;
    if lambda <= 0.0 {
        let index = (0..dim).find(|&j| cov[(j, j)] == 0.0).unwrap_or(0);
        return Err(Error::ConstantFeature { index });
    }
    for j in 0..dim {
        cov[(j, j)] += lambda;
    }
    Ok(lambda)
}

fn ridge_diag(vars: &mut [f64]) -> Result<f64> {
    let mean_diag = vars.iter().sum::<f64>() / vars.len() as f64;
    let lambda = RIDGE_FACTOR * mean_diag;
    if lambda <= 0.0 {
        let index = vars.iter().position(|&v| v == 0.0).unwrap_or(0);
        return Err(Error::ConstantFeature { index });
    }
    for v in vars.iter_mut() {
        *v += lambda;
    }
    Ok(lambda)
}

fn check_square(m: &[Vec<f64>], dim: usize) -> Result<DMatrix<f64>> {
    if m.len() != dim || m.iter().any(|row| row.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.len(),
        });
    }
    let mat = DMatrix::from_fn(dim, dim, |i, j| m[i][j]);
    let scale = mat.diagonal().amax().max(f64::MIN_POSITIVE);
    for i in 0..dim {
        for j in 0..i {
            if (mat[(i, j)] - mat[(j, i)]).abs() > 1e-9 * scale {
                return Err(Error::invalid("covariance matrix is not symmetric"));
            }
        }
    }
    Ok(mat)
}

impl GdaModel {
    /// Fits the model by maximum likelihood: class means, covariances per
    /// variant (pooled for LDA/dLDA, per class for QDA/dQDA, diagonals only
    /// for the d-variants), plus the unconditional ridge.
    pub fn fit(ds: &FeatureDataset, variant: GdaVariant, prior_mode: PriorMode) -> Result<Self> {
        let dim = ds.dim();
        let benign_rows = ds.class_rows(Label::Benign);
        let malignant_rows = ds.class_rows(Label::Malignant);
        for (label, rows) in [
            (Label::Benign, &benign_rows),
            (Label::Malignant, &malignant_rows),
        ] {
            if rows.len() < 2 {
                return Err(Error::ClassTooSmall {
                    label,
                    size: rows.len(),
                    needed: 2,
                });
            }
        }
        let n_b = benign_rows.len() as f64;
        let n_m = malignant_rows.len() as f64;
        let mean_benign = class_mean(&benign_rows, dim);
        let mean_malignant = class_mean(&malignant_rows, dim);
        let prior_malignant = match prior_mode {
            PriorMode::Empirical => n_m / (n_b + n_m),
            PriorMode::Fixed(p) => validate_prior(p)?,
        };

        let scatter_b = scatter(&benign_rows, &mean_benign, dim);
        let scatter_m = scatter(&malignant_rows, &mean_malignant, dim);

        let (cov, ridge) = match variant {
            GdaVariant::Lda => {
                let mut pooled = (scatter_b + scatter_m) / (n_b + n_m);
                let lambda = ridge_full(&mut pooled)?;
                (
                    StoredCovariance::PooledFull(pooled),
                    RidgeApplied {
                        benign: lambda,
                        malignant: lambda,
                    },
                )
            }
            GdaVariant::Qda => {
                let mut cov_b = scatter_b / n_b;
                let mut cov_m = scatter_m / n_m;
                let lambda_b = ridge_full(&mut cov_b)?;
                let lambda_m = ridge_full(&mut cov_m)?;
                (
                    StoredCovariance::PerClassFull {
                        benign: cov_b,
                        malignant: cov_m,
                    },
                    RidgeApplied {
                        benign: lambda_b,
                        malignant: lambda_m,
                    },
                )
            }
            GdaVariant::DLda => {
                let pooled = (scatter_b + scatter_m) / (n_b + n_m);
                let mut vars: Vec<f64> = pooled.diagonal().iter().copied().collect();
                let lambda = ridge_diag(&mut vars)?;
                (
                    StoredCovariance::PooledDiag(vars),
                    RidgeApplied {
                        benign: lambda,
                        malignant: lambda,
                    },
                )
            }
            GdaVariant::DQda => {
                let mut vars_b: Vec<f64> =
                    (scatter_b / n_b).diagonal().iter().copied().collect();
                let mut vars_m: Vec<f64> =
                    (scatter_m / n_m).diagonal().iter().copied().collect();
                let lambda_b = ridge_diag(&mut vars_b)?;
                let lambda_m = ridge_diag(&mut vars_m)?;
                (
                    StoredCovariance::PerClassDiag {
                        benign: vars_b,
                        malignant: vars_m,
                    },
                    RidgeApplied {
                        benign: lambda_b,
                        malignant: lambda_m,
                    },
                )
            }
        };

        Self::assemble(variant, prior_malignant, mean_benign, mean_malignant, cov, ridge)
    }

    /// Builds a model from explicit parameters, exactly as given (no
    /// ridge). Covariances must match the variant and be positive definite.
    pub fn from_parts(
        variant: GdaVariant,
        prior_malignant: f64,
        mean_benign: Vec<f64>,
        mean_malignant: Vec<f64>,
        covariance: CovarianceSpec,
    ) -> Result<Self> {
        let prior = validate_prior(prior_malignant)?;
        let dim = mean_benign.len();
        if dim == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        if mean_malignant.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: mean_malignant.len(),
            });
        }
        let check_vec = |v: &Vec<f64>| -> Result<Vec<f64>> {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            Ok(v.clone())
        };
        let cov = match (variant, covariance) {
            (GdaVariant::Lda, CovarianceSpec::PooledFull(m)) => {
                StoredCovariance::PooledFull(check_square(&m, dim)?)
            }
            (GdaVariant::Qda, CovarianceSpec::PerClassFull { benign, malignant }) => {
                StoredCovariance::PerClassFull {
                    benign: check_square(&benign, dim)?,
                    malignant: check_square(&malignant, dim)?,
                }
            }
            (GdaVariant::DLda, CovarianceSpec::PooledDiagonal(v)) => {
                StoredCovariance::PooledDiag(check_vec(&v)?)
            }
            (GdaVariant::DQda, CovarianceSpec::PerClassDiagonal { benign, malignant }) => {
                StoredCovariance::PerClassDiag {
                    benign: check_vec(&benign)?,
                    malignant: check_vec(&malignant)?,
                }
            }
            _ => {
                return Err(Error::invalid(
                    "covariance parameters do not match the variant",
                ))
            }
        };
        Self::assemble(
            variant,
            prior,
            DVector::from_vec(mean_benign),
            DVector::from_vec(mean_malignant),
            cov,
            RidgeApplied {
                benign: 0.0,
                malignant: 0.0,
            },
        )
    }

    fn assemble(
        variant: GdaVariant,
        prior_malignant: f64,
        mean_benign: DVector<f64>,
        mean_malignant: DVector<f64>,
        cov: StoredCovariance,
        ridge: RidgeApplied,
    ) -> Result<Self> {
        let dim = mean_benign.len();
        let (benign, malignant) = match &cov {
            StoredCovariance::PooledFull(m) => {
                let d = Density::from_full(m)?;
                (d.clone(), d)
            }
            StoredCovariance::PerClassFull { benign, malignant } => {
                (Density::from_full(benign)?, Density::from_full(malignant)?)
            }
            StoredCovariance::PooledDiag(v) => {
                let d = Density::from_diag(v)?;
                (d.clone(), d)
            }
            StoredCovariance::PerClassDiag { benign, malignant } => {
                (Density::from_diag(benign)?, Density::from_diag(malignant)?)
            }
        };
        Ok(GdaModel {
            variant,
            prior_malignant,
            dim,
            mean_benign,
            mean_malignant,
            cov,
            ridge,
            benign,
            malignant,
        })
    }

    pub fn variant(&self) -> GdaVariant {
        self.variant
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prior_malignant(&self) -> f64 {
        self.prior_malignant
    }

    pub fn mean(&self, label: Label) -> Vec<f64> {
        match label {
            Label::Benign => self.mean_benign.iter().copied().collect(),
            Label::Malignant => self.mean_malignant.iter().copied().collect(),
        }
    }

    /// Ridge amounts added during fitting (zero for constructed models).
    pub fn ridge(&self) -> RidgeApplied {
        self.ridge
    }

    /// The stored covariance of one class, materialized as a full matrix.
    pub fn covariance_rows(&self, label: Label) -> Vec<Vec<f64>> {
        let full = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
            (0..self.dim)
                .map(|i| (0..self.dim).map(|j| m[(i, j)]).collect())
                .collect()
        };
        let diag = |v: &[f64]| -> Vec<Vec<f64>> {
            (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| if i == j { v[i] } else { 0.0 })
                        .collect()
                })
                .collect()
        };
        match (&self.cov, label) {
            (StoredCovariance::PooledFull(m), _) => full(m),
            (StoredCovariance::PerClassFull { benign, .. }, Label::Benign) => full(benign),
            (StoredCovariance::PerClassFull { malignant, .. }, Label::Malignant) => full(malignant),
            (StoredCovariance::PooledDiag(v), _) => diag(v),
            (StoredCovariance::PerClassDiag { benign, .. }, Label::Benign) => diag(benign),
            (StoredCovariance::PerClassDiag { malignant, .. }, Label::Malignant) => diag(malignant),
        }
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("observation contains non-finite values"));
        }
        Ok(())
    }

    /// ln g_M(x) - ln g_B(x), evaluated entirely on log scale.
    pub fn log_likelihood_ratio(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        Ok(self.malignant.log_density(x, &self.mean_malignant)
            - self.benign.log_density(x, &self.mean_benign))
    }

    /// Posterior probability of malignancy,
    /// `pi g_M(x) / (pi g_M(x) + (1 - pi) g_B(x))`, with `pi` the override
    /// if given and the model prior otherwise.
    pub fn posterior(&self, x: &[f64], prior_override: Option<f64>) -> Result<f64> {
        let prior = match prior_override {
            Some(p) => validate_prior(p)?,
            None => self.prior_malignant,
        };
        let llr = self.log_likelihood_ratio(x)?;
        Ok(stable_sigmoid(llr + (prior / (1.0 - prior)).ln()))
    }

    /// Posterior probability of the benign class; complements
    /// [`GdaModel::posterior`].
    pub fn posterior_benign(&self, x: &[f64], prior_override: Option<f64>) -> Result<f64> {
        let prior = match prior_override {
            Some(p) => validate_prior(p)?,
            None => self.prior_malignant,
        };
        let llr = self.log_likelihood_ratio(x)?;
        Ok(stable_sigmoid(-(llr + (prior / (1.0 - prior)).ln())))
    }

    /// Scores every item with the posterior at the model prior.
    pub fn posterior_scores(
        &self,
        ds: &FeatureDataset,
        system_id: impl Into<String>,
    ) -> Result<PredictionSet> {
        let items = ds
            .items()
            .iter()
            .map(|item| {
                Ok(LabeledScore {
                    item_id: item.item_id.clone(),
                    score: self.posterior(&item.features, None)?,
                    label: item.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PredictionSet::new(system_id, items)
    }

    /// Scores every item with the log-likelihood ratio.
    pub fn llr_scores(
        &self,
        ds: &FeatureDataset,
        system_id: impl Into<String>,
    ) -> Result<PredictionSet> {
        let items = ds
            .items()
            .iter()
            .map(|item| {
                Ok(LabeledScore {
                    item_id: item.item_id.clone(),
                    score: self.log_likelihood_ratio(&item.features)?,
                    label: item.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PredictionSet::new(system_id, items)
    }

    /// Scores every item according to the chosen sweep: the posterior for
    /// a threshold sweep, the log-likelihood ratio for a prior sweep.
    pub fn sweep_scores(
        &self,
        ds: &FeatureDataset,
        system_id: impl Into<String>,
        sweep: Sweep,
    ) -> Result<PredictionSet> {
        match sweep {
            Sweep::Threshold => self.posterior_scores(ds, system_id),
            Sweep::Prior => self.llr_scores(ds, system_id),
        }
    }

    /// Operating points from sweeping the posterior decision threshold.
    /// When many posteriors round to the same double the tied items
    /// collapse into one point; use [`GdaModel::prior_sweep_roc`] to keep
    /// full resolution.
    pub fn threshold_sweep_roc(&self, test: &FeatureDataset) -> Result<RocCurve> {
        Ok(roc_curve(&self.posterior_scores(test, "threshold-sweep")?))
    }

    /// Operating points from sweeping the malignant prior with the decision
    /// cut fixed at posterior >= 0.5, realized exactly as a threshold sweep
    /// of the log-likelihood ratio. Whenever the posterior map loses no
    /// resolution the point set equals the threshold sweep's.
    pub fn prior_sweep_roc(&self, test: &FeatureDataset) -> Result<RocCurve> {
        Ok(roc_curve(&self.llr_scores(test, "prior-sweep")?))
    }

    /// Serializes the model as a self-describing text document with full
    /// round-trip precision.
    pub fn to_text(&self) -> String {
        let vec_line = |v: &DVector<f64>| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let slice_line = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let matrix_block = |m: &DMatrix<f64>| {
            (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| m[(i, j)].to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect::<Vec<_>>()
                .join("\n")
        };
        let mut out = String::new();
        out.push_str("mdrank-gda-model v1\n");
        out.push_str(&format!("variant: {}\n", self.variant.name()));
        out.push_str(&format!("dim: {}\n", self.dim));
        out.push_str(&format!("prior_malignant: {}\n", self.prior_malignant));
        out.push_str(&format!("mean_benign: {}\n", vec_line(&self.mean_benign)));
        out.push_str(&format!(
            "mean_malignant: {}\n",
            vec_line(&self.mean_malignant)
        ));
        match &self.cov {
            StoredCovariance::PooledFull(m) => {
                out.push_str(&format!("ridge_lambda: {}\n", self.ridge.benign));
                out.push_str(&format!("cov_pooled:\n{}\n", matrix_block(m)));
            }
            StoredCovariance::PerClassFull { benign, malignant } => {
                out.push_str(&format!("ridge_lambda_benign: {}\n", self.ridge.benign));
                out.push_str(&format!(
                    "ridge_lambda_malignant: {}\n",
                    self.ridge.malignant
                ));
                out.push_str(&format!("cov_benign:\n{}\n", matrix_block(benign)));
                out.push_str(&format!("cov_malignant:\n{}\n", matrix_block(malignant)));
            }
            StoredCovariance::PooledDiag(v) => {
                out.push_str(&format!("ridge_lambda: {}\n", self.ridge.benign));
                out.push_str(&format!("var_pooled: {}\n", slice_line(v)));
            }
            StoredCovariance::PerClassDiag { benign, malignant } => {
                out.push_str(&format!("ridge_lambda_benign: {}\n", self.ridge.benign));
                out.push_str(&format!(
                    "ridge_lambda_malignant: {}\n",
                    self.ridge.malignant
                ));
                out.push_str(&format!("var_benign: {}\n", slice_line(benign)));
                out.push_str(&format!("var_malignant: {}\n", slice_line(malignant)));
            }
        }
        out
    }

    /// Parses a document produced by [`GdaModel::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let bad = |msg: &str| Error::ModelFormat(msg.to_string());

        if lines.next() != Some("mdrank-gda-model v1") {
            return Err(bad("missing `mdrank-gda-model v1` header"));
        }
        let mut expect = |key: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| bad(&format!("missing `{key}:` line")))?;
            line.strip_prefix(&format!("{key}:"))
                .map(|rest| rest.trim().to_string())
                .ok_or_else(|| bad(&format!("expected `{key}:`, found `{line}`")))
        };

        let variant = GdaVariant::parse(&expect("variant")?)
            .ok_or_else(|| bad("unknown variant"))?;
        let dim: usize = expect("dim")?
            .parse()
            .map_err(|_| bad("dim is not an integer"))?;
        if dim == 0 {
            return Err(bad("dim must be >= 1"));
        }
        let prior: f64 = expect("prior_malignant")?
            .parse()
            .map_err(|_| bad("prior is not a number"))?;
        let parse_vec = |s: &str| -> Result<Vec<f64>> {
            let values = s
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| bad("bad number")))
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != dim {
                return Err(bad("vector length does not match dim"));
            }
            Ok(values)
        };
        let mean_benign = parse_vec(&expect("mean_benign")?)?;
        let mean_malignant = parse_vec(&expect("mean_malignant")?)?;

        let (ridge, covariance) = if variant.is_pooled() {
            let lambda: f64 = expect("ridge_lambda")?
                .parse()
                .map_err(|_| bad("bad ridge value"))?;
            let ridge = RidgeApplied {
                benign: lambda,
                malignant: lambda,
            };
            let cov = if variant.is_diagonal() {
                CovarianceSpec::PooledDiagonal(parse_vec(&expect("var_pooled")?)?)
            } else {
                if lines.next() != Some("cov_pooled:") {
                    return Err(bad("expected `cov_pooled:`"));
                }
                let rows = (0..dim)
                    .map(|_| parse_vec(lines.next().ok_or_else(|| bad("truncated matrix"))?))
                    .collect::<Result<Vec<_>>>()?;
                CovarianceSpec::PooledFull(rows)
            };
            (ridge, cov)
        } else {
            let lambda_b: f64 = expect("ridge_lambda_benign")?
                .parse()
                .map_err(|_| bad("bad ridge value"))?;
            let lambda_m: f64 = expect("ridge_lambda_malignant")?
                .parse()
                .map_err(|_| bad("bad ridge value"))?;
            let ridge = RidgeApplied {
                benign: lambda_b,
                malignant: lambda_m,
            };
            let cov = if variant.is_diagonal() {
                CovarianceSpec::PerClassDiagonal {
                    benign: parse_vec(&expect("var_benign")?)?,
                    malignant: parse_vec(&expect("var_malignant")?)?,
                }
            } else {
                let mut read_matrix = |header: &str| -> Result<Vec<Vec<f64>>> {
                    if lines.next() != Some(header) {
                        return Err(bad(&format!("expected `{header}`")));
                    }
                    (0..dim)
                        .map(|_| parse_vec(lines.next().ok_or_else(|| bad("truncated matrix"))?))
                        .collect()
                };
                let benign = read_matrix("cov_benign:")?;
                let malignant = read_matrix("cov_malignant:")?;
                CovarianceSpec::PerClassFull { benign, malignant }
            };
            (ridge, cov)
        };

        let mut model = Self::from_parts(variant, prior, mean_benign, mean_malignant, covariance)?;
        model.ridge = ridge;
        Ok(model)
    }
}
