//! Command-line surface: the `evaluate`, `rank`, `gda`, and `synth`
//! subcommands used by the `mdrank` binary.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 64 bad usage.
//! `--seed` falls back to the `MDRANK_SEED` environment variable, then
//! to 42.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::curves::{measure_report_with, Measure, MeasureReport, SpecConvention};
use crate::data::{self, PredictionSet};
use crate::error::{Error, Result};
use crate::gda::{GdaModel, GdaVariant, PriorMode, Sweep};
use crate::ranking::{
    cross_ranking_table, kendall_tau_with_flips, rank_stability, RankAgreement,
};
use crate::report::{
    render_agreement, render_measure_grid, render_ranking_grid, EvaluationReport, RankingBlock,
    ReportMeta, StabilityBlock, SystemReport,
};
use crate::resampling::{bootstrap_measure_with, cv_evaluation};
use crate::synth::{binormal_scores, heteroscedastic_features, BinormalSpec};

#[derive(Parser, Debug)]
#[command(
    name = "mdrank",
    version,
    about = "Evaluate and rank binary diagnostic classifiers from score/label files"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one submission against a truth file.
    Evaluate(EvaluateArgs),
    /// Rank every submission in a directory under every measure.
    Rank(RankArgs),
    /// Fit a Gaussian discriminant classifier and report its measures.
    Gda(GdaArgs),
    /// Generate synthetic score or feature cohorts.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    #[value(name = "at-least")]
    AtLeast,
    #[value(name = "interpolate")]
    Interpolate,
}

impl From<ConventionArg> for SpecConvention {
    fn from(arg: ConventionArg) -> Self {
        match arg {
            ConventionArg::AtLeast => SpecConvention::AtLeast,
            ConventionArg::Interpolate => SpecConvention::Interpolate,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Submission file (`image_id,score`).
    #[arg(long)]
    pub predictions: PathBuf,
    /// Ground-truth file (`image_id,label`).
    #[arg(long)]
    pub truth: PathBuf,
    /// Bootstrap replicate count; omit to skip resampling.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long, env = "MDRANK_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Specificity-at-sensitivity convention.
    #[arg(long, value_enum, default_value = "at-least")]
    pub convention: ConventionArg,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Accept submissions that do not cover the whole truth table.
    #[arg(long)]
    pub allow_partial: bool,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    /// Directory of `*.csv` submissions, one system per file.
    #[arg(long)]
    pub submissions: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    /// Comma-separated measure subset (default: all).
    #[arg(long)]
    pub measures: Option<String>,
    /// Paired-bootstrap replicates for rank-stability fractions.
    #[arg(long)]
    pub stability: Option<usize>,
    #[arg(long, env = "MDRANK_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
}

#[derive(Args, Debug)]
pub struct GdaArgs {
    /// Training feature file (`image_id,label,f1,...,fd`).
    #[arg(long)]
    pub train: PathBuf,
    /// Held-out feature file to score.
    #[arg(long, conflicts_with = "cv", required_unless_present = "cv")]
    pub test: Option<PathBuf>,
    /// Stratified cross-validation folds over the training file.
    #[arg(long)]
    pub cv: Option<usize>,
    /// Classifier variant: lda, qda, dlda, dqda, a comma list, or `all`.
    #[arg(long)]
    pub variant: String,
    /// Operating-point sweep.
    #[arg(long)]
    pub sweep: SweepArg,
    #[arg(long, env = "MDRANK_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepArg {
    Prior,
    Threshold,
}

impl From<SweepArg> for Sweep {
    fn from(arg: SweepArg) -> Self {
        match arg {
            SweepArg::Prior => Sweep::Prior,
            SweepArg::Threshold => Sweep::Threshold,
        }
    }
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Malignant item count.
    #[arg(long, default_value_t = crate::synth::DEFAULT_N_POS)]
    pub pos: usize,
    /// Benign item count.
    #[arg(long, default_value_t = crate::synth::DEFAULT_N_NEG)]
    pub neg: usize,
    /// Malignant score mean (benign scores are standard normal).
    #[arg(long, default_value_t = crate::synth::DEFAULT_MU, allow_negative_numbers = true)]
    pub mu: f64,
    /// Malignant score standard deviation.
    #[arg(long, default_value_t = crate::synth::DEFAULT_SIGMA, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, env = "MDRANK_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Output prefix: writes `<out>.predictions.csv` and `<out>.truth.csv`,
    /// or `<out>.features.csv` in feature mode.
    #[arg(long)]
    pub out: PathBuf,
    /// Emit a feature file of this dimensionality instead of score files.
    #[arg(long)]
    pub features: Option<usize>,
}

/// What a command produced: text for stdout plus non-fatal warnings.
#[derive(Debug, Default)]
pub struct CmdOutput {
    pub stdout: String,
    pub warnings: Vec<String>,
}

/// Parses argv and dispatches; maps failures to the documented exit codes.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Gda(args) => cmd_gda(args),
        Command::Synth(args) => cmd_synth(args),
    };
    match result {
        Ok(output) => {
            for warning in &output.warnings {
                eprintln!("warning: {warning}");
            }
            print!("{}", output.stdout);
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_io() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn system_id_of(path: &Path) -> String {
    path.file_stem()
        .map(|stem| stem.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load_submission(
    predictions_path: &Path,
    truth: &[(String, data::Label)],
    allow_partial: bool,
    warnings: &mut Vec<String>,
) -> Result<PredictionSet> {
    let system_id = system_id_of(predictions_path);
    let wrap = |e: Error| Error::System {
        system: system_id.clone(),
        source: Box::new(e),
    };
    let text = read_file(predictions_path)?;
    let parsed = data::parse_predictions(&text).map_err(wrap)?;
    warnings.extend(
        parsed
            .warnings
            .iter()
            .map(|w| format!("{system_id}: {w}")),
    );
    let joined = data::join(&parsed.value, truth, system_id.clone(), allow_partial)
        .map_err(wrap)?;
    warnings.extend(
        joined
            .warnings
            .iter()
            .map(|w| format!("{system_id}: {w}")),
    );
    Ok(joined.value)
}

/// Emits the report in the requested format, to `--out` or to stdout.
fn emit_report(
    report: &EvaluationReport,
    out: Option<&PathBuf>,
    format: FormatArg,
    stdout: &mut String,
) -> Result<()> {
    report.validate()?;
    let rendered = match format {
        FormatArg::Json => report.to_json(),
        FormatArg::Csv => report.to_csv(),
    };
    match out {
        Some(path) => {
            write_file(path, &rendered)?;
            stdout.push_str(&format!("report written to {}\n", path.display()));
        }
        None => stdout.push_str(&rendered),
    }
    Ok(())
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<CmdOutput> {
    let mut output = CmdOutput::default();
    let truth_text = read_file(&args.truth)?;
    let truth = data::parse_truth(&truth_text)?;
    let ps = load_submission(
        &args.predictions,
        &truth,
        args.allow_partial,
        &mut output.warnings,
    )?;

    let convention: SpecConvention = args.convention.into();
    let report = measure_report_with(&ps, convention);

    let resampling = match args.bootstrap {
        Some(n) => {
            let summaries = Measure::ALL
                .iter()
                .map(|&measure| {
                    bootstrap_measure_with(&ps, measure, n, args.seed, true, convention)
                })
                .collect::<Result<Vec<_>>>()?;
            Some(summaries)
        }
        None => None,
    };

    let meta = ReportMeta::new("evaluate", args.seed, ps.n_pos(), ps.n_neg(), convention);
    let evaluation = EvaluationReport::new(
        meta,
        vec![SystemReport::new(&report, resampling.as_deref())],
    );
    if args.out.is_some() {
        output.stdout.push_str(&render_measure_grid(&[report]));
    }
    emit_report(&evaluation, args.out.as_ref(), args.format, &mut output.stdout)?;
    Ok(output)
}

fn parse_measures(arg: Option<&str>) -> Result<Vec<Measure>> {
    match arg {
        None => Ok(Measure::ALL.to_vec()),
        Some(list) => {
            let mut measures = Vec::new();
            for token in list.split(',') {
                let token = token.trim();
                let measure = Measure::parse(token)
                    .ok_or_else(|| Error::invalid(format!("unknown measure `{token}`")))?;
                if !measures.contains(&measure) {
                    measures.push(measure);
                }
            }
            if measures.is_empty() {
                return Err(Error::invalid("no measures selected"));
            }
            Ok(measures)
        }
    }
}

pub fn cmd_rank(args: &RankArgs) -> Result<CmdOutput> {
    let mut output = CmdOutput::default();
    let measures = parse_measures(args.measures.as_deref())?;
    let truth_text = read_file(&args.truth)?;
    let truth = data::parse_truth(&truth_text)?;

    let mut paths: Vec<PathBuf> = std::fs::read_dir(&args.submissions)
        .map_err(|source| Error::Io {
            path: args.submissions.display().to_string(),
            source,
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::invalid(format!(
            "no .csv submissions in {}",
            args.submissions.display()
        )));
    }

    let mut systems = Vec::with_capacity(paths.len());
    for path in &paths {
        systems.push(load_submission(path, &truth, false, &mut output.warnings)?);
    }
    let reports: Vec<MeasureReport> = systems
        .iter()
        .map(|ps| measure_report_with(ps, SpecConvention::AtLeast))
        .collect();

    let table = cross_ranking_table(&reports, &measures)?;

    let mut agreements: Vec<RankAgreement> = Vec::new();
    if systems.len() >= 2 {
        for i in 0..measures.len() {
            for j in (i + 1)..measures.len() {
                let rank_a = table.column_ranks(i);
                let rank_b = table.column_ranks(j);
                match kendall_tau_with_flips(&rank_a, &rank_b) {
                    Ok((tau, flips)) => agreements.push(RankAgreement {
                        measure_a: measures[i],
                        measure_b: measures[j],
                        kendall_tau: tau,
                        pairwise_flip_count: flips,
                    }),
                    Err(Error::DegenerateRanks) => output.warnings.push(format!(
                        "kendall tau undefined for {} vs {}: a ranking is completely tied",
                        measures[i].name(),
                        measures[j].name()
                    )),
                    Err(other) => return Err(other),
                }
            }
        }
    }

    let stability = match args.stability {
        Some(n) if systems.len() >= 2 => {
            let blocks = measures
                .iter()
                .map(|&measure| {
                    rank_stability(&systems, measure, n, args.seed)
                        .map(|s| StabilityBlock::from(&s))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(blocks)
        }
        Some(_) => {
            output
                .warnings
                .push("rank stability needs at least two systems; skipped".to_string());
            None
        }
        None => None,
    };

    output.stdout.push_str(&render_ranking_grid(&table));
    if !agreements.is_empty() {
        output.stdout.push('\n');
        output.stdout.push_str(&render_agreement(&agreements));
    }

    let meta = ReportMeta::new(
        "rank",
        args.seed,
        systems[0].n_pos(),
        systems[0].n_neg(),
        SpecConvention::AtLeast,
    );
    let mut evaluation = EvaluationReport::new(
        meta,
        reports
            .iter()
            .map(|r| SystemReport::new(r, None))
            .collect(),
    );
    evaluation.ranking = Some(RankingBlock::from(&table));
    if !agreements.is_empty() {
        evaluation.rank_agreement = Some(agreements.iter().map(Into::into).collect());
    }
    evaluation.rank_stability = stability;
    emit_report(&evaluation, args.out.as_ref(), args.format, &mut output.stdout)?;
    Ok(output)
}

fn parse_variants(arg: &str) -> Result<Vec<GdaVariant>> {
    if arg.trim().eq_ignore_ascii_case("all") {
        return Ok(GdaVariant::ALL.to_vec());
    }
    let mut variants = Vec::new();
    for token in arg.split(',') {
        let token = token.trim();
        let variant = GdaVariant::parse(token)
            .ok_or_else(|| Error::invalid(format!("unknown variant `{token}`")))?;
        if !variants.contains(&variant) {
            variants.push(variant);
        }
    }
    if variants.is_empty() {
        return Err(Error::invalid("no variants selected"));
    }
    Ok(variants)
}

pub fn cmd_gda(args: &GdaArgs) -> Result<CmdOutput> {
    let mut output = CmdOutput::default();
    let variants = parse_variants(&args.variant)?;
    let sweep: Sweep = args.sweep.into();
    let convention = SpecConvention::AtLeast;
    let train = data::parse_features(&read_file(&args.train)?)?;

    let mut reports: Vec<MeasureReport> = Vec::with_capacity(variants.len());
    let mut summaries: Vec<Option<Vec<crate::resampling::ResampleSummary>>> = Vec::new();
    let (eval_pos, eval_neg);

    match (&args.test, args.cv) {
        (Some(test_path), None) => {
            let test = data::parse_features(&read_file(test_path)?)?;
            eval_pos = test.count(data::Label::Malignant);
            eval_neg = test.count(data::Label::Benign);
            for &variant in &variants {
                let model = GdaModel::fit(&train, variant, PriorMode::Empirical)?;
                let scores = model.sweep_scores(&test, variant.label(), sweep)?;
                reports.push(measure_report_with(&scores, convention));
                summaries.push(None);
            }
        }
        (None, Some(k)) => {
            eval_pos = train.count(data::Label::Malignant);
            eval_neg = train.count(data::Label::Benign);
            for &variant in &variants {
                let (mut report, folds) =
                    cv_evaluation(&train, variant, k, args.seed, sweep, convention)?;
                report.system_id = variant.label().to_string();
                reports.push(report);
                summaries.push(Some(folds));
            }
        }
        _ => {
            return Err(Error::invalid(
                "exactly one of --test FILE or --cv K is required",
            ))
        }
    }

    output.stdout.push_str(&render_measure_grid(&reports));

    let meta = ReportMeta::new("gda", args.seed, eval_pos, eval_neg, convention);
    let evaluation = EvaluationReport::new(
        meta,
        reports
            .iter()
            .zip(&summaries)
            .map(|(r, s)| SystemReport::new(r, s.as_deref()))
            .collect(),
    );
    emit_report(&evaluation, args.out.as_ref(), args.format, &mut output.stdout)?;
    Ok(output)
}

pub fn cmd_synth(args: &SynthArgs) -> Result<CmdOutput> {
    let mut output = CmdOutput::default();
    let prefix = args.out.display();
    match args.features {
        Some(dim) => {
            let ds = heteroscedastic_features(args.pos, args.neg, args.mu, args.sigma, dim, args.seed)?;
            let path = PathBuf::from(format!("{prefix}.features.csv"));
            write_file(&path, &ds.to_features_csv())?;
            output
                .stdout
                .push_str(&format!("wrote {}\n", path.display()));
        }
        None => {
            let spec = BinormalSpec {
                n_pos: args.pos,
                n_neg: args.neg,
                mu: args.mu,
                sigma: args.sigma,
                seed: args.seed,
            };
            let cohort = binormal_scores(&spec)?;
            let predictions_path = PathBuf::from(format!("{prefix}.predictions.csv"));
            let truth_path = PathBuf::from(format!("{prefix}.truth.csv"));
            write_file(&predictions_path, &cohort.to_predictions_csv())?;
            write_file(&truth_path, &cohort.to_truth_csv())?;
            output.stdout.push_str(&format!(
                "wrote {} ({} malignant, {} benign; analytic AUC {:.3})\n",
                predictions_path.display(),
                cohort.n_pos(),
                cohort.n_neg(),
                spec.analytic_auc()
            ));
            output
                .stdout
                .push_str(&format!("wrote {}\n", truth_path.display()));
        }
    }
    Ok(output)
}
