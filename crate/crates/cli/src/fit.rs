//! End-to-end fitting driver and the model report schema.

use crate::error::Result;
use icpen_core::em::FitOutcome;
use icpen_core::path::{null_fit, run_path_from};
use icpen_core::penalty::{AdaptiveLasso, Lasso};
use icpen_core::{
    support_for, Dataset, Engine, FitOptions, PathOptions, PathResult, PenaltyRegistry,
    StandardizationRecord,
};
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct FitConfig {
    pub family: String,
    pub alpha: Option<f64>,
    pub standardize: bool,
    pub truncation: bool,
    pub path: PathOptions,
}

impl FitConfig {
    pub fn new(family: &str) -> Self {
        Self {
            family: family.to_string(),
            alpha: None,
            standardize: true,
            truncation: false,
            path: PathOptions::default(),
        }
    }
}

pub fn path_options(grid_size: usize, ratio: Option<f64>, tol: f64, max_iter: usize) -> PathOptions {
    PathOptions {
        grid_size,
        ratio,
        fit: FitOptions { tol, max_iter },
        truncation: false,
    }
}

pub fn normalize_family(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace('-', "_")
}

/// Fits several families on one prepared dataset, sharing the null fit and
/// the lasso stage of the adaptive lasso. Results follow `families`.
pub fn fit_families(
    engine: &Engine<'_>,
    null: &FitOutcome,
    families: &[String],
    alpha: Option<f64>,
    registry: &PenaltyRegistry,
    options: &PathOptions,
) -> Result<Vec<(PathResult, Option<PathResult>)>> {
    let mut lasso: Option<PathResult> = None;
    let mut out = Vec::with_capacity(families.len());
    for fam in families {
        let fam = normalize_family(fam);
        let fit = match fam.as_str() {
            "lasso" => {
                let l = match &lasso {
                    Some(l) => l.clone(),
                    None => run_path_from(engine, null, Arc::new(Lasso), None, options)?,
                };
                lasso = Some(l.clone());
                (l, None)
            }
            "adaptive_lasso" => {
                if lasso.is_none() {
                    lasso = Some(run_path_from(engine, null, Arc::new(Lasso), None, options)?);
                }
                let first = lasso.clone().expect("lasso stage");
                let weights = first.selected_state().beta.iter().map(|b| b.abs()).collect();
                let mut a =
                    run_path_from(engine, null, Arc::new(AdaptiveLasso), Some(weights), options)?;
                if first.df[first.selected] == 0 {
                    a.warnings
                        .push("lasso selected the empty model; adaptive lasso is degenerate".into());
                }
                (a, Some(first))
            }
            _ => {
                let pen = registry.create(&fam, alpha)?;
                (run_path_from(engine, null, pen, None, options)?, None)
            }
        };
        out.push(fit);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientEntry {
    pub name: String,
    pub estimate: f64,
    pub standardized_estimate: f64,
    pub penalized: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineEntry {
    pub lower: f64,
    pub upper: f64,
    pub jump: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathRow {
    pub theta: f64,
    pub df: usize,
    pub loglik: f64,
    pub gic: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageSummary {
    pub family: String,
    pub selected_theta: f64,
    pub df: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub total_iterations: usize,
    pub converged_points: usize,
    pub ascent_violations: usize,
    pub df_monotone_fraction: f64,
    pub warnings: Vec<String>,
    pub first_stage: Option<StageSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelReport {
    pub family: String,
    pub alpha: Option<f64>,
    pub n: usize,
    pub p: usize,
    pub standardized: bool,
    pub truncation: bool,
    pub theta_max: f64,
    pub selected_index: usize,
    pub selected_theta: f64,
    pub loglik: f64,
    pub gic: f64,
    pub df: usize,
    pub selected: Vec<String>,
    pub coefficients: Vec<CoefficientEntry>,
    /// Jumps of the baseline cumulative hazard for the covariates on their
    /// original scale.
    pub baseline: Vec<BaselineEntry>,
    pub gic_table: Vec<PathRow>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub struct FitArtifacts {
    pub report: ModelReport,
    pub result: PathResult,
    pub first_stage: Option<PathResult>,
    pub record: StandardizationRecord,
}

pub fn path_rows(result: &PathResult) -> Vec<PathRow> {
    (0..result.thetas.len())
        .map(|r| PathRow {
            theta: result.thetas[r],
            df: result.df[r],
            loglik: result.loglik[r],
            gic: result.gic[r],
            converged: result.converged[r],
            iterations: result.iterations[r],
        })
        .collect()
}

/// Prepares the data (standardization, support), fits the path and builds
/// the report.
pub fn fit_dataset(data: &Dataset, cfg: &FitConfig, registry: &PenaltyRegistry) -> Result<FitArtifacts> {
    let (work, record) = if cfg.standardize {
        data.standardize()?
    } else {
        (data.clone(), StandardizationRecord::identity(data.p()))
    };
    let truncation = cfg.truncation && work.has_truncation();
    let support = support_for(&work, truncation);
    let engine = Engine::new(&work, &support, truncation)?;
    let null = null_fit(&engine)?;
    let mut options = cfg.path;
    options.truncation = truncation;
    let (result, first_stage) = fit_families(
        &engine,
        &null,
        std::slice::from_ref(&cfg.family),
        cfg.alpha,
        registry,
        &options,
    )?
    .remove(0);
    let alpha = registry.create(&cfg.family, cfg.alpha)?.alpha();
    let report = build_report(
        &work,
        &result,
        first_stage.as_ref(),
        &record,
        cfg,
        alpha,
        truncation,
    );
    Ok(FitArtifacts {
        report,
        result,
        first_stage,
        record,
    })
}

fn build_report(
    data: &Dataset,
    result: &PathResult,
    first_stage: Option<&PathResult>,
    record: &StandardizationRecord,
    cfg: &FitConfig,
    alpha: Option<f64>,
    truncation: bool,
) -> ModelReport {
    let sel = result.selected;
    let state = result.selected_state();
    let original = record.to_original(&state.beta);
    let coefficients: Vec<CoefficientEntry> = (0..data.p())
        .map(|j| CoefficientEntry {
            name: data.names()[j].clone(),
            estimate: original[j],
            standardized_estimate: state.beta[j],
            penalized: data.is_penalized(j),
        })
        .collect();
    let scale = (-record.offset(&state.beta)).exp();
    let mut cum = 0.0;
    let baseline = state
        .support
        .intervals()
        .iter()
        .zip(&state.lambda)
        .map(|(iv, l)| {
            cum += l * scale;
            BaselineEntry {
                lower: iv.lower,
                upper: iv.upper,
                jump: l * scale,
                cumulative: cum,
            }
        })
        .collect();
    let family = normalize_family(&cfg.family);
    ModelReport {
        family,
        alpha,
        n: data.n(),
        p: data.p(),
        standardized: cfg.standardize,
        truncation,
        theta_max: result.theta_max,
        selected_index: sel,
        selected_theta: result.thetas[sel],
        loglik: result.loglik[sel],
        gic: result.gic[sel],
        df: result.df[sel],
        selected: coefficients
            .iter()
            .filter(|c| c.standardized_estimate != 0.0)
            .map(|c| c.name.clone())
            .collect(),
        coefficients,
        baseline,
        gic_table: path_rows(result),
        diagnostics: Diagnostics {
            total_iterations: result.iterations.iter().sum(),
            converged_points: result.converged.iter().filter(|c| **c).count(),
            ascent_violations: result.ascent_violations.iter().sum(),
            df_monotone_fraction: result.df_monotone_fraction(),
            warnings: result.warnings.clone(),
            first_stage: first_stage.map(|f| StageSummary {
                family: f.family.clone(),
                selected_theta: f.selected_theta(),
                df: f.df[f.selected],
            }),
        },
    }
}
