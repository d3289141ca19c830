//! Monte Carlo campaigns: generate, fit, score, aggregate.

use crate::error::{CliError, Result};
use crate::fit::{fit_families, normalize_family};
use crate::io::{fmt_f64, write_csv, write_dataset, write_midpoint};
use icpen_core::metrics::{baseline_sup_error, Summary};
use icpen_core::path::null_fit;
use icpen_core::simulation::midpoint_impute;
use icpen_core::{
    aggregate, maximal_intersections, score, simulate_replicate, Aggregate, Engine, FitReport,
    PathOptions, PenaltyRegistry, ScenarioConfig,
};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub scenario: ScenarioConfig,
    pub families: Vec<String>,
    pub path: PathOptions,
    pub write_data: bool,
    pub midpoint: bool,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct MethodFit {
    pub family: String,
    pub report: FitReport,
    pub df: usize,
    pub selected_theta: f64,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct ReplicateOutcome {
    pub replicate: usize,
    pub censoring_rate: f64,
    pub fits: Vec<MethodFit>,
}

#[derive(Debug, Clone)]
pub struct MethodSummary {
    pub family: String,
    pub aggregate: Aggregate,
}

#[derive(Debug, Clone)]
pub struct CampaignSummary {
    pub censoring_rate: Summary,
    pub methods: Vec<MethodSummary>,
    pub replicates: Vec<ReplicateOutcome>,
    pub signal_names: Vec<String>,
}

fn rep_file(dir: &Path, sub: &str, r: usize) -> PathBuf {
    dir.join(sub).join(format!("rep_{r:04}.csv"))
}

fn run_replicate(
    cfg: &CampaignConfig,
    registry: &PenaltyRegistry,
    r: usize,
) -> Result<ReplicateOutcome> {
    let sim = simulate_replicate(&cfg.scenario, r as u64)?;
    let raw = &sim.dataset;
    if cfg.write_data || cfg.families.is_empty() {
        write_dataset(&rep_file(&cfg.out_dir, "data", r), raw)?;
    }
    if cfg.midpoint {
        write_midpoint(&rep_file(&cfg.out_dir, "midpoint", r), raw, &midpoint_impute(raw))?;
    }
    let censoring_rate = raw.right_censored_fraction();
    let mut fits = Vec::new();
    if !cfg.families.is_empty() {
        let (data, record) = raw.standardize()?;
        let support = maximal_intersections(&data);
        let engine = Engine::new(&data, &support, false)?;
        let null = null_fit(&engine)?;
        let results = fit_families(&engine, &null, &cfg.families, None, registry, &cfg.path)?;
        for (fam, (res, _)) in cfg.families.iter().zip(results) {
            let state = res.selected_state();
            let beta = record.to_original(&state.beta);
            let mut report = score(&beta, &sim.beta_true, None, 0.0)?;
            report.baseline_sup_error = baseline_sup_error(
                state,
                record.offset(&state.beta),
                cfg.scenario.weibull_eta,
                cfg.scenario.weibull_kappa,
            );
            for w in &res.warnings {
                log::debug!("replicate {r}, {fam}: {w}");
            }
            fits.push(MethodFit {
                family: normalize_family(fam),
                report,
                df: res.df[res.selected],
                selected_theta: res.selected_theta(),
                converged: res.converged[res.selected],
            });
        }
    }
    Ok(ReplicateOutcome {
        replicate: r,
        censoring_rate,
        fits,
    })
}

/// Runs every replicate (in parallel), writes the campaign files and
/// returns the summaries.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignSummary> {
    cfg.scenario.validate()?;
    let registry = PenaltyRegistry::builtin();
    for f in &cfg.families {
        registry.create(f, None)?;
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let replicates: Vec<ReplicateOutcome> = pool.install(|| {
        (0..cfg.scenario.replicates)
            .into_par_iter()
            .map(|r| run_replicate(cfg, &registry, r))
            .collect::<Result<Vec<_>>>()
    })?;

    let rates: Vec<f64> = replicates.iter().map(|r| r.censoring_rate).collect();
    let censoring_rate = Summary::of_mean(&rates);
    let mut methods = Vec::new();
    for (k, fam) in cfg.families.iter().enumerate() {
        let reports: Vec<FitReport> = replicates.iter().map(|r| r.fits[k].report.clone()).collect();
        methods.push(MethodSummary {
            family: normalize_family(fam),
            aggregate: aggregate(&reports)?,
        });
    }
    let names: Vec<String> = (1..=cfg.scenario.p).map(|j| format!("snp{j}")).collect();
    let signal_names: Vec<String> = cfg
        .scenario
        .signal_positions()
        .iter()
        .map(|&j| names[j].clone())
        .collect();
    let summary = CampaignSummary {
        censoring_rate,
        methods,
        replicates,
        signal_names,
    };
    write_outputs(cfg, &summary)?;
    Ok(summary)
}

fn se_cell(s: &Summary) -> String {
    s.se.map_or_else(|| "NA".to_string(), fmt_f64)
}

fn write_outputs(cfg: &CampaignConfig, s: &CampaignSummary) -> Result<()> {
    let dir = &cfg.out_dir;
    let beta = cfg.scenario.beta_true();
    let names: Vec<String> = (1..=cfg.scenario.p).map(|j| format!("snp{j}")).collect();
    write_csv(
        &dir.join("truth.csv"),
        &["name".into(), "beta".into()],
        &names
            .iter()
            .zip(&beta)
            .map(|(n, b)| vec![n.clone(), fmt_f64(*b)])
            .collect::<Vec<_>>(),
    )?;
    write_csv(
        &dir.join("censoring.csv"),
        &["replicate".into(), "right_censored_fraction".into()],
        &s.replicates
            .iter()
            .map(|r| vec![r.replicate.to_string(), fmt_f64(r.censoring_rate)])
            .collect::<Vec<_>>(),
    )?;
    if s.methods.is_empty() {
        return Ok(());
    }

    let header: Vec<String> = [
        "method",
        "replicates",
        "L1",
        "L1_se",
        "L2",
        "L2_se",
        "FP",
        "FP_se",
        "FN",
        "FN_se",
        "baseline_sup",
        "censoring_rate",
    ]
    .iter()
    .map(|h| h.to_string())
    .collect();
    let rows: Vec<Vec<String>> = s
        .methods
        .iter()
        .map(|m| {
            let a = &m.aggregate;
            vec![
                m.family.clone(),
                a.replicates.to_string(),
                fmt_f64(a.l1.mean),
                se_cell(&a.l1),
                fmt_f64(a.l2.mean),
                se_cell(&a.l2),
                fmt_f64(a.fp.mean),
                se_cell(&a.fp),
                fmt_f64(a.fn_.mean),
                se_cell(&a.fn_),
                a.baseline_sup_error
                    .map_or_else(|| "NA".to_string(), |b| fmt_f64(b.mean)),
                fmt_f64(s.censoring_rate.mean),
            ]
        })
        .collect();
    write_csv(&dir.join("report.csv"), &header, &rows)?;

    let effects: Vec<f64> = cfg.scenario.effects.clone();
    let mut coef_rows = Vec::new();
    for m in &s.methods {
        for ((name, truth), c) in s.signal_names.iter().zip(&effects).zip(&m.aggregate.coefficients) {
            coef_rows.push(vec![
                m.family.clone(),
                name.clone(),
                fmt_f64(*truth),
                fmt_f64(c.mean),
                se_cell(c),
            ]);
        }
    }
    write_csv(
        &dir.join("coefficients.csv"),
        &["method", "name", "true", "mean", "se"].map(String::from),
        &coef_rows,
    )?;

    for (k, m) in s.methods.iter().enumerate() {
        let rows: Vec<Vec<String>> = s
            .replicates
            .iter()
            .map(|r| {
                r.fits[k]
                    .report
                    .beta_hat_on_true_support
                    .iter()
                    .map(|b| fmt_f64(*b))
                    .collect()
            })
            .collect();
        write_csv(
            &dir.join(format!("estimates_{}.csv", m.family)),
            &s.signal_names,
            &rows,
        )?;
    }

    let mut rep_rows = Vec::new();
    for r in &s.replicates {
        for f in &r.fits {
            rep_rows.push(vec![
                r.replicate.to_string(),
                f.family.clone(),
                fmt_f64(f.report.l1_error),
                fmt_f64(f.report.l2_error),
                f.report.fp.to_string(),
                f.report.fn_.to_string(),
                f.df.to_string(),
                fmt_f64(f.selected_theta),
                f.converged.to_string(),
                f.report
                    .baseline_sup_error
                    .map_or_else(|| "NA".to_string(), fmt_f64),
            ]);
        }
    }
    write_csv(
        &dir.join("replicates.csv"),
        &[
            "replicate",
            "method",
            "L1",
            "L2",
            "FP",
            "FN",
            "df",
            "theta",
            "converged",
            "baseline_sup",
        ]
        .map(String::from),
        &rep_rows,
    )
}
