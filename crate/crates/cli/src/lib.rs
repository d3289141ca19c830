//! Command-line front end for penalized interval-censored Cox regression.

pub mod args;
pub mod error;
pub mod fit;
pub mod io;
pub mod simulate;

use crate::args::{Cli, Command, FitArgs, ImputeArgs, ImputeMode, MetricsArgs, SimulateArgs};
use crate::error::{CliError, Result};
use crate::fit::{fit_dataset, path_options, FitConfig, PathRow};
use crate::io::fmt_f64;
use icpen_core::simulation::{impute_missing_genotypes, midpoint_impute, replicate_rng};
use icpen_core::{aggregate, score, Dataset, PenaltyRegistry, ScenarioConfig};
use std::path::Path;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Path(a) => cmd_path(&a),
        Command::Simulate(a) => cmd_simulate(&a, cli.threads).map(|_| ()),
        Command::Metrics(a) => cmd_metrics(&a),
        Command::Impute(a) => cmd_impute(&a),
    }
}

fn load(args: &FitArgs) -> Result<Dataset> {
    let data = io::read_dataset(&args.input)?;
    let factors = if let Some(p) = &args.penalty_factors {
        io::read_penalty_factors(p, data.names())?
    } else {
        io::unpenalized_factors(data.names(), &args.unpenalized)?
    };
    Ok(data.with_penalty_factors(factors)?)
}

fn fit_config(args: &FitArgs) -> FitConfig {
    let t = &args.tuning;
    FitConfig {
        family: args.penalty.clone(),
        alpha: args.alpha,
        standardize: !args.no_standardize,
        truncation: args.truncation,
        path: path_options(t.grid_size, t.ratio, t.tol, t.max_iter),
    }
}

pub fn path_table(rows: &[PathRow]) -> (Vec<String>, Vec<Vec<String>>) {
    let header = ["theta", "df", "loglik", "gic", "converged", "iterations"].map(String::from);
    let body = rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.theta),
                r.df.to_string(),
                fmt_f64(r.loglik),
                fmt_f64(r.gic),
                r.converged.to_string(),
                r.iterations.to_string(),
            ]
        })
        .collect();
    (header.to_vec(), body)
}

fn report_warnings(warnings: &[String]) {
    for w in warnings {
        log::warn!("{w}");
    }
}

pub fn cmd_fit(args: &FitArgs) -> Result<()> {
    let data = load(args)?;
    let out = fit_dataset(&data, &fit_config(args), &PenaltyRegistry::builtin())?;
    report_warnings(&out.report.diagnostics.warnings);
    let json = serde_json::to_string_pretty(&out.report)
        .map_err(|e| CliError::Usage(format!("serializing model: {e}")))?;
    io::write_text(&args.out_dir.join("model.json"), &(json + "\n"))?;
    let (h, rows) = path_table(&out.report.gic_table);
    io::write_csv(&args.out_dir.join("path.csv"), &h, &rows)?;
    if let Some(first) = &out.first_stage {
        let (h, rows) = path_table(&fit::path_rows(first));
        io::write_csv(&args.out_dir.join("lasso_path.csv"), &h, &rows)?;
    }
    Ok(())
}

pub fn cmd_path(args: &FitArgs) -> Result<()> {
    let data = load(args)?;
    let out = fit_dataset(&data, &fit_config(args), &PenaltyRegistry::builtin())?;
    report_warnings(&out.report.diagnostics.warnings);
    let (h, rows) = path_table(&out.report.gic_table);
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    let io_err = |e: csv::Error| CliError::io("<stdout>", std::io::Error::other(e));
    w.write_record(&h).map_err(io_err)?;
    for r in rows {
        w.write_record(&r).map_err(io_err)?;
    }
    w.flush().map_err(|e| CliError::io("<stdout>", e))
}

pub fn scenario_from(args: &SimulateArgs) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::preset(&args.preset).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown preset '{}'; expected one of {}",
            args.preset,
            ScenarioConfig::preset_names().join(", ")
        ))
    })?;
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(rho) = args.rho {
        cfg.rho = rho;
    }
    if let Some(r) = args.replicates {
        cfg.replicates = r;
    }
    cfg.seed = args.seed;
    Ok(cfg)
}

pub fn cmd_simulate(args: &SimulateArgs, threads: Option<usize>) -> Result<simulate::CampaignSummary> {
    let t = &args.tuning;
    let cfg = simulate::CampaignConfig {
        scenario: scenario_from(args)?,
        families: args.fit.clone(),
        path: path_options(t.grid_size, t.ratio, t.tol, t.max_iter),
        write_data: args.write_data,
        midpoint: args.midpoint,
        out_dir: args.out_dir.clone(),
        threads,
    };
    simulate::run_campaign(&cfg)
}

pub fn cmd_metrics(args: &MetricsArgs) -> Result<()> {
    let (names, rows) = io::read_matrix(&args.estimates)?;
    let (tnames, truth) = io::read_truth(&args.truth)?;
    // Estimate columns map onto truth coordinates; unlisted coordinates are 0.
    let index = names
        .iter()
        .map(|n| {
            tnames.iter().position(|t| t == n).ok_or_else(|| {
                CliError::Usage(format!("estimate column '{n}' is not in the truth file"))
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    let reports = rows
        .iter()
        .map(|r| {
            let mut full = vec![0.0; truth.len()];
            for (v, &j) in r.iter().zip(&index) {
                full[j] = *v;
            }
            score(&full, &truth, None, args.tol)
        })
        .collect::<icpen_core::Result<Vec<_>>>()?;
    let a = aggregate(&reports)?;
    let se = |s: &icpen_core::Summary| s.se.map_or_else(|| "NA".to_string(), fmt_f64);
    let header = ["replicates", "L1", "L1_se", "L2", "L2_se", "FP", "FP_se", "FN", "FN_se"]
        .map(String::from);
    let row = vec![
        a.replicates.to_string(),
        fmt_f64(a.l1.mean),
        se(&a.l1),
        fmt_f64(a.l2.mean),
        se(&a.l2),
        fmt_f64(a.fp.mean),
        se(&a.fp),
        fmt_f64(a.fn_.mean),
        se(&a.fn_),
    ];
    match &args.output {
        Some(p) => io::write_csv(p, &header, &[row]),
        None => {
            println!("{}", header.join(","));
            println!("{}", row.join(","));
            Ok(())
        }
    }
}

pub fn cmd_impute(args: &ImputeArgs) -> Result<()> {
    match args.mode {
        ImputeMode::Midpoint => {
            let data = io::read_dataset(&args.input)?;
            io::write_midpoint(&args.output, &data, &midpoint_impute(&data))
        }
        ImputeMode::Genotype => impute_genotypes(&args.input, &args.output, args.seed),
    }
}

fn impute_genotypes(input: &Path, output: &Path, seed: u64) -> Result<()> {
    let data = io::read_dataset_raw(input, true)?;
    let (n, p) = (data.n(), data.p());
    let mut z = data.columns().to_vec();
    for j in 0..p {
        let col = &mut z[j * n..(j + 1) * n];
        if col.iter().any(|v| v.is_nan()) {
            let mut rng = replicate_rng(seed, j as u64);
            impute_missing_genotypes(col, &mut rng)?;
        }
    }
    let trunc = data.has_truncation().then(|| data.truncation().to_vec());
    let filled = Dataset::from_columns(data.left().to_vec(), data.right().to_vec(), trunc, z)?
        .with_names(data.names().to_vec())?;
    io::write_dataset(output, &filled)
}
