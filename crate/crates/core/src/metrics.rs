//! Estimation and selection accuracy against a known truth.

use crate::error::{Error, Result};
use crate::likelihood::ModelState;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub l1_error: f64,
    pub l2_error: f64,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    /// Estimates at the truly nonzero coordinates, in coordinate order.
    pub beta_hat_on_true_support: Vec<f64>,
    pub lambda_hat_curve: Option<Vec<(f64, f64)>>,
    pub baseline_sup_error: Option<f64>,
}

/// Scores `beta_hat` against `beta_true`.
///
/// Entries with `|b| <= tol` count as zero for FP/FN; FP/FN only look at
/// coordinates flagged in `penalized` (all when `None`).
pub fn score(
    beta_hat: &[f64],
    beta_true: &[f64],
    penalized: Option<&[bool]>,
    tol: f64,
) -> Result<FitReport> {
    if beta_hat.len() != beta_true.len() {
        return Err(Error::DimensionMismatch {
            what: "estimated vs true coefficients",
            expected: beta_true.len(),
            got: beta_hat.len(),
        });
    }
    if let Some(mask) = penalized {
        if mask.len() != beta_true.len() {
            return Err(Error::DimensionMismatch {
                what: "penalized mask",
                expected: beta_true.len(),
                got: mask.len(),
            });
        }
    }
    let (mut l1, mut l2sq, mut fp, mut fn_) = (0.0, 0.0, 0, 0);
    let mut on_support = Vec::new();
    for (j, (&bh, &bt)) in beta_hat.iter().zip(beta_true).enumerate() {
        let d = bh - bt;
        l1 += d.abs();
        l2sq += d * d;
        if bt != 0.0 {
            on_support.push(bh);
        }
        if penalized.is_some_and(|m| !m[j]) {
            continue;
        }
        let selected = bh.abs() > tol;
        match (bt != 0.0, selected) {
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            _ => {}
        }
    }
    Ok(FitReport {
        l1_error: l1,
        l2_error: l2sq.sqrt(),
        fp,
        fn_,
        beta_hat_on_true_support: on_support,
        lambda_hat_curve: None,
        baseline_sup_error: None,
    })
}

/// Fitted baseline cumulative hazard on the original covariate scale.
/// `offset` is `sum_j beta_j c_j` for the centering used when fitting.
pub fn baseline_curve(state: &ModelState, offset: f64, grid: &[f64]) -> Vec<(f64, f64)> {
    let scale = (-offset).exp();
    grid.iter()
        .map(|&t| (t, state.cumulative_hazard(t) * scale))
        .collect()
}

/// Sup-norm distance between the fitted step hazard and `(eta t)^kappa`
/// over `[u_1, u_m]`. `None` for an empty support.
pub fn baseline_sup_error(state: &ModelState, offset: f64, eta: f64, kappa: f64) -> Option<f64> {
    let u = state.support.uppers();
    if u.is_empty() {
        return None;
    }
    let truth = |t: f64| (eta * t).powf(kappa);
    let scale = (-offset).exp();
    let cum = state.cumulative_jumps();
    let mut sup: f64 = 0.0;
    for k in 0..u.len() {
        let level = cum[k + 1] * scale;
        sup = sup.max((level - truth(u[k])).abs());
        if let Some(next) = u.get(k + 1) {
            sup = sup.max((level - truth(*next)).abs());
        }
    }
    Some(sup)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// `None` with a single observation.
    pub se: Option<f64>,
}

fn sample_sd(xs: &[f64]) -> Option<(f64, f64)> {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return None;
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    Some((mean, var.sqrt()))
}

impl Summary {
    /// Mean and standard error of the mean.
    pub fn of_mean(xs: &[f64]) -> Self {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        Self {
            mean,
            se: sample_sd(xs).map(|(_, sd)| sd / (xs.len() as f64).sqrt()),
        }
    }

    /// Mean and empirical standard deviation, the usual Monte Carlo
    /// standard error of an estimator.
    pub fn of_estimates(xs: &[f64]) -> Self {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        Self {
            mean,
            se: sample_sd(xs).map(|(_, sd)| sd),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub replicates: usize,
    pub l1: Summary,
    pub l2: Summary,
    pub fp: Summary,
    #[serde(rename = "fn")]
    pub fn_: Summary,
    pub baseline_sup_error: Option<Summary>,
    /// One entry per true nonzero coefficient.
    pub coefficients: Vec<Summary>,
}

pub fn aggregate(reports: &[FitReport]) -> Result<Aggregate> {
    if reports.is_empty() {
        return Err(Error::InvalidInput("no reports to aggregate".into()));
    }
    let col = |f: &dyn Fn(&FitReport) -> f64| reports.iter().map(f).collect::<Vec<_>>();
    let k = reports[0].beta_hat_on_true_support.len();
    if reports.iter().any(|r| r.beta_hat_on_true_support.len() != k) {
        return Err(Error::InvalidInput(
            "reports disagree on the number of true nonzero coefficients".into(),
        ));
    }
    let coefficients = (0..k)
        .map(|j| Summary::of_estimates(&col(&|r| r.beta_hat_on_true_support[j])))
        .collect();
    let sup: Vec<f64> = reports.iter().filter_map(|r| r.baseline_sup_error).collect();
    Ok(Aggregate {
        replicates: reports.len(),
        l1: Summary::of_mean(&col(&|r| r.l1_error)),
        l2: Summary::of_mean(&col(&|r| r.l2_error)),
        fp: Summary::of_mean(&col(&|r| r.fp as f64)),
        fn_: Summary::of_mean(&col(&|r| r.fn_ as f64)),
        baseline_sup_error: (!sup.is_empty()).then(|| Summary::of_mean(&sup)),
        coefficients,
    })
}
