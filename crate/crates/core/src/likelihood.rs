//! Observed-data log likelihood of the Cox model with a step-function
//! baseline cumulative hazard carried by the support set.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::support::SupportSet;
use serde::{Deserialize, Serialize};

/// Linear predictors are clamped to this magnitude before exponentiation.
pub const ETA_CLAMP: f64 = 700.0;

/// `log(1 - exp(-x))` for `x >= 0`, accurate for tiny and large `x`.
pub fn log1mexp(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else if x < std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// `exp(eta_i)` for each subject, with `eta` clamped to `±ETA_CLAMP`.
/// Returns the exponentials and how many entries were clamped.
pub fn exp_linear_predictor(eta: &[f64]) -> (Vec<f64>, usize) {
    let mut clamped = 0;
    let out = eta
        .iter()
        .map(|&e| {
            if e.abs() > ETA_CLAMP {
                clamped += 1;
                e.clamp(-ETA_CLAMP, ETA_CLAMP).exp()
            } else {
                e.exp()
            }
        })
        .collect();
    (out, clamped)
}

/// Regression coefficients plus baseline jump sizes on a support set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelState {
    pub beta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub support: SupportSet,
}

impl ModelState {
    pub fn new(beta: Vec<f64>, lambda: Vec<f64>, support: SupportSet) -> Result<Self> {
        if lambda.len() != support.len() {
            return Err(Error::DimensionMismatch {
                what: "jump sizes vs support set",
                expected: support.len(),
                got: lambda.len(),
            });
        }
        Ok(Self {
            beta,
            lambda,
            support,
        })
    }

    /// `beta = 0`, every jump `1/n`.
    pub fn cold_start(p: usize, n: usize, support: SupportSet) -> Self {
        let m = support.len();
        Self {
            beta: vec![0.0; p],
            lambda: vec![1.0 / n as f64; m],
            support,
        }
    }

    /// Baseline cumulative hazard `sum_{u_k <= t} lambda_k`.
    pub fn cumulative_hazard(&self, t: f64) -> f64 {
        let k = self.support.count_at_or_below(t);
        self.lambda[..k].iter().sum()
    }

    /// Prefix sums of the jumps: entry `k` is the hazard through the first
    /// `k` support points.
    pub fn cumulative_jumps(&self) -> Vec<f64> {
        let mut acc = Vec::with_capacity(self.lambda.len() + 1);
        acc.push(0.0);
        let mut s = 0.0;
        for l in &self.lambda {
            s += l;
            acc.push(s);
        }
        acc
    }

    pub fn nonzero_count(&self) -> usize {
        self.beta.iter().filter(|b| **b != 0.0).count()
    }

    fn check(&self, data: &Dataset) -> Result<()> {
        if self.beta.len() != data.p() {
            return Err(Error::DimensionMismatch {
                what: "coefficients",
                expected: data.p(),
                got: self.beta.len(),
            });
        }
        if self.beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite("regression coefficients"));
        }
        if self.lambda.iter().any(|l| !l.is_finite()) {
            return Err(Error::NonFinite("baseline jump sizes"));
        }
        if self.lambda.iter().any(|l| *l < 0.0) {
            return Err(Error::InvalidInput("negative baseline jump size".into()));
        }
        Ok(())
    }
}

/// Log likelihood for interval-censored data.
///
/// Subject `i` contributes `-A_i + I(R_i < inf) log(1 - exp(-B_i))` with
/// `A_i` the hazard mass at or before `L_i` and `B_i` the mass in `(L_i, R_i]`,
/// both scaled by `exp(beta' Z_i)`. Returns `-inf` when an interval-censored
/// subject has zero bracketing mass.
pub fn loglik(state: &ModelState, data: &Dataset) -> Result<f64> {
    state.check(data)?;
    let eta = data.linear_predictor(&state.beta);
    let (risk, _) = exp_linear_predictor(&eta);
    let cum = state.cumulative_jumps();
    let s = &state.support;
    let mut total = 0.0;
    for i in 0..data.n() {
        let (l, r) = (data.left()[i], data.right()[i]);
        let at_l = cum[s.count_at_or_below(l)];
        total -= at_l * risk[i];
        if r.is_finite() {
            let bracket = cum[s.count_at_or_below(r)] - at_l;
            total += log1mexp(bracket * risk[i]);
        }
    }
    Ok(total)
}

/// Log likelihood for left-truncated, interval-censored data. Jumps at or
/// before a subject's entry time cancel out of that subject's contribution.
pub fn loglik_truncated(state: &ModelState, data: &Dataset) -> Result<f64> {
    state.check(data)?;
    let eta = data.linear_predictor(&state.beta);
    let (risk, _) = exp_linear_predictor(&eta);
    let cum = state.cumulative_jumps();
    let s = &state.support;
    let mut total = 0.0;
    for i in 0..data.n() {
        let (l, r, v) = (data.left()[i], data.right()[i], data.truncation()[i]);
        let at_v = cum[s.count_at_or_below(v)];
        let at_l = cum[s.count_at_or_below(l)];
        total -= (at_l - at_v) * risk[i];
        if r.is_finite() {
            let bracket = cum[s.count_at_or_below(r)] - at_l;
            total += log1mexp(bracket * risk[i]);
        }
    }
    Ok(total)
}

/// Chooses the likelihood form by the truncation flag.
pub fn loglik_for(state: &ModelState, data: &Dataset, truncation: bool) -> Result<f64> {
    if truncation {
        loglik_truncated(state, data)
    } else {
        loglik(state, data)
    }
}
