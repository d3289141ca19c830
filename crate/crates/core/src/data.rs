//! Interval-censored observations and the covariate matrix.
//!
//! Each subject contributes a censoring interval `(left, right]` with
//! `right = +inf` for subjects still event-free at their last inspection, an
//! optional study-entry (left-truncation) time, and a covariate row. Covariates
//! are held column-major because the coordinate-descent solver walks columns.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One subject.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub left: f64,
    /// `f64::INFINITY` encodes a right-censored subject.
    pub right: f64,
    pub truncation: f64,
    pub covariates: Vec<f64>,
}

impl Observation {
    pub fn new(left: f64, right: f64, covariates: Vec<f64>) -> Self {
        Self {
            left,
            right,
            truncation: 0.0,
            covariates,
        }
    }

    pub fn with_truncation(mut self, truncation: f64) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn is_right_censored(&self) -> bool {
        self.right.is_infinite()
    }
}

/// A single invariant violation found by [`Dataset::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub subject: usize,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "subject {}: {}", self.subject, self.message)
    }
}

/// Per-column centering and scaling applied by [`Dataset::standardize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationRecord {
    pub center: Vec<f64>,
    pub scale: Vec<f64>,
    /// Constant columns are left untouched (center 0, scale 1).
    pub constant: Vec<bool>,
}

impl StandardizationRecord {
    pub fn identity(p: usize) -> Self {
        Self {
            center: vec![0.0; p],
            scale: vec![1.0; p],
            constant: vec![false; p],
        }
    }

    /// Maps coefficients fitted on standardized covariates back to the
    /// original covariate scale.
    pub fn to_original(&self, beta: &[f64]) -> Vec<f64> {
        beta.iter().zip(&self.scale).map(|(b, s)| b / s).collect()
    }

    pub fn to_standardized(&self, beta: &[f64]) -> Vec<f64> {
        beta.iter().zip(&self.scale).map(|(b, s)| b * s).collect()
    }

    /// `sum_j beta_j * c_j / s_j`: the linear-predictor shift between the
    /// standardized and the original parameterization.
    pub fn offset(&self, beta_std: &[f64]) -> f64 {
        beta_std
            .iter()
            .zip(self.center.iter().zip(&self.scale))
            .map(|(b, (c, s))| b * c / s)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    p: usize,
    left: Vec<f64>,
    right: Vec<f64>,
    truncation: Vec<f64>,
    /// Column-major, `z[j * n + i]`.
    z: Vec<f64>,
    penalty_factors: Vec<f64>,
    constant: Vec<bool>,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(observations: Vec<Observation>) -> Result<Self> {
        let n = observations.len();
        if n == 0 {
            return Err(Error::InvalidInput("dataset has no subjects".into()));
        }
        let p = observations[0].covariates.len();
        let mut z = vec![0.0; n * p];
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        let mut truncation = Vec::with_capacity(n);
        for (i, obs) in observations.into_iter().enumerate() {
            if obs.covariates.len() != p {
                return Err(Error::DimensionMismatch {
                    what: "covariate row length",
                    expected: p,
                    got: obs.covariates.len(),
                });
            }
            for (j, v) in obs.covariates.iter().enumerate() {
                z[j * n + i] = *v;
            }
            left.push(obs.left);
            right.push(obs.right);
            truncation.push(obs.truncation);
        }
        Ok(Self::from_parts(n, p, left, right, truncation, z))
    }

    /// Builds a dataset from a column-major covariate buffer.
    pub fn from_columns(
        left: Vec<f64>,
        right: Vec<f64>,
        truncation: Option<Vec<f64>>,
        z: Vec<f64>,
    ) -> Result<Self> {
        let n = left.len();
        if n == 0 {
            return Err(Error::InvalidInput("dataset has no subjects".into()));
        }
        if right.len() != n {
            return Err(Error::DimensionMismatch {
                what: "right endpoints",
                expected: n,
                got: right.len(),
            });
        }
        let truncation = truncation.unwrap_or_else(|| vec![0.0; n]);
        if truncation.len() != n {
            return Err(Error::DimensionMismatch {
                what: "truncation times",
                expected: n,
                got: truncation.len(),
            });
        }
        if z.len() % n != 0 {
            return Err(Error::InvalidInput(format!(
                "covariate buffer of length {} is not a multiple of n = {n}",
                z.len()
            )));
        }
        let p = z.len() / n;
        Ok(Self::from_parts(n, p, left, right, truncation, z))
    }

    fn from_parts(
        n: usize,
        p: usize,
        left: Vec<f64>,
        right: Vec<f64>,
        truncation: Vec<f64>,
        z: Vec<f64>,
    ) -> Self {
        let constant = (0..p)
            .map(|j| {
                let col = &z[j * n..(j + 1) * n];
                col.iter().all(|v| *v == col[0])
            })
            .collect();
        Self {
            n,
            p,
            left,
            right,
            truncation,
            z,
            penalty_factors: vec![1.0; p],
            constant,
            names: (1..=p).map(|j| format!("z{j}")).collect(),
        }
    }

    pub fn with_penalty_factors(mut self, factors: Vec<f64>) -> Result<Self> {
        if factors.len() != self.p {
            return Err(Error::DimensionMismatch {
                what: "penalty factors",
                expected: self.p,
                got: factors.len(),
            });
        }
        if factors.iter().any(|f| !f.is_finite() || *f < 0.0) {
            return Err(Error::InvalidInput(
                "penalty factors must be finite and nonnegative".into(),
            ));
        }
        self.penalty_factors = factors;
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p {
            return Err(Error::DimensionMismatch {
                what: "covariate names",
                expected: self.p,
                got: names.len(),
            });
        }
        self.names = names;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn left(&self) -> &[f64] {
        &self.left
    }

    pub fn right(&self) -> &[f64] {
        &self.right
    }

    pub fn truncation(&self) -> &[f64] {
        &self.truncation
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.z[j * self.n..(j + 1) * self.n]
    }

    pub fn columns(&self) -> &[f64] {
        &self.z
    }

    pub fn penalty_factors(&self) -> &[f64] {
        &self.penalty_factors
    }

    pub fn is_penalized(&self, j: usize) -> bool {
        self.penalty_factors[j] > 0.0
    }

    pub fn constant_columns(&self) -> &[bool] {
        &self.constant
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn has_truncation(&self) -> bool {
        self.truncation.iter().any(|v| *v > 0.0)
    }

    pub fn observation(&self, i: usize) -> Observation {
        Observation {
            left: self.left[i],
            right: self.right[i],
            truncation: self.truncation[i],
            covariates: (0..self.p).map(|j| self.z[j * self.n + i]).collect(),
        }
    }

    pub fn observations(&self) -> impl Iterator<Item = Observation> + '_ {
        (0..self.n).map(|i| self.observation(i))
    }

    /// Linear predictor `Z beta`.
    pub fn linear_predictor(&self, beta: &[f64]) -> Vec<f64> {
        let mut eta = vec![0.0; self.n];
        for (j, b) in beta.iter().enumerate() {
            if *b != 0.0 {
                for (e, z) in eta.iter_mut().zip(self.column(j)) {
                    *e += b * z;
                }
            }
        }
        eta
    }

    /// Reorders subjects; used by permutation-invariance checks.
    pub fn permute_subjects(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(Error::DimensionMismatch {
                what: "permutation",
                expected: self.n,
                got: order.len(),
            });
        }
        let pick = |v: &[f64]| order.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let mut z = Vec::with_capacity(self.z.len());
        for j in 0..self.p {
            let col = self.column(j);
            z.extend(order.iter().map(|&i| col[i]));
        }
        let mut out = Self::from_parts(
            self.n,
            self.p,
            pick(&self.left),
            pick(&self.right),
            pick(&self.truncation),
            z,
        );
        out.penalty_factors = self.penalty_factors.clone();
        out.names = self.names.clone();
        Ok(out)
    }

    /// Keeps only the listed covariate columns.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut z = Vec::with_capacity(cols.len() * self.n);
        for &j in cols {
            z.extend_from_slice(self.column(j));
        }
        let mut out = Self::from_parts(
            self.n,
            cols.len(),
            self.left.clone(),
            self.right.clone(),
            self.truncation.clone(),
            z,
        );
        out.penalty_factors = cols.iter().map(|&j| self.penalty_factors[j]).collect();
        out.names = cols.iter().map(|&j| self.names[j].clone()).collect();
        out
    }

    /// Reports every invariant violation. An empty list means the dataset is
    /// usable.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |subject, message: &str| {
            out.push(Violation {
                subject,
                message: message.to_string(),
            })
        };
        for i in 0..self.n {
            let (l, r, v) = (self.left[i], self.right[i], self.truncation[i]);
            if !l.is_finite() || l.is_nan() {
                push(i, "left endpoint is not finite");
            } else if l < 0.0 {
                push(i, "left endpoint is negative");
            }
            if r.is_nan() || r == f64::NEG_INFINITY {
                push(i, "right endpoint is not a time");
            } else if l.is_finite() && l >= r {
                push(i, "left ≥ right");
            }
            if !v.is_finite() {
                push(i, "truncation time is not finite");
            } else if v < 0.0 {
                push(i, "truncation time is negative");
            } else if l.is_finite() && v > l {
                push(i, "truncation exceeds left endpoint");
            }
            if (0..self.p).any(|j| !self.z[j * self.n + i].is_finite()) {
                push(i, "covariate row contains a non-finite value");
            }
        }
        out
    }

    /// Centers every non-constant column to mean zero and scales it to unit
    /// second moment `sum_i z_ij^2 / n = 1`. Constant columns are left as is.
    pub fn standardize(&self) -> Result<(Self, StandardizationRecord)> {
        if self.n < 2 {
            return Err(Error::InvalidInput(
                "standardization needs at least two subjects".into(),
            ));
        }
        if self.p == 0 {
            return Err(Error::InvalidInput("dataset has no covariates".into()));
        }
        let nf = self.n as f64;
        let mut record = StandardizationRecord::identity(self.p);
        let mut z = self.z.clone();
        for j in 0..self.p {
            let col = &mut z[j * self.n..(j + 1) * self.n];
            let mean = col.iter().sum::<f64>() / nf;
            let ss = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / nf;
            let scale = ss.sqrt();
            if self.constant[j] || scale == 0.0 {
                record.constant[j] = true;
                continue;
            }
            for v in col.iter_mut() {
                *v = (*v - mean) / scale;
            }
            record.center[j] = mean;
            record.scale[j] = scale;
        }
        let mut out = Self::from_parts(
            self.n,
            self.p,
            self.left.clone(),
            self.right.clone(),
            self.truncation.clone(),
            z,
        );
        out.constant = record.constant.clone();
        out.penalty_factors = self.penalty_factors.clone();
        out.names = self.names.clone();
        Ok((out, record))
    }

    /// Fraction of subjects with `right = inf`.
    pub fn right_censored_fraction(&self) -> f64 {
        self.right.iter().filter(|r| r.is_infinite()).count() as f64 / self.n as f64
    }
}
