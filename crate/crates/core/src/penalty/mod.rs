//! Penalty families and their univariate penalized least-squares solvers.
//!
//! Every family implements [`Penalty`]; [`PenaltyRegistry`] maps names to
//! constructors so the fitter can select a family at runtime. The univariate
//! problem solved by each family is
//!
//! ```text
//! minimize over b:  (1/2) v (y/v - b)^2 + p_theta(|b|)
//! ```
//!
//! which is what one coordinate-descent step sees after the quadratic
//! surrogate of the expected complete-data log likelihood.

mod adaptive;
mod lasso;
mod mcp;
mod scad;

pub use adaptive::AdaptiveLasso;
pub use lasso::Lasso;
pub use mcp::Mcp;
pub use scad::Scad;

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A penalty family. `theta` passed to each method is the coordinate's
/// effective threshold, already scaled by its penalty factor and (for the
/// adaptive lasso) its weight.
pub trait Penalty: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// Shape parameter, for families that have one.
    fn alpha(&self) -> Option<f64> {
        None
    }

    fn value(&self, b: f64, theta: f64) -> f64;

    /// Right derivative in `|b|`, for `b >= 0`.
    fn derivative(&self, b: f64, theta: f64) -> f64;

    /// Global minimizer of `(1/2) v (y/v - b)^2 + p_theta(|b|)`, `v > 0`.
    fn solve(&self, y: f64, v: f64, theta: f64) -> f64;

    /// Smallest threshold at which [`Penalty::solve`] returns zero for this
    /// `(y, v)`; the path starts at the maximum of these over coordinates.
    fn null_threshold(&self, y: f64, v: f64) -> f64;

    /// `theta_min / theta_max` for the solution path.
    fn path_ratio(&self) -> f64;

    fn needs_weights(&self) -> bool {
        false
    }
}

/// Soft-thresholding operator `S(x, t)`.
pub fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// Univariate objective without the constant `y^2 / (2v)`.
fn reduced_objective(y: f64, v: f64, b: f64, pen: f64) -> f64 {
    0.5 * v * b * b - y * b + pen
}

/// Picks the best of a set of candidate magnitudes for `|y|`, comparing
/// against `b = 0`. Ties with zero go to the nonzero candidate.
pub(crate) fn min_over_candidates(
    ay: f64,
    v: f64,
    candidates: &[f64],
    pen: impl Fn(f64) -> f64,
) -> f64 {
    let mut best = 0.0;
    let mut best_val = 0.0;
    for &b in candidates {
        if b <= 0.0 {
            continue;
        }
        let val = reduced_objective(ay, v, b, pen(b));
        if val < best_val || (best == 0.0 && val <= best_val) {
            best = b;
            best_val = val;
        }
    }
    best
}

/// A penalty family with its threshold and optional adaptive weights.
#[derive(Debug, Clone)]
pub struct PenaltySpec {
    pub penalty: Arc<dyn Penalty>,
    pub theta: f64,
    /// `|beta_tilde_j|` for the adaptive lasso; zero pins a coefficient at 0.
    pub weights: Option<Vec<f64>>,
}

impl PenaltySpec {
    pub fn new(penalty: Arc<dyn Penalty>, theta: f64) -> Self {
        Self {
            penalty,
            theta,
            weights: None,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self {
            penalty: Arc::clone(&self.penalty),
            theta,
            weights: self.weights.clone(),
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if !(self.theta >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "threshold must be nonnegative, got {}",
                self.theta
            )));
        }
        match (&self.weights, self.penalty.needs_weights()) {
            (None, true) => Err(Error::InvalidInput(format!(
                "{} needs per-coefficient weights",
                self.penalty.name()
            ))),
            (Some(w), _) if w.len() != p => Err(Error::DimensionMismatch {
                what: "penalty weights",
                expected: p,
                got: w.len(),
            }),
            (Some(w), _) if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) => Err(
                Error::InvalidInput("penalty weights must be finite and nonnegative".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Multiplier turning `theta` into coordinate `j`'s effective threshold:
    /// `factor_j / |beta_tilde_j|`. Unpenalized coordinates get 0, pinned
    /// adaptive coordinates get infinity.
    pub fn multiplier(&self, j: usize, factor: f64) -> f64 {
        if factor == 0.0 {
            return 0.0;
        }
        match &self.weights {
            Some(w) if w[j] == 0.0 => f64::INFINITY,
            Some(w) => factor / w[j],
            None => factor,
        }
    }

    pub fn coordinate_theta(&self, j: usize, factor: f64) -> f64 {
        let m = self.multiplier(j, factor);
        if m == 0.0 {
            0.0
        } else {
            self.theta * m
        }
    }

    /// `sum_j p_theta_j(|beta_j|)`.
    pub fn total(&self, beta: &[f64], factors: &[f64]) -> f64 {
        beta.iter()
            .enumerate()
            .filter(|(_, b)| **b != 0.0)
            .map(|(j, b)| self.penalty.value(*b, self.coordinate_theta(j, factors[j])))
            .sum()
    }
}

/// Penalty value for a single coefficient under `spec`'s threshold.
pub fn penalty_value(spec: &PenaltySpec, b: f64) -> Result<f64> {
    if !b.is_finite() {
        return Err(Error::NonFinite("penalty argument"));
    }
    Ok(spec.penalty.value(b, spec.theta))
}

pub fn penalty_deriv(spec: &PenaltySpec, b: f64) -> f64 {
    spec.penalty.derivative(b.abs(), spec.theta)
}

/// Solves the univariate problem with the spec's threshold.
pub fn univariate_solve(spec: &PenaltySpec, y: f64, v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::InvalidInput(format!(
            "univariate curvature must be positive, got {v}"
        )));
    }
    Ok(spec.penalty.solve(y, v, spec.theta))
}

/// Threshold at which every penalized coordinate's univariate solution is
/// zero, given null-model scores `y` and curvatures `v`. `multipliers[j]` is
/// the coordinate's threshold multiplier (see [`PenaltySpec::multiplier`]);
/// coordinates with multiplier 0 or infinity are skipped.
pub fn theta_max(penalty: &dyn Penalty, y: &[f64], v: &[f64], multipliers: &[f64]) -> Result<f64> {
    let mut best = 0.0f64;
    for ((yj, vj), mj) in y.iter().zip(v).zip(multipliers) {
        if *mj == 0.0 || mj.is_infinite() || !(*vj > 0.0) {
            continue;
        }
        best = best.max(penalty.null_threshold(*yj, *vj) / mj);
    }
    if best > 0.0 && best.is_finite() {
        Ok(best)
    } else {
        Err(Error::DegenerateNullFit)
    }
}

type Builder = Box<dyn Fn(Option<f64>) -> Result<Arc<dyn Penalty>> + Send + Sync>;

/// Name-keyed constructors for penalty families.
pub struct PenaltyRegistry {
    builders: BTreeMap<String, Builder>,
}

impl Default for PenaltyRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl PenaltyRegistry {
    pub fn empty() -> Self {
        Self {
            builders: BTreeMap::new(),
        }
    }

    /// Lasso, adaptive lasso, SCAD (alpha 2.5) and MCP (alpha 1.5).
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register("lasso", |_| Ok(Arc::new(Lasso)));
        r.register("adaptive_lasso", |_| Ok(Arc::new(AdaptiveLasso)));
        r.register("scad", |alpha| {
            Ok(Arc::new(Scad::new(alpha.unwrap_or(Scad::DEFAULT_ALPHA))?))
        });
        r.register("mcp", |alpha| {
            Ok(Arc::new(Mcp::new(alpha.unwrap_or(Mcp::DEFAULT_ALPHA))?))
        });
        r
    }

    pub fn register<F>(&mut self, name: &str, build: F)
    where
        F: Fn(Option<f64>) -> Result<Arc<dyn Penalty>> + Send + Sync + 'static,
    {
        self.builders.insert(name.to_string(), Box::new(build));
    }

    /// Builds a family by name. Hyphens and case are normalized so
    /// `adaptive-lasso` and `MCP` resolve.
    pub fn create(&self, name: &str, alpha: Option<f64>) -> Result<Arc<dyn Penalty>> {
        let key = name.trim().to_ascii_lowercase().replace('-', "_");
        let build = self.builders.get(&key).ok_or_else(|| {
            Error::InvalidInput(format!(
                "unknown penalty '{name}' (known: {})",
                self.names().join(", ")
            ))
        })?;
        build(alpha)
    }

    pub fn names(&self) -> Vec<&str> {
        self.builders.keys().map(String::as_str).collect()
    }
}
