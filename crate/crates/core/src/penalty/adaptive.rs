use super::{Lasso, Penalty};

/// Lasso with coefficient-specific weights `1/|beta_tilde_j|`.
///
/// The weights enter through [`super::PenaltySpec::multiplier`], so the
/// scalar functions here see the already rescaled threshold and coincide
/// with the lasso.
#[derive(Debug, Clone, Copy, Default)]
pub struct AdaptiveLasso;

impl Penalty for AdaptiveLasso {
    fn name(&self) -> &'static str {
        "adaptive_lasso"
    }

    fn value(&self, b: f64, theta: f64) -> f64 {
        Lasso.value(b, theta)
    }

    fn derivative(&self, b: f64, theta: f64) -> f64 {
        Lasso.derivative(b, theta)
    }

    fn solve(&self, y: f64, v: f64, theta: f64) -> f64 {
        Lasso.solve(y, v, theta)
    }

    fn null_threshold(&self, y: f64, v: f64) -> f64 {
        Lasso.null_threshold(y, v)
    }

    fn path_ratio(&self) -> f64 {
        1e-4
    }

    fn needs_weights(&self) -> bool {
        true
    }
}
