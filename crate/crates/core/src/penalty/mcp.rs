use super::{soft_threshold, Penalty};
use crate::error::{Error, Result};

/// Minimax concave penalty.
#[derive(Debug, Clone, Copy)]
pub struct Mcp {
    alpha: f64,
}

impl Mcp {
    pub const DEFAULT_ALPHA: f64 = 1.5;

    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!(
                "MCP needs alpha > 1, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }
}

impl Default for Mcp {
    fn default() -> Self {
        Self {
            alpha: Self::DEFAULT_ALPHA,
        }
    }
}

impl Penalty for Mcp {
    fn name(&self) -> &'static str {
        "mcp"
    }

    fn alpha(&self) -> Option<f64> {
        Some(self.alpha)
    }

    fn value(&self, b: f64, theta: f64) -> f64 {
        let a = self.alpha;
        let b = b.abs();
        if b == 0.0 {
            0.0
        } else if b <= a * theta {
            theta * b - b * b / (2.0 * a)
        } else {
            a * theta * theta / 2.0
        }
    }

    fn derivative(&self, b: f64, theta: f64) -> f64 {
        if b <= self.alpha * theta {
            theta - b / self.alpha
        } else {
            0.0
        }
    }

    fn solve(&self, y: f64, v: f64, theta: f64) -> f64 {
        if y == 0.0 || theta.is_infinite() {
            return 0.0;
        }
        if theta == 0.0 {
            return y / v;
        }
        let a = self.alpha;
        let ay = y.abs();
        let curvature = v - 1.0 / a;
        if curvature > 0.0 && ay <= v * a * theta {
            soft_threshold(y, theta) / curvature
        } else if ay >= (v * a).sqrt() * theta {
            // Hard-threshold boundary ties resolve to the nonzero minimizer.
            y / v
        } else {
            0.0
        }
    }

    fn null_threshold(&self, y: f64, v: f64) -> f64 {
        y.abs().max(y.abs() / (v * self.alpha))
    }

    fn path_ratio(&self) -> f64 {
        0.05
    }
}
