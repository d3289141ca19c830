use super::{min_over_candidates, soft_threshold, Penalty};
use crate::error::{Error, Result};

/// Smoothly clipped absolute deviation penalty.
#[derive(Debug, Clone, Copy)]
pub struct Scad {
    alpha: f64,
}

impl Scad {
    pub const DEFAULT_ALPHA: f64 = 2.5;

    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 2.0) || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!(
                "SCAD needs alpha > 2, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }
}

impl Default for Scad {
    fn default() -> Self {
        Self {
            alpha: Self::DEFAULT_ALPHA,
        }
    }
}

impl Penalty for Scad {
    fn name(&self) -> &'static str {
        "scad"
    }

    fn alpha(&self) -> Option<f64> {
        Some(self.alpha)
    }

    fn value(&self, b: f64, theta: f64) -> f64 {
        let a = self.alpha;
        let b = b.abs();
        if b == 0.0 {
            0.0
        } else if b <= theta {
            theta * b
        } else if b <= a * theta {
            -(b * b - 2.0 * a * theta * b + theta * theta) / (2.0 * (a - 1.0))
        } else {
            (a + 1.0) * theta * theta / 2.0
        }
    }

    fn derivative(&self, b: f64, theta: f64) -> f64 {
        let a = self.alpha;
        if b <= theta {
            theta
        } else {
            (a * theta - b).max(0.0) / (a - 1.0)
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
        let curvature = v - 1.0 / (a - 1.0);
        let b = if curvature > 0.0 {
            if ay <= theta * (v + 1.0) {
                soft_threshold(ay, theta) / v
            } else if ay <= v * a * theta {
                soft_threshold(ay, a * theta / (a - 1.0)) / curvature
            } else {
                ay / v
            }
        } else {
            // The middle piece is concave: its minimum sits at an endpoint.
            let first = ((ay - theta) / v).clamp(0.0, theta);
            let last = (ay / v).max(a * theta);
            min_over_candidates(ay, v, &[first, theta, a * theta, last], |b| {
                self.value(b, theta)
            })
        };
        b.copysign(y)
    }

    fn null_threshold(&self, y: f64, v: f64) -> f64 {
        y.abs().max(y.abs() / v)
    }

    fn path_ratio(&self) -> f64 {
        0.05
    }
}
