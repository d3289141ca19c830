use super::{soft_threshold, Penalty};

/// `theta * |b|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Lasso;

impl Penalty for Lasso {
    fn name(&self) -> &'static str {
        "lasso"
    }

    fn value(&self, b: f64, theta: f64) -> f64 {
        if b == 0.0 {
            0.0
        } else {
            theta * b.abs()
        }
    }

    fn derivative(&self, _b: f64, theta: f64) -> f64 {
        theta
    }

    fn solve(&self, y: f64, v: f64, theta: f64) -> f64 {
        soft_threshold(y, theta) / v
    }

    fn null_threshold(&self, y: f64, _v: f64) -> f64 {
        y.abs()
    }

    fn path_ratio(&self) -> f64 {
        0.05
    }
}
