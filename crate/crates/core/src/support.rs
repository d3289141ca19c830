//! Maximal intersections: the intervals `(l, u]` that can carry mass of the
//! nonparametric baseline cumulative hazard.
//!
//! A maximal intersection has a left endpoint drawn from the subjects' `L`
//! values, a finite right endpoint drawn from the admissible right endpoints,
//! and no endpoint of any kind strictly inside. That makes `l` and `u`
//! adjacent in the sorted set of distinct endpoints, so a single sweep over
//! the sorted endpoints finds all of them.

use crate::data::Dataset;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

/// Ordered, disjoint maximal intersections with finite right endpoints.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SupportSet {
    intervals: Vec<Interval>,
}

impl SupportSet {
    pub fn from_intervals(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(|a, b| a.upper.total_cmp(&b.upper));
        Self { intervals }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn uppers(&self) -> Vec<f64> {
        self.intervals.iter().map(|iv| iv.upper).collect()
    }

    /// Number of support points with `u_k <= t`.
    pub fn count_at_or_below(&self, t: f64) -> usize {
        self.intervals.partition_point(|iv| iv.upper <= t)
    }
}

#[derive(Clone, Copy, Default)]
struct Role {
    left: bool,
    right: bool,
}

fn sweep(mut points: Vec<(f64, Role)>) -> Vec<Interval> {
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, Role)> = Vec::with_capacity(points.len());
    for (t, r) in points {
        match merged.last_mut() {
            Some((last, role)) if *last == t => {
                role.left |= r.left;
                role.right |= r.right;
            }
            _ => merged.push((t, r)),
        }
    }
    merged
        .windows(2)
        .filter(|w| w[0].1.left && w[1].1.right)
        .map(|w| Interval {
            lower: w[0].0,
            upper: w[1].0,
        })
        .collect()
}

/// Maximal intersections for interval-censored data without truncation.
pub fn maximal_intersections(data: &Dataset) -> SupportSet {
    let mut points = Vec::with_capacity(2 * data.n());
    for (&l, &r) in data.left().iter().zip(data.right()) {
        points.push((
            l,
            Role {
                left: true,
                ..Role::default()
            },
        ));
        if r.is_finite() {
            points.push((
                r,
                Role {
                    right: true,
                    ..Role::default()
                },
            ));
        }
    }
    SupportSet {
        intervals: sweep(points),
    }
}

/// Maximal intersections under left truncation: entry times join the
/// candidate right endpoints and the excluded interior points, and only
/// intervals with a strictly positive left endpoint are retained.
pub fn maximal_intersections_truncated(data: &Dataset) -> SupportSet {
    let mut points = Vec::with_capacity(3 * data.n());
    for i in 0..data.n() {
        let (l, r, v) = (data.left()[i], data.right()[i], data.truncation()[i]);
        points.push((
            l,
            Role {
                left: true,
                ..Role::default()
            },
        ));
        if r.is_finite() {
            points.push((
                r,
                Role {
                    right: true,
                    ..Role::default()
                },
            ));
        }
        points.push((
            v,
            Role {
                right: true,
                ..Role::default()
            },
        ));
    }
    let intervals = sweep(points)
        .into_iter()
        .filter(|iv| iv.lower > 0.0)
        .collect();
    SupportSet { intervals }
}

/// Uses the truncated rule only when requested and some entry time is
/// positive.
pub fn support_for(data: &Dataset, truncation: bool) -> SupportSet {
    if truncation && data.has_truncation() {
        maximal_intersections_truncated(data)
    } else {
        maximal_intersections(data)
    }
}
