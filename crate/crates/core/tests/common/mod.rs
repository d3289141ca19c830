#![allow(dead_code)]

use icpen_core::simulation::{censor, event_time_from_uniform, gen_inspections, replicate_rng};
use icpen_core::Dataset;
use rand::Rng;
use rand_distr::StandardNormal;

/// Gaussian covariates, Weibull event times under a proportional-hazards
/// shift, six random inspections. Returns the standardized dataset.
pub fn gaussian_dataset(n: usize, p: usize, beta: &[f64], seed: u64) -> Dataset {
    let mut rng = replicate_rng(seed, 0);
    let z: Vec<f64> = (0..n * p).map(|_| rng.sample(StandardNormal)).collect();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for i in 0..n {
        let lp: f64 = (0..p).map(|j| beta[j] * z[j * n + i]).sum();
        let u: f64 = rng.random();
        let t = event_time_from_uniform(lp, 1.0 - u, 1.2, 1.5);
        let (l, r) = censor(t, &gen_inspections(6, &mut rng));
        left.push(l);
        right.push(r);
    }
    let data = Dataset::from_columns(left, right, None, z).unwrap();
    data.standardize().unwrap().0
}

pub fn signal(p: usize, entries: &[(usize, f64)]) -> Vec<f64> {
    let mut beta = vec![0.0; p];
    for (j, b) in entries {
        beta[*j] = *b;
    }
    beta
}
