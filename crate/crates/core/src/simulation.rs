//! Simulated GWAS-style interval-censored data.
//!
//! SNP minor-allele counts come from trichotomized latent Gaussians with
//! AR(1) correlation across loci; the cut points reproduce Hardy–Weinberg
//! genotype frequencies at a uniformly drawn minor-allele frequency. Event
//! times follow a Cox model with Weibull baseline hazard
//! `kappa * eta * (eta t)^(kappa - 1)`, and each subject is inspected at six
//! random times.
//!
//! Randomness: each replicate draws from a ChaCha8 generator seeded with
//! the campaign seed and switched to stream `replicate`, so replicates are
//! independent, reproducible, and can be generated in any order or in
//! parallel.

use crate::data::Dataset;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Six nonzero effects: two each of small, medium and large magnitude.
pub const BETA6: [f64; 6] = [-1.40, -0.83, -1.64, 0.69, 1.39, 1.65];
/// Extra six effects appended to [`BETA6`] for the twelve-signal scenarios.
pub const BETA12_TAIL: [f64; 6] = [-0.52, 0.86, -1.23, 1.18, -1.97, -1.68];

pub fn beta12() -> Vec<f64> {
    BETA6.iter().chain(BETA12_TAIL.iter()).copied().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub n: usize,
    pub p: usize,
    pub rho: f64,
    /// Nonzero coefficients, placed at [`ScenarioConfig::signal_positions`].
    pub effects: Vec<f64>,
    pub weibull_eta: f64,
    pub weibull_kappa: f64,
    pub maf_range: (f64, f64),
    pub num_inspections: usize,
    pub replicates: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn new(n: usize, p: usize, rho: f64, effects: Vec<f64>) -> Self {
        Self {
            n,
            p,
            rho,
            effects,
            weibull_eta: 1.2,
            weibull_kappa: 1.5,
            maf_range: (0.05, 0.20),
            num_inspections: 6,
            replicates: 200,
            seed: 1,
        }
    }

    /// `t1`..`t4` follow the four table settings (six or twelve effects,
    /// `rho` 0 or 0.8) at `n = 500, p = 3000`; the `-small` variants use
    /// `n = 400, p = 800` and 30 replicates.
    pub fn preset(name: &str) -> Option<Self> {
        let (base, small) = match name.strip_suffix("-small") {
            Some(b) => (b, true),
            None => (name, false),
        };
        let (effects, rho) = match base {
            "t1" => (BETA6.to_vec(), 0.0),
            "t2" => (BETA6.to_vec(), 0.8),
            "t3" => (beta12(), 0.0),
            "t4" => (beta12(), 0.8),
            _ => return None,
        };
        let mut cfg = if small {
            Self::new(400, 800, rho, effects)
        } else {
            Self::new(500, 3000, rho, effects)
        };
        if small {
            cfg.replicates = 30;
        }
        Some(cfg)
    }

    pub fn preset_names() -> [&'static str; 8] {
        [
            "t1", "t2", "t3", "t4", "t1-small", "t2-small", "t3-small", "t4-small",
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.p == 0 {
            return Err(Error::InvalidInput("scenario needs n >= 2 and p >= 1".into()));
        }
        if self.effects.len() > self.p {
            return Err(Error::InvalidInput(format!(
                "{} effects do not fit in p = {}",
                self.effects.len(),
                self.p
            )));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(Error::InvalidInput(format!("rho must be in [0, 1), got {}", self.rho)));
        }
        let (lo, hi) = self.maf_range;
        if !(0.0 < lo && lo <= hi && hi <= 0.5) {
            return Err(Error::InvalidInput("MAF range must lie in (0, 0.5]".into()));
        }
        if !(self.weibull_eta > 0.0 && self.weibull_kappa > 0.0) {
            return Err(Error::InvalidInput("Weibull parameters must be positive".into()));
        }
        Ok(())
    }

    /// Nonzero effects are spread evenly over the loci: effect `i` of `k`
    /// sits at `floor((2i + 1) p / (2k))`.
    pub fn signal_positions(&self) -> Vec<usize> {
        let k = self.effects.len();
        (0..k).map(|i| (2 * i + 1) * self.p / (2 * k)).collect()
    }

    pub fn beta_true(&self) -> Vec<f64> {
        let mut beta = vec![0.0; self.p];
        for (pos, b) in self.signal_positions().into_iter().zip(&self.effects) {
            beta[pos] = *b;
        }
        beta
    }
}

/// Generator for one replicate of a campaign.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Latent-normal cut points `Phi^-1((1-q)^2)` and `Phi^-1(1-q^2)`.
pub fn hwe_cutoffs(maf: f64) -> (f64, f64) {
    let std = Normal::standard();
    (
        std.inverse_cdf((1.0 - maf) * (1.0 - maf)),
        std.inverse_cdf(1.0 - maf * maf),
    )
}

/// Minor-allele count for a latent draw.
pub fn genotype(x: f64, cutoffs: (f64, f64)) -> f64 {
    if x > cutoffs.1 {
        2.0
    } else if x > cutoffs.0 {
        1.0
    } else {
        0.0
    }
}

/// `n x p` minor-allele counts (column-major) and the per-SNP MAFs.
pub fn gen_snps<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    rho: f64,
    maf_range: (f64, f64),
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let maf: Vec<f64> = (0..p)
        .map(|_| rng.random_range(maf_range.0..=maf_range.1))
        .collect();
    let cuts: Vec<(f64, f64)> = maf.iter().map(|q| hwe_cutoffs(*q)).collect();
    let mut z = vec![0.0; n * p];
    let mut latent = vec![0.0; p];
    for i in 0..n {
        ar1_latent(rho, rng, &mut latent);
        for (j, x) in latent.iter().enumerate() {
            z[j * n + i] = genotype(*x, cuts[j]);
        }
    }
    (z, maf)
}

/// Fills `out` with a stationary Gaussian AR(1) sequence with unit
/// variance and lag-one correlation `rho`.
pub fn ar1_latent<R: Rng + ?Sized>(rho: f64, rng: &mut R, out: &mut [f64]) {
    let innovation = (1.0 - rho * rho).sqrt();
    let mut x = 0.0;
    for (j, slot) in out.iter_mut().enumerate() {
        let e: f64 = rng.sample(StandardNormal);
        x = if j == 0 { e } else { rho * x + innovation * e };
        *slot = x;
    }
}

/// Inverse-CDF event time for cumulative hazard `(eta t)^kappa e^{lp}` at
/// uniform draw `u`.
pub fn event_time_from_uniform(lp: f64, u: f64, eta: f64, kappa: f64) -> f64 {
    (-u.ln() * (-lp).exp()).powf(1.0 / kappa) / eta
}

pub fn gen_event_time<R: Rng + ?Sized>(
    z: &[f64],
    beta: &[f64],
    eta: f64,
    kappa: f64,
    rng: &mut R,
) -> f64 {
    let lp: f64 = z.iter().zip(beta).map(|(a, b)| a * b).sum();
    let u: f64 = rng.random();
    // random() is on [0, 1); avoid log(0).
    event_time_from_uniform(lp, 1.0 - u, eta, kappa)
}

/// `V_t = V_{t-1} + U(0.1, (2 + t) / 10)`, `V_0 = 0`.
pub fn gen_inspections<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    let mut v = 0.0;
    (1..=count)
        .map(|t| {
            let hi = (2.0 + t as f64) / 10.0;
            let gap = loop {
                let g = rng.random_range(0.1..hi);
                if g > 0.1 {
                    break g;
                }
            };
            v += gap;
            v
        })
        .collect()
}

/// Bracketing inspection interval `(L, R]` for an event at `t`.
pub fn censor(t: f64, inspections: &[f64]) -> (f64, f64) {
    let k = inspections.partition_point(|v| *v < t);
    let left = if k == 0 { 0.0 } else { inspections[k - 1] };
    let right = inspections.get(k).copied().unwrap_or(f64::INFINITY);
    (left, right)
}

#[derive(Debug, Clone)]
pub struct SimulatedData {
    /// Raw minor-allele counts, not standardized.
    pub dataset: Dataset,
    pub beta_true: Vec<f64>,
    pub maf: Vec<f64>,
    pub event_times: Vec<f64>,
}

pub fn simulate_replicate(config: &ScenarioConfig, replicate: u64) -> Result<SimulatedData> {
    config.validate()?;
    let mut rng = replicate_rng(config.seed, replicate);
    let (n, p) = (config.n, config.p);
    let (z, maf) = gen_snps(n, p, config.rho, config.maf_range, &mut rng);
    let beta = config.beta_true();
    let signals = config.signal_positions();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let mut times = Vec::with_capacity(n);
    for i in 0..n {
        let lp: f64 = signals.iter().map(|&j| beta[j] * z[j * n + i]).sum();
        let u: f64 = rng.random();
        let t = event_time_from_uniform(lp, 1.0 - u, config.weibull_eta, config.weibull_kappa);
        let insp = gen_inspections(config.num_inspections, &mut rng);
        let (l, r) = censor(t, &insp);
        left.push(l);
        right.push(r);
        times.push(t);
    }
    let names = (1..=p).map(|j| format!("snp{j}")).collect();
    let dataset = Dataset::from_columns(left, right, None, z)?.with_names(names)?;
    Ok(SimulatedData {
        dataset,
        beta_true: beta,
        maf,
        event_times: times,
    })
}

/// One row of a right-censored export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidpointRecord {
    pub time: f64,
    pub event: bool,
}

/// Interval-censored subjects get the midpoint of `(L, R]` as an event
/// time; right-censored subjects are censored at `L`.
pub fn midpoint_impute(data: &Dataset) -> Vec<MidpointRecord> {
    data.left()
        .iter()
        .zip(data.right())
        .map(|(&l, &r)| {
            if r.is_finite() {
                MidpointRecord {
                    time: 0.5 * (l + r),
                    event: true,
                }
            } else {
                MidpointRecord {
                    time: l,
                    event: false,
                }
            }
        })
        .collect()
}

/// Fills missing (NaN) minor-allele counts by sampling
/// `Binomial(2, MAF_hat)` with the MAF estimated from observed entries.
/// Returns the estimated MAF.
pub fn impute_missing_genotypes<R: Rng + ?Sized>(column: &mut [f64], rng: &mut R) -> Result<f64> {
    let observed: Vec<f64> = column.iter().copied().filter(|v| !v.is_nan()).collect();
    if observed.is_empty() {
        return Err(Error::InvalidInput("genotype column has no observed values".into()));
    }
    let maf = (observed.iter().sum::<f64>() / (2.0 * observed.len() as f64)).clamp(0.0, 1.0);
    let bin = Binomial::new(2, maf).map_err(|e| Error::InvalidInput(e.to_string()))?;
    for v in column.iter_mut().filter(|v| v.is_nan()) {
        *v = bin.sample(rng) as f64;
    }
    Ok(maf)
}
