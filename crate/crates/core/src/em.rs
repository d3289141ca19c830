//! Penalized EM for the Cox model with interval-censored data.
//!
//! Each subject's hazard mass on support point `k` is modelled as a latent
//! Poisson count `W_ik` with mean `lambda_k exp(beta' Z_i)`. Observing
//! `A_i = 0` (no event before `L_i`) and `B_i > 0` (an event in `(L_i, R_i]`)
//! reproduces the observed-data likelihood, so:
//!
//! * the E-step is a zero-truncated Poisson mean over the bracketing points;
//! * the jump sizes have a closed-form update given `beta`;
//! * plugging that update back in leaves a Cox partial-likelihood-shaped
//!   function `Q(eta)` of the linear predictor, which is replaced by a
//!   diagonal quadratic and minimized with one coordinate-descent cycle.
//!
//! The n-by-m expectation and risk structures are stored sparsely: a
//! subject is at risk on a contiguous range of support indices, and its
//! nonzero expectations sit on a contiguous sub-range of that.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::likelihood::{exp_linear_predictor, loglik_for, ModelState};
use crate::penalty::PenaltySpec;
use crate::support::SupportSet;
use serde::{Deserialize, Serialize};

/// Floor applied to the diagonal surrogate weights.
pub const WEIGHT_FLOOR: f64 = 1e-8;
/// Coordinates whose weighted second moment falls below this are skipped.
pub const CURVATURE_FLOOR: f64 = 1e-10;

/// Per-subject index ranges into the support set.
///
/// Subject `i` is at risk at support points `risk_lo[i]..risk_hi[i]`, i.e.
/// `V_i0 < u_k <= R_i*` with `R_i* = L_i` for right-censored subjects. Its
/// bracketing points `L_i < u_k <= R_i` are `bracket_lo[i]..risk_hi[i]` when
/// `R_i` is finite and empty otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskStructure {
    m: usize,
    risk_lo: Vec<usize>,
    risk_hi: Vec<usize>,
    bracket_lo: Vec<usize>,
    finite: Vec<bool>,
}

impl RiskStructure {
    pub fn new(data: &Dataset, support: &SupportSet, truncation: bool) -> Self {
        let n = data.n();
        let mut risk_lo = vec![0; n];
        let mut risk_hi = vec![0; n];
        let mut bracket_lo = vec![0; n];
        let mut finite = vec![false; n];
        for i in 0..n {
            let (l, r) = (data.left()[i], data.right()[i]);
            let at_l = support.count_at_or_below(l);
            finite[i] = r.is_finite();
            risk_hi[i] = if finite[i] {
                support.count_at_or_below(r)
            } else {
                at_l
            };
            bracket_lo[i] = if finite[i] { at_l } else { risk_hi[i] };
            if truncation {
                risk_lo[i] = support.count_at_or_below(data.truncation()[i]).min(risk_hi[i]);
            }
        }
        Self {
            m: support.len(),
            risk_lo,
            risk_hi,
            bracket_lo,
            finite,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.risk_hi.len()
    }

    pub fn risk_range(&self, i: usize) -> std::ops::Range<usize> {
        self.risk_lo[i]..self.risk_hi[i]
    }

    pub fn bracket_range(&self, i: usize) -> std::ops::Range<usize> {
        self.bracket_lo[i]..self.risk_hi[i]
    }

    fn truncated(&self) -> bool {
        self.risk_lo.iter().any(|lo| *lo > 0)
    }

    /// `S_k = sum_i I(k in risk_i) x_i` for nonnegative `x`.
    fn risk_sums(&self, x: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut by_hi = vec![0.0; m + 1];
        for (i, xi) in x.iter().enumerate() {
            by_hi[self.risk_hi[i]] += xi;
        }
        let mut s = vec![0.0; m];
        let mut acc = 0.0;
        for k in (0..m).rev() {
            acc += by_hi[k + 1];
            s[k] = acc;
        }
        if self.truncated() {
            // Subjects entering after u_k are removed; counts decide exact zeros.
            let mut by_lo = vec![0.0; m + 1];
            let mut cnt = vec![0i64; m + 1];
            for (i, xi) in x.iter().enumerate() {
                by_lo[self.risk_lo[i]] += xi;
                cnt[self.risk_lo[i]] -= 1;
                cnt[self.risk_hi[i]] += 1;
            }
            let mut late = 0.0;
            let mut at_risk = 0i64;
            for k in (0..m).rev() {
                late += by_lo[k + 1];
                at_risk += cnt[k + 1];
                s[k] = if at_risk == 0 {
                    0.0
                } else {
                    (s[k] - late).max(0.0)
                };
            }
        }
        s
    }
}

/// Conditional expectations of the latent Poisson counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EStepCache {
    /// CSR offsets: subject `i`'s expectations are
    /// `values[offsets[i]..offsets[i + 1]]`, aligned with its bracket range.
    offsets: Vec<usize>,
    values: Vec<f64>,
}

impl EStepCache {
    /// `E(W_ik)` for subject `i`, support index `k` (zero outside the
    /// bracket).
    pub fn expectation(&self, risk: &RiskStructure, i: usize, k: usize) -> f64 {
        let br = risk.bracket_range(i);
        if br.contains(&k) {
            self.values[self.offsets[i] + (k - br.start)]
        } else {
            0.0
        }
    }

    pub fn subject_values(&self, i: usize) -> &[f64] {
        &self.values[self.offsets[i]..self.offsets[i + 1]]
    }

    /// `sum_k E(W_ik)` per subject.
    pub fn subject_totals(&self) -> Vec<f64> {
        (0..self.offsets.len() - 1)
            .map(|i| self.subject_values(i).iter().sum())
            .collect()
    }

    /// `D_k = sum_i E(W_ik)` per support point.
    pub fn point_totals(&self, risk: &RiskStructure) -> Vec<f64> {
        let mut d = vec![0.0; risk.m];
        for i in 0..risk.n() {
            for (k, v) in risk.bracket_range(i).zip(self.subject_values(i)) {
                d[k] += v;
            }
        }
        d
    }
}

/// Diagonal quadratic approximation of `-Q(eta)` around the current
/// linear predictor.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateQuad {
    pub eta: Vec<f64>,
    /// `Q'(eta)`.
    pub gradient: Vec<f64>,
    /// Diagonal of `-Q''(eta)`, floored at [`WEIGHT_FLOOR`].
    pub weight: Vec<f64>,
    /// `e = eta + Q'(eta) / w`.
    pub working_response: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Stop when the relative change of `(beta, lambda)` drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tol: 0.01,
            max_iter: 101,
        }
    }
}

/// Result of the EM at one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    pub state: ModelState,
    pub iterations: usize,
    pub converged: bool,
    /// Penalized objective `l_n / n - sum_j p(|beta_j|)` after each iteration.
    pub objective: Vec<f64>,
    /// Linear predictors clamped before exponentiation, summed over
    /// iterations.
    pub clamped: usize,
}

impl FitOutcome {
    /// Iterations where the penalized objective went down.
    pub fn ascent_violations(&self) -> usize {
        self.objective
            .windows(2)
            .filter(|w| w[1] < w[0] - 1e-12 * w[0].abs().max(1.0))
            .count()
    }
}

/// `||x_new - x_old||_2 / (||x_old||_2 + 1)` over concatenated
/// `(beta, lambda)`.
pub fn relative_distance(old: &ModelState, new: &ModelState) -> f64 {
    let pairs = old
        .beta
        .iter()
        .zip(&new.beta)
        .chain(old.lambda.iter().zip(&new.lambda));
    let (mut diff, mut norm) = (0.0, 0.0);
    for (a, b) in pairs {
        diff += (b - a) * (b - a);
        norm += a * a;
    }
    diff.sqrt() / (norm.sqrt() + 1.0)
}

/// EM machinery bound to one dataset and support set.
#[derive(Debug, Clone)]
pub struct Engine<'a> {
    data: &'a Dataset,
    support: &'a SupportSet,
    risk: RiskStructure,
    truncation: bool,
}

impl<'a> Engine<'a> {
    /// Truncation is ignored when every entry time is zero.
    pub fn new(data: &'a Dataset, support: &'a SupportSet, truncation: bool) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        let truncation = truncation && data.has_truncation();
        Ok(Self {
            data,
            support,
            risk: RiskStructure::new(data, support, truncation),
            truncation,
        })
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    pub fn support(&self) -> &SupportSet {
        self.support
    }

    pub fn risk(&self) -> &RiskStructure {
        &self.risk
    }

    pub fn truncation(&self) -> bool {
        self.truncation
    }

    fn check_state(&self, state: &ModelState) -> Result<()> {
        if state.beta.len() != self.data.p() {
            return Err(Error::DimensionMismatch {
                what: "coefficients",
                expected: self.data.p(),
                got: state.beta.len(),
            });
        }
        if state.lambda.len() != self.support.len() {
            return Err(Error::DimensionMismatch {
                what: "jump sizes",
                expected: self.support.len(),
                got: state.lambda.len(),
            });
        }
        if state.lambda.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(Error::InvalidInput(
                "jump sizes must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Expected latent counts given the current `(beta, lambda)`:
    /// `E(W_ik) = lambda_k e^{eta_i} / (1 - exp(-B_i))` on the bracket of an
    /// interval-censored subject, zero elsewhere.
    pub fn estep(&self, state: &ModelState) -> Result<EStepCache> {
        self.check_state(state)?;
        let eta = self.data.linear_predictor(&state.beta);
        let (risk, _) = exp_linear_predictor(&eta);
        self.estep_with(&state.lambda, &risk)
    }

    fn estep_with(&self, lambda: &[f64], exp_eta: &[f64]) -> Result<EStepCache> {
        let n = self.data.n();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut values = Vec::new();
        offsets.push(0);
        for (i, &r) in exp_eta.iter().enumerate() {
            if self.risk.finite[i] {
                let br = self.risk.bracket_range(i);
                let mass: f64 = lambda[br.clone()].iter().sum::<f64>() * r;
                let denom = -(-mass).exp_m1();
                if !(mass > 0.0 && denom > 0.0) {
                    return Err(Error::ZeroBracketMass { subject: i });
                }
                values.extend(lambda[br].iter().map(|l| l * r / denom));
            }
            offsets.push(values.len());
        }
        Ok(EStepCache { offsets, values })
    }

    /// Closed-form jump sizes
    /// `lambda_k = sum_i E(W_ik) / sum_i I(k in risk_i) e^{beta' Z_i}`.
    pub fn mstep_lambda(&self, beta: &[f64], cache: &EStepCache) -> Result<Vec<f64>> {
        let eta = self.data.linear_predictor(beta);
        let (risk, _) = exp_linear_predictor(&eta);
        self.mstep_with(&risk, cache)
    }

    fn mstep_with(&self, exp_eta: &[f64], cache: &EStepCache) -> Result<Vec<f64>> {
        let s = self.risk.risk_sums(exp_eta);
        let d = cache.point_totals(&self.risk);
        d.iter()
            .zip(&s)
            .enumerate()
            .map(|(k, (dk, sk))| {
                if *sk > 0.0 {
                    Ok(dk / sk)
                } else if *dk == 0.0 && self.risk.truncated() {
                    // Nobody at risk at an entry-time support point.
                    Ok(0.0)
                } else {
                    Err(Error::ZeroRiskSet { index: k })
                }
            })
            .collect()
    }

    /// Profile expected complete-data log likelihood
    /// `Q(eta) = sum_i E_i eta_i - sum_k D_k log S_k(eta)`.
    pub fn profile_objective(&self, eta: &[f64], cache: &EStepCache) -> f64 {
        let (risk, _) = exp_linear_predictor(eta);
        let s = self.risk.risk_sums(&risk);
        let d = cache.point_totals(&self.risk);
        let e = cache.subject_totals();
        let lin: f64 = e.iter().zip(eta).map(|(a, b)| a * b).sum();
        let norm: f64 = d
            .iter()
            .zip(&s)
            .filter(|(dk, _)| **dk > 0.0)
            .map(|(dk, sk)| dk * sk.ln())
            .sum();
        lin - norm
    }

    /// Gradient and diagonal curvature of `Q` at `eta`, and the working
    /// response for the weighted least-squares step.
    pub fn surrogate(&self, beta: &[f64], cache: &EStepCache) -> SurrogateQuad {
        let eta = self.data.linear_predictor(beta);
        self.surrogate_at(eta, cache)
    }

    pub fn surrogate_at(&self, eta: Vec<f64>, cache: &EStepCache) -> SurrogateQuad {
        let (risk, _) = exp_linear_predictor(&eta);
        let m = self.risk.m;
        let s = self.risk.risk_sums(&risk);
        let d = cache.point_totals(&self.risk);
        // Prefix sums of D_k / S_k and D_k / S_k^2.
        let mut first = vec![0.0; m + 1];
        let mut second = vec![0.0; m + 1];
        for k in 0..m {
            let (a, b) = if s[k] > 0.0 && d[k] > 0.0 {
                (d[k] / s[k], d[k] / (s[k] * s[k]))
            } else {
                (0.0, 0.0)
            };
            first[k + 1] = first[k] + a;
            second[k + 1] = second[k] + b;
        }
        let totals = cache.subject_totals();
        let n = eta.len();
        let mut gradient = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        let mut working_response = Vec::with_capacity(n);
        for i in 0..n {
            let (lo, hi) = (self.risk.risk_lo[i], self.risk.risk_hi[i]);
            let g1 = first[hi] - first[lo];
            let g2 = second[hi] - second[lo];
            let r = risk[i];
            let grad = totals[i] - r * g1;
            let w = (r * g1 - r * r * g2).max(WEIGHT_FLOOR);
            gradient.push(grad);
            weight.push(w);
            working_response.push(eta[i] + grad / w);
        }
        SurrogateQuad {
            eta,
            gradient,
            weight,
            working_response,
        }
    }

    /// Weighted second moments `v_j = (1/n) sum_i w_i z_ij^2`.
    pub fn curvatures(&self, quad: &SurrogateQuad) -> Vec<f64> {
        let nf = self.data.n() as f64;
        (0..self.data.p())
            .map(|j| {
                self.data
                    .column(j)
                    .iter()
                    .zip(&quad.weight)
                    .map(|(z, w)| w * z * z)
                    .sum::<f64>()
                    / nf
            })
            .collect()
    }

    /// Coordinate scores `y_j` at the surrogate's own `beta`, i.e. with
    /// nothing yet updated in the cycle.
    pub fn scores(&self, beta: &[f64], quad: &SurrogateQuad, v: &[f64]) -> Vec<f64> {
        let nf = self.data.n() as f64;
        let resid: Vec<f64> = quad
            .working_response
            .iter()
            .zip(&quad.eta)
            .map(|(e, h)| e - h)
            .collect();
        (0..self.data.p())
            .map(|j| {
                let zr: f64 = self
                    .data
                    .column(j)
                    .iter()
                    .zip(quad.weight.iter().zip(&resid))
                    .map(|(z, (w, r))| z * w * r)
                    .sum();
                zr / nf + v[j] * beta[j]
            })
            .collect()
    }

    /// One cycle of coordinate descent over `j = 1..p` on the penalized
    /// weighted least-squares surrogate. Unpenalized coordinates are solved
    /// with threshold 0; constant columns stay at 0.
    pub fn coordinate_descent_pass(
        &self,
        quad: &SurrogateQuad,
        beta: &[f64],
        spec: &PenaltySpec,
    ) -> Vec<f64> {
        let data = self.data;
        let nf = data.n() as f64;
        let mut beta = beta.to_vec();
        let mut resid: Vec<f64> = quad
            .working_response
            .iter()
            .zip(&quad.eta)
            .map(|(e, h)| e - h)
            .collect();
        let w = &quad.weight;
        for j in 0..data.p() {
            let col = data.column(j);
            let old = beta[j];
            let theta = spec.coordinate_theta(j, data.penalty_factors()[j]);
            let new = if data.constant_columns()[j] || theta == f64::INFINITY {
                0.0
            } else {
                let v: f64 = col.iter().zip(w).map(|(z, w)| w * z * z).sum::<f64>() / nf;
                if v < CURVATURE_FLOOR {
                    continue;
                }
                let zr: f64 = col
                    .iter()
                    .zip(w.iter().zip(&resid))
                    .map(|(z, (w, r))| z * w * r)
                    .sum();
                let y = zr / nf + v * old;
                spec.penalty.solve(y, v, theta)
            };
            if new != old {
                let delta = new - old;
                for (r, z) in resid.iter_mut().zip(col) {
                    *r -= z * delta;
                }
                beta[j] = new;
            }
        }
        beta
    }

    /// Penalized objective `l_n / n - sum_j p(|beta_j|)`.
    pub fn penalized_objective(&self, state: &ModelState, spec: &PenaltySpec) -> Result<f64> {
        let ll = loglik_for(state, self.data, self.truncation)?;
        Ok(ll / self.data.n() as f64 - spec.total(&state.beta, self.data.penalty_factors()))
    }

    /// EM at a fixed threshold: E-step, one coordinate-descent cycle on the
    /// surrogate, then the jump-size update at the new coefficients, until
    /// the relative change is below `options.tol` or `options.max_iter`
    /// iterations have run.
    pub fn fit_fixed_theta(
        &self,
        spec: &PenaltySpec,
        init: ModelState,
        options: &FitOptions,
    ) -> Result<FitOutcome> {
        self.check_state(&init)?;
        spec.validate(self.data.p())?;
        let mut state = init;
        let mut objective = Vec::new();
        let mut clamped = 0;
        let mut converged = false;
        let mut iterations = 0;
        while iterations < options.max_iter {
            iterations += 1;
            let mut step = || -> Result<ModelState> {
                let eta = self.data.linear_predictor(&state.beta);
                let (risk, c) = exp_linear_predictor(&eta);
                clamped += c;
                let cache = self.estep_with(&state.lambda, &risk)?;
                let quad = self.surrogate_at(eta, &cache);
                let beta = self.coordinate_descent_pass(&quad, &state.beta, spec);
                let lambda = self.mstep_lambda(&beta, &cache)?;
                ModelState::new(beta, lambda, state.support.clone())
            };
            let next = step().map_err(|e| e.at_iteration(iterations))?;
            let dist = relative_distance(&state, &next);
            state = next;
            objective.push(
                self.penalized_objective(&state, spec)
                    .map_err(|e| e.at_iteration(iterations))?,
            );
            if dist < options.tol {
                converged = true;
                break;
            }
        }
        Ok(FitOutcome {
            state,
            iterations,
            converged,
            objective,
            clamped,
        })
    }
}
