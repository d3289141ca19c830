//! Solution paths over a geometric threshold grid, scored by the
//! generalized information criterion.

use crate::data::Dataset;
use crate::em::{Engine, FitOptions, FitOutcome};
use crate::error::{Error, Result};
use crate::likelihood::{loglik_for, ModelState};
use crate::penalty::{theta_max, AdaptiveLasso, Lasso, Penalty, PenaltySpec};
use crate::support::SupportSet;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const GRID_SIZE: usize = 101;

/// `theta_r = theta_max * ratio^((r - 1) / (size - 1))`, `r = 1..size`.
pub fn theta_grid(theta_max: f64, ratio: f64, size: usize) -> Vec<f64> {
    if size == 1 {
        return vec![theta_max];
    }
    let last = (size - 1) as f64;
    (0..size)
        .map(|r| match r {
            0 => theta_max,
            r if r == size - 1 => theta_max * ratio,
            r => theta_max * ratio.powf(r as f64 / last),
        })
        .collect()
}

/// `-2 l_n + log(log n) log(p) df`, with `l_n` the summed log likelihood.
pub fn gic(loglik: f64, df: usize, n: usize, p: usize) -> Result<f64> {
    let nf = n as f64;
    if !(nf.ln() > 1.0) {
        return Err(Error::InvalidInput(format!(
            "GIC needs log(log n) > 0, got n = {n}"
        )));
    }
    if p < 2 {
        return Err(Error::InvalidInput(format!("GIC needs p >= 2, got {p}")));
    }
    Ok(-2.0 * loglik + nf.ln().ln() * (p as f64).ln() * df as f64)
}

/// Index of the smallest GIC among eligible fits; ties go to the larger
/// threshold (earlier index). Falls back to all fits when none is eligible.
pub fn select_by_gic(gic: &[f64], eligible: &[bool]) -> usize {
    let pick = |use_mask: bool| {
        let mut best: Option<usize> = None;
        for (r, g) in gic.iter().enumerate() {
            if use_mask && !eligible[r] || g.is_nan() {
                continue;
            }
            if best.map_or(true, |b| *g < gic[b]) {
                best = Some(r);
            }
        }
        best
    };
    pick(true).or_else(|| pick(false)).unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathOptions {
    pub grid_size: usize,
    /// Overrides the family's `theta_min / theta_max`.
    pub ratio: Option<f64>,
    pub fit: FitOptions,
    pub truncation: bool,
}

impl Default for PathOptions {
    fn default() -> Self {
        Self {
            grid_size: GRID_SIZE,
            ratio: None,
            fit: FitOptions::default(),
            truncation: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub family: String,
    pub theta_max: f64,
    pub thetas: Vec<f64>,
    pub states: Vec<ModelState>,
    pub loglik: Vec<f64>,
    pub gic: Vec<f64>,
    /// Nonzero penalized coefficients per fit.
    pub df: Vec<usize>,
    pub iterations: Vec<usize>,
    pub converged: Vec<bool>,
    /// Iterations whose penalized objective decreased, per fit.
    pub ascent_violations: Vec<usize>,
    pub selected: usize,
    pub warnings: Vec<String>,
}

impl PathResult {
    pub fn selected_state(&self) -> &ModelState {
        &self.states[self.selected]
    }

    pub fn selected_theta(&self) -> f64 {
        self.thetas[self.selected]
    }

    pub fn reselect(&self) -> usize {
        select_by_gic(&self.gic, &self.converged)
    }

    /// Fraction of adjacent grid pairs where df does not shrink as the
    /// threshold decreases.
    pub fn df_monotone_fraction(&self) -> f64 {
        if self.df.len() < 2 {
            return 1.0;
        }
        let ok = self.df.windows(2).filter(|w| w[1] >= w[0]).count();
        ok as f64 / (self.df.len() - 1) as f64
    }
}

fn penalized_df(beta: &[f64], data: &Dataset) -> usize {
    beta.iter()
        .enumerate()
        .filter(|(j, b)| **b != 0.0 && data.is_penalized(*j))
        .count()
}

pub const NULL_TOL: f64 = 1e-5;
pub const NULL_MAX_ITER: usize = 10_000;

/// Fit with every penalized coefficient held at zero: the baseline jumps
/// and any unpenalized coefficients, by EM from the cold start. It does not
/// depend on the penalty family, so one null fit can seed several paths.
pub fn null_fit(engine: &Engine<'_>) -> Result<FitOutcome> {
    let data = engine.data();
    let init = ModelState::cold_start(data.p(), data.n(), engine.support().clone());
    let options = FitOptions {
        tol: NULL_TOL,
        max_iter: NULL_MAX_ITER,
    };
    let spec = PenaltySpec::new(Arc::new(Lasso), f64::INFINITY);
    engine.fit_fixed_theta(&spec, init, &options)
}

/// Scores and curvatures of the surrogate at `state`.
pub fn scores_at(engine: &Engine<'_>, state: &ModelState) -> Result<(Vec<f64>, Vec<f64>)> {
    let cache = engine.estep(state)?;
    let quad = engine.surrogate(&state.beta, &cache);
    let v = engine.curvatures(&quad);
    let y = engine.scores(&state.beta, &quad, &v);
    Ok((y, v))
}

/// Fits the warm-started path for one penalty family and picks the GIC
/// minimizer.
pub fn run_path(
    data: &Dataset,
    support: &SupportSet,
    penalty: Arc<dyn Penalty>,
    weights: Option<Vec<f64>>,
    options: &PathOptions,
) -> Result<PathResult> {
    let engine = Engine::new(data, support, options.truncation)?;
    let null = null_fit(&engine)?;
    run_path_from(&engine, &null, penalty, weights, options)
}

/// [`run_path`] with a precomputed [`null_fit`]. The engine's truncation
/// setting takes precedence over `options.truncation`.
pub fn run_path_from(
    engine: &Engine<'_>,
    null: &FitOutcome,
    penalty: Arc<dyn Penalty>,
    weights: Option<Vec<f64>>,
    options: &PathOptions,
) -> Result<PathResult> {
    let data = engine.data();
    let mut base = PenaltySpec::new(penalty, 0.0);
    if let Some(w) = weights {
        base = base.with_weights(w);
    }
    base.validate(data.p())?;
    let multipliers: Vec<f64> = (0..data.p())
        .map(|j| {
            if data.constant_columns()[j] {
                0.0
            } else {
                base.multiplier(j, data.penalty_factors()[j])
            }
        })
        .collect();

    let mut warnings = Vec::new();
    if !null.converged {
        warnings.push("baseline of the null model did not converge".into());
    }
    let penalized_free = multipliers.iter().any(|m| *m > 0.0 && m.is_finite());
    let tmax = if penalized_free {
        let (y, v) = scores_at(engine, &null.state)?;
        theta_max(base.penalty.as_ref(), &y, &v, &multipliers)?
    } else {
        warnings.push(format!(
            "{}: every penalized coefficient is pinned at zero; path is the empty model",
            base.penalty.name()
        ));
        1.0
    };
    let ratio = options.ratio.unwrap_or_else(|| base.penalty.path_ratio());
    let thetas = theta_grid(tmax, ratio, options.grid_size);

    let size = thetas.len();
    let mut out = PathResult {
        family: base.penalty.name().to_string(),
        theta_max: tmax,
        thetas: thetas.clone(),
        states: Vec::with_capacity(size),
        loglik: Vec::with_capacity(size),
        gic: Vec::with_capacity(size),
        df: Vec::with_capacity(size),
        iterations: Vec::with_capacity(size),
        converged: Vec::with_capacity(size),
        ascent_violations: Vec::with_capacity(size),
        selected: 0,
        warnings,
    };
    let push = |out: &mut PathResult, fit: &FitOutcome| -> Result<()> {
        let ll = loglik_for(&fit.state, data, engine.truncation())?;
        let df = penalized_df(&fit.state.beta, data);
        out.gic.push(gic(ll, df, data.n(), data.p())?);
        out.loglik.push(ll);
        out.df.push(df);
        out.iterations.push(fit.iterations);
        out.converged.push(fit.converged);
        out.ascent_violations.push(fit.ascent_violations());
        out.states.push(fit.state.clone());
        Ok(())
    };
    // At theta_max the penalized coefficients are zero, so the first grid
    // point is the null fit itself.
    push(&mut out, null)?;
    let mut state = null.state.clone();
    for (r, theta) in thetas.iter().enumerate().skip(1) {
        let spec = base.with_theta(*theta);
        let fit = engine.fit_fixed_theta(&spec, state, &options.fit)?;
        if fit.clamped > 0 {
            log::debug!("theta index {r}: {} linear predictors clamped", fit.clamped);
        }
        push(&mut out, &fit)?;
        state = fit.state;
    }
    if out.df[0] != 0 {
        out.warnings
            .push(format!("{} coefficients active at theta_max", out.df[0]));
    }
    if !out.converged.iter().any(|c| *c) {
        out.warnings
            .push("no grid point converged; selecting among all fits".into());
    }
    out.selected = out.reselect();
    Ok(out)
}

/// Lasso path, then an adaptive-lasso path weighted by the GIC-selected
/// lasso coefficients. Returns `(lasso, adaptive)`.
pub fn adaptive_lasso_pipeline(
    data: &Dataset,
    support: &SupportSet,
    options: &PathOptions,
) -> Result<(PathResult, PathResult)> {
    let engine = Engine::new(data, support, options.truncation)?;
    let null = null_fit(&engine)?;
    adaptive_lasso_pipeline_from(&engine, &null, options)
}

pub fn adaptive_lasso_pipeline_from(
    engine: &Engine<'_>,
    null: &FitOutcome,
    options: &PathOptions,
) -> Result<(PathResult, PathResult)> {
    let lasso = run_path_from(engine, null, Arc::new(Lasso), None, options)?;
    let weights: Vec<f64> = lasso.selected_state().beta.iter().map(|b| b.abs()).collect();
    let mut adaptive =
        run_path_from(engine, null, Arc::new(AdaptiveLasso), Some(weights), options)?;
    if lasso.df[lasso.selected] == 0 {
        adaptive
            .warnings
            .push("lasso selected the empty model; adaptive lasso is degenerate".into());
    }
    Ok((lasso, adaptive))
}
