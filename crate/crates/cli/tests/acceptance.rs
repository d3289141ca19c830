//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use icpen_cli::fit::path_options;
use icpen_cli::simulate::{run_campaign, CampaignConfig};
use icpen_core::em::Engine;
use icpen_core::path::{null_fit, run_path_from, theta_grid};
use icpen_core::penalty::{Penalty, PenaltyRegistry, PenaltySpec};
use icpen_core::{
    loglik, loglik_truncated, maximal_intersections, simulate_replicate, Dataset,
    ModelState, PathOptions, ScenarioConfig, SupportSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dataset(left: Vec<f64>, right: Vec<f64>, trunc: Option<Vec<f64>>, z: Vec<f64>) -> Dataset {
    Dataset::from_columns(left, right, trunc, z).expect("dataset")
}

/// Intervals on a coarse grid so that endpoints tie often.
fn random_intervals(r: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for _ in 0..n {
        let l = r.random_range(0..12) as f64 * 0.5;
        let rr = if r.random_bool(0.2) {
            f64::INFINITY
        } else {
            l + r.random_range(1..6) as f64 * 0.5
        };
        left.push(l);
        right.push(rr);
    }
    (left, right)
}

// ---------------------------------------------------------------- 1a

/// Elementary cells between consecutive distinct endpoints, keeping those
/// whose set of covering subjects is not strictly contained in another
/// cell's set, and whose right end is finite.
fn support_by_cell_signatures(left: &[f64], right: &[f64]) -> Vec<(f64, f64)> {
    let mut pts: Vec<f64> = left
        .iter()
        .chain(right.iter().filter(|r| r.is_finite()))
        .copied()
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.push(f64::INFINITY);
    let cells: Vec<(f64, f64, BTreeSet<usize>)> = pts
        .windows(2)
        .map(|w| {
            let sig = (0..left.len())
                .filter(|&i| left[i] <= w[0] && w[1] <= right[i])
                .collect();
            (w[0], w[1], sig)
        })
        .collect();
    cells
        .iter()
        .filter(|(_, b, sig)| {
            b.is_finite()
                && !sig.is_empty()
                && !cells
                    .iter()
                    .any(|(_, _, other)| other.len() > sig.len() && sig.is_subset(other))
        })
        .map(|(a, b, _)| (*a, *b))
        .collect()
}

fn c1a() -> Verdict {
    let mut r = rng(101);
    let mut mismatches = 0;
    let mut total_intervals = 0;
    for _ in 0..500 {
        let n = r.random_range(1..=30);
        let (left, right) = random_intervals(&mut r, n);
        let expect = support_by_cell_signatures(&left, &right);
        let d = dataset(left, right, None, vec![0.0; n]);
        let got: Vec<(f64, f64)> = maximal_intersections(&d)
            .intervals()
            .iter()
            .map(|iv| (iv.lower, iv.upper))
            .collect();
        total_intervals += got.len();
        if got != expect {
            mismatches += 1;
        }
    }
    verdict(
        mismatches == 0,
        format!("500 datasets, {total_intervals} intervals, {mismatches} mismatches"),
    )
}

// ---------------------------------------------------------------- 1b

fn pen_value(family: &str, b: f64, theta: f64, a: f64) -> f64 {
    let b = b.abs();
    match family {
        "lasso" | "adaptive_lasso" => theta * b,
        "scad" => {
            if b <= theta {
                theta * b
            } else if b <= a * theta {
                (2.0 * a * theta * b - b * b - theta * theta) / (2.0 * (a - 1.0))
            } else {
                theta * theta * (a + 1.0) / 2.0
            }
        }
        "mcp" => {
            if b <= a * theta {
                theta * b - b * b / (2.0 * a)
            } else {
                a * theta * theta / 2.0
            }
        }
        _ => unreachable!(),
    }
}

fn c1b() -> Verdict {
    let reg = PenaltyRegistry::builtin();
    let mut r = rng(202);
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut failures = 0;
    const GRID: usize = 100_001;
    for family in ["lasso", "adaptive_lasso", "scad", "mcp"] {
        for _ in 0..1000 {
            let y = r.random_range(-3.0..3.0);
            let v = r.random_range(0.05..3.0);
            let theta = r.random_range(0.01..2.0);
            let (pen, a): (std::sync::Arc<dyn Penalty>, f64) = match family {
                "scad" => {
                    let a = r.random_range(2.05..5.0);
                    (reg.create("scad", Some(a)).unwrap(), a)
                }
                "mcp" => {
                    let a = r.random_range(1.05..5.0);
                    (reg.create("mcp", Some(a)).unwrap(), a)
                }
                f => (reg.create(f, None).unwrap(), 0.0),
            };
            let eff = if family == "adaptive_lasso" {
                let w = r.random_range(0.1..2.0);
                PenaltySpec::new(pen.clone(), theta)
                    .with_weights(vec![w])
                    .coordinate_theta(0, 1.0)
            } else {
                theta
            };
            let obj = |b: f64| 0.5 * v * b * b - y * b + pen_value(family, b, eff, a);
            let b_hat = pen.solve(y, v, eff);
            let reach = 1.2 * (y.abs() / v).max(a * eff) + 0.1;
            let step = 2.0 * reach / (GRID - 1) as f64;
            let grid_min = (0..GRID)
                .map(|k| obj(-reach + k as f64 * step))
                .fold(obj(0.0), f64::min);
            let slack = obj(b_hat) - grid_min;
            worst = worst.max(slack);
            if slack > 1e-9 {
                failures += 1;
            }
        }
    }
    verdict(
        failures == 0,
        format!("4000 tuples, worst excess over grid minimum {worst:.3e}, {failures} above 1e-9"),
    )
}

// ---------------------------------------------------------------- 1c

fn hazard_at(support: &SupportSet, lambda: &[f64], t: f64) -> f64 {
    support
        .intervals()
        .iter()
        .zip(lambda)
        .filter(|(iv, _)| iv.upper <= t)
        .map(|(_, l)| l)
        .sum()
}

/// Survival-difference form: `sum_i log(S(L_i) - S(R_i))`, divided by
/// `S(V_i)` under truncation, with `S(inf) = 0`.
fn loglik_survival_form(state: &ModelState, d: &Dataset, truncated: bool) -> f64 {
    let eta = d.linear_predictor(&state.beta);
    (0..d.n())
        .map(|i| {
            let surv = |t: f64| {
                if t.is_infinite() {
                    0.0
                } else {
                    (-hazard_at(&state.support, &state.lambda, t) * eta[i].exp()).exp()
                }
            };
            let mut term = (surv(d.left()[i]) - surv(d.right()[i])).ln();
            if truncated {
                term -= surv(d.truncation()[i]).ln();
            }
            term
        })
        .sum()
}

fn c1c() -> Verdict {
    let mut r = rng(303);
    let mut worst: f64 = 0.0;
    let mut states = 0;
    while states < 200 {
        let n = r.random_range(5..25);
        let (left, right) = random_intervals(&mut r, n);
        let trunc: Vec<f64> = left
            .iter()
            .map(|l| if r.random_bool(0.5) { l * r.random_range(0.0..1.0) } else { 0.0 })
            .collect();
        let z: Vec<f64> = (0..2 * n).map(|_| r.random_range(-1.0..1.0)).collect();
        let d = dataset(left, right, Some(trunc), z);
        let s = maximal_intersections(&d);
        if s.is_empty() {
            continue;
        }
        let lambda: Vec<f64> = (0..s.len()).map(|_| r.random_range(0.05..0.6)).collect();
        let beta = vec![r.random_range(-0.5..0.5), r.random_range(-0.5..0.5)];
        let st = ModelState::new(beta, lambda, s).unwrap();
        let a = loglik(&st, &d).unwrap();
        let b = loglik_survival_form(&st, &d, false);
        let at = loglik_truncated(&st, &d).unwrap();
        let bt = loglik_survival_form(&st, &d, true);
        worst = worst.max((a - b).abs()).max((at - bt).abs());
        states += 1;
    }
    verdict(
        worst <= 1e-12,
        format!("200 states (plain and truncated), max |difference| {worst:.3e}"),
    )
}

// ---------------------------------------------------------------- 1d

/// `Q(eta) = sum_i E_i eta_i - sum_k D_k log sum_{i at risk at k} exp(eta_i)`
/// with the risk sets built directly from the data.
fn q_oracle(eta: &[f64], e: &[f64], dk: &[f64], at_risk: &[Vec<bool>]) -> f64 {
    let mut q: f64 = eta.iter().zip(e).map(|(h, e)| h * e).sum();
    for (k, d) in dk.iter().enumerate() {
        if *d > 0.0 {
            let s: f64 = (0..eta.len())
                .filter(|&i| at_risk[i][k])
                .map(|i| eta[i].exp())
                .sum();
            q -= d * s.ln();
        }
    }
    q
}

fn risk_matrix(d: &Dataset, s: &SupportSet, truncated: bool) -> Vec<Vec<bool>> {
    (0..d.n())
        .map(|i| {
            let r = d.right()[i];
            let end = if r.is_finite() { r } else { d.left()[i] };
            s.uppers()
                .iter()
                .map(|u| *u <= end && (!truncated || *u > d.truncation()[i]))
                .collect()
        })
        .collect()
}

fn c1d() -> Verdict {
    let mut r = rng(404);
    let (mut worst_g, mut worst_w): (f64, f64) = (0.0, 0.0);
    let mut instances = 0;
    while instances < 100 {
        let n = r.random_range(3..=8);
        let (left, right) = random_intervals(&mut r, n);
        let d = dataset(left, right, None, vec![0.0; n]);
        let s = maximal_intersections(&d);
        if s.is_empty() {
            continue;
        }
        let engine = Engine::new(&d, &s, false).unwrap();
        let lambda: Vec<f64> = (0..s.len()).map(|_| r.random_range(0.1..0.8)).collect();
        let st = ModelState::new(vec![0.0], lambda, s.clone()).unwrap();
        let cache = engine.estep(&st).unwrap();
        let e = cache.subject_totals();
        let dk = cache.point_totals(engine.risk());
        let at_risk = risk_matrix(&d, &s, false);
        let eta: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let quad = engine.surrogate_at(eta.clone(), &cache);
        let h = 1e-3;
        for i in 0..n {
            let f = |delta: f64| {
                let mut x = eta.clone();
                x[i] += delta;
                q_oracle(&x, &e, &dk, &at_risk)
            };
            let (f2m, f1m, f0, f1p, f2p) = (f(-2.0 * h), f(-h), f(0.0), f(h), f(2.0 * h));
            let g = (f2m - 8.0 * f1m + 8.0 * f1p - f2p) / (12.0 * h);
            let w = -(-f2m + 16.0 * f1m - 30.0 * f0 + 16.0 * f1p - f2p) / (12.0 * h * h);
            if g.abs() > 1e-6 || quad.gradient[i].abs() > 1e-6 {
                worst_g = worst_g.max((quad.gradient[i] - g).abs() / g.abs().max(1e-3));
            }
            if w > 1e-6 {
                worst_w = worst_w.max((quad.weight[i] - w).abs() / w);
            }
        }
        instances += 1;
    }
    verdict(
        worst_g <= 1e-6 && worst_w <= 1e-5,
        format!("100 instances, max rel. error gradient {worst_g:.2e}, curvature {worst_w:.2e}"),
    )
}

// ---------------------------------------------------------------- 1e

fn c1e() -> Verdict {
    let mut r = rng(505);
    let mut worst_z: f64 = 0.0;
    let mut checked = 0;
    for config in 0..10 {
        // Subject 0 spans (0, 10]; subjects 1..=K carve K support points
        // inside its bracket.
        let k = 2 + config % 4;
        let mut left = vec![0.0];
        let mut right = vec![10.0];
        for j in 0..k {
            left.push(j as f64);
            right.push(j as f64 + 1.0);
        }
        let n = left.len();
        let z: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let d = dataset(left, right, None, z);
        let s = maximal_intersections(&d);
        assert_eq!(s.len(), k);
        let engine = Engine::new(&d, &s, false).unwrap();
        let lambda: Vec<f64> = (0..k).map(|_| r.random_range(0.05..0.8)).collect();
        let beta = vec![r.random_range(-0.8..0.8)];
        let scale = (beta[0] * d.column(0)[0]).exp();
        let st = ModelState::new(beta, lambda.clone(), s.clone()).unwrap();
        let cache = engine.estep(&st).unwrap();

        let pois: Vec<Poisson<f64>> = lambda.iter().map(|l| Poisson::new(l * scale).unwrap()).collect();
        let mut sum = vec![0.0; k];
        let mut sumsq = vec![0.0; k];
        let mut accepted = 0.0;
        let mut draw = vec![0.0; k];
        for _ in 0..1_000_000 {
            let mut tot = 0.0;
            for (x, p) in draw.iter_mut().zip(&pois) {
                *x = p.sample(&mut r);
                tot += *x;
            }
            if tot > 0.0 {
                accepted += 1.0;
                for j in 0..k {
                    sum[j] += draw[j];
                    sumsq[j] += draw[j] * draw[j];
                }
            }
        }
        for j in 0..k {
            let mean = sum[j] / accepted;
            let var = sumsq[j] / accepted - mean * mean;
            let se = (var / accepted).sqrt();
            let zscore = (cache.expectation(engine.risk(), 0, j) - mean).abs() / se;
            worst_z = worst_z.max(zscore);
            checked += 1;
        }
    }
    verdict(
        worst_z <= 3.0,
        format!("10 configurations, {checked} expectations, max |z| = {worst_z:.2}"),
    )
}

// ---------------------------------------------------------------- 1f

fn complete_loglik(lambda: &[f64], eta: &[f64], e: &[Vec<f64>], at_risk: &[Vec<bool>]) -> f64 {
    let mut total = 0.0;
    for i in 0..eta.len() {
        for k in 0..lambda.len() {
            if at_risk[i][k] {
                let mu = lambda[k] * eta[i].exp();
                if e[i][k] > 0.0 {
                    total += e[i][k] * mu.ln();
                }
                total -= mu;
            }
        }
    }
    total
}

fn c1f() -> Verdict {
    let mut r = rng(606);
    let mut instances = 0;
    let mut perturbations = 0;
    let mut failures = 0;
    while instances < 100 {
        let n = r.random_range(4..20);
        let (left, right) = random_intervals(&mut r, n);
        let truncated = instances % 2 == 1;
        let trunc: Vec<f64> = left
            .iter()
            .map(|l| if truncated && r.random_bool(0.5) { l * 0.5 } else { 0.0 })
            .collect();
        let z: Vec<f64> = (0..2 * n).map(|_| r.random_range(-1.0..1.0)).collect();
        let d = dataset(left, right, Some(trunc), z);
        let s = icpen_core::support_for(&d, truncated);
        let Ok(engine) = Engine::new(&d, &s, truncated) else {
            continue;
        };
        let truncated = engine.truncation();
        let lambda: Vec<f64> = (0..s.len()).map(|_| r.random_range(0.05..0.8)).collect();
        let beta = vec![r.random_range(-0.5..0.5), r.random_range(-0.5..0.5)];
        let st = ModelState::new(beta.clone(), lambda, s.clone()).unwrap();
        let Ok(cache) = engine.estep(&st) else {
            continue;
        };
        let Ok(best) = engine.mstep_lambda(&beta, &cache) else {
            continue;
        };
        let eta = d.linear_predictor(&beta);
        let e: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..s.len()).map(|k| cache.expectation(engine.risk(), i, k)).collect())
            .collect();
        let at_risk = risk_matrix(&d, &s, truncated);
        let base = complete_loglik(&best, &eta, &e, &at_risk);
        for k in 0..s.len() {
            if best[k] == 0.0 {
                continue;
            }
            for f in [0.99, 1.01] {
                let mut l = best.clone();
                l[k] *= f;
                perturbations += 1;
                if complete_loglik(&l, &eta, &e, &at_risk) >= base {
                    failures += 1;
                }
            }
        }
        instances += 1;
    }
    verdict(
        failures == 0,
        format!("100 instances, {perturbations} perturbations, {failures} did not lower the objective"),
    )
}

// ---------------------------------------------------------------- 2

fn files_identical(a: &Path, b: &Path) -> bool {
    let list = |d: &Path| {
        let mut v: Vec<_> = walk(d).into_iter().map(|p| p.strip_prefix(d).unwrap().to_path_buf()).collect();
        v.sort();
        v
    };
    let (la, lb) = (list(a), list(b));
    la == lb
        && la
            .iter()
            .all(|rel| std::fs::read(a.join(rel)).unwrap() == std::fs::read(b.join(rel)).unwrap())
}

fn walk(d: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(d).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

fn c2() -> Verdict {
    let cfg = ScenarioConfig::preset("t1-small").unwrap();
    let reg = PenaltyRegistry::builtin();
    let opts = PathOptions::default();
    let mut problems = Vec::new();
    let mut paths = 0;
    for rep in 0..2 {
        let sim = simulate_replicate(&cfg, rep).unwrap();
        let (d, _) = sim.dataset.standardize().unwrap();
        let s = maximal_intersections(&d);
        let engine = Engine::new(&d, &s, false).unwrap();
        let null = null_fit(&engine).unwrap();
        for fam in ["lasso", "scad", "mcp"] {
            let pen = reg.create(fam, None).unwrap();
            let res = run_path_from(&engine, &null, pen.clone(), None, &opts).unwrap();
            let again = run_path_from(&engine, &null, pen.clone(), None, &opts).unwrap();
            paths += 1;
            if res.df[0] != 0 {
                problems.push(format!("{fam} rep {rep}: df at theta_1 = {}", res.df[0]));
            }
            let grid = theta_grid(res.theta_max, pen.path_ratio(), 101);
            if res.thetas[0] != res.theta_max
                || (res.thetas[100] - pen.path_ratio() * res.theta_max).abs() > 1e-12 * res.theta_max
                || res.thetas != grid
            {
                problems.push(format!("{fam} rep {rep}: grid endpoints"));
            }
            if res.reselect() != res.selected || again.selected != res.selected || again != res {
                problems.push(format!("{fam} rep {rep}: selection not deterministic"));
            }
        }
    }
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let mut sc = ScenarioConfig::preset("t2-small").unwrap();
        sc.n = 150;
        sc.p = 60;
        sc.replicates = 3;
        sc.seed = 99;
        run_campaign(&CampaignConfig {
            scenario: sc,
            families: vec!["mcp".into(), "adaptive_lasso".into()],
            path: PathOptions::default(),
            write_data: true,
            midpoint: true,
            out_dir: dir.path().to_path_buf(),
            threads: None,
        })
        .unwrap();
    }
    if !files_identical(dirs[0].path(), dirs[1].path()) {
        problems.push("identical-seed campaigns differ".into());
    }
    verdict(
        problems.is_empty(),
        if problems.is_empty() {
            format!("{paths} paths: df(theta_1) = 0, exact grid endpoints, stable selection; repeated campaign byte-identical")
        } else {
            problems.join("; ")
        },
    )
}

// ---------------------------------------------------------------- 3, 4, 7

struct Campaign {
    dir: tempfile::TempDir,
    summary: icpen_cli::simulate::CampaignSummary,
}

fn reduced_campaign() -> Campaign {
    let dir = tempfile::tempdir().unwrap();
    let mut sc = ScenarioConfig::preset("t1-small").unwrap();
    sc.seed = 2024;
    let summary = run_campaign(&CampaignConfig {
        scenario: sc,
        families: ["lasso", "adaptive_lasso", "mcp", "scad"].map(String::from).to_vec(),
        path: path_options(101, None, 0.01, 101),
        write_data: false,
        midpoint: true,
        out_dir: dir.path().to_path_buf(),
        threads: None,
    })
    .unwrap();
    Campaign { dir, summary }
}

fn method<'a>(c: &'a Campaign, fam: &str) -> &'a icpen_core::Aggregate {
    &c.summary
        .methods
        .iter()
        .find(|m| m.family == fam)
        .expect("method")
        .aggregate
}

fn c3(c: &Campaign) -> Verdict {
    let a = method(c, "mcp");
    verdict(
        a.fp.mean <= 1.0 && a.fn_.mean <= 0.5 && a.l2.mean <= 1.0,
        format!(
            "n=400 p=800, {} replicates: MCP L2 {:.3}, FP {:.2}, FN {:.2} (bounds 1.0, 1.0, 0.5)",
            a.replicates, a.l2.mean, a.fp.mean, a.fn_.mean
        ),
    )
}

fn c4(c: &Campaign) -> Verdict {
    let lasso = method(c, "lasso").l2.mean;
    let others: Vec<(&str, f64)> = ["adaptive_lasso", "mcp", "scad"]
        .iter()
        .map(|f| (*f, method(c, f).l2.mean))
        .collect();
    let ratios_ok = others.iter().all(|(_, l2)| lasso >= 2.0 * l2);
    let midpoints = std::fs::read_dir(c.dir.path().join("midpoint"))
        .map(|d| d.count())
        .unwrap_or(0);
    let detail = others
        .iter()
        .map(|(f, l2)| format!("{f} {l2:.3} (x{:.2})", lasso / l2))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(
        ratios_ok && midpoints == 30,
        format!("lasso L2 {lasso:.3} vs {detail}; {midpoints} midpoint files"),
    )
}

fn c7(c: &Campaign) -> Verdict {
    let path = c.dir.path().join("estimates_mcp.csv");
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let cols = rdr.headers().unwrap().len();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let numeric = rows
        .iter()
        .all(|r| r.len() == cols && r.iter().all(|x| x.parse::<f64>().is_ok()));
    verdict(
        rows.len() == 30 && cols == 6 && numeric,
        format!("estimates_mcp.csv: {} rows x {cols} columns", rows.len()),
    )
}

// ---------------------------------------------------------------- 5, 6

fn c5() -> Verdict {
    let mut cfg = ScenarioConfig::preset("t1").unwrap();
    cfg.seed = 5;
    let rates: Vec<f64> = (0..50)
        .map(|r| simulate_replicate(&cfg, r).unwrap().dataset.right_censored_fraction())
        .collect();
    let mean = rates.iter().sum::<f64>() / 50.0;
    let lo = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    verdict(
        (0.15..=0.40).contains(&mean),
        format!("n=500, 50 replicates: mean right-censoring {mean:.3} (range {lo:.3}..{hi:.3}), band [0.15, 0.40]"),
    )
}

fn c6() -> Verdict {
    use clap::Parser;
    let mut ok = true;
    for name in ["t1", "t2", "t3", "t4"] {
        let cli = icpen_cli::args::Cli::try_parse_from([
            "icpen", "simulate", "--preset", name, "--n", "1000", "--p", "10000", "--replicates", "200",
            "--fit", "mcp",
        ]);
        let Ok(icpen_cli::args::Cli {
            command: icpen_cli::args::Command::Simulate(args),
            ..
        }) = cli
        else {
            ok = false;
            continue;
        };
        let sc = icpen_cli::scenario_from(&args).unwrap();
        ok &= sc.n == 1000 && sc.p == 10_000 && sc.replicates == 200 && sc.validate().is_ok();
    }
    verdict(
        ok,
        "full-scale presets t1..t4 parse and validate; runs are launched manually, not gated",
    )
}

fn main() {
    let mut failed = Vec::new();
    let mut run = |id: &str, f: &dyn Fn() -> Verdict| {
        let t0 = Instant::now();
        let v = f();
        println!(
            "{} {id}: {} [{:.1}s]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            t0.elapsed().as_secs_f64()
        );
        if !v.pass {
            failed.push(id.to_string());
        }
    };
    run("1a support sets vs cell signatures", &c1a);
    run("1b univariate solvers vs 1e5-point grid", &c1b);
    run("1c log likelihood vs survival-difference form", &c1c);
    run("1d surrogate gradient and curvature vs finite differences", &c1d);
    run("1e E-step vs Monte Carlo truncated Poisson", &c1e);
    run("1f jump update is an exact argmax", &c1f);
    run("2 path invariants and determinism", &c2);
    let t0 = Instant::now();
    let campaign = reduced_campaign();
    println!(
        "     reduced-scale campaign: 30 replicates x 4 families in {:.1}s",
        t0.elapsed().as_secs_f64()
    );
    run("3 reduced-scale MCP accuracy", &|| c3(&campaign));
    run("4 lasso error at least twice the oracle-property methods", &|| c4(&campaign));
    run("5 right-censoring rate", &c5);
    run("6 full-scale presets available", &c6);
    run("7 per-replicate estimate export", &|| c7(&campaign));
    if !failed.is_empty() {
        eprintln!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
