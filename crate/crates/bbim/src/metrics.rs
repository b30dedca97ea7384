//! Success-probability estimation, time-to-solution metrics with bootstrap
//! confidence intervals, bias-parameter sweeps, and scaling-law fits.
//!
//! TTS is reported in sweep units (t_f = rounds, samples = n * rounds).
//! Wall-clock conversion is presentation only: multiply samples by
//! `CLKS_PER_SAMPLE / CLK_HZ` for a hardware-style figure. The reference
//! clock of the hardware the protocol comes from is 210 MHz; the published
//! peak speedups (27.3x on second-order 3R3X at n=160, 6.15x on dense
//! MAX-CUT at n=200) depend on that clock accounting and full-scale budgets
//! and are documentation constants, not test thresholds.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{
    run_ensemble, split_seed, AnnealSchedule, DynamicsConfig, DynamicsError, RunRecord,
};
use crate::model::IsingInstance;

/// Default wall-clock conversion constants (documentation only).
pub const DEFAULT_CLK_HZ: f64 = 210e6;
pub const DEFAULT_CLKS_PER_SAMPLE: f64 = 1.0;

/// Reference speedups reported for the original hardware implementation.
pub const REFERENCE_SPEEDUP_3R3X_N160: f64 = 27.3;
pub const REFERENCE_SPEEDUP_MAXCUT_N200: f64 = 6.15;

const DEFAULT_RESAMPLES: usize = 1000;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("empty record list")]
    EmptyRecords,
    #[error("grid must cover at least {0} cells")]
    InsufficientGrid(usize),
    #[error("estimates are mismatched: {0}")]
    MismatchedInputs(String),
    #[error("scaling fit needs at least 3 distinct sizes")]
    DegenerateDesign,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Bayesian success-probability estimate with a Jeffreys Beta(1/2, 1/2)
/// prior; the posterior mean is never exactly 0 or 1, so TTS stays finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessEstimate {
    pub successes: usize,
    pub trials: usize,
}

impl SuccessEstimate {
    pub fn new(successes: usize, trials: usize) -> Self {
        assert!(successes <= trials);
        Self { successes, trials }
    }

    pub fn posterior_alpha(&self) -> f64 {
        self.successes as f64 + 0.5
    }

    pub fn posterior_beta(&self) -> f64 {
        (self.trials - self.successes) as f64 + 0.5
    }

    pub fn p_mean(&self) -> f64 {
        self.posterior_alpha() / (self.trials as f64 + 1.0)
    }

    pub fn sample_posterior<R: Rng>(&self, rng: &mut R) -> f64 {
        Beta::new(self.posterior_alpha(), self.posterior_beta())
            .expect("positive shape parameters")
            .sample(rng)
    }
}

/// Count successes over trials at one fixed sweep budget.
pub fn estimate_ps(records: &[RunRecord]) -> Result<SuccessEstimate, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::EmptyRecords);
    }
    let successes = records.iter().filter(|r| r.success).count();
    Ok(SuccessEstimate::new(successes, records.len()))
}

/// TTS = t_f * ln(0.01) / ln(1 - p_s), repetitions clamped to >= 1.
pub fn tts(t_f: f64, p_s: f64) -> f64 {
    assert!(t_f > 0.0, "t_f must be positive");
    assert!(p_s > 0.0 && p_s < 1.0, "p_s must be inside (0, 1)");
    let repetitions = (0.01f64.ln() / (1.0 - p_s).ln()).max(1.0);
    t_f * repetitions
}

/// One cell of a (t_f, B) evaluation grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCell {
    pub t_f: f64,
    pub bb: f64,
}

/// Quantile-q optimal TTS with bootstrap confidence interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TtsEstimate {
    pub q: f64,
    pub tts: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Grid point at which the optimum was achieved.
    pub at_sweeps: f64,
    pub at_bb: f64,
    /// Problem size, when known; checked by [`speedup`].
    pub n: Option<usize>,
    /// Per-resample optima, kept for paired comparisons.
    #[serde(skip)]
    pub samples: Vec<f64>,
}

/// Linear-interpolation quantile of an unsorted sample.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty());
    assert!((0.0..=1.0).contains(&q));
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let position = q * (sorted.len() - 1) as f64;
    let lo = position.floor() as usize;
    let hi = position.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = position - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    }
}

/// Quantile-q optimal TTS over a grid of sweep budgets (and optionally
/// bias values). `estimates[instance][cell]` gives the per-instance
/// success estimate at each grid cell.
///
/// Each bootstrap resample draws instances with replacement, draws p_s per
/// drawn instance from its Beta posterior, computes per-instance TTS at
/// every cell, takes the q-quantile across instances, and minimizes over
/// cells. The report carries the resample mean, the 2.5/97.5 percentile
/// interval, and the modal argmin cell.
pub fn opt_tts(
    estimates: &[Vec<SuccessEstimate>],
    cells: &[GridCell],
    q: f64,
    resamples: usize,
    seed: u64,
) -> Result<TtsEstimate, MetricsError> {
    if estimates.is_empty() {
        return Err(MetricsError::EmptyRecords);
    }
    if cells.is_empty() {
        return Err(MetricsError::InsufficientGrid(1));
    }
    for row in estimates {
        if row.len() != cells.len() {
            return Err(MetricsError::MismatchedInputs(format!(
                "instance row has {} cells, grid has {}",
                row.len(),
                cells.len()
            )));
        }
    }
    let n_instances = estimates.len();
    let resamples = resamples.max(1);
    let results: Vec<(f64, usize)> = (0..resamples)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, r as u64));
            let drawn: Vec<usize> =
                (0..n_instances).map(|_| rng.gen_range(0..n_instances)).collect();
            let mut best = f64::INFINITY;
            let mut best_cell = 0usize;
            let mut per_instance = vec![0.0; n_instances];
            // sample one posterior draw per (instance, cell) pair
            let draws: Vec<Vec<f64>> = drawn
                .iter()
                .map(|&inst| {
                    estimates[inst]
                        .iter()
                        .map(|e| e.sample_posterior(&mut rng))
                        .collect()
                })
                .collect();
            for (cell_idx, cell) in cells.iter().enumerate() {
                for (slot, draw_row) in draws.iter().enumerate() {
                    per_instance[slot] = tts(cell.t_f, draw_row[cell_idx]);
                }
                let value = quantile(&per_instance, q);
                if value < best {
                    best = value;
                    best_cell = cell_idx;
                }
            }
            (best, best_cell)
        })
        .collect();
    let values: Vec<f64> = results.iter().map(|&(v, _)| v).collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let mut cell_counts = vec![0usize; cells.len()];
    for &(_, c) in &results {
        cell_counts[c] += 1;
    }
    let modal = cell_counts
        .iter()
        .enumerate()
        .max_by_key(|&(_, c)| *c)
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(TtsEstimate {
        q,
        tts: mean,
        ci_low: quantile(&values, 0.025),
        ci_high: quantile(&values, 0.975),
        at_sweeps: cells[modal].t_f,
        at_bb: cells[modal].bb,
        n: None,
        samples: values,
    })
}

/// Success-probability table over a (B, t_f) grid for a set of instances
/// with known target energies.
#[derive(Debug, Clone, Serialize)]
pub struct BbSweepTable {
    pub bb_grid: Vec<f64>,
    pub budgets: Vec<usize>,
    /// `estimates[bb_idx][budget_idx][instance_idx]`
    pub estimates: Vec<Vec<Vec<SuccessEstimate>>>,
}

impl BbSweepTable {
    /// Successes pooled across instances for one grid cell.
    pub fn pooled(&self, bb_idx: usize, budget_idx: usize) -> SuccessEstimate {
        let cell = &self.estimates[bb_idx][budget_idx];
        let successes = cell.iter().map(|e| e.successes).sum();
        let trials = cell.iter().map(|e| e.trials).sum();
        SuccessEstimate::new(successes, trials)
    }

    /// The B value maximizing pooled success probability at each budget.
    pub fn argmax_bb_per_budget(&self) -> Vec<f64> {
        (0..self.budgets.len())
            .map(|b| {
                let best = (0..self.bb_grid.len())
                    .max_by(|&x, &y| {
                        self.pooled(x, b)
                            .p_mean()
                            .partial_cmp(&self.pooled(y, b).p_mean())
                            .expect("no NaN")
                    })
                    .expect("nonempty grid");
                self.bb_grid[best]
            })
            .collect()
    }

    /// Tidy CSV: `problem,n,bb,t_f,trials,successes,p_mean` rows, one per
    /// (grid cell, instance).
    pub fn to_csv(&self, problem: &str, n: usize) -> String {
        let mut out = String::from("problem,n,bb,t_f,trials,successes,p_mean\n");
        for (bi, &bb) in self.bb_grid.iter().enumerate() {
            for (ti, &t_f) in self.budgets.iter().enumerate() {
                for est in &self.estimates[bi][ti] {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        problem,
                        n,
                        bb,
                        t_f,
                        est.trials,
                        est.successes,
                        est.p_mean()
                    ));
                }
            }
        }
        out
    }
}

/// Run ensembles for every (B, t_f) grid cell over an instance set.
/// Each instance comes with its hitting target. Per-cell seeds are split
/// from the template seed, so the table is reproducible and independent of
/// scheduling.
pub fn bb_sweep(
    instances: &[(IsingInstance, i64)],
    bb_grid: &[f64],
    budgets: &[usize],
    template: &DynamicsConfig,
    trials: usize,
) -> Result<BbSweepTable, MetricsError> {
    if instances.is_empty() || bb_grid.is_empty() || budgets.is_empty() {
        return Err(MetricsError::InsufficientGrid(1));
    }
    let mut estimates = Vec::with_capacity(bb_grid.len());
    for (bi, &bbv) in bb_grid.iter().enumerate() {
        let bb = if template.bb.is_quantized() {
            crate::model::BounceBindParam::quantized(bbv)
                .map_err(|e| MetricsError::MismatchedInputs(e.to_string()))?
        } else {
            crate::model::BounceBindParam::free(bbv)
        };
        let mut per_budget = Vec::with_capacity(budgets.len());
        for (ti, &budget) in budgets.iter().enumerate() {
            let mut per_instance = Vec::with_capacity(instances.len());
            for (ii, (instance, target)) in instances.iter().enumerate() {
                let cell_tag = ((bi * budgets.len() + ti) * instances.len() + ii) as u64;
                let config = DynamicsConfig {
                    bb,
                    schedule: AnnealSchedule {
                        sweeps_per_step: (budget / template.schedule.num_steps()).max(1),
                        ..template.schedule
                    },
                    max_sweeps: budget,
                    seed: split_seed(template.seed, cell_tag),
                    target_energy: Some(*target),
                    ..template.clone()
                };
                let records = run_ensemble(instance, &config, trials, 0)?;
                per_instance.push(estimate_ps(&records)?);
            }
            per_budget.push(per_instance);
        }
        estimates.push(per_budget);
    }
    Ok(BbSweepTable {
        bb_grid: bb_grid.to_vec(),
        budgets: budgets.to_vec(),
        estimates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScalingModel {
    /// TTS ~ 10^(gamma n + eta)
    Exp10,
    /// TTS ~ e^(alpha sqrt(n) + beta)
    ExpSqrt,
    /// TTS ~ a n^k
    Power,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingFit {
    pub model: ScalingModel,
    /// (slope-like, intercept-like): (gamma, eta), (alpha, beta), or
    /// (k, ln a) depending on the model.
    pub params: (f64, f64),
    pub stderr: (f64, f64),
    /// Residual sum of squares in the transformed domain.
    pub residual_norm: f64,
    pub ci_slope: (f64, f64),
    pub ci_intercept: (f64, f64),
}

fn transform(model: ScalingModel, n: f64, tts_value: f64) -> (f64, f64) {
    match model {
        ScalingModel::Exp10 => (n, tts_value.log10()),
        ScalingModel::ExpSqrt => (n.sqrt(), tts_value.ln()),
        ScalingModel::Power => (n.ln(), tts_value.ln()),
    }
}

fn least_squares(xy: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = xy.len() as f64;
    let sx: f64 = xy.iter().map(|&(x, _)| x).sum();
    let sy: f64 = xy.iter().map(|&(_, y)| y).sum();
    let sxx: f64 = xy.iter().map(|&(x, _)| x * x).sum();
    let sxy: f64 = xy.iter().map(|&(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let rss: f64 = xy
        .iter()
        .map(|&(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Some((slope, intercept, rss))
}

/// Least-squares fit in the model's transformed domain, with bootstrap
/// parameter intervals over point resamples.
pub fn fit_scaling(
    points: &[(f64, f64)],
    model: ScalingModel,
) -> Result<ScalingFit, MetricsError> {
    let distinct: std::collections::BTreeSet<u64> =
        points.iter().map(|&(n, _)| n.to_bits()).collect();
    if distinct.len() < 3 {
        return Err(MetricsError::DegenerateDesign);
    }
    let xy: Vec<(f64, f64)> =
        points.iter().map(|&(n, t)| transform(model, n, t)).collect();
    let (slope, intercept, rss) =
        least_squares(&xy).ok_or(MetricsError::DegenerateDesign)?;
    // classical standard errors from residual variance
    let m = xy.len() as f64;
    let x_mean = xy.iter().map(|&(x, _)| x).sum::<f64>() / m;
    let sxx: f64 = xy.iter().map(|&(x, _)| (x - x_mean) * (x - x_mean)).sum();
    let variance = if m > 2.0 { rss / (m - 2.0) } else { 0.0 };
    let se_slope = (variance / sxx).sqrt();
    let se_intercept = (variance * (1.0 / m + x_mean * x_mean / sxx)).sqrt();
    // bootstrap over point resamples
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1e);
    let mut slopes = Vec::with_capacity(DEFAULT_RESAMPLES);
    let mut intercepts = Vec::with_capacity(DEFAULT_RESAMPLES);
    for _ in 0..DEFAULT_RESAMPLES {
        let sample: Vec<(f64, f64)> =
            (0..xy.len()).map(|_| xy[rng.gen_range(0..xy.len())]).collect();
        if let Some((s, i, _)) = least_squares(&sample) {
            slopes.push(s);
            intercepts.push(i);
        }
    }
    let (ci_slope, ci_intercept) = if slopes.len() >= 10 {
        (
            (quantile(&slopes, 0.025), quantile(&slopes, 0.975)),
            (quantile(&intercepts, 0.025), quantile(&intercepts, 0.975)),
        )
    } else {
        ((slope, slope), (intercept, intercept))
    };
    Ok(ScalingFit {
        model,
        params: (slope, intercept),
        stderr: (se_slope, se_intercept),
        residual_norm: rss,
        ci_slope,
        ci_intercept,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpeedupEstimate {
    pub ratio: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Ratio of classical to Bounce-Bind optimal TTS with a paired-bootstrap
/// confidence interval.
pub fn speedup(
    classical: &TtsEstimate,
    bbim: &TtsEstimate,
) -> Result<SpeedupEstimate, MetricsError> {
    if classical.q != bbim.q {
        return Err(MetricsError::MismatchedInputs("quantiles differ".into()));
    }
    if let (Some(a), Some(b)) = (classical.n, bbim.n) {
        if a != b {
            return Err(MetricsError::MismatchedInputs("problem sizes differ".into()));
        }
    }
    if classical.samples.len() != bbim.samples.len() || classical.samples.is_empty() {
        return Err(MetricsError::MismatchedInputs(
            "resample streams are not paired".into(),
        ));
    }
    let ratios: Vec<f64> = classical
        .samples
        .iter()
        .zip(&bbim.samples)
        .map(|(c, b)| c / b)
        .collect();
    Ok(SpeedupEstimate {
        ratio: classical.tts / bbim.tts,
        ci_low: quantile(&ratios, 0.025),
        ci_high: quantile(&ratios, 0.975),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SpinState;

    fn record(success: bool) -> RunRecord {
        RunRecord {
            success,
            sweeps_used: 10,
            samples_used: 30,
            best_energy: 0,
            best_state: SpinState::all_up(3),
            seed: 0,
        }
    }

    #[test]
    fn jeffreys_posterior_means() {
        let none = estimate_ps(&vec![record(false); 100]).unwrap();
        assert!((none.p_mean() - 0.5 / 101.0).abs() < 1e-12);
        assert!(none.p_mean() > 0.0);

        let all = estimate_ps(&vec![record(true); 100]).unwrap();
        assert!((all.p_mean() - 100.5 / 101.0).abs() < 1e-12);
        assert!(all.p_mean() < 1.0);

        let mut records = vec![record(true); 50];
        records.extend(vec![record(false); 50]);
        let half = estimate_ps(&records).unwrap();
        assert!((half.p_mean() - 0.5).abs() < 1e-12);

        assert!(matches!(estimate_ps(&[]), Err(MetricsError::EmptyRecords)));
    }

    #[test]
    fn tts_formula() {
        // p_s = 0.99 means exactly one repetition
        assert!((tts(500.0, 0.99) - 500.0).abs() < 1e-9);
        // closed form at p_s = 0.5
        let expect = 1000.0 * 0.01f64.ln() / 0.5f64.ln();
        assert!((tts(1000.0, 0.5) - expect).abs() < 1e-9);
        assert!((tts(1000.0, 0.5) - 6643.9).abs() < 0.1);
        // clamp for p_s above 0.99
        assert!((tts(1000.0, 0.9999) - 1000.0).abs() < 1e-9);
        // monotone decreasing in p_s
        assert!(tts(100.0, 0.3) > tts(100.0, 0.6));
    }

    #[test]
    fn quantile_interpolation() {
        let v = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert_eq!(quantile(&v, 0.5), 2.5);
    }

    #[test]
    fn opt_tts_single_cell_matches_tts() {
        let est = SuccessEstimate::new(50, 100);
        let cells = [GridCell { t_f: 200.0, bb: 0.0 }];
        let out = opt_tts(&[vec![est]], &cells, 0.5, 400, 1).unwrap();
        let point = tts(200.0, est.p_mean());
        // posterior spread keeps the mean near the point estimate
        assert!((out.tts - point).abs() / point < 0.1, "{} vs {point}", out.tts);
        assert!(out.ci_low <= out.tts && out.tts <= out.ci_high);
        assert_eq!(out.at_sweeps, 200.0);
    }

    #[test]
    fn opt_tts_saturated_grid_prefers_smallest_budget() {
        // p_s saturated at every budget: larger budgets strictly dominated
        let est = SuccessEstimate::new(1000, 1000);
        let cells = [
            GridCell { t_f: 100.0, bb: 0.0 },
            GridCell { t_f: 200.0, bb: 0.0 },
            GridCell { t_f: 400.0, bb: 0.0 },
        ];
        let rows = vec![vec![est; 3]; 5];
        let out = opt_tts(&rows, &cells, 0.5, 200, 2).unwrap();
        assert_eq!(out.at_sweeps, 100.0);
    }

    #[test]
    fn opt_tts_flat_for_exponential_success_curve() {
        // p_s(t_f) = 1 - e^(-t_f / tau) makes TTS flat in t_f, so the
        // optimum equals tau * ln(100) everywhere on the grid
        let tau = 300.0;
        let budgets = [150.0, 300.0, 600.0, 1200.0];
        let trials = 20_000usize;
        let cells: Vec<GridCell> =
            budgets.iter().map(|&t| GridCell { t_f: t, bb: 0.0 }).collect();
        let rows: Vec<Vec<SuccessEstimate>> = (0..8)
            .map(|_| {
                budgets
                    .iter()
                    .map(|&t| {
                        let p = 1.0 - (-t / tau).exp();
                        SuccessEstimate::new((p * trials as f64).round() as usize, trials)
                    })
                    .collect()
            })
            .collect();
        let out = opt_tts(&rows, &cells, 0.5, 300, 3).unwrap();
        let analytic = tau * 100f64.ln();
        assert!(
            (out.tts - analytic).abs() / analytic < 0.05,
            "{} vs {analytic}",
            out.tts
        );
    }

    #[test]
    fn opt_tts_never_beats_pointwise_minimum_by_much() {
        let cells = [
            GridCell { t_f: 100.0, bb: 0.0 },
            GridCell { t_f: 300.0, bb: -0.5 },
        ];
        let rows = vec![
            vec![SuccessEstimate::new(30, 200), SuccessEstimate::new(150, 200)],
            vec![SuccessEstimate::new(40, 200), SuccessEstimate::new(160, 200)],
        ];
        let out = opt_tts(&rows, &cells, 0.5, 500, 4).unwrap();
        let pointwise: f64 = cells
            .iter()
            .enumerate()
            .map(|(ci, cell)| {
                let per: Vec<f64> =
                    rows.iter().map(|r| tts(cell.t_f, r[ci].p_mean())).collect();
                quantile(&per, 0.5)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(out.tts < pointwise * 1.2);
    }

    #[test]
    fn scaling_fits_recover_noiseless_parameters() {
        let sizes = [16.0, 32.0, 48.0, 64.0, 96.0];
        // 10^(0.02 n - 3)
        let pts: Vec<(f64, f64)> =
            sizes.iter().map(|&n| (n, 10f64.powf(0.02 * n - 3.0))).collect();
        let fit = fit_scaling(&pts, ScalingModel::Exp10).unwrap();
        assert!((fit.params.0 - 0.02).abs() < 1e-10);
        assert!((fit.params.1 - -3.0).abs() < 1e-10);

        // e^(0.5 sqrt(n) + 1)
        let pts: Vec<(f64, f64)> =
            sizes.iter().map(|&n| (n, (0.5 * n.sqrt() + 1.0).exp())).collect();
        let fit = fit_scaling(&pts, ScalingModel::ExpSqrt).unwrap();
        assert!((fit.params.0 - 0.5).abs() < 1e-10);
        assert!((fit.params.1 - 1.0).abs() < 1e-10);

        // 2 n^1.5
        let pts: Vec<(f64, f64)> =
            sizes.iter().map(|&n| (n, 2.0 * n.powf(1.5))).collect();
        let fit = fit_scaling(&pts, ScalingModel::Power).unwrap();
        assert!((fit.params.0 - 1.5).abs() < 1e-10);
        assert!((fit.params.1 - 2f64.ln()).abs() < 1e-10);

        assert!(matches!(
            fit_scaling(&[(8.0, 1.0), (8.0, 2.0)], ScalingModel::Exp10),
            Err(MetricsError::DegenerateDesign)
        ));
    }

    #[test]
    fn model_selection_by_residual() {
        // noisy expsqrt data should fit expsqrt better than exp10 almost
        // always
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let sizes = [16.0f64, 36.0, 64.0, 100.0, 144.0, 196.0];
        let mut wins = 0;
        let reps = 100;
        for _ in 0..reps {
            let pts: Vec<(f64, f64)> = sizes
                .iter()
                .map(|&n| {
                    let noise: f64 = rng.gen_range(-0.05..0.05);
                    (n, (0.4 * n.sqrt() + 0.5 + noise).exp())
                })
                .collect();
            let sqrt_fit = fit_scaling(&pts, ScalingModel::ExpSqrt).unwrap();
            let exp_fit = fit_scaling(&pts, ScalingModel::Exp10).unwrap();
            if sqrt_fit.residual_norm < exp_fit.residual_norm {
                wins += 1;
            }
        }
        assert!(wins >= 95, "expsqrt won only {wins}/{reps}");
    }

    #[test]
    fn speedup_identity_and_pairing() {
        let est = TtsEstimate {
            q: 0.5,
            tts: 1000.0,
            ci_low: 900.0,
            ci_high: 1100.0,
            at_sweeps: 100.0,
            at_bb: 0.0,
            n: Some(32),
            samples: vec![950.0, 1000.0, 1050.0],
        };
        let s = speedup(&est, &est).unwrap();
        assert_eq!(s.ratio, 1.0);
        assert_eq!(s.ci_low, 1.0);
        assert_eq!(s.ci_high, 1.0);

        let other = TtsEstimate { q: 0.25, ..est.clone() };
        assert!(speedup(&est, &other).is_err());
        let other = TtsEstimate { n: Some(64), ..est.clone() };
        assert!(speedup(&est, &other).is_err());
    }
}
