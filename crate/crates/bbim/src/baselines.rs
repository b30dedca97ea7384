//! Reference solvers for cut-value comparisons: plain simulated annealing
//! (the zero-bias configuration of the main engine) and a Goemans-
//! Williamson SDP approximation via low-rank Burer-Monteiro ascent with
//! randomized hyperplane rounding.
//!
//! Published 2000-node reference values, kept for documentation:
//! G22 best-known cut 13,359; best Bounce-Bind cut 35,732 on K2000;
//! GW-SDP 26,957 on K2000.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::dynamics::{run_trial, AnnealSchedule, DynamicsConfig, DynamicsError, RunRecord};
use crate::model::{BounceBindParam, SpinState};
use crate::problems::{cut_value, maxcut_to_ising, MaxCutGraph, ProblemError};

/// Reference constants from the comparison table (not test oracles).
pub const G22_BEST_KNOWN_CUT: i64 = 13_359;
pub const K2000_BBIM_BEST_CUT: i64 = 35_732;
pub const K2000_GW_SDP_CUT: i64 = 26_957;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Simulated annealing on a MAX-CUT graph: the main engine at B = 0.
pub fn sa_solve(
    graph: &MaxCutGraph,
    schedule: AnnealSchedule,
    sweeps: usize,
    seed: u64,
    target_energy: Option<i64>,
) -> Result<RunRecord, BaselineError> {
    let instance = maxcut_to_ising(graph)?;
    let mut config = DynamicsConfig::new(BounceBindParam::zero(), schedule, sweeps);
    config.seed = seed;
    config.target_energy = target_energy;
    Ok(run_trial(&instance, &config)?)
}

/// n unit vectors of dimension `rank`, one per vertex.
#[derive(Debug, Clone)]
pub struct LowRankEmbedding {
    vectors: Vec<Vec<f64>>,
    /// SDP objective at the returned iterate.
    pub objective: f64,
    pub converged: bool,
}

impl LowRankEmbedding {
    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }
}

/// Burer-Monteiro exactness heuristic: rank about sqrt(2n), at least 2.
pub fn default_rank(n: usize) -> usize {
    ((2.0 * n as f64).sqrt().ceil() as usize).max(2)
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

fn sdp_objective(graph: &MaxCutGraph, vectors: &[Vec<f64>]) -> f64 {
    graph
        .edges()
        .iter()
        .map(|&(u, v, w)| {
            let dot: f64 =
                vectors[u].iter().zip(&vectors[v]).map(|(a, b)| a * b).sum();
            w as f64 * (1.0 - dot) / 2.0
        })
        .sum()
}

/// Maximize `sum w_uv (1 - <x_u, x_v>) / 2` by projected gradient ascent on
/// the product of unit spheres with backtracking line search. Runs until
/// the relative objective change drops below 1e-8 or the iteration cap;
/// non-convergence returns the best iterate with `converged = false`.
pub fn bm_optimize(
    graph: &MaxCutGraph,
    rank: usize,
    iterations: usize,
    seed: u64,
) -> LowRankEmbedding {
    assert!(rank >= 2, "rank must be at least 2");
    let n = graph.n_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let mut v: Vec<f64> =
                (0..rank).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            normalize(&mut v);
            v
        })
        .collect();
    let mut adjacency: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(u, v, w) in graph.edges() {
        adjacency[u].push((v, w));
        adjacency[v].push((u, w));
    }
    let mut objective = sdp_objective(graph, &vectors);
    let mut converged = false;
    let mut step = 1.0f64;
    for _ in 0..iterations {
        // Euclidean gradient of the objective wrt x_u is -1/2 sum w x_v;
        // project onto the tangent space of each sphere
        let mut gradient: Vec<Vec<f64>> = vec![vec![0.0; rank]; n];
        for u in 0..n {
            for &(v, w) in &adjacency[u] {
                for d in 0..rank {
                    gradient[u][d] -= 0.5 * w as f64 * vectors[v][d];
                }
            }
            let dot: f64 =
                gradient[u].iter().zip(&vectors[u]).map(|(g, x)| g * x).sum();
            for d in 0..rank {
                gradient[u][d] -= dot * vectors[u][d];
            }
        }
        let grad_norm_sq: f64 = gradient
            .iter()
            .flat_map(|g| g.iter())
            .map(|g| g * g)
            .sum();
        if grad_norm_sq < 1e-18 {
            converged = true;
            break;
        }
        // backtracking: shrink until the Armijo condition holds
        let mut accepted = false;
        while step > 1e-12 {
            let mut candidate = vectors.clone();
            for u in 0..n {
                for d in 0..rank {
                    candidate[u][d] += step * gradient[u][d];
                }
                normalize(&mut candidate[u]);
            }
            let candidate_objective = sdp_objective(graph, &candidate);
            if candidate_objective >= objective + 1e-4 * step * grad_norm_sq {
                let relative_change =
                    (candidate_objective - objective) / objective.abs().max(1.0);
                vectors = candidate;
                objective = candidate_objective;
                accepted = true;
                if relative_change < 1e-8 {
                    converged = true;
                }
                break;
            }
            step /= 2.0;
        }
        if !accepted || converged {
            converged = converged || !accepted && step <= 1e-12;
            break;
        }
        // allow the step to grow back after an accepted move
        step = (step * 2.0).min(1.0);
    }
    LowRankEmbedding { vectors, objective, converged }
}

/// Goemans-Williamson rounding: sign each vertex by the side of a random
/// Gaussian hyperplane; keep the best cut over `rounds` draws.
pub fn gw_round(
    embedding: &LowRankEmbedding,
    graph: &MaxCutGraph,
    rounds: usize,
    seed: u64,
) -> Result<(i64, SpinState), BaselineError> {
    assert!(rounds >= 1);
    let rank = embedding.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_cut = i64::MIN;
    let mut best_state = SpinState::all_up(graph.n_vertices());
    for _ in 0..rounds {
        let normal: Vec<f64> =
            (0..rank).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let spins: Vec<i8> = embedding
            .vectors()
            .iter()
            .map(|x| {
                let dot: f64 = x.iter().zip(&normal).map(|(a, b)| a * b).sum();
                if dot >= 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        let state = SpinState::new(spins).expect("signs are valid spins");
        let cut = cut_value(graph, &state)?;
        if cut > best_cut {
            best_cut = cut;
            best_state = state;
        }
    }
    Ok((best_cut, best_state))
}
