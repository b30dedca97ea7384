//! Exact analysis of the Markov chain induced by sequential Bounce-Bind
//! updates on small instances.
//!
//! States are indexed by binary encoding: bit i set means spin i is +1.
//! With B = 0 the sweep chain is sequential Gibbs sampling and its
//! stationary law is the Boltzmann distribution; with B != 0 the chain is
//! generally non-reversible and only the stationary equation pi P = pi is
//! asserted.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{BounceBindParam, IsingInstance, ModelError, SpinState};

/// Hard cap on dense 2^n x 2^n chain analysis.
pub const KERNEL_CAP: usize = 20;
/// Cap on exhaustive ground-state enumeration.
pub const BRUTE_FORCE_CAP: usize = 24;

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance too large: n={n} exceeds cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Dense row-stochastic matrix over state indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    dim: usize,
    /// row-major; entry(s, t) is the probability of moving from s to t
    data: Vec<f64>,
}

impl TransitionMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for s in 0..dim {
            data[s * dim + s] = 1.0;
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, from: usize, to: usize) -> f64 {
        self.data[from * self.dim + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        &self.data[from * self.dim..(from + 1) * self.dim]
    }

    /// pi' = pi P
    pub fn apply_left(&self, pi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for s in 0..self.dim {
            let p = pi[s];
            if p == 0.0 {
                continue;
            }
            for (t, &entry) in self.row(s).iter().enumerate() {
                out[t] += p * entry;
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for s in 0..self.dim {
            let row: Vec<String> = self.row(s).iter().map(|v| format!("{v}")).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    Stationary,
    Empirical,
    Boltzmann,
    Transient(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution {
    pub probs: Vec<f64>,
    pub kind: DistributionKind,
}

impl StateDistribution {
    pub fn uniform(dim: usize, kind: DistributionKind) -> Self {
        Self { probs: vec![1.0 / dim as f64; dim], kind }
    }

    pub fn point_mass(index: usize, dim: usize, kind: DistributionKind) -> Self {
        let mut probs = vec![0.0; dim];
        probs[index] = 1.0;
        Self { probs, kind }
    }

    /// Histogram normalization; total must be positive.
    pub fn from_counts(counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        let probs = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self { probs, kind: DistributionKind::Empirical }
    }

    pub fn total_variation(&self, other: &StateDistribution) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0
    }

    pub fn max_norm_distance(&self, other: &StateDistribution) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("state,probability\n");
        for (s, p) in self.probs.iter().enumerate() {
            let _ = writeln!(out, "{s},{p}");
        }
        out
    }
}

/// Outcome of a stationary-distribution computation. A chain can fail to
/// have a unique stationary law (periodic in the strong-bounce limit) or
/// have every distribution stationary (the identity limit); both are
/// reported as `Degenerate`.
#[derive(Debug, Clone, PartialEq)]
pub enum StationaryOutcome {
    Unique(StateDistribution),
    Degenerate,
}

impl StationaryOutcome {
    pub fn unique(self) -> Option<StateDistribution> {
        match self {
            StationaryOutcome::Unique(d) => Some(d),
            StationaryOutcome::Degenerate => None,
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<(), OracleError> {
    if n > cap {
        Err(OracleError::TooLarge { n, cap })
    } else {
        Ok(())
    }
}

/// P(spin i -> +1) for every state, at the given bias and temperature.
fn up_probabilities(
    instance: &IsingInstance,
    bb: BounceBindParam,
    beta: f64,
    i: usize,
) -> Vec<f64> {
    let n = instance.n();
    (0..1usize << n)
        .map(|s| {
            let state = SpinState::from_index(s, n);
            let field = instance.local_field_classical_unchecked(&state, i) as f64
                + bb.value() * state.get(i) as f64;
            (1.0 + (beta * field).tanh()) / 2.0
        })
        .collect()
}

/// Kernel for updating spin i alone: from state s, spin i becomes +1 with
/// probability (1 + tanh(beta * I_BB,i(s))) / 2, all other spins unchanged.
pub fn single_spin_kernel(
    instance: &IsingInstance,
    bb: BounceBindParam,
    beta: f64,
    i: usize,
) -> Result<TransitionMatrix, OracleError> {
    let n = instance.n();
    check_cap(n, KERNEL_CAP)?;
    if i >= n {
        return Err(OracleError::Model(ModelError::IndexOutOfRange { index: i, n }));
    }
    let dim = 1usize << n;
    let p_up = up_probabilities(instance, bb, beta, i);
    let mut data = vec![0.0; dim * dim];
    for s in 0..dim {
        let up = s | 1 << i;
        let down = s & !(1 << i);
        data[s * dim + up] += p_up[s];
        data[s * dim + down] += 1.0 - p_up[s];
    }
    Ok(TransitionMatrix { dim, data })
}

/// Full-sweep kernel: sequential composition K_0 K_1 ... K_{n-1} with K_0
/// acting first (distributions propagate as pi K_0 K_1 ...).
pub fn sweep_kernel(
    instance: &IsingInstance,
    bb: BounceBindParam,
    beta: f64,
) -> Result<TransitionMatrix, OracleError> {
    let n = instance.n();
    check_cap(n, KERNEL_CAP)?;
    let dim = 1usize << n;
    let mut result = TransitionMatrix::identity(dim);
    for i in 0..n {
        // right-multiply by K_i, exploiting its two-entries-per-row shape
        let p_up = up_probabilities(instance, bb, beta, i);
        let mut next = vec![0.0; dim * dim];
        for s in 0..dim {
            let row = result.row(s);
            let out = &mut next[s * dim..(s + 1) * dim];
            for (u, &p) in row.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                out[u | 1 << i] += p * p_up[u];
                out[u & !(1 << i)] += p * (1.0 - p_up[u]);
            }
        }
        result.data = next;
    }
    Ok(result)
}

fn power_iterate(p: &TransitionMatrix, start: Vec<f64>) -> Option<Vec<f64>> {
    let mut current = start;
    let mut previous_avg: Option<Vec<f64>> = None;
    for _ in 0..POWER_MAX_ITERS {
        let next = p.apply_left(&current);
        // window-2 average damps period-2 oscillation
        let avg: Vec<f64> = current
            .iter()
            .zip(&next)
            .map(|(a, b)| (a + b) / 2.0)
            .collect();
        if let Some(prev) = &previous_avg {
            let diff = prev
                .iter()
                .zip(&avg)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if diff < POWER_TOL {
                // accept only if the average is actually a fixed point
                let image = p.apply_left(&avg);
                let residual = image
                    .iter()
                    .zip(&avg)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if residual < POWER_TOL * 10.0 {
                    return Some(avg);
                }
                return None;
            }
        }
        previous_avg = Some(avg);
        current = next;
    }
    None
}

/// Stationary distribution by power iteration from the uniform vector.
/// Reports `Degenerate` when the chain has no unique stationary law: when
/// iteration fails to converge, or when a second start converges to a
/// different fixed point (every distribution is stationary for the
/// identity-limit chain).
pub fn stationary(p: &TransitionMatrix) -> StationaryOutcome {
    let dim = p.dim();
    let from_uniform = power_iterate(p, vec![1.0 / dim as f64; dim]);
    let pi = match from_uniform {
        Some(pi) => pi,
        None => return StationaryOutcome::Degenerate,
    };
    if dim > 1 {
        let mut delta = vec![0.0; dim];
        delta[0] = 1.0;
        match power_iterate(p, delta) {
            Some(other) => {
                let diff = pi
                    .iter()
                    .zip(&other)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if diff > 1e-8 {
                    return StationaryOutcome::Degenerate;
                }
            }
            None => return StationaryOutcome::Degenerate,
        }
    }
    StationaryOutcome::Unique(StateDistribution {
        probs: pi,
        kind: DistributionKind::Stationary,
    })
}

/// t-step evolution: initial * P^t.
pub fn transient(
    p: &TransitionMatrix,
    initial: &StateDistribution,
    t: usize,
) -> StateDistribution {
    let mut probs = initial.probs.clone();
    for _ in 0..t {
        probs = p.apply_left(&probs);
    }
    StateDistribution { probs, kind: DistributionKind::Transient(t) }
}

/// Boltzmann distribution exp(-beta E(s)) / Z by full enumeration. The
/// exponent is shifted by the ground energy for numeric stability. The BB
/// term cancels in the ratio, so this is identical for every B.
pub fn boltzmann(
    instance: &IsingInstance,
    beta: f64,
) -> Result<StateDistribution, OracleError> {
    let n = instance.n();
    check_cap(n, KERNEL_CAP)?;
    let dim = 1usize << n;
    let energies: Vec<i64> = (0..dim)
        .map(|s| instance.energy_unchecked(&SpinState::from_index(s, n)))
        .collect();
    let e_min = *energies.iter().min().expect("non-empty");
    let weights: Vec<f64> = energies
        .iter()
        .map(|&e| (-beta * (e - e_min) as f64).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    Ok(StateDistribution {
        probs: weights.iter().map(|w| w / z).collect(),
        kind: DistributionKind::Boltzmann,
    })
}

/// Exhaustive ground-state search; returns the exact minimum energy and
/// every minimizer. Enumerates in Gray-code order with incremental deltas.
pub fn brute_force_ground(
    instance: &IsingInstance,
) -> Result<(i64, Vec<SpinState>), OracleError> {
    let n = instance.n();
    check_cap(n, BRUTE_FORCE_CAP)?;
    let total = 1usize << n;
    let mut state = SpinState::from_index(0, n);
    let mut energy = instance.energy_unchecked(&state);
    let mut best = energy;
    let mut argmin_indices = vec![0usize];
    let mut gray = 0usize;
    for counter in 1..total {
        let flip_bit = counter.trailing_zeros() as usize;
        energy += instance.flip_delta_unchecked(&state, flip_bit);
        state.flip(flip_bit);
        gray ^= 1 << flip_bit;
        if energy < best {
            best = energy;
            argmin_indices.clear();
            argmin_indices.push(gray);
        } else if energy == best {
            argmin_indices.push(gray);
        }
    }
    argmin_indices.sort_unstable();
    let states = argmin_indices
        .into_iter()
        .map(|s| SpinState::from_index(s, n))
        .collect();
    Ok((best, states))
}
