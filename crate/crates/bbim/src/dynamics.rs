//! Annealed sequential single-spin-flip dynamics with the Bounce-Bind
//! update rule.
//!
//! A trial owns its spin state and RNG stream; trials are embarrassingly
//! parallel and bit-identical for a given per-trial seed regardless of how
//! the ensemble is scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{BounceBindParam, IsingInstance, ModelError, SpinState};

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("config parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// 32-bit LFSR with XNOR feedback, taps at registers 32, 22, 2, 1.
///
/// Registers are numbered 1..=32 with register 32 the last stage; the
/// feedback bit is shifted into register 1. With XNOR feedback the all-ones
/// word is the lockup state and all-zeros is valid; the period is 2^32 - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lfsr32 {
    register: u32,
}

impl Lfsr32 {
    pub fn new(seed: u32) -> Self {
        // avoid the XNOR lockup word
        let register = if seed == u32::MAX { 0 } else { seed };
        Self { register }
    }

    pub fn state(&self) -> u32 {
        self.register
    }

    /// Shift once and return the new register value.
    pub fn step(&mut self) -> u32 {
        let r = self.register;
        let bit = |b: u32| r >> (b - 1) & 1;
        let feedback = !(bit(32) ^ bit(22) ^ bit(2) ^ bit(1)) & 1;
        self.register = (r << 1) | feedback;
        self.register
    }

    /// Uniform draw on (-1, 1) from the low 24 bits of the next word.
    pub fn next_unit(&mut self) -> f64 {
        let u24 = self.step() & 0x00ff_ffff;
        (2 * u24 + 1) as f64 / (1 << 24) as f64 - 1.0
    }
}

/// Source of the uniform (-1, 1) draws consumed by the update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RngMode {
    /// ChaCha-based portable stream.
    Portable,
    /// Bit-faithful emulation of the hardware LFSR.
    Lfsr32,
}

#[derive(Debug, Clone)]
enum Sampler {
    Portable(ChaCha8Rng),
    Lfsr(Lfsr32),
}

impl Sampler {
    fn new(mode: RngMode, seed: u64) -> Self {
        match mode {
            RngMode::Portable => Sampler::Portable(ChaCha8Rng::seed_from_u64(seed)),
            // fold the 64-bit seed onto the 32-bit register
            RngMode::Lfsr32 => Sampler::Lfsr(Lfsr32::new((seed ^ (seed >> 32)) as u32)),
        }
    }

    /// Uniform on (-1, 1); both modes use the same 24-bit lattice so the
    /// draw is never exactly +-1.
    fn next_unit(&mut self) -> f64 {
        match self {
            Sampler::Portable(rng) => {
                let u24 = rng.gen::<u32>() & 0x00ff_ffff;
                (2 * u24 + 1) as f64 / (1 << 24) as f64 - 1.0
            }
            Sampler::Lfsr(lfsr) => lfsr.next_unit(),
        }
    }
}

/// Linear inverse-temperature ramp; beta holds for `sweeps_per_step`
/// sweeps, then increments by `beta_step`, capped at `beta_max`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AnnealSchedule {
    pub beta0: f64,
    pub beta_step: f64,
    pub beta_max: f64,
    pub sweeps_per_step: usize,
}

impl AnnealSchedule {
    /// The benchmark ramp: 0.125 to 4 in steps of 0.125, dwell time chosen
    /// so one pass fits the given sweep budget (minimum one sweep per step).
    pub fn ramp(total_sweeps: usize) -> Self {
        let steps = 32;
        Self {
            beta0: 0.125,
            beta_step: 0.125,
            beta_max: 4.0,
            sweeps_per_step: (total_sweeps / steps).max(1),
        }
    }

    /// Constant temperature (no annealing).
    pub fn fixed(beta: f64) -> Self {
        Self { beta0: beta, beta_step: 0.0, beta_max: beta, sweeps_per_step: 1 }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.beta0 > 0.0) {
            return Err(DynamicsError::Config("beta0 must be positive".into()));
        }
        if self.beta_step < 0.0 {
            return Err(DynamicsError::Config("beta_step must be non-negative".into()));
        }
        if self.beta_max < self.beta0 {
            return Err(DynamicsError::Config("beta_max must be >= beta0".into()));
        }
        if self.sweeps_per_step == 0 {
            return Err(DynamicsError::Config("sweeps_per_step must be positive".into()));
        }
        Ok(())
    }

    pub fn num_steps(&self) -> usize {
        if self.beta_step > 0.0 {
            ((self.beta_max - self.beta0) / self.beta_step).floor() as usize + 1
        } else {
            1
        }
    }

    /// Sweeps in one full beta0 -> beta_max pass.
    pub fn sweeps_per_pass(&self) -> usize {
        self.num_steps() * self.sweeps_per_step
    }

    /// Beta for the given sweep index. The schedule restarts from beta0
    /// when the index runs past one full pass.
    pub fn beta_at(&self, sweep: usize) -> f64 {
        let pos = sweep % self.sweeps_per_pass();
        let step = pos / self.sweeps_per_step;
        (self.beta0 + step as f64 * self.beta_step).min(self.beta_max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsConfig {
    pub bb: BounceBindParam,
    pub schedule: AnnealSchedule,
    pub max_sweeps: usize,
    pub rng_mode: RngMode,
    pub seed: u64,
    /// Hitting threshold: terminate as soon as best_energy <= target.
    pub target_energy: Option<i64>,
    /// Replace the double-precision tanh with the 64-entry fixed-point
    /// lookup table (an approximation of the unspecified hardware tanh).
    pub tanh_lut: bool,
}

impl DynamicsConfig {
    pub fn new(bb: BounceBindParam, schedule: AnnealSchedule, max_sweeps: usize) -> Self {
        Self {
            bb,
            schedule,
            max_sweeps,
            rng_mode: RngMode::Portable,
            seed: 0,
            target_energy: None,
            tanh_lut: false,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        self.schedule.validate()?;
        if self.max_sweeps == 0 {
            return Err(DynamicsError::Config("max_sweeps must be positive".into()));
        }
        Ok(())
    }

    /// Apply `key = value` overrides from a declarative config file.
    /// Blank lines and `#` comments are ignored.
    pub fn apply_kv(&mut self, text: &str) -> Result<(), DynamicsError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(DynamicsError::Parse {
                line,
                msg: "expected key = value".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| DynamicsError::Parse { line, msg };
            let f64_of = |v: &str| {
                v.parse::<f64>().map_err(|_| bad(format!("invalid number '{v}'")))
            };
            match key {
                "bb" => self.bb = BounceBindParam::free(f64_of(value)?),
                "bb_quantized" => {
                    self.bb = BounceBindParam::quantized(f64_of(value)?)
                        .map_err(|e| bad(e.to_string()))?
                }
                "beta0" => self.schedule.beta0 = f64_of(value)?,
                "beta_step" => self.schedule.beta_step = f64_of(value)?,
                "beta_max" => self.schedule.beta_max = f64_of(value)?,
                "sweeps_per_step" => {
                    self.schedule.sweeps_per_step =
                        value.parse().map_err(|_| bad(format!("invalid count '{value}'")))?
                }
                "max_sweeps" => {
                    self.max_sweeps =
                        value.parse().map_err(|_| bad(format!("invalid count '{value}'")))?
                }
                "seed" => {
                    self.seed =
                        value.parse().map_err(|_| bad(format!("invalid seed '{value}'")))?
                }
                "target_energy" => {
                    self.target_energy = Some(
                        value.parse().map_err(|_| bad(format!("invalid energy '{value}'")))?,
                    )
                }
                "rng_mode" => {
                    self.rng_mode = match value {
                        "portable" => RngMode::Portable,
                        "lfsr32" => RngMode::Lfsr32,
                        other => return Err(bad(format!("unknown rng mode '{other}'"))),
                    }
                }
                "tanh_lut" => {
                    self.tanh_lut =
                        value.parse().map_err(|_| bad(format!("invalid bool '{value}'")))?
                }
                other => return Err(bad(format!("unknown key '{other}'"))),
            }
        }
        Ok(())
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub success: bool,
    pub sweeps_used: usize,
    /// n * sweeps_used for sequential full sweeps.
    pub samples_used: usize,
    pub best_energy: i64,
    pub best_state: SpinState,
    pub seed: u64,
}

impl RunRecord {
    /// CSV stream: `trial,seed,success,sweeps,samples,best_energy`.
    pub fn write_csv(records: &[RunRecord]) -> String {
        let mut out = String::from("trial,seed,success,sweeps,samples,best_energy\n");
        for (trial, r) in records.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                trial, r.seed, r.success, r.sweeps_used, r.samples_used, r.best_energy
            ));
        }
        out
    }
}

const TANH_LUT_SIZE: usize = 64;
const TANH_LUT_RANGE: f64 = 4.0;

/// tanh via a 64-entry table over |x| in [0, 4), outputs quantized to 8
/// fractional bits. Saturates outside the table range.
fn tanh_lut(x: f64) -> f64 {
    let mag = x.abs();
    let v = if mag >= TANH_LUT_RANGE {
        1.0
    } else {
        let idx = (mag / TANH_LUT_RANGE * TANH_LUT_SIZE as f64) as usize;
        let mid = (idx as f64 + 0.5) * TANH_LUT_RANGE / TANH_LUT_SIZE as f64;
        (mid.tanh() * 256.0).round() / 256.0
    };
    v.copysign(x)
}

fn activation(x: f64, lut: bool) -> f64 {
    if lut {
        tanh_lut(x)
    } else {
        x.tanh()
    }
}

/// One Bounce-Bind spin update, written into `state` immediately:
/// `m_i <- +1 if tanh(beta * I_BB,i) >= u else -1`, u uniform on (-1, 1).
fn update_spin(
    instance: &IsingInstance,
    state: &mut SpinState,
    bb: BounceBindParam,
    beta: f64,
    i: usize,
    sampler: &mut Sampler,
    lut: bool,
) {
    let field = instance.local_field_classical_unchecked(state, i) as f64
        + bb.value() * state.get(i) as f64;
    let u = sampler.next_unit();
    let next = if activation(beta * field, lut) >= u { 1 } else { -1 };
    state.set(i, next);
}

/// One sequential ascending sweep; each update sees the already-updated
/// values of earlier spins. Maintains `energy` incrementally.
fn sweep(
    instance: &IsingInstance,
    state: &mut SpinState,
    bb: BounceBindParam,
    beta: f64,
    sampler: &mut Sampler,
    lut: bool,
    energy: &mut i64,
) {
    for i in 0..instance.n() {
        let before = state.get(i);
        update_spin(instance, state, bb, beta, i, sampler, lut);
        if state.get(i) != before {
            // flip_delta relative to the pre-update value
            state.set(i, before);
            *energy += instance.flip_delta_unchecked(state, i);
            state.set(i, -before);
        }
    }
}

/// One annealing pass with hitting-time termination: runs sweeps while
/// advancing beta per schedule, tracks the best energy seen at sweep
/// boundaries, and stops at the first attainment of `target_energy`.
pub fn run_trial(
    instance: &IsingInstance,
    config: &DynamicsConfig,
) -> Result<RunRecord, DynamicsError> {
    config.validate()?;
    let mut sampler = Sampler::new(config.rng_mode, config.seed);
    let n = instance.n();
    // fair-coin initialization from the trial's own stream
    let spins: Vec<i8> = (0..n)
        .map(|_| if sampler.next_unit() >= 0.0 { 1 } else { -1 })
        .collect();
    let mut state = SpinState::new(spins).expect("coin spins are valid");
    let mut energy = instance.energy(&state)?;
    let mut best_energy = energy;
    let mut best_state = state.clone();
    let mut sweeps_used = 0;
    let hit = |best: i64| config.target_energy.map_or(false, |t| best <= t);
    if !hit(best_energy) {
        for sweep_idx in 0..config.max_sweeps {
            let beta = config.schedule.beta_at(sweep_idx);
            sweep(
                instance,
                &mut state,
                config.bb,
                beta,
                &mut sampler,
                config.tanh_lut,
                &mut energy,
            );
            sweeps_used = sweep_idx + 1;
            if sweeps_used % 1024 == 0 {
                // exact arithmetic: accumulated deltas cannot drift
                debug_assert_eq!(energy, instance.energy(&state)?);
            }
            if energy < best_energy {
                best_energy = energy;
                best_state = state.clone();
            }
            if hit(best_energy) {
                break;
            }
        }
    }
    Ok(RunRecord {
        success: hit(best_energy),
        sweeps_used,
        samples_used: n * sweeps_used,
        best_energy,
        best_state,
        seed: config.seed,
    })
}

/// State-visit histogram over `sweeps` no-annealing sweeps at fixed beta,
/// indexed by the binary state encoding. One count per sweep boundary.
pub fn visit_counts(
    instance: &IsingInstance,
    bb: BounceBindParam,
    beta: f64,
    sweeps: usize,
    seed: u64,
    rng_mode: RngMode,
) -> Result<Vec<u64>, DynamicsError> {
    let n = instance.n();
    if n > 20 {
        return Err(DynamicsError::Config(format!(
            "visit histogram needs n <= 20, got {n}"
        )));
    }
    let mut sampler = Sampler::new(rng_mode, seed);
    let spins: Vec<i8> = (0..n)
        .map(|_| if sampler.next_unit() >= 0.0 { 1 } else { -1 })
        .collect();
    let mut state = SpinState::new(spins).expect("coin spins are valid");
    let mut counts = vec![0u64; 1 << n];
    for _ in 0..sweeps {
        for i in 0..n {
            update_spin(instance, &mut state, bb, beta, i, &mut sampler, false);
        }
        counts[state.to_index()] += 1;
    }
    Ok(counts)
}

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
pub fn split_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent repetitions of [`run_trial`] with seeds split from
/// `config.seed`. Records are ordered by trial index and bit-identical for
/// any `parallelism` (0 means the global thread pool).
pub fn run_ensemble(
    instance: &IsingInstance,
    config: &DynamicsConfig,
    trials: usize,
    parallelism: usize,
) -> Result<Vec<RunRecord>, DynamicsError> {
    config.validate()?;
    if trials == 0 {
        return Err(DynamicsError::Config("trials must be >= 1".into()));
    }
    let trial_config = |t: usize| DynamicsConfig {
        seed: split_seed(config.seed, t as u64),
        ..config.clone()
    };
    match parallelism {
        1 => (0..trials).map(|t| run_trial(instance, &trial_config(t))).collect(),
        0 => (0..trials)
            .into_par_iter()
            .map(|t| run_trial(instance, &trial_config(t)))
            .collect(),
        threads => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| DynamicsError::Config(e.to_string()))?;
            pool.install(|| {
                (0..trials)
                    .into_par_iter()
                    .map(|t| run_trial(instance, &trial_config(t)))
                    .collect()
            })
        }
    }
}
