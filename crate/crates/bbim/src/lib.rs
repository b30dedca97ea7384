//! Bounce-Bind Ising machine.
//!
//! Annealed sequential single-spin-flip dynamics on second- and third-order
//! Ising models with a tunable persistence bias `B` (negative values push
//! spins to flip, positive values push them to persist, and the energy
//! landscape is unchanged either way), together with exact small-instance
//! Markov-chain analysis, benchmark problem generators (dense MAX-CUT,
//! 3-regular 3-XORSAT), time-to-solution metrics, and reference baselines.

pub mod baselines;
pub mod dynamics;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod problems;

pub use dynamics::{AnnealSchedule, DynamicsConfig, RngMode, RunRecord};
pub use model::{BounceBindParam, IsingInstance, SpinState};
