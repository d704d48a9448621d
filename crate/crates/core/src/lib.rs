//! Data-assimilated reinforcement control of a chaotic flow.
//!
//! Building blocks, bottom to top:
//!
//! - [`ks`] — pseudo-spectral Kuramoto-Sivashinsky environment with Gaussian
//!   actuation, a sensor/observation model, and the control reward.
//! - [`reservoir`] — control-aware echo state network surrogate: random
//!   sparse weights, ridge-trained quadratic readout, closed-loop rollout.
//! - [`enkf`] — stochastic ensemble Kalman filter over reservoir states in
//!   the augmented-state formulation.
//! - [`neural`] / [`ddpg`] — dense MLP substrate with reverse-mode gradients
//!   and the deterministic-policy-gradient agent built on it.
//! - [`pipeline`] — experiment protocol: data collection, surrogate
//!   training, model-free and assimilated training loops, evaluation.
//! - [`config`] / [`cli`] — run configuration with validated defaults and
//!   the command-line entry points.

pub mod cli;
pub mod config;
pub mod ddpg;
pub mod enkf;
pub mod error;
pub mod io;
pub mod ks;
pub mod linalg;
pub mod neural;
pub mod pipeline;
pub mod reservoir;

pub use error::{DarcError, Result};
