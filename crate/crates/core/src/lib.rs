//! Simulation and analysis toolkit for dynamic-target proof-of-work.
//!
//! The crate models three families of block production:
//!
//! * conventional fixed-target mining (Bitcoin style), where block times are
//!   exponential,
//! * real-time targeting, where the mining target grows with the time since the
//!   last block and block times follow a Weibull law with shape `k`,
//! * Radium, which keeps the real-time target and additionally scales the block
//!   reward with the sub-difficulty so that every hash carries the same expected
//!   payout.
//!
//! Hash space is normalized to 1: a [`NormalizedTarget`] is the fraction of the
//! hash space that meets the target and difficulty is its reciprocal.
//!
//! Modules:
//!
//! * [`model`]: target algebra, the Weibull block-time law, rewards and the
//!   probability integral transform.
//! * [`daa`]: difficulty adjustment rules.
//! * [`analysis`]: closed-form evaluators (attack bounds, equilibria, variance).
//! * [`sim`]: seeded, parallel Monte Carlo experiments.
//! * [`stats`]: percentiles, binomial frequencies and the Kolmogorov-Smirnov test.
//! * [`streams`]: per-trial random stream derivation.

pub mod analysis;
pub mod daa;
mod error;
pub mod model;
pub mod sim;
pub mod stats;
pub mod streams;

pub use error::{Error, Result};
pub use model::{
    MinerSpec, NormalizedTarget, Protocol, ProtocolParams, Strategy, TIMESTAMP_GRANULARITY,
};
pub use daa::ChainState;
pub use stats::{Frequency, Percentiles};
pub use streams::{TrialRng, TrialStreams};
