//! Seeded Monte Carlo experiments.
//!
//! Each trial draws only from the streams [`TrialStreams`] derives for its own
//! index, and results are collected in index order before aggregation. Output
//! is therefore identical for a given seed no matter how many worker threads
//! rayon uses.

use rayon::prelude::*;

use crate::streams::TrialStreams;
use crate::{Error, Result};

mod daa_sim;
mod defacto;
mod doublespend;
mod fairness;
mod future_mine;
mod orphan;
mod switch_mine;

pub use daa_sim::{run_daa_experiment, DaaStats};
pub use defacto::{run_defacto_future_mine, DefactoStats};
pub use doublespend::{
    doublespend_trial, run_doublespend, AbandonRule, DoublespendOutcome, DoublespendStats,
};
pub use fairness::run_fair_share;
pub use future_mine::{
    future_mine_trial, future_mine_trials, run_future_mine_attack, FutureMineOutcome,
    FutureMineStats,
};
pub use orphan::{run_orphan_experiment, OrphanStats};
pub use switch_mine::{run_switch_mine, SwitchMineStats};

/// Outcome of one trial, tagged with the index its random streams derive from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord<T> {
    pub trial_index: u64,
    pub outcome: T,
}

pub(crate) fn run_trials<T, F>(trials: u64, seed: u64, trial: F) -> Vec<TrialRecord<T>>
where
    T: Send,
    F: Fn(&TrialStreams, u64) -> T + Sync,
{
    let streams = TrialStreams::new(seed);
    (0..trials)
        .into_par_iter()
        .map(|i| TrialRecord {
            trial_index: i,
            outcome: trial(&streams, i),
        })
        .collect()
}

pub(crate) fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::domain("trials", 0.0, "trials >= 1"));
    }
    Ok(())
}

pub(crate) fn check_open_fraction(name: &'static str, q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(name, q, "0 < q < 1"))
    }
}
