use crate::analysis::ideal_block_time_percentiles;
use crate::daa::{adjust, ChainState};
use crate::model::{sample_scaled_block_time, Protocol, ProtocolParams};
use crate::sim::{check_trials, run_trials};
use crate::stats::Percentiles;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DaaStats {
    pub protocol: Protocol,
    pub trials: u64,
    /// Percentiles across trials of the block time at each block index.
    pub per_block: Vec<Percentiles>,
    /// Median over block indices of each per-block statistic.
    pub summary: Percentiles,
    /// Exponential(target_time) percentiles for comparison.
    pub ideal: Percentiles,
}

/// Closed-loop difficulty adjustment. Total hash rate is one hash per second
/// and every trial starts at the at-rest difficulty `D = target_time`; a block
/// mined at difficulty `D` takes `Weibull(k, (T/D)·a)` and the controller of
/// `protocol` retargets after every block from the last `window` times.
pub fn run_daa_experiment(
    protocol: Protocol,
    params: &ProtocolParams,
    blocks_per_trial: usize,
    trials: u64,
    window: usize,
    seed: u64,
) -> Result<DaaStats> {
    check_trials(trials)?;
    if blocks_per_trial == 0 {
        return Err(Error::domain("blocks_per_trial", 0.0, ">= 1"));
    }
    let start = ChainState::at_rest(params, window)?;
    let records = run_trials(trials, seed, |streams, i| -> Result<Vec<f64>> {
        let mut rng = streams.trial(i);
        let mut state = start.clone();
        let mut times = Vec::with_capacity(blocks_per_trial);
        for _ in 0..blocks_per_trial {
            let multiple = params.target_time() / state.difficulty();
            let t = sample_scaled_block_time(&mut rng, multiple, params);
            times.push(t);
            state = state.record_block(t)?;
            let next = adjust(protocol, &state, params)?;
            state = state.with_difficulty(next)?;
        }
        Ok(times)
    });
    let runs = records
        .into_iter()
        .map(|r| r.outcome)
        .collect::<Result<Vec<_>>>()?;
    let per_block: Vec<Percentiles> = (0..blocks_per_trial)
        .map(|b| {
            let mut column: Vec<f64> = runs.iter().map(|run| run[b]).collect();
            Percentiles::from_samples(&mut column)
        })
        .collect();
    Ok(DaaStats {
        protocol,
        trials,
        summary: Percentiles::median_of(&per_block),
        per_block,
        ideal: ideal_block_time_percentiles(params),
    })
}
