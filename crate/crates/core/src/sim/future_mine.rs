use crate::analysis::{attacker_expected_time, future_mine_bound, AttackBound};
use crate::model::{
    sample_block_time_after, sample_exponential, sample_scaled_block_time, ProtocolParams,
};
use crate::sim::{check_open_fraction, check_trials, run_trials, TrialRecord};
use crate::stats::Frequency;
use crate::streams::TrialStreams;
use crate::{Error, Result};

const ATTACKER: u8 = 0;
const COMPLIANT: u8 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FutureMineOutcome {
    pub attacker_wins: bool,
    /// Time the winning block becomes public.
    pub block_time: f64,
    /// The attacker found its future-target block before `t*`.
    pub found_early: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FutureMineStats {
    pub q: f64,
    pub t_star: f64,
    pub frequency: Frequency,
    pub bound: AttackBound,
}

/// One future-mining race.
///
/// The attacker mines at the fixed sub-target `g(t*)` (exponential time) while
/// the others mine compliantly (`Weibull(k, (1-q)·a)`). A block found before
/// `t*` cannot be released until `t*`, so any compliant block before `t*`
/// wins. If nobody finds a block by `t*` the attacker mines compliantly too
/// and the earlier completion wins.
pub fn future_mine_trial(
    streams: &TrialStreams,
    index: u64,
    q: f64,
    t_star: f64,
    attacker_mean: f64,
    params: &ProtocolParams,
) -> FutureMineOutcome {
    let mut attacker = streams.lane(index, ATTACKER);
    let mut compliant = streams.lane(index, COMPLIANT);
    let t_m = sample_scaled_block_time(&mut compliant, 1.0 - q, params);
    let t_a = sample_exponential(&mut attacker, attacker_mean);
    let found_early = t_a < t_star;
    let (attacker_wins, block_time) = if t_m < t_star {
        (false, t_m)
    } else if found_early {
        (true, t_star)
    } else {
        let t_a = sample_block_time_after(&mut attacker, t_star, q, params);
        if t_a < t_m {
            (true, t_a)
        } else {
            (false, t_m)
        }
    };
    FutureMineOutcome {
        attacker_wins,
        block_time,
        found_early,
    }
}

fn check_args(q: f64, t_star: f64, trials: u64) -> Result<()> {
    check_open_fraction("q", q)?;
    if !(t_star > 0.0 && t_star.is_finite()) {
        return Err(Error::domain("t_star", t_star, "finite and > 0"));
    }
    check_trials(trials)
}

pub fn future_mine_trials(
    q: f64,
    t_star: f64,
    params: &ProtocolParams,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrialRecord<FutureMineOutcome>>> {
    check_args(q, t_star, trials)?;
    let mean = attacker_expected_time(q, t_star, params)?;
    Ok(run_trials(trials, seed, |s, i| {
        future_mine_trial(s, i, q, t_star, mean, params)
    }))
}

pub fn run_future_mine_attack(
    q: f64,
    t_star: f64,
    params: &ProtocolParams,
    trials: u64,
    seed: u64,
) -> Result<FutureMineStats> {
    let records = future_mine_trials(q, t_star, params, trials, seed)?;
    Ok(FutureMineStats {
        q,
        t_star,
        frequency: Frequency::from_flags(records.iter().map(|r| r.outcome.attacker_wins)),
        bound: future_mine_bound(q, t_star, params)?,
    })
}
