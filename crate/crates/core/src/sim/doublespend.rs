use crate::model::{sample_scaled_block_time, ProtocolParams};
use crate::sim::{check_open_fraction, check_trials, run_trials};
use crate::stats::Frequency;
use crate::streams::TrialStreams;
use crate::Result;

const HONEST: u8 = 0;
const ATTACKER: u8 = 1;

/// When an attacker gives up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbandonRule {
    /// Quit once this many blocks behind.
    pub max_deficit: u32,
    /// Quit once the honest chain holds this many blocks past the fork.
    pub max_honest_blocks: u32,
}

impl Default for AbandonRule {
    fn default() -> Self {
        Self {
            max_deficit: 20,
            max_honest_blocks: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoublespendOutcome {
    pub success: bool,
    pub honest_blocks: u32,
    pub private_blocks: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoublespendStats {
    pub q: f64,
    pub z: u32,
    pub frequency: Frequency,
}

/// One private-chain race at fixed, at-rest difficulty.
///
/// Chains are counted from the fork point. The honest chain starts with the
/// payment block; the private chain starts with the conflicting block, which
/// the attacker prepared in advance. Each chain then grows as a renewal
/// process of the protocol's block-time law for its hash share, with its own
/// clock restarting at its own blocks. The attack succeeds once the honest
/// chain has `z` blocks and the private chain is at least one block longer.
pub fn doublespend_trial(
    streams: &TrialStreams,
    index: u64,
    q: f64,
    z: u32,
    params: &ProtocolParams,
    abandon: AbandonRule,
) -> DoublespendOutcome {
    let mut honest_rng = streams.lane(index, HONEST);
    let mut attacker_rng = streams.lane(index, ATTACKER);
    let mut honest = 0u32;
    let mut private = 1u32;
    let mut next_honest = sample_scaled_block_time(&mut honest_rng, 1.0 - q, params);
    let mut next_private = sample_scaled_block_time(&mut attacker_rng, q, params);
    loop {
        if honest >= z && private > honest {
            return DoublespendOutcome {
                success: true,
                honest_blocks: honest,
                private_blocks: private,
            };
        }
        if honest + 1 >= private + abandon.max_deficit || honest >= abandon.max_honest_blocks {
            return DoublespendOutcome {
                success: false,
                honest_blocks: honest,
                private_blocks: private,
            };
        }
        if next_honest <= next_private {
            honest += 1;
            next_honest += sample_scaled_block_time(&mut honest_rng, 1.0 - q, params);
        } else {
            private += 1;
            next_private += sample_scaled_block_time(&mut attacker_rng, q, params);
        }
    }
}

pub fn run_doublespend(
    q: f64,
    z: u32,
    params: &ProtocolParams,
    trials: u64,
    seed: u64,
    abandon: AbandonRule,
) -> Result<DoublespendStats> {
    check_open_fraction("q", q)?;
    check_trials(trials)?;
    let records = run_trials(trials, seed, |s, i| {
        doublespend_trial(s, i, q, z, params, abandon)
    });
    Ok(DoublespendStats {
        q,
        z,
        frequency: Frequency::from_flags(records.iter().map(|r| r.outcome.success)),
    })
}
