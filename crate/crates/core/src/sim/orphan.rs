use rayon::prelude::*;

use crate::model::{sample_scaled_block_time, ProtocolParams};
use crate::stats::Frequency;
use crate::streams::TrialStreams;
use crate::{Error, Result};

/// Blocks simulated from one random stream.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrphanStats {
    pub orphan_window: f64,
    pub orphans: Frequency,
}

/// Two equal compliant halves of the network race for every block at the
/// at-rest difficulty; the block is orphan-prone when the two completion
/// times fall within `orphan_window` seconds of each other.
pub fn run_orphan_experiment(
    params: &ProtocolParams,
    blocks: u64,
    orphan_window: f64,
    seed: u64,
) -> Result<OrphanStats> {
    if blocks == 0 {
        return Err(Error::domain("blocks", 0.0, "blocks >= 1"));
    }
    if !(orphan_window >= 0.0 && orphan_window.is_finite()) {
        return Err(Error::domain("orphan_window", orphan_window, "finite and >= 0"));
    }
    let streams = TrialStreams::new(seed);
    let chunks = blocks.div_ceil(CHUNK);
    let orphans: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = streams.trial(c);
            let n = CHUNK.min(blocks - c * CHUNK);
            (0..n)
                .filter(|_| {
                    let a = sample_scaled_block_time(&mut rng, 0.5, params);
                    let b = sample_scaled_block_time(&mut rng, 0.5, params);
                    (a - b).abs() < orphan_window
                })
                .count() as u64
        })
        .sum();
    Ok(OrphanStats {
        orphan_window,
        orphans: Frequency::new(orphans, blocks),
    })
}
