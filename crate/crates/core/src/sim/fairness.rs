use crate::model::{check_fraction_sum, sample_block_time, MinerSpec, ProtocolParams};
use crate::sim::{check_trials, run_trials};
use crate::stats::Frequency;
use crate::Result;

/// Block-win frequency of each miner when everybody mines compliantly and the
/// first completion wins.
pub fn run_fair_share(
    miners: &[MinerSpec],
    params: &ProtocolParams,
    blocks: u64,
    seed: u64,
) -> Result<Vec<Frequency>> {
    check_trials(blocks)?;
    check_fraction_sum(miners)?;
    let records = run_trials(blocks, seed, |streams, i| -> Result<usize> {
        let mut rng = streams.trial(i);
        let mut best = (0, f64::INFINITY);
        for (m, miner) in miners.iter().enumerate() {
            let t = sample_block_time(&mut rng, miner.hash_fraction, params)?;
            if t < best.1 {
                best = (m, t);
            }
        }
        Ok(best.0)
    });
    let mut wins = vec![Frequency::new(0, blocks); miners.len()];
    for r in records {
        wins[r.outcome?].successes += 1;
    }
    Ok(wins)
}
