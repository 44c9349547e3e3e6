//! Per-trial random streams.
//!
//! Every experiment draws from ChaCha8 streams that share one key, expanded from
//! the 64-bit master seed, and differ only in their stream id. The id of lane `l`
//! of trial `i` is `(i << 8) | l`, so a trial's draws depend on nothing but the
//! master seed and its own index. Trials can therefore run in any order, on any
//! number of threads, and still reproduce bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// Largest trial index that fits the stream-id layout.
pub const MAX_TRIAL_INDEX: u64 = (1 << 56) - 1;

#[derive(Debug, Clone)]
pub struct TrialStreams {
    base: ChaCha8Rng,
    seed: u64,
}

impl TrialStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream for `lane` of trial `trial`. Independent lanes let two racing
    /// processes (for example an attacker and the honest network) consume
    /// randomness without perturbing each other.
    pub fn lane(&self, trial: u64, lane: u8) -> TrialRng {
        assert!(trial <= MAX_TRIAL_INDEX, "trial index {trial} exceeds stream layout");
        let mut rng = self.base.clone();
        rng.set_stream((trial << 8) | u64::from(lane));
        rng.set_word_pos(0);
        rng
    }

    pub fn trial(&self, trial: u64) -> TrialRng {
        self.lane(trial, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_trial_same_draws() {
        let s = TrialStreams::new(7);
        let a: Vec<u64> = s.trial(3).random_iter().take(8).collect();
        let b: Vec<u64> = TrialStreams::new(7).trial(3).random_iter().take(8).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn lanes_and_trials_differ() {
        let s = TrialStreams::new(7);
        let x: u64 = s.lane(3, 0).random();
        let y: u64 = s.lane(3, 1).random();
        let z: u64 = s.lane(4, 0).random();
        let w: u64 = TrialStreams::new(8).lane(3, 0).random();
        assert!(x != y && x != z && x != w);
    }

    #[test]
    fn draw_order_of_other_trials_is_irrelevant() {
        let s = TrialStreams::new(11);
        let mut r5 = s.trial(5);
        let _burn: Vec<u64> = s.trial(4).random_iter().take(1000).collect();
        let first: u64 = r5.random();
        assert_eq!(first, s.trial(5).random::<u64>());
    }
}
