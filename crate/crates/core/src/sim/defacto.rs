use rand::Rng;

use crate::analysis::attacker_expected_time;
use crate::model::{
    check_fraction_sum, sample_block_time_after, sample_exponential, MinerSpec, ProtocolParams,
    Strategy,
};
use crate::sim::{check_trials, run_trials};
use crate::stats::{Frequency, Percentiles};
use crate::{Error, Result};

/// Lane used for tie-breaking coin flips; miners use lanes `0..n`.
const TIE_LANE: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct DefactoStats {
    pub tau: f64,
    pub miners: Vec<MinerSpec>,
    pub preemptor: Option<usize>,
    pub block_time: Percentiles,
    /// Trials in which two or more miners held a block at `τ`.
    pub races: Frequency,
    /// Trials whose block was future mined (found before `τ`): the share of
    /// blocks produced by future mining.
    pub future_mined: Frequency,
    /// Blocks won by each miner over all trials.
    pub wins: Vec<Frequency>,
    /// Blocks won by each miner over the race trials only.
    pub race_wins: Vec<Frequency>,
}

struct Outcome {
    winner: usize,
    block_time: f64,
    future_mined: bool,
    race: bool,
}

/// Equilibrium future mining: every miner mines at the fixed sub-target
/// `g(τ)` until `τ` and compliantly afterwards. Blocks found before `τ` are
/// released at `τ`; simultaneous releases are settled by a fair draw among the
/// holders, except that `preemptor` (mining to `τ - ε`, `ε → 0`) wins every
/// race it takes part in.
pub fn run_defacto_future_mine(
    tau: f64,
    miner_fractions: &[f64],
    preemptor: Option<usize>,
    params: &ProtocolParams,
    trials: u64,
    seed: u64,
) -> Result<DefactoStats> {
    check_trials(trials)?;
    if miner_fractions.is_empty() || miner_fractions.len() >= TIE_LANE as usize {
        return Err(Error::domain(
            "miners",
            miner_fractions.len() as f64,
            "1..=254 miners",
        ));
    }
    let miners = miner_fractions
        .iter()
        .map(|&q| MinerSpec::new(q, Strategy::Defacto { tau }))
        .collect::<Result<Vec<_>>>()?;
    check_fraction_sum(&miners)?;
    if let Some(p) = preemptor {
        if p >= miners.len() {
            return Err(Error::domain("preemptor", p as f64, "index of a listed miner"));
        }
    }
    let means = miners
        .iter()
        .map(|m| attacker_expected_time(m.hash_fraction, tau, params))
        .collect::<Result<Vec<_>>>()?;

    let records = run_trials(trials, seed, |streams, i| {
        let mut holders = Vec::new();
        let mut lanes: Vec<_> = (0..miners.len())
            .map(|m| streams.lane(i, m as u8))
            .collect();
        for (m, rng) in lanes.iter_mut().enumerate() {
            if sample_exponential(rng, means[m]) < tau {
                holders.push(m);
            }
        }
        if !holders.is_empty() {
            let winner = match preemptor.filter(|p| holders.contains(p)) {
                Some(p) => p,
                None => {
                    let pick = streams.lane(i, TIE_LANE).random_range(0..holders.len());
                    holders[pick]
                }
            };
            return Outcome {
                winner,
                block_time: tau,
                future_mined: true,
                race: holders.len() > 1,
            };
        }
        let (winner, block_time) = lanes
            .iter_mut()
            .enumerate()
            .map(|(m, rng)| {
                (
                    m,
                    sample_block_time_after(rng, tau, miners[m].hash_fraction, params),
                )
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one miner");
        Outcome {
            winner,
            block_time,
            future_mined: false,
            race: false,
        }
    });

    let n = miners.len();
    let mut wins = vec![Frequency::new(0, trials); n];
    let race_count = records.iter().filter(|r| r.outcome.race).count() as u64;
    let mut race_wins = vec![Frequency::new(0, race_count); n];
    for r in &records {
        wins[r.outcome.winner].successes += 1;
        if r.outcome.race {
            race_wins[r.outcome.winner].successes += 1;
        }
    }
    let mut times: Vec<f64> = records.iter().map(|r| r.outcome.block_time).collect();
    Ok(DefactoStats {
        tau,
        miners,
        preemptor,
        block_time: Percentiles::from_samples(&mut times),
        races: Frequency::from_flags(records.iter().map(|r| r.outcome.race)),
        future_mined: Frequency::from_flags(records.iter().map(|r| r.outcome.future_mined)),
        wins,
        race_wins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_miner_never_races() {
        let p = ProtocolParams::default();
        let s = run_defacto_future_mine(600.0, &[1.0], None, &p, 5_000, 1).unwrap();
        assert_eq!(s.races.successes, 0);
        assert_eq!(s.wins[0].successes, 5_000);
    }

    #[test]
    fn two_equal_miners_race_rate_matches_closed_form() {
        let p = ProtocolParams::default();
        let trials = 100_000;
        let s = run_defacto_future_mine(600.0, &[0.5, 0.5], None, &p, trials, 2).unwrap();
        let mean = attacker_expected_time(0.5, 600.0, &p).unwrap();
        let each = 1.0 - (-600.0 / mean).exp();
        let expected = each * each;
        let sigma = s.races.sigma_at(expected);
        assert!(
            (s.races.rate() - expected).abs() <= 2.0 * sigma,
            "race rate {} vs {expected}",
            s.races.rate()
        );
        // Without preemption equal miners split the blocks evenly.
        let w = s.wins[0];
        assert!((w.rate() - 0.5).abs() < 4.0 * w.sigma_at(0.5));
    }

    #[test]
    fn preemptor_beats_fair_share() {
        let p = ProtocolParams::default();
        let s = run_defacto_future_mine(600.0, &[0.3, 0.7], Some(0), &p, 100_000, 3).unwrap();
        let race = s.race_wins[0];
        assert_eq!(race.successes, race.trials);
        assert!(race.rate() > 0.3);
        let all = s.wins[0];
        assert!(all.rate() > 0.3 + 3.0 * all.sigma_at(0.3));
    }

    #[test]
    fn future_mined_share_is_reported() {
        let p = ProtocolParams::default();
        let s = run_defacto_future_mine(600.0, &[0.5, 0.5], None, &p, 20_000, 4).unwrap();
        // P(some miner finds before τ) = 1 - exp(-τ/E[T]) for the pooled
        // fixed-target rate, E[T] = T/(π/2) at τ = T.
        let expected = 1.0 - (-std::f64::consts::PI / 2.0).exp();
        let f = s.future_mined;
        assert!((f.rate() - expected).abs() < 4.0 * f.sigma_at(expected));
        assert!(s.block_time.p5 <= s.block_time.median);
        assert!(s.block_time.median <= s.block_time.p95);
        assert!(s.block_time.p5 >= 600.0);
    }

    #[test]
    fn rejects_bad_fractions() {
        let p = ProtocolParams::default();
        assert!(matches!(
            run_defacto_future_mine(600.0, &[0.5, 0.4], None, &p, 10, 1),
            Err(Error::FractionSum { .. })
        ));
        assert!(run_defacto_future_mine(0.0, &[1.0], None, &p, 10, 1).is_err());
        assert!(run_defacto_future_mine(600.0, &[1.0], Some(1), &p, 10, 1).is_err());
    }
}
