//! Closed-form evaluators.

use std::f64::consts::PI;

use crate::model::{
    exponential_quantile, subtarget, target_time_boost, weibull_survival, NormalizedTarget,
    ProtocolParams,
};
use crate::stats::Percentiles;
use crate::{Error, Result};

/// Lower bound on the success probability of a future-mining attacker, with
/// its two factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackBound {
    pub q: f64,
    pub t_star: f64,
    /// `P(T_A < t*)·P(T_M > t*)`.
    pub bound: f64,
    pub attacker_mean_time: f64,
    /// `P(T_M > t*)` for compliant miners holding `1 - q`.
    pub compliant_survival: f64,
}

impl AttackBound {
    pub fn attacker_cdf(&self) -> f64 {
        -(-self.t_star / self.attacker_mean_time).exp_m1()
    }
}

fn check_attack_args(q: f64, t_star: f64) -> Result<()> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain("q", q, "0 < q <= 1"));
    }
    if !(t_star >= 0.0 && t_star.is_finite()) {
        return Err(Error::domain("t_star", t_star, "finite and >= 0"));
    }
    Ok(())
}

/// Mean time for a miner with fraction `q` mining at the fixed sub-target
/// `g(t*)`: `(G / (q·g(t*)))·T`.
pub fn attacker_expected_time(q: f64, t_star: f64, params: &ProtocolParams) -> Result<f64> {
    check_attack_args(q, t_star)?;
    let ratio = params.rate_ratio(t_star);
    if ratio == 0.0 {
        return Err(Error::InfiniteDifficulty { t: t_star });
    }
    Ok(params.target_time() / (q * ratio))
}

pub fn future_mine_bound(q: f64, t_star: f64, params: &ProtocolParams) -> Result<AttackBound> {
    let attacker_mean_time = attacker_expected_time(q, t_star, params)?;
    let compliant_survival = if q == 1.0 {
        1.0
    } else {
        weibull_survival(t_star, params.k(), (1.0 - q) * params.a())
    };
    let attacker_cdf = -(-t_star / attacker_mean_time).exp_m1();
    Ok(AttackBound {
        q,
        t_star,
        bound: attacker_cdf * compliant_survival,
        attacker_mean_time,
        compliant_survival,
    })
}

/// Per-hash reward rate when future mining to `t`: `R(t) = C·g(t)`.
pub fn future_mining_reward_rate(
    t: f64,
    base: NormalizedTarget,
    params: &ProtocolParams,
) -> Result<f64> {
    Ok(params.base_reward() * subtarget(base, t, params)?)
}

/// Elapsed time at which the sub-target reaches the whole hash space.
pub fn clamp_time(base: NormalizedTarget, params: &ProtocolParams) -> Result<f64> {
    let k = params.k();
    if k <= 1.0 {
        return Err(Error::domain("k", k, "k > 1 (the sub-target is constant at k = 1)"));
    }
    Ok(params.target_time()
        * (1.0 / (base.fraction() * target_time_boost(k))).powf(1.0 / (k - 1.0)))
}

const TAU_TOLERANCE: f64 = 1e-6;

/// Equilibrium initial future-mining time `τ` with `R(τ) = rate`, where `rate`
/// is the per-hash reward available elsewhere (in coins). Solved by bisection
/// on `[1 s, clamp time]`.
pub fn equilibrium_tau(rate: f64, params: &ProtocolParams, base: NormalizedTarget) -> Result<f64> {
    let hi_t = clamp_time(base, params)?;
    let lo_t = 1.0;
    let lo = future_mining_reward_rate(lo_t, base, params)?;
    let hi = future_mining_reward_rate(hi_t, base, params)?;
    if !(rate >= lo && rate <= hi) || hi_t <= lo_t {
        return Err(Error::UnachievableRate {
            rate,
            min: lo,
            max: hi,
        });
    }
    let (mut a, mut b) = (lo_t, hi_t);
    while b - a > TAU_TOLERANCE {
        let mid = 0.5 * (a + b);
        if future_mining_reward_rate(mid, base, params)? < rate {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Block-time variance of Bobtail with `j` proofs per block, relative to
/// exponential block times.
pub fn bobtail_variance_ratio(j: f64) -> f64 {
    (8.0 * j + 4.0) / (6.0 * (j * j + j))
}

/// Number of Bobtail proofs per block whose variance reduction equals that of
/// `k = 2` Weibull block times.
pub fn bobtail_equivalent_j() -> f64 {
    (7.0 * PI - 12.0 + (144.0 - 72.0 * PI + 25.0 * PI * PI).sqrt()) / (6.0 * (4.0 - PI))
}

/// Exponential(target_time) 5th/50th/95th percentiles: the spread of block
/// times under conventional mining with perfectly tuned difficulty.
pub fn ideal_block_time_percentiles(params: &ProtocolParams) -> Percentiles {
    let t = params.target_time();
    Percentiles {
        p5: exponential_quantile(0.05, t),
        median: exponential_quantile(0.5, t),
        p95: exponential_quantile(0.95, t),
    }
}

/// Mean Radium reward per block at rest: `C·k·Γ(1 + 1/k)^k`.
///
/// `r(t)·f(t)` integrates to `C·T^(k-1)·a·E[T]` because the reward cancels
/// the `t^(k-1)` of the Weibull density, so a miner earns `C/d(T)` per hash
/// regardless of when the block lands. This exceeds `C` for `k > 1`: the
/// reward at the mean time is `C`, but the mean reward is larger.
pub fn mean_reward_per_block(params: &ProtocolParams) -> f64 {
    params.base_reward() * target_time_boost(params.k())
}

/// Reward per second of a two-block switch-mining episode (hash multiple `x`
/// then `1/x`) evaluated by plugging the expected block times into `r(t)`:
/// `C·(x^((k-1)/k) + x^(-(k-1)/k)) / (T·(x^(-1/k) + x^(1/k)))`.
pub fn switch_mine_plugin_rate(x: f64, params: &ProtocolParams) -> f64 {
    let k = params.k();
    let e = (k - 1.0) / k;
    params.base_reward() * (x.powf(e) + x.powf(-e))
        / (params.target_time() * (x.powf(-1.0 / k) + x.powf(1.0 / k)))
}

/// Exact `(E[R1] + E[R2]) / (E[T1] + E[T2])` for the switch-mining episode.
/// Equal to the plug-in rate scaled by `k·Γ(1 + 1/k)^k`.
pub fn switch_mine_expected_rate(x: f64, params: &ProtocolParams) -> f64 {
    target_time_boost(params.k()) * switch_mine_plugin_rate(x, params)
}
