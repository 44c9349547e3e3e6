//! Protocol mathematics: target/difficulty algebra, the real-time mining rate,
//! the Weibull block-time law, sub-targets, sub-difficulty, the Radium reward
//! function and the probability integral transform.
//!
//! Mining rate at elapsed time `t` since the last block is `λ(t) = a·t^(k-1)`,
//! which makes the block time `Weibull(k, a)` with CDF `1 - exp(-a·t^k / k)`.
//! The tuning constant `a` is chosen so the mean block time equals the target.
//! A miner (or coalition) holding fraction `q` of the hash rate sees
//! `Weibull(k, q·a)`.

use std::fmt;

use rand::distr::Open01;
use rand::Rng;
use statrs::function::gamma::gamma;

use crate::{Error, Result};

/// Smallest elapsed time, in seconds, at which a block reward is evaluated.
/// Block timestamps are whole seconds, so `r(t)` is never taken closer to its
/// singularity at `t = 0` than this.
pub const TIMESTAMP_GRANULARITY: f64 = 1.0;

/// `a = k·(Γ(1 + 1/k) / target_time)^k`.
pub fn tuning_constant(k: f64, target_time: f64) -> Result<f64> {
    check_exponent(k)?;
    check_positive("target_time", target_time)?;
    Ok(k * (gamma(1.0 + 1.0 / k) / target_time).powf(k))
}

/// `k·Γ(1 + 1/k)^k`: the sub-target at `t = target_time` relative to the base
/// target. Equals 1 for `k = 1` and `π/2` for `k = 2`.
pub fn target_time_boost(k: f64) -> f64 {
    k * gamma(1.0 + 1.0 / k).powf(k)
}

/// Mean of `Weibull(k, rate)`: `(k / rate)^(1/k)·Γ(1 + 1/k)`.
pub fn weibull_mean(k: f64, rate: f64) -> f64 {
    (k / rate).powf(1.0 / k) * gamma(1.0 + 1.0 / k)
}

/// CDF of `Weibull(k, rate)` at `t`.
pub fn weibull_cdf(t: f64, k: f64, rate: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    -(-rate * t.powf(k) / k).exp_m1()
}

/// Survival function of `Weibull(k, rate)` at `t`.
pub fn weibull_survival(t: f64, k: f64, rate: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    (-rate * t.powf(k) / k).exp()
}

/// Quantile of the exponential distribution with the given mean.
pub fn exponential_quantile(p: f64, mean: f64) -> f64 {
    -mean * (-p).ln_1p()
}

fn check_exponent(k: f64) -> Result<()> {
    if k.is_finite() && k >= 1.0 {
        Ok(())
    } else {
        Err(Error::domain("k", k, "k >= 1"))
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, v, "finite and > 0"))
    }
}

fn check_fraction(name: &'static str, q: f64) -> Result<()> {
    if q > 0.0 && q <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(name, q, "0 < q <= 1"))
    }
}

/// Protocol constants. The tuning constant is always derived from `k` and the
/// target time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    k: f64,
    target_time: f64,
    base_reward: f64,
    a: f64,
}

impl ProtocolParams {
    pub const DEFAULT_TARGET_TIME: f64 = 600.0;
    pub const DEFAULT_BASE_REWARD: f64 = 12.5;

    pub fn new(k: f64, target_time: f64, base_reward: f64) -> Result<Self> {
        check_positive("base_reward", base_reward)?;
        let a = tuning_constant(k, target_time)?;
        Ok(Self {
            k,
            target_time,
            base_reward,
            a,
        })
    }

    /// Conventional fixed-target mining: `k = 1`, exponential block times.
    pub fn bitcoin(target_time: f64, base_reward: f64) -> Result<Self> {
        Self::new(1.0, target_time, base_reward)
    }

    /// Radium with the given exponent and the default target time and reward.
    pub fn radium(k: f64) -> Result<Self> {
        Self::new(k, Self::DEFAULT_TARGET_TIME, Self::DEFAULT_BASE_REWARD)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn target_time(&self) -> f64 {
        self.target_time
    }

    pub fn base_reward(&self) -> f64 {
        self.base_reward
    }

    /// Tuning constant `a`, in s^(-k).
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Instantaneous mining rate `λ(t) = a·t^(k-1)` in blocks per second.
    pub fn mining_rate(&self, t: f64) -> f64 {
        self.a * t.powf(self.k - 1.0)
    }

    /// `λ(t) / λ` with `λ = 1 / target_time`: the factor by which the sub-target
    /// exceeds the base target, before clamping to the hash space.
    pub fn rate_ratio(&self, t: f64) -> f64 {
        if self.k == 1.0 {
            return 1.0;
        }
        target_time_boost(self.k) * (t / self.target_time).powf(self.k - 1.0)
    }

    /// Mean of `Weibull(k, multiple·a)`.
    pub fn mean_block_time(&self, multiple: f64) -> f64 {
        weibull_mean(self.k, multiple * self.a)
    }

    /// Scale `γ = (k/a)^(1/k)`, the elapsed time at which `a·t^k/k = 1`.
    pub fn characteristic_time(&self) -> f64 {
        (self.k / self.a).powf(1.0 / self.k)
    }
}

impl Default for ProtocolParams {
    fn default() -> Self {
        Self::radium(2.0).expect("default parameters are valid")
    }
}

/// Protocol family selected for an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    Bitcoin,
    Radium { k: f64 },
}

impl Protocol {
    pub fn params(&self, target_time: f64, base_reward: f64) -> Result<ProtocolParams> {
        match *self {
            Protocol::Bitcoin => ProtocolParams::bitcoin(target_time, base_reward),
            Protocol::Radium { k } => ProtocolParams::new(k, target_time, base_reward),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Bitcoin => "bitcoin",
            Protocol::Radium { .. } => "radium",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fraction of the (unit) hash space meeting a target. Difficulty, the
/// expected number of hashes per block, is its reciprocal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NormalizedTarget(f64);

impl NormalizedTarget {
    pub fn new(g: f64) -> Result<Self> {
        if g > 0.0 && g <= 1.0 {
            Ok(Self(g))
        } else {
            Err(Error::domain("target", g, "0 < g <= 1"))
        }
    }

    pub fn from_difficulty(difficulty: f64) -> Result<Self> {
        if !(difficulty >= 1.0 && difficulty.is_finite()) {
            return Err(Error::domain("difficulty", difficulty, "1 <= D < inf"));
        }
        Self::new(1.0 / difficulty)
    }

    /// Target at rest for a total hash rate of one hash per second.
    pub fn at_rest(params: &ProtocolParams) -> Self {
        Self::from_difficulty(params.target_time().max(1.0))
            .expect("target time is positive")
    }

    pub fn fraction(&self) -> f64 {
        self.0
    }

    pub fn difficulty(&self) -> f64 {
        1.0 / self.0
    }
}

/// Sub-target `g(t) = k·G·Γ(1 + 1/k)^k·(t / target_time)^(k-1)`, clamped to the
/// whole hash space. Returns a fraction in `[0, 1]`; it is zero at `t = 0` when
/// `k > 1`.
pub fn subtarget(base: NormalizedTarget, t: f64, params: &ProtocolParams) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain("t", t, "t >= 0"));
    }
    Ok((base.fraction() * params.rate_ratio(t)).min(1.0))
}

/// Sub-difficulty `d(t) = 1 / g(t)`.
pub fn sub_difficulty(t: f64, base: NormalizedTarget, params: &ProtocolParams) -> Result<f64> {
    let g = subtarget(base, t, params)?;
    if g == 0.0 {
        return Err(Error::InfiniteDifficulty { t });
    }
    Ok(1.0 / g)
}

/// Radium block reward `r(t) = C·d(t) / d(target_time)`, which is
/// `C·(target_time / t)^(k-1)` away from the clamp.
pub fn reward(t: f64, base: NormalizedTarget, params: &ProtocolParams) -> Result<f64> {
    if t.is_nan() || t < TIMESTAMP_GRANULARITY {
        return Err(Error::domain("t", t, "t >= timestamp granularity (1 s)"));
    }
    let d_t = sub_difficulty(t, base, params)?;
    let d_target = sub_difficulty(params.target_time(), base, params)?;
    Ok(params.base_reward() * d_t / d_target)
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

/// Inverse-CDF draw from `Weibull(k, multiple·a)`. `multiple` is the hash rate
/// relative to the rate the difficulty is tuned for; it may exceed 1.
pub fn sample_scaled_block_time<R: Rng + ?Sized>(
    rng: &mut R,
    multiple: f64,
    params: &ProtocolParams,
) -> f64 {
    debug_assert!(multiple > 0.0);
    let u = open_unit(rng);
    (-params.k() * u.ln() / (multiple * params.a())).powf(1.0 / params.k())
}

/// Block time for a miner holding `hash_fraction` of the network hash rate.
pub fn sample_block_time<R: Rng + ?Sized>(
    rng: &mut R,
    hash_fraction: f64,
    params: &ProtocolParams,
) -> Result<f64> {
    check_fraction("hash_fraction", hash_fraction)?;
    Ok(sample_scaled_block_time(rng, hash_fraction, params))
}

/// Draw from `Weibull(k, multiple·a)` conditioned on exceeding `elapsed`: the
/// completion time of compliant mining that is still running at `elapsed`.
pub fn sample_block_time_after<R: Rng + ?Sized>(
    rng: &mut R,
    elapsed: f64,
    multiple: f64,
    params: &ProtocolParams,
) -> f64 {
    let k = params.k();
    let u = open_unit(rng);
    (elapsed.powf(k) - k * u.ln() / (multiple * params.a())).powf(1.0 / k)
}

/// Exponential draw with the given mean (mining against a fixed target).
pub fn sample_exponential<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    -mean * open_unit(rng).ln()
}

/// Maps a block time `t` to the exponential time it corresponds to under
/// conventional mining: `T' = a·t^k·target_time / k`.
pub fn pit_transform(t: f64, params: &ProtocolParams) -> f64 {
    debug_assert!(t >= 0.0);
    params.a() * t.powf(params.k()) * params.target_time() / params.k()
}

/// Variance of Weibull block times relative to exponential block times with the
/// same mean: `Γ(1 + 2/k) / Γ(1 + 1/k)^2 - 1`.
pub fn variance_ratio(k: f64) -> Result<f64> {
    check_exponent(k)?;
    let g1 = gamma(1.0 + 1.0 / k);
    Ok(gamma(1.0 + 2.0 / k) / (g1 * g1) - 1.0)
}

/// What a miner does with its hash rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Compliant,
    /// Mine at the fixed sub-target `g(t_star)` until `t_star`, then comply.
    FutureMine { t_star: f64 },
    /// Equilibrium future mining to `tau`, then compliant mining.
    Defacto { tau: f64 },
    /// Bring `multiple` times the usual hash rate for one block.
    Switch { multiple: f64 },
    PrivateAttacker,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinerSpec {
    pub hash_fraction: f64,
    pub strategy: Strategy,
}

impl MinerSpec {
    pub fn new(hash_fraction: f64, strategy: Strategy) -> Result<Self> {
        check_fraction("hash_fraction", hash_fraction)?;
        match strategy {
            Strategy::FutureMine { t_star } => check_positive("t_star", t_star)?,
            Strategy::Defacto { tau } => check_positive("tau", tau)?,
            Strategy::Switch { multiple } if !(multiple >= 1.0 && multiple.is_finite()) => {
                return Err(Error::domain("multiple", multiple, "x >= 1"));
            }
            _ => {}
        }
        Ok(Self {
            hash_fraction,
            strategy,
        })
    }

    pub fn compliant(hash_fraction: f64) -> Result<Self> {
        Self::new(hash_fraction, Strategy::Compliant)
    }
}

/// Checks that a scenario's hash fractions sum to 1.
pub fn check_fraction_sum(miners: &[MinerSpec]) -> Result<()> {
    let sum: f64 = miners.iter().map(|m| m.hash_fraction).sum();
    if (sum - 1.0).abs() <= 1e-12 {
        Ok(())
    } else {
        Err(Error::FractionSum { sum })
    }
}
