//! Difficulty adjustment.
//!
//! Both controllers scale the current difficulty by a factor estimated from the
//! mean `T̄` of the last `window` inter-arrival times:
//!
//! * conventional: `D' = D·T / T̄`,
//! * Radium: `D' = D·k / (a·T̄^k)`, i.e. the conventional rule applied to the
//!   exponential-equivalent time of `T̄`.
//!
//! `T̄^k` raises the arithmetic mean of raw times to the power `k`; it is not
//! the mean of the `k`-th powers.

use std::collections::VecDeque;

use crate::model::{Protocol, ProtocolParams};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    difficulty: f64,
    history: VecDeque<f64>,
    window: usize,
}

impl ChainState {
    pub const DEFAULT_WINDOW: usize = 2;

    pub fn new(difficulty: f64, window: usize) -> Result<Self> {
        if !(difficulty > 0.0 && difficulty.is_finite()) {
            return Err(Error::domain("difficulty", difficulty, "finite and > 0"));
        }
        if window == 0 {
            return Err(Error::domain("window", 0.0, "window >= 1"));
        }
        Ok(Self {
            difficulty,
            history: VecDeque::with_capacity(window),
            window,
        })
    }

    /// At-rest state for unit total hash rate: `D = target_time`.
    pub fn at_rest(params: &ProtocolParams, window: usize) -> Result<Self> {
        Self::new(params.target_time(), window)
    }

    pub fn difficulty(&self) -> f64 {
        self.difficulty
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn history(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.history.iter().copied()
    }

    /// Arithmetic mean of the recorded inter-arrival times.
    pub fn mean_interval(&self) -> Result<f64> {
        if self.history.is_empty() {
            return Err(Error::EmptyHistory);
        }
        Ok(self.history.iter().sum::<f64>() / self.history.len() as f64)
    }

    /// Appends an inter-arrival time, evicting the oldest beyond `window`.
    pub fn record_block(&self, inter_arrival: f64) -> Result<Self> {
        if !(inter_arrival > 0.0 && inter_arrival.is_finite()) {
            return Err(Error::domain("inter_arrival", inter_arrival, "finite and > 0"));
        }
        let mut next = self.clone();
        if next.history.len() == next.window {
            next.history.pop_front();
        }
        next.history.push_back(inter_arrival);
        Ok(next)
    }

    pub fn with_difficulty(&self, difficulty: f64) -> Result<Self> {
        let mut next = Self::new(difficulty, self.window)?;
        next.history = self.history.clone();
        Ok(next)
    }
}

pub fn bitcoin_adjust(state: &ChainState, params: &ProtocolParams) -> Result<f64> {
    let mean = state.mean_interval()?;
    Ok(state.difficulty() * params.target_time() / mean)
}

pub fn radium_adjust(state: &ChainState, params: &ProtocolParams) -> Result<f64> {
    let mean = state.mean_interval()?;
    Ok(state.difficulty() * params.k() / (params.a() * mean.powf(params.k())))
}

/// Next difficulty under the controller belonging to `protocol`.
pub fn adjust(protocol: Protocol, state: &ChainState, params: &ProtocolParams) -> Result<f64> {
    match protocol {
        Protocol::Bitcoin => bitcoin_adjust(state, params),
        Protocol::Radium { .. } => radium_adjust(state, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::pit_transform;
    use proptest::prelude::*;

    fn state(d: f64, window: usize, times: &[f64]) -> ChainState {
        times
            .iter()
            .fold(ChainState::new(d, window).unwrap(), |s, &t| {
                s.record_block(t).unwrap()
            })
    }

    #[test]
    fn bitcoin_examples() {
        let p = ProtocolParams::bitcoin(600.0, 12.5).unwrap();
        assert_eq!(bitcoin_adjust(&state(100.0, 2, &[600.0, 600.0]), &p).unwrap(), 100.0);
        assert_eq!(bitcoin_adjust(&state(100.0, 2, &[300.0, 300.0]), &p).unwrap(), 200.0);
        assert_eq!(bitcoin_adjust(&state(100.0, 1, &[200.0, 300.0]), &p).unwrap(), 200.0);
        assert!(bitcoin_adjust(&state(100.0, 2, &[1e300]), &p).unwrap() < 1e-290);
        assert_eq!(
            bitcoin_adjust(&ChainState::new(1.0, 2).unwrap(), &p),
            Err(Error::EmptyHistory)
        );
    }

    #[test]
    fn radium_examples() {
        let p = ProtocolParams::default();
        let fixed = (2.0 / p.a()).sqrt();
        assert!((fixed - 677.1).abs() < 0.1);
        let d = radium_adjust(&state(100.0, 2, &[fixed, fixed]), &p).unwrap();
        assert!((d - 100.0).abs() < 1e-9);
        // 100·2 / (a·600²) = 100·4/π
        let d = radium_adjust(&state(100.0, 2, &[600.0, 600.0]), &p).unwrap();
        assert!((d - 400.0 / std::f64::consts::PI).abs() < 1e-9);
        assert!((d - 127.32).abs() < 0.01);
        assert!(radium_adjust(&state(100.0, 2, &[1e200]), &p).unwrap() < 1e-300);
        assert_eq!(
            radium_adjust(&ChainState::new(1.0, 2).unwrap(), &p),
            Err(Error::EmptyHistory)
        );
    }

    #[test]
    fn mean_then_power() {
        let p = ProtocolParams::default();
        let s = state(50.0, 2, &[300.0, 900.0]);
        let expected = 50.0 * 2.0 / (p.a() * 600.0f64.powi(2));
        assert!((radium_adjust(&s, &p).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn record_block_evicts() {
        let s = state(1.0, 2, &[1.0, 2.0, 3.0]);
        assert_eq!(s.history().collect::<Vec<_>>(), vec![2.0, 3.0]);
        let s = state(1.0, 1, &[7.0]);
        assert_eq!(s.history().collect::<Vec<_>>(), vec![7.0]);
        assert!(s.record_block(-5.0).is_err());
        assert!(s.record_block(0.0).is_err());
        assert_eq!(s.record_block(4.0).unwrap().difficulty(), 1.0);
    }

    #[test]
    fn state_invariants() {
        assert!(ChainState::new(0.0, 2).is_err());
        assert!(ChainState::new(1.0, 0).is_err());
    }

    #[test]
    fn bitcoin_at_rest_never_moves() {
        let p = ProtocolParams::bitcoin(600.0, 12.5).unwrap();
        let mut s = ChainState::at_rest(&p, 2).unwrap();
        for _ in 0..100 {
            s = s.record_block(600.0).unwrap();
            let d = bitcoin_adjust(&s, &p).unwrap();
            assert_eq!(d, 600.0);
            s = s.with_difficulty(d).unwrap();
        }
    }

    proptest! {
        #[test]
        fn adjusters_are_homogeneous(d in 1e-3f64..1e6, t1 in 1.0f64..1e4, t2 in 1.0f64..1e4, k in 1.0f64..5.0) {
            let p = ProtocolParams::radium(k).unwrap();
            let s1 = state(d, 2, &[t1, t2]);
            let s2 = state(2.0 * d, 2, &[t1, t2]);
            for f in [bitcoin_adjust, radium_adjust] {
                let a = f(&s1, &p).unwrap();
                let b = f(&s2, &p).unwrap();
                prop_assert!((b - 2.0 * a).abs() <= 1e-12 * b.abs());
            }
        }

        #[test]
        fn radium_is_bitcoin_on_transformed_times(d in 1e-3f64..1e6, t in 1.0f64..1e4, k in 1.0f64..5.0) {
            let p = ProtocolParams::radium(k).unwrap();
            let radium = radium_adjust(&state(d, 1, &[t]), &p).unwrap();
            let bitcoin = bitcoin_adjust(&state(d, 1, &[pit_transform(t, &p)]), &p).unwrap();
            prop_assert!((radium - bitcoin).abs() <= 1e-9 * radium.abs());
        }
    }
}
