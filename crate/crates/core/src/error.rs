use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the domain of the function it was passed to.
    #[error("{name} = {value} is out of range: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The sub-target is zero, so the expected work (or time) to find a block
    /// is unbounded.
    #[error("sub-target vanishes at t = {t}; difficulty is infinite")]
    InfiniteDifficulty { t: f64 },

    #[error("block history is empty")]
    EmptyHistory,

    #[error("hash fractions sum to {sum}, expected 1")]
    FractionSum { sum: f64 },

    #[error("reward rate {rate} is not achievable (valid range [{min}, {max}])")]
    UnachievableRate { rate: f64, min: f64, max: f64 },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
