//! Shared fixtures for the criterion benchmarks.

use radium_core::ProtocolParams;

/// Protocol variants benchmarked side by side.
pub fn protocols() -> [(&'static str, ProtocolParams); 3] {
    [
        ("bitcoin", ProtocolParams::bitcoin(600.0, 12.5).expect("valid")),
        ("radium_k2", ProtocolParams::radium(2.0).expect("valid")),
        ("radium_k4", ProtocolParams::radium(4.0).expect("valid")),
    ]
}
