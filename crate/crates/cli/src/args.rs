//! Command-line surface. Every numeric flag is range-checked by its value
//! parser, so bad input is rejected (exit code 2) before anything runs.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use radium_core::Protocol;

#[derive(Debug, Parser)]
#[command(name = "radium-lab", version, about = "Dynamic-target proof-of-work simulation lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Future-mining attack success against compliant miners, swept over q and t*.
    FutureMine(FutureMineArgs),
    /// Equilibrium future mining: races and preemption at tau.
    Defacto(DefactoArgs),
    /// Closed-loop difficulty adjustment block-time percentiles.
    DaaSim(DaaSimArgs),
    /// Orphan rate of two equal network halves.
    Orphan(OrphanArgs),
    /// Private-chain doublespend success, swept over q and z.
    Doublespend(DoublespendArgs),
    /// Reward per second of two-block switch-mining episodes.
    SwitchMine(SwitchMineArgs),
    /// Block-time variance relative to exponential block times.
    Variance(VarianceArgs),
    /// Closed-form future-mining lower bound.
    Bounds(BoundsArgs),
    /// Re-run the experiment recorded in a manifest.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FutureMine(_) => "future-mine",
            Command::Defacto(_) => "defacto",
            Command::DaaSim(_) => "daa-sim",
            Command::Orphan(_) => "orphan",
            Command::Doublespend(_) => "doublespend",
            Command::SwitchMine(_) => "switch-mine",
            Command::Variance(_) => "variance",
            Command::Bounds(_) => "bounds",
            Command::Replay(_) => "replay",
        }
    }

    pub fn output(&self) -> Option<&OutputArgs> {
        match self {
            Command::FutureMine(a) => Some(&a.output),
            Command::Defacto(a) => Some(&a.output),
            Command::DaaSim(a) => Some(&a.output),
            Command::Orphan(a) => Some(&a.output),
            Command::Doublespend(a) => Some(&a.output),
            Command::SwitchMine(a) => Some(&a.output),
            Command::Variance(a) => Some(&a.output),
            Command::Bounds(a) => Some(&a.output),
            Command::Replay(_) => None,
        }
    }

    pub fn output_mut(&mut self) -> Option<&mut OutputArgs> {
        match self {
            Command::FutureMine(a) => Some(&mut a.output),
            Command::Defacto(a) => Some(&mut a.output),
            Command::DaaSim(a) => Some(&mut a.output),
            Command::Orphan(a) => Some(&mut a.output),
            Command::Doublespend(a) => Some(&mut a.output),
            Command::SwitchMine(a) => Some(&mut a.output),
            Command::Variance(a) => Some(&mut a.output),
            Command::Bounds(a) => Some(&mut a.output),
            Command::Replay(_) => None,
        }
    }

    /// Checks that span several flags.
    pub fn validate(&self) -> Result<(), String> {
        if let Command::Defacto(a) = self {
            let sum: f64 = a.fractions.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(format!("--fractions must sum to 1 (got {sum})"));
            }
            if let Some(p) = a.preemptor {
                if p >= a.fractions.len() {
                    return Err(format!(
                        "--preemptor {p} does not name one of the {} miners",
                        a.fractions.len()
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn tag(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolArg {
    Bitcoin,
    Radium,
}

impl ProtocolArg {
    pub fn resolve(self, k: f64) -> Protocol {
        match self {
            ProtocolArg::Bitcoin => Protocol::Bitcoin,
            ProtocolArg::Radium => Protocol::Radium { k },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OutputArgs {
    /// Result file; a `<out>.manifest.json` sidecar is written next to it.
    /// Without it the table goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ProtocolConstants {
    /// Target block time in seconds.
    #[arg(long, default_value_t = 600.0, value_parser = positive)]
    pub target_time: f64,
    /// Block reward paid at the target time, in coins.
    #[arg(long, default_value_t = 12.5, value_parser = positive)]
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FutureMineArgs {
    /// Attacker hash fractions.
    #[arg(long, value_delimiter = ',', value_parser = open_fraction, default_values = ["0.1", "0.2", "0.3", "0.4"])]
    pub q: Vec<f64>,
    /// Future mining times in seconds; defaults to 60, 120, ..., 1800.
    #[arg(long = "t-star", value_delimiter = ',', value_parser = positive)]
    pub t_star: Vec<f64>,
    #[arg(long, default_value_t = 2.0, value_parser = exponent)]
    pub k: f64,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub constants: ProtocolConstants,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl FutureMineArgs {
    pub fn t_star_grid(&self) -> Vec<f64> {
        if self.t_star.is_empty() {
            (1..=30).map(|i| 60.0 * i as f64).collect()
        } else {
            self.t_star.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DefactoArgs {
    /// Equilibrium future mining times in seconds.
    #[arg(long, value_delimiter = ',', value_parser = positive, default_values = ["600"])]
    pub tau: Vec<f64>,
    /// Hash fraction of each miner; must sum to 1.
    #[arg(long, value_delimiter = ',', value_parser = fraction, default_values = ["0.5", "0.5"])]
    pub fractions: Vec<f64>,
    /// Index of a miner that mines to just before tau and wins every race.
    #[arg(long)]
    pub preemptor: Option<usize>,
    #[arg(long, default_value_t = 2.0, value_parser = exponent)]
    pub k: f64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub constants: ProtocolConstants,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DaaSimArgs {
    #[arg(long, value_enum, default_value_t = ProtocolArg::Radium)]
    pub protocol: ProtocolArg,
    /// Exponent for radium (ignored for bitcoin, which is k = 1).
    #[arg(long, default_value_t = 2.0, value_parser = exponent)]
    pub k: f64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub blocks: u64,
    /// Number of recent block times averaged by the controller.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub constants: ProtocolConstants,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OrphanArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["bitcoin", "radium"])]
    pub protocol: Vec<ProtocolArg>,
    #[arg(long, default_value_t = 2.0, value_parser = exponent)]
    pub k: f64,
    #[arg(long, default_value_t = 850_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub blocks: u64,
    /// Two blocks closer than this many seconds count as an orphan.
    #[arg(long, default_value_t = 3.0, value_parser = non_negative)]
    pub orphan_window: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub constants: ProtocolConstants,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DoublespendArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["bitcoin", "radium"])]
    pub protocol: Vec<ProtocolArg>,
    #[arg(long, value_delimiter = ',', value_parser = open_fraction, default_values = ["0.1", "0.2", "0.3", "0.4"])]
    pub q: Vec<f64>,
    /// Confirmations the merchant waits for.
    #[arg(long, value_delimiter = ',', default_values = ["1", "2", "3", "4", "5", "6"])]
    pub z: Vec<u32>,
    #[arg(long, default_value_t = 2.0, value_parser = exponent)]
    pub k: f64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Attacker quits this many blocks behind.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_deficit: u32,
    /// Attacker quits once the honest chain has this many blocks.
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_honest: u32,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub constants: ProtocolConstants,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SwitchMineArgs {
    #[arg(long, value_delimiter = ',', value_parser = exponent, default_values = ["1", "2", "3", "4"])]
    pub k: Vec<f64>,
    /// Hash-rate multiples brought for the first block.
    #[arg(long, value_delimiter = ',', value_parser = multiple, default_values = ["1", "2", "5", "10"])]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub constants: ProtocolConstants,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct VarianceArgs {
    #[arg(long, value_delimiter = ',', value_parser = exponent, default_values = ["2"])]
    pub k: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BoundsArgs {
    #[arg(long, value_delimiter = ',', value_parser = fraction, default_values = ["0.3"])]
    pub q: Vec<f64>,
    #[arg(long = "t-star", value_delimiter = ',', value_parser = positive, default_values = ["600"])]
    pub t_star: Vec<f64>,
    #[arg(long, default_value_t = 2.0, value_parser = exponent)]
    pub k: f64,
    #[command(flatten)]
    pub constants: ProtocolConstants,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ReplayArgs {
    /// Manifest written alongside an earlier result file.
    pub manifest: PathBuf,
    /// Write to this path instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 { Ok(v) } else { Err("must be > 0".into()) }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v >= 0.0 { Ok(v) } else { Err("must be >= 0".into()) }
}

fn exponent(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v >= 1.0 { Ok(v) } else { Err("k must be >= 1".into()) }
}

fn open_fraction(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 && v < 1.0 { Ok(v) } else { Err("must lie in (0, 1)".into()) }
}

fn fraction(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 && v <= 1.0 { Ok(v) } else { Err("must lie in (0, 1]".into()) }
}

fn multiple(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v >= 1.0 { Ok(v) } else { Err("x must be >= 1".into()) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_daa_example() {
        let cli = Cli::try_parse_from([
            "radium-lab", "daa-sim", "--protocol", "radium", "--k", "2", "--trials", "1000",
            "--blocks", "30", "--window", "2", "--seed", "7", "--out", "daa.csv",
        ])
        .unwrap();
        let Command::DaaSim(a) = cli.command else { panic!() };
        assert_eq!((a.trials, a.blocks, a.window, a.seed), (1000, 30, 2, 7));
        assert_eq!(a.output.out, Some(PathBuf::from("daa.csv")));
    }

    #[test]
    fn rejects_out_of_range_values() {
        for argv in [
            &["radium-lab", "variance", "--k", "0.5"][..],
            &["radium-lab", "future-mine", "--q", "1.0"],
            &["radium-lab", "bounds", "--t-star", "-3"],
            &["radium-lab", "switch-mine", "--x", "0.5"],
            &["radium-lab", "daa-sim", "--trials", "0"],
            &["radium-lab", "daa-sim", "--window", "0"],
        ] {
            assert!(Cli::try_parse_from(argv).is_err(), "{argv:?}");
        }
    }

    #[test]
    fn cross_flag_validation() {
        let cli = Cli::try_parse_from(["radium-lab", "defacto", "--fractions", "0.5,0.4"]).unwrap();
        assert!(cli.command.validate().is_err());
        let cli = Cli::try_parse_from(["radium-lab", "defacto", "--preemptor", "2"]).unwrap();
        assert!(cli.command.validate().is_err());
        let cli = Cli::try_parse_from(["radium-lab", "defacto", "--preemptor", "1"]).unwrap();
        assert!(cli.command.validate().is_ok());
    }

    #[test]
    fn command_round_trips_through_json() {
        let cli = Cli::try_parse_from(["radium-lab", "doublespend", "--q", "0.2", "--z", "1,3"]).unwrap();
        let json = serde_json::to_string(&cli.command).unwrap();
        assert!(json.contains("\"subcommand\":\"doublespend\""));
        let back: Command = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cli.command);
    }
}
