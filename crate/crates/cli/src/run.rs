//! Dispatch from a parsed [`Command`] to the simulation library.

use anyhow::{bail, Result};

use radium_core::analysis::{future_mine_bound, ideal_block_time_percentiles};
use radium_core::model::variance_ratio;
use radium_core::sim::{
    run_daa_experiment, run_defacto_future_mine, run_doublespend, run_future_mine_attack,
    run_orphan_experiment, run_switch_mine, AbandonRule,
};
use radium_core::{Protocol, ProtocolParams};

use crate::args::*;
use crate::output::{format_sig, Table};

/// A finished experiment: its table and a one-line human summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub summary: String,
}

pub fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::FutureMine(a) => future_mine(a),
        Command::Defacto(a) => defacto(a),
        Command::DaaSim(a) => daa_sim(a),
        Command::Orphan(a) => orphan(a),
        Command::Doublespend(a) => doublespend(a),
        Command::SwitchMine(a) => switch_mine(a),
        Command::Variance(a) => variance(a),
        Command::Bounds(a) => bounds(a),
        Command::Replay(_) => bail!("replay must be resolved to a recorded command first"),
    }
}

fn params(protocol: Protocol, c: &ProtocolConstants) -> Result<ProtocolParams> {
    Ok(protocol.params(c.target_time, c.reward)?)
}

fn future_mine(a: &FutureMineArgs) -> Result<Report> {
    let p = params(Protocol::Radium { k: a.k }, &a.constants)?;
    let mut table = Table::new(&["q", "t_star", "trials", "successes", "success_rate", "bound"]);
    let mut best: Option<(f64, f64, f64)> = None;
    for &q in &a.q {
        for t_star in a.t_star_grid() {
            let s = run_future_mine_attack(q, t_star, &p, a.trials, a.seed)?;
            let rate = s.frequency.rate();
            if best.is_none_or(|(_, _, r)| rate - q > r) {
                best = Some((q, t_star, rate - q));
            }
            table.push(vec![
                q.into(),
                t_star.into(),
                s.frequency.trials.into(),
                s.frequency.successes.into(),
                rate.into(),
                s.bound.bound.into(),
            ]);
        }
    }
    let (q, t, gain) = best.expect("non-empty grid");
    Ok(Report {
        summary: format!(
            "future-mine: {} points, largest gain over fair share {} at q={} t*={}",
            table.rows.len(),
            format_sig(gain),
            format_sig(q),
            format_sig(t)
        ),
        table,
    })
}

fn defacto(a: &DefactoArgs) -> Result<Report> {
    let p = params(Protocol::Radium { k: a.k }, &a.constants)?;
    let mut table = Table::new(&[
        "tau",
        "miner",
        "hash_fraction",
        "preemptor",
        "trials",
        "wins",
        "win_rate",
        "race_wins",
        "races",
        "race_rate",
        "future_mined_rate",
        "block_p5",
        "block_median",
        "block_p95",
    ]);
    let mut last = None;
    for &tau in &a.tau {
        let s = run_defacto_future_mine(tau, &a.fractions, a.preemptor, &p, a.trials, a.seed)?;
        for (m, spec) in s.miners.iter().enumerate() {
            table.push(vec![
                tau.into(),
                m.into(),
                spec.hash_fraction.into(),
                u64::from(a.preemptor == Some(m)).into(),
                a.trials.into(),
                s.wins[m].successes.into(),
                s.wins[m].rate().into(),
                s.race_wins[m].successes.into(),
                s.races.successes.into(),
                s.races.rate().into(),
                s.future_mined.rate().into(),
                s.block_time.p5.into(),
                s.block_time.median.into(),
                s.block_time.p95.into(),
            ]);
        }
        last = Some(s);
    }
    let s = last.expect("at least one tau");
    Ok(Report {
        summary: format!(
            "defacto: tau={} race rate {} future-mined rate {} median block time {} s",
            format_sig(s.tau),
            format_sig(s.races.rate()),
            format_sig(s.future_mined.rate()),
            format_sig(s.block_time.median)
        ),
        table,
    })
}

fn daa_sim(a: &DaaSimArgs) -> Result<Report> {
    let protocol = a.protocol.resolve(a.k);
    let p = params(protocol, &a.constants)?;
    let s = run_daa_experiment(protocol, &p, a.blocks as usize, a.trials, a.window as usize, a.seed)?;
    let mut table = Table::new(&["block_index", "p5", "median", "p95"]);
    for (i, row) in s.per_block.iter().enumerate() {
        table.push(vec![(i + 1).into(), row.p5.into(), row.median.into(), row.p95.into()]);
    }
    let ideal = ideal_block_time_percentiles(&p);
    Ok(Report {
        summary: format!(
            "daa-sim {}: p5/median/p95 {} / {} / {} s (ideal {} / {} / {})",
            protocol.name(),
            format_sig(s.summary.p5),
            format_sig(s.summary.median),
            format_sig(s.summary.p95),
            format_sig(ideal.p5),
            format_sig(ideal.median),
            format_sig(ideal.p95)
        ),
        table,
    })
}

fn orphan(a: &OrphanArgs) -> Result<Report> {
    let mut table = Table::new(&["protocol", "k", "blocks", "orphans", "orphan_rate", "orphan_window"]);
    let mut parts = Vec::new();
    for &proto in &a.protocol {
        let protocol = proto.resolve(a.k);
        let p = params(protocol, &a.constants)?;
        let s = run_orphan_experiment(&p, a.blocks, a.orphan_window, a.seed)?;
        table.push(vec![
            protocol.name().into(),
            p.k().into(),
            s.orphans.trials.into(),
            s.orphans.successes.into(),
            s.orphans.rate().into(),
            a.orphan_window.into(),
        ]);
        parts.push(format!("{} {}%", protocol.name(), format_sig(100.0 * s.orphans.rate())));
    }
    Ok(Report {
        summary: format!("orphan rate: {}", parts.join(", ")),
        table,
    })
}

fn doublespend(a: &DoublespendArgs) -> Result<Report> {
    let abandon = AbandonRule {
        max_deficit: a.max_deficit,
        max_honest_blocks: a.max_honest,
    };
    let mut table = Table::new(&["protocol", "q", "z", "trials", "successes", "success_rate"]);
    for &proto in &a.protocol {
        let protocol = proto.resolve(a.k);
        let p = params(protocol, &a.constants)?;
        for &q in &a.q {
            for &z in &a.z {
                let s = run_doublespend(q, z, &p, a.trials, a.seed, abandon)?;
                table.push(vec![
                    protocol.name().into(),
                    q.into(),
                    z.into(),
                    s.frequency.trials.into(),
                    s.frequency.successes.into(),
                    s.frequency.rate().into(),
                ]);
            }
        }
    }
    Ok(Report {
        summary: format!("doublespend: {} grid points of {} trials", table.rows.len(), a.trials),
        table,
    })
}

fn switch_mine(a: &SwitchMineArgs) -> Result<Report> {
    let mut table = Table::new(&["k", "x", "trials", "reward_per_second", "baseline"]);
    let mut parts = Vec::new();
    for &k in &a.k {
        let p = ProtocolParams::new(k, a.constants.target_time, a.constants.reward)?;
        for &x in &a.x {
            let s = run_switch_mine(x, &p, a.trials, a.seed)?;
            table.push(vec![
                k.into(),
                x.into(),
                s.trials.into(),
                s.reward_per_second.into(),
                s.baseline.into(),
            ]);
            parts.push(format!(
                "k={} x={}: {}",
                format_sig(k),
                format_sig(x),
                format_sig(s.reward_per_second / s.baseline)
            ));
        }
    }
    Ok(Report {
        summary: format!("switch-mine reward rate / baseline: {}", parts.join(", ")),
        table,
    })
}

fn variance(a: &VarianceArgs) -> Result<Report> {
    let mut table = Table::new(&["k", "variance_ratio"]);
    let mut parts = Vec::new();
    for &k in &a.k {
        let v = variance_ratio(k)?;
        table.push(vec![k.into(), v.into()]);
        parts.push(format!("k={}: {}", format_sig(k), format_sig(v)));
    }
    Ok(Report {
        summary: format!("variance ratio {}", parts.join(", ")),
        table,
    })
}

fn bounds(a: &BoundsArgs) -> Result<Report> {
    let p = params(Protocol::Radium { k: a.k }, &a.constants)?;
    let mut table = Table::new(&[
        "q",
        "t_star",
        "k",
        "attacker_mean_time",
        "compliant_survival",
        "bound",
    ]);
    let mut parts = Vec::new();
    for &q in &a.q {
        for &t in &a.t_star {
            let b = future_mine_bound(q, t, &p)?;
            table.push(vec![
                q.into(),
                t.into(),
                a.k.into(),
                b.attacker_mean_time.into(),
                b.compliant_survival.into(),
                b.bound.into(),
            ]);
            parts.push(format!("q={} t*={}: {}", format_sig(q), format_sig(t), format_sig(b.bound)));
        }
    }
    Ok(Report {
        summary: format!("future-mining bound {}", parts.join(", ")),
        table,
    })
}
