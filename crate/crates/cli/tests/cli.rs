use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use radium_cli::Manifest;

fn lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radium-lab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn radium-lab")
}

fn lab_with_threads(args: &[&str], dir: &Path, threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radium-lab"))
        .args(args)
        .current_dir(dir)
        .env("RADIUM_LAB_THREADS", threads)
        .output()
        .expect("spawn radium-lab")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_owned()
}

#[test]
fn daa_sim_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(
        &[
            "daa-sim", "--protocol", "radium", "--k", "2", "--trials", "1000", "--blocks", "30",
            "--window", "2", "--seed", "7", "--out", "daa.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert_eq!(text(&out.stdout).lines().count(), 1);
    let csv = fs::read_to_string(dir.path().join("daa.csv")).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "block_index,p5,median,p95");
    assert_eq!(lines.len(), 31);
    assert!(lines[30].starts_with("30,"));
    let manifest = Manifest::load(&dir.path().join("daa.csv.manifest.json")).unwrap();
    assert_eq!(manifest.subcommand, "daa-sim");
    assert!(!manifest.timestamp.is_empty());
}

#[test]
fn variance_prints_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["variance", "--k", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stderr).contains("0.2732"));
    assert!(text(&out.stdout).contains("2,0.27324"));
}

#[test]
fn bounds_prints_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["bounds", "--q", "0.3", "--t-star", "600", "--k", "2", "--out", "b.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out.stdout);
    let value: f64 = stdout
        .split(": ")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 0.2169).abs() <= 1e-4, "{stdout}");
}

#[test]
fn schemas() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 4] = [
        (
            &["future-mine", "--q", "0.2", "--t-star", "300,600", "--trials", "50", "--out", "fm.csv"],
            "q,t_star,trials,successes,success_rate,bound",
        ),
        (
            &["doublespend", "--q", "0.2", "--z", "1,2", "--trials", "50", "--out", "ds.csv"],
            "protocol,q,z,trials,successes,success_rate",
        ),
        (
            &["switch-mine", "--k", "2", "--x", "1,10", "--trials", "100", "--out", "sm.csv"],
            "k,x,trials,reward_per_second,baseline",
        ),
        (
            &["orphan", "--blocks", "10000", "--out", "or.csv"],
            "protocol,k,blocks,orphans,orphan_rate,orphan_window",
        ),
    ];
    for (args, expected) in cases {
        let out = lab(args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", text(&out.stderr));
        let file = dir.path().join(args.last().unwrap());
        assert_eq!(header(&file), expected);
        assert!(dir.path().join(format!("{}.manifest.json", args.last().unwrap())).exists());
    }
    let rows = fs::read_to_string(dir.path().join("ds.csv")).unwrap();
    assert_eq!(rows.lines().count(), 1 + 2 * 2);
}

#[test]
fn json_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["switch-mine", "--k", "1,4", "--x", "10", "--trials", "200", "--seed", "3"];
    let csv = lab(&[&base[..], &["--out", "a.csv"]].concat(), dir.path());
    let json = lab(&[&base[..], &["--out", "a.json", "--format", "json"]].concat(), dir.path());
    assert_eq!(csv.status.code(), Some(0));
    assert_eq!(json.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(dir.path().join("a.csv")).unwrap();
    let head = reader.headers().unwrap().clone();
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    for (record, obj) in reader.records().zip(&rows) {
        let record = record.unwrap();
        for (col, cell) in head.iter().zip(record.iter()) {
            let a: f64 = cell.parse().unwrap();
            let b = obj[col].as_f64().unwrap();
            assert_eq!(a, b, "{col}");
        }
    }
}

#[test]
fn argument_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["variance", "--k", "0"][..],
        &["future-mine", "--q", "1.5"],
        &["doublespend", "--q", "0"],
        &["daa-sim", "--trials", "0"],
        &["daa-sim", "--protocol", "litecoin"],
        &["defacto", "--fractions", "0.7,0.7"],
        &["defacto", "--preemptor", "5"],
        &["orphan", "--orphan-window", "-1"],
        &["bounds", "--k", "nan"],
        &["not-a-command"],
        &[],
    ] {
        let out = lab(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(text(&out.stderr).contains("Usage") || text(&out.stderr).contains("usage"), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["variance", "--out", "missing-dir/v.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).starts_with("error:"));
    let out = lab(&["replay", "nope.manifest.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = lab_with_threads(&["variance"], dir.path(), "zero");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seeded_output_is_identical_across_thread_counts_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec!["doublespend", "--q", "0.3", "--z", "2", "--trials", "400", "--seed", "11", "--out", out]
    };
    assert_eq!(lab_with_threads(&args("t1.csv"), dir.path(), "1").status.code(), Some(0));
    assert_eq!(lab_with_threads(&args("t8.csv"), dir.path(), "8").status.code(), Some(0));
    let t1 = fs::read(dir.path().join("t1.csv")).unwrap();
    assert_eq!(t1, fs::read(dir.path().join("t8.csv")).unwrap());
    let out = lab(&["replay", "t1.csv.manifest.json", "--out", "again.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert_eq!(t1, fs::read(dir.path().join("again.csv")).unwrap());
}

#[test]
fn defacto_reports_each_miner() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(
        &["defacto", "--tau", "300,600", "--fractions", "0.6,0.4", "--preemptor", "1", "--trials", "200", "--out", "d.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2);
    assert!(csv.lines().nth(2).unwrap().starts_with("300,1,0.4,1,200,"));
}
