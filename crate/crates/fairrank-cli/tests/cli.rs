//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fairrank"));
    cmd.env_remove("FAIRRANK_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// 10 b-candidates over 5 g-candidates, scores decreasing within groups.
fn intro_universe_csv() -> String {
    let mut text = String::from("id,attribute,score\n");
    for i in 1..=10 {
        text.push_str(&format!("b{i},b,{}\n", 1.0 - i as f64 * 0.05));
    }
    for i in 1..=5 {
        text.push_str(&format!("g{i},g,{}\n", 1.0 - i as f64 * 0.05));
    }
    text
}

fn intro_platform_csv(joined_g: &[&str]) -> String {
    intro_universe_csv()
        .lines()
        .filter(|line| {
            let id = line.split(',').next().unwrap();
            id == "id" || id.starts_with('b') || joined_g.contains(&id)
        })
        .map(|line| format!("{line}\n"))
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn first_ids(ranking_csv: &str, n: usize) -> Vec<String> {
    ranking_csv
        .lines()
        .skip(1)
        .take(n)
        .map(|line| line.split(',').nth(1).unwrap().to_string())
        .collect()
}

#[test]
fn rank_round_reproduces_reference_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "universe.csv", &intro_universe_csv());
    let out = dir.path().join("urr.csv");
    let output = run(&[
        "rank",
        input.to_str().unwrap(),
        "--policy",
        "round",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(first_ids(&text, 6), ["b1", "g1", "b2", "b3", "g2", "b4"]);
}

#[test]
fn rank_missing_file_exits_2_with_code() {
    let output = run(&[
        "rank",
        "/nonexistent/pool.csv",
        "--policy",
        "round",
        "--out",
        "/tmp/never-written.csv",
    ]);
    assert_eq!(output.status.code(), Some(2));
    let err = stderr(&output);
    assert!(
        err.starts_with("ERROR IoError") || err.starts_with("ERROR ParseError"),
        "stderr: {err}"
    );
}

#[test]
fn rank_estimated_without_activeness_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "universe.csv", &intro_universe_csv());
    let output = run(&[
        "rank",
        input.to_str().unwrap(),
        "--policy",
        "estimated-ifrr",
        "--out",
        dir.path().join("out.csv").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).starts_with("ERROR MissingFlag"), "{}", stderr(&output));
}

#[test]
fn rank_estimated_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "platform.csv", &intro_platform_csv(&["g1", "g2"]));
    let rank_with = |out: &Path, seed_args: &[&str]| {
        let mut args = vec![
            "rank",
            input.to_str().unwrap(),
            "--policy",
            "estimated-ifrr",
            "--ratio",
            "b=0.6666666666666666,g=0.3333333333333334",
            "--activeness",
            "b=1.0,g=0.4",
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend_from_slice(seed_args);
        let output = run(&args);
        assert!(output.status.success(), "{}", stderr(&output));
        fs::read_to_string(out).unwrap()
    };
    let a = rank_with(&dir.path().join("a.csv"), &["--seed", "11"]);
    let b = rank_with(&dir.path().join("b.csv"), &["--seed", "11"]);
    assert_eq!(a, b);

    // env fallback matches the explicit flag
    let env_out = dir.path().join("c.csv");
    let output = bin()
        .env("FAIRRANK_SEED", "11")
        .args([
            "rank",
            input.to_str().unwrap(),
            "--policy",
            "estimated-ifrr",
            "--ratio",
            "b=0.6666666666666666,g=0.3333333333333334",
            "--activeness",
            "b=1.0,g=0.4",
            "--out",
            env_out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    assert_eq!(fs::read_to_string(&env_out).unwrap(), a);
}

#[test]
fn ideal_projection_matches_expected_order() {
    let dir = tempfile::tempdir().unwrap();
    let universe = write(dir.path(), "universe.csv", &intro_universe_csv());
    let platform = write(dir.path(), "platform.csv", &intro_platform_csv(&["g1", "g2"]));
    let out = dir.path().join("ifrr.csv");
    let output = run(&[
        "ideal",
        universe.to_str().unwrap(),
        platform.to_str().unwrap(),
        "--mode",
        "ifrr",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(
        first_ids(&text, 12),
        ["b1", "g1", "b2", "b3", "g2", "b4", "b5", "b6", "b7", "b8", "b9", "b10"]
    );
}

#[test]
fn ideal_of_identical_pools_equals_plain_ranking() {
    let dir = tempfile::tempdir().unwrap();
    let universe = write(dir.path(), "universe.csv", &intro_universe_csv());
    let urr_out = dir.path().join("urr.csv");
    run(&[
        "rank",
        universe.to_str().unwrap(),
        "--policy",
        "round",
        "--out",
        urr_out.to_str().unwrap(),
    ]);
    for mode in ["ifrr", "gfrr"] {
        let out = dir.path().join(format!("{mode}.csv"));
        let output = run(&[
            "ideal",
            universe.to_str().unwrap(),
            universe.to_str().unwrap(),
            "--mode",
            mode,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success());
        assert_eq!(
            fs::read_to_string(&out).unwrap(),
            fs::read_to_string(&urr_out).unwrap()
        );
    }
}

#[test]
fn ideal_with_foreign_platform_member_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let universe = write(dir.path(), "universe.csv", &intro_universe_csv());
    let platform = write(
        dir.path(),
        "platform.csv",
        "id,attribute,score\nb1,b,0.95\nzz,b,0.5\n",
    );
    let output = run(&[
        "ideal",
        universe.to_str().unwrap(),
        platform.to_str().unwrap(),
        "--mode",
        "ifrr",
        "--out",
        dir.path().join("out.csv").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).starts_with("ERROR PlatformNotSubset"));
}

#[test]
fn analyze_reports_worked_scenario_totals() {
    let dir = tempfile::tempdir().unwrap();
    let universe = write(dir.path(), "universe.csv", &intro_universe_csv());
    let platform = write(dir.path(), "platform.csv", &intro_platform_csv(&["g1", "g2"]));
    let urr = dir.path().join("urr.csv");
    let lrr = dir.path().join("lrr.csv");
    run(&[
        "rank",
        universe.to_str().unwrap(),
        "--policy",
        "round",
        "--out",
        urr.to_str().unwrap(),
    ]);
    run(&[
        "rank",
        platform.to_str().unwrap(),
        "--policy",
        "round",
        "--out",
        lrr.to_str().unwrap(),
    ]);
    let outdir = dir.path().join("report");
    let output = run(&[
        "analyze",
        lrr.to_str().unwrap(),
        urr.to_str().unwrap(),
        platform.to_str().unwrap(),
        "--k",
        "6",
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let json = fs::read_to_string(outdir.join("analysis.json")).unwrap();
    assert!(json.contains("\"n_unfair\": 1"), "{json}");
    assert!(json.contains("\"n_favored\": 1"));
    let csv = fs::read_to_string(outdir.join("analysis.csv")).unwrap();
    assert!(csv.lines().count() > 10);
}

#[test]
fn analyze_identical_rankings_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let universe = write(dir.path(), "universe.csv", &intro_universe_csv());
    let urr = dir.path().join("urr.csv");
    run(&[
        "rank",
        universe.to_str().unwrap(),
        "--policy",
        "round",
        "--out",
        urr.to_str().unwrap(),
    ]);
    let outdir = dir.path().join("report");
    let output = run(&[
        "analyze",
        urr.to_str().unwrap(),
        urr.to_str().unwrap(),
        universe.to_str().unwrap(),
        "--k",
        "6,10",
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let json = fs::read_to_string(outdir.join("analysis.json")).unwrap();
    assert!(json.contains("\"n_unfair\": 0"));
    assert!(!json.contains("\"favored\": true"));
}

#[test]
fn analyze_clamps_oversized_k_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let universe = write(dir.path(), "universe.csv", &intro_universe_csv());
    let urr = dir.path().join("urr.csv");
    run(&[
        "rank",
        universe.to_str().unwrap(),
        "--policy",
        "round",
        "--out",
        urr.to_str().unwrap(),
    ]);
    let outdir = dir.path().join("report");
    let output = run(&[
        "analyze",
        urr.to_str().unwrap(),
        urr.to_str().unwrap(),
        universe.to_str().unwrap(),
        "--k",
        "999",
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(stderr(&output).contains("warning"), "{}", stderr(&output));
}

fn small_sim_config() -> &'static str {
    r#"
master_seed = 11
trials = 2
k_grid = [10, 20]
activeness_grid = [0.4, 0.8]

[[groups]]
attribute = "g"
size = 60
activeness = 0.5

[[groups]]
attribute = "b"
size = 60
activeness = 1.0

[[groups]]
attribute = "u"
size = 60
activeness = 1.0
"#
}

#[test]
fn simulate_writes_three_csvs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.toml", small_sim_config());
    let outdir = dir.path().join("results");
    let output = run(&[
        "simulate",
        config.to_str().unwrap(),
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    for name in [
        "missed_opportunity.csv",
        "rank_difference.csv",
        "skew.csv",
        "manifest.json",
    ] {
        assert!(outdir.join(name).exists(), "{name} missing");
    }
    let csv = fs::read_to_string(outdir.join("missed_opportunity.csv")).unwrap();
    assert!(csv.starts_with("experiment,f,k,trial,value\n"));
    assert!(csv.contains(",mean,"));
}

#[test]
fn simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.toml", small_sim_config());
    let read_all = |outdir: &Path| {
        let mut text = String::new();
        for name in [
            "missed_opportunity.csv",
            "rank_difference.csv",
            "skew.csv",
            "manifest.json",
        ] {
            text.push_str(&fs::read_to_string(outdir.join(name)).unwrap());
        }
        text
    };
    let out1 = dir.path().join("r1");
    let out2 = dir.path().join("r2");
    for out in [&out1, &out2] {
        let output = run(&[
            "simulate",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success());
    }
    assert_eq!(read_all(&out1), read_all(&out2));
}

#[test]
fn simulate_zero_trials_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "config.toml",
        &small_sim_config().replace("trials = 2", "trials = 0"),
    );
    let output = run(&[
        "simulate",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("results").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).starts_with("ERROR ConfigError"), "{}", stderr(&output));
}
