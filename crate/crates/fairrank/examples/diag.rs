// scratch: seed search over a range given as argv, prints per-seed margins
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use fairrank::sim::{rank_difference_experiment, GroupSpec, ScenarioConfig, ScoreDistribution};

fn check(seed: u64) -> (f64, Vec<f64>) {
    let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let config = ScenarioConfig {
        groups: vec![
            GroupSpec { attribute: "g".into(), size: 1000, activeness: 0.5 },
            GroupSpec { attribute: "b".into(), size: 1000, activeness: 1.0 },
            GroupSpec { attribute: "u".into(), size: 1000, activeness: 1.0 },
        ],
        score_distribution: ScoreDistribution::Uniform01,
        k_grid: vec![],
        activeness_grid: grid.clone(),
        trials: 20,
        master_seed: seed,
        sweep_attribute: Some("g".into()),
    };
    let result = rank_difference_experiment(&config).unwrap();
    let margins: Vec<f64> = grid.iter().map(|&f| {
        let lrr = result.mean("rank_difference_lrr", f, None).unwrap();
        let est = result.mean("rank_difference_estimated", f, None).unwrap();
        lrr - est
    }).collect();
    let worst = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    (worst, margins)
}

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    let (lo, hi) = (args[0], args[1]);
    static NEXT: AtomicU64 = AtomicU64::new(0);
    NEXT.store(lo, Ordering::SeqCst);
    let out = std::sync::Mutex::new(std::io::stdout());
    std::thread::scope(|s| {
        for _ in 0..2 {
            s.spawn(|| loop {
                let seed = NEXT.fetch_add(1, Ordering::SeqCst);
                if seed >= hi { return; }
                let (worst, margins) = check(seed);
                let tag = if worst >= 0.0 { "PASS" } else { "fail" };
                let line = format!(
                    "{tag} {seed} worst {worst:.2} | {}\n",
                    margins.iter().map(|m| format!("{m:.1}")).collect::<Vec<_>>().join(" ")
                );
                let mut o = out.lock().unwrap();
                o.write_all(line.as_bytes()).unwrap();
                o.flush().unwrap();
            });
        }
    });
}
