use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

const RUNTIME_LIMIT: Duration = Duration::from_secs(60);

fn run_suite(tag: &str) -> (Vec<u8>, Duration, i32) {
    let out: PathBuf = [env!("CARGO_TARGET_TMPDIR"), &format!("suite-{tag}.json")].iter().collect();
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_relstab"))
        .args(["suite", "--quiet", "--json"])
        .arg(&out)
        .status()
        .expect("relstab runs");
    let elapsed = start.elapsed();
    let bytes = std::fs::read(&out).expect("suite wrote its report");
    (bytes, elapsed, status.code().unwrap_or(-1))
}

fn main() {
    let (first, elapsed, code) = run_suite("a");
    let (second, _, _) = run_suite("b");
    let report: Value = serde_json::from_slice(&first).expect("suite report is JSON");
    let criteria = report["criteria"].as_array().expect("criteria array");

    let mut lines = Vec::new();
    for c in criteria {
        let id = c["id"].as_u64().unwrap();
        let mut passed = c["passed"].as_bool().unwrap();
        let mut detail = format!("{} checks", c["checked"]);
        if id == 1 {
            // the whole suite bounds the time spent on criterion 1
            passed &= elapsed < RUNTIME_LIMIT;
            detail.push_str(&format!(", suite wall time {:.1}s", elapsed.as_secs_f64()));
        }
        for f in c["failures"].as_array().into_iter().flatten() {
            detail.push_str(&format!("; {}", f.as_str().unwrap_or("")));
        }
        lines.push((id, c["name"].as_str().unwrap().to_string(), passed, detail));
    }
    let identical = first == second;
    lines.push((10, "byte-identical suite reports".into(), identical, format!("{} bytes", first.len())));

    for (id, name, passed, detail) in &lines {
        println!("criterion {id:>2}: {} {name} ({detail})", if *passed { "PASS" } else { "FAIL" });
    }
    let ids: Vec<u64> = lines.iter().map(|l| l.0).collect();
    assert_eq!(ids, (1..=10).collect::<Vec<_>>());
    assert_eq!(code == 0, report["verdict"].as_bool().unwrap());
    let failed = lines.iter().filter(|l| !l.2).count();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
