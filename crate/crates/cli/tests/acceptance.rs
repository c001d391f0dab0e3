//! Binary-level acceptance check: the counterexample where the K-group ranks
//! split apart, and the way `verify` reports that split on both sides of the
//! finite/infinite divide.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn report(number: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "criterion {number:02} {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {number:02} {name} failed: {detail}");
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn rank_check(doc: &Value) -> &Value {
    doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "k1 rank equals k0 free rank")
        .expect("rank comparison check present")
}

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/graphs");
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "graph"))
        .collect();
    files.sort();
    files
}

fn is_finite(path: &Path) -> bool {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .all(|l| !l.starts_with("R ") && !l.starts_with("T "))
}

#[test]
fn criterion_06_loop_plus_ray_rank_gap() {
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/graphs/31_loop_one_ray.graph");
    let file = file.to_str().unwrap();

    let k0 = stdout_json(&run(&["k0", file]));
    let k1 = stdout_json(&run(&["k1", file]));
    let groups_ok = k0["k0"]["free_rank"] == 2
        && k0["k0"]["torsion"] == Value::Array(vec![])
        && k1["k1"]["free_rank"] == 1
        && k1["k1"]["torsion"] == Value::Array(vec![]);

    let out = run(&["verify", file]);
    let doc = stdout_json(&out);
    let check = rank_check(&doc);
    let infinite_ok = out.status.code() == Some(0)
        && check["pass"] == true
        && check["details"].as_str().unwrap().contains("differ by gamma")
        && doc["k0"]["free_rank"] == 2
        && doc["k1"]["free_rank"] == 1;

    let mut finite_ok = true;
    let mut finite_count = 0usize;
    for path in corpus().iter().filter(|p| is_finite(p)) {
        finite_count += 1;
        let out = run(&["verify", path.to_str().unwrap()]);
        let doc = stdout_json(&out);
        let check = rank_check(&doc);
        let equal_ranks = doc["k0"]["free_rank"] == doc["k1"]["free_rank"];
        if out.status.code() != Some(0) || check["pass"] != true || !equal_ranks {
            finite_ok = false;
            eprintln!("rank equality violated on {}", path.display());
        }
    }

    report(
        6,
        "loop plus one ray separates the K-group ranks",
        groups_ok && infinite_ok && finite_ok && finite_count >= 30,
        &format!(
            "K0 = Z^2, K1 = Z^1, verify reports the gap; \
             equality held on {finite_count} finite graphs"
        ),
    );
}
