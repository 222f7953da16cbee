use std::process::{Command, Output};

use serde_json::Value;

fn taut(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taut"))
        .args(args)
        .env("TAUT_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = taut(args, dir.path());
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

#[test]
fn hurwitz_examples() {
    let (code, v) = run(&[
        "hurwitz", "--genus", "1", "--alpha", "2", "--method", "both",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["h"], "1/2");
    assert_eq!(v["result"]["equal"], true);
    assert_eq!(
        run(&["hurwitz", "--genus", "1", "--alpha", "1"]).1["result"]["h"],
        "0"
    );
    assert_eq!(
        run(&["hurwitz", "--genus", "0", "--alpha", "1,1,1"]).1["result"]["h"],
        "4"
    );
    let (_, v) = run(&["hurwitz", "--genus", "0", "--alpha", "2,1"]);
    assert_eq!(v["result"]["h"], "4");
    assert_eq!(v["result"]["tuple_count"], 24);
}

#[test]
fn budget_exhaustion_is_structured() {
    let (code, v) = run(&[
        "--budget", "100", "hurwitz", "--genus", "2", "--alpha", "5", "--method", "brute",
    ]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["error"]["kind"], "budget_exceeded");
    assert_eq!(v["result"]["error"]["budget"], "100");
    assert!(v["manifest"]["output_digest"].is_string());
}

#[test]
fn elsv_examples() {
    let (code, v) = run(&["elsv-verify", "--genus", "1", "--n", "1", "--max-part", "3"]);
    assert_eq!(code, 0);
    let table = v["result"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 2);
    assert!(table.iter().all(|e| e["value"] == "1/24"));
    assert_eq!(v["result"]["all_equal"], true);
    assert_eq!(v["result"]["held_out_points"], serde_json::json!([[3]]));

    let (code, v) = run(&["elsv-verify", "--genus", "0", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["table"][0]["value"], "1");

    let (code, v) = run(&["elsv-verify", "--genus", "0", "--n", "1"]);
    assert_eq!(code, 3);
    assert_eq!(v["result"]["error"]["kind"], "unstable");
}

#[test]
fn rank_deficient_grid_exits_4() {
    // one point cannot determine two unknowns
    let (code, v) = run(&["elsv-verify", "--genus", "1", "--n", "1", "--max-part", "1"]);
    assert_eq!(code, 4);
    assert_eq!(v["result"]["error"]["advice"], "raise --max-part");
}

#[test]
fn graph_examples() {
    let (code, v) = run(&["graphs", "--genus", "0", "--n", "4", "enumerate"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 3);
    let (_, v) = run(&["graphs", "--genus", "2", "--n", "0", "connectivity"]);
    assert_eq!(v["result"]["component_count"], 1);
    assert_eq!(v["result"]["component_sizes"], serde_json::json!([2]));
    let (_, v) = run(&["graphs", "--genus", "1", "--n", "1", "connectivity"]);
    assert_eq!(v["result"]["component_sizes"], serde_json::json!([1]));
}

#[test]
fn degenerate_examples() {
    let (code, v) = run(&["degenerate", "--genus", "1", "--alpha", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["strata"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["strata"][0]["weight"], "1/2");
    assert_eq!(v["result"]["match"], true);

    let (_, v) = run(&["degenerate", "--genus", "1", "--alpha", "1"]);
    assert_eq!(v["result"]["strata"], serde_json::json!([]));
    assert_eq!(v["result"]["total"], "0");
    assert_eq!(v["result"]["match"], true);

    let (_, v) = run(&["degenerate", "--genus", "0", "--alpha", "1,1,1"]);
    assert_eq!(v["result"]["strata"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["total"], "24");

    let (code, _) = run(&["degenerate", "--genus", "0", "--alpha", "2"]);
    assert_eq!(code, 3);
}

#[test]
fn digests_ignore_threads_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let digest = |args: &[&str]| {
        let out = taut(args, dir.path());
        assert!(out.status.success());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        (
            v["manifest"]["output_digest"].as_str().unwrap().to_owned(),
            v["manifest"]["notes"]["cache"].clone(),
        )
    };
    let base = ["elsv-verify", "--genus", "1", "--n", "2"];
    let (first, note) = digest(&base);
    assert_eq!(note, "stored");
    let (second, note) = digest(&base);
    assert_eq!(note, "hit");
    let (third, _) = digest(&[&["--no-cache"][..], &base].concat());
    assert_eq!(first, second);
    assert_eq!(first, third);

    let mut seen = Vec::new();
    for t in ["1", "2", "8"] {
        seen.push(
            digest(&[
                "--threads",
                t,
                "degenerate",
                "--genus",
                "1",
                "--alpha",
                "2,1,1",
            ])
            .0,
        );
        seen.push(
            digest(&[
                "--threads",
                t,
                "hurwitz",
                "--genus",
                "1",
                "--alpha",
                "3,1",
                "--method",
                "both",
            ])
            .0,
        );
    }
    assert!(seen.chunks(2).all(|c| c == &seen[..2]));
}

#[test]
fn damaged_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["elsv-verify", "--genus", "1", "--n", "1"];
    assert!(taut(&args, dir.path()).status.success());
    let path = dir.path().join("hodge.json");
    let text = std::fs::read_to_string(&path)
        .unwrap()
        .replace("1/24", "1/12");
    std::fs::write(&path, text).unwrap();
    let out = taut(&args, dir.path());
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["manifest"]["notes"]["cache"], "stored");
    assert!(v["result"]["table"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["value"] == "1/24"));
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = taut(
        &[
            "--format", "csv", "hurwitz", "--genus", "0", "--alpha", "2,1",
        ],
        dir.path(),
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "g,alpha,d,n,r,tuple_count,h,h_labeled");
    assert_eq!(lines[1], "0,2 1,3,2,3,24,4,4");
    assert!(lines[2].starts_with("# manifest {"));
}
