use std::process::{Command, Output};

use serde_json::Value;

fn idealforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idealforge"))
        .args(args)
        .env_remove("IDEALFORGE_SCAN_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON document")
}

const FIXTURE: [&str; 11] = [
    "code", "--field", "F2", "--phi1", "1,0,0,1", "--phi2", "1,1,1", "--a", "1", "--b", "1",
];

#[test]
fn rank_example() {
    let o = idealforge(&[
        "rank", "--field", "F2", "--phi", "1,0,0,1", "--f", "1,1,0", "--m", "3", "--output", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["d"], 1);
    assert_eq!(v["r_predicted"], 2);
    assert_eq!(v["r_observed"], 2);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 3);
}

#[test]
fn rank_rejects_non_monic_phi() {
    let o = idealforge(&[
        "rank", "--field", "Q", "--phi", "1,0,-1", "--f", "1,1", "--m", "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--phi"));
}

#[test]
fn rank_of_zero_vector_is_zero() {
    let o = idealforge(&[
        "rank", "--field", "F2", "--phi", "1,0,0,1", "--f", "0,0,0", "--m", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().last().unwrap().starts_with("rank 0"));
}

#[test]
fn double_rank_examples() {
    let o = idealforge(&[
        "double-rank",
        "--field",
        "F2",
        "--phi1",
        "1,0,0,1",
        "--phi2",
        "1,1,1",
        "--f1",
        "1",
        "--f2",
        "1",
        "--m",
        "6",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(
        (v["d"].as_u64(), v["r_observed"].as_u64()),
        (Some(2), Some(3))
    );
    assert_eq!(
        (v["e1"].as_u64(), v["e2"].as_u64(), v["e"].as_u64()),
        (Some(0), Some(0), Some(2))
    );

    // x + 1 and x - 2 are coprime, so the square matrix has full rank.
    let o = idealforge(&[
        "double-rank",
        "--field",
        "Q",
        "--phi1",
        "1,1",
        "--phi2",
        "-2,1",
        "--f1",
        "1",
        "--f2",
        "1",
        "--m",
        "2",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["r_observed"], 2);

    let o = idealforge(&[
        "double-rank",
        "--field",
        "F2",
        "--phi1",
        "1,0,1",
        "--phi2",
        "1,1,1",
        "--f1",
        "1",
        "--f2",
        "1",
        "--m",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("squarefree"));
}

#[test]
fn code_verify_example() {
    let mut args = FIXTURE.to_vec();
    args.extend(["--verify", "--output", "json"]);
    let o = idealforge(&args);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["verification"]["agrees"], true);
    assert_eq!(v["verification"]["brute_force_dim"], 3);
    assert_eq!(v["h_bar"], serde_json::json!(["1", "0", "0", "1"]));
}

#[test]
fn code_minimal_window_from_row_three() {
    let mut args = FIXTURE.to_vec();
    args.extend(["--genmat", "minimal", "--start", "3"]);
    let o = idealforge(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("[1 0 0 1 0]\n[0 1 0 0 1]\n[0 0 1 1 1]\nrank 3"),
        "{text}"
    );
    assert!(text.ends_with("dimension 3\n"));
}

#[test]
fn zero_code_has_no_minimum_distance() {
    let o = idealforge(&[
        "code",
        "--field",
        "F2",
        "--phi1",
        "1,0,0,1",
        "--phi2",
        "1,1,1",
        "--a",
        "0",
        "--b",
        "0",
        "--min-distance",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "ZeroCode");
}

#[test]
fn span_deficit_exits_with_three() {
    let o = idealforge(&[
        "code", "--field", "F3", "--phi1", "1,0,1", "--phi2", "2,1,1", "--a", "1", "--b", "1",
        "--genmat", "minimal", "--output", "json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v = json(&o);
    assert_eq!(v["error"], "SpanDeficit");
    assert_eq!((v["r"].as_u64(), v["dim"].as_u64()), (Some(2), Some(4)));
}

#[test]
fn code_report_round_trips_through_input() {
    let mut args = FIXTURE.to_vec();
    args.extend([
        "--verify",
        "--min-distance",
        "--genmat",
        "full",
        "--output",
        "json",
    ]);
    let first = idealforge(&args);
    assert_eq!(first.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("idealforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    std::fs::write(&path, &first.stdout).unwrap();
    let p = path.to_str().unwrap();
    let again = idealforge(&[
        "code",
        "--input",
        p,
        "--verify",
        "--min-distance",
        "--genmat",
        "full",
        "--output",
        "json",
    ]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(stdout(&again), stdout(&first));
    assert_eq!(json(&first)["min_distance"], 2);
    assert_eq!(json(&first)["generator"]["rank"], 3);

    // A hand-written descriptor with bare integers.
    let desc = dir.join("descriptor.json");
    std::fs::write(
        &desc,
        r#"{"field": "F2", "phi1": [1,0,0,1], "phi2": [1,1,1], "a": [1,1], "b": [1]}"#,
    )
    .unwrap();
    let o = idealforge(&[
        "code",
        "--input",
        desc.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert_eq!(json(&o)["dim"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_conflicts_with_inline_flags() {
    let o = idealforge(&["code", "--input", "x.json", "--field", "F2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_examples() {
    let o = idealforge(&[
        "verify", "--target", "thm2.5", "--field", "F5", "--trials", "1000", "--seed", "42",
        "--output", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["agreements"], 1000);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);

    let o = idealforge(&[
        "verify", "--target", "cor3.2", "--field", "F2", "--trials", "200", "--output", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["agreements"], 200);
    assert!(v["regimes"]["span_deficit"].as_u64().unwrap() > 0);

    let o = idealforge(&["verify", "--target", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_replays_identically() {
    let args = [
        "verify", "--target", "thm3.2", "--field", "F3", "--trials", "40", "--seed", "9",
        "--output", "json",
    ];
    let strip = |o: &Output| {
        let mut v = json(o);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(strip(&idealforge(&args)), strip(&idealforge(&args)));
}

#[test]
fn roots_and_scan_bound() {
    let o = idealforge(&[
        "roots", "--field", "F7", "--poly", "6,0,1", "--output", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["roots"], serde_json::json!(["1", "6"]));
    let o = Command::new(env!("CARGO_BIN_EXE_idealforge"))
        .args(["roots", "--field", "F7", "--poly", "6,0,1"])
        .env("IDEALFORGE_SCAN_BOUND", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_errors_are_single_documents() {
    let o = idealforge(&[
        "rank", "--field", "F2", "--phi", "1,0,1", "--f", "1", "--m", "2", "--output", "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "NotSquarefree");
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let o = idealforge(&["rank", "--field", "F2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = idealforge(&[
        "rank", "--field", "F2", "--phi", "1,1", "--f", "1/x", "--m", "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--f") && err.contains("ascending"), "{err}");
    assert_eq!(idealforge(&["--help"]).status.code(), Some(0));
}
