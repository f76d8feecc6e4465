use std::process::{Command, Output};

fn dispersion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dispersion"))
        .args(args)
        .env_remove("DISPERSION_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = dispersion(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn run_prints_leftmost_trajectory() {
    assert_eq!(
        stdout(&["run", "--state", "12", "--policy", "leftmost"]),
        "12 → 1011 → 11001 → 100101\n"
    );
}

#[test]
fn random_run_is_reproducible() {
    let a = stdout(&[
        "run", "--state", "1111111", "--policy", "random", "--seed", "5",
    ]);
    assert_eq!(
        a,
        stdout(&["run", "--state", "1111111", "--policy", "random", "--seed", "5"])
    );
}

#[test]
fn moves_of_flat_four() {
    let out = stdout(&["moves", "--state", "0001111000"]);
    assert_eq!(out.lines().count(), 3);
    assert_eq!(stdout(&["moves", "--state", "101"]), "final\n");
}

#[test]
fn finals_of_flat_four() {
    let out = stdout(&["finals", "--state", "0001111000", "--format", "csv"]);
    // the quoted shadow field holds a comma
    let fields = |l: &str| l.rsplitn(3, ',').map(str::to_string).collect::<Vec<_>>();
    let ks: Vec<i64> = out
        .lines()
        .skip(1)
        .map(|l| fields(l)[1].parse().unwrap())
        .collect();
    assert_eq!(ks, [3, 1, 0, -1, -3]);
    let probs: Vec<String> = out.lines().skip(1).map(|l| fields(l)[0].clone()).collect();
    assert_eq!(probs, ["1/6", "1/6", "1/3", "1/6", "1/6"]);
}

#[test]
fn scaled_row_six() {
    let out = stdout(&["prob", "--n", "6", "--scaled"]);
    assert!(out.contains("1, 0, 1, 2, 4, 8, 11, 0, 11, 14, 16, 14, 11, 0, 11, 8, 4, 2, 1, 0, 1"));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["prob", "--n", "4", "--format", "json"])).unwrap();
    assert_eq!(json["n"], 4);
}

#[test]
fn rtable_five_brute_and_recursion_agree() {
    let brute: serde_json::Value =
        serde_json::from_str(&stdout(&["rtable", "--n", "5", "--format", "json"])).unwrap();
    let rec: serde_json::Value = serde_json::from_str(&stdout(&[
        "rtable",
        "--n",
        "5",
        "--method",
        "recursion",
        "--format",
        "json",
    ]))
    .unwrap();
    let pick = |v: &serde_json::Value| -> Vec<(u64, u64, u64)> {
        let mut c: Vec<_> = v["cells"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                (
                    c["l"].as_u64().unwrap(),
                    c["x"].as_u64().unwrap(),
                    c["r"].as_u64().unwrap(),
                )
            })
            .filter(|c| c.2 > 0)
            .collect();
        c.sort();
        c
    };
    assert_eq!(pick(&brute), pick(&rec));
    assert!(pick(&brute).contains(&(3, 1, 4)));
}

#[test]
fn perms_special_with_last_one() {
    assert_eq!(
        stdout(&["perms", "--n", "4", "--stat", "special", "--last", "1"]),
        "1 1\n2 4\n3 1\n"
    );
}

#[test]
fn graph_dot_is_deterministic() {
    let a = stdout(&[
        "graph", "--state", "11111", "--labels", "sumtroid", "--half", "left",
    ]);
    assert!(a.starts_with("digraph"));
    assert_eq!(
        a,
        stdout(&["graph", "--state", "11111", "--labels", "sumtroid", "--half", "left"])
    );
}

#[test]
fn mc_json_has_five_shadows() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "mc",
        "--n",
        "6",
        "--samples",
        "2000",
        "--seed",
        "3",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(v["shadows"].as_array().unwrap().len(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(
        dispersion(&["moves", "--state", "1x1"]).status.code(),
        Some(2)
    );
    assert_eq!(dispersion(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        dispersion(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dispersion(&["prob", "--n", "9", "--node-budget", "10"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        dispersion(&["finals", "--state", "1111111", "--node-budget", "10"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_small_writes_report_and_uses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let cache = dir.path().join("cache");
    let args = [
        "verify",
        "--suite",
        "window",
        "--suite",
        "probability",
        "--max-n",
        "6",
        "--samples",
        "5000",
        "--cache-dir",
        cache.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ];
    let out = stdout(&args);
    assert!(out.contains(" 0 failed"), "{out}");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let names: Vec<&str> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["probability", "window"]);
    assert!(cache.join("row_N6_scaled.json").exists());
    // a second run reads the cache back
    assert!(stdout(&args).contains(" 0 failed"));
}

#[test]
fn corrupt_cache_is_not_trusted() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    stdout(&["prob", "--n", "5", "--scaled", "--cache-dir", d]);
    let path = dir.path().join("row_N5_scaled.json");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("\"4\"", "\"5\"", 1)).unwrap();
    let out = stdout(&["prob", "--n", "5", "--scaled", "--cache-dir", d]);
    assert!(out.contains("1, 0, 1, 2, 4, 4, 0"), "{out}");
}
