use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parkgraph"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const NINETEEN: &str =
    r#"{"kind":"mapping","n":19,"succ":[5,7,1,12,13,10,14,10,2,13,5,18,12,7,5,14,13,5,14]}"#;

#[test]
fn simulate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", NINETEEN);
    let ok = run(&["simulate", &g, "--prefs", "10,5,14,10,13,14"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("10 5 14 13 12 7"));

    let fail = run(&["simulate", &g, "--prefs", "10,5,14,10,13,14,7"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("driver 7 failed"));

    let bad = write(dir.path(), "bad.json", "{\"kind\":");
    assert_eq!(run(&["simulate", &bad, "--prefs", "1"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", &g, "--prefs", "20"]).status.code(), Some(2));
}

#[test]
fn simulate_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "t.json", r#"{"kind":"tree","n":2,"parent":[0,1]}"#);
    let p = write(dir.path(), "p.json", r#"{"prefs":[1,1]}"#);
    let o = run(&["simulate", &g, "--prefs-file", &p, "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outcome"], "failure");
    assert_eq!(v["driver"], 2);
}

#[test]
fn count_brute_matches_exact() {
    let o = run(&["count", "--mode", "brute", "--n", "1..4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,F,M,match"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 + 3 + 4 + 5);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows.contains(&"2,2,6,12,true"));
    assert!(!text.contains('\r'));
}

#[test]
fn count_modes_agree() {
    let exact = stdout(&run(&["count", "--mode", "exact", "--n", "1..6"]));
    let series = stdout(&run(&["count", "--mode", "series", "--n", "1..6"]));
    assert_eq!(exact, series);
}

#[test]
fn brute_budget_is_enforced() {
    let o = run(&["count", "--mode", "brute", "--n", "6", "--m", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PARKGRAPH_MAX_BRUTE_N"));
    let o = bin()
        .args(["count", "--mode", "brute", "--n", "6", "--m", "1"])
        .env("PARKGRAPH_MAX_BRUTE_N", "6")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,m,F,M,match\n6,1,46656,279936,true\n");
}

#[test]
fn bijection_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (name, doc) in [
        ("full", r#"{"tree":{"kind":"tree","n":3,"parent":[0,1,1]},"prefs":[2,3,1],"marked":3}"#),
        ("partial", r#"{"tree":{"kind":"tree","n":4,"parent":[2,0,2,3]},"prefs":[4,4],"marked":1}"#),
    ] {
        let input = write(dir.path(), &format!("{name}.json"), doc);
        let fwd = dir.path().join(format!("{name}.fwd.json"));
        let inv = dir.path().join(format!("{name}.inv.json"));
        let o = run(&["bijection", "--direction", "fwd", &input, "--out", fwd.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let o = run(&["bijection", "--direction", "inv", fwd.to_str().unwrap(), "--out", inv.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        // canonical form of the original input
        let canon = run(&["bijection", "--direction", "fwd", inv.to_str().unwrap()]);
        assert_eq!(stdout(&canon), std::fs::read_to_string(&fwd).unwrap());
        let original: serde_json::Value = serde_json::from_str(doc).unwrap();
        let back: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&inv).unwrap()).unwrap();
        assert_eq!(original, back);
    }
}

#[test]
fn bijection_rejects_non_parking_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "x.json",
        r#"{"tree":{"kind":"tree","n":2,"parent":[0,1]},"prefs":[1,1],"marked":1}"#,
    );
    let o = run(&["bijection", "--direction", "fwd", &input]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a parking function"));
}

#[test]
fn phase_curve() {
    let args = ["phase", "--rho", "0.1:0.9:0.1", "--n", "200", "--trials", "500", "--seed", "11"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho,n,p_exact,p_mc,mc_stderr,asymptotic,regime"));
    let p: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(p.len(), 9);
    assert!(p.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(stdout(&run(&args)), text);

    let zero = stdout(&run(&["phase", "--rho", "0", "--n", "50", "--trials", "0"]));
    assert_eq!(zero.lines().nth(1), Some("0,50,1.00000000000,,,1.00000000000,sub-critical"));
}

#[test]
fn output_file_is_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let o = run(&["count", "--n", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 5);
    let bad = run(&["count", "--mode", "brute", "--n", "9", "--out", out.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 5);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn sampling_is_reproducible() {
    let a = stdout(&run(&["sample", "--kind", "mapping", "--n", "6", "--count", "3", "--seed", "5"]));
    let b = stdout(&run(&["sample", "--kind", "mapping", "--n", "6", "--count", "3", "--seed", "5"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 3);
    for line in a.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["kind"], "mapping");
    }
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
