use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const THEME: &str = "rank = 2\nlambda = 2, 3\nS1 = {0: 1, 2: 3}\n";
const RANK_THREE: &str = "rank = 3\nlambda = 4, 5, 6\nS1 = {0: 1, 4: 1}\nS2 = {0: 1}\n";
const RANK_FOUR: &str = "\
# non semi-simple, level 2
rank = 4
lambda = 7/2, 9/2, 11/2, 13/2
S1 = {0: 1, 4: 1, 6: 1}
S2 = {0: 1}
S3 = {0: 1}
truncation = 24
";

fn write(dir: &TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn fresco(args: &[&str], input: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fresco"))
        .args(args)
        .arg(input)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn rank_one_report() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r1", "rank = 1\nlambda = 2\n");
    let report = json(&fresco(&["report"], &input));
    assert_eq!(report["bernstein_roots"], serde_json::json!(["-2"]));
    assert_eq!(report["stratum"]["level"], 1);
    assert_eq!(report["stratum"]["rank"], 1);
    assert_eq!(report["mu"], "2");
    assert!(report["order"].as_u64().unwrap() > 0);
}

#[test]
fn beta_of_rank_three() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r3", RANK_THREE);
    assert_eq!(json(&fresco(&["beta"], &input))["beta"], "1");
    let report = json(&fresco(&["report"], &input));
    assert_eq!(report["beta"]["value"], "1");
    assert_eq!(report["p_total"]["value"], "4");
}

#[test]
fn rank_four_is_level_two() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r4", RANK_FOUR);
    let report = json(&fresco(&["semisimple"], &input));
    assert_eq!(report["semisimple"], false);
    assert_eq!(report["stratum"]["level"], 2);
    assert_eq!(json(&fresco(&["report"], &input))["stratum"]["level"], 2);
}

#[test]
fn window_emits_a_document() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r4", RANK_FOUR);
    let text = stdout(&fresco(&["window", "1", "2"], &input));
    assert_eq!(text, "rank = 2\nlambda = 7/2, 9/2\nS1 = {0: 1, 4: 1, 6: 1}\ntruncation = 24\n");
    let inner = stdout(&fresco(&["window", "2", "3"], &input));
    assert!(inner.contains("S1 = {0: 1}\n"));
}

#[test]
fn dual_of_a_theme() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "theme", THEME);
    let text = stdout(&fresco(&["dual", "--delta", "20"], &input));
    assert!(text.contains("lambda = 17, 18\n"), "{}", text);
    let dual = write(&dir, "dual", &text);
    let back = stdout(&fresco(&["dual", "--delta", "20"], &dual));
    assert!(back.contains("lambda = 2, 3\n"));
    assert!(back.starts_with("rank = 2\n"));
    assert!(back.contains("S1 = {0: 1, 2: 3}\n"), "{}", back);
}

#[test]
fn rank1_of_a_theme() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "theme", THEME);
    let report = json(&fresco(&["rank1"], &input));
    let families = report["families"].as_array().unwrap();
    assert_eq!(families.len(), 1);
    assert_eq!(families[0]["mu"], "2");
}

#[test]
fn linear_change_of_variable_scales_alpha() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "theme", THEME);
    let text = stdout(&fresco(&["changevar", "--theta", "2"], &input));
    let moved = write(&dir, "moved", &text);
    assert_eq!(json(&fresco(&["report"], &moved))["alpha"]["value"], serde_json::json!(["12"]));
}

#[test]
fn pipelines_compose() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r3", RANK_THREE);
    let once = write(&dir, "once", &stdout(&fresco(&["dual", "--delta", "12"], &input)));
    let twice = write(&dir, "twice", &stdout(&fresco(&["dual", "--delta", "12"], &once)));
    let report = json(&fresco(&["report"], &twice));
    assert_eq!(report["lambda"], serde_json::json!(["4", "5", "6"]));
    assert_eq!(report["beta"]["value"], "1");
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r4", RANK_FOUR);
    let first = stdout(&fresco(&["report"], &input));
    assert_eq!(first, stdout(&fresco(&["report"], &input)));
    let target = dir.path().join("out.json");
    let out = fresco(&["report", "--output", target.to_str().unwrap()], &input);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(target).unwrap(), first);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let not_geometric = write(&dir, "bad", "rank = 2\nlambda = 1/2, 2\nS1 = {0: 1}\n");
    let out = fresco(&["report"], &not_geometric);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("λ_j + j > k"));

    let malformed = write(&dir, "junk", "rank = 2\nlambda = 2, 3\nS1 = 1 + b\n");
    let out = fresco(&["report"], &malformed);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3: S1"));

    let short = write(&dir, "r4", RANK_FOUR);
    let out = fresco(&["semisimple", "--truncation", "3"], &short);
    assert_eq!(out.status.code(), Some(3));
    let message = String::from_utf8_lossy(&out.stderr).to_string();
    let suggested: usize = message
        .split("order ")
        .nth(2)
        .and_then(|s| s.split_whitespace().next())
        .and_then(|s| s.parse().ok())
        .expect("suggested order");
    let retried = fresco(&["semisimple", "--truncation", &suggested.to_string()], &short);
    assert!(retried.status.success());
    let below = fresco(&["semisimple", "--truncation", &(suggested - 1).to_string()], &short);
    assert_eq!(below.status.code(), Some(3));

    let theme = write(&dir, "theme", THEME);
    let out = fresco(&["dual", "--delta", "1"], &theme);
    assert_eq!(out.status.code(), Some(4));
    let out = fresco(&["beta"], &write(&dir, "r1", "rank = 1\nlambda = 2\n"));
    assert_eq!(out.status.code(), Some(4));
    let out = fresco(&["beta"], &short);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not semi-simple"));
}
