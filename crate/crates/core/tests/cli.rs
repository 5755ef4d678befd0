use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn robot_permute(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robot-permute"))
        .args(args)
        .output()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const SQUARE: &str = r#"{"points": [[1,1],[-1,1],[-1,-1],[1,-1]],
    "frames": {"kind": "pairwise_distinct", "seed": 5},
    "protocol": "VisitAllChirality", "rounds": 4}"#;

const CENTERED_SQUARE: &str = r#"{"points": [[1,1],[-1,1],[-1,-1],[1,-1],[0,0]],
    "frames": {"kind": "pairwise_distinct", "seed": 5},
    "protocol": "PROTOCOL", "rounds": 10}"#;

fn protocols_of(report: &serde_json::Value) -> Vec<(String, bool)> {
    report["protocols"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            (
                p["protocol"].as_str().unwrap().to_string(),
                p["feasible"].as_bool().unwrap(),
            )
        })
        .collect()
}

fn feasible(report: &serde_json::Value, name: &str) -> bool {
    protocols_of(report)
        .into_iter()
        .find(|(p, _)| p == name)
        .unwrap()
        .1
}

#[test]
fn simulate_square_writes_five_lines() {
    let dir = TempDir::new().unwrap();
    let scenario = write(&dir, "square.json", SQUARE);
    let trace = dir.path().join("square.jsonl");
    let out = robot_permute(&[
        "simulate",
        "--scenario",
        path_str(&scenario),
        "--trace",
        path_str(&trace),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count(), 5);

    let out = robot_permute(&[
        "verify",
        "--trace",
        path_str(&trace),
        "--spec",
        "visit-all",
        "--k",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let verdict: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["pass"], true);
}

#[test]
fn simulate_reports_protocol_errors() {
    let dir = TempDir::new().unwrap();
    let text = CENTERED_SQUARE.replace("PROTOCOL", "VisitAllChirality");
    let scenario = write(&dir, "c.json", &text);
    let trace = dir.path().join("c.jsonl");
    let out = robot_permute(&[
        "simulate",
        "--scenario",
        path_str(&scenario),
        "--trace",
        path_str(&trace),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotOrderable"));
    let last = std::fs::read_to_string(&trace)
        .unwrap()
        .lines()
        .last()
        .unwrap()
        .to_string();
    assert!(last.contains("\"error\":\"NotOrderable"));
}

#[test]
fn one_bit_trace_verifies_at_even_rounds() {
    let dir = TempDir::new().unwrap();
    let text = CENTERED_SQUARE.replace("PROTOCOL", "OneBitVisitAll");
    let scenario = write(&dir, "c.json", &text);
    let trace = dir.path().join("c.jsonl");
    let out = robot_permute(&[
        "simulate",
        "--scenario",
        path_str(&scenario),
        "--trace",
        path_str(&trace),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = robot_permute(&[
        "verify",
        "--trace",
        path_str(&trace),
        "--spec",
        "visit-all",
        "--k",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn overrides_rounds_and_seed() {
    let dir = TempDir::new().unwrap();
    let scenario = write(&dir, "square.json", SQUARE);
    let run = |seed: &str| {
        let out = robot_permute(&[
            "simulate",
            "--scenario",
            path_str(&scenario),
            "--rounds",
            "2",
            "--seed",
            seed,
        ]);
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run("1");
    assert_eq!(a.lines().count(), 3);
    assert_eq!(a, run("1"));
}

#[test]
fn identity_trace_fails_move_all() {
    let dir = TempDir::new().unwrap();
    let line0 = r#"{"round":0,"positions":[[0,0],[1,0]],"bits":[0,0],"moved":[false,false]}"#;
    let line1 = r#"{"round":1,"positions":[[0,0],[1,0]],"bits":[0,0],"moved":[false,false]}"#;
    let trace = write(&dir, "id.jsonl", &format!("{line0}\n{line1}\n"));
    let out = robot_permute(&[
        "verify",
        "--trace",
        path_str(&trace),
        "--spec",
        "move-all",
        "--k",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let verdict: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["violation"]["round"], 1);
    assert!(verdict["violation"]["reason"]
        .as_str()
        .unwrap()
        .contains("fixed point"));
}

#[test]
fn malformed_inputs_exit_3() {
    let dir = TempDir::new().unwrap();
    let bad_trace = write(&dir, "bad.jsonl", "{\"round\": 0, \"positions\": 7}\n");
    let out = robot_permute(&[
        "verify",
        "--trace",
        path_str(&bad_trace),
        "--spec",
        "visit-all",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let svg = dir.path().join("x.svg");
    let out = robot_permute(&[
        "render",
        "--trace",
        path_str(&bad_trace),
        "--svg",
        path_str(&svg),
    ]);
    assert_eq!(out.status.code(), Some(3));

    let bad = write(
        &dir,
        "bad.json",
        "{\n  \"points\": [[0, 0]],\n  \"rounds\": \"many\"\n}",
    );
    let out = robot_permute(&["classify", "--scenario", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let missing = dir.path().join("missing.json");
    let out = robot_permute(&["classify", "--scenario", path_str(&missing)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(robot_permute(&["demo", "thm7"]).status.code(), Some(3));
    assert_eq!(
        robot_permute(&["verify", "--spec", "visit-all"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn classify_reports_feasibility() {
    let dir = TempDir::new().unwrap();
    let classify = |name: &str, points: &str| {
        let text = format!(
            r#"{{"points": {points}, "frames": {{"kind": "identical"}}, "protocol": "VisitAllChirality", "rounds": 1}}"#
        );
        let scenario = write(&dir, name, &text);
        let out = robot_permute(&["classify", "--scenario", path_str(&scenario)]);
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()
    };
    let centered = classify("c.json", "[[1,1],[-1,1],[-1,-1],[1,-1],[0,0]]");
    assert_eq!(centered["class"]["in_c_dot"], true);
    assert!(!feasible(&centered, "VisitAllChirality"));
    assert!(feasible(&centered, "VotingVisitAll"));
    assert!(feasible(&centered, "OneBitVisitAll"));

    let trapezoid = classify("t.json", "[[-1,1],[1,1],[-2,-1],[2,-1]]");
    assert_eq!(
        trapezoid["symmetry"]["mirror_axes"]
            .as_array()
            .unwrap()
            .len(),
        1
    );
    assert!(feasible(&trapezoid, "VisitAllNoChirality"));

    let rectangle = classify("r.json", "[[2,1],[-2,1],[-2,-1],[2,-1]]");
    assert!(!feasible(&rectangle, "VisitAllNoChirality"));
    assert!(feasible(&rectangle, "MoveAllNoChirality"));
}

#[test]
fn render_writes_parseable_svg() {
    let dir = TempDir::new().unwrap();
    let text = CENTERED_SQUARE.replace("PROTOCOL", "OneBitVisitAll");
    let scenario = write(&dir, "c.json", &text);
    let trace = dir.path().join("c.jsonl");
    robot_permute(&[
        "simulate",
        "--scenario",
        path_str(&scenario),
        "--trace",
        path_str(&trace),
    ]);
    let svg = dir.path().join("c.svg");
    let out = robot_permute(&[
        "render",
        "--trace",
        path_str(&trace),
        "--svg",
        path_str(&svg),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let polylines = doc
        .descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .count();
    assert_eq!(polylines, 5);
    let markers = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle") && n.attribute("class") == Some("round"))
        .count();
    assert_eq!(markers, 5 * 10);
}

#[test]
fn demos_refuse_then_fail_when_forced() {
    for name in ["thm2", "thm3", "thm5", "thm9"] {
        let plain = robot_permute(&["demo", name]);
        assert_eq!(plain.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&plain.stdout).contains("NotOrderable"));
        let forced = robot_permute(&["demo", name, "--force", "--json"]);
        assert_eq!(forced.status.code(), Some(0));
        let report: serde_json::Value = serde_json::from_slice(&forced.stdout).unwrap();
        let kind = report["obstruction"]["kind"].as_str().unwrap();
        assert!(
            kind == "collision" || kind == "spec_violation",
            "{name}: {kind}"
        );
    }
    let thm3: serde_json::Value =
        serde_json::from_slice(&robot_permute(&["demo", "thm3", "--force", "--json"]).stdout)
            .unwrap();
    assert_eq!(thm3["obstruction"]["round"], 3);
}
