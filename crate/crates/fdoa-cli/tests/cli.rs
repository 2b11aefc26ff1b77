use std::path::Path;
use std::process::{Command, Output};

fn fdoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdoa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const EV_HALF: [&str; 10] = [
    "--v11", "0", "--v12", "1", "--v21", "0", "--v22", "1", "--d", "1/2",
];

fn files_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn identities_pass_and_are_deterministic() {
    let a = fdoa(&["check-identities", "--n", "3", "--seed", "11"]);
    let b = fdoa(&["check-identities", "--n", "3", "--seed", "11"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(stdout(&a), stdout(&b));
    let last = stdout(&a).lines().last().unwrap().to_string();
    let summary: serde_json::Value = serde_json::from_str(&last).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["scenarios"], 3);
}

#[test]
fn unknown_identity_is_a_usage_error() {
    let o = fdoa(&[
        "check-identities",
        "--n",
        "1",
        "--inject-fault",
        "no_such_identity",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scenario_errors_exit_two() {
    assert_eq!(
        fdoa(&["dump", "--v11", "1", "--d", "2"]).status.code(),
        Some(2)
    );
    let mut args = vec!["dump"];
    args.extend(EV_HALF);
    args[10] = "one half";
    assert_eq!(fdoa(&args).status.code(), Some(2));
    assert_eq!(
        fdoa(&["dump", "--scenario", "/nonexistent/scenario.txt"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(fdoa(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn scenario_file_matches_inline_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    std::fs::write(&path, "v11=0\nv12=1\nv21=0\nv22=1\nd=1/2\n").unwrap();
    let from_file = fdoa(&["dump", "--scenario", path.to_str().unwrap()]);
    let mut args = vec!["dump"];
    args.extend(EV_HALF);
    let inline = fdoa(&args);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&inline));
}

#[test]
fn dump_is_stable() {
    let mut args = vec!["dump"];
    args.extend(EV_HALF);
    let a = fdoa(&args);
    let b = fdoa(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("# Qtilde [Z]"));
}

#[test]
fn zero_velocity_dump_reduces_to_product() {
    let o = fdoa(&[
        "dump", "--v11", "0", "--v12", "0", "--v21", "0", "--v22", "0", "--d", "3",
    ]);
    let text = stdout(&o);
    let qz = text
        .split("# Qtilde [Z]\n")
        .nth(1)
        .unwrap()
        .lines()
        .next()
        .unwrap();
    assert_eq!(qz, "-3 * z0*z1");
}

#[test]
fn singularities_emit_json_lines() {
    let mut args = vec!["singularities"];
    args.extend(EV_HALF);
    let o = fdoa(&args);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(!lines.is_empty());
    let z_points = lines
        .iter()
        .filter(|v| v["variety"] == "Z" && v.get("point").is_some())
        .count();
    assert_eq!(z_points, 6);
}

#[test]
fn trace_writes_both_formats_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "trace",
        "--grid",
        "64",
        "--out",
        dir.path().to_str().unwrap(),
    ];
    args.extend(EV_HALF);
    let o = fdoa(&args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(files_in(dir.path()), ["trace.csv", "trace.svg"]);
    let svg = std::fs::read_to_string(dir.path().join("trace.svg")).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
}

#[test]
fn trace_csv_only() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "trace",
        "--csv",
        "--grid",
        "64",
        "--out",
        dir.path().to_str().unwrap(),
    ];
    args.extend(EV_HALF);
    assert_eq!(fdoa(&args).status.code(), Some(0));
    assert_eq!(files_in(dir.path()), ["trace.csv"]);
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("y1,y2,branch,alpha"));
}

#[test]
fn alpha_sweep_names_files_by_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let o = fdoa(&[
        "trace",
        "--alpha-sweep",
        "0.25:0.75:0.25",
        "--svg",
        "--grid",
        "64",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(
        files_in(dir.path()),
        [
            "trace_alpha_0.25.svg",
            "trace_alpha_0.5.svg",
            "trace_alpha_0.75.svg"
        ]
    );
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn trace_rejects_bad_config() {
    let mut args = vec!["trace", "--grid", "4"];
    args.extend(EV_HALF);
    assert_eq!(fdoa(&args).status.code(), Some(2));
}
