use std::collections::BTreeSet;
use std::process::{Command, Output};

use brstq::registry;
use serde_json::Value;

fn brstq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brstq")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn list_names_every_builtin() {
    let o = brstq(&["list"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    for c in registry::builtin() {
        assert!(out.contains(&c.name), "{}", c.name);
    }
}

#[test]
fn passing_run_exits_zero_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = brstq(&["run", "commuting-n2", "--format", "json", "--report", path.to_str().unwrap(), "--no-timing"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["scenario"], "commuting-n2");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["wall_time_ms"] == 0));
}

#[test]
fn failing_run_exits_one() {
    let o = brstq(&["run", "negative-control-qq"]);
    assert_eq!(code(&o), 1);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("FAIL koszul.acyclicity"));
    assert!(out.contains("complete intersection hypothesis failed"));
}

#[test]
fn io_and_usage_errors_exit_two() {
    let o = brstq(&["run", "commuting-n2", "--report", "/nonexistent/dir/report.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot"));
    assert_eq!(code(&brstq(&["run", "no-such-scenario"])), 2);
    assert_eq!(code(&brstq(&["run", "/nonexistent/scenario.toml"])), 2);
    assert_eq!(code(&brstq(&["run"])), 2);
    assert_eq!(code(&brstq(&["run", "s1-c4", "--format", "yaml"])), 2);
    assert_eq!(code(&brstq(&["check", "bogus", "s1-c4"])), 2);
    assert_eq!(code(&brstq(&["frobnicate"])), 2);
}

#[test]
fn config_file_and_single_stage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mine.toml");
    let mut c = registry::s1_c4();
    c.name = "mine".into();
    std::fs::write(&path, c.to_toml()).unwrap();
    let o = brstq(&["check", "acyclicity", path.to_str().unwrap(), "--format", "json", "--degree", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scenario"], "mine");
    assert_eq!(v["config"]["degree"], 4);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["koszul.acyclicity"]);

    std::fs::write(&path, "name = \"broken\"\nvariables = [").unwrap();
    assert_eq!(code(&brstq(&["run", path.to_str().unwrap()])), 2);
}

#[test]
fn show_prints_loadable_toml() {
    let o = brstq(&["show", "t2-c4"]);
    assert_eq!(code(&o), 0);
    let c = brstq::ScenarioConfig::from_toml(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(c, registry::t2_c4());
}

#[test]
fn text_output_is_byte_stable_without_timing() {
    let a = brstq(&["run", "angular-momentum-m2", "--no-timing"]);
    let b = brstq(&["run", "angular-momentum-m2", "--no-timing"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

fn strings(v: &Value) -> BTreeSet<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

/// The shipped schema names exactly the fields and enum values the report
/// serializes to.
#[test]
fn schema_matches_serialized_reports() {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let defs = &schema["$defs"];
    let o = brstq(&["run", "negative-control-qq", "--format", "json"]);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();

    for (value, def) in [(&report, &schema), (&report["config"], &defs["config"])] {
        assert_eq!(keys(value), keys(&def["properties"]));
        assert_eq!(keys(value), strings(&def["required"]));
    }
    let check_def = &defs["check"];
    let statuses = strings(&check_def["properties"]["status"]["enum"]);
    let stages = strings(&defs["stage"]["enum"]);
    for c in report["checks"].as_array().unwrap() {
        assert_eq!(keys(c), strings(&check_def["required"]));
        assert_eq!(keys(&c["residual"]), strings(&check_def["properties"]["residual"]["required"]));
        assert!(statuses.contains(c["status"].as_str().unwrap()));
        assert!(stages.contains(c["stage"].as_str().unwrap()));
    }
    let seen: BTreeSet<String> =
        report["checks"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap().to_string()).collect();
    assert_eq!(seen, statuses);
    assert!(strings(&schema["properties"]["verdict"]["enum"]).contains(report["verdict"].as_str().unwrap()));
}

#[test]
fn readme_scenario_runs() {
    let readme = include_str!("../../../README.md");
    let start = readme.find("```toml\n").expect("toml block") + "```toml\n".len();
    let end = start + readme[start..].find("```").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("readme.toml");
    std::fs::write(&path, &readme[start..end]).unwrap();
    let o = brstq(&["run", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}
