use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use weaklab::{builtins, run_scenario, Scenario};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_weaklab"));
    c.env_remove("WEAKLAB_WORKERS");
    c
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weaklab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(path: &Path) {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = schema();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{}: {errors:#?}", path.display());
}

fn base_scenario() -> serde_json::Value {
    serde_json::from_str(builtins::source("euclid1d_indicator").unwrap()).unwrap()
}

fn write_scenario(name: &str, v: &serde_json::Value) -> PathBuf {
    let path = tmp(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

#[test]
fn shipped_files_parse_and_run_on_the_library() {
    let names: Vec<_> = builtins::names().collect();
    assert!(names.len() >= 11);
    for name in names {
        let s = builtins::get(name).unwrap();
        assert_eq!(s.name, name);
        assert!(!s.suites.is_empty(), "{name} belongs to no suite");
        let back: Scenario = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
    let r = run_scenario(&builtins::get("euclid1d_indicator").unwrap(), 1, false).unwrap();
    assert!((r.limit.value.unwrap() - 4.0).abs() < 0.02);
    assert!(r.outcome.is_pass() && r.timing.is_none());
}

#[test]
fn run_builtin_writes_report_and_curve() {
    let out = tmp("indicator.json");
    let csv = tmp("indicator.csv");
    let o = bin()
        .args(["run", "--scenario", "builtin:euclid1d_indicator", "--out"])
        .arg(&out)
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_valid(&out);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let limit = report["limit"]["value"].as_f64().unwrap();
    assert!((limit - 4.0).abs() < 0.02);
    assert_eq!(report["seed"], 1);
    assert!(report["timing"].is_null());

    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    let header: Vec<_> = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(header, ["lambda", "D_value", "std_err", "mass", "method", "n_samples"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 57);
    assert_eq!(&rows[0][4], "exact_1d");
    let d0: f64 = rows[0][1].parse().unwrap();
    assert!((d0 - 4.0).abs() < 1e-3);
}

#[test]
fn asserted_failure_exits_zero() {
    let out = tmp("weighted.json");
    let o =
        bin().args(["run", "--scenario", "builtin:weighted_line_no_upper_bound", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_valid(&out);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let upper = report["verdicts"].as_array().unwrap().iter().find(|v| v["claim"] == "upper_bound").unwrap();
    assert_eq!(upper["status"], "fail");
    assert_eq!(upper["asserted"], "fail");
    assert_eq!(upper["met"], true);
}

#[test]
fn unmet_expectation_exits_one() {
    let mut v = base_scenario();
    v["expect"]["limit"] = "not_applicable".into();
    let path = write_scenario("unmet.json", &v);
    let o = bin().args(["run", "--scenario"]).arg(&path).arg("--out").arg(tmp("unmet-report.json")).output().unwrap();
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

type Edit = Box<dyn Fn(&mut serde_json::Value)>;

#[test]
fn config_errors_exit_two_and_name_the_field() {
    let cases: Vec<(&str, Edit, &str)> = vec![
        ("growth", Box::new(|v| v["growth"] = serde_json::json!({"kind": "exponential"})), "growth"),
        ("space", Box::new(|v| v["space"]["kind"] = "banach".into()), "space"),
        ("function", Box::new(|v| v["function"]["kind"] = "bump".into()), "function"),
        ("seed", Box::new(|v| drop(v.as_object_mut().unwrap().remove("seed"))), "seed"),
        ("budget", Box::new(|v| drop(v.as_object_mut().unwrap().remove("budget"))), "budget"),
        (
            "mc_budget",
            Box::new(|v| {
                v["policy"] = "monte_carlo".into();
                v["budget"] = 100.into();
            }),
            "budget",
        ),
        ("claim", Box::new(|v| v["expect"]["sideways"] = "pass".into()), "expect.sideways"),
        ("version", Box::new(|v| v["version"] = 7.into()), "version"),
    ];
    for (name, edit, field) in cases {
        let mut v = base_scenario();
        edit(&mut v);
        let path = write_scenario(&format!("bad-{name}.json"), &v);
        let o = bin().args(["run", "--scenario"]).arg(&path).arg("--out").arg(tmp("bad.json")).output().unwrap();
        assert_eq!(o.status.code(), Some(2), "{name}: {}", stderr(&o));
        assert!(stderr(&o).contains(field), "{name}: {}", stderr(&o));
    }
    let o = bin().args(["run", "--scenario", "builtin:nope", "--out"]).arg(tmp("x.json")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin().args(["run", "--scenario", "/nonexistent/file.json", "--out"]).arg(tmp("x.json")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_two() {
    let o = bin().args(["verify", "--suite", "medium"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_do_not_depend_on_workers() {
    let a = tmp("mc-1.json");
    let b = tmp("mc-8.json");
    let c = tmp("mc-env.json");
    for (path, workers) in [(&a, "1"), (&b, "8")] {
        let o = bin()
            .args(["run", "--scenario", "builtin:euclid1d_indicator_mc", "--workers", workers, "--out"])
            .arg(path)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let o = bin()
        .env("WEAKLAB_WORKERS", "3")
        .args(["run", "--scenario", "builtin:euclid1d_indicator_mc", "--out"])
        .arg(&c)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_eq!(read(&a), read(&c));
    assert_valid(&a);
}

#[test]
fn regularity_and_suite_reports_validate() {
    let out = tmp("reg.json");
    let o = bin().args(["regularity", "--scenario", "builtin:euclid2d_disk_p2", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_valid(&out);
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let avr = r["regularity"]["avr"]["value"].as_f64().unwrap();
    assert!((avr - std::f64::consts::PI).abs() < 0.005 * std::f64::consts::PI);

    let out = tmp("fast.json");
    let o = bin().args(["verify", "--suite", "fast", "--timing", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_valid(&out);
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(r["timing"]["wall_seconds"].as_f64().unwrap() >= 0.0);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().all(|l| l.starts_with("[PASS]")), "{stdout}");
}

#[test]
fn list_names_every_builtin() {
    let o = bin().arg("list").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for name in builtins::names() {
        assert!(text.contains(name));
    }
}
