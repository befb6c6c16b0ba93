use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perron-lab"))
        .args(args)
        .env("PERRON_LAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    for sub in [dir.to_path_buf(), dir.join("figures")] {
        let mut names: Vec<_> = std::fs::read_dir(&sub).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        for p in names.into_iter().filter(|p| p.is_file()) {
            out.push((p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()));
        }
    }
    out
}

#[test]
fn lattice_run_passes_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.json", r#"{ "experiment": "lattice", "seed": 1, "suites": { "random_rects": 20 } }"#);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let o = lab(&["lattice", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "5"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let text = String::from_utf8_lossy(&o.stdout);
        assert!(text.contains("PASS C1") && text.contains("PASS C2"), "{text}");
    }
    let files = read_all(&a);
    assert!(files.iter().any(|(n, _)| n == "report.json"));
    assert!(files.iter().any(|(n, _)| n == "metrics.csv"));
    assert_eq!(files, read_all(&b));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 5);
    for v in report["verdicts"].as_array().unwrap() {
        assert!(v["id"].as_str().unwrap().starts_with('C'));
    }
}

#[test]
fn trapezium_run_writes_its_figure() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.json", r#"{ "seed": 2, "suites": { "trapezium_cases": 10, "discrete_cases": [[1.0, 0.0]] } }"#);
    let out = tmp.path().join("o");
    let o = lab(&["trapezium", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(out.join("figures/construction.svg").is_file());
}

#[test]
fn config_errors_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let out = out.to_str().unwrap();
    let cases = [
        ("mismatch", r#"{ "experiment": "good", "seed": 1 }"#, "lattice"),
        ("unknown field", r#"{ "seed": 1, "colour": "red" }"#, "lattice"),
        ("missing seed", r#"{ "experiment": "lattice" }"#, "lattice"),
        ("unknown experiment", r#"{ "seed": 1 }"#, "everything"),
        ("bad blocks", r#"{ "seed": 1, "blocks": { "first": 3, "last": 1 } }"#, "bad"),
    ];
    for (name, text, exp) in cases {
        let cfg = write(tmp.path(), "c.json", text);
        let o = lab(&[exp, "--config", &cfg, "--out", out]);
        assert_eq!(o.status.code(), Some(1), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = lab(&["lattice", "--config", tmp.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exponential_directions_are_refused_with_a_reason() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "c.json",
        r#"{ "seed": 1, "directions": { "kind": "exponential", "base": 2.0, "count": 16 } }"#,
    );
    let o = lab(&["bad", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Perron factor") && err.contains("good experiment"), "{err}");
}

#[test]
fn non_lacunary_good_run_points_to_the_bad_experiment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.json", r#"{ "seed": 1, "directions": { "kind": "power", "s": 1.0, "count": 20 } }"#);
    let o = lab(&["good", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad experiment"));
}

#[test]
fn failing_verdicts_exit_with_two() {
    // at δ = 1 the unit square holds 4 points, far outside [1/2, 3/2]
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.json", r#"{ "seed": 1, "suites": { "density_deltas": [1.0], "random_rects": 5 } }"#);
    let o = lab(&["lattice", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("FAIL C1") && text.contains("PASS C2"), "{text}");
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        perron_lab::experiments::ExperimentConfig::load(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        n += 1;
    }
    assert!(n >= 8);
}
