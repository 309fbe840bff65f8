use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

struct Workdir(PathBuf);

impl Workdir {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("framelab-cli-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Workdir(dir)
    }

    fn path(&self, file: &str) -> PathBuf {
        self.0.join(file)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_framelab"))
            .args(args)
            .current_dir(&self.0)
            .env_remove("FRAMELAB_TOL")
            .output()
            .unwrap()
    }

    fn ok(&self, args: &[&str]) -> Value {
        let out = self.run(args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        if args.contains(&"-o") {
            // stdout carries only the summary line
            return Value::Null;
        }
        serde_json::from_slice(&out.stdout).unwrap()
    }

    fn write(&self, file: &str, contents: &str) {
        std::fs::write(self.path(file), contents).unwrap();
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.0).ok();
    }
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_and_analyze() {
    let w = Workdir::new("gen");
    let out = w.run(&["gen", "simplex", "--dim", "3", "-o", "s3.json"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("4 vectors"));
    assert_eq!(read(&w.path("s3.json"))["vectors"].as_array().unwrap().len(), 4);

    w.ok(&["gen", "simplex", "--dim", "2", "-o", "s2.json"]);
    let r = w.ok(&["analyze", "s2.json"]);
    assert_eq!(r["is_equiangular"], Value::Bool(true));
    assert!((f(&r["coherence"]) - 0.5).abs() < 1e-12);
    assert!((f(&r["welch_bound"]) - 0.5).abs() < 1e-12);

    w.ok(&["gen", "onb", "--dim", "4", "-o", "onb.json"]);
    let r = w.ok(&["analyze", "onb.json"]);
    assert!((f(&r["lower_bound"]) - 1.0).abs() < 1e-12 && (f(&r["upper_bound"]) - 1.0).abs() < 1e-12);
    assert!((f(&r["frame_potential"]) - 4.0).abs() < 1e-12);

    w.write("e1e1.json", r#"{"dim": 2, "field": "R", "vectors": [[1, 0], [1, 0]]}"#);
    let r = w.ok(&["analyze", "e1e1.json"]);
    assert!(f(&r["lower_bound"]).abs() < 1e-12);
    assert_eq!(r["is_parseval"], Value::Bool(false));

    w.ok(&[
        "gen", "harmonic", "--dim", "2", "--n", "5", "--sel", "1,2", "-o", "h.json",
    ]);
    assert_eq!(w.ok(&["analyze", "h.json"])["is_parseval"], Value::Bool(true));
}

#[test]
fn convert_roundtrip_and_errors() {
    let w = Workdir::new("convert");
    w.ok(&["gen", "onb", "--dim", "3", "--field", "R", "-o", "onb.json"]);
    let povm = w.ok(&["convert", "--to", "povm", "onb.json"]);
    assert_eq!(povm["effects"].as_array().unwrap().len(), 3);

    w.ok(&["gen", "parseval", "--dim", "2", "--n", "4", "-o", "p.json"]);
    w.ok(&["convert", "--to", "povm", "p.json", "-o", "p.povm.json"]);
    w.ok(&["convert", "--to", "frame", "p.povm.json", "-o", "back.json"]);
    assert_eq!(w.ok(&["analyze", "back.json"])["is_parseval"], Value::Bool(true));

    // grouped: the partition is recorded and reproduces the effects
    w.write(
        "grouped.json",
        r#"{"dim": 2, "field": "R", "vectors": [[1, 0], [0, 0.6], [0, 0.8]], "partition": [[0], [1, 2]]}"#,
    );
    w.ok(&["convert", "--to", "povm", "grouped.json", "-o", "grouped.povm.json"]);
    let back = w.ok(&["convert", "--to", "frame", "grouped.povm.json"]);
    assert_eq!(back["partition"].as_array().unwrap().len(), 2);
    w.write("g2.json", &serde_json::to_string(&back).unwrap());
    let again = w.ok(&["convert", "--to", "povm", "g2.json"]);
    let original = read(&w.path("grouped.povm.json"));
    for (a, b) in again["effects"]
        .as_array()
        .unwrap()
        .iter()
        .zip(original["effects"].as_array().unwrap())
    {
        let flat = |v: &Value| -> Vec<f64> {
            v.as_array()
                .unwrap()
                .iter()
                .flat_map(|row| {
                    row.as_array()
                        .unwrap()
                        .iter()
                        .flat_map(|z| z.as_array().unwrap().iter().map(f).collect::<Vec<_>>())
                })
                .collect()
        };
        for (x, y) in flat(a).iter().zip(flat(b)) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    w.write("bad.json", r#"{"dim": 2, "vectors": [[1, 0], [1, 0]]}"#);
    assert_eq!(w.run(&["convert", "--to", "povm", "bad.json"]).status.code(), Some(3));
    w.write("notpovm.json", r#"{"dim": 1, "effects": [[[0.5]]]}"#);
    assert_eq!(
        w.run(&["convert", "--to", "frame", "notpovm.json"]).status.code(),
        Some(3)
    );
}

#[test]
fn input_errors_exit_2() {
    let w = Workdir::new("input");
    assert_eq!(w.run(&["analyze", "missing.json"]).status.code(), Some(2));
    w.write("junk.json", "{not json");
    assert_eq!(w.run(&["analyze", "junk.json"]).status.code(), Some(2));
    assert_eq!(w.run(&["gen", "bjorck", "--p", "9"]).status.code(), Some(2));
    assert_eq!(w.run(&["gen", "harmonic", "--dim", "2"]).status.code(), Some(2));
    assert_eq!(w.run(&["gleason", "fit", "--spec", "cos2d:4"]).status.code(), Some(2));
    assert_eq!(w.run(&["gleason", "fit", "--spec", "nonsense"]).status.code(), Some(2));
    assert_eq!(w.run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn gleason_commands() {
    let w = Workdir::new("gleason");
    let r = w.ok(&["gleason", "fit", "--spec", "cos2d:2"]);
    assert!(f(&r["residual"]) <= 1e-10);
    let a = &r["operator"];
    assert!((f(&a[0][0][0]) - 2.0).abs() < 1e-10 && f(&a[1][1][0]).abs() < 1e-10);
    assert_eq!(r["seed"], Value::from(0));

    let out = w.run(&[
        "gleason",
        "verify-parseval",
        "--spec",
        "expnorm",
        "--dim",
        "2",
        "--n",
        "3",
    ]);
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["passed"], Value::Bool(false));
    let low = f(&r["witness"]["low"]["sum"][0]);
    let high = f(&r["witness"]["high"]["sum"][0]);
    assert!((low - (3.0 * (2.0f64 / 3.0).exp() - 3.0)).abs() < 1e-12);
    assert!((high - (2.0 * std::f64::consts::E - 2.0)).abs() < 1e-12);
    assert!(r["witness"]["low"]["frame"]["vectors"].is_array());
    let strict = w.run(&[
        "gleason",
        "verify-parseval",
        "--spec",
        "expnorm",
        "--dim",
        "2",
        "--n",
        "3",
        "--strict",
    ]);
    assert_eq!(strict.status.code(), Some(4));

    let r = w.ok(&[
        "gleason",
        "ladder",
        "--spec",
        "quadratic+const",
        "--n0",
        "4",
        "--n1",
        "8",
        "--dim",
        "2",
        "--trials",
        "30",
    ]);
    assert_eq!(r["passed"], Value::Bool(true));
    for step in r["steps"].as_array().unwrap() {
        assert!((f(&step["increment"][0]) - 0.5).abs() < 1e-9);
    }

    let r = w.ok(&[
        "gleason",
        "verify-onb",
        "--spec",
        r#"{"kind": "epsilon1d", "eps": 0.2}"#,
    ]);
    assert_eq!(r["passed"], Value::Bool(true));
    let r = w.ok(&["gleason", "counterexample", "--spec", "cos2d:6", "--trials", "50"]);
    assert_eq!(r["separates"], Value::Bool(true));
    let r = w.ok(&["gleason", "homogeneity", "--spec", "expnorm", "--samples", "20"]);
    assert_eq!(r["passed"], Value::Bool(false));
}

#[test]
fn cazac_commands() {
    let w = Workdir::new("cazac");
    w.ok(&["gen", "bjorck", "--p", "13", "-o", "b13.json"]);
    let r = w.ok(&["cazac", "test", "b13.json"]);
    assert_eq!(r["passed"], Value::Bool(true));
    assert!(f(&r["zac_residual"]) <= 1e-10);

    w.ok(&["gen", "bjorck", "--p", "7", "-o", "b7.json"]);
    let r = w.ok(&["cazac", "gabor", "b7.json"]);
    let mu = f(&r["coherence"]["coherence"]);
    assert!((0.35355..=1.13389).contains(&mu));
    assert_eq!(r["frame"]["vectors"].as_array().unwrap().len(), 49);

    w.ok(&["gen", "constant", "--length", "4", "-o", "ones4.json"]);
    let out = w.run(&["cazac", "ambiguity", "ones4.json"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(!csv.contains('\r'));
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert_eq!(row.len(), 4);
        assert!((row[0] - 1.0).abs() < 1e-15);
        assert!(row[1..].iter().all(|x| x.abs() < 1e-15));
    }
    assert_eq!(w.ok(&["cazac", "test", "ones4.json"])["passed"], Value::Bool(false));
    assert_eq!(
        w.run(&["cazac", "test", "ones4.json", "--strict"]).status.code(),
        Some(4)
    );

    w.write("weak.json", r#"{"length": 2, "entries": [1, 0.5]}"#);
    assert_eq!(w.run(&["cazac", "gabor", "weak.json"]).status.code(), Some(3));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let w = Workdir::new("determinism");
    for (i, args) in [
        vec!["gen", "parseval", "--dim", "3", "--n", "6", "--seed", "5"],
        vec![
            "gleason",
            "verify-parseval",
            "--spec",
            "quadratic",
            "--dim",
            "3",
            "--n",
            "5",
            "--seed",
            "9",
        ],
        vec!["experiment", "povm-roundtrip", "--trials", "20"],
    ]
    .iter()
    .enumerate()
    {
        let a = w.run(args);
        let b = w.run(args);
        assert!(a.status.success(), "{i}");
        assert_eq!(a.stdout, b.stdout);
    }
    let a = w.run(&["gen", "parseval", "--dim", "3", "--n", "6", "--seed", "5"]);
    let b = w.run(&["gen", "parseval", "--dim", "3", "--n", "6", "--seed", "6"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn tolerance_from_environment() {
    let w = Workdir::new("tol");
    w.write("near.json", r#"{"dim": 1, "field": "R", "vectors": [[1.000001]]}"#);
    let strict = w.ok(&["analyze", "near.json"]);
    assert_eq!(strict["is_parseval"], Value::Bool(false));
    let out = Command::new(env!("CARGO_BIN_EXE_framelab"))
        .args(["analyze", "near.json"])
        .current_dir(&w.0)
        .env("FRAMELAB_TOL", "1e-3")
        .output()
        .unwrap();
    let loose: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(loose["is_parseval"], Value::Bool(true));
}

#[test]
fn reports_record_seed_and_mode() {
    let w = Workdir::new("stamp");
    let r = w.ok(&["experiment", "harmonic", "--seed", "3", "--parallel"]);
    assert_eq!(r["seed"], Value::from(3));
    assert_eq!(r["mode"], Value::from("parallel"));
    assert_eq!(r["passed"], Value::Bool(true));
}
