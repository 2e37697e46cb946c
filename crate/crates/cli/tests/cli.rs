use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const T_Z2_Z2: &str = r#"{
  "ring": {"trivial_extension": {"module": {"regular": {"zn": 2}}}},
  "maps": {
    "zero0": {"images": [[0,0],[0,0]], "degree": 0},
    "zero1": {"images": [[0,0],[0,0]], "degree": 1},
    "zero_pair": {"pair_images": [[[0,0],[0,0]],[[0,0],[0,0]]]}
  }
}"#;

const TRI_Z3: &str = r#"{
  "ring": {"triangular": {"module": {"regular": {"zn": 3}}}},
  "maps": {
    "inner": {"images": [[0,1,0],[0,0,0],[0,2,0]], "degree": 1},
    "not_jsd": {"images": [[1,0,0],[0,0,0],[0,0,0]], "degree": 0}
  }
}"#;

const Z3: &str = r#"{"ring": {"zn": 3}, "maps": {"id": {"images": [[1]]}}}"#;

const T2_Z2: &str = r#"{
  "ring": {"upper_triangular": {"base": {"zn": 2}, "n": 2}}
}"#;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox {
            dir: TempDir::new().expect("temp dir"),
        }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, body).expect("write");
        p
    }
}

fn superder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superder"))
        .args(args)
        .output()
        .expect("run superder")
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn describe_trivial_extension() {
    let sb = Sandbox::new();
    let cfg = sb.file("t.json", T_Z2_Z2);
    let out = superder(&["--format", "json", "describe", p(&cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["order"], 4);
    assert_eq!(v["grading"]["even_size"], 2);
    assert_eq!(v["grading"]["odd_size"], 2);
    assert_eq!(v["module"]["two_torsion"], true);
    assert_eq!(v["two_torsion_free"], false);
}

#[test]
fn describe_triangular_reports_faithfulness() {
    let sb = Sandbox::new();
    let cfg = sb.file("tri.json", TRI_Z3);
    let v = json_of(&superder(&["--format", "json", "describe", p(&cfg)]));
    assert_eq!(v["order"], 27);
    assert_eq!(v["corner"]["faithful"], serde_json::json!([true, true]));
    assert_eq!(v["corner"]["left_two_torsion_free"], true);
}

#[test]
fn malformed_config_is_an_input_error() {
    let sb = Sandbox::new();
    let cfg = sb.file("bad.json", r#"{"ring": "#);
    let out = superder(&["describe", p(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let unknown = sb.file("unknown.json", r#"{"ring": {"zn": 2}, "extra": 1}"#);
    assert_eq!(superder(&["describe", p(&unknown)]).status.code(), Some(2));
}

#[test]
fn table_violating_ring_axioms_reports_a_witness() {
    let sb = Sandbox::new();
    let cfg = sb.file(
        "table.json",
        r#"{"ring": {"table": {"factors": [2], "products": [[[0]]], "one": [1]}}}"#,
    );
    let out = superder(&["--format", "json", "describe", p(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["verdict"], "fail");
    assert!(v["witness"].is_object());
}

#[test]
fn oversized_ring_is_refused() {
    let sb = Sandbox::new();
    let cfg = sb.file("big.json", r#"{"ring": {"zn": 100}}"#);
    let out = superder(&["--bound", "50", "describe", p(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
}

#[test]
fn zero_map_is_a_jordan_superderivation() {
    let sb = Sandbox::new();
    let cfg = sb.file("t.json", T_Z2_Z2);
    for (map, axiom) in [
        ("@zero0", "jordan-superderivation-deg0"),
        ("@zero1", "jordan-superderivation-deg1"),
        ("@zero_pair", "jordan-super-biderivation"),
    ] {
        let out = superder(&["--format", "json", "verify", p(&cfg), map, "--axiom", axiom]);
        assert_eq!(out.status.code(), Some(0), "{axiom}");
        assert_eq!(json_of(&out)["verdict"], "pass");
    }
}

#[test]
fn identity_is_not_a_derivation() {
    let sb = Sandbox::new();
    let cfg = sb.file("z3.json", Z3);
    let out = superder(&[
        "--format",
        "json",
        "verify",
        p(&cfg),
        "@id",
        "--axiom",
        "derivation",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["witness"]["inputs"], serde_json::json!([[1], [1]]));
}

#[test]
fn identity_is_caught_by_sampling() {
    let sb = Sandbox::new();
    let cfg = sb.file("z3.json", Z3);
    let args = |seed: &'static str| {
        superder(&[
            "--format",
            "json",
            "verify",
            p(&cfg),
            "@id",
            "--axiom",
            "derivation",
            "--sample",
            "200",
            "--seed",
            seed,
        ])
    };
    let (a, b) = (args("7"), args("7"));
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["mode"], "sampled");
}

#[test]
fn inner_derivation_on_upper_triangular_matrices() {
    let sb = Sandbox::new();
    let cfg = sb.file("t2.json", T2_Z2);
    // coordinates (a11, a12, a22); [E12, x] sends E11 to -E12 and E22 to E12
    let map = sb.file("ie12.json", r#"{"images": [[0,1,0],[0,0,0],[0,1,0]]}"#);
    let out = superder(&["verify", p(&cfg), p(&map), "--axiom", "derivation"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn wrong_map_shape_for_axiom() {
    let sb = Sandbox::new();
    let cfg = sb.file("t.json", T_Z2_Z2);
    let out = superder(&[
        "verify",
        p(&cfg),
        "@zero0",
        "--axiom",
        "jordan-biderivation",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = superder(&[
        "verify",
        p(&cfg),
        "@zero0",
        "--axiom",
        "jordan-superderivation-deg1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = superder(&["verify", p(&cfg), "@missing", "--axiom", "derivation"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_zero_pair() {
    let sb = Sandbox::new();
    let cfg = sb.file("t.json", T_Z2_Z2);
    let out = superder(&["--format", "json", "decompose", p(&cfg), "@zero0", "@zero1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["kind"], "trivial_extension");
    assert_eq!(v["holds"], true);
    assert!(v["checks"].as_array().is_some_and(|c| c.len() >= 8));
    assert_eq!(v["two_torsion"]["module_two_torsion"], true);
}

#[test]
fn decompose_inner_triangular_map() {
    let sb = Sandbox::new();
    let cfg = sb.file("tri.json", TRI_Z3);
    let out = superder(&["--format", "json", "decompose", p(&cfg), "@inner"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["kind"], "triangular");
    assert_eq!(v["components"]["m_star"], serde_json::json!([1]));
    assert_eq!(v["inner"]["element"], serde_json::json!([0, 1, 0]));
    assert_eq!(v["inner"]["verdict"], "pass");
}

#[test]
fn decompose_refuses_non_superderivation() {
    let sb = Sandbox::new();
    let cfg = sb.file("tri.json", TRI_Z3);
    let out = superder(&["--format", "json", "decompose", p(&cfg), "@not_jsd"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["verdict"], "fail");
    assert!(v["witness"].is_object());
}

#[test]
fn decompose_super_biderivation() {
    let sb = Sandbox::new();
    let cfg = sb.file("t.json", T_Z2_Z2);
    let out = superder(&["--format", "json", "decompose", p(&cfg), "@zero_pair"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["kind"], "super_biderivation");
}

#[test]
fn enumerate_counts() {
    let sb = Sandbox::new();
    let cfg = sb.file("t.json", T_Z2_Z2);
    for class in ["jordan-superderivation-deg0", "jordan-superderivation-deg1"] {
        let v = json_of(&superder(&[
            "--format",
            "json",
            "enumerate",
            p(&cfg),
            "--class",
            class,
        ]));
        assert_eq!(v["count"], 4, "{class}");
        assert_eq!(v["maps"].as_array().map(Vec::len), Some(4));
    }
    let z3 = sb.file("z3.json", Z3);
    let v = json_of(&superder(&[
        "--format",
        "json",
        "enumerate",
        p(&z3),
        "--class",
        "derivation",
    ]));
    assert_eq!(v["count"], 1);
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("timing_ms");
            m.values_mut().for_each(strip_timings);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

#[test]
fn suite_output_independent_of_workers() {
    let sb = Sandbox::new();
    let matrix = sb.file(
        "m.json",
        r#"{"entries": [
            {"name": "small", "ring": {"trivial_extension": {"module": {"regular": {"zn": 2}}}}},
            {"name": "tri", "ring": {"triangular": {"module": {"regular": {"zn": 3}}}}},
            {"name": "huge", "ring": {"trivial_extension": {"module": {"regular": {"zn": 101}}}}}
        ]}"#,
    );
    let run = |workers: &str| {
        let out = superder(&[
            "--format",
            "json",
            "--workers",
            workers,
            "suite",
            "--matrix",
            p(&matrix),
            "--mutations",
            "20",
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stdout)
        );
        let mut v = json_of(&out);
        strip_timings(&mut v);
        v
    };
    let one = run("1");
    assert_eq!(one, run("8"));
    let notices = one["notices"].as_array().expect("notices");
    assert!(notices
        .iter()
        .any(|n| n.as_str().is_some_and(|s| s.contains("huge"))));
}
