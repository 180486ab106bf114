use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn trigon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tables_are_byte_exact() {
    for k in 1..=5 {
        let o = trigon(&["tables", "--which", &k.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let want = std::fs::read_to_string(fixture(&format!("table{k}.txt"))).unwrap();
        assert_eq!(stdout(&o), want, "table {k}");
    }
}

#[test]
fn singer_and_quad_reproduce_tables() {
    let o = trigon(&["singer", "--q", "2", "--modulus", "1,1,0,1", "--format", "table"]);
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("table3.txt")).unwrap());
    let o = trigon(&["quad", "--q", "2", "--kappa", "2/9=-1", "--format", "table"]);
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("table2.txt")).unwrap());
}

#[test]
fn enumerate_quadratic_example() {
    let f = fixture("exquad.json");
    let o = trigon(&["enumerate", "--from-json", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "8 presentations, 2 isomorphism classes\n");
}

#[test]
fn verify_exit_codes() {
    let bad = fixture("bad.json");
    let o = trigon(&["verify", "--from-json", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("axiom 2"));
    let good = fixture("octahedron.json");
    assert_eq!(trigon(&["verify", "--from-json", good.to_str().unwrap()]).status.code(), Some(0));
    for k in ["3", "4", "5"] {
        assert_eq!(trigon(&["verify", "--table", k]).status.code(), Some(0));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(trigon(&["singer", "--q", "6"]).status.code(), Some(2));
    assert_eq!(trigon(&["singer", "--q", "2", "--kappa", "3=-1"]).status.code(), Some(2));
    assert_eq!(trigon(&["tables", "--which", "6"]).status.code(), Some(2));
    assert_eq!(trigon(&["verify"]).status.code(), Some(2));
    assert_eq!(trigon(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn strict_and_lenient_loading() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("rot.json");
    std::fs::write(&p, r#"{"n": 2, "T": [[1,2,1],[2,2,2]]}"#).unwrap();
    let o = trigon(&["verify", "--from-json", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("T[0]"));
    let o = trigon(&["--lenient", "verify", "--from-json", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn export_octahedron() {
    let f = fixture("octahedron.json");
    let o = trigon(&["export", "--from-json", f.to_str().unwrap(), "--invariants", "--order", "1000"]);
    assert_eq!(
        stdout(&o),
        "F := FreeGroup(2);\nG := F / [ F.1*F.1*F.2, F.2*F.2*F.2 ];\n\
         # abelianization: torsion [6], free rank 0\n# order: 6\n"
    );
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("certs.json");
    let a = trigon(&["exotic", "--q", "3", "--all-kappa"]);
    let b = trigon(&["--workers", "1", "exotic", "--q", "3", "--all-kappa", "-o", p.to_str().unwrap()]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(stdout(&a), std::fs::read_to_string(&p).unwrap());
    assert!(stdout(&a).contains("\"Inconclusive\""));
}

#[test]
fn opp_properties_and_presentations() {
    let o = trigon(&["opp", "--q", "4", "--properties", "--incidence", "--all-kappa"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["presentations"].as_array().unwrap().len(), 2);
    assert_eq!(v["incidence"]["disagreements"], 0);
    assert_eq!(trigon(&["opp", "--q", "3", "--all-kappa"]).status.code(), Some(2));
}

#[test]
fn graph_metrics() {
    let o = trigon(&["graph", "--table", "5", "--metrics"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["metrics"]["vertices"], 24);
    assert_eq!(v["metrics"]["girth"], 6);
    assert_eq!(v["metrics"]["diameter"], 4);
    let o = trigon(&["graph", "--singer", "2", "--edges"]);
    assert_eq!(stdout(&o).lines().count(), 21);
}
