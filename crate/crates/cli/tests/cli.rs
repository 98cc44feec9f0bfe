//! End-to-end runs of the `mirror` binary: outputs, exit codes and files.

use std::path::PathBuf;
use std::process::{Command, Output};

use mirror_cli::formats::{from_toml, DiagramRecord, ThetaRecord};

fn data(f: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(f).display().to_string()
}

fn mirror(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mirror")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn a2_scatter_has_three_walls() {
    let o = mirror(&["scatter", &data("a2.toml"), "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let d: DiagramRecord = from_toml(&stdout(&o)).unwrap();
    assert_eq!(d.walls.len(), 3);
    assert_eq!(d.to_diagram().unwrap().generated_walls().count(), 1);
}

#[test]
fn torus_scatter_is_empty_and_theta_zero_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("torus.toml").display().to_string();
    let o = mirror(&["scatter", &data("torus.toml"), "--order", "3", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let d: DiagramRecord = from_toml(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(d.walls.is_empty());
    for (m, expect) in [("0,0", [0, 0]), ("1,0", [1, 0])] {
        let o = mirror(&["theta", &out, "--m", m]);
        assert_eq!(o.status.code(), Some(0));
        let t: ThetaRecord = from_toml(&stdout(&o)).unwrap();
        assert_eq!(t.series.base, expect.to_vec());
        assert_eq!(t.series.terms.len(), 1);
        assert_eq!(t.series.terms[0].coeff, "1");
    }
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "rank = [\n").unwrap();
    let o = mirror(&["scatter", bad.to_str().unwrap(), "--order", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    assert_eq!(mirror(&["scatter", &data("a2.toml")]).status.code(), Some(2));
    assert_eq!(mirror(&["toric", "P2", "product", "--a", "1,x", "--b", "0,1"]).status.code(), Some(2));
}

#[test]
fn verify_passes_on_a2_and_names_failures_on_a_corrupted_diagram() {
    let o = mirror(&["verify", &data("a2.toml"), "--order", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report = stdout(&o);
    for name in ["consistency", "associativity", "positivity", "frobenius", "theta-consistency", "cluster-exchange"] {
        assert!(report.contains(&format!("PASS {name}")), "{report}");
    }
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("a2.toml");
    mirror(&["scatter", &data("a2.toml"), "--order", "4", "--out", good.to_str().unwrap()]);
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, std::fs::read_to_string(&good).unwrap().replace("\"1\"", "\"2\"")).unwrap();
    let o = mirror(&["verify", bad.to_str().unwrap(), "--level", "quick"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL consistency"));
}

#[test]
fn toric_product_on_p2() {
    let o = mirror(&["toric", "P2", "product", "--a", "1,0", "--b", "-1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("q = [0, 0]"), "{s}");
    assert!(s.contains("intersections = [1, 1, 1]"), "{s}");
    let o = mirror(&["verify", &data("p2.toml")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn mutate_rejects_frozen_index() {
    let o = mirror(&["mutate", &data("a2.toml"), "--sequence", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(mirror(&["mutate", &data("a2.toml"), "--sequence", "3"]).status.code(), Some(2));
}
