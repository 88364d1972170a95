use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use zzm_core::field_linear::PrimeField;
use zzm_core::io::representation_to_json;
use zzm_core::quiver_rep::{Interval, Orientation, QuiverAn, Representation};

fn zzm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zzm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn interval_file(dir: &Path, name: &str, q: &QuiverAn, b: usize, d: usize) -> String {
    let m = Representation::interval(q, PrimeField::gf2(), Interval { b, d }).unwrap();
    write(dir, name, &representation_to_json(&m)).to_string_lossy().into_owned()
}

#[test]
fn remark_pair_distances() {
    let dir = TempDir::new().unwrap();
    let q = QuiverAn::new(7, Orientation::z1(7)).unwrap();
    let a = interval_file(dir.path(), "a.json", &q, 2, 7);
    let b = interval_file(dir.path(), "b.json", &q, 2, 6);
    let c = interval_file(dir.path(), "c.json", &q, 2, 2);
    let run = |metric: &str, x: &str, y: &str| {
        let o = zzm(&["distance", "--metric", metric, "--a", x, "--b", y]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o).trim().to_string()
    };
    assert_eq!(run("induced", &a, &b), "1");
    assert_eq!(run("block", &a, &b), "3/2");
    assert_eq!(run("induced", &a, &c), "3");
    assert_eq!(run("block", &a, &c), "3/2");
    let o = zzm(&["distance", "--metric", "induced", "--oracle", "--a", &a, "--b", &b]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn decompose_stalk_interval() {
    let dir = TempDir::new().unwrap();
    let q = QuiverAn::equioriented(4);
    let p = interval_file(dir.path(), "m.json", &q, 2, 3);
    let o = zzm(&["decompose", "--input", &p]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"intervals": [{"b": 2, "d": 3, "mult": 1}]}));
    let empty = write(dir.path(), "e.json", r#"{"intervals": []}"#);
    let o = zzm(&["decompose", "--input", empty.to_str().unwrap(), "--format", "dot"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("digraph barcode {"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"dims\": [1,");
    let o = zzm(&["decompose", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let q = QuiverAn::new(3, Orientation::z1(3)).unwrap();
    let a = interval_file(dir.path(), "a.json", &q, 1, 2);
    let o = zzm(&["distance", "--metric", "interleaving", "--a", &a, "--b", &a]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("equioriented"));

    let q = QuiverAn::equioriented(5);
    let x = interval_file(dir.path(), "x.json", &q, 1, 5);
    let o = Command::new(env!("CARGO_BIN_EXE_zzm"))
        .args(["distance", "--metric", "interleaving", "--oracle", "--a", &x, "--b", &x])
        .env("ZZM_ORACLE_CAP", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));

    let o = zzm(&["transport", "--n", "3", "--orientation", "f"]);
    assert_eq!(o.status.code(), Some(2));
    let o = zzm(&["compare", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = zzm(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ar_quiver_diagrams() {
    let o = zzm(&["ar-quiver", "--n", "3"]);
    let dot = stdout(&o);
    assert_eq!(dot.matches("label=").count(), 6);
    let o = zzm(&["ar-quiver", "--n", "3", "--derived", "--window", "1"]);
    let dot = stdout(&o);
    assert_eq!(dot.matches("label=").count(), 12);
    assert!(dot.contains("I[1,3][-1]"));
    let a = zzm(&["ar-quiver", "--n", "4", "--orientation", "bfb", "--format", "svg"]);
    let b = zzm(&["ar-quiver", "--n", "4", "--orientation", "bfb", "--format", "svg"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).matches("<text").count(), 10);
}

#[test]
fn transport_and_compare_tables() {
    let o = zzm(&["transport", "--n", "7", "--orientation", "bfbfbf"]);
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("source_interval,target_interval,degree,torsion_tag"));
    assert!(csv.contains("\"I[2,7]\",\"I[5,7]\",1,X_oc") || csv.contains("I[2,7],I[5,7],1,X_oc"), "{csv}");
    assert_eq!(csv.lines().count(), 1 + 28);

    let o = zzm(&["compare", "--n", "7"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("pair,class1,class2,d_zz,d_bl,relation"));
    assert!(csv.contains("\"(I[2,7],I[2,6])\",X_oc,X_o,1,3/2,bl>zz"), "{csv}");
}

#[test]
fn sheaf_metrics() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"bars": [{"lo": 1, "hi": 4, "lo_closed": false, "hi_closed": true}]}"#);
    let g = write(dir.path(), "g.json", r#"{"bars": [{"lo": 1, "hi": 4, "lo_closed": false, "hi_closed": false}]}"#);
    let o = zzm(&["distance", "--metric", "conv-nd", "--a", f.to_str().unwrap(), "--b", g.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "3/2");
    assert!(String::from_utf8_lossy(&o.stderr).contains("open summand"));

    let s = write(dir.path(), "s.json", r#"{"m": 6, "degrees": [{"i": 0, "bars": [{"lo": 1, "hi": 6, "lo_closed": true, "hi_closed": false}]}]}"#);
    let z = write(dir.path(), "z.json", r#"{"m": 6, "degrees": []}"#);
    let o = zzm(&["distance", "--metric", "conv-mplus", "--a", s.to_str().unwrap(), "--b", z.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "3");
    let bad = write(dir.path(), "bad.json", r#"{"m": 6, "degrees": [{"i": 0, "bars": [{"lo": 1, "hi": 9, "lo_closed": true, "hi_closed": false}]}]}"#);
    let o = zzm(&["distance", "--metric", "conv-mplus", "--a", bad.to_str().unwrap(), "--b", z.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[1,9)"));
}

#[test]
fn verify_suites_are_reproducible() {
    for suite in ["imt", "transport", "blocks", "isometry"] {
        let a = zzm(&["verify", "--suite", suite]);
        assert!(a.status.success(), "{suite}: {}", stdout(&a));
        assert!(stdout(&a).contains("checks passed"));
        let b = zzm(&["verify", "--suite", suite, "--seed", "0"]);
        assert_eq!(a.stdout, b.stdout);
    }
}
