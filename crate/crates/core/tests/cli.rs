use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nilreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilreg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn crit_reports_three_halves_for_n4() {
    let o = nilreg(&["crit", "--group", "N4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "3/2");
}

#[test]
fn growth_of_z3_matches() {
    let o = nilreg(&["growth", "--group", "Z3", "--tolerance", "0.2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degrees"]["bass_guivarch"], 3);
    let fit: f64 = v["reports"][0]["fit"]["exponent"].as_str().unwrap().parse().unwrap();
    assert!((fit - 3.0).abs() <= 0.2);
    assert_eq!(v["reports"][0]["verdict"], "match");
}

#[test]
fn unknown_group_lists_the_catalog() {
    let o = nilreg(&["ball", "--group", "N9", "--radius", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(e.contains("N9") && e.contains("N3xN3") && e.contains("Z1"), "{e}");
}

#[test]
fn ball_budget_gives_partial_result() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = nilreg(&["ball", "--group", "N4", "--radius", "12", "--max-elements", "1000", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("n,count\n0,1\n"));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.csv.manifest.json")).unwrap()).unwrap();
    assert!(m["partial"].is_string());
}

#[test]
fn replay_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = nilreg(&["process", "--group", "N3", "--steps", "20", "--seeds", "3", "--seed-start", "5", "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(first.starts_with("seed,n,letter,coset,length\n"));
    assert_eq!(first.lines().count(), 1 + 3 * 21);
    let manifest = dir.path().join("p.csv.manifest.json");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["seeds"][0]["start"], 5);
    assert_eq!(m["seeds"][0]["count"], 3);
    std::fs::remove_file(&out).unwrap();
    let r = nilreg(&["replay", "--manifest", path(&manifest)]);
    assert!(r.status.success(), "{}", stderr(&r));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn realize_then_holder() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("s.json");
    let o = nilreg(&[
        "realize", "--group", "N3", "--witness", "K_ac", "--alpha", "0.75", "--radius", "6", "--jrange", "4", "--out", path(&sys),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("J raised"));
    let h = dir.path().join("h.csv");
    let o = nilreg(&["holder", "--system", path(&sys), "--generator", "b", "--out", path(&h)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&h).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("v,‖v‖,A_v,kappa_alpha,formula_bound"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    for r in rows {
        let cols: Vec<&str> = r.split(',').collect();
        assert_eq!(cols.len(), 5, "{r}");
        assert!(cols[2..].iter().all(|c| c.parse::<f64>().unwrap() >= 0.0));
    }
}

#[test]
fn canon_sorts_a_commutator() {
    let o = nilreg(&["canon", "--group", "N3", "--word", "b a b^-1 a^-1", "--trace-weights"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agree"], true);
    assert!(v["weights"].as_array().unwrap().len() >= 2);
}

#[test]
fn witness_verification_and_controls() {
    let o = nilreg(&["verify-witness", "--group", "N3", "--witness", "K_ac"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let controls = v["negative_controls"].as_array().unwrap();
    assert!(!controls.is_empty());
    assert!(controls.iter().all(|c| c["rejected_at"].is_string()));
}

#[test]
fn reproduce_first_criterion() {
    let o = nilreg(&["reproduce", "AC-1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("AC-1") && stdout(&o).contains("PASS"));
}

#[test]
fn catalog_regenerates_the_shipped_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("groups.json");
    let o = nilreg(&["catalog", "--write", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let shipped = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/catalog/groups.json")).unwrap();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), shipped);
}
