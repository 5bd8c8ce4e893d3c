use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn bsp(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bsp")).args(args).output().expect("runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("json output")
}

#[test]
fn bs_check_overlapping_pair() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.json", r#"{"points":["0","1","2"],"balls":[["0","1"],["1","2"]]}"#);
    let (code, out) = bsp(&["bs", "check", &f, "--format", "json"]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["report"]["tree_like"], false);
    assert_eq!(v["result"]["ci_added"].as_array().unwrap().len(), 0);
}

#[test]
fn bs_check_over_bound_is_refused() {
    let dir = TempDir::new().unwrap();
    let balls: Vec<String> = (0..5).map(|i| format!("[\"{i}\"]")).collect();
    let f = write(&dir, "b.json", &format!(r#"{{"points":["0","1","2","3","4"],"balls":[{}]}}"#, balls.join(",")));
    let (code, out) = bsp(&["bs", "check", &f, "--max-balls", "3"]);
    assert_eq!(code, 2);
    assert!(out.contains("tree-like: yes"), "{out}");
}

#[test]
fn parse_errors_give_position_and_exit_2() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", "{\n  \"points\": [\"a\",\n");
    let (code, out) = bsp(&["bs", "check", &f]);
    assert_eq!(code, 2);
    assert!(out.contains("bad.json:3:"), "{out}");
    let (code, _) = bsp(&["bs", "check", &dir.path().join("missing.json").display().to_string()]);
    assert_eq!(code, 2);
}

#[test]
fn generated_space_validates_and_mutation_is_caught() {
    let dir = TempDir::new().unwrap();
    let (code, out) = bsp(&["gen", "um", "--n", "6", "--values", "narrow", "--depth", "2", "--seed", "9"]);
    assert_eq!(code, 0);
    let f = write(&dir, "um.json", &out);
    assert_eq!(bsp(&["um", "validate", &f]).0, 0);
    assert_eq!(bsp(&["um", "delta", &f]).0, 0);
    assert_eq!(bsp(&["um", "balls", &f]).0, 0);

    let mut v = json(&out);
    let bottom = v["gamma"]["bottom"].clone();
    v["d"][0][1] = bottom.clone();
    v["d"][1][0] = bottom;
    let g = write(&dir, "bad.json", &v.to_string());
    let (code, out) = bsp(&["um", "validate", &g, "--format", "json"]);
    assert_eq!(code, 1);
    let w = &json(&out)["result"]["witness"];
    assert_eq!(w["axiom"], "U1");
    assert_eq!((w["x"].as_str(), w["y"].as_str()), (Some("0"), Some("1")));
}

#[test]
fn json_output_is_deterministic() {
    let a = bsp(&["example", "ex2", "--samples", "8", "--format", "json"]);
    let b = bsp(&["example", "ex2", "--samples", "8", "--format", "json"]);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
    let c = bsp(&["suite", "all", "--trials", "5", "--format", "json"]);
    let d = bsp(&["suite", "all", "--trials", "5", "--format", "json"]);
    assert_eq!(c.0, 0, "{}", c.1);
    assert_eq!(c, d);
}

#[test]
fn saved_witness_reverifies() {
    let dir = TempDir::new().unwrap();
    let (code, out) = bsp(&["example", "ex2", "--samples", "8", "--format", "json"]);
    assert_eq!(code, 0);
    let w = json(&out)["result"]["witnesses"][0].clone();
    let f = write(&dir, "w.json", &w.to_string());
    assert_eq!(bsp(&["bs", "witness", &f]).0, 0);

    let mut broken = w;
    broken["overall"] = broken["sampled"][0]["intersection"].clone();
    let g = write(&dir, "broken.json", &broken.to_string());
    let (code, _) = bsp(&["bs", "witness", &g]);
    assert_ne!(code, 0);
}

#[test]
fn tau_without_smallest_set() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "t.json", r#"{"points":["a","b","c"],"tau":[["a","b"],["a","b","c"]]}"#);
    assert_eq!(bsp(&["um", "from-tau", &ok]).0, 0);
    let bad = write(&dir, "u.json", r#"{"points":["a","b","c"],"tau":[["a","b","c"],["a","b"],["a","b","c"]]}"#);
    assert_eq!(bsp(&["um", "from-tau", &bad]).0, 0);
    let two = write(&dir, "v.json", r#"{"points":["a","b","c"],"tau":[["a","b","c"]]}"#);
    assert_eq!(bsp(&["um", "from-tau", &two]).0, 0);
    let none = write(&dir, "w.json", r#"{"points":["a","b","c","d"],"tau":[["a","b","c"],["a","b","d"]]}"#);
    let (code, out) = bsp(&["um", "from-tau", &none, "--format", "json"]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(json(&out)["result"]["witness"]["minimal"].as_array().unwrap().len(), 2);
}

#[test]
fn sierpinski_and_discrete_topologies() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "s.json", r#"{"points":["0","1"],"closed_sets":[[],["0"],["0","1"]]}"#);
    let (code, out) = bsp(&["topo", "induce", &s, "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["t1"], false);
    let d = write(&dir, "d.json", r#"{"points":["0","1","2"],"closed_sets":[[],["0"],["1"],["2"],["0","1"],["0","2"],["1","2"],["0","1","2"]]}"#);
    let (code, out) = bsp(&["topo", "induce", &d, "--format", "json"]);
    assert_eq!(code, 0);
    let r = &json(&out)["result"];
    assert_eq!((r["t1"].as_bool(), r["antichain"].as_bool()), (Some(true), Some(true)));
    let bad = write(&dir, "b.json", r#"{"points":["0","1"],"closed_sets":[["0"],["0","1"]]}"#);
    assert_eq!(bsp(&["topo", "induce", &bad]).0, 2);
}

#[test]
fn poset_commands() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "p.json",
        r#"{"elements":["a","b","c","d"],"covers":[["a","c"],["b","c"],["b","d"]]}"#,
    );
    let (code, out) = bsp(&["poset", "width", &f, "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["width"], 2);
    assert_eq!(bsp(&["poset", "cover", &f]).0, 0);
    assert_eq!(bsp(&["poset", "decompose", &f]).0, 0);
    let cyclic = write(&dir, "c.json", r#"{"elements":["a","b"],"covers":[["a","b"],["b","a"]]}"#);
    assert_eq!(bsp(&["poset", "width", &cyclic]).0, 2);
}

#[test]
fn examples_and_bad_flags() {
    assert_eq!(bsp(&["example", "ex1", "--truncation", "6", "--samples", "8"]).0, 0);
    assert_eq!(bsp(&["example", "rank", "--depth", "2"]).0, 0);
    assert_eq!(bsp(&["example", "rank", "--depth", "9"]).0, 2);
    assert_eq!(bsp(&["example", "ex2", "--samples", "3"]).0, 2);
    assert_eq!(bsp(&["suite", "all", "--trials", "0"]).0, 2);
    assert!(Path::new(env!("CARGO_BIN_EXE_bsp")).exists());
}

#[test]
fn symbolic_space_check() {
    let dir = TempDir::new().unwrap();
    let s = serde_json::to_string(&bsp_core::constructions::ex2_space()).unwrap();
    let f = write(&dir, "ex2.json", &s);
    let (code, out) = bsp(&["bs", "check", &f, "--samples", "12", "--format", "json"]);
    assert_eq!(code, 0, "{out}");
    let names: Vec<String> = json(&out)["result"]["new_families"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["name"].as_str().unwrap().to_string())
        .collect();
    assert!(names.contains(&"ci(C)".to_string()), "{names:?}");
}
