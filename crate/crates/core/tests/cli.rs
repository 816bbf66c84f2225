use std::process::Command;

use serde_json::Value;

fn selfsim(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_selfsim")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out) = selfsim(args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn scalar_outputs() {
    assert_eq!(selfsim(&["is-trivial", "--group", "catalog:grigorchuk", "--word", "adadadad"]), (0, "true\n".into()));
    assert_eq!(selfsim(&["is-trivial", "--group", "catalog:grigorchuk", "--word", "adada"]), (0, "false\n".into()));
    assert_eq!(
        selfsim(&["act", "--group", "catalog:adding_machine", "--word-input", "000", "--element", "a"]),
        (0, "100\n".into())
    );
    assert_eq!(
        selfsim(&["act", "--group", "catalog:adding_machine", "--word-input", "(1)", "--element", "a"]),
        (0, "(0)\n".into())
    );
    assert_eq!(selfsim(&["restrict", "--group", "catalog:grigorchuk", "--element", "b", "--vertex", "1"]), (0, "c\n".into()));
    assert_eq!(
        selfsim(&["equiv", "--group", "catalog:grigorchuk", "--left", "(1)01", "--right", "(1)00"]),
        (0, "true\n".into())
    );
    assert_eq!(selfsim(&["finite-state", "--matrix", "1/2,-1/2;1/2,1/2"]), (0, "true\n".into()));
    assert_eq!(selfsim(&["finite-state", "--matrix", "3/2"]), (0, "false\n".into()));
    assert_eq!(selfsim(&["semigroup", "successor", "--m", "11"]), (0, "12\n".into()));
    assert_eq!(
        selfsim(&["semigroup", "apply", "--table", "catalog:penrose", "--map", "M", "--word", "(ca)"]),
        (0, "(ca)\n".into())
    );
}

#[test]
fn json_outputs() {
    let v = json(&["order", "--group", "catalog:grigorchuk", "--element", "ab"]);
    assert_eq!(v["order"], 16);
    let v = json(&["level-order", "--group", "catalog:grigorchuk", "--level", "5"]);
    assert_eq!(v["order"], "4194304");
    assert_eq!(v["log2"], 22);
    let v = json(&["hausdorff", "--group", "catalog:grigorchuk", "--level", "5"]);
    assert_eq!(v["value"], "22/31");
    let v = json(&["nucleus", "--group", "catalog:adding_machine"]);
    assert_eq!(v["size"], 3);
    let v = json(&["contracting", "--group", "catalog:lamplighter", "--cap", "50"]);
    assert_eq!(v["contracting"], "inconclusive");
    let v = json(&["growth", "--group", "catalog:img_z2_minus_1", "--basepoint", "(1)", "--radius", "8"]);
    assert_eq!(v["sizes"], serde_json::json!([1, 2, 3, 5, 6, 8, 11, 13, 15]));
    let v = json(&["spectrum", "--group", "catalog:fabrykowski_gupta", "--level", "2", "--unnormalized"]);
    let s6 = 6f64.sqrt();
    let values: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(values.len(), 4);
    for (got, want) in values.iter().zip([1.0 - s6, 1.0, 1.0 + s6, 4.0]) {
        assert!((got - want).abs() < 1e-9, "{values:?}");
    }
    assert_eq!(v["tol"], 1e-10);
    let v = json(&["detq-check", "--level", "3", "--samples", "4", "--seed", "5"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 5);
    let v = json(&["digit-automaton", "--system", "catalog:dragon", "--vector", "1,0"]);
    assert_eq!(v["num_states"], 7);
    let v = json(&["tile-render", "--system", "catalog:dyadic", "--depth", "5"]);
    assert_eq!((v["min"].as_str(), v["max"].as_str()), (Some("0"), Some("31/32")));
    let v = json(&["catalog", "list"]);
    assert!(v.as_array().unwrap().iter().any(|e| e["name"] == "penrose" && e["kind"] == "rule-table"));
}

#[test]
fn graph_and_image_outputs() {
    let (code, dot) = selfsim(&["schreier", "--group", "catalog:grigorchuk", "--level", "2", "--simplicial"]);
    assert_eq!(code, 0);
    assert_eq!(
        dot,
        "graph {\n  v0 [label=\"00\"];\n  v1 [label=\"01\"];\n  v2 [label=\"10\"];\n  v3 [label=\"11\"];\n  v0 -- v1;\n  v0 -- v2;\n  v1 -- v3;\n}\n"
    );
    let (_, csv) = selfsim(&["schreier", "--group", "catalog:adding_machine", "--level", "1", "--format", "csv"]);
    assert!(csv.starts_with("src,dst,label\n"));
    let out = Command::new(env!("CARGO_BIN_EXE_selfsim"))
        .args(["tile-render", "--system", "catalog:dragon", "--depth", "8", "--resolution", "32"])
        .output()
        .unwrap();
    assert!(out.stdout.starts_with(b"P5\n32 32\n255\n"));
    assert_eq!(out.stdout.len(), b"P5\n32 32\n255\n".len() + 32 * 32);
}

#[test]
fn files_and_errors() {
    let dir = std::env::temp_dir().join(format!("selfsim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ssg = dir.join("z.ssg");
    std::fs::write(&ssg, "group z alphabet 2\na = perm(0 1) [1, a]\n").unwrap();
    let ds = dir.join("half.ds.json");
    std::fs::write(&ds, r#"{"matrix":[["1/2"]],"digits":[[0],[1]]}"#).unwrap();
    let (code, out) = selfsim(&["act", "--group", ssg.to_str().unwrap(), "--element", "a^3", "--word-input", "000"]);
    assert_eq!((code, out.as_str()), (0, "110\n"));
    let v = json(&["digit-automaton", "--system", ds.to_str().unwrap(), "--vector", "1"]);
    assert_eq!(v["num_states"], 2);

    assert_eq!(selfsim(&["order", "--group", "catalog:missing", "--element", "a"]).0, 1);
    assert_eq!(selfsim(&["act", "--group", "catalog:grigorchuk", "--element", "a", "--word-input", "012"]).0, 1);
    assert_eq!(selfsim(&["level-order", "--group", "catalog:grigorchuk", "--level", "30"]).0, 1);
    assert_eq!(selfsim(&["level-order", "--group", "catalog:grigorchuk"]).0, 2);
    assert_eq!(selfsim(&["no-such-command"]).0, 2);
    let (code, help) = selfsim(&["spectrum", "--help"]);
    assert_eq!(code, 0);
    assert!(help.contains("hecke_matrix"));
    std::fs::remove_dir_all(dir).unwrap();
}
