use landau::cli::{emit_plot_data, PlotRow};
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn landau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landau")).args(args).env_remove("LANDAU_THREADS").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(landau(&["--help"]).status.code(), Some(0));
    assert_eq!(landau(&["--version"]).status.code(), Some(0));
    assert_eq!(landau(&[]).status.code(), Some(2));
    assert_eq!(landau(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(landau(&["solve", "--diagram", &data("box.json")]).status.code(), Some(2), "seed is mandatory");
    assert_eq!(landau(&["degrees", "--diagram", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(landau(&["degrees", "--diagram", &data("box.json"), "--format", "csv"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_landau"))
        .args(["degrees", "--diagram", &data("box.json")])
        .env("LANDAU_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degrees_of_the_worked_diagrams() {
    let v = json_of(&landau(&["degrees", "--diagram", &data("pentabox.json")]));
    assert_eq!(v["schema"], "landau.degrees/1");
    assert_eq!(v["ls_degree"], 4);
    assert_eq!(v["disc_degree"], serde_json::json!([8, 4]));
    let v = json_of(&landau(&["degrees", "--diagram", &data("box.json")]));
    assert_eq!(v["disc_degree"], serde_json::json!([2]));
    let v = json_of(&landau(&["degrees", "--diagram", &data("pentagon.json")]));
    assert_eq!(v["regime"], "SLS");
    assert_eq!(v["sls_per_line"], serde_json::json!([2, 2, 2, 2, 2]));
    let v = json_of(&landau(&["multidegree", "--diagram", &data("hexagon.json")]));
    assert_eq!(v["gamma_at_u"], 512);
}

#[test]
fn solve_output_feeds_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let out = landau(&["solve", "--diagram", &data("triangle.json"), "--seed", "5", "--output", first.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    assert_eq!(a["schema"], "landau.solve/1");
    assert_eq!(a["count"], 16);
    let f = first.to_str().unwrap();
    let b = json_of(&landau(&["solve", "--diagram", f, "--matrix", f, "--seed", "5"]));
    assert_eq!(a["diagram"], b["diagram"]);
    assert_eq!(a["matrix"], b["matrix"]);
    assert_eq!(a["count"], b["count"]);
}

#[test]
fn exact_discriminants_are_rational_strings() {
    for (file, kind) in [("box.json", "Box"), ("pentagon.json", "Pentagon"), ("pentabox.json", "Pentabox"), ("double_box.json", "DoubleBox")]
    {
        let v = json_of(&landau(&["disc", "--diagram", &data(file), "--seed", "2"]));
        assert_eq!(v["kind"], kind);
        let s = v["value"].as_str().unwrap();
        assert!(s.parse::<num_rational::BigRational>().is_ok(), "{}", s);
        let again = json_of(&landau(&["disc", "--diagram", &data(file), "--seed", "2"]));
        assert_eq!(v, again);
    }
}

#[test]
fn rational_fibers_are_exact() {
    let v = json_of(&landau(&["rational", "--diagram", &data("triangle_h.json"), "--seed", "3"]));
    assert_eq!(v["count"], 16);
    for s in v["solutions"].as_array().unwrap() {
        assert_eq!(s["residuals_zero"], true);
        assert_eq!(s["lines"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn plot_data_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_landau"))
            .args(["reality", "--diagram", &data("triangle.json"), "--seed", "9", "--trials", "6", "--format", "csv"])
            .env("LANDAU_THREADS", threads)
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("3");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("trial,seed,margin,value,real\n"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn empty_reports_give_a_header() {
    assert_eq!(emit_plot_data(&[]), "trial,seed,margin,value,real\n");
    let out = landau(&["copos", "--evaluator", "box", "--seed", "1", "--trials", "0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"trial,seed,margin,value,real\n");
    let row = PlotRow { trial: 3, seed: 7, margin: None, value: 0.5, real: true };
    assert_eq!(emit_plot_data(&[row]), "trial,seed,margin,value,real\n3,7,,0.5,true\n");
}

#[test]
fn violations_exit_4() {
    // with a zero tolerance no floating fiber counts as real
    let out = landau(&["reality", "--diagram", &data("triangle.json"), "--seed", "1", "--trials", "2", "--imag-tol", "0"]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["not_real"], 2);
    // sign changes of a factor not conjectured positive are not violations
    let out = landau(&["copos", "--evaluator", "tr_mixed", "--seed", "1", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let out = landau(&["copos", "--evaluator", "box", "--seed", "1", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn positroid_consistency() {
    let v = json_of(&landau(&["positroid", "--diagram", &data("three_mass_box.json"), "--consistency", "--seed", "4"]));
    assert_eq!(v["consistent"], true);
    assert_eq!(v["fiber_total"], 2);
    let v = json_of(&landau(&["positroid", "--diagram", &data("triangle.json"), "--sigma", "w"]));
    let c = &v["components"][0];
    assert_eq!((c["n"].as_u64(), c["k"].as_u64(), c["dimension"].as_u64()), (Some(18), Some(6), Some(24)));
    assert_eq!(c["bases_total"], 5184);
    assert_eq!(landau(&["positroid", "--diagram", &data("triangle.json"), "--consistency"]).status.code(), Some(2));
}
