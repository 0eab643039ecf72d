use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lab() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_inertia-lab"));
    c.env_remove("INERTIA_LAB_JOBS");
    c
}

fn run(args: &[&str]) -> Output {
    lab().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn construct(args: &[&str]) -> String {
    let out = run(&[&["construct"], args].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn construct_graph6() {
    assert_eq!(construct(&["std", "--name", "cycle", "--n", "5"]).trim(), "Dhc");
    assert_eq!(construct(&["std", "--name", "petersen"]).trim(), construct(&["johnson", "--n", "5", "--k", "2", "--l", "1"]).trim());
    let heawood = construct(&["incidence", "--q", "2"]);
    let g = inertia_core::graph6::decode_str(heawood.trim()).unwrap();
    assert_eq!((g.n(), g.edge_count()), (14, 21));
}

#[test]
fn construct_writes_file() {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("paley13.g6");
    let out = run(&["construct", "paley", "--q", "13", "--out", p.to_str().unwrap()]);
    assert!(out.status.success());
    let g = inertia_core::graph6::decode_str(fs::read_to_string(&p).unwrap().trim()).unwrap();
    assert_eq!(g.regular_degree(), Some(6));
}

#[test]
fn inertia_c5() {
    let c5 = scratch("c5.g6", "Dhc\n");
    let out = run(&["inertia", "--in", c5.to_str().unwrap(), "--exact", "--witness-search"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["unweighted_inertia"]["n_nonneg"], 3);
    assert_eq!(v["unweighted_inertia"]["mode"]["kind"], "exact");
    assert_eq!(v["best_witness"]["upper_bound"], 2);
    assert_eq!(v["best_witness"]["strategy"], "negated");
    assert_eq!(v["lower_bounds"]["alpha"], 2);
}

#[test]
fn theta_outputs() {
    let c5 = scratch("c5_theta.g6", "Dhc\n");
    let v = json(&run(&["theta", "--in", c5.to_str().unwrap()]));
    let (lo, hi) = (v["bracket"][0].as_f64().unwrap(), v["bracket"][1].as_f64().unwrap());
    assert!(lo <= 5f64.sqrt() + 1e-6 && 5f64.sqrt() - 1e-6 <= hi);

    let v = json(&run(&["theta", "johnson", "--n", "28", "--k", "3", "--l", "1", "--exact"]));
    assert_eq!(v["theta_exact"], "21/1");
    assert_eq!(v["prop32_value"], "75/4");
    assert!(v["warning"].is_null());

    let v = json(&run(&["theta", "johnson", "--n", "7", "--k", "3", "--l", "2", "--exact"]));
    assert!(v["warning"].as_str().unwrap().contains("outside verified regime"));
}

#[test]
fn scale_exit_codes() {
    let k3 = scratch("k3.g6", &construct(&["std", "--name", "complete", "--n", "3"]));
    let out = run(&["scale", "--in", k3.to_str().unwrap()]);
    assert!(out.status.success());
    for norm in json(&out)["row_norms"].as_array().unwrap() {
        assert!((norm.as_f64().unwrap() - 1.0).abs() < 1e-8);
    }
    // float inertia misclassifies the tiny eigenvalue before scaling
    let w = scratch("k3_weights.json", r#"{"dim":3,"lower_triangle_row_major":[0,1,0,1,1e-9,0]}"#);
    let out = run(&["scale", "--in", k3.to_str().unwrap(), "--weights", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let p3 = scratch("p3.g6", &construct(&["std", "--name", "path", "--n", "3"]));
    let out = run(&["scale", "--in", p3.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not scalable"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    let bad = scratch("bad.g6", "not graph6 at all ~~~\n");
    assert_eq!(run(&["inertia", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["inertia", "--in", "/nonexistent/file.g6"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "polarity", "--q", "4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "johnson", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "ng", "--max-n", "10"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["diagnose", "expander", "--gamma", "polarity_core_q", "--q", "3"]).status.code(), Some(2));
}

#[test]
fn verify_report_schema() {
    let out = run(&["verify", "srg", "--q", "13"]);
    assert!(out.status.success());
    let v = json(&out);
    for key in ["suite", "params", "records", "violations", "timing"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["suite"], "srg");
    assert!(v["timing"].is_null());
    assert!(v["violations"].as_array().unwrap().is_empty());

    let v = json(&run(&["verify", "expander", "--gamma", "heawood", "--timing"]));
    assert!(v["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn verify_csv() {
    let out = run(&["verify", "ng", "--max-n", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("graph6,n,edges,inertia_g,inertia_cog,product,sum"));
    assert_eq!(lines.count(), 1 + 1 + 2 + 6);
}

#[test]
fn verify_ng_from_file() {
    let g6 = scratch("mixed.g6", "Dhc\nDhc\nCr\n");
    let v = json(&run(&["verify", "ng", "--from-g6", g6.to_str().unwrap()]));
    assert_eq!(v["records"].as_array().unwrap().len(), 2);
}

#[test]
fn diagnose_heawood() {
    let out = run(&["diagnose", "expander", "--gamma", "heawood"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["all_ok"], true);
}

#[test]
fn reports_are_deterministic_across_jobs() {
    let report = |jobs: &str, args: &[&str]| {
        let out = lab().env("INERTIA_LAB_JOBS", jobs).args(args).output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    for args in [
        &["verify", "ng", "--max-n", "6"][..],
        &["verify", "johnson", "--k", "2"],
        &["verify", "expander", "--gamma", "incidence", "--q", "3"],
        &["verify", "srg", "--q", "5"],
    ] {
        let a = report("1", args);
        assert_eq!(a, report("1", args));
        assert_eq!(a, report("4", args), "{args:?}");
    }
    let p = scratch("pet.g6", &construct(&["std", "--name", "petersen"]));
    let args = ["inertia", "--in", p.to_str().unwrap(), "--witness-search", "--seed", "7"];
    assert_eq!(report("1", &args), report("3", &args));
    let flag = lab().args(["--jobs", "2"]).args(args).output().unwrap();
    assert_eq!(flag.stdout, report("1", &args));
}
