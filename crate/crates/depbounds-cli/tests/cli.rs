//! End-to-end tests of the binary: round-trips, output formats, exit codes,
//! and worker-count independence.

use std::path::Path;
use std::process::{Command, Output};

fn depbounds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depbounds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn result_of(out: &Output) -> serde_json::Value {
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(out)).expect("json output");
    doc["result"].clone()
}

fn write_gen(dir: &Path, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.push("--out");
    let path_str = path.to_str().unwrap().to_owned();
    full.push(&path_str);
    let out = depbounds(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path
}

#[test]
fn gen_output_round_trips_through_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write_gen(dir.path(), "c5.json", &["cycle", "--n", "5"]);

    let nu = depbounds(&["invariant", "nu-star", "--input", c5.to_str().unwrap()]);
    assert!(nu.status.success());
    assert_eq!(result_of(&nu)["value"], "5/2");

    let chi = depbounds(&["invariant", "chi-star", "--input", c5.to_str().unwrap()]);
    assert!(chi.status.success());
    assert_eq!(result_of(&chi)["value"], "5/2");

    let chi_b = depbounds(&[
        "invariant",
        "chi-b",
        "--b",
        "2",
        "--input",
        c5.to_str().unwrap(),
    ]);
    assert_eq!(result_of(&chi_b)["value"], "5");

    // identical to the in-memory pipeline
    let g = depbounds::cycle_graph(5).unwrap();
    let (value, _) = depbounds::invariants::fractional_chromatic_number(&g).unwrap();
    assert_eq!(depbounds::rational::format_rational(&value), "5/2");
}

#[test]
fn gen_counts_match_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let t5 = write_gen(dir.path(), "t5.json", &["triangles", "--n", "5"]);
    let h = depbounds::Hypergraph::from_json(&std::fs::read_to_string(&t5).unwrap()).unwrap();
    assert_eq!((h.vertex_count(), h.edge_count()), (10, 10));

    let p6 = write_gen(
        dir.path(),
        "p6.json",
        &["paths", "--n", "6", "--k", "3", "--u", "0", "--v", "1"],
    );
    let h = depbounds::Hypergraph::from_json(&std::fs::read_to_string(p6).unwrap()).unwrap();
    assert_eq!(h.edge_count(), 12); // C(4,2)·2!

    let nu = depbounds(&["invariant", "nu-star", "--input", t5.to_str().unwrap()]);
    assert_eq!(result_of(&nu)["value"], "10/3");
}

#[test]
fn bound_csv_has_schema_and_exact_value() {
    let out = depbounds(&[
        "bound", "degree", "--n", "4", "--d", "1", "--p", "0.5", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config:"));
    assert_eq!(
        lines.next().unwrap(),
        "bound_name,n,p,t,eps,value,log_value,certificate_id"
    );
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "degree_absence");
    assert_eq!(fields[1], "4");
    let value: f64 = fields[5].parse().unwrap();
    assert!((value - 25.0 / 64.0).abs() < 1e-12);
}

#[test]
fn bound_bennett_reports_both_forms() {
    let out = depbounds(&[
        "bound",
        "bennett",
        "--S",
        "1",
        "--t",
        "1",
        "--chi-star",
        "1",
    ]);
    assert!(out.status.success());
    let rows = result_of(&out);
    assert_eq!(rows[0]["name"], "bennett");
    let value = rows[0]["value"].as_f64().unwrap();
    assert!((value - std::f64::consts::E / 4.0).abs() < 1e-12);
    assert_eq!(rows[1]["name"], "bennett_janson23");
}

#[test]
fn bound_subcommands_all_evaluate() {
    let cases: [&[&str]; 6] = [
        &[
            "bound",
            "chernoff-kl",
            "--nv",
            "100",
            "--q",
            "0.5",
            "--eps",
            "0.1",
            "--chi-star",
            "5/2",
        ],
        &["bound", "janson", "--q", "0.3", "--m", "10", "--delta", "0"],
        &["bound", "janson", "--qv", "0.1,0.2,0.3", "--delta", "0.05"],
        &["bound", "janson-triangle", "--n", "6", "--p", "0.5"],
        &[
            "bound", "ramon", "--phi", "10", "--p", "0.5", "--eps", "0.3",
        ],
        &["bound", "path", "--n", "9", "--k", "4", "--p", "0.3"],
    ];
    for args in cases {
        let out = depbounds(args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let rows = result_of(&out);
        let value = rows[0]["value"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&value), "{args:?} value {value}");
    }
    // degree-regular form of ramon
    let out = depbounds(&[
        "bound", "ramon", "--edges", "10", "--d", "3", "--p", "0.125", "--eps", "0.2",
    ]);
    assert!(out.status.success());
    assert_eq!(result_of(&out)[0]["name"], "ramon_degree_regular");
}

#[test]
fn verify_commands_succeed_on_theorem_instances() {
    let ex1 = depbounds(&["verify", "example1", "--p", "0.5"]);
    assert!(ex1.status.success());
    let r = result_of(&ex1);
    assert_eq!(r["holds"], true);
    assert_eq!(r["p_all_ones"], "3/16");

    let finner = depbounds(&[
        "verify", "finner", "--gen", "cycle", "--n", "5", "--p", "0.5",
    ]);
    assert!(finner.status.success());
    assert_eq!(result_of(&finner)["holds"], true);

    let holder = depbounds(&["verify", "holder", "--gen", "cycle", "--n", "5", "--b", "2"]);
    assert!(holder.status.success());
    let r = result_of(&holder);
    assert_eq!(r["chi_b"], 5);
    assert_eq!(r["holds"], true);
}

#[test]
fn compare_reports_rows_and_crossover() {
    let out = depbounds(&[
        "compare",
        "triangles",
        "--n",
        "5",
        "--p-grid",
        "0.1:0.9:0.1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let data_rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("p,"))
        .count();
    assert_eq!(data_rows, 9);
    assert!(text.lines().any(|l| l.starts_with("# crossovers:")));

    let json = depbounds(&["compare", "triangles", "--n", "8"]);
    let r = result_of(&json);
    assert_eq!(r["rows"].as_array().unwrap().len(), 99);
    assert_eq!(r["rows"][0]["winner"], "janson");
    assert_eq!(r["rows"][98]["winner"], "finner");
    assert_eq!(r["crossovers"].as_array().unwrap().len(), 1);
}

#[test]
fn simulate_is_seeded_and_worker_count_independent() {
    let args = [
        "simulate",
        "independence",
        "--gen",
        "cycle",
        "--n",
        "5",
        "--p",
        "0.5",
        "--samples",
        "50000",
        "--seed",
        "42",
    ];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_depbounds"))
            .args(args)
            .env("DEPBOUNDS_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        stdout_str(&out)
    };
    let single = run("1");
    let multi = run("4");
    assert_eq!(single, multi);
    let doc: serde_json::Value = serde_json::from_str(&single).unwrap();
    assert_eq!(doc["result"]["seed"], 42);
    assert_eq!(doc["config"]["seed"], 42);
}

#[test]
fn simulate_tail_uses_matching_threshold() {
    let out = depbounds(&[
        "simulate",
        "tail",
        "--gen",
        "triangles",
        "--n",
        "5",
        "--p",
        "0.5",
        "--eps",
        "0.2",
        "--samples",
        "20000",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let r = result_of(&out);
    let estimate = r["estimate"].as_f64().unwrap();
    // bound exp(−2·(10/3)·0.04) ≈ 0.766 plus Monte Carlo slack
    assert!(estimate <= 0.8, "estimate {estimate}");
}

#[test]
fn exit_codes_distinguish_usage_cap_and_success() {
    // 0: success
    let ok = depbounds(&["gen", "cycle", "--n", "5"]);
    assert_eq!(ok.status.code(), Some(0));

    // 1: usage errors (unknown flag, missing required, bad grid)
    let bad_flag = depbounds(&["gen", "cycle", "--frobnicate"]);
    assert_eq!(bad_flag.status.code(), Some(1));
    let missing = depbounds(&["bound", "bennett", "--S", "1"]);
    assert_eq!(missing.status.code(), Some(1));
    let empty_grid = depbounds(&[
        "compare",
        "triangles",
        "--n",
        "5",
        "--p-grid",
        "0.9:0.1:0.1",
    ]);
    assert_eq!(empty_grid.status.code(), Some(1));

    // 1: parse error on a malformed input file
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{broken").unwrap();
    let parse = depbounds(&["invariant", "nu-star", "--input", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(1));

    // 2: enumeration cap exceeded (25-vertex graph)
    let vertices: Vec<String> = (0..25).map(|i| format!("v{i}")).collect();
    let big = serde_json::json!({ "vertices": vertices, "edges": [["v0", "v1"]] });
    let big_path = dir.path().join("big.json");
    std::fs::write(&big_path, big.to_string()).unwrap();
    let cap = depbounds(&[
        "invariant",
        "chi-star",
        "--input",
        big_path.to_str().unwrap(),
    ]);
    assert_eq!(cap.status.code(), Some(2));

    // help exits 0
    let help = depbounds(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}
