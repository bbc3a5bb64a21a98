use std::path::Path;

use asym_graph::cli::main_with;

fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("asym-graph").chain(args.iter().copied()).map(String::from);
    let code = main_with(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const BOWTIE: &str = "0 1\n1 2\n0 2\n2 3\n3 4\n2 4\n";

#[test]
fn bowtie_connected_query() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BOWTIE);
    let o = dir.path().join("o.cc");
    let (code, _, err) = run(&["build", "--graph", &g, "--algo", "cc-sublinear", "--out", o.to_str().unwrap()], "");
    assert_eq!(code, 0, "{err}");
    let json: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(json["omega"], 16);
    let (code, out, _) = run(&["query", "--oracle", o.to_str().unwrap(), "--graph", &g, "--connected", "0", "4"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "true\n");
}

#[test]
fn batch_queries_on_every_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BOWTIE);
    let cases: &[(&str, &str, &str)] = &[
        ("decomp", "center 0\n", ""),
        ("cc-linear", "connected 0 4\ncomponent 1\n", "true\n"),
        ("cc-sublinear", "connected 1 3\n", "true\n"),
        ("bcc-linear", "bridge 2 3\narticulation 2\nbiconnected 0 4\n", "false\ntrue\nfalse\n"),
        ("bcc-sublinear", "bridge 2 3\narticulation 2\nbiconnected 0 1\ntwo-edge 0 4\n", "false\ntrue\ntrue\ntrue\n"),
    ];
    for (algo, input, prefix) in cases {
        let o = dir.path().join(format!("{algo}.o"));
        let (code, _, err) = run(&["build", "--graph", &g, "--algo", algo, "--out", o.to_str().unwrap()], "");
        assert_eq!(code, 0, "{algo}: {err}");
        let (code, out, err) = run(&["query", "--oracle", o.to_str().unwrap(), "--graph", &g], input);
        assert_eq!(code, 0, "{algo}: {err}");
        assert!(out.starts_with(prefix), "{algo}: {out}");
        assert_eq!(out.lines().count(), input.lines().count(), "{algo}");
    }
}

#[test]
fn verify_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.el");
    let (code, _, _) = run(&["gen", "--n", "150", "--seed", "2", "--out", g.to_str().unwrap()], "");
    assert_eq!(code, 0);
    for mode in ["cc", "bcc"] {
        let (code, _, err) = run(&["verify", "--graph", g.to_str().unwrap(), "--mode", mode, "--k", "5"], "");
        assert_eq!(code, 0, "{err}");
        assert!(!err.contains("MISMATCH"));
    }
}

#[test]
fn cost_prints_json_on_stdout_and_table_on_stderr() {
    let (code, out, err) = run(&["cost", "--n", "500", "--algo", "bcc-sublinear", "--omega", "64"], "");
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(json["omega"], 64);
    assert!(json["writes"].as_u64().unwrap() > 0);
    assert!(err.contains("writes"));
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(run(&["frobnicate"], "").0, 2);
    assert_eq!(run(&["build", "--graph", "/nonexistent/g.el"], "").0, 2);
    assert_eq!(run(&["cost", "--n", "10", "--k", "1"], "").0, 2);
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", "0 1\nnot an edge\n");
    assert_eq!(run(&["build", "--graph", &g], "").0, 2);
    let g = write(dir.path(), "h.el", BOWTIE);
    let o = write(dir.path(), "o", "garbage\n");
    assert_eq!(run(&["query", "--graph", &g, "--oracle", &o, "--connected", "0", "1"], "").0, 2);
}

#[test]
fn query_rejects_bad_lines_and_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BOWTIE);
    let o = dir.path().join("o");
    run(&["build", "--graph", &g, "--out", o.to_str().unwrap()], "");
    let o = o.to_str().unwrap();
    assert_eq!(run(&["query", "--graph", &g, "--oracle", o], "connected zero 1\n").0, 2);
    assert_eq!(run(&["query", "--graph", &g, "--oracle", o], "bridge 0 1\n").0, 2);
    assert_eq!(run(&["query", "--graph", &g, "--oracle", o], "connected 0 99\n").0, 2);
}

#[test]
fn verify_flags_a_mismatch() {
    // the bcc-linear path needs a connected graph; a disconnected one is a
    // usage error rather than a mismatch
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", "0 1\n2 3\n");
    let (code, _, _) = run(&["build", "--graph", &g, "--algo", "bcc-linear"], "");
    assert_eq!(code, 2);
}
