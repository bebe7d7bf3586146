//! End-to-end runs of the binary: every subcommand, every exit code.

use serde_json::Value;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kernelpack"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("kernelpack-cli-test-{name}"));
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn solve_answers_with_exit_codes() {
    let path = scratch("p4.g", "g 5 4\ne 0 1\ne 1 2\ne 2 3\ne 3 4\n");
    let file = path.to_str().unwrap();

    let yes = run(&["solve", "--problem", "p3", "--k", "1", file]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(json_of(&yes)["answer"], Value::Bool(true));

    let no = run(&["solve", "--problem", "p3", "--k", "2", file]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json_of(&no)["answer"], Value::Bool(false));

    let max = run(&["solve", "--problem", "star", "--d", "2", file]);
    assert_eq!(max.status.code(), Some(0));
    assert_eq!(json_of(&max)["maximum"], Value::from(1));
}

#[test]
fn bad_input_exits_3() {
    let missing = run(&["solve", "--problem", "p3", "/nonexistent/x.g"]);
    assert_eq!(missing.status.code(), Some(3));

    let garbled = scratch("garbled.g", "not a header\n");
    let parse = run(&["solve", "--problem", "p3", garbled.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(3));

    let cnf = scratch("wrongkind.cnf", "cnf 3 1\n1 2 3\n");
    let kind = run(&["solve", "--problem", "star", cnf.to_str().unwrap()]);
    assert_eq!(kind.status.code(), Some(3));

    let flag = run(&["solve", "--no-such-flag"]);
    assert_eq!(flag.status.code(), Some(3));

    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn kernelize_preserves_the_answer_through_files() {
    let gen = run(&[
        "gen", "--kind", "hypergraph", "--seed", "11", "--n-max", "10",
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let instance = json_of(&gen)["instance"].as_str().unwrap().to_string();
    let input = scratch("roundtrip.hg", &instance);
    let kernel_path = std::env::temp_dir().join("kernelpack-cli-test-roundtrip-kernel.hg");

    let kern = run(&[
        "kernelize",
        "--problem",
        "set-matching",
        "--k",
        "2",
        "--out",
        kernel_path.to_str().unwrap(),
        input.to_str().unwrap(),
    ]);
    assert_eq!(kern.status.code(), Some(0));
    let report = json_of(&kern);
    assert!(report["verdict"].is_string());
    assert!(report["output"]["edges"].as_u64().is_some());

    let before = run(&["solve", "--problem", "set-matching", "--k", "2", input.to_str().unwrap()]);
    let after = run(&[
        "solve", "--problem", "set-matching", "--k", "2", kernel_path.to_str().unwrap(),
    ]);
    assert_eq!(before.status.code(), after.status.code());
}

#[test]
fn pd_kernelize_reports_witnesses_and_trace() {
    let gen = run(&["gen", "--kind", "weighted", "--seed", "13", "--n-max", "9"]);
    let instance = json_of(&gen)["instance"].as_str().unwrap().to_string();
    let input = scratch("pd.wg", &instance);
    let out = run(&[
        "kernelize", "--problem", "pd", "--d", "3", "--k", "2",
        "--witnesses", "--trace", input.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert!(report["witnesses"].is_array());
    assert!(report["trace"]["entries"].is_array());
}

#[test]
fn gadget_switch_is_a_partitioned_instance() {
    let out = run(&["gadget", "switch", "--d", "3", "--s", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["vertices"], Value::from(8));
    assert_eq!(report["blocks"][0], serde_json::json!([0, 1]));
    let text = report["instance"].as_str().unwrap();
    let file = scratch("switch.phg", text);
    let solved = run(&["solve", "--problem", "perfect-matching", file.to_str().unwrap()]);
    // The full switch covers the block vertices of both blocks, so it has
    // no perfect matching until one block is handed to the outside.
    assert_eq!(solved.status.code(), Some(1));

    let small = run(&["gadget", "selector", "--d", "2", "--m", "2", "--s", "2"]);
    assert_eq!(small.status.code(), Some(3));
}

#[test]
fn compose_or_pdm_answers_the_or() {
    let yes = run(&[
        "gen", "--kind", "partite", "--plant", "--n-max", "6", "--seed", "5",
    ]);
    let no = run(&[
        "gen", "--kind", "partite", "--n-max", "6", "--seed", "29", "--prob", "0.1",
    ]);
    let yes_file = scratch("or-yes.phg", json_of(&yes)["instance"].as_str().unwrap());
    let no_file = scratch("or-no.phg", json_of(&no)["instance"].as_str().unwrap());

    // Sanity: the ingredients answer as planted.
    assert_eq!(
        run(&["solve", "--problem", "perfect-matching", no_file.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    let merged = run(&[
        "compose", "or-pdm",
        no_file.to_str().unwrap(),
        yes_file.to_str().unwrap(),
    ]);
    assert_eq!(merged.status.code(), Some(0));
    let report = json_of(&merged);
    assert_eq!(report["report"]["t"], Value::from(2));
    let file = scratch("or-merged.phg", report["instance"].as_str().unwrap());
    let solved = run(&["solve", "--problem", "perfect-matching", file.to_str().unwrap()]);
    assert_eq!(solved.status.code(), Some(0));

    let both_no = run(&[
        "compose", "or-pdm",
        no_file.to_str().unwrap(),
        no_file.to_str().unwrap(),
    ]);
    let file = scratch("or-merged-no.phg", json_of(&both_no)["instance"].as_str().unwrap());
    let solved = run(&["solve", "--problem", "perfect-matching", file.to_str().unwrap()]);
    assert_eq!(solved.status.code(), Some(1));
}

#[test]
fn compose_or_3sat_hits_its_clique_bound() {
    let sat = scratch("sat.cnf", "cnf 3 2\n1 2 3\n-1 -2 3\n");
    let unsat = scratch(
        "unsat.cnf",
        "cnf 3 8\n1 2 3\n1 2 -3\n1 -2 3\n1 -2 -3\n-1 2 3\n-1 2 -3\n-1 -2 3\n-1 -2 -3\n",
    );
    let out = run(&[
        "compose", "or-3sat", unsat.to_str().unwrap(), sat.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    let k = report["k"].as_u64().unwrap();
    // binomial(3,3) + d - 1 with d = 2.
    assert_eq!(k, 2);
    let file = scratch("or3sat.g", report["instance"].as_str().unwrap());
    let solved = run(&[
        "solve", "--problem", "clique", "--k", &k.to_string(), file.to_str().unwrap(),
    ]);
    assert_eq!(solved.status.code(), Some(0));

    // d = 3 emits a 3-uniform instance; the clique solver must still read
    // it, find k = binomial(3,3) + 2, and flip with the OR.
    for (tag, second, expect) in [("y", &sat, 0), ("n", &unsat, 1)] {
        let out = run(&[
            "compose", "or-3sat", "--d", "3",
            unsat.to_str().unwrap(), second.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let report = json_of(&out);
        assert_eq!(report["k"].as_u64().unwrap(), 3);
        assert!(report["instance"].as_str().unwrap().starts_with("hg 3 "));
        let file = scratch(&format!("or3sat-d3-{tag}.hg"), report["instance"].as_str().unwrap());
        let solved = run(&["solve", "--problem", "clique", "--k", "3", file.to_str().unwrap()]);
        assert_eq!(solved.status.code(), Some(expect));
    }
}

#[test]
fn verify_and_self_test_exit_codes() {
    let ok = run(&[
        "verify", "--problem", "set-matching", "--trials", "12", "--seed", "331",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let report = json_of(&ok);
    assert_eq!(report["failed"], Value::from(0));
    assert_eq!(report["trials"], Value::from(12));

    let bad = run(&[
        "verify", "--problem", "set-matching", "--trials", "6", "--seed", "331", "--self-test",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    let report = json_of(&bad);
    assert!(report["failed"].as_u64().unwrap() > 0);
    for dump in report["failures"].as_array().unwrap() {
        let _ = fs::remove_file(dump.as_str().unwrap());
    }
}

#[test]
fn curve_output_is_deterministic() {
    let args = [
        "curve", "--problem", "star", "--kmin", "2", "--kmax", "4",
        "--samples", "5", "--seed", "7", "--csv",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("k,mean_edges,max_edges,samples\n"));
    assert_eq!(text.lines().count(), 4);

    let json_run = run(&["curve", "--problem", "star", "--kmin", "2", "--kmax", "4", "--samples", "5", "--seed", "7"]);
    let report = json_of(&json_run);
    assert_eq!(report["points"].as_array().unwrap().len(), 3);
    assert!(report["slope"].is_number());
}

#[test]
fn gen_plants_solvable_instances() {
    let out = run(&[
        "gen", "--kind", "partite", "--plant", "--n-max", "9", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["planted"], Value::Bool(true));
    let file = scratch("planted.phg", report["instance"].as_str().unwrap());
    let solved = run(&["solve", "--problem", "perfect-matching", file.to_str().unwrap()]);
    assert_eq!(solved.status.code(), Some(0));

    let rerun = run(&[
        "gen", "--kind", "partite", "--plant", "--n-max", "9", "--seed", "3",
    ]);
    assert_eq!(json_of(&out)["instance"], json_of(&rerun)["instance"]);
}
