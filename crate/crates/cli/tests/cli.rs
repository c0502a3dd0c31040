use std::process::{Command, Output};

use serde_json::Value;

fn zerosum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerosum")).args(args).env_remove("ZEROSUM_WORKERS").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn group_info_counts_for_h27() {
    let o = zerosum(&["group", "info", "--heisenberg", "3", "--format", "structured"]);
    assert_eq!(code(&o), 0);
    let r = records(&o);
    assert_eq!(r[0]["schema"], "zerosum.run/v1");
    assert_eq!(r[0]["seed"], 0);
    let info = &r[1];
    assert_eq!(info["order"], 27);
    assert_eq!(info["exponent"], 3);
    assert_eq!(info["center"], 3);
    assert_eq!(info["conjugacy_classes"], 11);
    assert_eq!(info["z_classes"], 5);
    assert_eq!(info["automorphisms"], 432);
}

#[test]
fn group_spec_spellings_agree() {
    let a = zerosum(&["group", "info", "--group", "abelian", "3", "1,1", "--format", "structured"]);
    let b = zerosum(&["group", "info", "--group", "abelian 3 1,1", "--format", "structured"]);
    let c = zerosum(&["group", "info", "--abelian", "3", "1,1", "--format", "structured"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), stdout(&c));
}

#[test]
fn exported_table_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h27.txt");
    let o = zerosum(&["group", "export", "--heisenberg", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("zerosum-group v1"));
    let from_file = zerosum(&["group", "info", "--group-file", path.to_str().unwrap(), "--format", "structured"]);
    let built_in = zerosum(&["group", "info", "--heisenberg", "3", "--format", "structured"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(records(&from_file)[1], records(&built_in)[1]);
}

#[test]
fn davenport_of_h27_is_six() {
    let o = zerosum(&["verify", "davenport", "--heisenberg", "3", "--format", "structured"]);
    assert_eq!(code(&o), 0);
    let r = records(&o);
    assert_eq!(r[1]["value"], 6);
    assert_eq!(r[1]["status"], "exact");
    assert_eq!(r[2]["expected"], 6);
    assert_eq!(r[2]["witness_rechecked"], true);
}

#[test]
fn compute_constants_of_small_groups() {
    for (args, value) in [
        (vec!["compute", "d", "--cyclic", "9"], 8),
        (vec!["compute", "D", "--cyclic", "6"], 6),
        (vec!["compute", "s", "--abelian", "3", "1,1"], 9),
        (vec!["compute", "E", "--abelian", "3", "1,1"], 13),
    ] {
        let mut a = args.clone();
        a.extend(["--format", "structured"]);
        let o = zerosum(&a);
        assert_eq!(code(&o), 0, "{args:?}");
        assert_eq!(records(&o)[1]["value"], value, "{args:?}");
    }
}

#[test]
fn human_output_echoes_the_seed() {
    let o = zerosum(&["fuzz", "egz", "--p", "3", "--trials", "20", "--seed", "77"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("fuzz egz (seed 77,"));
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(code(&zerosum(&["compute", "d", "--group", "dihedral", "4"])), 2);
    assert_eq!(code(&zerosum(&["compute", "d", "--heisenberg", "4"])), 2);
    assert_eq!(code(&zerosum(&["extract", "27", "--seq", "x*3"])), 2);
    assert_eq!(code(&zerosum(&["compute", "d", "--cyclic", "5", "--resume"])), 2);
    assert_eq!(code(&zerosum(&["frobnicate"])), 2);
    // budget
    assert_eq!(code(&zerosum(&["compute", "d", "--heisenberg", "3", "--node-limit", "5"])), 3);
    assert_eq!(code(&zerosum(&["compute", "d", "--heisenberg", "3", "--budget", "2"])), 3);
    // failure: not an EGZ sequence
    assert_eq!(code(&zerosum(&["egz", "certify", "--heisenberg", "3", "--seq", "x y x^2 y^2"])), 1);
}

#[test]
fn egz_reorder_reaches_identity() {
    let o =
        zerosum(&["egz", "reorder", "--heisenberg", "3", "--seq", "x y xy x^2 y^2 x^2y^2", "--format", "structured"]);
    assert_eq!(code(&o), 0);
    let r = &records(&o)[1];
    let order: Vec<String> = r["order"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
    assert_eq!(order.len(), 6);
    assert_eq!(r["principal_elements"].as_array().unwrap().len(), 3);
}

#[test]
fn extract_27_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.txt");
    std::fs::write(&path, "# eleven of each\nx*11\ny*11\nx^2y*11\n").unwrap();
    let o = zerosum(&["extract", "27", "--seq", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code(&o), 0);
    let x = &records(&o)[1]["extraction"];
    assert_eq!(x["witness"]["terms"].as_array().unwrap().len(), 27);
    assert_eq!(x["witness"]["target"], 0);
}

#[test]
fn extract_7_reports_the_case() {
    let o = zerosum(&["extract", "7", "--seq", "x*3 y*3 xy", "--format", "structured"]);
    assert_eq!(code(&o), 0);
    assert_eq!(records(&o)[1]["extraction"]["case"], "ThreeThreeOne");
}

#[test]
fn structured_output_is_byte_identical() {
    let args = ["fuzz", "extract27", "--trials", "300", "--seed", "42", "--workers", "2", "--format", "structured"];
    let a = zerosum(&args);
    let b = zerosum(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    // Apart from the header, the worker count does not matter either.
    let mut one = args;
    one[7] = "1";
    let c = zerosum(&one);
    assert_eq!(records(&a)[1..], records(&c)[1..]);
}

#[test]
fn workers_flag_overrides_environment() {
    let run = |flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_zerosum"));
        c.args(["group", "info", "--cyclic", "3", "--format", "structured"]).env("ZEROSUM_WORKERS", "3");
        if let Some(w) = flag {
            c.args(["--workers", w]);
        }
        records(&c.output().unwrap())[0]["workers"].clone()
    };
    assert_eq!(run(None), 3);
    assert_eq!(run(Some("2")), 2);
}

#[test]
fn checkpoint_resume_finishes_the_search() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let cp = cp.to_str().unwrap();
    let base = ["compute", "d", "--cyclic", "9", "--checkpoint", cp, "--format", "structured"];
    let partial = zerosum(&[&base[..], &["--shard-limit", "1"]].concat());
    assert_eq!(code(&partial), 3);
    let resumed = zerosum(&[&base[..], &["--resume"]].concat());
    assert_eq!(code(&resumed), 0);
    let full = zerosum(&["compute", "d", "--cyclic", "9", "--format", "structured"]);
    let (r, f) = (&records(&resumed)[1], &records(&full)[1]);
    assert_eq!(r["value"], 8);
    assert_eq!(r["value"], f["value"]);
    assert_eq!(r["witnesses"], f["witnesses"]);
    assert_eq!(r["canonical_by_length"], f["canonical_by_length"]);
}

#[test]
fn gao_lower_bound_for_h27() {
    let o = zerosum(&["verify", "gao-lower-bound", "--heisenberg", "3", "--format", "structured"]);
    assert_eq!(code(&o), 0);
    assert_eq!(records(&o)[1]["bound"], 33);
}

#[test]
fn exhaustive_suites_pass() {
    for args in [
        vec!["verify", "cyclic-multiplicity-bound", "--n", "5"],
        vec!["verify", "extremal-coverage", "--abelian", "3", "1,1"],
        vec!["verify", "c3-selection"],
        vec!["verify", "case-tables"],
        vec!["verify", "long-subsequences", "--trials", "60"],
    ] {
        let o = zerosum(&args);
        assert_eq!(code(&o), 0, "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains(": verified"), "{args:?}");
    }
}
