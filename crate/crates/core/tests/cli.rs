use std::process::{Command, Output};

use weilrep::suite::{Dump, SCHEMA};

fn weilrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilrep")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    weilrep(args).status.code().expect("exit code")
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["verify", "--case", "odd", "--q", "3", "--suite", "gauss,svn,weil"]), 0);
    assert_eq!(code(&["verify", "--case", "even", "--d", "1", "--suite", "svn,asp,mu4"]), 0);
    // The d = 1 extension has a section, so the non-split claim fails.
    assert_eq!(code(&["verify", "--case", "even", "--d", "1", "--suite", "split"]), 1);
    for bad in [
        &["verify", "--case", "odd", "--q", "4"][..],
        &["verify", "--case", "odd"],
        &["verify", "--case", "even", "--d", "3"],
        &["verify", "--case", "odd", "--q", "3", "--suite", "nope"],
        &["verify", "--case", "odd", "--q", "3", "--m", "0"],
        &["verify", "--q", "3"],
        &["dump", "nope", "--case", "odd", "--q", "3"],
        &["frobnicate"],
    ] {
        assert_eq!(code(bad), 2, "{bad:?}");
    }
    assert_eq!(code(&["list-suites"]), 0);
}

#[test]
fn json_is_deterministic() {
    let args = ["verify", "--case", "odd", "--q", "5", "--suite", "gauss,weil,svn", "--json"];
    let a = weilrep(&args);
    let b = weilrep(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["passed"], true);
}

#[test]
fn report_out_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = weilrep(&["verify", "--case", "odd", "--q", "3", "--suite", "gauss", "--json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
}

#[test]
fn dump_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    for (case, flag, value, object) in [
        ("odd", "--q", "3", "weil-generators"),
        ("odd", "--q", "5", "weil-character"),
        ("even", "--d", "1", "heisenberg-generators"),
        ("even", "--d", "1", "even-cocycle"),
    ] {
        let path = dir.path().join(format!("{object}.json"));
        let args = ["dump", object, "--case", case, flag, value, "--out", path.to_str().unwrap()];
        assert_eq!(code(&args), 0, "{args:?}");
        let text = std::fs::read_to_string(&path).unwrap();
        let dump = Dump::from_json(&text).unwrap();
        assert_eq!(dump.to_json().unwrap().trim_end(), text.trim_end());
        let again = weilrep(&args[..args.len() - 2]);
        assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
    }
}

#[test]
fn listing_names_every_suite() {
    let out = weilrep(&["list-suites", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    let names = |case: &str| -> Vec<String> {
        v["suites"][case].as_array().unwrap().iter().map(|e| e[0].as_str().unwrap().to_string()).collect()
    };
    assert_eq!(names("odd"), ["gauss", "weil", "svn", "twist", "restriction", "rho-prime", "tower", "twist-lemma"]);
    assert_eq!(names("even"), ["forms", "svn", "asp", "agsp", "split", "mu4"]);
}
