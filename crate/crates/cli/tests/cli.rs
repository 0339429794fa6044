use std::path::Path;
use std::process::{Command, Output};

fn biquad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biquad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn f_of_39() {
    let o = biquad(&["f", "39"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn even_input_is_a_domain_error() {
    let o = biquad(&["f", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd squarefree"));
    assert_eq!(biquad(&["f", "45"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(biquad(&["f", "abc"]).status.code(), Some(2));
    assert_eq!(biquad(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(biquad(&["decompose", "1", "2"]).status.code(), Some(2));
}

#[test]
fn rk4_of_non_generic_n() {
    let o = biquad(&["rk4", "21"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("f = "));
    assert!(out.contains("non-generic: rank not determined"));
    assert_eq!(stdout(&biquad(&["rk4", "39"])), "1\n");
}

#[test]
fn json_uses_csv_field_names() {
    let out = stdout(&biquad(&["rk4", "39", "--json"]));
    assert_eq!(
        out.trim(),
        r#"{"n":39,"omega1":1,"omega3":1,"generic":true,"f":2,"rk4":1,"exceptional":true}"#
    );
    let out = stdout(&biquad(&["profile", "15", "--json"]));
    assert_eq!(out.trim(), r#"{"n":15,"omega1":1,"omega3":1,"generic":true}"#);
    let out = stdout(&biquad(&["f", "21", "--json"]));
    assert!(out.contains(r#""rk4":null"#));
}

#[test]
fn symbols() {
    assert_eq!(stdout(&biquad(&["symbol", "7", "-1-2i"])), "-1\n");
    assert_eq!(stdout(&biquad(&["symbol", "3", "-3"])), "0\n");
    // factored and unfactored moduli agree
    let auto = stdout(&biquad(&["symbol", "2+i", "-15"]));
    let factored = stdout(&biquad(&["symbol", "2+i", "-1-2i*-1+2i*-3*-1"]));
    assert_eq!(auto, factored);
    assert_eq!(biquad(&["symbol", "1", "2"]).status.code(), Some(1));
    assert_eq!(biquad(&["symbol", "1", "3*5"]).status.code(), Some(1));
}

#[test]
fn factor_prints_gaussian_primes() {
    let out = stdout(&biquad(&["factor", "15"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["15 = 3 * 5", "unit -1", "-3", "-1-2i", "-1+2i"]);
}

#[test]
fn genus_and_ranks() {
    assert_eq!(stdout(&biquad(&["gn", "15"])), "1\n3\n5\n15\n");
    assert_eq!(stdout(&biquad(&["rk2", "39"])), "1\n");
    assert_eq!(stdout(&biquad(&["nu", "15"])), "32\n");
}

#[test]
fn printed_gaussian_integers_reparse() {
    let out = stdout(&biquad(&["decompose", "1+2i", "1-2i", "3", "1"]));
    for line in out.lines() {
        let value = line.split_whitespace().nth(1).unwrap();
        let again = stdout(&biquad(&["symbol", value, "1"]));
        assert_eq!(again, "1\n", "{value}");
    }
}

#[test]
fn table_lists_33_integers() {
    let out = stdout(&biquad(&["table"]));
    let rows = out
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .count();
    assert_eq!(rows, 33);
    assert!(out.contains("# omega3=1: 78 generic, 31 exceptional"));
    assert!(out.contains("# omega3=2: 18 generic, 2 exceptional"));
}

#[test]
fn sweep_writes_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.csv");
    let report = dir.path().join("report.csv");
    let o = biquad(&[
        "sweep",
        "--max",
        "1000",
        "--chunk",
        "97",
        "--workers",
        "2",
        "--records",
        records.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
        "--checkpoints",
        "100,500",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rep = read(&report);
    assert_eq!(rep.lines().next(), Some("x,mt,s_num,s_den,deviation"));
    assert_eq!(rep.lines().count(), 4);
    let recs = read(&records);
    assert_eq!(recs.lines().next(), Some("n,omega1,omega3,generic,f,rk4,exceptional"));
    assert!(recs.contains("\n39,1,1,1,2,1,1\n"));
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn verify_suites() {
    let o = biquad(&["verify", "--suite", "table"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("33/33"));
    let o = biquad(&["verify", "--suite", "identities", "--max", "2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = biquad(&["verify", "--suite", "symbols", "--max", "2000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(biquad(&["verify", "--suite", "nope"]).status.code(), Some(2));
}
