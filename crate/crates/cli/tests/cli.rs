//! End-to-end runs of the binary: every verb, the exit-code contract, and
//! the corpus CSV shape.

use std::path::Path;
use std::process::{Command, Output};

const UNITS_CNF: &str = "c atoms: p\np cnf 1 2\n1 0\n-1 0\n";
const UNITS_RES: &str = "system RES\ncnf units.cnf\n1 1 0 i1 0\n2 -1 0 i2 0\n3 0 1 2 0\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_proofbench"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_units(dir: &Path) {
    std::fs::write(dir.join("units.cnf"), UNITS_CNF).unwrap();
    std::fs::write(dir.join("units.res"), UNITS_RES).unwrap();
}

#[test]
fn gen_php_is_deterministic_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_in(dir.path(), &["gen", "php", "--pigeons", "3"]);
    let b = run_in(dir.path(), &["gen", "php", "--pigeons", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("p cnf 6 "));
}

#[test]
fn check_accepts_and_rejects_with_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_units(dir.path());
    let ok = run_in(dir.path(), &["check", "units.res", "--system", "RES*"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("verdict=ACCEPT"));
    assert!(stdout(&ok).contains("conclusion=EMPTY_CLAUSE"));

    // Swapped premise ids resolve nothing: the checker must reject.
    let broken = UNITS_RES.replace("3 0 1 2 0", "3 0 1 1 0");
    std::fs::write(dir.path().join("bad.res"), broken).unwrap();
    let bad = run_in(dir.path(), &["check", "bad.res"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("verdict=REJECT"));
}

#[test]
fn unknown_system_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    write_units(dir.path());
    let out = run_in(dir.path(), &["check", "units.res", "--system", "NK"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn translate_output_is_checkable_and_keeps_the_conclusion() {
    let dir = tempfile::tempdir().unwrap();
    write_units(dir.path());
    let tr = run_in(
        dir.path(),
        &["translate", "units.res", "--to", "EF", "-o", "units.ef"],
    );
    assert_eq!(tr.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("units.ef")).unwrap();
    assert!(text.contains("# stats source_symbols=5 target_symbols="));
    let chk = run_in(dir.path(), &["check", "units.ef"]);
    assert_eq!(chk.status.code(), Some(0));
    assert!(stdout(&chk).contains("conclusion=(or (not p) p)"));
}

#[test]
fn translate_round_trip_through_extended_resolution() {
    let dir = tempfile::tempdir().unwrap();
    let pv = run_in(
        dir.path(),
        &["prove-php", "--pigeons", "2", "-o", "php2.ef"],
    );
    assert_eq!(pv.status.code(), Some(0));
    let tr = run_in(
        dir.path(),
        &["translate", "php2.ef", "--to", "ER", "-o", "php2.res"],
    );
    assert_eq!(tr.status.code(), Some(0));
    // The companion CNF lands next to the proof so the header path resolves.
    assert!(dir.path().join("conclusion.cnf").exists());
    let chk = run_in(dir.path(), &["check", "php2.res", "--system", "ER"]);
    assert_eq!(chk.status.code(), Some(0));
}

#[test]
fn measure_reports_both_sizes() {
    let dir = tempfile::tempdir().unwrap();
    write_units(dir.path());
    let out = run_in(dir.path(), &["measure", "units.res"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        "label=units system=RES steps=3 symbols=5"
    );
}

#[test]
fn search_min_res_finds_the_single_resolution() {
    let dir = tempfile::tempdir().unwrap();
    write_units(dir.path());
    let out = run_in(dir.path(), &["search-min-res", "units.cnf"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "min_resolve_steps=1");
}

#[test]
fn corpus_rows_cover_jobs_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    write_units(dir.path());
    let config = "\
# mixed corpus
php2  prove-php n=2
chk   check     path=units.res
tr    translate path=units.res to=EF
miss  check     path=absent.res
bad   frobnicate x=1
";
    std::fs::write(dir.path().join("jobs.cfg"), config).unwrap();
    let out = run_in(
        dir.path(),
        &["corpus", "jobs.cfg", "--jobs", "2", "-o", "report.csv"],
    );
    assert_eq!(out.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "label,system,steps,symbols,verdict,millis");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("php2,EF,541,18927,ACCEPT,"));
    assert!(lines[2].starts_with("chk,RES,3,5,ACCEPT,"));
    assert!(lines[3].contains(",EF,") && lines[3].contains("ACCEPT"));
    assert!(lines[4].contains("ERROR(IO)"));
    assert!(lines[5].contains("ERROR(CONFIG)"));

    // Determinism outside the millis column.
    let again = run_in(dir.path(), &["corpus", "jobs.cfg", "-o", "again.csv"]);
    assert_eq!(again.status.code(), Some(1));
    let strip = |text: &str| -> Vec<String> {
        text.lines()
            .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_string()).unwrap())
            .collect()
    };
    let b = std::fs::read_to_string(dir.path().join("again.csv")).unwrap();
    assert_eq!(strip(&csv), strip(&b));
}

#[test]
fn empty_corpus_writes_a_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.cfg"), "").unwrap();
    let out = run_in(dir.path(), &["corpus", "empty.cfg"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "label,system,steps,symbols,verdict,millis");
}

#[test]
fn encoders_render_text_systems() {
    let dir = tempfile::tempdir().unwrap();
    write_units(dir.path());
    let poly = run_in(dir.path(), &["encode", "poly", "units.cnf"]);
    assert_eq!(poly.status.code(), Some(0));
    assert!(stdout(&poly).contains("= 0"));
    let ilp = run_in(dir.path(), &["encode", "ilp", "units.cnf"]);
    assert_eq!(ilp.status.code(), Some(0));
    assert!(stdout(&ilp).contains("bounds 0 1"));
}
