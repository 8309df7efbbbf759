use std::io::Write;
use std::process::{Command, Output, Stdio};

fn clsem(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_clsem"))
        .args(args)
        .env_remove("CLSEM_SOLVER")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn solve_prints_one_answer_set_per_line() {
    let o = clsem(&["solve"], "p :- not q.");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "p\n");

    let o = clsem(&["solve"], "{p}.");
    assert_eq!(stdout(&o), "\np\n");

    let o = clsem(&["solve", "--route", "gringo"], "p :- not p.");
    assert_eq!(stdout(&o), "UNSATISFIABLE\n");
}

#[test]
fn parse_errors_report_a_location() {
    let o = clsem(&["solve", "-"], "p.\nq :- r(.");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("<stdin>:2:"), "{err}");

    let o = clsem(&["tau", "/nonexistent/file.lp"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_program_translates() {
    let o = clsem(&["translate"], "");
    assert_eq!(o.status.code(), Some(0));
    let o = clsem(&["solve"], "% nothing\n");
    assert_eq!(stdout(&o), "\n");
}

#[test]
fn verify_exit_codes() {
    let file = corpus("13_condition_two.lp");
    let o = clsem(&["verify", &file, "--int-bound", "2"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = clsem(&["verify", &file, "--int-bound", "2", "--eq-limit", "1"], "");
    assert_eq!(o.status.code(), Some(3));

    let o = clsem(
        &["verify", &file, "--int-bound", "2", "--mutation", "drop-conditional-forall"],
        "",
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn output_is_deterministic_and_json_is_tagged() {
    let file = corpus("03_choice_constraint.lp");
    for cmd in ["translate", "ground", "tau", "solve", "verify"] {
        let a = clsem(&[cmd, &file, "--int-bound", "2", "--format", "json"], "");
        let b = clsem(&[cmd, &file, "--int-bound", "2", "--format", "json"], "");
        assert!(a.status.success(), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        if cmd == "verify" {
            assert_eq!(v["schema"], "clsem/equivalence-report/v1");
            assert!(v.get("elapsed_ms").is_none());
        }
        if cmd == "solve" {
            assert_eq!(v["schema"], "clsem/answer-sets/v1");
        }
    }
}

#[test]
fn cross_check_skips_without_a_solver() {
    let o = clsem(&["cross-check"], "p.");
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("skipped:"));
}
