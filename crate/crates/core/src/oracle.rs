//! Cross-checking against an external ASP solver binary. The solver is
//! optional: when it is missing the run reports a skip, never a failure.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::semantics::AnswerSet;
use crate::syntax::{parse_program, Head, PrecomputedAtom};
use crate::values::eval_tuple_values;

/// Environment variable naming the default solver executable.
pub const SOLVER_ENV: &str = "CLSEM_SOLVER";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "detail")]
pub enum RunStatus {
    Ok,
    Skipped(String),
    Timeout,
    /// The solver could not be started or was killed by a signal.
    Failed(String),
    /// Output did not follow the `Answer:` convention.
    Unparsed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverRun {
    pub solver: Option<PathBuf>,
    pub args: Vec<String>,
    pub status: RunStatus,
    pub exit_code: Option<i32>,
    pub output: String,
    /// Present only when the run succeeded and the output parsed.
    pub answer_sets: Option<Vec<AnswerSet>>,
    pub diagnostics: Vec<String>,
}

impl SolverRun {
    fn skipped(solver: Option<PathBuf>, reason: impl Into<String>) -> Self {
        SolverRun {
            solver,
            args: Vec::new(),
            status: RunStatus::Skipped(reason.into()),
            exit_code: None,
            output: String::new(),
            answer_sets: None,
            diagnostics: Vec::new(),
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.status, RunStatus::Skipped(_))
    }
}

/// The solver path from the argument, else from the environment.
pub fn resolve_solver(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(SOLVER_ENV).filter(|s| !s.is_empty()).map(PathBuf::from))
}

/// Runs the solver on `program`, asking for all answer sets (`0`), program
/// on stdin.
pub fn run_external(program: &str, solver: Option<&Path>, timeout: Duration) -> SolverRun {
    let Some(path) = resolve_solver(solver) else {
        return SolverRun::skipped(None, format!("no solver given and {SOLVER_ENV} is unset"));
    };
    let args = vec!["0".to_string()];
    let mut child = match Command::new(&path)
        .args(&args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
    {
        Ok(c) => c,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return SolverRun::skipped(Some(path), format!("solver not found: {e}"))
        }
        Err(e) => {
            let mut run = SolverRun::skipped(Some(path), "");
            run.status = RunStatus::Failed(e.to_string());
            return run;
        }
    };
    let mut run = SolverRun::skipped(Some(path), "");
    run.args = args;
    if let Some(mut stdin) = child.stdin.take() {
        // a solver that exits early closes the pipe; its output tells why
        let _ = stdin.write_all(program.as_bytes());
    }
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let start = Instant::now();
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(5)),
            Err(e) => {
                run.status = RunStatus::Failed(e.to_string());
                return run;
            }
        }
    };
    let Some(status) = status else {
        // grandchildren may still hold the pipe open; do not wait for them
        run.status = RunStatus::Timeout;
        return run;
    };
    run.output = reader.join().unwrap_or_default();
    run.exit_code = status.code();
    if status.code().is_none() {
        run.status = RunStatus::Failed("terminated by a signal".into());
        return run;
    }
    match parse_solver_output(&run.output) {
        Ok(sets) => {
            run.status = RunStatus::Ok;
            run.answer_sets = Some(sets);
        }
        Err(diag) => {
            run.status = RunStatus::Unparsed(diag.first().cloned().unwrap_or_default());
            run.diagnostics = diag;
        }
    }
    run
}

fn parse_atom(token: &str) -> Result<PrecomputedAtom, String> {
    let program = parse_program(&format!("{token}.")).map_err(|e| format!("cannot read atom {token:?}: {e}"))?;
    let [rule] = program.rules.as_slice() else {
        return Err(format!("cannot read atom {token:?}"));
    };
    let Head::Basic(atom) = &rule.head else {
        return Err(format!("cannot read atom {token:?}"));
    };
    if !rule.body.is_empty() {
        return Err(format!("cannot read atom {token:?}"));
    }
    // negative numerals arrive as `-n`, which reads as a term; evaluate it
    match eval_tuple_values(&atom.args) {
        Ok(mut tuples) if tuples.len() == 1 => Ok(PrecomputedAtom::new(atom.predicate.clone(), tuples.remove(0))),
        _ => Err(format!("atom {token:?} has arguments that are not precomputed terms")),
    }
}

/// Reads `Answer: k` blocks: each is followed by one line of atoms. A bare
/// `UNSATISFIABLE` means no answer sets.
pub fn parse_solver_output(output: &str) -> Result<Vec<AnswerSet>, Vec<String>> {
    let mut sets: BTreeSet<AnswerSet> = BTreeSet::new();
    let mut diagnostics = Vec::new();
    let mut lines = output.lines();
    let mut saw_answer = false;
    let mut saw_verdict = false;
    while let Some(line) = lines.next() {
        let line = line.trim();
        if line.starts_with("Answer:") {
            saw_answer = true;
            let atoms = lines.next().unwrap_or("");
            let mut set = AnswerSet::new();
            for token in atoms.split_whitespace() {
                match parse_atom(token) {
                    Ok(a) => {
                        set.insert(a);
                    }
                    Err(e) => diagnostics.push(e),
                }
            }
            sets.insert(set);
        } else if line == "SATISFIABLE" || line == "UNSATISFIABLE" || line == "OPTIMUM FOUND" {
            saw_verdict = true;
        }
    }
    if !saw_answer && !saw_verdict {
        diagnostics.push("no `Answer:` block or satisfiability verdict in solver output".into());
    }
    if diagnostics.is_empty() {
        Ok(sets.into_iter().collect())
    } else {
        Err(diagnostics)
    }
}

/// Symmetric difference of two collections of answer sets, each side in
/// canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDiff {
    pub left_only: Vec<AnswerSet>,
    pub right_only: Vec<AnswerSet>,
}

impl ModelDiff {
    pub fn is_empty(&self) -> bool {
        self.left_only.is_empty() && self.right_only.is_empty()
    }

    pub fn render(&self) -> String {
        let line = |m: &AnswerSet| m.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        for m in &self.left_only {
            out.push_str(&format!("< {}\n", line(m)));
        }
        for m in &self.right_only {
            out.push_str(&format!("> {}\n", line(m)));
        }
        out
    }
}

pub fn compare_model_sets(a: &[AnswerSet], b: &[AnswerSet]) -> ModelDiff {
    let a: BTreeSet<&AnswerSet> = a.iter().collect();
    let b: BTreeSet<&AnswerSet> = b.iter().collect();
    ModelDiff {
        left_only: a.difference(&b).map(|m| (*m).clone()).collect(),
        right_only: b.difference(&a).map(|m| (*m).clone()).collect(),
    }
}
