use std::collections::BTreeSet;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use clsem_core::fol::{sm_render, theory_to_json};
use clsem_core::infinitary::{formulas_to_json, InfFormula};
use clsem_core::oracle::{compare_model_sets, run_external, RunStatus};
use clsem_core::semantics::{
    answer_sets, answer_sets_to_json, grounded_translation, gringo_answer_sets, infinitary_translation,
    render_answer_sets, verify_equivalence_with, AnswerSet, Limits, SemanticsError, Verdict,
};
use clsem_core::syntax::{parse_program, Program};
use clsem_core::tau_star::{tau_star_program_with, Mutation};

/// Exit statuses. Each failure class has its own code.
mod exit {
    pub const PARSE: u8 = 2;
    pub const REFUSED: u8 = 3;
    pub const MISMATCH: u8 = 4;
    pub const SOLVER_DISAGREES: u8 = 5;
}

#[derive(Parser)]
#[command(name = "clsem", version, about = "Translations and answer sets for programs with conditional literals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first-order translation.
    Translate {
        #[command(flatten)]
        common: Common,
        /// Also print the SM formula for the program's predicates.
        #[arg(long)]
        sm: bool,
    },
    /// Print the grounding of the first-order translation.
    Ground {
        #[command(flatten)]
        common: Common,
    },
    /// Print the direct infinitary translation.
    Tau {
        #[command(flatten)]
        common: Common,
    },
    /// Print the answer sets, one per line.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
    },
    /// Check that both translations are strongly equivalent.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Include the elapsed time in the report.
        #[arg(long)]
        timing: bool,
        /// Deliberately break the first-order translation.
        #[arg(long, value_enum, default_value_t = MutationArg::None, hide = true)]
        mutation: MutationArg,
    },
    /// Compare the answer sets with those of an external solver.
    CrossCheck {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Program file; standard input when absent or `-`.
    file: Option<PathBuf>,
    /// Numerals range over [-N, N].
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(i64).range(0..))]
    int_bound: i64,
    /// Most atoms considered when searching for stable models.
    #[arg(long, default_value_t = 20, value_parser = positive)]
    base_limit: usize,
    /// Most atoms swept by the strong equivalence check.
    #[arg(long, default_value_t = 12, value_parser = positive)]
    eq_limit: usize,
    /// Most rule instances, and most tuples per conditional literal.
    #[arg(long, default_value_t = 100_000, value_parser = positive)]
    instance_cap: usize,
    /// Most integers one interval may contribute.
    #[arg(long, default_value_t = 10_000, value_parser = positive)]
    interval_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// External solver executable; defaults to $CLSEM_SOLVER.
    #[arg(long)]
    solver: Option<PathBuf>,
    /// Seconds to wait for the external solver.
    #[arg(long, default_value_t = 30)]
    timeout: u64,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    /// Stable models of the grounded first-order translation.
    Smdef,
    /// Stable models of the direct infinitary translation.
    Gringo,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MutationArg {
    None,
    DropChoiceDoubleNegation,
    DropConditionalForall,
}

impl From<MutationArg> for Mutation {
    fn from(m: MutationArg) -> Self {
        match m {
            MutationArg::None => Mutation::None,
            MutationArg::DropChoiceDoubleNegation => Mutation::DropChoiceDoubleNegation,
            MutationArg::DropConditionalForall => Mutation::DropConditionalForall,
        }
    }
}

impl Common {
    fn limits(&self) -> Limits {
        Limits {
            int_bound: self.int_bound,
            equivalence_limit: self.eq_limit,
            equilibrium_limit: self.base_limit,
            instance_cap: self.instance_cap,
            interval_cap: self.interval_cap,
            ..Limits::default()
        }
    }

    fn name(&self) -> String {
        match &self.file {
            Some(p) if p != Path::new("-") => p.display().to_string(),
            _ => "<stdin>".into(),
        }
    }

    fn read(&self) -> Result<(String, Program), Failure> {
        let mut text = String::new();
        let read = match &self.file {
            Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map(|t| text = t),
            _ => std::io::stdin().read_to_string(&mut text).map(|_| ()),
        };
        read.map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", self.name())))?;
        let program = parse_program(&text).map_err(|e| {
            Failure::new(
                exit::PARSE,
                format!("{}:{}:{}: {}", self.name(), e.line, e.column, e.message),
            )
        })?;
        Ok((text, program))
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        Failure::new(exit::REFUSED, format!("refused: {e}"))
    }
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json renders"))
}

fn formulas_text(fs: &BTreeSet<InfFormula>) -> String {
    fs.iter().map(|f| format!("{f}\n")).collect()
}

fn solve(program: &Program, limits: &Limits, route: Route) -> Result<Vec<AnswerSet>, Failure> {
    Ok(match route {
        Route::Smdef => answer_sets(program, limits)?,
        Route::Gringo => gringo_answer_sets(program, limits)?,
        Route::Both => {
            let a = answer_sets(program, limits)?;
            let b = gringo_answer_sets(program, limits)?;
            let diff = compare_model_sets(&a, &b);
            if !diff.is_empty() {
                return Err(Failure::new(
                    exit::MISMATCH,
                    format!("the two routes disagree (< first-order, > infinitary):\n{}", diff.render()),
                ));
            }
            a
        }
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Translate { common, sm } => {
            let (_, program) = common.read()?;
            let theory = tau_star_program_with(&program, Mutation::None);
            Ok(match common.format {
                Format::Text => {
                    let mut out = theory.to_string();
                    if !out.is_empty() && !out.ends_with('\n') {
                        out.push('\n');
                    }
                    if sm {
                        out.push_str(&sm_render(&theory, &program.predicates()));
                        out.push('\n');
                    }
                    out
                }
                Format::Json => {
                    let mut v = theory_to_json(&theory);
                    if sm {
                        v["sm"] = sm_render(&theory, &program.predicates()).into();
                    }
                    json_line(&v)
                }
            })
        }
        Command::Ground { common } => {
            let (_, program) = common.read()?;
            let (g, _) = grounded_translation(&program, &common.limits(), Mutation::None)?;
            Ok(match common.format {
                Format::Text => formulas_text(&g),
                Format::Json => json_line(&formulas_to_json(&g)),
            })
        }
        Command::Tau { common } => {
            let (_, program) = common.read()?;
            let t = infinitary_translation(&program, &common.limits())?;
            Ok(match common.format {
                Format::Text => formulas_text(&t),
                Format::Json => json_line(&formulas_to_json(&t)),
            })
        }
        Command::Solve { common, route } => {
            let (_, program) = common.read()?;
            let limits = common.limits();
            let models = solve(&program, &limits, route)?;
            Ok(match common.format {
                Format::Text => render_answer_sets(&models),
                Format::Json => json_line(&answer_sets_to_json(&models, &limits)),
            })
        }
        Command::Verify {
            common,
            timing,
            mutation,
        } => {
            let (_, program) = common.read()?;
            let mut report = verify_equivalence_with(&program, &common.name(), &common.limits(), mutation.into());
            let elapsed = report.elapsed_ms;
            let out = match common.format {
                Format::Text => {
                    let mut t = report.render_text();
                    if timing {
                        t.push_str(&format!("elapsed: {elapsed} ms\n"));
                    }
                    t
                }
                Format::Json => {
                    let mut v = report.to_json();
                    if !timing {
                        v.as_object_mut().unwrap().remove("elapsed_ms");
                    }
                    json_line(&v)
                }
            };
            report.elapsed_ms = 0;
            let code = match report.verdict {
                Verdict::Equivalent => return Ok(out),
                Verdict::Counterexample | Verdict::AnswerSetMismatch => exit::MISMATCH,
                Verdict::Refused => exit::REFUSED,
            };
            print!("{out}");
            Err(Failure::new(code, ""))
        }
        Command::CrossCheck { common } => {
            let (text, program) = common.read()?;
            let limits = common.limits();
            let ours = solve(&program, &limits, Route::Both)?;
            let run = run_external(&text, common.solver.as_deref(), Duration::from_secs(common.timeout));
            match &run.status {
                RunStatus::Ok => {}
                RunStatus::Skipped(reason) => return Ok(format!("skipped: {reason}\n")),
                RunStatus::Timeout => return Err(Failure::new(exit::REFUSED, "external solver timed out")),
                RunStatus::Failed(e) => return Err(Failure::new(exit::REFUSED, format!("external solver failed: {e}"))),
                RunStatus::Unparsed(e) => {
                    return Err(Failure::new(
                        exit::REFUSED,
                        format!("cannot read external solver output: {e}\n{}", run.output),
                    ))
                }
            }
            let theirs = run.answer_sets.unwrap_or_default();
            let diff = compare_model_sets(&ours, &theirs);
            if diff.is_empty() {
                Ok(format!("agree: {} answer set(s)\n", ours.len()))
            } else {
                Err(Failure::new(
                    exit::SOLVER_DISAGREES,
                    format!("disagreement (< ours, > external):\n{}", diff.render()),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("{}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
