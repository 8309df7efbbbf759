use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::formula::{ArithOp, FoTerm, Formula, Sort, Variable};
use crate::syntax::{PrecomputedAtom, PrecomputedTerm, Program};

/// A standard interpretation over a finite universe: the symbolic constants
/// in play, the numerals in `[-int_bound, int_bound]`, `#inf` and `#sup`.
///
/// Precomputed terms denote themselves, arithmetic is exact integer
/// arithmetic and comparisons follow the total order on precomputed terms.
/// Only the quantifier ranges are bounded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardInterpretation {
    universe: Vec<PrecomputedTerm>,
    numerals: Vec<PrecomputedTerm>,
    int_bound: i64,
    true_atoms: BTreeSet<PrecomputedAtom>,
}

impl StandardInterpretation {
    pub fn new<I, S>(constants: I, int_bound: i64) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        assert!(int_bound >= 0, "integer bound must be non-negative");
        let mut universe: BTreeSet<PrecomputedTerm> = constants
            .into_iter()
            .map(|c| PrecomputedTerm::Symbol(c.into()))
            .collect();
        universe.insert(PrecomputedTerm::Inf);
        universe.insert(PrecomputedTerm::Sup);
        let numerals: Vec<PrecomputedTerm> = (-int_bound..=int_bound).map(PrecomputedTerm::Numeral).collect();
        universe.extend(numerals.iter().cloned());
        StandardInterpretation {
            universe: universe.into_iter().collect(),
            numerals,
            int_bound,
            true_atoms: BTreeSet::new(),
        }
    }

    /// The interpretation whose universe holds the program's symbolic constants.
    pub fn for_program(program: &Program, int_bound: i64) -> Self {
        StandardInterpretation::new(program.symbolic_constants(), int_bound)
    }

    pub fn with_true_atoms(mut self, atoms: impl IntoIterator<Item = PrecomputedAtom>) -> Self {
        self.true_atoms = atoms.into_iter().collect();
        debug_assert!(self
            .true_atoms
            .iter()
            .all(|a| a.args.iter().all(|t| self.contains(t))));
        self
    }

    /// Universe of the program sort, in the precomputed-term order.
    pub fn universe(&self) -> &[PrecomputedTerm] {
        &self.universe
    }

    /// Universe of the integer sort.
    pub fn numerals(&self) -> &[PrecomputedTerm] {
        &self.numerals
    }

    pub fn domain(&self, sort: Sort) -> &[PrecomputedTerm] {
        match sort {
            Sort::Program => &self.universe,
            Sort::Integer => &self.numerals,
        }
    }

    pub fn int_bound(&self) -> i64 {
        self.int_bound
    }

    pub fn true_atoms(&self) -> &BTreeSet<PrecomputedAtom> {
        &self.true_atoms
    }

    pub fn contains(&self, t: &PrecomputedTerm) -> bool {
        match t {
            PrecomputedTerm::Numeral(n) => n.abs() <= self.int_bound,
            _ => self.universe.binary_search(t).is_ok(),
        }
    }

    pub fn is_true(&self, atom: &PrecomputedAtom) -> bool {
        self.true_atoms.contains(atom)
    }
}

/// Things noticed while evaluating over a bounded universe.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Arithmetic results that fell outside the integer universe.
    pub out_of_range_values: BTreeSet<i64>,
    /// Atoms over terms outside the universe.
    pub out_of_universe_atoms: BTreeSet<PrecomputedAtom>,
    /// Arithmetic that overflowed 64-bit integers.
    pub overflows: usize,
}

impl Diagnostics {
    pub fn is_clean(&self) -> bool {
        self.out_of_range_values.is_empty() && self.out_of_universe_atoms.is_empty() && self.overflows == 0
    }

    pub fn merge(&mut self, other: Diagnostics) {
        self.out_of_range_values.extend(other.out_of_range_values);
        self.out_of_universe_atoms.extend(other.out_of_universe_atoms);
        self.overflows += other.overflows;
    }
}

/// Variable assignment used while walking a formula.
pub(crate) type Assignment = BTreeMap<Variable, PrecomputedTerm>;

/// Value of a term under an assignment. `None` when an arithmetic operation
/// receives a non-numeral (ill-sorted input) or overflows.
pub(crate) fn eval_term(
    i: &StandardInterpretation,
    t: &FoTerm,
    env: &Assignment,
    diag: &mut Diagnostics,
) -> Option<PrecomputedTerm> {
    match t {
        FoTerm::Const(c) => Some(c.clone()),
        FoTerm::Var(v) => Some(
            env.get(v)
                .unwrap_or_else(|| panic!("free variable {v} during evaluation"))
                .clone(),
        ),
        FoTerm::Apply(op, args) => {
            let mut values = Vec::with_capacity(args.len());
            for a in args {
                values.push(eval_term(i, a, env, diag)?.as_numeral()?);
            }
            let result = match op {
                ArithOp::Add => values[0].checked_add(values[1]),
                ArithOp::Sub => values[0].checked_sub(values[1]),
                ArithOp::Mul => values[0].checked_mul(values[1]),
                ArithOp::Abs => values[0].checked_abs(),
            };
            match result {
                Some(n) => {
                    if n.abs() > i.int_bound() {
                        diag.out_of_range_values.insert(n);
                    }
                    Some(PrecomputedTerm::Numeral(n))
                }
                None => {
                    diag.overflows += 1;
                    None
                }
            }
        }
    }
}

/// Classical satisfaction of a closed formula.
pub fn fo_satisfies(i: &StandardInterpretation, f: &Formula) -> bool {
    fo_satisfies_with_diagnostics(i, f, &mut Diagnostics::default())
}

pub fn fo_satisfies_with_diagnostics(i: &StandardInterpretation, f: &Formula, diag: &mut Diagnostics) -> bool {
    assert!(f.is_closed(), "fo_satisfies needs a closed formula");
    satisfies(i, f, &mut Assignment::new(), diag)
}

fn satisfies(i: &StandardInterpretation, f: &Formula, env: &mut Assignment, diag: &mut Diagnostics) -> bool {
    match f {
        Formula::Atom { predicate, args } => {
            let mut values = Vec::with_capacity(args.len());
            for a in args {
                match eval_term(i, a, env, diag) {
                    Some(v) => values.push(v),
                    None => return false,
                }
            }
            i.is_true(&PrecomputedAtom::new(predicate.clone(), values))
        }
        Formula::PredVar { .. } => panic!("predicate variables are second-order and cannot be evaluated"),
        Formula::Compare(rel, l, r) => match (eval_term(i, l, env, diag), eval_term(i, r, env, diag)) {
            (Some(a), Some(b)) => rel.holds(&a, &b),
            _ => false,
        },
        Formula::Falsum => false,
        Formula::And(fs) => fs.iter().all(|g| satisfies(i, g, env, diag)),
        Formula::Or(fs) => fs.iter().any(|g| satisfies(i, g, env, diag)),
        Formula::Implies(l, r) => !satisfies(i, l, env, diag) || satisfies(i, r, env, diag),
        Formula::Forall(vars, body) => quantify(i, vars, body, env, diag, true),
        Formula::Exists(vars, body) => quantify(i, vars, body, env, diag, false),
    }
}

fn quantify(
    i: &StandardInterpretation,
    vars: &[Variable],
    body: &Formula,
    env: &mut Assignment,
    diag: &mut Diagnostics,
    universal: bool,
) -> bool {
    let Some((first, rest)) = vars.split_first() else {
        return satisfies(i, body, env, diag);
    };
    let saved = env.get(first).cloned();
    let mut result = universal;
    for value in i.domain(first.sort) {
        env.insert(first.clone(), value.clone());
        let holds = quantify(i, rest, body, env, diag, universal);
        if holds != universal {
            result = !universal;
            break;
        }
    }
    match saved {
        Some(v) => env.insert(first.clone(), v),
        None => env.remove(first),
    };
    result
}
