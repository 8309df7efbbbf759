use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{PrecomputedTerm, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sort {
    /// Ranges over every precomputed term.
    Program,
    /// Ranges over numerals; a subsort of `Program`.
    Integer,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub sort: Sort,
}

impl Variable {
    pub fn program(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            sort: Sort::Program,
        }
    }

    pub fn integer(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            sort: Sort::Integer,
        }
    }
}

/// Integer-sorted function constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Abs,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoTerm {
    Const(PrecomputedTerm),
    Var(Variable),
    /// Arguments and result are integer-sorted.
    Apply(ArithOp, Vec<FoTerm>),
}

impl FoTerm {
    pub fn var(v: &Variable) -> Self {
        FoTerm::Var(v.clone())
    }

    pub fn num(n: i64) -> Self {
        FoTerm::Const(PrecomputedTerm::Numeral(n))
    }

    pub fn binary(op: ArithOp, l: FoTerm, r: FoTerm) -> Self {
        FoTerm::Apply(op, vec![l, r])
    }

    pub fn abs(t: FoTerm) -> Self {
        FoTerm::Apply(ArithOp::Abs, vec![t])
    }

    /// `-t` as `0 - t`.
    pub fn neg(t: FoTerm) -> Self {
        FoTerm::binary(ArithOp::Sub, FoTerm::num(0), t)
    }

    fn collect_free(&self, bound: &[&Variable], out: &mut BTreeSet<Variable>) {
        match self {
            FoTerm::Var(v) if !bound.contains(&v) => {
                out.insert(v.clone());
            }
            FoTerm::Apply(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
            _ => {}
        }
    }

    fn substitute(&self, var: &Variable, value: &FoTerm) -> FoTerm {
        match self {
            FoTerm::Var(v) if v == var => value.clone(),
            FoTerm::Apply(op, args) => FoTerm::Apply(*op, args.iter().map(|a| a.substitute(var, value)).collect()),
            _ => self.clone(),
        }
    }
}

/// Two-sorted first-order formulas. `¬F` is `F → ⊥` and `⊤` is the empty
/// conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Atom { predicate: String, args: Vec<FoTerm> },
    /// Atom over a predicate variable; only produced by the SM star transform.
    PredVar { predicate: String, args: Vec<FoTerm> },
    /// Equality and the order relations.
    Compare(Relation, FoTerm, FoTerm),
    Falsum,
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<Variable>, Box<Formula>),
    Exists(Vec<Variable>, Box<Formula>),
}

impl Formula {
    pub fn top() -> Formula {
        Formula::And(Vec::new())
    }

    pub fn atom(predicate: impl Into<String>, args: Vec<FoTerm>) -> Formula {
        Formula::Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn compare(l: FoTerm, rel: Relation, r: FoTerm) -> Formula {
        Formula::Compare(rel, l, r)
    }

    pub fn eq(l: FoTerm, r: FoTerm) -> Formula {
        Formula::Compare(Relation::Eq, l, r)
    }

    /// Conjunction; a single conjunct is returned as it is.
    pub fn conj(mut fs: Vec<Formula>) -> Formula {
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Formula::And(fs)
        }
    }

    pub fn disj(mut fs: Vec<Formula>) -> Formula {
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Formula::Or(fs)
        }
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::implies(f, Formula::Falsum)
    }

    /// Quantifies `vars`; an empty list leaves the body as it is.
    pub fn exists(vars: Vec<Variable>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn forall(vars: Vec<Variable>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn as_negated(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(l, r) if **r == Formula::Falsum => Some(l),
            _ => None,
        }
    }

    pub fn free_variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Variable>, out: &mut BTreeSet<Variable>) {
        match self {
            Formula::Atom { args, .. } | Formula::PredVar { args, .. } => {
                args.iter().for_each(|a| a.collect_free(bound, out))
            }
            Formula::Compare(_, l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Falsum => {}
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
                let depth = bound.len();
                bound.extend(vars.iter());
                body.collect_free(bound, out);
                bound.truncate(depth);
            }
        }
    }

    /// Replaces free occurrences of `var` by `value`. `value` must not
    /// contain variables that the formula binds.
    pub fn substitute(&self, var: &Variable, value: &FoTerm) -> Formula {
        let sub = |t: &FoTerm| t.substitute(var, value);
        match self {
            Formula::Atom { predicate, args } => Formula::Atom {
                predicate: predicate.clone(),
                args: args.iter().map(sub).collect(),
            },
            Formula::PredVar { predicate, args } => Formula::PredVar {
                predicate: predicate.clone(),
                args: args.iter().map(sub).collect(),
            },
            Formula::Compare(rel, l, r) => Formula::Compare(*rel, sub(l), sub(r)),
            Formula::Falsum => Formula::Falsum,
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(var, value)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(var, value)).collect()),
            Formula::Implies(l, r) => Formula::implies(l.substitute(var, value), r.substitute(var, value)),
            Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
                let body = if vars.contains(var) {
                    body.as_ref().clone()
                } else {
                    body.substitute(var, value)
                };
                match self {
                    Formula::Forall(..) => Formula::Forall(vars.clone(), Box::new(body)),
                    _ => Formula::Exists(vars.clone(), Box::new(body)),
                }
            }
        }
    }

    /// Substitutes a precomputed term for every free occurrence of a variable
    /// with the given name, whatever its sort.
    pub fn substitute_by_name(&self, name: &str, value: &PrecomputedTerm) -> Formula {
        let mut result = self.clone();
        for v in self.free_variables() {
            if v.name == name {
                result = result.substitute(&v, &FoTerm::Const(value.clone()));
            }
        }
        result
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_equivalent(&self, other: &Formula) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }
}

type Renaming<'a> = Vec<(&'a Variable, &'a Variable)>;

fn alpha_eq_term<'a>(a: &'a FoTerm, b: &'a FoTerm, env: &Renaming<'a>) -> bool {
    match (a, b) {
        (FoTerm::Var(x), FoTerm::Var(y)) => {
            let bx = env.iter().rev().find(|(l, _)| *l == x);
            let by = env.iter().rev().find(|(_, r)| *r == y);
            match (bx, by) {
                (Some((l, r)), Some((l2, r2))) => l == l2 && r == r2,
                (None, None) => x == y,
                _ => false,
            }
        }
        (FoTerm::Const(x), FoTerm::Const(y)) => x == y,
        (FoTerm::Apply(o1, a1), FoTerm::Apply(o2, a2)) => {
            o1 == o2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| alpha_eq_term(x, y, env))
        }
        _ => false,
    }
}

fn alpha_eq<'a>(a: &'a Formula, b: &'a Formula, env: &mut Renaming<'a>) -> bool {
    use Formula::*;
    let args_eq = |a1: &'a [FoTerm], a2: &'a [FoTerm], env: &Renaming<'a>| {
        a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| alpha_eq_term(x, y, env))
    };
    match (a, b) {
        (Atom { predicate: p, args: a1 }, Atom { predicate: q, args: a2 })
        | (PredVar { predicate: p, args: a1 }, PredVar { predicate: q, args: a2 }) => p == q && args_eq(a1, a2, env),
        (Compare(r1, l1, x1), Compare(r2, l2, x2)) => {
            r1 == r2 && alpha_eq_term(l1, l2, env) && alpha_eq_term(x1, x2, env)
        }
        (Falsum, Falsum) => true,
        (And(f1), And(f2)) | (Or(f1), Or(f2)) => {
            f1.len() == f2.len() && f1.iter().zip(f2).all(|(x, y)| alpha_eq(x, y, env))
        }
        (Implies(l1, r1), Implies(l2, r2)) => alpha_eq(l1, l2, env) && alpha_eq(r1, r2, env),
        (Forall(v1, b1), Forall(v2, b2)) | (Exists(v1, b1), Exists(v2, b2)) => {
            if v1.len() != v2.len() || v1.iter().zip(v2).any(|(x, y)| x.sort != y.sort) {
                return false;
            }
            let depth = env.len();
            env.extend(v1.iter().zip(v2.iter()));
            let result = alpha_eq(b1, b2, env);
            env.truncate(depth);
            result
        }
        _ => false,
    }
}

/// A finite set of sentences, kept in source order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theory {
    pub sentences: Vec<Formula>,
}

impl Theory {
    pub fn new(sentences: Vec<Formula>) -> Self {
        Theory { sentences }
    }

    pub fn conjunction(&self) -> Formula {
        Formula::conj(self.sentences.clone())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoTerm::Const(c) => write!(f, "{c}"),
            FoTerm::Var(v) => write!(f, "{v}"),
            FoTerm::Apply(ArithOp::Abs, args) => write!(f, "|{}|", args[0]),
            FoTerm::Apply(ArithOp::Sub, args) if args[0] == FoTerm::num(0) => match &args[1] {
                t @ (FoTerm::Var(_) | FoTerm::Const(_)) => write!(f, "-{t}"),
                t => write!(f, "-({t})"),
            },
            FoTerm::Apply(op, args) => {
                let symbol = match op {
                    ArithOp::Add => " + ",
                    ArithOp::Sub => " - ",
                    ArithOp::Mul => " × ",
                    ArithOp::Abs => unreachable!(),
                };
                let operand = |f: &mut fmt::Formatter<'_>, t: &FoTerm| match t {
                    FoTerm::Apply(ArithOp::Add | ArithOp::Sub | ArithOp::Mul, _) => write!(f, "({t})"),
                    _ => write!(f, "{t}"),
                };
                operand(f, &args[0])?;
                f.write_str(symbol)?;
                operand(f, &args[1])
            }
        }
    }
}

fn relation_symbol(rel: Relation) -> &'static str {
    match rel {
        Relation::Eq => "=",
        Relation::Ne => "≠",
        Relation::Lt => "<",
        Relation::Gt => ">",
        Relation::Le => "≤",
        Relation::Ge => "≥",
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, name: &str, args: &[FoTerm]) -> fmt::Result {
    f.write_str(name)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

impl Formula {
    fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Atom { .. } | Formula::PredVar { .. } | Formula::Compare(..) | Formula::Falsum
        ) || matches!(self, Formula::And(fs) if fs.is_empty())
            || matches!(self, Formula::Or(fs) if fs.is_empty())
    }

    fn write_nested(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bare = self.is_atomic()
            || self.as_negated().is_some()
            || matches!(self, Formula::Forall(..) | Formula::Exists(..));
        if bare {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { predicate, args } => write_args(f, predicate, args),
            Formula::PredVar { predicate, args } => write_args(f, &format!("u_{predicate}"), args),
            Formula::Compare(rel, l, r) => write!(f, "{l} {} {r}", relation_symbol(*rel)),
            Formula::Falsum => f.write_str("⊥"),
            Formula::And(fs) if fs.is_empty() => f.write_str("⊤"),
            Formula::Or(fs) if fs.is_empty() => f.write_str("⊥"),
            Formula::And(fs) | Formula::Or(fs) => {
                let sep = if matches!(self, Formula::And(_)) { " ∧ " } else { " ∨ " };
                if fs.len() == 1 {
                    // a one-member connective is visible as such
                    return write!(f, "{}[{}]", sep.trim(), fs[0]);
                }
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    g.write_nested(f)?;
                }
                Ok(())
            }
            Formula::Implies(l, r) => {
                if **r == Formula::Falsum {
                    f.write_str("¬")?;
                    return l.write_nested(f);
                }
                l.write_nested(f)?;
                f.write_str(" → ")?;
                r.write_nested(f)
            }
            Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
                f.write_str(if matches!(self, Formula::Forall(..)) { "∀" } else { "∃" })?;
                for (i, v) in vars.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, " ({body})")
            }
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sentences {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
