//! Abstract syntax of programs: terms, comparisons, basic and conditional
//! literals, rules.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A ground term without operation names: `#inf`, a numeral, a symbolic
/// constant or `#sup`.
///
/// The derived order is the total order on precomputed terms: `#inf` first,
/// numerals by integer value, symbolic constants by byte-lexicographic
/// order, `#sup` last. Variant order matters here, do not reorder.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecomputedTerm {
    Inf,
    Numeral(i64),
    Symbol(String),
    Sup,
}

impl PrecomputedTerm {
    pub fn as_numeral(&self) -> Option<i64> {
        match self {
            PrecomputedTerm::Numeral(n) => Some(*n),
            _ => None,
        }
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        PrecomputedTerm::Symbol(name.into())
    }
}

impl From<i64> for PrecomputedTerm {
    fn from(n: i64) -> Self {
        PrecomputedTerm::Numeral(n)
    }
}

impl From<PrecomputedTerm> for Term {
    fn from(t: PrecomputedTerm) -> Self {
        match t {
            PrecomputedTerm::Inf => Term::Inf,
            PrecomputedTerm::Sup => Term::Sup,
            PrecomputedTerm::Numeral(n) => Term::Numeral(n),
            PrecomputedTerm::Symbol(s) => Term::Symbol(s),
        }
    }
}

/// An atom whose arguments are precomputed terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrecomputedAtom {
    pub predicate: String,
    pub args: Vec<PrecomputedTerm>,
}

impl PrecomputedAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<PrecomputedTerm>) -> Self {
        PrecomputedAtom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        PrecomputedAtom::new(predicate, Vec::new())
    }

    pub fn symbol(&self) -> PredicateSymbol {
        PredicateSymbol::new(self.predicate.clone(), self.args.len())
    }
}

/// Binary operation names of the term language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Interval,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "\\",
            BinOp::Interval => "..",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Interval => 1,
            BinOp::Add | BinOp::Sub => 2,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Numeral(i64),
    Symbol(String),
    Variable(String),
    Inf,
    Sup,
    BinOp(BinOp, Box<Term>, Box<Term>),
    Abs(Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn sym(name: impl Into<String>) -> Self {
        Term::Symbol(name.into())
    }

    pub fn bin(op: BinOp, left: Term, right: Term) -> Self {
        Term::BinOp(op, Box::new(left), Box::new(right))
    }

    /// `-t`, stored as `0 - t`.
    pub fn neg(t: Term) -> Self {
        Term::bin(BinOp::Sub, Term::Numeral(0), t)
    }

    pub fn abs(t: Term) -> Self {
        Term::Abs(Box::new(t))
    }

    /// The term as a precomputed term, if it is one.
    pub fn as_precomputed(&self) -> Option<PrecomputedTerm> {
        match self {
            Term::Numeral(n) => Some(PrecomputedTerm::Numeral(*n)),
            Term::Symbol(s) => Some(PrecomputedTerm::Symbol(s.clone())),
            Term::Inf => Some(PrecomputedTerm::Inf),
            Term::Sup => Some(PrecomputedTerm::Sup),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Variable(_) => false,
            Term::BinOp(_, l, r) => l.is_ground() && r.is_ground(),
            Term::Abs(t) => t.is_ground(),
            _ => true,
        }
    }

    /// Appends the variables of the term to `out`, skipping ones already there.
    pub fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Term::Variable(v) => push_unique(out, v),
            Term::BinOp(_, l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
            Term::Abs(t) => t.collect_variables(out),
            _ => {}
        }
    }

    pub fn collect_symbols(&self, out: &mut Vec<String>) {
        match self {
            Term::Symbol(s) => push_unique(out, s),
            Term::BinOp(_, l, r) => {
                l.collect_symbols(out);
                r.collect_symbols(out);
            }
            Term::Abs(t) => t.collect_symbols(out),
            _ => {}
        }
    }

    pub fn substitute(&self, subst: &Substitution) -> Term {
        match self {
            Term::Variable(v) => match subst.get(v) {
                Some(value) => value.clone().into(),
                None => self.clone(),
            },
            Term::BinOp(op, l, r) => Term::bin(*op, l.substitute(subst), r.substitute(subst)),
            Term::Abs(t) => Term::abs(t.substitute(subst)),
            _ => self.clone(),
        }
    }
}

/// Maps variable names to precomputed terms.
pub type Substitution = BTreeMap<String, PrecomputedTerm>;

pub(crate) fn push_unique(out: &mut Vec<String>, name: &str) {
    if !out.iter().any(|v| v == name) {
        out.push(name.to_string());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Eq,
        Relation::Ne,
        Relation::Lt,
        Relation::Gt,
        Relation::Le,
        Relation::Ge,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }

    pub fn holds(self, left: &PrecomputedTerm, right: &PrecomputedTerm) -> bool {
        use std::cmp::Ordering::*;
        let ord = left.cmp(right);
        match self {
            Relation::Eq => ord == Equal,
            Relation::Ne => ord != Equal,
            Relation::Lt => ord == Less,
            Relation::Gt => ord == Greater,
            Relation::Le => ord != Greater,
            Relation::Ge => ord != Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Comparison {
    pub relation: Relation,
    pub left: Term,
    pub right: Term,
}

impl Comparison {
    pub fn new(left: Term, relation: Relation, right: Term) -> Self {
        Comparison {
            relation,
            left,
            right,
        }
    }

    pub fn substitute(&self, subst: &Substitution) -> Comparison {
        Comparison::new(
            self.left.substitute(subst),
            self.relation,
            self.right.substitute(subst),
        )
    }

    pub fn collect_variables(&self, out: &mut Vec<String>) {
        self.left.collect_variables(out);
        self.right.collect_variables(out);
    }
}

/// A predicate symbol `name/arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PredicateSymbol {
    pub name: String,
    pub arity: usize,
}

impl PredicateSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredicateSymbol {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for PredicateSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn symbol(&self) -> PredicateSymbol {
        PredicateSymbol::new(self.predicate.clone(), self.args.len())
    }

    pub fn substitute(&self, subst: &Substitution) -> Atom {
        Atom::new(
            self.predicate.clone(),
            self.args.iter().map(|t| t.substitute(subst)).collect(),
        )
    }

    pub fn collect_variables(&self, out: &mut Vec<String>) {
        for arg in &self.args {
            arg.collect_variables(out);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Not,
    NotNot,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasicLiteral {
    pub sign: Sign,
    pub atom: Atom,
}

impl BasicLiteral {
    pub fn new(sign: Sign, atom: Atom) -> Self {
        BasicLiteral { sign, atom }
    }

    pub fn positive(atom: Atom) -> Self {
        BasicLiteral::new(Sign::Positive, atom)
    }

    pub fn substitute(&self, subst: &Substitution) -> BasicLiteral {
        BasicLiteral::new(self.sign, self.atom.substitute(subst))
    }
}

/// A basic literal or a comparison; the elements allowed in conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Literal {
    Basic(BasicLiteral),
    Comparison(Comparison),
}

impl Literal {
    pub fn substitute(&self, subst: &Substitution) -> Literal {
        match self {
            Literal::Basic(b) => Literal::Basic(b.substitute(subst)),
            Literal::Comparison(c) => Literal::Comparison(c.substitute(subst)),
        }
    }

    pub fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Literal::Basic(b) => b.atom.collect_variables(out),
            Literal::Comparison(c) => c.collect_variables(out),
        }
    }

    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Literal::Basic(b) => Some(&b.atom),
            Literal::Comparison(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CondHead {
    Literal(Literal),
    Falsum,
}

/// `H : l1, ..., lm`. Plain body literals have no conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConditionalLiteral {
    pub head: CondHead,
    pub conditions: Vec<Literal>,
}

impl ConditionalLiteral {
    pub fn new(head: CondHead, conditions: Vec<Literal>) -> Self {
        ConditionalLiteral { head, conditions }
    }

    pub fn plain(literal: Literal) -> Self {
        ConditionalLiteral::new(CondHead::Literal(literal), Vec::new())
    }

    pub fn is_plain(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn substitute(&self, subst: &Substitution) -> ConditionalLiteral {
        let head = match &self.head {
            CondHead::Literal(l) => CondHead::Literal(l.substitute(subst)),
            CondHead::Falsum => CondHead::Falsum,
        };
        ConditionalLiteral::new(
            head,
            self.conditions.iter().map(|l| l.substitute(subst)).collect(),
        )
    }

    pub fn head_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let CondHead::Literal(l) = &self.head {
            l.collect_variables(&mut out);
        }
        out
    }

    pub fn condition_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.conditions {
            l.collect_variables(&mut out);
        }
        out
    }

    /// All variables, head first.
    pub fn variables(&self) -> Vec<String> {
        let mut out = self.head_variables();
        for l in &self.conditions {
            l.collect_variables(&mut out);
        }
        out
    }

    /// Variables occurring in the head but not in the conditions.
    pub fn global_variables(&self) -> Vec<String> {
        let conditions = self.condition_variables();
        self.head_variables()
            .into_iter()
            .filter(|v| !conditions.contains(v))
            .collect()
    }

    pub(crate) fn literals(&self) -> impl Iterator<Item = &Literal> {
        let head = match &self.head {
            CondHead::Literal(l) => Some(l),
            CondHead::Falsum => None,
        };
        head.into_iter().chain(self.conditions.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Head {
    Basic(Atom),
    Choice(Atom),
    Constraint,
}

impl Head {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Head::Basic(a) | Head::Choice(a) => Some(a),
            Head::Constraint => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<ConditionalLiteral>,
}

impl Rule {
    pub fn new(head: Head, body: Vec<ConditionalLiteral>) -> Self {
        Rule { head, body }
    }

    /// Variables global in the rule, in order of first occurrence: head atom
    /// first, then each body element.
    pub fn global_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(atom) = self.head.atom() {
            atom.collect_variables(&mut out);
        }
        for element in &self.body {
            for v in element.global_variables() {
                push_unique(&mut out, &v);
            }
        }
        out
    }

    /// Every variable of the rule, in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(atom) = self.head.atom() {
            atom.collect_variables(&mut out);
        }
        for element in &self.body {
            for v in element.variables() {
                push_unique(&mut out, &v);
            }
        }
        out
    }

    /// Substitutes for global variables only; the local variables of
    /// conditional literals keep their own scope.
    pub fn instantiate(&self, subst: &Substitution) -> Rule {
        let head = match &self.head {
            Head::Basic(a) => Head::Basic(a.substitute(subst)),
            Head::Choice(a) => Head::Choice(a.substitute(subst)),
            Head::Constraint => Head::Constraint,
        };
        Rule::new(head, self.body.iter().map(|b| b.substitute(subst)).collect())
    }

    pub(crate) fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head.atom().into_iter().chain(
            self.body
                .iter()
                .flat_map(|b| b.literals().filter_map(Literal::atom)),
        )
    }

    pub(crate) fn terms(&self) -> Vec<&Term> {
        let mut out: Vec<&Term> = Vec::new();
        if let Some(a) = self.head.atom() {
            out.extend(a.args.iter());
        }
        for element in &self.body {
            for literal in element.literals() {
                match literal {
                    Literal::Basic(b) => out.extend(b.atom.args.iter()),
                    Literal::Comparison(c) => {
                        out.push(&c.left);
                        out.push(&c.right);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    /// Predicate symbols occurring in the program, in first-occurrence order.
    pub fn predicates(&self) -> Vec<PredicateSymbol> {
        let mut out: Vec<PredicateSymbol> = Vec::new();
        for rule in &self.rules {
            for atom in rule.atoms() {
                let symbol = atom.symbol();
                if !out.contains(&symbol) {
                    out.push(symbol);
                }
            }
        }
        out
    }

    /// Symbolic constants occurring in terms of the program.
    pub fn symbolic_constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        for rule in &self.rules {
            for term in rule.terms() {
                term.collect_symbols(&mut out);
            }
        }
        out
    }

    /// Largest absolute value of a numeral written in the program.
    pub fn max_numeral(&self) -> i64 {
        fn walk(t: &Term, acc: &mut i64) {
            match t {
                Term::Numeral(n) => *acc = (*acc).max(n.saturating_abs()),
                Term::BinOp(_, l, r) => {
                    walk(l, acc);
                    walk(r, acc);
                }
                Term::Abs(t) => walk(t, acc),
                _ => {}
            }
        }
        let mut acc = 0;
        for rule in &self.rules {
            for term in rule.terms() {
                walk(term, &mut acc);
            }
        }
        acc
    }
}
