use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::PrecomputedAtom;

/// Infinitary propositional formula, finitely materialized. Conjunctions
/// and disjunctions are sets, so structurally equal members collapse and
/// the derived order gives a canonical member order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfFormula {
    Atom(PrecomputedAtom),
    Conj(BTreeSet<InfFormula>),
    Disj(BTreeSet<InfFormula>),
    Implies(Box<InfFormula>, Box<InfFormula>),
}

impl InfFormula {
    pub fn atom(a: PrecomputedAtom) -> Self {
        InfFormula::Atom(a)
    }

    pub fn prop(name: &str) -> Self {
        InfFormula::Atom(PrecomputedAtom::prop(name))
    }

    pub fn top() -> Self {
        InfFormula::Conj(BTreeSet::new())
    }

    pub fn bot() -> Self {
        InfFormula::Disj(BTreeSet::new())
    }

    pub fn conj(fs: impl IntoIterator<Item = InfFormula>) -> Self {
        InfFormula::Conj(fs.into_iter().collect())
    }

    pub fn disj(fs: impl IntoIterator<Item = InfFormula>) -> Self {
        InfFormula::Disj(fs.into_iter().collect())
    }

    pub fn implies(l: InfFormula, r: InfFormula) -> Self {
        InfFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn not(f: InfFormula) -> Self {
        InfFormula::implies(f, InfFormula::bot())
    }

    pub fn is_top(&self) -> bool {
        matches!(self, InfFormula::Conj(fs) if fs.is_empty())
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, InfFormula::Disj(fs) if fs.is_empty())
    }

    pub fn as_negated(&self) -> Option<&InfFormula> {
        match self {
            InfFormula::Implies(l, r) if r.is_bot() => Some(l),
            _ => None,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            InfFormula::Atom(_) => 0,
            InfFormula::Conj(fs) | InfFormula::Disj(fs) => fs.iter().map(|f| f.rank() + 1).max().unwrap_or(0),
            InfFormula::Implies(l, r) => 1 + l.rank().max(r.rank()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            InfFormula::Atom(_) => 1,
            InfFormula::Conj(fs) | InfFormula::Disj(fs) => 1 + fs.iter().map(InfFormula::size).sum::<usize>(),
            InfFormula::Implies(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<PrecomputedAtom>) {
        match self {
            InfFormula::Atom(a) => {
                out.insert(a.clone());
            }
            InfFormula::Conj(fs) | InfFormula::Disj(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
            InfFormula::Implies(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<PrecomputedAtom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    /// Atoms with an occurrence outside every implication antecedent.
    pub fn strictly_positive_atoms(&self, out: &mut BTreeSet<PrecomputedAtom>) {
        match self {
            InfFormula::Atom(a) => {
                out.insert(a.clone());
            }
            InfFormula::Conj(fs) | InfFormula::Disj(fs) => fs.iter().for_each(|f| f.strictly_positive_atoms(out)),
            InfFormula::Implies(_, r) => r.strictly_positive_atoms(out),
        }
    }

    /// Replaces every atom outside `keep` by `⊥`, simplifying on the way up.
    pub fn falsify_except(&self, keep: &BTreeSet<PrecomputedAtom>) -> Self {
        match self {
            InfFormula::Atom(a) if keep.contains(a) => self.clone(),
            InfFormula::Atom(_) => InfFormula::bot(),
            InfFormula::Conj(fs) => InfFormula::and_simplified(fs.iter().map(|f| f.falsify_except(keep))),
            InfFormula::Disj(fs) => InfFormula::or_simplified(fs.iter().map(|f| f.falsify_except(keep))),
            InfFormula::Implies(l, r) => InfFormula::implies_simplified(l.falsify_except(keep), r.falsify_except(keep)),
        }
    }

    /// Conjunction with the unit laws applied: `⊤` members vanish, a `⊥`
    /// member absorbs, a single member stands for itself. Each step
    /// preserves strong equivalence.
    pub fn and_simplified(fs: impl IntoIterator<Item = InfFormula>) -> Self {
        let mut members = BTreeSet::new();
        for f in fs {
            if f.is_bot() {
                return InfFormula::bot();
            }
            if !f.is_top() {
                members.insert(f);
            }
        }
        if members.len() == 1 {
            return members.pop_first().unwrap();
        }
        InfFormula::Conj(members)
    }

    pub fn or_simplified(fs: impl IntoIterator<Item = InfFormula>) -> Self {
        let mut members = BTreeSet::new();
        for f in fs {
            if f.is_top() {
                return InfFormula::top();
            }
            if !f.is_bot() {
                members.insert(f);
            }
        }
        if members.len() == 1 {
            return members.pop_first().unwrap();
        }
        InfFormula::Disj(members)
    }

    /// `⊥ → P` and `P → ⊤` are `⊤`; `⊤ → P` is `P`.
    pub fn implies_simplified(l: InfFormula, r: InfFormula) -> Self {
        if l.is_bot() || r.is_top() {
            InfFormula::top()
        } else if l.is_top() {
            r
        } else {
            InfFormula::implies(l, r)
        }
    }

    /// Bottom-up application of the simplifying constructors.
    pub fn simplify(&self) -> Self {
        match self {
            InfFormula::Atom(_) => self.clone(),
            InfFormula::Conj(fs) => InfFormula::and_simplified(fs.iter().map(InfFormula::simplify)),
            InfFormula::Disj(fs) => InfFormula::or_simplified(fs.iter().map(InfFormula::simplify)),
            InfFormula::Implies(l, r) => InfFormula::implies_simplified(l.simplify(), r.simplify()),
        }
    }
}

impl fmt::Display for InfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfFormula::Atom(a) => write!(f, "{a}"),
            _ if self.is_top() => f.write_str("⊤"),
            _ if self.is_bot() => f.write_str("⊥"),
            InfFormula::Conj(fs) | InfFormula::Disj(fs) => {
                f.write_str(if matches!(self, InfFormula::Conj(_)) { "∧{" } else { "∨{" })?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str("}")
            }
            InfFormula::Implies(l, r) => {
                if r.is_bot() {
                    write!(f, "¬{l}")
                } else {
                    write!(f, "({l} → {r})")
                }
            }
        }
    }
}

/// An HT-interpretation `⟨here, there⟩` with `here ⊆ there`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HtInterpretation {
    pub here: BTreeSet<PrecomputedAtom>,
    pub there: BTreeSet<PrecomputedAtom>,
}

impl HtInterpretation {
    pub fn new(here: BTreeSet<PrecomputedAtom>, there: BTreeSet<PrecomputedAtom>) -> Self {
        assert!(here.is_subset(&there), "here-world must be a subset of the there-world");
        HtInterpretation { here, there }
    }

    pub fn total(s: BTreeSet<PrecomputedAtom>) -> Self {
        HtInterpretation {
            here: s.clone(),
            there: s,
        }
    }
}

pub fn format_atom_set(s: &BTreeSet<PrecomputedAtom>) -> String {
    let items: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for HtInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {}⟩", format_atom_set(&self.here), format_atom_set(&self.there))
    }
}
