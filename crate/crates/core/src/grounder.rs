//! Grounding of two-sorted sentences into infinitary propositional formulas
//! relative to a standard interpretation and a split of the predicate
//! symbols into intensional and extensional ones.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::{eval_term, Assignment, Diagnostics, FoTerm, Formula, StandardInterpretation, Theory, Variable};
use crate::infinitary::InfFormula;
use crate::syntax::{PrecomputedAtom, PredicateSymbol, Program};

pub const DEFAULT_EXPANSION_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("quantifier expansion exceeded the cap of {cap} branches")]
    ExpansionCap { cap: u64 },
    #[error("sentence has free variables: {0}")]
    NotClosed(String),
    #[error("predicate variable {0} cannot be grounded")]
    PredicateVariable(String),
    #[error("predicate symbols listed as both intensional and extensional: {0}")]
    Overlap(String),
}

/// Intensional predicates become atoms; extensional ones are looked up in
/// the interpretation. Comparisons are always extensional. Symbols listed in
/// neither set count as intensional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicatePartition {
    pub intensional: BTreeSet<PredicateSymbol>,
    pub extensional: BTreeSet<PredicateSymbol>,
}

impl PredicatePartition {
    pub fn new(
        intensional: impl IntoIterator<Item = PredicateSymbol>,
        extensional: impl IntoIterator<Item = PredicateSymbol>,
    ) -> Result<Self, GroundError> {
        let intensional: BTreeSet<_> = intensional.into_iter().collect();
        let extensional: BTreeSet<_> = extensional.into_iter().collect();
        let overlap: Vec<String> = intensional
            .intersection(&extensional)
            .map(|p| format!("{}/{}", p.name, p.arity))
            .collect();
        if !overlap.is_empty() {
            return Err(GroundError::Overlap(overlap.join(", ")));
        }
        Ok(PredicatePartition { intensional, extensional })
    }

    /// Every predicate of the program intensional.
    pub fn standard(program: &Program) -> Self {
        PredicatePartition {
            intensional: program.predicates().into_iter().collect(),
            extensional: BTreeSet::new(),
        }
    }

    /// Program predicates in `intensional`, the rest extensional.
    pub fn with_intensional(program: &Program, intensional: &[PredicateSymbol]) -> Self {
        let (p, q) = program.predicates().into_iter().partition(|s| intensional.contains(s));
        PredicatePartition {
            intensional: p,
            extensional: q,
        }
    }

    pub fn is_extensional(&self, name: &str, arity: usize) -> bool {
        self.extensional.contains(&PredicateSymbol::new(name, arity))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundOptions {
    /// Apply the unit laws while building, and stop expanding a quantifier
    /// once a branch decides it. Preserves strong equivalence.
    pub simplify: bool,
    pub expansion_cap: u64,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions {
            simplify: false,
            expansion_cap: DEFAULT_EXPANSION_CAP,
        }
    }
}

impl GroundOptions {
    pub fn simplified() -> Self {
        GroundOptions {
            simplify: true,
            ..GroundOptions::default()
        }
    }
}

struct Grounder<'a> {
    i: &'a StandardInterpretation,
    part: &'a PredicatePartition,
    options: GroundOptions,
    branches: u64,
    diag: Diagnostics,
    /// Free variables of quantified subformulas, by address.
    free: HashMap<*const Formula, Vec<Variable>>,
    /// Groundings of quantified subformulas, by address and the values of
    /// their free variables. Nested value formulas repeat these a lot.
    memo: HashMap<(*const Formula, Vec<crate::syntax::PrecomputedTerm>), InfFormula>,
}

fn truth(b: bool) -> InfFormula {
    if b {
        InfFormula::top()
    } else {
        InfFormula::bot()
    }
}

impl Grounder<'_> {
    fn terms(&mut self, args: &[FoTerm], env: &Assignment) -> Option<Vec<crate::syntax::PrecomputedTerm>> {
        args.iter().map(|a| eval_term(self.i, a, env, &mut self.diag)).collect()
    }

    fn ground(&mut self, f: &Formula, env: &mut Assignment) -> Result<InfFormula, GroundError> {
        let simplify = self.options.simplify;
        Ok(match f {
            Formula::Atom { predicate, args } => match self.terms(args, env) {
                // ill-sorted or overflowing arithmetic denotes nothing
                None => InfFormula::bot(),
                Some(values) => {
                    let atom = PrecomputedAtom::new(predicate.clone(), values);
                    if self.part.is_extensional(predicate, args.len()) {
                        truth(self.i.is_true(&atom))
                    } else {
                        if !atom.args.iter().all(|t| self.i.contains(t)) {
                            self.diag.out_of_universe_atoms.insert(atom.clone());
                        }
                        InfFormula::atom(atom)
                    }
                }
            },
            Formula::PredVar { predicate, .. } => return Err(GroundError::PredicateVariable(predicate.clone())),
            Formula::Compare(rel, l, r) => {
                let l = eval_term(self.i, l, env, &mut self.diag);
                let r = eval_term(self.i, r, env, &mut self.diag);
                match (l, r) {
                    (Some(l), Some(r)) => truth(rel.holds(&l, &r)),
                    _ => InfFormula::bot(),
                }
            }
            Formula::Falsum => InfFormula::bot(),
            Formula::And(fs) => {
                let mut members = Vec::with_capacity(fs.len());
                for g in fs {
                    let g = self.ground(g, env)?;
                    if simplify && g.is_bot() {
                        return Ok(g);
                    }
                    members.push(g);
                }
                if simplify {
                    InfFormula::and_simplified(members)
                } else {
                    InfFormula::conj(members)
                }
            }
            Formula::Or(fs) => {
                let mut members = Vec::with_capacity(fs.len());
                for g in fs {
                    let g = self.ground(g, env)?;
                    if simplify && g.is_top() {
                        return Ok(g);
                    }
                    members.push(g);
                }
                if simplify {
                    InfFormula::or_simplified(members)
                } else {
                    InfFormula::disj(members)
                }
            }
            Formula::Implies(l, r) => {
                let l = self.ground(l, env)?;
                if simplify && l.is_bot() {
                    return Ok(InfFormula::top());
                }
                let r = self.ground(r, env)?;
                if simplify {
                    InfFormula::implies_simplified(l, r)
                } else {
                    InfFormula::implies(l, r)
                }
            }
            Formula::Forall(..) | Formula::Exists(..) => self.quantified(f, env)?,
        })
    }

    fn quantified(&mut self, f: &Formula, env: &mut Assignment) -> Result<InfFormula, GroundError> {
        let address = f as *const Formula;
        let free = self
            .free
            .entry(address)
            .or_insert_with(|| f.free_variables().into_iter().collect());
        let key = (address, free.iter().map(|v| env[v].clone()).collect::<Vec<_>>());
        if let Some(g) = self.memo.get(&key) {
            return Ok(g.clone());
        }
        let simplify = self.options.simplify;
        let g = match f {
            Formula::Forall(vars, body) => {
                let mut members = Vec::new();
                self.expand(vars, body, env, true, &mut members)?;
                if simplify {
                    InfFormula::and_simplified(members)
                } else {
                    InfFormula::conj(members)
                }
            }
            Formula::Exists(vars, body) => {
                let mut members = Vec::new();
                self.expand(vars, body, env, false, &mut members)?;
                if simplify {
                    InfFormula::or_simplified(members)
                } else {
                    InfFormula::disj(members)
                }
            }
            _ => unreachable!("only quantifiers are memoized"),
        };
        self.memo.insert(key, g.clone());
        Ok(g)
    }

    /// Grounds `body` for every assignment to `vars`, pushing the results.
    /// Returns `true` when a simplified branch decided the quantifier.
    fn expand(
        &mut self,
        vars: &[Variable],
        body: &Formula,
        env: &mut Assignment,
        universal: bool,
        out: &mut Vec<InfFormula>,
    ) -> Result<bool, GroundError> {
        let Some((first, rest)) = vars.split_first() else {
            self.branches += 1;
            if self.branches > self.options.expansion_cap {
                return Err(GroundError::ExpansionCap {
                    cap: self.options.expansion_cap,
                });
            }
            let g = self.ground(body, env)?;
            let decisive = self.options.simplify && if universal { g.is_bot() } else { g.is_top() };
            if decisive {
                out.clear();
            }
            out.push(g);
            return Ok(decisive);
        };
        let saved = env.get(first).cloned();
        let mut decided = false;
        for value in self.i.domain(first.sort) {
            env.insert(first.clone(), value.clone());
            if self.expand(rest, body, env, universal, out)? {
                decided = true;
                break;
            }
        }
        match saved {
            Some(v) => env.insert(first.clone(), v),
            None => env.remove(first),
        };
        Ok(decided)
    }
}

/// Grounding of a sentence, following the definition literally.
pub fn ground_formula(
    i: &StandardInterpretation,
    part: &PredicatePartition,
    f: &Formula,
) -> Result<InfFormula, GroundError> {
    ground_formula_with(i, part, f, GroundOptions::default()).map(|(g, _)| g)
}

/// Grounding with options, also returning what was noticed about values
/// falling outside the bounded universe.
pub fn ground_formula_with(
    i: &StandardInterpretation,
    part: &PredicatePartition,
    f: &Formula,
    options: GroundOptions,
) -> Result<(InfFormula, Diagnostics), GroundError> {
    if let Some(v) = f.free_variables().into_iter().next() {
        return Err(GroundError::NotClosed(v.name));
    }
    let mut g = Grounder {
        i,
        part,
        options,
        branches: 0,
        diag: Diagnostics::default(),
        free: HashMap::new(),
        memo: HashMap::new(),
    };
    let out = g.ground(f, &mut Assignment::new())?;
    Ok((out, g.diag))
}

pub fn ground_theory(
    i: &StandardInterpretation,
    part: &PredicatePartition,
    t: &Theory,
) -> Result<BTreeSet<InfFormula>, GroundError> {
    ground_theory_with(i, part, t, GroundOptions::default()).map(|(g, _)| g)
}

pub fn ground_theory_with(
    i: &StandardInterpretation,
    part: &PredicatePartition,
    t: &Theory,
    options: GroundOptions,
) -> Result<(BTreeSet<InfFormula>, Diagnostics), GroundError> {
    let ground_one = |f: &Formula| ground_formula_with(i, part, f, options);
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        t.sentences.par_iter().map(ground_one).collect::<Result<_, _>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = t.sentences.iter().map(ground_one).collect::<Result<_, _>>()?;
    let mut diag = Diagnostics::default();
    let mut out = BTreeSet::new();
    for (g, d) in results {
        diag.merge(d);
        if !(options.simplify && g.is_top()) {
            out.insert(g);
        }
    }
    Ok((out, diag))
}
