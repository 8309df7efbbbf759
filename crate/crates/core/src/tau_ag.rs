//! The translation of closed rules into infinitary propositional formulas,
//! following the input language of gringo: rules are instantiated over the
//! universe, terms are replaced by their value sets, and conditional
//! literals become conjunctions over all tuples for their local variables.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::infinitary::InfFormula;
use crate::syntax::{
    BasicLiteral, CondHead, Comparison, ConditionalLiteral, Head, Literal, PrecomputedAtom, PrecomputedTerm, Program,
    Rule, Sign, Substitution,
};
use crate::values::{eval_tuple_values_with, eval_values_with, ValueError, ValueOptions};

pub const DEFAULT_INSTANCE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TauError {
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error("{what} needs {count} substitutions, cap is {cap}")]
    TooManyInstances { what: &'static str, count: u128, cap: usize },
    #[error("expression is not closed: variable {0} is global")]
    NotClosed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauOptions {
    /// Bound on rule instances and on tuples for the local variables of one
    /// conditional literal.
    pub instance_cap: usize,
    pub values: ValueOptions,
    /// Drop values of terms that fall outside the universe, so that the
    /// translation sees the same bounded world as grounding does. Without
    /// it an atom such as `p(N+1)` survives although it belongs to no atom
    /// base, and `not p(N+1)` becomes a tautology the grounded side lacks.
    pub restrict_values: bool,
}

impl Default for TauOptions {
    fn default() -> Self {
        TauOptions {
            instance_cap: DEFAULT_INSTANCE_CAP,
            values: ValueOptions::default(),
            restrict_values: true,
        }
    }
}

/// A rule with every global variable replaced by a precomputed term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleInstance {
    pub rule: Rule,
    pub substitution: Substitution,
}

/// All substitutions of universe elements for `vars`, in universe order
/// (last variable varying fastest).
fn substitutions(
    vars: &[String],
    universe: &[PrecomputedTerm],
    cap: usize,
    what: &'static str,
) -> Result<Vec<Substitution>, TauError> {
    let count = (universe.len() as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(TauError::TooManyInstances { what, count, cap });
    }
    let mut out = vec![Substitution::new()];
    for v in vars {
        let mut next = Vec::with_capacity(out.len() * universe.len());
        for s in &out {
            for r in universe {
                let mut s = s.clone();
                s.insert(v.clone(), r.clone());
                next.push(s);
            }
        }
        out = next;
    }
    Ok(out)
}

pub fn instances(rule: &Rule, universe: &[PrecomputedTerm]) -> Result<Vec<RuleInstance>, TauError> {
    instances_with(rule, universe, TauOptions::default())
}

pub fn instances_with(rule: &Rule, universe: &[PrecomputedTerm], options: TauOptions) -> Result<Vec<RuleInstance>, TauError> {
    let globals = rule.global_variables();
    Ok(substitutions(&globals, universe, options.instance_cap, "rule instantiation")?
        .into_iter()
        .map(|substitution| RuleInstance {
            rule: rule.instantiate(&substitution),
            substitution,
        })
        .collect())
}

/// One member stands for itself; otherwise the set is kept as written.
fn conj(mut members: BTreeSet<InfFormula>) -> InfFormula {
    if members.len() == 1 {
        members.pop_first().unwrap()
    } else {
        InfFormula::Conj(members)
    }
}

fn disj(mut members: BTreeSet<InfFormula>) -> InfFormula {
    if members.len() == 1 {
        members.pop_first().unwrap()
    } else {
        InfFormula::Disj(members)
    }
}

struct Translator<'u> {
    universe: &'u [PrecomputedTerm],
    members: BTreeSet<&'u PrecomputedTerm>,
    options: TauOptions,
}

impl<'u> Translator<'u> {
    fn new(universe: &'u [PrecomputedTerm], options: TauOptions) -> Self {
        Translator {
            universe,
            members: universe.iter().collect(),
            options,
        }
    }

    fn admissible(&self, t: &PrecomputedTerm) -> bool {
        !self.options.restrict_values || self.members.contains(t)
    }

    fn values(&self, t: &crate::syntax::Term) -> Result<Vec<PrecomputedTerm>, TauError> {
        let vs = eval_values_with(t, self.options.values)?;
        Ok(vs.values.into_iter().filter(|v| self.admissible(v)).collect())
    }

    fn atoms(&self, predicate: &str, args: &[crate::syntax::Term]) -> Result<Vec<PrecomputedAtom>, TauError> {
        Ok(eval_tuple_values_with(args, self.options.values)?
            .into_iter()
            .filter(|r| r.iter().all(|v| self.admissible(v)))
            .map(|r| PrecomputedAtom::new(predicate, r))
            .collect())
    }

    fn basic(&self, b: &BasicLiteral) -> Result<InfFormula, TauError> {
        let members = self.atoms(&b.atom.predicate, &b.atom.args)?.into_iter().map(|a| {
            let a = InfFormula::atom(a);
            match b.sign {
                Sign::Positive => a,
                Sign::Not => InfFormula::not(a),
                Sign::NotNot => InfFormula::not(InfFormula::not(a)),
            }
        });
        Ok(disj(members.collect()))
    }

    fn comparison(&self, c: &Comparison) -> Result<InfFormula, TauError> {
        let left = self.values(&c.left)?;
        let right = self.values(&c.right)?;
        let holds = left.iter().any(|l| right.iter().any(|r| c.relation.holds(l, r)));
        Ok(if holds { InfFormula::top() } else { InfFormula::bot() })
    }

    fn literal(&self, l: &Literal) -> Result<InfFormula, TauError> {
        match l {
            Literal::Basic(b) => self.basic(b),
            Literal::Comparison(c) => self.comparison(c),
        }
    }

    fn list(&self, ls: &[Literal]) -> Result<InfFormula, TauError> {
        Ok(conj(ls.iter().map(|l| self.literal(l)).collect::<Result<_, _>>()?))
    }

    fn cond_head(&self, h: &CondHead) -> Result<InfFormula, TauError> {
        match h {
            CondHead::Falsum => Ok(InfFormula::bot()),
            CondHead::Literal(l) => self.literal(l),
        }
    }

    fn closed(&self, e: &ConditionalLiteral) -> Result<InfFormula, TauError> {
        if let Some(v) = e.global_variables().into_iter().next() {
            return Err(TauError::NotClosed(v));
        }
        if e.is_plain() {
            return self.cond_head(&e.head);
        }
        self.expand(e)
    }

    /// The conjunction over tuples for the local variables of `e`.
    fn expand(&self, e: &ConditionalLiteral) -> Result<InfFormula, TauError> {
        let locals = e.variables();
        let mut members = BTreeSet::new();
        for s in substitutions(&locals, self.universe, self.options.instance_cap, "conditional literal expansion")? {
            let e = e.substitute(&s);
            members.insert(InfFormula::implies(self.list(&e.conditions)?, self.cond_head(&e.head)?));
        }
        Ok(conj(members))
    }

    fn instance(&self, rule: &Rule) -> Result<InfFormula, TauError> {
        let body = conj(rule.body.iter().map(|e| self.closed(e)).collect::<Result<_, _>>()?);
        Ok(match &rule.head {
            Head::Basic(a) => {
                let heads = self.atoms(&a.predicate, &a.args)?.into_iter().map(InfFormula::atom);
                InfFormula::implies(body, conj(heads.collect()))
            }
            Head::Choice(a) => {
                let heads = self.atoms(&a.predicate, &a.args)?.into_iter().map(|a| {
                    let a = InfFormula::atom(a);
                    InfFormula::disj([a.clone(), InfFormula::not(a)])
                });
                InfFormula::implies(body, conj(heads.collect()))
            }
            Head::Constraint => InfFormula::not(body),
        })
    }

    fn rule(&self, rule: &Rule) -> Result<InfFormula, TauError> {
        let instances = instances_with(rule, self.universe, self.options)?;
        #[cfg(feature = "parallel")]
        let translated: Vec<InfFormula> = {
            use rayon::prelude::*;
            instances.par_iter().map(|i| self.instance(&i.rule)).collect::<Result<_, _>>()?
        };
        #[cfg(not(feature = "parallel"))]
        let translated: Vec<InfFormula> = instances.iter().map(|i| self.instance(&i.rule)).collect::<Result<_, _>>()?;
        Ok(conj(translated.into_iter().collect()))
    }
}

/// `τ` of a closed conditional literal (plain literals included).
pub fn tau_closed(e: &ConditionalLiteral, universe: &[PrecomputedTerm]) -> Result<InfFormula, TauError> {
    tau_closed_with(e, universe, TauOptions::default())
}

pub fn tau_closed_with(e: &ConditionalLiteral, universe: &[PrecomputedTerm], options: TauOptions) -> Result<InfFormula, TauError> {
    Translator::new(universe, options).closed(e)
}

/// `τ` of a closed literal read as a conditional literal, always through the
/// tuple expansion, even without conditions.
pub fn tau_closed_expanded(e: &ConditionalLiteral, universe: &[PrecomputedTerm]) -> Result<InfFormula, TauError> {
    let t = Translator::new(universe, TauOptions::default());
    if let Some(v) = e.global_variables().into_iter().next() {
        return Err(TauError::NotClosed(v));
    }
    t.expand(e)
}

/// `τ` of a rule: the conjunction of the translations of its instances.
pub fn tau_rule(rule: &Rule, universe: &[PrecomputedTerm]) -> Result<InfFormula, TauError> {
    tau_rule_with(rule, universe, TauOptions::default())
}

pub fn tau_rule_with(rule: &Rule, universe: &[PrecomputedTerm], options: TauOptions) -> Result<InfFormula, TauError> {
    Translator::new(universe, options).rule(rule)
}

pub fn tau_program(program: &Program, universe: &[PrecomputedTerm]) -> Result<BTreeSet<InfFormula>, TauError> {
    tau_program_with(program, universe, TauOptions::default())
}

pub fn tau_program_with(
    program: &Program,
    universe: &[PrecomputedTerm],
    options: TauOptions,
) -> Result<BTreeSet<InfFormula>, TauError> {
    let t = Translator::new(universe, options);
    program.rules.iter().map(|r| t.rule(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infinitary::ht_equivalent;
    use crate::syntax::{parse_conditional_literal, parse_program};
    use proptest::prelude::*;

    fn universe(items: &[&str]) -> Vec<PrecomputedTerm> {
        let mut out: Vec<PrecomputedTerm> = items
            .iter()
            .map(|s| match s.parse::<i64>() {
                Ok(n) => PrecomputedTerm::Numeral(n),
                Err(_) => PrecomputedTerm::symbol(*s),
            })
            .collect();
        out.sort();
        out
    }

    fn rule(src: &str) -> Rule {
        parse_program(src).unwrap().rules.remove(0)
    }

    fn atom(p: &str, args: &[&str]) -> InfFormula {
        InfFormula::atom(PrecomputedAtom::new(p, universe(args)))
    }

    #[test]
    fn instance_counts() {
        let u = universe(&["1", "a"]);
        let is = instances(&rule("q(X) :- p(X)."), &u).unwrap();
        assert_eq!(is.len(), 2);
        assert_eq!(is[0].rule, rule("q(1) :- p(1)."));
        assert_eq!(is[1].rule, rule("q(a) :- p(a)."));
        assert_eq!(instances(&rule("p :- q."), &u).unwrap().len(), 1);
        let coloring = rule(":- not asg(V,C) : col(C); vtx(V).");
        let u = universe(&["v", "w", "r", "g"]);
        assert_eq!(instances(&coloring, &u).unwrap().len(), u.len());
    }

    #[test]
    fn instance_cap_refuses() {
        let options = TauOptions {
            instance_cap: 5,
            ..TauOptions::default()
        };
        let err = instances_with(&rule("p(X,Y) :- q(X,Y)."), &universe(&["1", "2", "3"]), options).unwrap_err();
        assert_eq!(
            err,
            TauError::TooManyInstances {
                what: "rule instantiation",
                count: 9,
                cap: 5
            }
        );
    }

    #[test]
    fn closed_literals() {
        let u = universe(&["1", "2"]);
        let p = |s: &str| tau_closed(&parse_conditional_literal(s).unwrap(), &u).unwrap();
        assert_eq!(p("p(1..2)"), InfFormula::disj([atom("p", &["1"]), atom("p", &["2"])]));
        assert_eq!(p("1 < 1"), InfFormula::bot());
        assert_eq!(p("1 < 1..2"), InfFormula::top());
        assert_eq!(p("not p(2)"), InfFormula::not(atom("p", &["2"])));
        assert_eq!(p("not p(3)"), InfFormula::bot());
        assert_eq!(p("p(1..3)"), InfFormula::disj([atom("p", &["1"]), atom("p", &["2"])]));
        assert_eq!(p("not not p"), InfFormula::not(InfFormula::not(InfFormula::prop("p"))));
        assert_eq!(p("p(1/0)"), InfFormula::bot());
        assert_eq!(p("#false : q"), InfFormula::implies(InfFormula::prop("q"), InfFormula::bot()));
        let err = tau_closed(&parse_conditional_literal("p(X)").unwrap(), &u).unwrap_err();
        assert_eq!(err, TauError::NotClosed("X".into()));
    }

    #[test]
    fn unrestricted_values_keep_outside_atoms() {
        let options = TauOptions {
            restrict_values: false,
            ..TauOptions::default()
        };
        let e = parse_conditional_literal("not p(3)").unwrap();
        assert_eq!(
            tau_closed_with(&e, &universe(&["1"]), options).unwrap(),
            InfFormula::not(atom("p", &["3"]))
        );
        let r = rule("p(X+1) :- q(X).");
        let restricted = tau_rule(&r, &universe(&["1", "2"])).unwrap();
        assert_eq!(
            restricted,
            InfFormula::conj([
                InfFormula::implies(atom("q", &["1"]), atom("p", &["2"])),
                InfFormula::implies(atom("q", &["2"]), InfFormula::top()),
            ])
        );
    }

    #[test]
    fn conditional_literal_over_universe() {
        let u = universe(&["v", "r", "g"]);
        let e = parse_conditional_literal("not asg(v,C) : col(C)").unwrap();
        let expected = InfFormula::conj(u.iter().map(|c| {
            let c = c.clone();
            InfFormula::implies(
                InfFormula::atom(PrecomputedAtom::new("col", vec![c.clone()])),
                InfFormula::not(InfFormula::atom(PrecomputedAtom::new(
                    "asg",
                    vec![PrecomputedTerm::symbol("v"), c],
                ))),
            )
        }));
        assert_eq!(tau_closed(&e, &u).unwrap(), expected);
    }

    #[test]
    fn rule_templates() {
        let u = universe(&["1", "2"]);
        assert_eq!(tau_rule(&rule(":- q."), &u).unwrap(), InfFormula::not(InfFormula::prop("q")));
        assert_eq!(
            tau_rule(&rule("p(1..2) :- q."), &u).unwrap(),
            InfFormula::implies(
                InfFormula::prop("q"),
                InfFormula::conj([atom("p", &["1"]), atom("p", &["2"])])
            )
        );
        let p = InfFormula::prop("p");
        assert_eq!(
            tau_rule(&rule("{p}."), &u).unwrap(),
            InfFormula::implies(InfFormula::top(), InfFormula::disj([p.clone(), InfFormula::not(p)]))
        );
        assert_eq!(
            tau_rule(&rule(":- 1 < 2."), &u).unwrap(),
            InfFormula::not(InfFormula::top())
        );
    }

    #[test]
    fn coloring_constraint_shape() {
        let u = universe(&["v", "w", "r"]);
        let translated = tau_rule(&rule(":- not asg(V,C) : col(C); vtx(V)."), &u).unwrap();
        let sym = |s: &PrecomputedTerm| s.clone();
        let expected = InfFormula::conj(u.iter().map(|v| {
            let cl = InfFormula::conj(u.iter().map(|c| {
                InfFormula::implies(
                    InfFormula::atom(PrecomputedAtom::new("col", vec![sym(c)])),
                    InfFormula::not(InfFormula::atom(PrecomputedAtom::new("asg", vec![sym(v), sym(c)]))),
                )
            }));
            let vtx = InfFormula::atom(PrecomputedAtom::new("vtx", vec![sym(v)]));
            InfFormula::not(InfFormula::conj([cl, vtx]))
        }));
        assert_eq!(translated, expected);
    }

    #[test]
    fn programs() {
        let u = universe(&["1"]);
        assert!(tau_program(&Program::default(), &u).unwrap().is_empty());
        assert_eq!(tau_program(&parse_program("p :- q.").unwrap(), &u).unwrap().len(), 1);
    }

    #[test]
    fn ground_program_is_clause_image() {
        let program = parse_program("p :- q, not r. q. :- p, not not s. {s}.").unwrap();
        let tau = tau_program(&program, &universe(&["1"])).unwrap();
        let (p, q, r, s) = (
            InfFormula::prop("p"),
            InfFormula::prop("q"),
            InfFormula::prop("r"),
            InfFormula::prop("s"),
        );
        let expected: BTreeSet<InfFormula> = [
            InfFormula::implies(InfFormula::conj([q.clone(), InfFormula::not(r)]), p.clone()),
            InfFormula::implies(InfFormula::top(), q),
            InfFormula::not(InfFormula::conj([p, InfFormula::not(InfFormula::not(s.clone()))])),
            InfFormula::implies(InfFormula::top(), InfFormula::disj([s.clone(), InfFormula::not(s)])),
        ]
        .into();
        assert_eq!(tau, expected);
    }

    fn arb_literal_src() -> impl Strategy<Value = String> {
        let term = prop::sample::select(vec!["1", "2", "a", "X", "1..2", "X+1", "Y"]);
        let pred = prop::sample::select(vec!["p", "q"]);
        let sign = prop::sample::select(vec!["", "not ", "not not "]);
        (sign, pred, term).prop_map(|(s, p, t)| format!("{s}{p}({t})"))
    }

    fn arb_rule_src() -> impl Strategy<Value = String> {
        let element = (arb_literal_src(), prop::collection::vec(arb_literal_src(), 0..3))
            .prop_map(|(h, c)| if c.is_empty() { h } else { format!("{h} : {}", c.join(", ")) });
        let head = prop::sample::select(vec!["", "r(X)", "{r(X)}", "r(1..2)"]);
        (head, prop::collection::vec(element, 0..3)).prop_map(|(h, body)| {
            if body.is_empty() {
                format!("{}.", if h.is_empty() { "r" } else { h })
            } else {
                format!("{h} :- {}.", body.join("; "))
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn plain_literal_matches_expansion(src in arb_literal_src().prop_filter("closed", |s| !s.contains('X') && !s.contains('Y'))) {
            let u = universe(&["1", "2", "a"]);
            let e = parse_conditional_literal(&src).unwrap();
            let direct: BTreeSet<_> = [tau_closed(&e, &u).unwrap()].into();
            let expanded: BTreeSet<_> = [tau_closed_expanded(&e, &u).unwrap()].into();
            let base = direct.iter().chain(&expanded).flat_map(InfFormula::atoms).collect();
            prop_assert!(ht_equivalent(&direct, &expanded, &base, 12).unwrap());
        }

        #[test]
        fn translation_commutes_with_instantiation(src in arb_rule_src()) {
            let u = universe(&["1", "a"]);
            let r = rule(&src);
            let whole = tau_rule(&r, &u).unwrap();
            let parts: BTreeSet<InfFormula> = instances(&r, &u)
                .unwrap()
                .iter()
                .map(|i| {
                    prop_assert!(i.rule.global_variables().is_empty());
                    Ok(tau_rule(&i.rule, &u).unwrap())
                })
                .collect::<Result<_, TestCaseError>>()?;
            prop_assert_eq!(whole, conj(parts));
        }
    }
}
