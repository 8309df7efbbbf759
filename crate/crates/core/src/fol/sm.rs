use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::formula::{FoTerm, Formula, Theory, Variable};
use crate::syntax::{PredicateSymbol, Program, Relation};

/// The predicate constants of the two-sorted target signature. Precomputed
/// terms are object constants and `+ - × |·|` are integer functions; both are
/// implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramSignature {
    /// Program predicates, all arguments of the program sort.
    pub predicates: Vec<PredicateSymbol>,
    /// Order comparisons, extensional, over the program sort. Equality is
    /// built in.
    pub comparisons: Vec<Relation>,
}

pub fn build_signature(program: &Program) -> ProgramSignature {
    ProgramSignature {
        predicates: program.predicates(),
        comparisons: vec![Relation::Ne, Relation::Lt, Relation::Gt, Relation::Le, Relation::Ge],
    }
}

/// `F*(u)`: occurrences of the listed predicates become predicate variables.
pub fn sm_star(f: &Formula, p: &[PredicateSymbol]) -> Formula {
    let listed = |name: &str, arity: usize| p.iter().any(|s| s.name == name && s.arity == arity);
    match f {
        Formula::Atom { predicate, args } if listed(predicate, args.len()) => Formula::PredVar {
            predicate: predicate.clone(),
            args: args.clone(),
        },
        Formula::Atom { .. } | Formula::PredVar { .. } | Formula::Compare(..) | Formula::Falsum => f.clone(),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| sm_star(g, p)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| sm_star(g, p)).collect()),
        Formula::Implies(l, r) => Formula::And(vec![
            Formula::implies(sm_star(l, p), sm_star(r, p)),
            f.clone(),
        ]),
        Formula::Forall(vars, body) => Formula::Forall(vars.clone(), Box::new(sm_star(body, p))),
        Formula::Exists(vars, body) => Formula::Exists(vars.clone(), Box::new(sm_star(body, p))),
    }
}

fn comparison_formula(symbol: &PredicateSymbol, forward: bool) -> Formula {
    let vars: Vec<Variable> = (1..=symbol.arity).map(|i| Variable::program(format!("W{i}"))).collect();
    let args: Vec<FoTerm> = vars.iter().map(FoTerm::var).collect();
    let u = Formula::PredVar {
        predicate: symbol.name.clone(),
        args: args.clone(),
    };
    let p = Formula::atom(symbol.name.clone(), args);
    let body = if forward {
        Formula::implies(u, p)
    } else {
        Formula::implies(p, u)
    };
    Formula::forall(vars, body)
}

/// Text of `SM_p[F] = F ∧ ¬∃u((u < p) ∧ F*(u))` with `u ≤ p` spelled out as
/// `∀W(u(W) → p(W))`. For reading only; nothing evaluates it.
pub fn sm_render(theory: &Theory, p: &[PredicateSymbol]) -> String {
    let f = theory.conjunction();
    let mut out = String::new();
    let names: Vec<String> = p.iter().map(|s| format!("u_{}", s.name)).collect();
    let inner = if p.is_empty() {
        // u < p is ⊥ for empty lists
        "⊥".to_string()
    } else {
        let le = Formula::conj(p.iter().map(|s| comparison_formula(s, true)).collect());
        let ge = Formula::conj(p.iter().map(|s| comparison_formula(s, false)).collect());
        let less = Formula::conj(vec![le, Formula::not(ge)]);
        format!("({less}) ∧ ({})", sm_star(&f, p))
    };
    let _ = write!(out, "{f} ∧ ¬∃({})({inner})", names.join(" "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p", vec![])
    }

    fn q() -> Formula {
        Formula::atom("q", vec![])
    }

    fn u(name: &str) -> Formula {
        Formula::PredVar {
            predicate: name.into(),
            args: vec![],
        }
    }

    #[test]
    fn star_examples() {
        let ps = [PredicateSymbol::new("p", 0)];
        assert_eq!(
            sm_star(&Formula::not(p()), &ps),
            Formula::And(vec![Formula::not(u("p")), Formula::not(p())])
        );
        assert_eq!(sm_star(&q(), &ps), q());
        let both = [PredicateSymbol::new("p", 0), PredicateSymbol::new("q", 0)];
        assert_eq!(
            sm_star(&Formula::And(vec![p(), q()]), &both),
            Formula::And(vec![u("p"), u("q")])
        );
    }

    #[test]
    fn star_is_identity_without_listed_symbols() {
        let f = Formula::forall(
            vec![Variable::program("X")],
            Formula::Or(vec![
                Formula::atom("r", vec![FoTerm::var(&Variable::program("X"))]),
                Formula::Exists(vec![Variable::integer("I")], Box::new(Formula::Falsum)),
            ]),
        );
        // arity matters: p/1 is not r/1 and r/0 is not r/1
        let ps = [PredicateSymbol::new("p", 1), PredicateSymbol::new("r", 0)];
        assert_eq!(sm_star(&f, &ps), f);
    }

    #[test]
    fn render_examples() {
        assert_eq!(sm_render(&Theory::default(), &[]), "⊤ ∧ ¬∃()(⊥)");
        let text = sm_render(&Theory::new(vec![q()]), &[PredicateSymbol::new("q", 0)]);
        assert!(text.contains("(u_q → q)"), "{text}");
        assert!(text.contains("¬(q → u_q)"), "{text}");
        let text = sm_render(&Theory::new(vec![]), &[PredicateSymbol::new("p", 2)]);
        assert!(text.contains("∀W1 W2 (u_p(W1, W2) → p(W1, W2))"), "{text}");
    }
}
