//! Translation of programs into two-sorted first-order sentences.

use serde::{Deserialize, Serialize};

use crate::fol::{FoTerm, Formula, Theory, Variable};
use crate::syntax::{Atom, BasicLiteral, CondHead, Comparison, ConditionalLiteral, Head, Literal, Program, Rule, Sign};
use crate::values::{val_formula, val_tuple, FreshVariables};

/// The global variables of the rule under translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalContext {
    pub z_vars: Vec<String>,
}

impl GlobalContext {
    pub fn for_rule(rule: &Rule) -> Self {
        GlobalContext {
            z_vars: rule.global_variables(),
        }
    }
}

/// Deliberate defects, used to check that the equivalence checks notice
/// when the translation is wrong.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    #[default]
    None,
    /// Choice rules lose their `¬¬p(V)` conjunct.
    DropChoiceDoubleNegation,
    /// Conditional literals lose their universal quantifier; the local
    /// variables end up bound by the rule's outer closure instead.
    DropConditionalForall,
}

struct Translator<'a> {
    ctx: &'a GlobalContext,
    fresh: &'a mut FreshVariables,
    mutation: Mutation,
}

impl Translator<'_> {
    fn atom_formula(&mut self, atom: &Atom, wrap: impl FnOnce(Formula) -> Formula) -> Formula {
        let vs: Vec<Variable> = atom.args.iter().map(|_| self.fresh.program()).collect();
        let mut parts = val_tuple(&atom.args, &vs, self.fresh);
        parts.push(wrap(Formula::atom(atom.predicate.clone(), vs.iter().map(FoTerm::var).collect())));
        Formula::exists(vs, Formula::conj(parts))
    }

    fn basic(&mut self, l: &BasicLiteral) -> Formula {
        match l.sign {
            Sign::Positive => self.atom_formula(&l.atom, |a| a),
            Sign::Not => self.atom_formula(&l.atom, Formula::not),
            Sign::NotNot => self.atom_formula(&l.atom, |a| Formula::not(Formula::not(a))),
        }
    }

    fn comparison(&mut self, c: &Comparison) -> Formula {
        let (z1, z2) = (self.fresh.program(), self.fresh.program());
        let v1 = val_formula(&c.left, &z1, self.fresh);
        let v2 = val_formula(&c.right, &z2, self.fresh);
        let cmp = Formula::compare(FoTerm::var(&z1), c.relation, FoTerm::var(&z2));
        Formula::exists(vec![z1, z2], Formula::And(vec![v1, v2, cmp]))
    }

    fn literal(&mut self, l: &Literal) -> Formula {
        match l {
            Literal::Basic(b) => self.basic(b),
            Literal::Comparison(c) => self.comparison(c),
        }
    }

    fn list(&mut self, ls: &[Literal]) -> Formula {
        Formula::conj(ls.iter().map(|l| self.literal(l)).collect())
    }

    fn head(&mut self, h: &CondHead) -> Formula {
        match h {
            CondHead::Falsum => Formula::Falsum,
            CondHead::Literal(l) => self.literal(l),
        }
    }

    fn conditional(&mut self, cl: &ConditionalLiteral) -> Formula {
        if cl.is_plain() {
            return self.head(&cl.head);
        }
        let conditions = self.list(&cl.conditions);
        let head = self.head(&cl.head);
        let body = Formula::implies(conditions, head);
        if self.mutation == Mutation::DropConditionalForall {
            return body;
        }
        let xs: Vec<Variable> = cl
            .variables()
            .into_iter()
            .filter(|v| !self.ctx.z_vars.contains(v))
            .map(Variable::program)
            .collect();
        Formula::forall(xs, body)
    }
}

fn fresh_for(rule: &Rule) -> FreshVariables {
    FreshVariables::new(rule.variables())
}

/// `τ^B_Z` of a body element of a rule with global variables `ctx.z_vars`.
/// `fresh` should reserve the rule's variable names.
pub fn tau_b(e: &ConditionalLiteral, ctx: &GlobalContext, fresh: &mut FreshVariables) -> Formula {
    Translator {
        ctx,
        fresh,
        mutation: Mutation::None,
    }
    .conditional(e)
}

pub fn tau_star_rule(rule: &Rule) -> Formula {
    tau_star_rule_with(rule, Mutation::None)
}

pub fn tau_star_rule_with(rule: &Rule, mutation: Mutation) -> Formula {
    let ctx = GlobalContext::for_rule(rule);
    let mut fresh = fresh_for(rule);
    // head variables are drawn first so they come out as V1, V2, ...
    let head_vars: Vec<Variable> = rule
        .head
        .atom()
        .map(|a| a.args.iter().map(|_| fresh.head()).collect())
        .unwrap_or_default();
    let mut tr = Translator {
        ctx: &ctx,
        fresh: &mut fresh,
        mutation,
    };
    let mut antecedent = match rule.head.atom() {
        Some(a) => val_tuple(&a.args, &head_vars, tr.fresh),
        None => Vec::new(),
    };
    antecedent.extend(rule.body.iter().map(|b| tr.conditional(b)));
    let head_atom = |a: &Atom| Formula::atom(a.predicate.clone(), head_vars.iter().map(FoTerm::var).collect());
    let matrix = match &rule.head {
        Head::Basic(a) => Formula::implies(Formula::conj(antecedent), head_atom(a)),
        Head::Choice(a) => {
            if mutation != Mutation::DropChoiceDoubleNegation {
                antecedent.push(Formula::not(Formula::not(head_atom(a))));
            }
            Formula::implies(Formula::conj(antecedent), head_atom(a))
        }
        Head::Constraint => Formula::implies(Formula::conj(antecedent), Formula::Falsum),
    };
    // closure binds V, then Z, then anything a mutation left free
    let mut closure = head_vars;
    closure.extend(ctx.z_vars.iter().map(Variable::program));
    let mut leftover: Vec<Variable> = matrix
        .free_variables()
        .into_iter()
        .filter(|v| !closure.contains(v))
        .collect();
    let order = rule.variables();
    leftover.sort_by_key(|v| order.iter().position(|n| *n == v.name));
    closure.extend(leftover);
    closure.retain(|v| matrix.free_variables().contains(v));
    Formula::forall(closure, matrix)
}

pub fn tau_star_program(program: &Program) -> Theory {
    tau_star_program_with(program, Mutation::None)
}

pub fn tau_star_program_with(program: &Program, mutation: Mutation) -> Theory {
    Theory::new(program.rules.iter().map(|r| tau_star_rule_with(r, mutation)).collect())
}
