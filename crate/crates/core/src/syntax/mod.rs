//! The program language: terms with arithmetic and intervals, basic and
//! conditional literals, basic/choice/constraint rules.

mod ast;
mod parser;
mod render;

use std::cmp::Ordering;

pub use ast::*;
pub use parser::{parse_conditional_literal, parse_program, parse_term, ParseError};

/// Global variables of a rule, in first-occurrence order.
pub fn global_variables(rule: &Rule) -> Vec<String> {
    rule.global_variables()
}

/// The total order on precomputed terms.
pub fn compare_precomputed(a: &PrecomputedTerm, b: &PrecomputedTerm) -> Ordering {
    a.cmp(b)
}

/// JSON export of a program AST.
pub fn program_to_json(program: &Program) -> serde_json::Value {
    serde_json::json!({
        "schema": "clsem/program/v1",
        "rules": program.rules,
    })
}
