//! Semantics workbench for logic programs with conditional literals and
//! integer arithmetic.

pub mod fol;
pub mod grounder;
pub mod infinitary;
pub mod oracle;
pub mod semantics;
pub mod syntax;
pub mod tau_ag;
pub mod tau_star;
pub mod values;
