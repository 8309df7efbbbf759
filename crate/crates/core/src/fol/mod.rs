//! Two-sorted first-order logic over the program signature: formulas,
//! bounded standard interpretations, classical satisfaction and the SM
//! operator's star transform.

mod formula;
mod interp;
mod sm;

pub use formula::{ArithOp, FoTerm, Formula, Sort, Theory, Variable};
pub(crate) use interp::{eval_term, Assignment};
pub use interp::{fo_satisfies, fo_satisfies_with_diagnostics, Diagnostics, StandardInterpretation};
pub use sm::{build_signature, sm_render, sm_star, ProgramSignature};

/// JSON export of a theory.
pub fn theory_to_json(theory: &Theory) -> serde_json::Value {
    serde_json::json!({
        "schema": "clsem/fo-theory/v1",
        "sentences": theory.sentences,
    })
}
