//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every entry point takes program text and returns text; errors come back
//! as a rejected promise / thrown `Error` carrying the message.

use clsem_core::semantics::{answer_sets, render_answer_sets, verify_equivalence, Limits, SemanticsError};
use clsem_core::syntax::{parse_program, Program};
use clsem_core::tau_star::{tau_star_program_with, Mutation};
use wasm_bindgen::prelude::*;

fn parse(src: &str) -> Result<Program, String> {
    parse_program(src).map_err(|e| format!("{}:{}: {}", e.line, e.column, e.message))
}

fn limits(int_bound: i32) -> Limits {
    Limits::with_bound(int_bound.max(0) as i64)
}

fn refused(e: SemanticsError) -> String {
    format!("refused: {e}")
}

pub fn translate_text(src: &str) -> Result<String, String> {
    Ok(tau_star_program_with(&parse(src)?, Mutation::None).to_string())
}

pub fn solve_text(src: &str, int_bound: i32) -> Result<String, String> {
    let models = answer_sets(&parse(src)?, &limits(int_bound)).map_err(refused)?;
    Ok(render_answer_sets(&models))
}

pub fn verify_text(src: &str, int_bound: i32) -> Result<String, String> {
    Ok(verify_equivalence(&parse(src)?, "input", &limits(int_bound)).render_text())
}

/// First-order translation of the program.
#[wasm_bindgen]
pub fn translate(src: &str) -> Result<String, JsError> {
    translate_text(src).map_err(|e| JsError::new(&e))
}

/// Answer sets, one per line, with numerals bounded by `int_bound`.
#[wasm_bindgen]
pub fn solve(src: &str, int_bound: i32) -> Result<String, JsError> {
    solve_text(src, int_bound).map_err(|e| JsError::new(&e))
}

/// Strong equivalence report for the two translations.
#[wasm_bindgen]
pub fn verify(src: &str, int_bound: i32) -> Result<String, JsError> {
    verify_text(src, int_bound).map_err(|e| JsError::new(&e))
}
