//! Answer sets over a bounded universe, by both routes: grounding the
//! first-order translation, and the direct infinitary translation. Also
//! the equivalence verifier that compares the two.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::{Diagnostics, StandardInterpretation};
use crate::grounder::{ground_theory_with, GroundError, GroundOptions, PredicatePartition, DEFAULT_EXPANSION_CAP};
use crate::infinitary::{
    format_atom_set, ht_counterexample, ht_satisfies_all, stable_models_search, EnumerationError, HtInterpretation,
    InfFormula, DEFAULT_EQUILIBRIUM_LIMIT, DEFAULT_EQUIVALENCE_LIMIT,
};
use crate::syntax::{PrecomputedAtom, PrecomputedTerm, PredicateSymbol, Program};
use crate::tau_ag::{tau_program_with, TauError, TauOptions, DEFAULT_INSTANCE_CAP};
use crate::tau_star::{tau_star_program_with, Mutation};
use crate::values::{ValueOptions, DEFAULT_INTERVAL_CAP};

pub const DEFAULT_INT_BOUND: i64 = 8;
pub const DEFAULT_BASE_CAP: usize = 1_000_000;

pub type AtomBase = BTreeSet<PrecomputedAtom>;
pub type AnswerSet = BTreeSet<PrecomputedAtom>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("atom base would hold {size} atoms, cap is {cap}")]
    BaseTooLarge { size: u128, cap: usize },
    #[error("{0} is not a predicate of the program")]
    UnknownPredicate(String),
    #[error(transparent)]
    Tau(#[from] TauError),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// Bounds and caps for the semantic computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Numerals range over `[-int_bound, int_bound]`.
    pub int_bound: i64,
    /// Most atoms swept by the HT equivalence check.
    pub equivalence_limit: usize,
    /// Most candidate atoms in stable model search.
    pub equilibrium_limit: usize,
    pub base_cap: usize,
    pub instance_cap: usize,
    pub interval_cap: usize,
    pub expansion_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            int_bound: DEFAULT_INT_BOUND,
            equivalence_limit: DEFAULT_EQUIVALENCE_LIMIT,
            equilibrium_limit: DEFAULT_EQUILIBRIUM_LIMIT,
            base_cap: DEFAULT_BASE_CAP,
            instance_cap: DEFAULT_INSTANCE_CAP,
            interval_cap: DEFAULT_INTERVAL_CAP,
            expansion_cap: DEFAULT_EXPANSION_CAP,
        }
    }
}

impl Limits {
    pub fn with_bound(int_bound: i64) -> Self {
        Limits {
            int_bound,
            ..Limits::default()
        }
    }

    fn tau_options(&self) -> TauOptions {
        TauOptions {
            instance_cap: self.instance_cap,
            values: ValueOptions {
                interval_cap: self.interval_cap,
                allow_truncation: false,
            },
            restrict_values: true,
        }
    }

    fn ground_options(&self) -> GroundOptions {
        GroundOptions {
            simplify: true,
            expansion_cap: self.expansion_cap,
        }
    }
}

pub fn interpretation(program: &Program, limits: &Limits) -> StandardInterpretation {
    StandardInterpretation::for_program(program, limits.int_bound)
}

/// All atoms over `predicates` with arguments from `universe`.
pub fn atom_base_of(
    predicates: &[PredicateSymbol],
    universe: &[PrecomputedTerm],
    cap: usize,
) -> Result<AtomBase, SemanticsError> {
    let size: u128 = predicates
        .iter()
        .map(|p| (universe.len() as u128).checked_pow(p.arity as u32).unwrap_or(u128::MAX))
        .fold(0u128, u128::saturating_add);
    if size > cap as u128 {
        return Err(SemanticsError::BaseTooLarge { size, cap });
    }
    let mut base = AtomBase::new();
    for p in predicates {
        let mut tuples: Vec<Vec<PrecomputedTerm>> = vec![Vec::new()];
        for _ in 0..p.arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    universe.iter().map(move |r| {
                        let mut t = t.clone();
                        t.push(r.clone());
                        t
                    })
                })
                .collect();
        }
        base.extend(tuples.into_iter().map(|args| PrecomputedAtom::new(p.name.clone(), args)));
    }
    Ok(base)
}

pub fn atom_base(program: &Program, universe: &[PrecomputedTerm], cap: usize) -> Result<AtomBase, SemanticsError> {
    atom_base_of(&program.predicates(), universe, cap)
}

/// The first-order translation grounded under the standard interpretation
/// with every predicate intensional. Simplified on the way, which keeps
/// strong equivalence; the result does not depend on the interpretation's
/// atoms.
pub fn grounded_translation(
    program: &Program,
    limits: &Limits,
    mutation: Mutation,
) -> Result<(BTreeSet<InfFormula>, Diagnostics), SemanticsError> {
    let i = interpretation(program, limits);
    let part = PredicatePartition::standard(program);
    let theory = tau_star_program_with(program, mutation);
    Ok(ground_theory_with(&i, &part, &theory, limits.ground_options())?)
}

pub fn infinitary_translation(program: &Program, limits: &Limits) -> Result<BTreeSet<InfFormula>, SemanticsError> {
    let i = interpretation(program, limits);
    Ok(tau_program_with(program, i.universe(), limits.tau_options())?)
}

/// Answer sets through the first-order translation: stable models of its
/// grounding over the atom base.
pub fn answer_sets(program: &Program, limits: &Limits) -> Result<Vec<AnswerSet>, SemanticsError> {
    let i = interpretation(program, limits);
    let base = atom_base(program, i.universe(), limits.base_cap)?;
    let (g, _) = grounded_translation(program, limits, Mutation::None)?;
    Ok(stable_models_search(&g, &base, limits.equilibrium_limit)?)
}

/// Answer sets as stable models of the direct infinitary translation.
pub fn gringo_answer_sets(program: &Program, limits: &Limits) -> Result<Vec<AnswerSet>, SemanticsError> {
    let i = interpretation(program, limits);
    let base = atom_base(program, i.universe(), limits.base_cap)?;
    let t = infinitary_translation(program, limits)?;
    Ok(stable_models_search(&t, &base, limits.equilibrium_limit)?)
}

/// Answer sets relative to a list of intensional predicates, for one
/// extension of the others. The extension is restricted to the atom base;
/// the result contains it.
pub fn p_answer_sets_for(
    program: &Program,
    intensional: &[PredicateSymbol],
    extension: &BTreeSet<PrecomputedAtom>,
    limits: &Limits,
) -> Result<Vec<AnswerSet>, SemanticsError> {
    let predicates = program.predicates();
    if let Some(p) = intensional.iter().find(|p| !predicates.contains(p)) {
        return Err(SemanticsError::UnknownPredicate(format!("{}/{}", p.name, p.arity)));
    }
    let part = PredicatePartition::with_intensional(program, intensional);
    let i = interpretation(program, limits);
    let base = atom_base_of(intensional, i.universe(), limits.base_cap)?;
    let extension: Vec<PrecomputedAtom> = extension
        .iter()
        .filter(|a| part.is_extensional(&a.predicate, a.args.len()) && a.args.iter().all(|t| i.contains(t)))
        .cloned()
        .collect();
    let i = i.with_true_atoms(extension);
    let (g, _) = ground_theory_with(&i, &part, &tau_star_program_with(program, Mutation::None), limits.ground_options())?;
    let models = stable_models_search(&g, &base, limits.equilibrium_limit)?;
    Ok(models
        .into_iter()
        .map(|m| m.union(i.true_atoms()).cloned().collect())
        .collect())
}

/// Answer sets relative to `intensional`, over every extension of the
/// other predicates within the atom base. `limits.equilibrium_limit` also
/// bounds the number of extensional atoms.
pub fn p_answer_sets(
    program: &Program,
    intensional: &[PredicateSymbol],
    limits: &Limits,
) -> Result<Vec<AnswerSet>, SemanticsError> {
    let extensional: Vec<PredicateSymbol> = program
        .predicates()
        .into_iter()
        .filter(|p| !intensional.contains(p))
        .collect();
    let i = interpretation(program, limits);
    let ext_base: Vec<PrecomputedAtom> = atom_base_of(&extensional, i.universe(), limits.base_cap)?
        .into_iter()
        .collect();
    if ext_base.len() > limits.equilibrium_limit.min(63) {
        return Err(EnumerationError::TooManyAtoms {
            what: "extension enumeration".into(),
            atoms: ext_base.len(),
            limit: limits.equilibrium_limit.min(63),
        }
        .into());
    }
    let mut out = BTreeSet::new();
    for mask in 0..1u64 << ext_base.len() {
        let extension = ext_base
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect();
        out.extend(p_answer_sets_for(program, intensional, &extension, limits)?);
    }
    Ok(out.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equivalent,
    Counterexample,
    /// HT sweep passed, yet the two routes gave different answer sets.
    AnswerSetMismatch,
    Refused,
}

/// Which translation an HT counterexample satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Grounded,
    Infinitary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub here: Vec<String>,
    pub there: Vec<String>,
    pub satisfied_by: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub schema: String,
    pub program: String,
    pub int_bound: i64,
    pub universe_size: usize,
    pub atom_base_size: usize,
    pub limits: Limits,
    pub verdict: Verdict,
    pub counterexample: Option<Witness>,
    /// Whether both routes produced the same answer sets; absent when that
    /// check was refused too.
    pub answer_sets_agree: Option<bool>,
    pub refusal: Option<String>,
    pub diagnostics: Diagnostics,
    pub elapsed_ms: u128,
}

impl EquivalenceReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Human-readable summary; leaves out the timing so equal runs print
    /// equal text.
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "program: {}\nint bound: {}\nuniverse size: {}\natom base size: {}\nverdict: {}\n",
            self.program,
            self.int_bound,
            self.universe_size,
            self.atom_base_size,
            serde_json::to_value(self.verdict).unwrap().as_str().unwrap()
        );
        if let Some(w) = &self.counterexample {
            out.push_str(&format!(
                "counterexample: <{{{}}}, {{{}}}> satisfies only the {} side\n",
                w.here.join(", "),
                w.there.join(", "),
                match w.satisfied_by {
                    Side::Grounded => "grounded",
                    Side::Infinitary => "infinitary",
                }
            ));
        }
        match self.answer_sets_agree {
            Some(true) => out.push_str("answer sets: agree\n"),
            Some(false) => out.push_str("answer sets: differ\n"),
            None => out.push_str("answer sets: not compared\n"),
        }
        if let Some(r) = &self.refusal {
            out.push_str(&format!("refused: {r}\n"));
        }
        if !self.diagnostics.is_clean() {
            out.push_str(&format!(
                "note: {} arithmetic value(s) fell outside the integer range\n",
                self.diagnostics.out_of_range_values.len()
            ));
        }
        out
    }
}

fn atom_names(s: &BTreeSet<PrecomputedAtom>) -> Vec<String> {
    s.iter().map(ToString::to_string).collect()
}

/// Wall clock for reports; browsers have no `Instant`, so it reads zero there.
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn millis(&self) -> u128 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_millis();
        #[cfg(target_arch = "wasm32")]
        return 0;
    }
}

/// Compares the grounded first-order translation with the infinitary one:
/// strong equivalence by an HT sweep, then answer sets of both.
pub fn verify_equivalence(program: &Program, name: &str, limits: &Limits) -> EquivalenceReport {
    verify_equivalence_with(program, name, limits, Mutation::None)
}

pub fn verify_equivalence_with(program: &Program, name: &str, limits: &Limits, mutation: Mutation) -> EquivalenceReport {
    let start = Stopwatch::start();
    let i = interpretation(program, limits);
    let mut report = EquivalenceReport {
        schema: "clsem/equivalence-report/v1".into(),
        program: name.into(),
        int_bound: limits.int_bound,
        universe_size: i.universe().len(),
        atom_base_size: 0,
        limits: *limits,
        verdict: Verdict::Refused,
        counterexample: None,
        answer_sets_agree: None,
        refusal: None,
        diagnostics: Diagnostics::default(),
        elapsed_ms: 0,
    };
    let prepared = (|| -> Result<_, SemanticsError> {
        let base = atom_base(program, i.universe(), limits.base_cap)?;
        let (g, diag) = grounded_translation(program, limits, mutation)?;
        let t = infinitary_translation(program, limits)?;
        Ok((base, g, diag, t))
    })();
    let (base, g, diag, t) = match prepared {
        Ok(p) => p,
        Err(e) => {
            report.refusal = Some(e.to_string());
            report.elapsed_ms = start.millis();
            return report;
        }
    };
    report.atom_base_size = base.len();
    report.diagnostics = diag;
    let ht = ht_counterexample(&g, &t, &base, limits.equivalence_limit);
    let models = stable_models_search(&g, &base, limits.equilibrium_limit)
        .and_then(|a| Ok((a, stable_models_search(&t, &base, limits.equilibrium_limit)?)));
    match &models {
        Ok((a, b)) => report.answer_sets_agree = Some(a == b),
        Err(e) => report.refusal = Some(e.to_string()),
    }
    match ht {
        Ok(Some(w)) => {
            report.verdict = Verdict::Counterexample;
            report.counterexample = Some(witness(&w, &g));
        }
        Ok(None) => {
            report.verdict = if report.answer_sets_agree == Some(false) {
                Verdict::AnswerSetMismatch
            } else {
                Verdict::Equivalent
            }
        }
        Err(e) => report.refusal = Some(e.to_string()),
    }
    report.elapsed_ms = start.millis();
    report
}

fn witness(w: &HtInterpretation, grounded: &BTreeSet<InfFormula>) -> Witness {
    Witness {
        here: atom_names(&w.here),
        there: atom_names(&w.there),
        satisfied_by: if ht_satisfies_all(w, grounded) {
            Side::Grounded
        } else {
            Side::Infinitary
        },
    }
}

/// One answer set per line, atoms separated by spaces; `UNSATISFIABLE` when
/// there are none.
pub fn render_answer_sets(models: &[AnswerSet]) -> String {
    if models.is_empty() {
        return "UNSATISFIABLE\n".into();
    }
    let mut out = String::new();
    for m in models {
        let atoms: Vec<String> = m.iter().map(ToString::to_string).collect();
        out.push_str(&atoms.join(" "));
        out.push('\n');
    }
    out
}

pub fn answer_sets_to_json(models: &[AnswerSet], limits: &Limits) -> serde_json::Value {
    serde_json::json!({
        "schema": "clsem/answer-sets/v1",
        "int_bound": limits.int_bound,
        "answer_sets": models.iter().map(|m| m.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// `{a, b}` rendering of an answer set.
pub fn format_answer_set(m: &AnswerSet) -> String {
    format_atom_set(m)
}
