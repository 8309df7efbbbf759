//! Infinitary propositional formulas (finitely materialized), classical and
//! here-and-there satisfaction, equilibrium and stable models, and
//! strong-equivalence checking by exhaustive sweep.

mod eval;
mod formula;

pub use eval::{
    ht_counterexample, ht_equivalent, ht_satisfies, ht_satisfies_all, is_equilibrium, prop_satisfies,
    prop_satisfies_all, reduce_for_stable_models, stable_models, stable_models_search, EnumerationError, DEFAULT_EQUILIBRIUM_LIMIT,
    DEFAULT_EQUIVALENCE_LIMIT, MAX_SEARCH_ATOMS,
};
pub use formula::{format_atom_set, HtInterpretation, InfFormula};

use std::collections::BTreeSet;

/// JSON export of a set of infinitary formulas.
pub fn formulas_to_json(fs: &BTreeSet<InfFormula>) -> serde_json::Value {
    serde_json::json!({
        "schema": "clsem/infinitary/v1",
        "formulas": fs,
    })
}

#[cfg(test)]
mod tests {
    use super::eval::Compiled;
    use super::*;
    use crate::syntax::{PrecomputedAtom, PrecomputedTerm};
    use proptest::prelude::*;

    fn p() -> InfFormula {
        InfFormula::prop("p")
    }

    fn q() -> InfFormula {
        InfFormula::prop("q")
    }

    fn set(names: &[&str]) -> BTreeSet<PrecomputedAtom> {
        names.iter().map(|n| PrecomputedAtom::prop(*n)).collect()
    }

    fn fs(items: impl IntoIterator<Item = InfFormula>) -> BTreeSet<InfFormula> {
        items.into_iter().collect()
    }

    #[test]
    fn classical_examples() {
        assert!(prop_satisfies(&set(&["p"]), &p()));
        assert!(prop_satisfies(&set(&[]), &InfFormula::top()));
        assert!(!prop_satisfies(&set(&[]), &InfFormula::bot()));
        assert!(prop_satisfies(&set(&["q"]), &InfFormula::not(p())));
    }

    #[test]
    fn ht_examples() {
        let i = HtInterpretation::new(set(&[]), set(&["p"]));
        assert!(ht_satisfies(&i, &InfFormula::not(InfFormula::not(p()))));
        assert!(!ht_satisfies(&i, &p()));
        assert!(ht_satisfies(&HtInterpretation::total(set(&[])), &InfFormula::top()));
    }

    #[test]
    fn equilibrium_examples() {
        let rule = InfFormula::implies(InfFormula::not(q()), p());
        assert!(is_equilibrium(&set(&["p"]), &fs([rule]), 20).unwrap());
        assert!(is_equilibrium(&set(&[]), &fs([InfFormula::top()]), 20).unwrap());
        // ⟨∅,{p}⟩ satisfies neither p nor ¬p, so {p} is an equilibrium model
        // of p ∨ ¬p, and so is ∅
        let choice = InfFormula::disj([p(), InfFormula::not(p())]);
        assert!(is_equilibrium(&set(&["p"]), &fs([choice.clone()]), 20).unwrap());
        assert!(is_equilibrium(&set(&[]), &fs([choice]), 20).unwrap());
        assert!(!is_equilibrium(&set(&["p"]), &fs([InfFormula::not(InfFormula::not(p()))]), 20).unwrap());
        let big: BTreeSet<PrecomputedAtom> = (0..21).map(|i| PrecomputedAtom::new("a", vec![i.into()])).collect();
        assert!(matches!(
            is_equilibrium(&big, &fs([]), 20),
            Err(EnumerationError::TooManyAtoms { atoms: 21, .. })
        ));
    }

    #[test]
    fn stable_model_examples() {
        let base = set(&["p", "q"]);
        let rule = fs([InfFormula::implies(InfFormula::not(q()), p())]);
        assert_eq!(stable_models(&rule, &base, 20).unwrap(), vec![set(&["p"])]);
        let choice = fs([InfFormula::disj([p(), InfFormula::not(p())])]);
        assert_eq!(stable_models(&choice, &set(&["p"]), 20).unwrap(), vec![set(&[]), set(&["p"])]);
        let constraint = fs([InfFormula::not(InfFormula::not(p()))]);
        assert!(stable_models(&constraint, &set(&["p"]), 20).unwrap().is_empty());
        for f in [rule, choice, constraint] {
            assert_eq!(stable_models(&f, &base, 20).unwrap(), stable_models_search(&f, &base, 20).unwrap());
        }
    }

    #[test]
    fn equivalence_examples() {
        let base = set(&["p", "q"]);
        let and_top = fs([InfFormula::conj([p(), InfFormula::top()])]);
        assert!(ht_equivalent(&and_top, &fs([p()]), &base, 12).unwrap());
        let bot_imp = fs([InfFormula::implies(InfFormula::bot(), p())]);
        assert!(ht_equivalent(&bot_imp, &fs([InfFormula::top()]), &base, 12).unwrap());
        let witness = ht_counterexample(&fs([p()]), &fs([InfFormula::not(InfFormula::not(p()))]), &base, 12).unwrap();
        assert_eq!(witness, Some(HtInterpretation::new(set(&[]), set(&["p"]))));
        // an empty set is ⊤
        assert!(ht_equivalent(&fs([]), &fs([InfFormula::top()]), &base, 12).unwrap());
    }

    #[test]
    fn rank_and_rendering() {
        assert_eq!(p().rank(), 0);
        assert_eq!(InfFormula::top().rank(), 0);
        assert_eq!(InfFormula::conj([p()]).rank(), 1);
        assert_eq!(InfFormula::not(p()).rank(), 1);
        assert_eq!(InfFormula::not(InfFormula::conj([p()])).rank(), 2);
        let f = InfFormula::implies(InfFormula::conj([q(), p()]), InfFormula::not(q()));
        assert_eq!(f.to_string(), "(∧{p, q} → ¬q)");
        assert_eq!(InfFormula::disj([p(), p()]).to_string(), "∨{p}");
        let json = formulas_to_json(&fs([InfFormula::not(p())]));
        assert_eq!(json["schema"], "clsem/infinitary/v1");
        let back: BTreeSet<InfFormula> = serde_json::from_value(json["formulas"].clone()).unwrap();
        assert_eq!(back, fs([InfFormula::not(p())]));
    }

    const NAMES: [&str; 5] = ["p", "q", "r", "s", "t"];

    fn arb_formula(atoms: usize) -> impl Strategy<Value = InfFormula> {
        let leaf = prop_oneof![
            8 => (0..atoms).prop_map(|i| InfFormula::prop(NAMES[i])),
            1 => Just(InfFormula::top()),
            1 => Just(InfFormula::bot()),
        ];
        // depth 3 keeps the rank at most 3
        leaf.prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 0..4).prop_map(InfFormula::conj),
                prop::collection::vec(inner.clone(), 0..4).prop_map(InfFormula::disj),
                (inner.clone(), inner).prop_map(|(l, r)| InfFormula::implies(l, r)),
            ]
        })
    }

    fn all_ht(base: &BTreeSet<PrecomputedAtom>) -> Vec<HtInterpretation> {
        let atoms: Vec<_> = base.iter().cloned().collect();
        let n = atoms.len();
        let pick = |m: u32| -> BTreeSet<PrecomputedAtom> {
            atoms.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, a)| a.clone()).collect()
        };
        let mut out = Vec::new();
        for there in 0u32..1 << n {
            for here in 0u32..1 << n {
                if here & !there == 0 {
                    out.push(HtInterpretation::new(pick(here), pick(there)));
                }
            }
        }
        out
    }

    fn base(n: usize) -> BTreeSet<PrecomputedAtom> {
        NAMES[..n].iter().map(|s| PrecomputedAtom::prop(*s)).collect()
    }

    fn brute_equivalent(a: &InfFormula, b: &InfFormula, n: usize) -> bool {
        all_ht(&base(n)).iter().all(|i| ht_satisfies(i, a) == ht_satisfies(i, b))
    }

    /// Instantiates placeholder arguments `U` and `V`.
    fn instantiate(f: &InfFormula, u: &PrecomputedTerm, v: &PrecomputedTerm) -> InfFormula {
        match f {
            InfFormula::Atom(a) => InfFormula::Atom(PrecomputedAtom::new(
                a.predicate.clone(),
                a.args
                    .iter()
                    .map(|t| match t {
                        PrecomputedTerm::Symbol(s) if s == "U" => u.clone(),
                        PrecomputedTerm::Symbol(s) if s == "V" => v.clone(),
                        _ => t.clone(),
                    })
                    .collect(),
            )),
            InfFormula::Conj(fs) => InfFormula::conj(fs.iter().map(|g| instantiate(g, u, v))),
            InfFormula::Disj(fs) => InfFormula::disj(fs.iter().map(|g| instantiate(g, u, v))),
            InfFormula::Implies(l, r) => InfFormula::implies(instantiate(l, u, v), instantiate(r, u, v)),
        }
    }

    fn arb_template() -> impl Strategy<Value = InfFormula> {
        let sym = |s: &str| PrecomputedTerm::symbol(s);
        let leaf = prop_oneof![
            Just(InfFormula::atom(PrecomputedAtom::new("a", vec![sym("U"), sym("V")]))),
            Just(InfFormula::atom(PrecomputedAtom::new("b", vec![sym("U")]))),
            Just(InfFormula::atom(PrecomputedAtom::new("b", vec![sym("V")]))),
        ];
        leaf.prop_recursive(2, 8, 2, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 1..3).prop_map(InfFormula::conj),
                prop::collection::vec(inner.clone(), 1..3).prop_map(InfFormula::disj),
                inner.prop_map(InfFormula::not),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn persistence_and_total_collapse(f in arb_formula(4)) {
            for i in all_ht(&base(4)) {
                if ht_satisfies(&i, &f) {
                    prop_assert!(prop_satisfies(&i.there, &f), "{} at {}", f, i);
                    prop_assert!(ht_satisfies(&HtInterpretation::total(i.there.clone()), &f));
                }
                if i.here == i.there {
                    prop_assert_eq!(ht_satisfies(&i, &f), prop_satisfies(&i.here, &f));
                }
            }
        }

        #[test]
        fn compiled_evaluation_agrees(f in arb_formula(4), g in arb_formula(4)) {
            let atoms: Vec<_> = base(4).into_iter().collect();
            let formulas = [f.clone(), g.clone()];
            let c = Compiled::new(&formulas, atoms);
            let (mut there, mut here) = (Vec::new(), Vec::new());
            for i in all_ht(&base(4)) {
                let mask = |s: &BTreeSet<PrecomputedAtom>| -> u64 {
                    (0..4).filter(|k| s.contains(&PrecomputedAtom::prop(NAMES[*k]))).map(|k| 1u64 << k).sum()
                };
                c.classical(mask(&i.there), &mut there);
                c.here(mask(&i.here), &there, &mut here);
                prop_assert_eq!(c.roots_hold(&there), prop_satisfies(&i.there, &f) && prop_satisfies(&i.there, &g));
                prop_assert_eq!(c.roots_hold(&here), ht_satisfies(&i, &f) && ht_satisfies(&i, &g));
            }
        }

        #[test]
        fn sweep_matches_brute_force(f in arb_formula(3), g in arb_formula(3)) {
            let witness = ht_counterexample(&fs([f.clone()]), &fs([g.clone()]), &base(5), 12).unwrap();
            prop_assert_eq!(witness.is_none(), brute_equivalent(&f, &g, 5));
            if let Some(i) = witness {
                prop_assert_ne!(ht_satisfies(&i, &f), ht_satisfies(&i, &g));
            }
        }

        #[test]
        fn search_matches_brute_force_stable_models(set in prop::collection::vec(arb_formula(4), 0..4)) {
            let set = fs(set);
            prop_assert_eq!(stable_models_search(&set, &base(5), 20).unwrap(), stable_models(&set, &base(5), 20).unwrap());
            for m in stable_models(&set, &base(5), 20).unwrap() {
                prop_assert!(is_equilibrium(&m, &set, 20).unwrap());
            }
        }

        #[test]
        fn simplification_preserves_ht_models(f in arb_formula(3)) {
            prop_assert!(brute_equivalent(&f, &f.simplify(), 3));
        }

        #[test]
        fn unit_laws(f in arb_formula(3), others in prop::collection::vec(arb_formula(3), 0..3)) {
            let top = InfFormula::top();
            let bot = InfFormula::bot();
            let with = |extra: &InfFormula, conj: bool| {
                let items = others.iter().cloned().chain([extra.clone()]);
                if conj { InfFormula::conj(items) } else { InfFormula::disj(items) }
            };
            let all_conj = InfFormula::conj(others.iter().cloned());
            let all_disj = InfFormula::disj(others.iter().cloned());
            prop_assert!(brute_equivalent(&InfFormula::conj([f.clone(), top.clone()]), &f, 3));
            prop_assert!(brute_equivalent(&with(&top, true), &all_conj, 3));
            prop_assert!(brute_equivalent(&InfFormula::conj([f.clone(), bot.clone()]), &bot, 3));
            prop_assert!(brute_equivalent(&with(&bot, true), &bot, 3));
            prop_assert!(brute_equivalent(&InfFormula::disj([f.clone(), top.clone()]), &top, 3));
            prop_assert!(brute_equivalent(&with(&top, false), &top, 3));
            prop_assert!(brute_equivalent(&InfFormula::disj([f.clone(), bot.clone()]), &f, 3));
            prop_assert!(brute_equivalent(&with(&bot, false), &all_disj, 3));
            prop_assert!(brute_equivalent(&InfFormula::implies(bot, f.clone()), &top, 3));
            // singleton sets stand for their member
            prop_assert!(brute_equivalent(&InfFormula::conj([f.clone()]), &f, 3));
            prop_assert!(brute_equivalent(&InfFormula::disj([f.clone()]), &f, 3));
        }

        #[test]
        fn tautology_and_contradiction_by_sweep(f in arb_formula(3)) {
            let ht = all_ht(&base(3));
            let valid = ht.iter().all(|i| ht_satisfies(i, &f));
            let unsat = ht.iter().all(|i| !ht_satisfies(i, &f));
            prop_assert_eq!(valid, ht_equivalent(&fs([f.clone()]), &fs([]), &base(3), 12).unwrap());
            prop_assert_eq!(unsat, ht_equivalent(&fs([f.clone()]), &fs([InfFormula::bot()]), &base(3), 12).unwrap());
        }

        #[test]
        fn nested_disjunction_flattens(t in arb_template(), s1 in prop::collection::btree_set(0i64..3, 0..3), s2 in prop::collection::btree_set(0i64..3, 0..3)) {
            let nested = InfFormula::disj(s2.iter().map(|v| {
                InfFormula::disj(s1.iter().map(|u| instantiate(&t, &(*u).into(), &(*v).into())))
            }));
            let flat = InfFormula::disj(s1.iter().flat_map(|u| s2.iter().map(|v| instantiate(&t, &(*u).into(), &(*v).into()))));
            let mut atoms = nested.atoms();
            atoms.extend(flat.atoms());
            prop_assume!(atoms.len() <= 10);
            prop_assert!(ht_equivalent(&fs([nested]), &fs([flat]), &atoms, 12).unwrap());
        }
    }
}
