use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::formula::{HtInterpretation, InfFormula};
use crate::syntax::PrecomputedAtom;

pub const DEFAULT_EQUILIBRIUM_LIMIT: usize = 20;
pub const DEFAULT_EQUIVALENCE_LIMIT: usize = 12;
/// Bit-mask width bounds the backtracking search.
pub const MAX_SEARCH_ATOMS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum EnumerationError {
    #[error("{what} needs {atoms} atoms, limit is {limit}")]
    TooManyAtoms { what: String, atoms: usize, limit: usize },
}

fn check_limit(what: &str, atoms: usize, limit: usize) -> Result<(), EnumerationError> {
    let limit = limit.min(MAX_SEARCH_ATOMS);
    if atoms > limit {
        return Err(EnumerationError::TooManyAtoms {
            what: what.to_string(),
            atoms,
            limit,
        });
    }
    Ok(())
}

/// Classical satisfaction.
pub fn prop_satisfies(s: &BTreeSet<PrecomputedAtom>, f: &InfFormula) -> bool {
    match f {
        InfFormula::Atom(a) => s.contains(a),
        InfFormula::Conj(fs) => fs.iter().all(|g| prop_satisfies(s, g)),
        InfFormula::Disj(fs) => fs.iter().any(|g| prop_satisfies(s, g)),
        InfFormula::Implies(l, r) => !prop_satisfies(s, l) || prop_satisfies(s, r),
    }
}

/// Satisfaction in the logic of here-and-there.
pub fn ht_satisfies(i: &HtInterpretation, f: &InfFormula) -> bool {
    match f {
        InfFormula::Atom(a) => i.here.contains(a),
        InfFormula::Conj(fs) => fs.iter().all(|g| ht_satisfies(i, g)),
        InfFormula::Disj(fs) => fs.iter().any(|g| ht_satisfies(i, g)),
        InfFormula::Implies(l, r) => prop_satisfies(&i.there, f) && (!ht_satisfies(i, l) || ht_satisfies(i, r)),
    }
}

pub fn prop_satisfies_all<'a>(s: &BTreeSet<PrecomputedAtom>, fs: impl IntoIterator<Item = &'a InfFormula>) -> bool {
    fs.into_iter().all(|f| prop_satisfies(s, f))
}

pub fn ht_satisfies_all<'a>(i: &HtInterpretation, fs: impl IntoIterator<Item = &'a InfFormula>) -> bool {
    fs.into_iter().all(|f| ht_satisfies(i, f))
}

#[derive(Debug, Clone)]
enum Node {
    Atom(u32),
    Const(bool),
    And(Vec<u32>),
    Or(Vec<u32>),
    Implies(u32, u32),
}

/// Formulas flattened into a node array, children before parents, with
/// atoms numbered so interpretations are bit masks. Atoms outside the index
/// are constantly false.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    nodes: Vec<Node>,
    roots: Vec<u32>,
    pub(crate) atoms: Vec<PrecomputedAtom>,
}

const F: u8 = 0;
const U: u8 = 1;
const T: u8 = 2;

impl Compiled {
    pub(crate) fn new<'a>(fs: impl IntoIterator<Item = &'a InfFormula>, atoms: Vec<PrecomputedAtom>) -> Self {
        let index: BTreeMap<&PrecomputedAtom, u32> = atoms.iter().enumerate().map(|(i, a)| (a, i as u32)).collect();
        let mut nodes = Vec::new();
        let roots = fs.into_iter().map(|f| Self::add(f, &index, &mut nodes)).collect();
        Compiled {
            nodes,
            roots,
            atoms: atoms.clone(),
        }
    }

    fn add(f: &InfFormula, index: &BTreeMap<&PrecomputedAtom, u32>, nodes: &mut Vec<Node>) -> u32 {
        let node = match f {
            InfFormula::Atom(a) => match index.get(a) {
                Some(&i) => Node::Atom(i),
                None => Node::Const(false),
            },
            InfFormula::Conj(fs) => Node::And(fs.iter().map(|g| Self::add(g, index, nodes)).collect()),
            InfFormula::Disj(fs) => Node::Or(fs.iter().map(|g| Self::add(g, index, nodes)).collect()),
            InfFormula::Implies(l, r) => {
                let l = Self::add(l, index, nodes);
                let r = Self::add(r, index, nodes);
                Node::Implies(l, r)
            }
        };
        nodes.push(node);
        (nodes.len() - 1) as u32
    }

    pub(crate) fn mask_to_set(&self, mask: u64) -> BTreeSet<PrecomputedAtom> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect()
    }

    /// Classical value of every node under `s`.
    pub(crate) fn classical(&self, s: u64, out: &mut Vec<bool>) {
        out.clear();
        for node in &self.nodes {
            let v = match node {
                Node::Atom(i) => s >> i & 1 == 1,
                Node::Const(b) => *b,
                Node::And(cs) => cs.iter().all(|&c| out[c as usize]),
                Node::Or(cs) => cs.iter().any(|&c| out[c as usize]),
                Node::Implies(l, r) => !out[*l as usize] || out[*r as usize],
            };
            out.push(v);
        }
    }

    /// HT value of every node under `⟨h, there⟩`, given the classical values
    /// under the there-world.
    pub(crate) fn here(&self, h: u64, there: &[bool], out: &mut Vec<bool>) {
        out.clear();
        for (k, node) in self.nodes.iter().enumerate() {
            let v = match node {
                Node::Atom(i) => h >> i & 1 == 1,
                Node::Const(b) => *b,
                Node::And(cs) => cs.iter().all(|&c| out[c as usize]),
                Node::Or(cs) => cs.iter().any(|&c| out[c as usize]),
                Node::Implies(l, r) => there[k] && (!out[*l as usize] || out[*r as usize]),
            };
            out.push(v);
        }
    }

    /// Three-valued (Kleene) evaluation for partial assignments: atoms in
    /// `t` are true, in `u` unknown, the rest false. With `there` given,
    /// implications use the here-and-there clause.
    fn kleene(&self, t: u64, u: u64, there: Option<&[bool]>, out: &mut Vec<u8>) {
        out.clear();
        for (k, node) in self.nodes.iter().enumerate() {
            let v = match node {
                Node::Atom(i) => {
                    if t >> i & 1 == 1 {
                        T
                    } else if u >> i & 1 == 1 {
                        U
                    } else {
                        F
                    }
                }
                Node::Const(b) => {
                    if *b {
                        T
                    } else {
                        F
                    }
                }
                Node::And(cs) => cs.iter().map(|&c| out[c as usize]).min().unwrap_or(T),
                Node::Or(cs) => cs.iter().map(|&c| out[c as usize]).max().unwrap_or(F),
                Node::Implies(l, r) => {
                    if there.is_some_and(|th| !th[k]) {
                        F
                    } else {
                        (T - out[*l as usize]).max(out[*r as usize])
                    }
                }
            };
            out.push(v);
        }
    }

    pub(crate) fn roots_hold(&self, values: &[bool]) -> bool {
        self.roots.iter().all(|&r| values[r as usize])
    }

    fn roots3(&self, values: &[u8]) -> u8 {
        self.roots.iter().map(|&r| values[r as usize]).min().unwrap_or(T)
    }

    /// Some `h ⊊ s_prime` with `⟨h, s_prime⟩` a model, by backtracking over
    /// the atoms of `s_prime` with three-valued pruning.
    fn smaller_model(&self, s_prime: u64, there: &[bool]) -> Option<u64> {
        let mut scratch = Vec::with_capacity(self.nodes.len());
        self.search(0, s_prime, Some(there), &mut scratch, &mut |t| (t != s_prime).then_some(t))
    }

    /// Depth-first search over assignments to the unknown atoms `u`, false
    /// first. Calls `leaf` on each total assignment whose roots all hold;
    /// stops at the first `Some`.
    fn search<R>(
        &self,
        t: u64,
        u: u64,
        there: Option<&[bool]>,
        scratch: &mut Vec<u8>,
        leaf: &mut impl FnMut(u64) -> Option<R>,
    ) -> Option<R> {
        self.kleene(t, u, there, scratch);
        match self.roots3(scratch) {
            F => return None,
            T if u == 0 => return leaf(t),
            _ => {}
        }
        if u == 0 {
            return None;
        }
        let bit = u.trailing_zeros();
        let rest = u & !(1 << bit);
        if let Some(r) = self.search(t, rest, there, scratch, leaf) {
            return Some(r);
        }
        self.search(t | 1 << bit, rest, there, scratch, leaf)
    }

    /// All classical models over the indexed atoms.
    fn classical_models(&self) -> Vec<u64> {
        let n = self.atoms.len();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut out = Vec::new();
        let mut scratch = Vec::with_capacity(self.nodes.len());
        let _: Option<()> = self.search(0, all, None, &mut scratch, &mut |t| {
            out.push(t);
            None
        });
        out
    }
}

fn occurring<'a>(fs: impl IntoIterator<Item = &'a InfFormula>) -> BTreeSet<PrecomputedAtom> {
    let mut out = BTreeSet::new();
    for f in fs {
        f.collect_atoms(&mut out);
    }
    out
}

/// Whether `⟨s', s'⟩` is an equilibrium model of `fs`, by enumerating every
/// proper subset of `s'`.
pub fn is_equilibrium(
    s_prime: &BTreeSet<PrecomputedAtom>,
    fs: &BTreeSet<InfFormula>,
    limit: usize,
) -> Result<bool, EnumerationError> {
    check_limit("equilibrium check", s_prime.len(), limit)?;
    let c = Compiled::new(fs, s_prime.iter().cloned().collect());
    Ok(equilibrium_mask(&c, (1u64 << s_prime.len()) - 1))
}

fn equilibrium_mask(c: &Compiled, s_prime: u64) -> bool {
    let mut there = Vec::new();
    c.classical(s_prime, &mut there);
    if !c.roots_hold(&there) {
        return false;
    }
    let mut here = Vec::new();
    // proper submasks of s_prime, largest first
    let mut h = s_prime;
    while h != 0 {
        h = (h - 1) & s_prime;
        c.here(h, &there, &mut here);
        if c.roots_hold(&here) {
            return false;
        }
    }
    true
}

fn sort_models(mut models: Vec<BTreeSet<PrecomputedAtom>>) -> Vec<BTreeSet<PrecomputedAtom>> {
    models.sort();
    models
}

/// Truszczyński stable models of `fs` among the subsets of `base`, by brute
/// force: every candidate, every proper subset.
pub fn stable_models(
    fs: &BTreeSet<InfFormula>,
    base: &BTreeSet<PrecomputedAtom>,
    limit: usize,
) -> Result<Vec<BTreeSet<PrecomputedAtom>>, EnumerationError> {
    check_limit("stable model enumeration", base.len(), limit)?;
    let c = Compiled::new(fs, base.iter().cloned().collect());
    let candidates: Vec<u64> = (0..1u64 << base.len()).collect();
    let check = |&m: &u64| equilibrium_mask(&c, m).then(|| c.mask_to_set(m));
    #[cfg(feature = "parallel")]
    let models: Vec<_> = {
        use rayon::prelude::*;
        candidates.par_iter().filter_map(check).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let models: Vec<_> = candidates.iter().filter_map(check).collect();
    Ok(sort_models(models))
}

/// Shrinks the candidate atoms for stable models. An atom with no strictly
/// positive occurrence belongs to no stable model: removing it from a model
/// of the there-world keeps an HT-model. Such atoms can be replaced by `⊥`
/// without changing the stable models, which may expose more of them; this
/// runs to a fixpoint. Atoms outside `base` are false from the start.
pub fn reduce_for_stable_models(
    fs: &BTreeSet<InfFormula>,
    base: &BTreeSet<PrecomputedAtom>,
) -> (BTreeSet<InfFormula>, BTreeSet<PrecomputedAtom>) {
    let mut keep: BTreeSet<PrecomputedAtom> = base.clone();
    let mut current: BTreeSet<InfFormula> = fs.iter().map(|f| f.falsify_except(&keep)).collect();
    loop {
        let mut positive = BTreeSet::new();
        current.iter().for_each(|f| f.strictly_positive_atoms(&mut positive));
        let next: BTreeSet<PrecomputedAtom> = keep.intersection(&positive).cloned().collect();
        if next.len() == keep.len() {
            current.remove(&InfFormula::top());
            return (current, keep);
        }
        keep = next;
        current = current.iter().map(|f| f.falsify_except(&keep)).collect();
    }
}

/// Same answers as [`stable_models`], found faster: the candidate atoms are
/// first cut down by [`reduce_for_stable_models`], classical models are
/// enumerated by backtracking, and minimality is refuted by backtracking
/// too. `limit` bounds the atoms left after the reduction.
pub fn stable_models_search(
    fs: &BTreeSet<InfFormula>,
    base: &BTreeSet<PrecomputedAtom>,
    limit: usize,
) -> Result<Vec<BTreeSet<PrecomputedAtom>>, EnumerationError> {
    let (reduced, keep) = reduce_for_stable_models(fs, base);
    let atoms: Vec<PrecomputedAtom> = occurring(&reduced).intersection(&keep).cloned().collect();
    check_limit("stable model search", atoms.len(), limit)?;
    let c = Compiled::new(&reduced, atoms);
    let candidates = c.classical_models();
    let check = |&m: &u64| {
        let mut there = Vec::new();
        c.classical(m, &mut there);
        c.smaller_model(m, &there).is_none().then(|| c.mask_to_set(m))
    };
    #[cfg(feature = "parallel")]
    let models: Vec<_> = {
        use rayon::prelude::*;
        candidates.par_iter().filter_map(check).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let models: Vec<_> = candidates.iter().filter_map(check).collect();
    Ok(sort_models(models))
}

/// An HT-interpretation over `base` satisfying exactly one of `a` and `b`,
/// first in canonical sweep order, or `None` when they are equivalent.
///
/// Only atoms of `base` occurring in `a` or `b` are swept; the others cannot
/// affect satisfaction. Atoms outside `base` are false in both worlds.
pub fn ht_counterexample(
    a: &BTreeSet<InfFormula>,
    b: &BTreeSet<InfFormula>,
    base: &BTreeSet<PrecomputedAtom>,
    limit: usize,
) -> Result<Option<HtInterpretation>, EnumerationError> {
    let atoms: Vec<PrecomputedAtom> = occurring(a.iter().chain(b)).intersection(base).cloned().collect();
    check_limit("HT sweep", atoms.len(), limit)?;
    let ca = Compiled::new(a, atoms.clone());
    let cb = Compiled::new(b, atoms.clone());
    let n = atoms.len();
    let per_there = |&s_prime: &u64| -> Option<(u64, u64)> {
        let (mut ta, mut tb, mut ha, mut hb) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        ca.classical(s_prime, &mut ta);
        cb.classical(s_prime, &mut tb);
        // submasks in increasing order, ending with s_prime itself
        let mut h = 0u64;
        loop {
            ca.here(h, &ta, &mut ha);
            cb.here(h, &tb, &mut hb);
            if ca.roots_hold(&ha) != cb.roots_hold(&hb) {
                return Some((h, s_prime));
            }
            if h == s_prime {
                return None;
            }
            h = (h.wrapping_sub(s_prime)) & s_prime;
        }
    };
    let theres: Vec<u64> = (0..1u64 << n).collect();
    #[cfg(feature = "parallel")]
    let found = {
        use rayon::prelude::*;
        theres.par_iter().find_map_first(per_there)
    };
    #[cfg(not(feature = "parallel"))]
    let found = theres.iter().find_map(per_there);
    Ok(found.map(|(h, s)| HtInterpretation::new(ca.mask_to_set(h), ca.mask_to_set(s))))
}

pub fn ht_equivalent(
    a: &BTreeSet<InfFormula>,
    b: &BTreeSet<InfFormula>,
    base: &BTreeSet<PrecomputedAtom>,
    limit: usize,
) -> Result<bool, EnumerationError> {
    Ok(ht_counterexample(a, b, base, limit)?.is_none())
}
