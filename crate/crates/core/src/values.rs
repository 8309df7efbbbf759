//! Values of terms: the set `[t]` of precomputed values of a ground term and
//! the first-order formula `val_t(Z)` saying that `Z` is one of them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::{ArithOp, FoTerm, Formula, Sort, Variable};
use crate::syntax::{BinOp, PrecomputedTerm, Relation, Term};

/// Default cap on the number of integers a single evaluation may enumerate
/// for intervals.
pub const DEFAULT_INTERVAL_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("term is not ground: variable {0}")]
    NotGround(String),
    #[error("interval enumeration needs {needed} elements, cap is {cap}")]
    IntervalTooLarge { needed: u128, cap: usize },
    #[error("integer overflow while evaluating {0}")]
    Overflow(String),
}

/// `round(n1/n2)`: the rational quotient truncated toward zero. `None` on
/// division by zero or overflow (`i64::MIN / -1`).
pub fn checked_round_div(n1: i64, n2: i64) -> Option<i64> {
    n1.checked_div(n2)
}

/// `round(n1/n2)`. Panics when `n2` is zero.
pub fn round_div(n1: i64, n2: i64) -> i64 {
    assert!(n2 != 0, "round_div by zero");
    checked_round_div(n1, n2).expect("round_div overflow")
}

/// `n1 - n2 * round(n1/n2)`.
pub fn checked_round_mod(n1: i64, n2: i64) -> Option<i64> {
    let q = checked_round_div(n1, n2)?;
    n1.checked_sub(n2.checked_mul(q)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueOptions {
    pub interval_cap: usize,
    /// Return a truncated set instead of failing when an interval exceeds
    /// the cap.
    pub allow_truncation: bool,
}

impl Default for ValueOptions {
    fn default() -> Self {
        ValueOptions {
            interval_cap: DEFAULT_INTERVAL_CAP,
            allow_truncation: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueSet {
    pub values: BTreeSet<PrecomputedTerm>,
    /// Set iff some interval was cut short at the cap.
    pub truncated: bool,
    /// Largest absolute value of any integer met on the way, subterm values
    /// included. Zero when none.
    pub max_abs: u64,
}

impl ValueSet {
    pub fn contains(&self, t: &PrecomputedTerm) -> bool {
        self.values.contains(t)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    fn numerals(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.iter().filter_map(PrecomputedTerm::as_numeral)
    }
}

struct Evaluator {
    options: ValueOptions,
    truncated: bool,
    max_abs: u64,
}

impl Evaluator {
    fn note(&mut self, n: i64) {
        self.max_abs = self.max_abs.max(n.unsigned_abs());
    }

    fn pointwise(
        &mut self,
        t: &Term,
        a: &ValueSet,
        b: &ValueSet,
        f: impl Fn(i64, i64) -> Option<Option<i64>>,
    ) -> Result<BTreeSet<PrecomputedTerm>, ValueError> {
        let mut out = BTreeSet::new();
        for n1 in a.numerals() {
            for n2 in b.numerals() {
                match f(n1, n2) {
                    // operation undefined for this pair, e.g. division by zero
                    Some(None) => {}
                    Some(Some(n)) => {
                        self.note(n);
                        out.insert(PrecomputedTerm::Numeral(n));
                    }
                    None => return Err(ValueError::Overflow(t.to_string())),
                }
            }
        }
        Ok(out)
    }

    fn eval(&mut self, t: &Term) -> Result<ValueSet, ValueError> {
        let values = match t {
            Term::Numeral(n) => {
                self.note(*n);
                BTreeSet::from([PrecomputedTerm::Numeral(*n)])
            }
            Term::Symbol(s) => BTreeSet::from([PrecomputedTerm::Symbol(s.clone())]),
            Term::Inf => BTreeSet::from([PrecomputedTerm::Inf]),
            Term::Sup => BTreeSet::from([PrecomputedTerm::Sup]),
            Term::Variable(v) => return Err(ValueError::NotGround(v.clone())),
            Term::Abs(inner) => {
                let inner = self.eval(inner)?;
                let mut out = BTreeSet::new();
                for n in inner.numerals() {
                    let m = n.checked_abs().ok_or_else(|| ValueError::Overflow(t.to_string()))?;
                    self.note(m);
                    out.insert(PrecomputedTerm::Numeral(m));
                }
                out
            }
            Term::BinOp(op, l, r) => {
                let a = self.eval(l)?;
                let b = self.eval(r)?;
                match op {
                    BinOp::Add => self.pointwise(t, &a, &b, |x, y| x.checked_add(y).map(Some))?,
                    BinOp::Sub => self.pointwise(t, &a, &b, |x, y| x.checked_sub(y).map(Some))?,
                    BinOp::Mul => self.pointwise(t, &a, &b, |x, y| x.checked_mul(y).map(Some))?,
                    BinOp::Div => self.pointwise(t, &a, &b, |x, y| {
                        if y == 0 {
                            Some(None)
                        } else {
                            checked_round_div(x, y).map(Some)
                        }
                    })?,
                    BinOp::Mod => self.pointwise(t, &a, &b, |x, y| {
                        if y == 0 {
                            Some(None)
                        } else {
                            checked_round_mod(x, y).map(Some)
                        }
                    })?,
                    BinOp::Interval => self.interval(&a, &b)?,
                }
            }
        };
        Ok(ValueSet {
            values,
            truncated: self.truncated,
            max_abs: self.max_abs,
        })
    }

    fn interval(&mut self, a: &ValueSet, b: &ValueSet) -> Result<BTreeSet<PrecomputedTerm>, ValueError> {
        let lows: Vec<i64> = a.numerals().collect();
        let highs: Vec<i64> = b.numerals().collect();
        let (Some(&low), Some(&high)) = (lows.iter().min(), highs.iter().max()) else {
            return Ok(BTreeSet::new());
        };
        // every m with min[t1] <= m <= max[t2] is covered by some pair
        if low > high {
            return Ok(BTreeSet::new());
        }
        let needed = (high as i128 - low as i128 + 1) as u128;
        let cap = self.options.interval_cap;
        let take = if needed > cap as u128 {
            if !self.options.allow_truncation {
                return Err(ValueError::IntervalTooLarge { needed, cap });
            }
            self.truncated = true;
            cap as i64
        } else {
            needed as i64
        };
        let mut out = BTreeSet::new();
        for m in (low..=high).take(take as usize) {
            self.note(m);
            out.insert(PrecomputedTerm::Numeral(m));
        }
        Ok(out)
    }
}

/// `[t]` with explicit options.
pub fn eval_values_with(t: &Term, options: ValueOptions) -> Result<ValueSet, ValueError> {
    Evaluator {
        options,
        truncated: false,
        max_abs: 0,
    }
    .eval(t)
}

/// `[t]` for a ground term, with the default interval cap.
pub fn eval_values(t: &Term) -> Result<ValueSet, ValueError> {
    eval_values_with(t, ValueOptions::default())
}

/// Tuples of values of a list of ground terms: the Cartesian product of
/// their value sets. The empty list has the single empty tuple.
pub fn eval_tuple_values_with(ts: &[Term], options: ValueOptions) -> Result<Vec<Vec<PrecomputedTerm>>, ValueError> {
    let mut tuples: Vec<Vec<PrecomputedTerm>> = vec![Vec::new()];
    for t in ts {
        let values = eval_values_with(t, options)?;
        let mut next = Vec::with_capacity(tuples.len() * values.len());
        for prefix in &tuples {
            for v in &values.values {
                let mut tuple = prefix.clone();
                tuple.push(v.clone());
                next.push(tuple);
            }
        }
        tuples = next;
    }
    Ok(tuples)
}

pub fn eval_tuple_values(ts: &[Term]) -> Result<Vec<Vec<PrecomputedTerm>>, ValueError> {
    eval_tuple_values_with(ts, ValueOptions::default())
}

/// Deterministic supply of fresh variable names that avoid a reserved set.
#[derive(Debug, Clone, Default)]
pub struct FreshVariables {
    reserved: BTreeSet<String>,
    counters: BTreeMap<String, usize>,
}

impl FreshVariables {
    pub fn new<I, S>(reserved: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FreshVariables {
            reserved: reserved.into_iter().map(Into::into).collect(),
            counters: BTreeMap::new(),
        }
    }

    fn take(&mut self, prefix: &str, sort: Sort, bare_first: bool) -> Variable {
        loop {
            let n = self.counters.entry(prefix.to_string()).or_insert(0);
            let name = if *n == 0 && bare_first {
                prefix.to_string()
            } else if bare_first {
                format!("{prefix}{n}")
            } else {
                format!("{prefix}{}", *n + 1)
            };
            *n += 1;
            if self.reserved.insert(name.clone()) {
                return Variable { name, sort };
            }
        }
    }

    /// Program variables `Z, Z1, Z2, ...`.
    pub fn program(&mut self) -> Variable {
        self.take("Z", Sort::Program, true)
    }

    /// Program variables `V1, V2, ...` for rule heads.
    pub fn head(&mut self) -> Variable {
        self.take("V", Sort::Program, false)
    }

    /// Integer variables `I1, J1, K1, I2, ...` by letter.
    pub fn integer(&mut self, letter: char) -> Variable {
        self.take(&letter.to_string(), Sort::Integer, false)
    }
}

/// Converts a term without operations into a first-order term. Variables
/// of the program language are program-sorted.
pub(crate) fn simple_term(t: &Term) -> Option<FoTerm> {
    Some(match t {
        Term::Numeral(n) => FoTerm::num(*n),
        Term::Symbol(s) => FoTerm::Const(PrecomputedTerm::Symbol(s.clone())),
        Term::Inf => FoTerm::Const(PrecomputedTerm::Inf),
        Term::Sup => FoTerm::Const(PrecomputedTerm::Sup),
        Term::Variable(v) => FoTerm::var(&Variable::program(v.clone())),
        Term::BinOp(..) | Term::Abs(_) => return None,
    })
}

/// `val_t(Z)`. `z` must not occur in `t`; fresh integer variables come from
/// `fresh`, which should reserve every variable name of the enclosing rule.
pub fn val_formula(t: &Term, z: &Variable, fresh: &mut FreshVariables) -> Formula {
    let zt = FoTerm::var(z);
    if let Some(simple) = simple_term(t) {
        return Formula::eq(zt, simple);
    }
    match t {
        Term::Abs(t1) => {
            let i = fresh.integer('I');
            let inner = val_formula(t1, &i, fresh);
            Formula::Exists(
                vec![i.clone()],
                Box::new(Formula::And(vec![inner, Formula::eq(zt, FoTerm::abs(FoTerm::var(&i)))])),
            )
        }
        Term::BinOp(op @ (BinOp::Add | BinOp::Sub | BinOp::Mul), t1, t2) => {
            let (i, j) = (fresh.integer('I'), fresh.integer('J'));
            let arith = match op {
                BinOp::Add => ArithOp::Add,
                BinOp::Sub => ArithOp::Sub,
                _ => ArithOp::Mul,
            };
            let v1 = val_formula(t1, &i, fresh);
            let v2 = val_formula(t2, &j, fresh);
            Formula::Exists(
                vec![i.clone(), j.clone()],
                Box::new(Formula::And(vec![
                    Formula::eq(zt, FoTerm::binary(arith, FoTerm::var(&i), FoTerm::var(&j))),
                    v1,
                    v2,
                ])),
            )
        }
        Term::BinOp(op @ (BinOp::Div | BinOp::Mod), t1, t2) => {
            let (i, j, k) = (fresh.integer('I'), fresh.integer('J'), fresh.integer('K'));
            let v1 = val_formula(t1, &i, fresh);
            let v2 = val_formula(t2, &j, fresh);
            let last = if *op == BinOp::Div {
                f2(&i, &j, &k, z)
            } else {
                f3(&i, &j, &k, z)
            };
            Formula::Exists(
                vec![i.clone(), j.clone(), k.clone()],
                Box::new(Formula::And(vec![v1, v2, f1(&i, &j, &k), last])),
            )
        }
        Term::BinOp(BinOp::Interval, t1, t2) => {
            let (i, j, k) = (fresh.integer('I'), fresh.integer('J'), fresh.integer('K'));
            let v1 = val_formula(t1, &i, fresh);
            let v2 = val_formula(t2, &j, fresh);
            let (it, jt, kt) = (FoTerm::var(&i), FoTerm::var(&j), FoTerm::var(&k));
            Formula::Exists(
                vec![i.clone(), j.clone(), k.clone()],
                Box::new(Formula::And(vec![
                    Formula::eq(zt, kt.clone()),
                    Formula::compare(it, Relation::Le, kt.clone()),
                    Formula::compare(kt, Relation::Le, jt),
                    v1,
                    v2,
                ])),
            )
        }
        _ => unreachable!("simple terms handled above"),
    }
}

/// `K × |J| ≤ |I| < (K + 1) × |J|`
fn f1(i: &Variable, j: &Variable, k: &Variable) -> Formula {
    let (it, jt, kt) = (FoTerm::var(i), FoTerm::var(j), FoTerm::var(k));
    let abs_i = FoTerm::abs(it);
    let abs_j = FoTerm::abs(jt);
    Formula::And(vec![
        Formula::compare(FoTerm::binary(ArithOp::Mul, kt.clone(), abs_j.clone()), Relation::Le, abs_i.clone()),
        Formula::compare(
            abs_i,
            Relation::Lt,
            FoTerm::binary(ArithOp::Mul, FoTerm::binary(ArithOp::Add, kt, FoTerm::num(1)), abs_j),
        ),
    ])
}

fn sign_split(i: &Variable, j: &Variable, non_negative: Formula, negative: Formula) -> Formula {
    let product = FoTerm::binary(ArithOp::Mul, FoTerm::var(i), FoTerm::var(j));
    Formula::Or(vec![
        Formula::And(vec![Formula::compare(product.clone(), Relation::Ge, FoTerm::num(0)), non_negative]),
        Formula::And(vec![Formula::compare(product, Relation::Lt, FoTerm::num(0)), negative]),
    ])
}

/// `(I × J ≥ 0 ∧ Z = K) ∨ (I × J < 0 ∧ Z = -K)`
fn f2(i: &Variable, j: &Variable, k: &Variable, z: &Variable) -> Formula {
    let (kt, zt) = (FoTerm::var(k), FoTerm::var(z));
    sign_split(i, j, Formula::eq(zt.clone(), kt.clone()), Formula::eq(zt, FoTerm::neg(kt)))
}

/// `(I × J ≥ 0 ∧ Z = I - K × J) ∨ (I × J < 0 ∧ Z = I + K × J)`
fn f3(i: &Variable, j: &Variable, k: &Variable, z: &Variable) -> Formula {
    let (it, jt, kt, zt) = (FoTerm::var(i), FoTerm::var(j), FoTerm::var(k), FoTerm::var(z));
    let kj = FoTerm::binary(ArithOp::Mul, kt, jt);
    sign_split(
        i,
        j,
        Formula::eq(zt.clone(), FoTerm::binary(ArithOp::Sub, it.clone(), kj.clone())),
        Formula::eq(zt, FoTerm::binary(ArithOp::Add, it, kj)),
    )
}

/// `val_t(V)` for tuples: `val_t1(V1) ∧ ... ∧ val_tk(Vk)`.
pub fn val_tuple(ts: &[Term], vs: &[Variable], fresh: &mut FreshVariables) -> Vec<Formula> {
    assert_eq!(ts.len(), vs.len());
    ts.iter().zip(vs).map(|(t, v)| val_formula(t, v, fresh)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{fo_satisfies, StandardInterpretation};
    use crate::syntax::parse_term;
    use proptest::prelude::*;

    fn values(text: &str) -> BTreeSet<PrecomputedTerm> {
        eval_values(&parse_term(text).unwrap()).unwrap().values
    }

    fn nums(ns: impl IntoIterator<Item = i64>) -> BTreeSet<PrecomputedTerm> {
        ns.into_iter().map(PrecomputedTerm::Numeral).collect()
    }

    /// Floor of `n/d` as a rational, by search: the unique k with
    /// `k <= n/d < k + 1`, compared after clearing the denominator.
    fn rational_floor(n: i64, d: i64) -> i64 {
        let (n, d) = if d < 0 { (-n as i128, -d as i128) } else { (n as i128, d as i128) };
        (-(n.abs()) - 1..=n.abs() + 1)
            .find(|&k| k * d <= n && n < (k + 1) * d)
            .unwrap() as i64
    }

    fn rational_ceil(n: i64, d: i64) -> i64 {
        -rational_floor(-n, d)
    }

    /// round(n/d) from its definition: floor for non-negative quotients,
    /// ceiling for negative ones.
    fn round_oracle(n: i64, d: i64) -> i64 {
        let non_negative = (n as i128) * (d as i128) >= 0;
        if non_negative {
            rational_floor(n, d)
        } else {
            rational_ceil(n, d)
        }
    }

    #[test]
    fn round_examples() {
        assert_eq!(round_div(7, 2), 3);
        assert_eq!(round_div(-7, 2), -3);
        assert_eq!(round_div(0, 5), 0);
        assert_eq!(round_oracle(7, 2), 3);
        assert_eq!(round_oracle(-7, 2), -3);
        assert_eq!(checked_round_div(1, 0), None);
        assert_eq!(checked_round_div(i64::MIN, -1), None);
    }

    #[test]
    fn round_matches_rational_oracle() {
        for i in -20..=20 {
            for j in (-20..=20).filter(|j| *j != 0) {
                assert_eq!(round_div(i, j), round_oracle(i, j), "{i}/{j}");
                assert_eq!(checked_round_mod(i, j), Some(i - j * round_oracle(i, j)), "{i}\\{j}");
            }
        }
    }

    #[test]
    fn value_examples() {
        assert!(values("a + 3").is_empty());
        assert_eq!(values("3 + (1..5)"), nums(4..=8));
        // '..' binds loosest
        assert_eq!(values("3 + 1..5"), nums([4, 5]));
        assert!(values("1/0").is_empty());
        assert_eq!(values("-7 \\ 2"), nums([-1]));
        assert_eq!(values("|-4|"), nums([4]));
        assert_eq!(values("|a|"), BTreeSet::new());
        assert_eq!(values("#sup"), BTreeSet::from([PrecomputedTerm::Sup]));
        assert_eq!(values("3..1"), BTreeSet::new());
        assert_eq!(values("(1..2)*(1..2)"), nums([1, 2, 4]));
        assert_eq!(values("(1..3)/(0..1)"), nums(1..=3));
        assert_eq!(values("(1..2)..(3..4)"), nums(1..=4));
    }

    #[test]
    fn tuple_examples() {
        let ts = [parse_term("1..2").unwrap(), parse_term("a").unwrap()];
        let a = PrecomputedTerm::symbol("a");
        assert_eq!(
            eval_tuple_values(&ts).unwrap(),
            vec![vec![1.into(), a.clone()], vec![2.into(), a]]
        );
        assert_eq!(eval_tuple_values(&[]).unwrap(), vec![Vec::<PrecomputedTerm>::new()]);
        assert!(eval_tuple_values(&[parse_term("1/0").unwrap()]).unwrap().is_empty());
    }

    #[test]
    fn interval_cap() {
        let t = parse_term("1..1000000000").unwrap();
        assert!(matches!(eval_values(&t), Err(ValueError::IntervalTooLarge { .. })));
        let options = ValueOptions {
            interval_cap: 10,
            allow_truncation: true,
        };
        let v = eval_values_with(&t, options).unwrap();
        assert!(v.truncated);
        assert_eq!(v.len(), 10);
        assert!(!eval_values(&parse_term("1..10").unwrap()).unwrap().truncated);
    }

    #[test]
    fn overflow_is_an_error() {
        let t = parse_term("9223372036854775807 + 1").unwrap();
        assert!(matches!(eval_values(&t), Err(ValueError::Overflow(_))));
        assert!(matches!(eval_values(&parse_term("X").unwrap()), Err(ValueError::NotGround(_))));
    }

    #[test]
    fn max_abs_tracks_intermediates() {
        let v = eval_values(&parse_term("3*3 - 3*3").unwrap()).unwrap();
        assert_eq!(v.values, nums([0]));
        assert_eq!(v.max_abs, 9);
    }

    #[test]
    fn val_formula_shapes() {
        let z = Variable::program("Z");
        let mut fresh = FreshVariables::new(["Z", "X", "Y"]);
        let f = val_formula(&Term::Numeral(5), &z, &mut fresh);
        assert_eq!(f.to_string(), "Z = 5");

        let i1 = Variable::integer("I1");
        let x = FoTerm::var(&Variable::program("X"));
        let expected = Formula::Exists(
            vec![i1.clone()],
            Box::new(Formula::And(vec![
                Formula::eq(FoTerm::var(&i1), x.clone()),
                Formula::eq(FoTerm::var(&z), FoTerm::abs(FoTerm::var(&i1))),
            ])),
        );
        let f = val_formula(&parse_term("|X|").unwrap(), &z, &mut fresh);
        assert_eq!(f, expected);

        let mut fresh = FreshVariables::new(["Z", "X", "Y"]);
        let f = val_formula(&parse_term("X/Y").unwrap(), &z, &mut fresh);
        let Formula::Exists(vars, body) = &f else { panic!() };
        let names: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["I1", "J1", "K1"]);
        let Formula::And(parts) = body.as_ref() else { panic!() };
        assert_eq!(parts.len(), 4);
        assert_eq!(parts[0].to_string(), "I1 = X");
        assert_eq!(parts[1].to_string(), "J1 = Y");
        assert_eq!(f.free_variables().len(), 3);
    }

    #[test]
    fn fresh_names_skip_reserved() {
        let mut fresh = FreshVariables::new(["Z", "I1", "V1"]);
        assert_eq!(fresh.program().name, "Z1");
        assert_eq!(fresh.program().name, "Z2");
        assert_eq!(fresh.integer('I').name, "I2");
        assert_eq!(fresh.integer('J').name, "J1");
        assert_eq!(fresh.head().name, "V2");
    }

    #[test]
    fn val_formula_holds_first_order() {
        // val_{3+5}(8) under any standard interpretation
        let z = Variable::program("Z");
        let mut fresh = FreshVariables::new(["Z"]);
        let f = val_formula(&parse_term("3+5").unwrap(), &z, &mut fresh);
        let i = StandardInterpretation::new(Vec::<String>::new(), 8);
        assert!(fo_satisfies(&i, &f.substitute(&z, &FoTerm::num(8))));
        assert!(!fo_satisfies(&i, &f.substitute(&z, &FoTerm::num(7))));
    }

    #[test]
    fn val_formula_agrees_with_values_at_small_scale() {
        // intermediates such as 7 must be inside the integer range
        let i = StandardInterpretation::new(["a"], 8);
        let z = Variable::program("Z");
        for text in ["7/2", "-7/2", "-7\\2", "7\\-2", "1..3", "|-2|", "2*a", "1/0", "(0..1)*2", "#inf..1"] {
            let t = parse_term(text).unwrap();
            let mut fresh = FreshVariables::new(["Z"]);
            let f = val_formula(&t, &z, &mut fresh);
            let expected = eval_values(&t).unwrap();
            for r in i.universe() {
                let holds = fo_satisfies(&i, &f.substitute(&z, &FoTerm::Const(r.clone())));
                assert_eq!(holds, expected.contains(r), "{text} at {r}");
            }
        }
    }

    fn arb_ground_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            (-3i64..=3).prop_map(Term::Numeral),
            Just(Term::sym("a")),
            Just(Term::Inf),
            Just(Term::Sup),
        ];
        leaf.prop_recursive(2, 8, 2, |inner| {
            prop_oneof![
                (
                    prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod, BinOp::Interval]),
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, l, r)| Term::bin(op, l, r)),
                inner.prop_map(Term::abs),
            ]
        })
    }

    fn has_non_numeral_under_operator(t: &Term) -> bool {
        fn leaves_numeric(t: &Term) -> bool {
            match t {
                Term::Numeral(_) => true,
                Term::BinOp(_, l, r) => leaves_numeric(l) && leaves_numeric(r),
                Term::Abs(a) => leaves_numeric(a),
                _ => false,
            }
        }
        matches!(t, Term::BinOp(..) | Term::Abs(_)) && !leaves_numeric(t)
    }

    fn no_interval_or_division(t: &Term) -> bool {
        match t {
            Term::BinOp(BinOp::Interval | BinOp::Div | BinOp::Mod, _, _) => false,
            Term::BinOp(_, l, r) => no_interval_or_division(l) && no_interval_or_division(r),
            Term::Abs(a) => no_interval_or_division(a),
            _ => true,
        }
    }

    proptest! {
        #[test]
        fn floor_of_absolute_quotient(i in -1000i64..=1000, j in -1000i64..=1000) {
            prop_assume!(j != 0);
            let k = rational_floor(i.abs(), j.abs());
            if i * j >= 0 {
                prop_assert_eq!(k, round_div(i, j));
            } else {
                prop_assert_eq!(-k, round_div(i, j));
            }
        }

        #[test]
        fn arithmetic_over_numerals_is_single_valued(t in arb_ground_term()) {
            let v = eval_values(&t).unwrap();
            if has_non_numeral_under_operator(&t) {
                prop_assert!(v.is_empty(), "{} has values {:?}", t, v.values);
            } else if no_interval_or_division(&t) {
                prop_assert_eq!(v.len(), 1);
            }
        }

        #[test]
        fn values_only_grow_under_interval_widening(a in -5i64..5, b in -5i64..5, c in 0i64..3) {
            let narrow = values(&format!("{a}..{b}"));
            let wide = eval_values(&Term::bin(BinOp::Interval, Term::Numeral(a - c), Term::Numeral(b + c))).unwrap().values;
            prop_assert!(narrow.is_subset(&wide));
        }
    }
}
