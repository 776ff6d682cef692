//! Small named automata and trees used throughout the tests, the acceptance
//! suite and the shipped example files.

use crate::presentation::{Relation, TreePresentation};
use crate::symbol::{alphabet, padded_alphabet, sym, PaddedTuple, Symbol};
use crate::tree::Tree;
use crate::tree_automaton::TreeAutomaton;

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

/// The example tree `(a (b c (b a c)) (c b a))`.
pub fn t_ex() -> Tree {
    Tree::parse("(a (b c (b a c)) (c b a))").expect("literal tree")
}

/// One state, accepting everything over `{a}`.
pub fn a_all() -> TreeAutomaton {
    TreeAutomaton::from_fn(alphabet(&["a"]), names(&["q"]), |_| 0, |_, _, _| 0, |_| true)
}

/// Accepts only the single leaf `a`: `ι(a) = L`, every inner node goes to `D`.
pub fn a_leaf() -> TreeAutomaton {
    TreeAutomaton::from_fn(alphabet(&["a"]), names(&["L", "D"]), |_| 0, |_, _, _| 1, |q| q == 0)
}

const L: usize = 0;
const C: usize = 1;
const D: usize = 2;

fn caterpillar_delta(p: usize, q: usize) -> usize {
    match (p, q) {
        (L, L) | (C, L) => C,
        _ => D,
    }
}

/// Left caterpillars of height at least one: every inner node has a leaf
/// as right child. All accepted trees have thickness exactly 2.
pub fn a_cat() -> TreeAutomaton {
    TreeAutomaton::from_fn(alphabet(&["a"]), names(&["L", "C", "D"]), |_| L, |_, p, q| caterpillar_delta(p, q), |q| q == C)
}

/// Left combs over `{a}` including the single leaf.
pub fn a_spine() -> TreeAutomaton {
    TreeAutomaton::from_fn(
        alphabet(&["a"]),
        names(&["L", "S", "D"]),
        |_| L,
        |_, p, q| caterpillar_delta(p, q),
        |q| q == L || q == C,
    )
}

/// Diagonal relation over `base`: accepts `⊗(s, t)` iff `s = t`.
pub fn a_eq(base: &[Symbol]) -> TreeAutomaton<PaddedTuple> {
    let diag = |x: &PaddedTuple| x.0[0].is_some() && x.0[0] == x.0[1];
    TreeAutomaton::from_fn(
        padded_alphabet(base, 2),
        names(&["Ok", "Bad"]),
        move |x| if diag(x) { 0 } else { 1 },
        move |x, p, q| if diag(x) && p == 0 && q == 0 { 0 } else { 1 },
        |q| q == 0,
    )
}

/// Strict domain inclusion between left combs over `{a}`: `s < t` iff
/// `h(s) < h(t)`. Order type ω.
pub fn a_spine_lt() -> TreeAutomaton<PaddedTuple> {
    // t-only leaf, t-only comb, both leaf, both comb (equal so far),
    // both with s strictly shorter, dead
    const TL: usize = 0;
    const TC: usize = 1;
    const BL: usize = 2;
    const BEQ: usize = 3;
    const BLT: usize = 4;
    const DEAD: usize = 5;
    let both = |x: &PaddedTuple| x.0[0].is_some() && x.0[1].is_some();
    let t_only = |x: &PaddedTuple| x.0[0].is_none() && x.0[1].is_some();
    TreeAutomaton::from_fn(
        padded_alphabet(&[sym("a")], 2),
        names(&["TL", "TC", "BL", "BEq", "BLt", "Dead"]),
        move |x| {
            if both(x) {
                BL
            } else if t_only(x) {
                TL
            } else {
                DEAD
            }
        },
        move |x, p, q| match (p, q) {
            (TL | TC, TL) if t_only(x) => TC,
            (TL | TC, TL) if both(x) => BLT,
            (BL | BEQ, BL) if both(x) => BEQ,
            (BLT, BL) if both(x) => BLT,
            _ => DEAD,
        },
        |q| q == BLT,
    )
}

/// `(combs; <)`: the ordinal ω presented by left combs.
pub fn ord_omega() -> TreePresentation {
    TreePresentation::new("ord_omega", a_spine(), vec![Relation::new("<", 2, a_spine_lt())]).expect("consistent fixture")
}

/// All trees over `{a}` as domain; fat, so never word automatic via slimness.
pub fn all_trees() -> TreePresentation {
    TreePresentation::new("all_trees", a_all(), vec![Relation::new("<", 2, a_spine_lt())]).expect("consistent fixture")
}

/// A presentation with an empty domain.
pub fn empty_domain() -> TreePresentation {
    let dom = a_all().with_accepting(vec![false]);
    TreePresentation::new("empty", dom, vec![Relation::new("<", 2, a_spine_lt())]).expect("consistent fixture")
}
