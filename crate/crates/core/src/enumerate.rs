//! Exhaustive enumeration of bounded trees, used as the brute-force oracle.

use std::collections::{BTreeMap, HashSet};

use crate::symbol::{Label, Symbol};
use crate::tree::Tree;
use crate::tree_automaton::{State, TreeAutomaton};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationSpec<L = Symbol> {
    pub alphabet: Vec<L>,
    pub max_height: usize,
    pub max_thickness: Option<usize>,
    pub max_count: Option<usize>,
}

impl<L> EnumerationSpec<L> {
    pub fn new(alphabet: Vec<L>, max_height: usize) -> Self {
        EnumerationSpec { alphabet, max_height, max_thickness: None, max_count: None }
    }

    pub fn thickness(mut self, k: usize) -> Self {
        self.max_thickness = Some(k);
        self
    }

    pub fn count(mut self, n: usize) -> Self {
        self.max_count = Some(n);
        self
    }
}

fn combine(l: &[usize], r: &[usize]) -> Vec<usize> {
    let mut w = Vec::with_capacity(1 + l.len().max(r.len()));
    w.push(1);
    for i in 0..l.len().max(r.len()) {
        w.push(l.get(i).copied().unwrap_or(0) + r.get(i).copied().unwrap_or(0));
    }
    w
}

/// Trees of every exact height up to the bound, grouped by level-width
/// profile. Subtrees of a tree thicker than the cap are never needed, since
/// thickness only grows towards the root.
fn by_height<L: Label>(spec: &EnumerationSpec<L>) -> Vec<BTreeMap<Vec<usize>, Vec<Tree<L>>>> {
    let cap = spec.max_thickness.unwrap_or(usize::MAX);
    let mut levels: Vec<BTreeMap<Vec<usize>, Vec<Tree<L>>>> = Vec::new();
    if spec.alphabet.is_empty() || cap == 0 {
        return levels;
    }
    let leaves = spec.alphabet.iter().cloned().map(Tree::leaf).collect();
    levels.push(BTreeMap::from([(vec![1], leaves)]));
    for h in 1..=spec.max_height {
        let mut cur: BTreeMap<Vec<usize>, Vec<Tree<L>>> = BTreeMap::new();
        for hl in 0..h {
            for hr in 0..h {
                if hl.max(hr) != h - 1 {
                    continue;
                }
                for (pl, ls) in &levels[hl] {
                    for (pr, rs) in &levels[hr] {
                        let w = combine(pl, pr);
                        if w.iter().any(|&x| x > cap) {
                            continue;
                        }
                        let bucket = cur.entry(w).or_default();
                        for a in &spec.alphabet {
                            for l in ls {
                                for r in rs {
                                    bucket.push(Tree::node(a.clone(), l.clone(), r.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
        levels.push(cur);
    }
    levels
}

/// Every tree within the bounds exactly once, ordered by height and then by
/// S-expression.
pub fn enumerate_trees<L: Label>(spec: &EnumerationSpec<L>) -> Vec<Tree<L>> {
    let mut out = Vec::new();
    for level in by_height(spec) {
        let mut keyed: Vec<(String, Tree<L>)> =
            level.into_values().flatten().map(|t| (t.to_string(), t)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(keyed.into_iter().map(|(_, t)| t));
        if spec.max_count.is_some_and(|n| out.len() >= n) {
            break;
        }
    }
    if let Some(n) = spec.max_count {
        out.truncate(n);
    }
    out
}

/// Number of trees within the bounds, without building them.
pub fn count_trees<L>(spec: &EnumerationSpec<L>) -> u128 {
    let cap = spec.max_thickness.unwrap_or(usize::MAX);
    if spec.alphabet.is_empty() || cap == 0 {
        return 0;
    }
    let s = spec.alphabet.len() as u128;
    let mut levels: Vec<BTreeMap<Vec<usize>, u128>> = vec![BTreeMap::from([(vec![1], s)])];
    for h in 1..=spec.max_height {
        let mut cur: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
        for hl in 0..h {
            for hr in 0..h {
                if hl.max(hr) != h - 1 {
                    continue;
                }
                for (pl, &nl) in &levels[hl] {
                    for (pr, &nr) in &levels[hr] {
                        let w = combine(pl, pr);
                        if w.iter().all(|&x| x <= cap) {
                            *cur.entry(w).or_default() += s * nl * nr;
                        }
                    }
                }
            }
        }
        levels.push(cur);
    }
    let total: u128 = levels.iter().flat_map(|l| l.values()).sum();
    spec.max_count.map_or(total, |n| total.min(n as u128))
}

/// A run class: the state reached and the level widths, each clamped at
/// `clamp`.
pub type RunClass = (State, Vec<usize>);

/// Every `(state, clamped width profile)` realized by some tree of height at
/// most `max_height`. Two trees in the same class are interchangeable as
/// subtrees for both the run and the clamped profile of the whole tree, so
/// this covers the full enumeration without listing it.
pub fn run_classes<L: Label>(a: &TreeAutomaton<L>, max_height: usize, clamp: usize) -> HashSet<RunClass> {
    let mut by_h: Vec<HashSet<RunClass>> = Vec::new();
    by_h.push((0..a.alphabet().len()).map(|s| (a.init(s), vec![1.min(clamp)])).collect());
    for h in 1..=max_height {
        let mut cur = HashSet::new();
        let lower: Vec<&RunClass> = by_h.iter().flatten().collect();
        let top: Vec<&RunClass> = by_h[h - 1].iter().collect();
        let mut pairs = Vec::new();
        for &l in &top {
            for &r in &lower {
                pairs.push((l, r));
                pairs.push((r, l));
            }
        }
        for ((ql, pl), (qr, pr)) in pairs {
            let w: Vec<usize> = combine(pl, pr).into_iter().map(|x| x.min(clamp)).collect();
            for s in 0..a.alphabet().len() {
                cur.insert((a.delta(s, *ql, *qr), w.clone()));
            }
        }
        by_h.push(cur);
    }
    by_h.into_iter().flatten().collect()
}
