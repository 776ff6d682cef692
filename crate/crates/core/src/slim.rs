//! Slim/fat classification of tree languages.
//!
//! A language is slim when some `K` bounds the thickness of all its trees.
//! The decision inspects the state graph of a reduced automaton: an edge
//! `(p, q)` exists when `q = δ(a, p, r)` or `q = δ(a, r, p)` for some symbol
//! `a` and sibling state `r`, and is special when `r` can be chosen so that
//! infinitely many trees reach it. The language is fat iff some cycle through
//! a special edge can reach an accepting state; otherwise every accepted tree
//! has thickness at most `2^(n-1)`.
//!
//! [`exact_max_thickness`] computes the same classification by a different
//! route (level-configuration search) and serves as its cross-check.

use std::collections::{BTreeMap, HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbol::Label;
use crate::tree::Tree;
use crate::tree_automaton::{State, TreeAutomaton};

/// Which child the edge source occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// One way an edge `(p, q)` arises: `δ(a, p, r) = q` (Left) or
/// `δ(a, r, p) = q` (Right).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Realizer {
    pub symbol: usize,
    pub side: Side,
    pub sibling: State,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeInfo {
    pub realizers: Vec<Realizer>,
    pub special: bool,
}

/// The state graph of a reduced automaton with per-edge realizers.
#[derive(Clone, Debug)]
pub struct StateGraph {
    num_states: usize,
    edges: BTreeMap<(State, State), EdgeInfo>,
    succ: Vec<Vec<State>>,
    scc: Vec<usize>,
    on_cycle: Vec<bool>,
    infinite: Vec<bool>,
}

impl StateGraph {
    /// Scans the full δ table. Special flags are left unset; see
    /// [`mark_special`](Self::mark_special).
    pub fn build<L: Label>(a: &TreeAutomaton<L>) -> Result<Self> {
        if !a.is_reduced() {
            return Err(Error::NotReduced);
        }
        let n = a.num_states();
        let mut edges: BTreeMap<(State, State), EdgeInfo> = BTreeMap::new();
        for sym in 0..a.alphabet().len() {
            for p in 0..n {
                for r in 0..n {
                    let q = a.delta(sym, p, r);
                    let push = |edges: &mut BTreeMap<_, EdgeInfo>, from, side, sibling| {
                        edges
                            .entry((from, q))
                            .or_insert_with(|| EdgeInfo { realizers: Vec::new(), special: false })
                            .realizers
                            .push(Realizer { symbol: sym, side, sibling });
                    };
                    push(&mut edges, p, Side::Left, r);
                    push(&mut edges, r, Side::Right, p);
                }
            }
        }
        for info in edges.values_mut() {
            info.realizers.sort();
            info.realizers.dedup();
        }
        let mut succ = vec![Vec::new(); n];
        for &(p, q) in edges.keys() {
            succ[p].push(q);
        }

        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, edges.len());
        let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
        for &(p, q) in edges.keys() {
            g.add_edge(nodes[p], nodes[q], ());
        }
        let mut scc = vec![0; n];
        let mut on_cycle = vec![false; n];
        for (id, comp) in tarjan_scc(&g).into_iter().enumerate() {
            let cyclic = comp.len() > 1 || edges.contains_key(&(comp[0].index(), comp[0].index()));
            for v in comp {
                scc[v.index()] = id;
                on_cycle[v.index()] = cyclic;
            }
        }
        let sources: Vec<State> = (0..n).filter(|&v| on_cycle[v]).collect();
        let infinite = reachable_from(&succ, &sources);
        Ok(StateGraph { num_states: n, edges, succ, scc, on_cycle, infinite })
    }

    /// Sets the special flag on every edge with a realizer whose sibling
    /// state is infinite.
    pub fn mark_special(mut self) -> Self {
        let infinite = self.infinite.clone();
        for info in self.edges.values_mut() {
            info.special = info.realizers.iter().any(|r| infinite[r.sibling]);
        }
        self
    }

    pub fn analyze<L: Label>(a: &TreeAutomaton<L>) -> Result<Self> {
        Ok(Self::build(a)?.mark_special())
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn edges(&self) -> &BTreeMap<(State, State), EdgeInfo> {
        &self.edges
    }

    pub fn edge(&self, p: State, q: State) -> Option<&EdgeInfo> {
        self.edges.get(&(p, q))
    }

    pub fn successors(&self, p: State) -> &[State] {
        &self.succ[p]
    }

    pub fn on_cycle(&self, q: State) -> bool {
        self.on_cycle[q]
    }

    pub fn same_scc(&self, p: State, q: State) -> bool {
        self.scc[p] == self.scc[q]
    }

    /// True iff some cycle reaches `q`, i.e. infinitely many trees run to `q`.
    pub fn infinite_state(&self, q: State) -> bool {
        self.infinite[q]
    }

    /// Shortest path from `from` to any state satisfying `goal`, restricted
    /// to vertices allowed by `within`. Returned as the vertex sequence
    /// including both ends; successors are tried in index order.
    fn shortest_path(
        &self,
        from: State,
        goal: impl Fn(State) -> bool,
        within: impl Fn(State) -> bool,
    ) -> Option<Vec<State>> {
        if goal(from) {
            return Some(vec![from]);
        }
        let mut prev = vec![usize::MAX; self.num_states];
        let mut seen = vec![false; self.num_states];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.succ[v] {
                if seen[w] || !within(w) {
                    continue;
                }
                seen[w] = true;
                prev[w] = v;
                if goal(w) {
                    let mut path = vec![w];
                    let mut cur = w;
                    while cur != from {
                        cur = prev[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// A cycle through `p` that starts with the edge `p -> q` (which must
    /// lie inside one SCC), as a closed vertex walk `p, q, ..., p`.
    fn cycle_through(&self, p: State, q: State) -> Vec<State> {
        let scc = self.scc[p];
        let back = self.shortest_path(q, |v| v == p, |v| self.scc[v] == scc).expect("edge inside an SCC closes a cycle");
        let mut walk = vec![p];
        walk.extend(back);
        walk
    }
}

fn reachable_from(succ: &[Vec<State>], sources: &[State]) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut stack: Vec<State> = sources.to_vec();
    for &s in sources {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SlimKind {
    Slim,
    Fat,
}

/// The cycle, special edge and accepting path that make a language fat.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FatRecipe {
    pub special_edge: (State, State),
    /// Closed walk starting and ending at the special edge's source, whose
    /// first step is the special edge.
    pub cycle: Vec<State>,
    /// Shortest path from the special edge's source to an accepting state.
    pub path_to_final: Vec<State>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlimVerdict {
    pub kind: SlimKind,
    /// Number of states of the reduced automaton.
    pub states: usize,
    /// `2^(n-1)`, saturating.
    pub bound: u64,
    pub exact_max_thickness: Option<usize>,
    pub fat_witness_recipe: Option<FatRecipe>,
}

impl SlimVerdict {
    pub fn is_slim(&self) -> bool {
        self.kind == SlimKind::Slim
    }
}

pub fn thickness_bound(states: usize) -> u64 {
    if states == 0 {
        return 1;
    }
    1u64.checked_shl((states - 1) as u32).unwrap_or(u64::MAX)
}

fn fat_recipe<L: Label>(a: &TreeAutomaton<L>, g: &StateGraph) -> Option<FatRecipe> {
    let accepting: Vec<bool> = (0..a.num_states()).map(|q| a.is_accepting(q)).collect();
    g.edges
        .iter()
        .filter(|(&(p, q), info)| info.special && g.same_scc(p, q))
        .find_map(|(&(p, q), _)| {
            let path = g.shortest_path(p, |v| accepting[v], |_| true)?;
            Some(FatRecipe { special_edge: (p, q), cycle: g.cycle_through(p, q), path_to_final: path })
        })
}

/// Decides whether `L(a)` is slim. Reduces `a` first.
pub fn decide_slim<L: Label>(a: &TreeAutomaton<L>) -> SlimVerdict {
    let red = a.reduced();
    let g = StateGraph::analyze(&red).expect("reduced automaton");
    let recipe = fat_recipe(&red, &g);
    let n = red.num_states();
    SlimVerdict {
        kind: if recipe.is_some() { SlimKind::Fat } else { SlimKind::Slim },
        states: n,
        bound: thickness_bound(n),
        exact_max_thickness: None,
        fat_witness_recipe: recipe,
    }
}

/// Outcome of the level-configuration search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Thickness {
    /// Maximal thickness over the accepted language (0 when empty).
    Exact(usize),
    /// A level wider than the cap occurs in an accepted tree, and the cap is
    /// at least `2^(n-1)`, so the language is fat.
    FatDetected,
}

/// Canonical level configuration for the thickness search: the multiset of
/// states on one level, kept sorted. Sibling order does not affect how many
/// nodes the following levels can hold, so sorting loses nothing here.
type Multiset = Vec<State>;

/// Lazy enumeration of the next-level multisets of one configuration.
/// Entries holding the same state pick options in non-decreasing order, so
/// each multiset of choices is produced once.
struct Successors {
    config: Multiset,
    cursor: Vec<usize>,
    done: bool,
}

impl Successors {
    fn new(config: Multiset) -> Self {
        let cursor = vec![0; config.len()];
        Successors { config, cursor, done: false }
    }

    fn next(&mut self, options: &[Vec<Option<(State, State)>>]) -> Option<Multiset> {
        if self.done {
            return None;
        }
        let mut m: Multiset = Vec::with_capacity(2 * self.config.len());
        for (i, &q) in self.config.iter().enumerate() {
            if let Some((p, r)) = options[q][self.cursor[i]] {
                m.push(p);
                m.push(r);
            }
        }
        m.sort_unstable();
        // advance the odometer from the right
        let mut i = self.config.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cursor[i] + 1 < options[self.config[i]].len() {
                self.cursor[i] += 1;
                for j in i + 1..self.config.len() {
                    self.cursor[j] = if self.config[j] == self.config[j - 1] { self.cursor[j - 1] } else { 0 };
                }
                break;
            }
        }
        Some(m)
    }
}

/// Maximal thickness of an accepted tree, found by depth-first search over
/// the configurations of states one level can carry.
///
/// Starts from `(q_f)` for accepting `q_f`; each entry either ends as a leaf
/// (if some `ι(a)` equals it) or becomes an inner node `δ(a, p0, p1)`
/// contributing `p0 p1` to the next level. In a reduced automaton every
/// entry can be completed, so every reachable configuration is a level of
/// some accepted tree.
pub fn exact_max_thickness<L: Label>(a: &TreeAutomaton<L>, cap: usize) -> Result<Thickness> {
    let red = a.reduced();
    let n = red.num_states();
    let bound = thickness_bound(n);
    let leaf_ok: Vec<bool> = {
        let mut v = vec![false; n];
        for s in 0..red.alphabet().len() {
            v[red.init(s)] = true;
        }
        v
    };
    let mut expansions: Vec<Vec<(State, State)>> = vec![Vec::new(); n];
    for s in 0..red.alphabet().len() {
        for p in 0..n {
            for q in 0..n {
                expansions[red.delta(s, p, q)].push((p, q));
            }
        }
    }
    for e in &mut expansions {
        e.sort();
        e.dedup();
    }
    let over_cap = || {
        if (cap as u64) >= bound {
            Ok(Thickness::FatDetected)
        } else {
            Err(Error::CapExceededInconclusive { cap, bound: bound as usize })
        }
    };

    // options per state: expansions first, so the search widens early
    let options: Vec<Vec<Option<(State, State)>>> = (0..n)
        .map(|q| {
            let mut o: Vec<Option<(State, State)>> = expansions[q].iter().copied().map(Some).collect();
            if leaf_ok[q] {
                o.push(None);
            }
            o
        })
        .collect();

    let mut seen: HashSet<Multiset> = HashSet::new();
    let mut stack: Vec<Successors> = Vec::new();
    for q in red.accepting_states() {
        if seen.insert(vec![q]) {
            stack.push(Successors::new(vec![q]));
        }
    }
    let mut best = if stack.is_empty() { 0 } else { 1 };
    if best > cap {
        return over_cap();
    }
    while let Some(top) = stack.last_mut() {
        let Some(next) = top.next(&options) else {
            stack.pop();
            continue;
        };
        if next.len() > cap {
            return over_cap();
        }
        if next.is_empty() {
            continue;
        }
        best = best.max(next.len());
        if seen.insert(next.clone()) {
            stack.push(Successors::new(next));
        }
    }
    Ok(Thickness::Exact(best))
}

/// Walks `cur` up along edge `from -> to` using `realizer`, with `side_tree`
/// as the sibling subtree.
fn wrap<L: Label>(a: &TreeAutomaton<L>, cur: Tree<L>, realizer: Realizer, side_tree: Tree<L>) -> Tree<L> {
    let label = a.alphabet()[realizer.symbol].clone();
    match realizer.side {
        Side::Left => Tree::node(label, cur, side_tree),
        Side::Right => Tree::node(label, side_tree, cur),
    }
}

fn plain_step<L: Label>(a: &TreeAutomaton<L>, g: &StateGraph, cur: Tree<L>, from: State, to: State) -> Tree<L> {
    let realizer = g.edge(from, to).expect("edge on walk").realizers[0];
    let side = a.witness_for_state(realizer.sibling).expect("reduced").tree;
    wrap(a, cur, realizer, side)
}

/// A tree reaching `q` with height at least `m`. Requires infinitely many
/// trees to reach `q`.
pub fn tall_tree_for_state<L: Label>(a: &TreeAutomaton<L>, q: State, m: usize) -> Result<Tree<L>> {
    let red = require_reduced(a)?;
    let g = StateGraph::analyze(red)?;
    tall_tree_in(red, &g, q, m)
}

fn require_reduced<L: Label>(a: &TreeAutomaton<L>) -> Result<&TreeAutomaton<L>> {
    if a.is_reduced() {
        Ok(a)
    } else {
        Err(Error::NotReduced)
    }
}

fn tall_tree_in<L: Label>(a: &TreeAutomaton<L>, g: &StateGraph, q: State, m: usize) -> Result<Tree<L>> {
    if q >= g.num_states() || !g.infinite_state(q) {
        return Err(Error::StateNotInfinite(q));
    }
    if m == 0 {
        return Ok(a.witness_for_state(q)?.tree);
    }
    // nearest cycle vertex from which q is reachable
    let (start, path) = (0..g.num_states())
        .filter(|&c| g.on_cycle(c))
        .filter_map(|c| g.shortest_path(c, |v| v == q, |_| true).map(|p| (c, p)))
        .min_by_key(|(c, p)| (p.len(), *c))
        .expect("infinite state is reachable from a cycle");
    let cycle = if g.edge(start, start).is_some() {
        vec![start, start]
    } else {
        let next = *g.successors(start).iter().find(|&&w| g.same_scc(start, w)).expect("cyclic SCC");
        g.cycle_through(start, next)
    };
    let path_edges = path.len() - 1;
    let cycle_edges = cycle.len() - 1;
    let rounds = m.saturating_sub(path_edges).div_ceil(cycle_edges);

    let mut cur = a.witness_for_state(start)?.tree;
    for _ in 0..rounds {
        for w in cycle.windows(2) {
            cur = plain_step(a, g, cur, w[0], w[1]);
        }
    }
    for w in path.windows(2) {
        cur = plain_step(a, g, cur, w[0], w[1]);
    }
    Ok(cur)
}

fn widest_level<L>(t: &Tree<L>) -> usize {
    let widths = t.level_widths();
    let max = *widths.iter().max().expect("nonempty");
    widths.iter().position(|&w| w == max).expect("max present")
}

/// An accepted tree of thickness greater than `m`, built by going around a
/// cycle through a special edge `m` times. Each pass over the special edge
/// hangs a sibling subtree tall enough to reach the current widest level,
/// adding at least one node to it.
pub fn pump_thick_witness<L: Label>(a: &TreeAutomaton<L>, m: usize) -> Result<Tree<L>> {
    let red = require_reduced(a)?;
    let g = StateGraph::analyze(red)?;
    let recipe = fat_recipe(red, &g).ok_or(Error::NotFat)?;
    let (p, _) = recipe.special_edge;
    let mut cur = red.witness_for_state(p)?.tree;
    for _ in 0..m {
        for (i, w) in recipe.cycle.windows(2).enumerate() {
            if i == 0 {
                let info = g.edge(w[0], w[1]).expect("special edge");
                let realizer =
                    *info.realizers.iter().find(|r| g.infinite_state(r.sibling)).expect("special edge has infinite realizer");
                let depth = widest_level(&cur);
                let side = tall_tree_in(red, &g, realizer.sibling, depth)?;
                cur = wrap(red, cur, realizer, side);
            } else {
                cur = plain_step(red, &g, cur, w[0], w[1]);
            }
        }
    }
    for w in recipe.path_to_final.windows(2) {
        cur = plain_step(red, &g, cur, w[0], w[1]);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a_all, a_cat, a_leaf};

    fn edge_set(g: &StateGraph, a: &TreeAutomaton) -> Vec<(String, String)> {
        let mut v: Vec<_> =
            g.edges().keys().map(|&(p, q)| (a.state_name(p).to_string(), a.state_name(q).to_string())).collect();
        v.sort();
        v
    }

    fn pairs(xs: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut v: Vec<_> = xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        v.sort();
        v
    }

    #[test]
    fn graph_of_a_all() {
        let a = a_all().reduced();
        let g = StateGraph::analyze(&a).unwrap();
        assert_eq!(edge_set(&g, &a), pairs(&[("q", "q")]));
        let info = g.edge(0, 0).unwrap();
        assert_eq!(
            info.realizers,
            vec![
                Realizer { symbol: 0, side: Side::Left, sibling: 0 },
                Realizer { symbol: 0, side: Side::Right, sibling: 0 }
            ]
        );
        assert!(info.special);
        assert!(g.infinite_state(0));
    }

    #[test]
    fn graph_of_a_leaf_and_a_cat() {
        let a = a_leaf().reduced();
        let g = StateGraph::build(&a).unwrap();
        assert_eq!(edge_set(&g, &a), pairs(&[("L", "D"), ("D", "D")]));

        let c = a_cat().reduced();
        let g = StateGraph::analyze(&c).unwrap();
        assert_eq!(edge_set(&g, &c), pairs(&[("L", "C"), ("C", "C"), ("C", "D"), ("D", "D"), ("L", "D")]));
        let s = |n: &str| c.state_by_name(n).unwrap();
        assert!(!g.infinite_state(s("L")));
        assert!(g.infinite_state(s("C")));
        assert!(!g.edge(s("C"), s("C")).unwrap().special);
        assert!(g.edge(s("D"), s("D")).unwrap().special);
    }

    #[test]
    fn build_requires_reduced() {
        let raw = crate::tree_automaton::TreeAutomaton::new(
            crate::symbol::alphabet(&["a"]),
            vec!["q".into()],
            vec![0],
            vec![0],
            vec![true],
        );
        assert!(matches!(StateGraph::build(&raw), Err(Error::NotReduced)));
    }

    #[test]
    fn decide_fixtures() {
        let v = decide_slim(&a_all());
        assert_eq!(v.kind, SlimKind::Fat);
        assert_eq!(v.fat_witness_recipe.unwrap().special_edge, (0, 0));

        let v = decide_slim(&a_leaf());
        assert_eq!((v.kind, v.states, v.bound), (SlimKind::Slim, 2, 2));

        let v = decide_slim(&a_cat());
        assert_eq!((v.kind, v.states, v.bound), (SlimKind::Slim, 3, 4));
    }

    #[test]
    fn exact_thickness_fixtures() {
        assert_eq!(exact_max_thickness(&a_leaf(), 4), Ok(Thickness::Exact(1)));
        assert_eq!(exact_max_thickness(&a_cat(), 4), Ok(Thickness::Exact(2)));
        assert_eq!(exact_max_thickness(&a_all(), 1), Ok(Thickness::FatDetected));
        let empty = a_all().with_accepting(vec![false]);
        assert_eq!(exact_max_thickness(&empty, 1), Ok(Thickness::Exact(0)));
    }

    #[test]
    fn exact_thickness_inconclusive_below_bound() {
        // a_cat has bound 4 and real thickness 2
        assert_eq!(exact_max_thickness(&a_cat(), 1), Err(Error::CapExceededInconclusive { cap: 1, bound: 4 }));
    }

    #[test]
    fn tall_tree_on_a_all_is_left_comb() {
        let a = a_all().reduced();
        let t = tall_tree_for_state(&a, 0, 5).unwrap();
        assert_eq!(t.to_string(), "(a (a (a (a (a a a) a) a) a) a)");
        assert_eq!(tall_tree_for_state(&a, 0, 0).unwrap().height(), 0);
    }

    #[test]
    fn tall_tree_rejects_finite_state() {
        let a = a_cat().reduced();
        let l = a.state_by_name("L").unwrap();
        assert_eq!(tall_tree_for_state(&a, l, 3), Err(Error::StateNotInfinite(l)));
    }

    #[test]
    fn pump_a_all() {
        let a = a_all().reduced();
        for m in 0..6 {
            let t = pump_thick_witness(&a, m).unwrap();
            assert!(a.accepts(&t).unwrap());
            assert!(t.thickness() > m, "m = {m}: {t}");
        }
        assert_eq!(pump_thick_witness(&a_cat().reduced(), 2), Err(Error::NotFat));
    }
}
