//! Deterministic bottom-up tree automata over binary trees.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::symbol::{Label, Symbol};
use crate::tree::Tree;

pub type State = usize;

/// A total deterministic bottom-up tree automaton `(Q, ι, δ, F)`.
///
/// `δ` is a dense table indexed by `(symbol, left state, right state)`.
#[derive(Clone, Debug)]
pub struct TreeAutomaton<L = Symbol> {
    alphabet: Vec<L>,
    index: HashMap<L, usize>,
    state_names: Vec<String>,
    init: Vec<State>,
    delta: Vec<State>,
    accepting: Vec<bool>,
    /// Minimal-height witness per state; present only once the automaton has
    /// been certified reduced.
    witnesses: Option<Vec<Tree<L>>>,
}

/// A tree together with the state the automaton reaches on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateWitness<L = Symbol> {
    pub state: State,
    pub tree: Tree<L>,
}

/// Result of [`TreeAutomaton::reduce`].
#[derive(Clone, Debug)]
pub struct Reduction<L = Symbol> {
    pub automaton: TreeAutomaton<L>,
    /// `kept[new] = old`: original index of every surviving state.
    pub kept: Vec<State>,
}

impl<L: Label> TreeAutomaton<L> {
    /// Builds an automaton from explicit tables. `init[a]` is `ι(a)`,
    /// `delta[(a * n + p) * n + q]` is `δ(a, p, q)`.
    pub fn new(
        alphabet: Vec<L>,
        state_names: Vec<String>,
        init: Vec<State>,
        delta: Vec<State>,
        accepting: Vec<bool>,
    ) -> Self {
        let n = state_names.len();
        assert!(!alphabet.is_empty(), "alphabet must be nonempty");
        assert_eq!(init.len(), alphabet.len(), "ι must be total");
        assert_eq!(delta.len(), alphabet.len() * n * n, "δ must be total");
        assert_eq!(accepting.len(), n);
        assert!(init.iter().chain(&delta).all(|&q| q < n), "target state out of range");
        let index = alphabet.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect::<HashMap<_, _>>();
        assert_eq!(index.len(), alphabet.len(), "duplicate alphabet symbol");
        TreeAutomaton { alphabet, index, state_names, init, delta, accepting, witnesses: None }
    }

    /// Builds an automaton from functions over states `0..n`.
    pub fn from_fn(
        alphabet: Vec<L>,
        state_names: Vec<String>,
        init: impl Fn(&L) -> State,
        delta: impl Fn(&L, State, State) -> State,
        accepting: impl Fn(State) -> bool,
    ) -> Self {
        let n = state_names.len();
        let init_t = alphabet.iter().map(&init).collect();
        let mut delta_t = Vec::with_capacity(alphabet.len() * n * n);
        for a in &alphabet {
            for p in 0..n {
                for q in 0..n {
                    delta_t.push(delta(a, p, q));
                }
            }
        }
        let acc = (0..n).map(accepting).collect();
        Self::new(alphabet, state_names, init_t, delta_t, acc)
    }

    /// Builds the automaton whose states are the values of `S` reachable
    /// bottom-up from `init`. The result is reduced by construction.
    pub fn explore<S: Clone + Eq + Hash>(
        alphabet: Vec<L>,
        init: impl Fn(&L) -> S,
        delta: impl Fn(&L, &S, &S) -> S,
        accepting: impl Fn(&S) -> bool,
        name: impl Fn(&S) -> String,
    ) -> Self {
        let mut ids: HashMap<S, State> = HashMap::new();
        let mut states: Vec<S> = Vec::new();
        let mut intern = |s: S, states: &mut Vec<S>| -> State {
            *ids.entry(s.clone()).or_insert_with(|| {
                states.push(s);
                states.len() - 1
            })
        };
        let init_t: Vec<State> = alphabet.iter().map(|a| intern(init(a), &mut states)).collect();
        // table[(a, p, q)] filled as states appear; iterate to closure
        let mut table: HashMap<(usize, State, State), State> = HashMap::new();
        let mut done = 0;
        while done < states.len() {
            let upto = states.len();
            for (a, x) in alphabet.iter().enumerate() {
                for p in 0..upto {
                    for q in 0..upto {
                        if p < done && q < done {
                            continue;
                        }
                        let target = delta(x, &states[p], &states[q]);
                        let id = intern(target, &mut states);
                        table.insert((a, p, q), id);
                    }
                }
            }
            done = upto;
        }
        let n = states.len();
        let mut delta_t = vec![0; alphabet.len() * n * n];
        for ((a, p, q), r) in table {
            delta_t[(a * n + p) * n + q] = r;
        }
        let acc = states.iter().map(&accepting).collect();
        let names = states.iter().map(name).collect();
        let mut aut = Self::new(alphabet, names, init_t, delta_t, acc);
        aut.certify_reduced();
        aut
    }

    pub fn alphabet(&self) -> &[L] {
        &self.alphabet
    }

    pub fn symbol_index(&self, a: &L) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.state_names[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_by_name(&self, name: &str) -> Option<State> {
        self.state_names.iter().position(|n| n == name)
    }

    /// `ι` by symbol index.
    pub fn init(&self, a: usize) -> State {
        self.init[a]
    }

    /// `δ` by symbol index.
    pub fn delta(&self, a: usize, p: State, q: State) -> State {
        let n = self.num_states();
        self.delta[(a * n + p) * n + q]
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> Vec<State> {
        (0..self.num_states()).filter(|&q| self.accepting[q]).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.witnesses.is_some()
    }

    /// `A(t)`: the state reached bottom-up on `t`.
    pub fn run(&self, t: &Tree<L>) -> Result<State> {
        let a = self.symbol_index(t.label()).ok_or_else(|| Error::UnknownSymbol(t.label().to_string()))?;
        match t.children() {
            None => Ok(self.init[a]),
            Some((l, r)) => {
                let p = self.run(l)?;
                let q = self.run(r)?;
                Ok(self.delta(a, p, q))
            }
        }
    }

    pub fn accepts(&self, t: &Tree<L>) -> Result<bool> {
        Ok(self.accepting[self.run(t)?])
    }

    /// Least fixpoint of producible states with a minimal-height witness
    /// for each, in discovery order.
    pub fn producible(&self) -> Vec<Option<Tree<L>>> {
        let n = self.num_states();
        let mut wit: Vec<Option<Tree<L>>> = vec![None; n];
        let mut known: Vec<State> = Vec::new();
        for (a, sym) in self.alphabet.iter().enumerate() {
            let q = self.init[a];
            if wit[q].is_none() {
                wit[q] = Some(Tree::leaf(sym.clone()));
                known.push(q);
            }
        }
        let mut done = 0;
        while done < known.len() {
            let round: Vec<State> = known.clone();
            let fresh_from = done;
            let mut added = Vec::new();
            for (a, sym) in self.alphabet.iter().enumerate() {
                for (i, &p) in round.iter().enumerate() {
                    for (j, &q) in round.iter().enumerate() {
                        if i < fresh_from && j < fresh_from {
                            continue;
                        }
                        let r = self.delta(a, p, q);
                        if wit[r].is_none() {
                            let t = Tree::node(sym.clone(), wit[p].clone().unwrap(), wit[q].clone().unwrap());
                            wit[r] = Some(t);
                            added.push(r);
                        }
                    }
                }
            }
            done = round.len();
            known.extend(added);
        }
        wit
    }

    /// Restricts the automaton to producible states. The language is
    /// unchanged and the result carries witnesses for every state.
    pub fn reduce(&self) -> Reduction<L> {
        let wit = self.producible();
        let kept: Vec<State> = (0..self.num_states()).filter(|&q| wit[q].is_some()).collect();
        let mut renum = vec![usize::MAX; self.num_states()];
        for (new, &old) in kept.iter().enumerate() {
            renum[old] = new;
        }
        let n = kept.len();
        let init = self.init.iter().map(|&q| renum[q]).collect();
        let mut delta = Vec::with_capacity(self.alphabet.len() * n * n);
        for a in 0..self.alphabet.len() {
            for &p in &kept {
                for &q in &kept {
                    delta.push(renum[self.delta(a, p, q)]);
                }
            }
        }
        let accepting = kept.iter().map(|&q| self.accepting[q]).collect();
        let names = kept.iter().map(|&q| self.state_names[q].clone()).collect();
        let mut automaton = Self::new(self.alphabet.clone(), names, init, delta, accepting);
        automaton.witnesses = Some(kept.iter().map(|&q| wit[q].clone().unwrap()).collect());
        Reduction { automaton, kept }
    }

    /// Returns a reduced automaton: `self` if already certified, otherwise
    /// the result of [`reduce`](Self::reduce).
    pub fn reduced(&self) -> TreeAutomaton<L> {
        if self.is_reduced() {
            self.clone()
        } else {
            self.reduce().automaton
        }
    }

    fn certify_reduced(&mut self) {
        let wit = self.producible();
        if wit.iter().all(Option::is_some) {
            self.witnesses = Some(wit.into_iter().map(Option::unwrap).collect());
        }
    }

    /// The memoized minimal-height tree reaching `q`.
    pub fn witness_for_state(&self, q: State) -> Result<StateWitness<L>> {
        let wits = self.witnesses.as_ref().ok_or(Error::NotReduced)?;
        let tree = wits.get(q).cloned().ok_or(Error::StateNotProducible(q))?;
        Ok(StateWitness { state: q, tree })
    }

    pub fn is_empty(&self) -> bool {
        let wit = self.producible();
        !(0..self.num_states()).any(|q| self.accepting[q] && wit[q].is_some())
    }

    /// Some accepted tree of minimal height, if any.
    pub fn accepted_witness(&self) -> Option<Tree<L>> {
        let wit = self.producible();
        (0..self.num_states())
            .filter(|&q| self.accepting[q])
            .filter_map(|q| wit[q].clone())
            .min_by_key(|t| (t.height(), t.size()))
    }

    /// Same automaton with a different accepting set.
    pub fn with_accepting(&self, accepting: Vec<bool>) -> Self {
        assert_eq!(accepting.len(), self.num_states());
        TreeAutomaton { accepting, ..self.clone() }
    }

    /// Relabels the alphabet through an injective map.
    pub fn map_alphabet<M: Label>(&self, f: impl Fn(&L) -> M) -> TreeAutomaton<M> {
        let alphabet: Vec<M> = self.alphabet.iter().map(f).collect();
        let mut out = TreeAutomaton::new(
            alphabet,
            self.state_names.clone(),
            self.init.clone(),
            self.delta.clone(),
            self.accepting.clone(),
        );
        if self.is_reduced() {
            out.certify_reduced();
        }
        out
    }

    /// All `(a, p, q)` with `δ(a, p, q) = target`, as symbol indices.
    pub fn inner_preimages(&self, target: State) -> Vec<(usize, State, State)> {
        let n = self.num_states();
        let mut out = Vec::new();
        for a in 0..self.alphabet.len() {
            for p in 0..n {
                for q in 0..n {
                    if self.delta(a, p, q) == target {
                        out.push((a, p, q));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a_all, a_cat, a_leaf};
    use crate::symbol::{alphabet, sym};

    fn leaf() -> Tree {
        Tree::leaf(sym("a"))
    }

    fn node(l: Tree, r: Tree) -> Tree {
        Tree::node(sym("a"), l, r)
    }

    #[test]
    fn run_examples() {
        let a = a_leaf();
        assert_eq!(a.state_name(a.run(&leaf()).unwrap()), "L");
        assert_eq!(a.state_name(a.run(&node(leaf(), leaf())).unwrap()), "D");

        let c = a_cat();
        let cat = node(node(node(leaf(), leaf()), leaf()), leaf());
        assert_eq!(cat.thickness(), 2);
        assert!(c.accepts(&cat).unwrap());
        let full2 = node(node(leaf(), leaf()), node(leaf(), leaf()));
        assert_eq!(c.state_name(c.run(&full2).unwrap()), "D");
        assert!(!c.accepts(&full2).unwrap());
    }

    #[test]
    fn run_rejects_unknown_symbol() {
        let t = Tree::leaf(sym("z"));
        assert_eq!(a_leaf().run(&t), Err(Error::UnknownSymbol("z".into())));
    }

    #[test]
    fn reduce_drops_unproducible_state() {
        let base = a_leaf();
        // add an orphan state X
        let names = vec!["L".to_string(), "D".to_string(), "X".to_string()];
        let aut = TreeAutomaton::from_fn(
            alphabet(&["a"]),
            names,
            |_| 0,
            |_, p, q| if p == 2 || q == 2 { 2 } else { 1 },
            |q| q == 0 || q == 2,
        );
        let red = aut.reduce();
        assert_eq!(red.automaton.num_states(), 2);
        assert_eq!(red.kept, vec![0, 1]);
        assert!(red.automaton.is_reduced());
        assert_eq!(red.automaton.is_empty(), base.is_empty());
    }

    #[test]
    fn reduce_is_stable_on_reduced_input() {
        let c = a_cat();
        let r = c.reduce();
        assert_eq!(r.automaton.num_states(), c.num_states());
        assert_eq!(r.automaton.reduce().automaton.num_states(), r.automaton.num_states());
    }

    #[test]
    fn witness_examples() {
        let a = a_leaf().reduced();
        let l = a.state_by_name("L").unwrap();
        let d = a.state_by_name("D").unwrap();
        assert_eq!(a.witness_for_state(l).unwrap().tree, leaf());
        let w = a.witness_for_state(d).unwrap();
        assert_eq!(w.tree.height(), 1);
        assert_eq!(a.run(&w.tree).unwrap(), d);
    }

    #[test]
    fn witness_requires_reduced() {
        let raw = TreeAutomaton::new(alphabet(&["a"]), vec!["q".into()], vec![0], vec![0], vec![true]);
        assert_eq!(raw.witness_for_state(0), Err(Error::NotReduced));
        assert!(raw.reduced().witness_for_state(0).is_ok());
    }

    #[test]
    fn emptiness_examples() {
        let none = a_all().with_accepting(vec![false]);
        assert!(none.is_empty());
        assert!(!a_all().is_empty());
    }
}
