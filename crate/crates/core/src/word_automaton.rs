//! Nondeterministic finite word automata over arbitrary letter types.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::symbol::{Label, Padded};

pub type WState = usize;

#[derive(Clone, Debug)]
pub struct WordAutomaton<S> {
    alphabet: Vec<S>,
    index: HashMap<S, usize>,
    start: BTreeSet<WState>,
    accepting: Vec<bool>,
    /// Per state: `(letter index, target)` pairs, sorted and deduplicated.
    trans: Vec<Vec<(usize, WState)>>,
}

/// Result of [`equivalent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence<S> {
    Equal,
    /// A shortest word accepted by exactly one side.
    Counterexample(Vec<S>),
}

impl<S> Equivalence<S> {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equivalence::Equal)
    }
}

impl<S: Label> WordAutomaton<S> {
    /// An automaton with no states over `alphabet` (sorted, deduplicated).
    pub fn new(alphabet: Vec<S>) -> Self {
        let mut alphabet = alphabet;
        alphabet.sort();
        alphabet.dedup();
        let index = alphabet.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        WordAutomaton { alphabet, index, start: BTreeSet::new(), accepting: Vec::new(), trans: Vec::new() }
    }

    pub fn add_state(&mut self, accepting: bool) -> WState {
        self.accepting.push(accepting);
        self.trans.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn set_start(&mut self, q: WState) {
        assert!(q < self.num_states());
        self.start.insert(q);
    }

    pub fn set_accepting(&mut self, q: WState, accepting: bool) {
        self.accepting[q] = accepting;
    }

    pub fn add_edge(&mut self, p: WState, letter: usize, q: WState) {
        assert!(letter < self.alphabet.len() && p < self.num_states() && q < self.num_states());
        let row = &mut self.trans[p];
        if let Err(pos) = row.binary_search(&(letter, q)) {
            row.insert(pos, (letter, q));
        }
    }

    pub fn add_edge_sym(&mut self, p: WState, letter: &S, q: WState) -> Result<()> {
        let a = self.letter_index(letter).ok_or_else(|| Error::UnknownSymbol(letter.to_string()))?;
        self.add_edge(p, a, q);
        Ok(())
    }

    pub fn alphabet(&self) -> &[S] {
        &self.alphabet
    }

    pub fn letter_index(&self, a: &S) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    pub fn start_states(&self) -> impl Iterator<Item = WState> + '_ {
        self.start.iter().copied()
    }

    pub fn is_accepting(&self, q: WState) -> bool {
        self.accepting[q]
    }

    pub fn edges_from(&self, p: WState) -> &[(usize, WState)] {
        &self.trans[p]
    }

    fn step_set(&self, set: &BTreeSet<WState>, letter: usize) -> BTreeSet<WState> {
        let mut out = BTreeSet::new();
        for &p in set {
            let row = &self.trans[p];
            let lo = row.partition_point(|&(a, _)| a < letter);
            out.extend(row[lo..].iter().take_while(|&&(a, _)| a == letter).map(|&(_, q)| q));
        }
        out
    }

    pub fn accepts(&self, word: &[S]) -> bool {
        let mut cur = self.start.clone();
        for a in word {
            let Some(i) = self.letter_index(a) else { return false };
            cur = self.step_set(&cur, i);
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&q| self.accepting[q])
    }

    pub fn is_deterministic(&self) -> bool {
        self.start.len() == 1 && self.trans.iter().all(|row| row.windows(2).all(|w| w[0].0 != w[1].0))
    }

    pub fn is_complete(&self) -> bool {
        let k = self.alphabet.len();
        !self.start.is_empty() && self.trans.iter().all(|row| row.len() >= k && (0..k).all(|a| row.iter().any(|&(b, _)| a == b)))
    }

    /// Subset construction, materializing only reachable subsets. The empty
    /// subset is kept as a sink so the result is complete.
    pub fn determinize(&self) -> Self {
        let mut out = WordAutomaton::new(self.alphabet.clone());
        let mut ids: HashMap<BTreeSet<WState>, WState> = HashMap::new();
        let mut queue = VecDeque::new();
        let start = self.start.clone();
        let s = out.add_state(start.iter().any(|&q| self.accepting[q]));
        out.set_start(s);
        ids.insert(start.clone(), s);
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let from = ids[&set];
            for a in 0..self.alphabet.len() {
                let next = self.step_set(&set, a);
                let to = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = out.add_state(next.iter().any(|&q| self.accepting[q]));
                        ids.insert(next.clone(), id);
                        queue.push_back(next);
                        id
                    }
                };
                out.add_edge(from, a, to);
            }
        }
        out
    }

    /// Flips acceptance of a deterministic complete automaton.
    pub fn complement(&self) -> Result<Self> {
        if !self.is_deterministic() || !self.is_complete() {
            return Err(Error::ComplementOfNondeterministic);
        }
        let mut out = self.clone();
        for acc in &mut out.accepting {
            *acc = !*acc;
        }
        Ok(out)
    }

    /// Same language over a larger alphabet (letters outside the old one
    /// have no transitions).
    pub fn over_alphabet(&self, alphabet: &[S]) -> Self {
        let mut out = WordAutomaton::new(alphabet.iter().cloned().chain(self.alphabet.iter().cloned()).collect());
        for _ in 0..self.num_states() {
            out.add_state(false);
        }
        out.accepting = self.accepting.clone();
        out.start = self.start.clone();
        for (p, row) in self.trans.iter().enumerate() {
            for &(a, q) in row {
                let b = out.index[&self.alphabet[a]];
                out.add_edge(p, b, q);
            }
        }
        out
    }

    fn shared_alphabet(a: &Self, b: &Self) -> (Self, Self) {
        if a.alphabet == b.alphabet {
            return (a.clone(), b.clone());
        }
        let all: Vec<S> = a.alphabet.iter().chain(b.alphabet.iter()).cloned().collect();
        (a.over_alphabet(&all), b.over_alphabet(&all))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = Self::shared_alphabet(self, other);
        let mut out = WordAutomaton::new(a.alphabet.clone());
        let mut ids: HashMap<(WState, WState), WState> = HashMap::new();
        let mut queue = VecDeque::new();
        for p in a.start.iter().copied() {
            for q in b.start.iter().copied() {
                let id = out.add_state(a.accepting[p] && b.accepting[q]);
                out.set_start(id);
                ids.insert((p, q), id);
                queue.push_back((p, q));
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let from = ids[&(p, q)];
            for &(x, p2) in &a.trans[p] {
                for &(y, q2) in &b.trans[q] {
                    if x != y {
                        continue;
                    }
                    let to = *ids.entry((p2, q2)).or_insert_with(|| {
                        queue.push_back((p2, q2));
                        out.accepting.push(a.accepting[p2] && b.accepting[q2]);
                        out.trans.push(Vec::new());
                        out.accepting.len() - 1
                    });
                    out.add_edge(from, x, to);
                }
            }
        }
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let (a, b) = Self::shared_alphabet(self, other);
        let mut out = a.clone();
        let offset = out.num_states();
        for &acc in &b.accepting {
            out.add_state(acc);
        }
        for s in b.start.iter() {
            out.set_start(s + offset);
        }
        for (p, row) in b.trans.iter().enumerate() {
            for &(x, q) in row {
                out.add_edge(p + offset, x, q + offset);
            }
        }
        out
    }

    /// A shortest accepted word, if any.
    pub fn shortest_accepted(&self) -> Option<Vec<S>> {
        let mut prev: HashMap<WState, (WState, usize)> = HashMap::new();
        let mut queue: VecDeque<WState> = self.start.iter().copied().collect();
        let mut seen: Vec<bool> = vec![false; self.num_states()];
        for &s in &self.start {
            seen[s] = true;
        }
        while let Some(p) = queue.pop_front() {
            if self.accepting[p] {
                let mut word = Vec::new();
                let mut cur = p;
                while let Some(&(from, a)) = prev.get(&cur) {
                    word.push(self.alphabet[a].clone());
                    cur = from;
                }
                word.reverse();
                return Some(word);
            }
            for &(a, q) in &self.trans[p] {
                if !seen[q] {
                    seen[q] = true;
                    prev.insert(q, (p, a));
                    queue.push_back(q);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    /// Number of accepted words of each length `0..=max_len`.
    pub fn count_by_length(&self, max_len: usize) -> Vec<u128> {
        let dfa = if self.is_deterministic() { self.clone() } else { self.determinize() };
        let mut counts = Vec::with_capacity(max_len + 1);
        let mut weight: HashMap<WState, u128> = dfa.start.iter().map(|&q| (q, 1)).collect();
        for len in 0..=max_len {
            counts.push(weight.iter().filter(|(q, _)| dfa.accepting[**q]).map(|(_, w)| *w).sum());
            if len == max_len {
                break;
            }
            let mut next: HashMap<WState, u128> = HashMap::new();
            for (&p, &w) in &weight {
                for &(_, q) in &dfa.trans[p] {
                    *next.entry(q).or_default() += w;
                }
            }
            weight = next;
        }
        counts
    }

    /// All accepted words of length at most `max_len`, shortest first and
    /// then in alphabet order.
    pub fn accepted_words(&self, max_len: usize) -> Vec<Vec<S>> {
        let dfa = self.determinize().trim();
        let mut out = Vec::new();
        let mut layer: Vec<(WState, Vec<usize>)> = dfa.start.iter().map(|&q| (q, Vec::new())).collect();
        for len in 0..=max_len {
            for (q, w) in &layer {
                if dfa.accepting[*q] {
                    out.push(w.iter().map(|&a| dfa.alphabet[a].clone()).collect());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (p, w) in &layer {
                for &(a, q) in &dfa.trans[*p] {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push((q, w2));
                }
            }
            next.sort_by(|x, y| x.1.cmp(&y.1));
            layer = next;
        }
        out
    }

    /// Moore partition refinement. The input is determinized first when
    /// needed; unreachable states are dropped.
    pub fn minimize(&self) -> Self {
        let dfa = if self.is_deterministic() && self.is_complete() { self.clone() } else { self.determinize() };
        let n = dfa.num_states();
        let k = dfa.alphabet.len();
        let target = |p: WState, a: usize| -> WState { dfa.trans[p].iter().find(|&&(b, _)| b == a).expect("complete").1 };
        let mut class: Vec<usize> = dfa.accepting.iter().map(|&acc| acc as usize).collect();
        loop {
            let mut sig_ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for p in 0..n {
                let sig = (class[p], (0..k).map(|a| class[target(p, a)]).collect::<Vec<_>>());
                let fresh = sig_ids.len();
                next[p] = *sig_ids.entry(sig).or_insert(fresh);
            }
            let before = class.iter().collect::<BTreeSet<_>>().len();
            let after = sig_ids.len();
            class = next;
            if before == after {
                break;
            }
        }
        let start = *dfa.start.iter().next().expect("deterministic");
        // renumber reachable classes in BFS order
        let mut ids: HashMap<usize, WState> = HashMap::new();
        let mut out = WordAutomaton::new(dfa.alphabet.clone());
        let mut queue = VecDeque::from([start]);
        let s = out.add_state(dfa.accepting[start]);
        out.set_start(s);
        ids.insert(class[start], s);
        while let Some(p) = queue.pop_front() {
            let from = ids[&class[p]];
            for a in 0..k {
                let q = target(p, a);
                let to = match ids.get(&class[q]) {
                    Some(&id) => id,
                    None => {
                        let id = out.add_state(dfa.accepting[q]);
                        ids.insert(class[q], id);
                        queue.push_back(q);
                        id
                    }
                };
                out.add_edge(from, a, to);
            }
        }
        out
    }

    /// Relabels letters through an injective map.
    pub fn map_alphabet<M: Label>(&self, f: impl Fn(&S) -> M) -> WordAutomaton<M> {
        let mut out = WordAutomaton::new(self.alphabet.iter().map(&f).collect());
        for &acc in &self.accepting {
            out.add_state(acc);
        }
        out.start = self.start.clone();
        for (p, row) in self.trans.iter().enumerate() {
            for &(a, q) in row {
                let b = out.index[&f(&self.alphabet[a])];
                out.add_edge(p, b, q);
            }
        }
        out
    }

    /// Drops states that are unreachable or cannot reach acceptance.
    pub fn trim(&self) -> Self {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        let mut stack: Vec<WState> = self.start.iter().copied().collect();
        for &s in &stack {
            fwd[s] = true;
        }
        while let Some(p) = stack.pop() {
            for &(_, q) in &self.trans[p] {
                if !fwd[q] {
                    fwd[q] = true;
                    stack.push(q);
                }
            }
        }
        let mut rev: Vec<Vec<WState>> = vec![Vec::new(); n];
        for (p, row) in self.trans.iter().enumerate() {
            for &(_, q) in row {
                rev[q].push(p);
            }
        }
        let mut bwd = vec![false; n];
        let mut stack: Vec<WState> = (0..n).filter(|&q| self.accepting[q]).collect();
        for &s in &stack {
            bwd[s] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !bwd[p] {
                    bwd[p] = true;
                    stack.push(p);
                }
            }
        }
        let keep: Vec<WState> = (0..n).filter(|&q| fwd[q] && bwd[q]).collect();
        let mut renum = vec![usize::MAX; n];
        let mut out = WordAutomaton::new(self.alphabet.clone());
        for &q in &keep {
            renum[q] = out.add_state(self.accepting[q]);
        }
        for &s in &self.start {
            if renum[s] != usize::MAX {
                out.set_start(renum[s]);
            }
        }
        for &p in &keep {
            for &(a, q) in &self.trans[p] {
                if renum[q] != usize::MAX {
                    out.add_edge(renum[p], a, renum[q]);
                }
            }
        }
        out
    }
}

/// Shortest word accepted by exactly one of `a`, `b`, found breadth-first
/// over pairs of reachable subsets.
pub fn equivalent<S: Label>(a: &WordAutomaton<S>, b: &WordAutomaton<S>) -> Equivalence<S> {
    match distinguish(a, b, |x, y| x != y) {
        Some(w) => Equivalence::Counterexample(w),
        None => Equivalence::Equal,
    }
}

/// `None` if `L(a) ⊆ L(b)`, else a shortest word in `L(a) \ L(b)`.
pub fn inclusion_counterexample<S: Label>(a: &WordAutomaton<S>, b: &WordAutomaton<S>) -> Option<Vec<S>> {
    distinguish(a, b, |x, y| x && !y)
}

fn distinguish<S: Label>(a: &WordAutomaton<S>, b: &WordAutomaton<S>, bad: impl Fn(bool, bool) -> bool) -> Option<Vec<S>> {
    let (a, b) = WordAutomaton::shared_alphabet(a, b);
    type Pair = (BTreeSet<WState>, BTreeSet<WState>);
    let accept = |m: &WordAutomaton<S>, s: &BTreeSet<WState>| s.iter().any(|&q| m.accepting[q]);
    let start: Pair = (a.start.clone(), b.start.clone());
    let mut prev: HashMap<Pair, Option<(Pair, usize)>> = HashMap::new();
    prev.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        if bad(accept(&a, &pair.0), accept(&b, &pair.1)) {
            let mut word = Vec::new();
            let mut cur = pair;
            while let Some(Some((p, x))) = prev.get(&cur).cloned() {
                word.push(a.alphabet[x].clone());
                cur = p;
            }
            word.reverse();
            return Some(word);
        }
        for x in 0..a.alphabet.len() {
            let next = (a.step_set(&pair.0, x), b.step_set(&pair.1, x));
            if next.0.is_empty() && next.1.is_empty() {
                continue;
            }
            if !prev.contains_key(&next) {
                prev.insert(next.clone(), Some((pair.clone(), x)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Column-wise superposition of words; shorter words are padded with BOX.
pub fn convolve_words<S: Clone>(words: &[Vec<S>]) -> Vec<Padded<S>> {
    assert!(!words.is_empty(), "convolution needs at least one word");
    let len = words.iter().map(Vec::len).max().unwrap_or(0);
    (0..len).map(|j| Padded(words.iter().map(|w| w.get(j).cloned()).collect())).collect()
}

/// Inverse of [`convolve_words`]: strips the BOX suffix of every lane.
/// Returns `None` if some lane has a letter after BOX.
pub fn unconvolve_words<S: Clone>(word: &[Padded<S>], arity: usize) -> Option<Vec<Vec<S>>> {
    let mut lanes: Vec<Vec<S>> = vec![Vec::new(); arity];
    let mut ended = vec![false; arity];
    for col in word {
        if col.arity() != arity {
            return None;
        }
        for (i, c) in col.0.iter().enumerate() {
            match c {
                Some(x) if !ended[i] => lanes[i].push(x.clone()),
                Some(_) => return None,
                None => ended[i] = true,
            }
        }
    }
    Some(lanes)
}
