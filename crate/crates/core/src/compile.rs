//! Compilation of tree automata over thin trees into word automata over
//! their level encodings.
//!
//! Both constructions read a code word block by block while carrying the
//! states that the tree automaton must reach at the nodes of the current
//! level, in left-to-right order. Reading a node's letter either checks `ι`
//! (leaf) or guesses a split `δ(a, p0, p1) = s` (inner node) and appends
//! `p0 p1` to the next level's list. Because the children of the `s`-th
//! inner node are the `(2s-1)`-th and `2s`-th nodes of the next level, the
//! in-order concatenation of guessed pairs is exactly the next level.
//!
//! States are materialized lazily, breadth-first from the start states,
//! under a hard budget.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use crate::encoding::{code_alphabet, shape_automaton, CodeSymbol};
use crate::error::{Error, Result};
use crate::symbol::{padded_alphabet, Label, Padded, PaddedTuple, Symbol};
use crate::tree::Position;
use crate::tree_automaton::{State, TreeAutomaton};
use crate::word_automaton::WordAutomaton;

/// Default cap on the number of materialized states of a compiled automaton.
pub const DEFAULT_BUDGET: usize = 500_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "PRESSLIM_BUDGET";

pub fn budget_from_env() -> usize {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Letter of a compiled relation automaton: one code letter or BOX per lane.
pub type CodeTuple = Padded<CodeSymbol>;

fn materialize<St, S>(
    alphabet: Vec<S>,
    starts: Vec<St>,
    accepting: impl Fn(&St) -> bool,
    mut step: impl FnMut(&St, &S) -> Result<Vec<St>>,
    budget: usize,
) -> Result<WordAutomaton<S>>
where
    St: Clone + Eq + Hash,
    S: Label,
{
    let mut out = WordAutomaton::new(alphabet);
    let letters: Vec<S> = out.alphabet().to_vec();
    let mut ids: HashMap<St, usize> = HashMap::new();
    let mut states: Vec<St> = Vec::new();
    let mut intern = |st: St, out: &mut WordAutomaton<S>, states: &mut Vec<St>| -> Result<usize> {
        if let Some(&id) = ids.get(&st) {
            return Ok(id);
        }
        if states.len() >= budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let id = out.add_state(accepting(&st));
        ids.insert(st.clone(), id);
        states.push(st);
        Ok(id)
    };
    for st in starts {
        let id = intern(st, &mut out, &mut states)?;
        out.set_start(id);
    }
    let mut cursor = 0;
    while cursor < states.len() {
        let st = states[cursor].clone();
        for (x, letter) in letters.iter().enumerate() {
            for next in step(&st, letter)? {
                let to = intern(next, &mut out, &mut states)?;
                out.add_edge(cursor, x, to);
            }
        }
        cursor += 1;
    }
    Ok(out)
}

/// `ι` and `δ` inverted: which symbols make a leaf with a given state and
/// which child pairs an inner node with a given symbol and state can have.
struct Inverse {
    leaf: Vec<Vec<bool>>,
    inner: Vec<Vec<Vec<(State, State)>>>,
}

impl Inverse {
    fn new<L: Label>(a: &TreeAutomaton<L>) -> Self {
        let n = a.num_states();
        let k = a.alphabet().len();
        let mut leaf = vec![vec![false; n]; k];
        let mut inner = vec![vec![Vec::new(); n]; k];
        for s in 0..k {
            leaf[s][a.init(s)] = true;
            for p in 0..n {
                for q in 0..n {
                    inner[s][a.delta(s, p, q)].push((p, q));
                }
            }
        }
        Inverse { leaf, inner }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum DomainState {
    Block { pending: Vec<State>, offset: usize, next: Vec<State> },
    Done,
}

/// Word automaton accepting `{ encode(t, k) : t ∈ L(a) }`.
///
/// Fails with [`Error::FatDomain`] if some accepted tree is thicker than `k`.
pub fn compile_domain(a: &TreeAutomaton, k: usize, budget: usize) -> Result<WordAutomaton<CodeSymbol>> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let a = a.reduced();
    let inv = Inverse::new(&a);
    let starts = a
        .accepting_states()
        .into_iter()
        .map(|q| DomainState::Block { pending: vec![q], offset: 0, next: Vec::new() })
        .collect();
    let step = |st: &DomainState, x: &CodeSymbol| -> Result<Vec<DomainState>> {
        let DomainState::Block { pending, offset, next } = st else { return Ok(Vec::new()) };
        let mut nexts: Vec<Vec<State>> = Vec::new();
        match (x, *offset < pending.len()) {
            (CodeSymbol::Pad, false) => nexts.push(next.clone()),
            (CodeSymbol::Pair(sym, inner), true) => {
                let Some(s) = a.symbol_index(sym) else { return Ok(Vec::new()) };
                let target = pending[*offset];
                if !inner {
                    if inv.leaf[s][target] {
                        nexts.push(next.clone());
                    }
                } else {
                    for &(p0, p1) in &inv.inner[s][target] {
                        if next.len() + 2 > k {
                            return Err(Error::FatDomain(k));
                        }
                        let mut n2 = next.clone();
                        n2.extend([p0, p1]);
                        nexts.push(n2);
                    }
                }
            }
            _ => {}
        }
        Ok(nexts
            .into_iter()
            .map(|n2| {
                if offset + 1 < k {
                    DomainState::Block { pending: pending.clone(), offset: offset + 1, next: n2 }
                } else if n2.is_empty() {
                    DomainState::Done
                } else {
                    DomainState::Block { pending: n2, offset: 0, next: Vec::new() }
                }
            })
            .collect())
    };
    let m = materialize(code_alphabet(a.alphabet()), starts, |s| *s == DomainState::Done, step, budget)?;
    Ok(m.trim())
}

/// Bookkeeping attached to every pending node; `()` for plain compilation,
/// [`Position`] for instrumented runs.
pub trait NodeTag: Clone + Eq + Hash {
    fn root() -> Self;
    fn child(&self, right: bool) -> Self;
}

impl NodeTag for () {
    fn root() -> Self {}
    fn child(&self, _: bool) -> Self {}
}

impl NodeTag for Position {
    fn root() -> Self {
        Position::root()
    }
    fn child(&self, right: bool) -> Self {
        Position::child(self, right)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Split {
    Open,
    Leaf,
    Inner(State, State),
}

/// One node of the union domain on the current level.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SimEntry<T> {
    /// Bit `i` set iff lane `i` has a node here.
    pub lanes: u32,
    /// State the relation automaton must reach here.
    pub target: State,
    /// Letters read so far for this node, by lane (index into the base
    /// alphabet); cleared once the node is resolved.
    letters: Vec<Option<u16>>,
    /// Bit `i` set iff lane `i` reported a child bit of 1.
    child_bits: u32,
    split: Split,
    pub tag: T,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SimState<T> {
    Block { entries: Vec<SimEntry<T>>, column: usize },
    Done,
}

impl<T> SimState<T> {
    pub fn entries(&self) -> &[SimEntry<T>] {
        match self {
            SimState::Block { entries, .. } => entries,
            SimState::Done => &[],
        }
    }

    pub fn column(&self) -> Option<usize> {
        match self {
            SimState::Block { column, .. } => Some(*column),
            SimState::Done => None,
        }
    }
}

/// The n-lane level simulation behind [`compile_relation`].
pub struct RelationSim {
    automaton: TreeAutomaton<PaddedTuple>,
    inv: Inverse,
    base: Vec<Symbol>,
    arity: usize,
    k: usize,
}

impl RelationSim {
    pub fn new(a: &TreeAutomaton<PaddedTuple>, arity: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidK);
        }
        if arity == 0 || arity > 32 {
            return Err(Error::ArityMismatch { name: String::new(), declared: arity, actual: arity });
        }
        if let Some(bad) = a.alphabet().iter().find(|t| t.arity() != arity) {
            return Err(Error::ArityMismatch { name: String::new(), declared: arity, actual: bad.arity() });
        }
        let automaton = a.reduced();
        let inv = Inverse::new(&automaton);
        let base: BTreeSet<Symbol> = automaton.alphabet().iter().flat_map(|t| t.0.iter().flatten().cloned()).collect();
        Ok(RelationSim { automaton, inv, base: base.into_iter().collect(), arity, k })
    }

    pub fn base(&self) -> &[Symbol] {
        &self.base
    }

    /// Every tuple over code letters and BOX except all-BOX.
    pub fn word_alphabet(&self) -> Vec<CodeTuple> {
        padded_alphabet(&code_alphabet(&self.base), self.arity)
    }

    pub fn starts<T: NodeTag>(&self) -> Vec<SimState<T>> {
        let all = if self.arity == 32 { u32::MAX } else { (1u32 << self.arity) - 1 };
        self.automaton
            .accepting_states()
            .into_iter()
            .map(|q| SimState::Block {
                entries: vec![SimEntry {
                    lanes: all,
                    target: q,
                    letters: vec![None; self.arity],
                    child_bits: 0,
                    split: Split::Open,
                    tag: T::root(),
                }],
                column: 0,
            })
            .collect()
    }

    /// Successors of `st` on one tuple column. Inconsistent input yields no
    /// successors.
    pub fn step<T: NodeTag>(&self, st: &SimState<T>, x: &CodeTuple) -> Vec<SimState<T>> {
        let SimState::Block { entries, column } = st else { return Vec::new() };
        let column = *column;
        if x.arity() != self.arity {
            return Vec::new();
        }
        let mut entries = entries.clone();
        // lane-wise matching of the column against the lane's r-th node
        for lane in 0..self.arity {
            let bit = 1u32 << lane;
            let slot = entries.iter().enumerate().filter(|(_, e)| e.lanes & bit != 0).map(|(i, _)| i).nth(column);
            let present = entries.iter().any(|e| e.lanes & bit != 0);
            match (&x.0[lane], slot) {
                (None, _) if !present => {}
                (Some(CodeSymbol::Pad), None) if present => {}
                (Some(CodeSymbol::Pair(a, c)), Some(i)) => {
                    let Ok(idx) = self.base.binary_search(a) else { return Vec::new() };
                    entries[i].letters[lane] = Some(idx as u16);
                    if *c {
                        entries[i].child_bits |= bit;
                    }
                }
                _ => return Vec::new(),
            }
        }
        // resolve every node whose lanes have all been read
        let mut partial: Vec<Vec<SimEntry<T>>> = vec![entries];
        let len = partial[0].len();
        for i in 0..len {
            let e = partial[0][i].clone();
            if e.split != Split::Open || (0..self.arity).any(|l| e.lanes & (1 << l) != 0 && e.letters[l].is_none()) {
                continue;
            }
            let label = Padded(
                (0..self.arity)
                    .map(|l| if e.lanes & (1 << l) != 0 { Some(self.base[e.letters[l].unwrap() as usize].clone()) } else { None })
                    .collect(),
            );
            let Some(s) = self.automaton.symbol_index(&label) else { return Vec::new() };
            let splits: Vec<Split> = if e.child_bits == 0 {
                if self.inv.leaf[s][e.target] {
                    vec![Split::Leaf]
                } else {
                    Vec::new()
                }
            } else {
                self.inv.inner[s][e.target].iter().map(|&(p, q)| Split::Inner(p, q)).collect()
            };
            if splits.is_empty() {
                return Vec::new();
            }
            partial = partial
                .into_iter()
                .flat_map(|base| {
                    splits.iter().map(move |&sp| {
                        let mut b = base.clone();
                        b[i].split = sp;
                        b[i].letters.iter_mut().for_each(|l| *l = None);
                        b
                    })
                })
                .collect();
        }
        partial.into_iter().filter_map(|entries| self.advance(entries, column)).collect()
    }

    fn advance<T: NodeTag>(&self, entries: Vec<SimEntry<T>>, column: usize) -> Option<SimState<T>> {
        if column + 1 < self.k {
            return Some(SimState::Block { entries, column: column + 1 });
        }
        let mut next = Vec::new();
        for e in &entries {
            match e.split {
                Split::Open => return None,
                Split::Leaf => {}
                Split::Inner(p, q) => {
                    for (right, target) in [(false, p), (true, q)] {
                        next.push(SimEntry {
                            lanes: e.child_bits,
                            target,
                            letters: vec![None; self.arity],
                            child_bits: 0,
                            split: Split::Open,
                            tag: e.tag.child(right),
                        });
                    }
                }
            }
        }
        // no lane may hold more than k nodes on one level
        for lane in 0..self.arity {
            if next.iter().filter(|e| e.lanes & (1 << lane) != 0).count() > self.k {
                return None;
            }
        }
        Some(if next.is_empty() { SimState::Done } else { SimState::Block { entries: next, column: 0 } })
    }

    /// Runs the simulation on one word, returning for some accepting run the
    /// pending entries at the start of every block.
    pub fn trace(&self, word: &[CodeTuple]) -> Option<Vec<Vec<SimEntry<Position>>>> {
        fn go(
            sim: &RelationSim,
            st: SimState<Position>,
            word: &[CodeTuple],
            levels: &mut Vec<Vec<SimEntry<Position>>>,
        ) -> bool {
            let at_block_start = st.column() == Some(0);
            if at_block_start {
                levels.push(st.entries().to_vec());
            }
            let ok = match word.split_first() {
                None => st == SimState::Done,
                Some((x, rest)) => sim.step(&st, x).into_iter().any(|n| go(sim, n, rest, levels)),
            };
            if !ok && at_block_start {
                levels.pop();
            }
            ok
        }
        self.starts::<Position>().into_iter().find_map(|st| {
            let mut levels = Vec::new();
            go(self, st, word, &mut levels).then_some(levels)
        })
    }
}

/// Word automaton accepting `{ ⊗(encode(t1, k), …, encode(tn, k)) : ⊗(t1, …, tn) ∈ L(a) }`
/// for tuples whose lanes all have thickness at most `k`.
pub fn compile_relation(
    a: &TreeAutomaton<PaddedTuple>,
    arity: usize,
    k: usize,
    budget: usize,
) -> Result<WordAutomaton<CodeTuple>> {
    let sim = RelationSim::new(a, arity, k)?;
    let m = materialize(
        sim.word_alphabet(),
        sim.starts::<()>(),
        |s| *s == SimState::Done,
        |st, x| Ok(sim.step(st, x)),
        budget,
    )?;
    Ok(m.trim())
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Lane {
    Absent,
    At(State),
}

/// Restricts a relation automaton to tuples of domain elements: the result
/// accepts `⊗t̄` iff `a` does and every `ti` is in `L(domain)`. It also
/// rejects trees that are not convolutions.
pub fn restrict_to_domain(
    a: &TreeAutomaton<PaddedTuple>,
    domain: &TreeAutomaton,
    arity: usize,
) -> TreeAutomaton<PaddedTuple> {
    type St = Option<(State, Vec<Lane>)>;
    let dom_letter = |x: &Symbol| domain.symbol_index(x);
    let alphabet = a.alphabet().to_vec();
    TreeAutomaton::explore(
        alphabet,
        |x: &PaddedTuple| -> St {
            let s = a.symbol_index(x)?;
            let lanes = x
                .0
                .iter()
                .map(|c| match c {
                    None => Some(Lane::Absent),
                    Some(sym) => dom_letter(sym).map(|d| Lane::At(domain.init(d))),
                })
                .collect::<Option<Vec<_>>>()?;
            Some((a.init(s), lanes))
        },
        |x, l, r| -> St {
            let (lq, ll) = l.as_ref()?;
            let (rq, rl) = r.as_ref()?;
            let s = a.symbol_index(x)?;
            let mut lanes = Vec::with_capacity(arity);
            for i in 0..arity {
                lanes.push(match (&x.0[i], &ll[i], &rl[i]) {
                    (None, Lane::Absent, Lane::Absent) => Lane::Absent,
                    (Some(sym), Lane::Absent, Lane::Absent) => Lane::At(domain.init(dom_letter(sym)?)),
                    (Some(sym), Lane::At(p), Lane::At(q)) => Lane::At(domain.delta(dom_letter(sym)?, *p, *q)),
                    _ => return None,
                });
            }
            Some((a.delta(s, *lq, *rq), lanes))
        },
        |st| match st {
            None => false,
            Some((q, lanes)) => {
                a.is_accepting(*q) && lanes.iter().all(|l| matches!(l, Lane::At(d) if domain.is_accepting(*d)))
            }
        },
        |st| match st {
            None => "sink".to_string(),
            Some((q, lanes)) => {
                let ls: Vec<String> = lanes
                    .iter()
                    .map(|l| match l {
                        Lane::Absent => "_".to_string(),
                        Lane::At(d) => domain.state_name(*d).to_string(),
                    })
                    .collect();
                format!("{}.{}", a.state_name(*q), ls.join("."))
            }
        },
    )
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum LaneRun {
    Run(usize),
    Ended,
}

/// Deterministic automaton over code tuples accepting exactly the
/// convolutions of `arity` valid codes of block width `k`.
pub fn lanes_shape_automaton(base: &[Symbol], arity: usize, k: usize) -> WordAutomaton<CodeTuple> {
    let shape = shape_automaton(base, k);
    let start = shape.start_states().next().expect("deterministic");
    let next = |q: usize, x: &CodeSymbol| -> usize {
        let i = shape.letter_index(x).expect("letter in shape alphabet");
        shape.edges_from(q).iter().find(|&&(b, _)| b == i).expect("complete").1
    };
    let alphabet = padded_alphabet(&code_alphabet(base), arity);
    type St = Option<Vec<LaneRun>>;
    let m = materialize(
        alphabet,
        vec![Some(vec![LaneRun::Run(start); arity])],
        |st: &St| match st {
            None => false,
            Some(lanes) => lanes.iter().all(|l| match l {
                LaneRun::Ended => true,
                LaneRun::Run(q) => shape.is_accepting(*q),
            }),
        },
        |st: &St, x: &CodeTuple| -> Result<Vec<St>> {
            let Some(lanes) = st else { return Ok(vec![None]) };
            let mut out = Vec::with_capacity(arity);
            for (lane, c) in lanes.iter().zip(&x.0) {
                out.push(match (lane, c) {
                    (LaneRun::Run(q), Some(sym)) => LaneRun::Run(next(*q, sym)),
                    (LaneRun::Run(q), None) if shape.is_accepting(*q) => LaneRun::Ended,
                    (LaneRun::Ended, None) => LaneRun::Ended,
                    _ => return Ok(vec![None]),
                });
            }
            Ok(vec![Some(out)])
        },
        usize::MAX,
    )
    .expect("unbounded budget");
    m
}
