//! Seeded random tree automata for differential testing.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::slim::{decide_slim, exact_max_thickness, StateGraph, Thickness};
use crate::symbol::{Symbol, sym};
use crate::tree_automaton::TreeAutomaton;

#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub max_states: usize,
    pub max_symbols: usize,
    /// Probability that a transition goes to the last state. When positive,
    /// that state is an absorbing, rejecting sink, which makes slim
    /// languages common.
    pub sink_bias: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { max_states: 5, max_symbols: 2, sink_bias: 0.0 }
    }
}

/// A total automaton with random tables and a nonempty accepting set.
pub fn random_automaton<R: Rng>(rng: &mut R, spec: RandomSpec) -> TreeAutomaton {
    let n = rng.gen_range(1..=spec.max_states);
    let s = rng.gen_range(1..=spec.max_symbols);
    let alphabet: Vec<Symbol> = ["a", "b", "c", "d"][..s].iter().map(|x| sym(x)).collect();
    let names = (0..n).map(|i| format!("q{i}")).collect();
    let sink = n - 1;
    let pick = |rng: &mut R| {
        if n > 1 && rng.gen_bool(spec.sink_bias) { sink } else { rng.gen_range(0..n) }
    };
    let init = (0..s).map(|_| pick(rng)).collect();
    let absorbing = n > 1 && spec.sink_bias > 0.0;
    let mut delta = Vec::with_capacity(s * n * n);
    for _ in 0..s {
        for p in 0..n {
            for q in 0..n {
                let r = pick(rng);
                delta.push(if absorbing && (p == sink || q == sink) { sink } else { r });
            }
        }
    }
    let mut accepting: Vec<bool> = (0..n).map(|q| (q != sink || n == 1) && rng.gen_bool(0.5)).collect();
    if !accepting.contains(&true) {
        let q = if n > 1 { rng.gen_range(0..n - 1) } else { 0 };
        accepting[q] = true;
    }
    TreeAutomaton::new(alphabet, names, init, delta, accepting)
}

/// Random reduced automata with nonempty language, drawn from `seed`.
pub fn random_reduced(seed: u64, count: usize, spec: RandomSpec) -> Vec<TreeAutomaton> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let red = random_automaton(&mut rng, spec).reduced();
        if red.num_states() > 0 && !red.is_empty() {
            out.push(red);
        }
    }
    out
}

/// Random reduced automata whose language is slim (or fat, per `slim`).
pub fn random_with_verdict(seed: u64, count: usize, slim: bool) -> Vec<TreeAutomaton> {
    let spec = RandomSpec { sink_bias: if slim { 0.7 } else { 0.0 }, ..RandomSpec::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let red = random_automaton(&mut rng, spec).reduced();
        if red.num_states() > 0 && !red.is_empty() && decide_slim(&red).is_slim() == slim {
            out.push(red);
        }
    }
    out
}

/// Random reduced slim automata with an infinite language containing a tree
/// of thickness at least 2.
pub fn random_slim_infinite(seed: u64, count: usize) -> Vec<TreeAutomaton> {
    let spec = RandomSpec { sink_bias: 0.5, ..RandomSpec::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let red = random_automaton(&mut rng, spec).reduced();
        if red.num_states() == 0 || red.is_empty() {
            continue;
        }
        let v = decide_slim(&red);
        if !v.is_slim() {
            continue;
        }
        let g = StateGraph::analyze(&red).expect("reduced");
        let infinite = red.accepting_states().into_iter().any(|q| g.infinite_state(q));
        let wide = matches!(exact_max_thickness(&red, v.bound as usize), Ok(Thickness::Exact(k)) if k >= 2);
        if infinite && wide {
            out.push(red);
        }
    }
    out
}
