//! Line-based word automaton files.
//!
//! ```text
//! walphabet # a/0 a/1
//! states q0 q1
//! start q0
//! edge q0 a/0 q1
//! final q1
//! ```
//!
//! `#` is the padding letter, so only lines that start with `#` are
//! comments.

use std::collections::HashMap;
use std::fmt::Write;

use crate::compile::CodeTuple;
use crate::encoding::CodeSymbol;
use crate::error::ParseError;
use crate::symbol::{Label, Padded};
use crate::word_automaton::WordAutomaton;

pub fn parse_word_automaton<S: Label>(
    text: &str,
    parse: impl Fn(&str) -> Result<S, ParseError>,
) -> Result<WordAutomaton<S>, ParseError> {
    let mut alphabet: Option<Vec<S>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut starts = Vec::new();
    let mut edges = Vec::new();
    let mut finals = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some((&head, rest)) = toks.split_first() else { continue };
        if head.starts_with('#') {
            continue;
        }
        match head {
            "walphabet" => {
                if alphabet.is_some() {
                    return Err(ParseError::syntax(n, "duplicate `walphabet` line"));
                }
                alphabet = Some(rest.iter().map(|s| parse(s)).collect::<Result<_, _>>()?);
            }
            "states" => {
                if states.is_some() {
                    return Err(ParseError::syntax(n, "duplicate `states` line"));
                }
                states = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            "start" => starts.extend(rest.iter().map(|s| s.to_string())),
            "final" => finals.extend(rest.iter().map(|s| s.to_string())),
            "edge" => match rest {
                [p, a, q] => edges.push((p.to_string(), a.to_string(), q.to_string())),
                _ => return Err(ParseError::syntax(n, "expected `edge <state> <symbol> <state>`")),
            },
            other => return Err(ParseError::syntax(n, format!("unknown directive `{other}`"))),
        }
    }
    let alphabet = alphabet.ok_or_else(|| ParseError::syntax(0, "missing `walphabet` line"))?;
    let names = states.ok_or_else(|| ParseError::syntax(0, "missing `states` line"))?;
    let mut out = WordAutomaton::new(alphabet);
    let mut ids: HashMap<&str, usize> = HashMap::new();
    for q in &names {
        if ids.insert(q, out.add_state(false)).is_some() {
            return Err(ParseError::Conflict(format!("state `{q}` declared twice")));
        }
    }
    let state = |q: &str| ids.get(q).copied().ok_or_else(|| ParseError::UnknownState(q.to_string()));
    for q in &starts {
        out.set_start(state(q)?);
    }
    for q in &finals {
        out.set_accepting(state(q)?, true);
    }
    for (p, a, q) in &edges {
        let x = parse(a)?;
        let ix = out.letter_index(&x).ok_or_else(|| ParseError::UnknownSymbol(a.clone()))?;
        out.add_edge(state(p)?, ix, state(q)?);
    }
    Ok(out)
}

pub fn parse_code_automaton(text: &str) -> Result<WordAutomaton<CodeSymbol>, ParseError> {
    parse_word_automaton(text, CodeSymbol::parse)
}

pub fn parse_tuple_automaton(text: &str, arity: usize) -> Result<WordAutomaton<CodeTuple>, ParseError> {
    parse_word_automaton(text, |s| Padded::parse_with(s, arity, CodeSymbol::parse))
}

/// States are written as `q0`, `q1`, ... in index order.
pub fn render_word_automaton<S: Label>(a: &WordAutomaton<S>) -> String {
    let mut out = String::new();
    let letters: Vec<String> = a.alphabet().iter().map(|s| s.to_string()).collect();
    writeln!(out, "walphabet {}", letters.join(" ")).unwrap();
    let n = a.num_states();
    let names: Vec<String> = (0..n).map(|q| format!("q{q}")).collect();
    writeln!(out, "states {}", names.join(" ")).unwrap();
    let starts: Vec<&str> = a.start_states().map(|q| names[q].as_str()).collect();
    writeln!(out, "start {}", starts.join(" ")).unwrap();
    for p in 0..n {
        for &(x, q) in a.edges_from(p) {
            writeln!(out, "edge {} {} {}", names[p], letters[x], names[q]).unwrap();
        }
    }
    let fin: Vec<&str> = (0..n).filter(|&q| a.is_accepting(q)).map(|q| names[q].as_str()).collect();
    writeln!(out, "final {}", fin.join(" ")).unwrap();
    out.lines().map(str::trim_end).collect::<Vec<_>>().join("\n") + "\n"
}
