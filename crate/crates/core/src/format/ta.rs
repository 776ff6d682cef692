//! Line-based tree automaton files.
//!
//! ```text
//! # left combs
//! alphabet a
//! states L C D
//! init a -> L
//! trans a L L -> C
//! ...
//! final L C
//! ```
//!
//! With `arity n` the symbols in `init` and `trans` lines are tuples over the
//! declared alphabet, such as `a,_`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use crate::error::ParseError;
use crate::symbol::{padded_alphabet, Label, PaddedTuple, Symbol};
use crate::tree_automaton::TreeAutomaton;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Route missing `init`/`trans` entries to a fresh rejecting state
    /// instead of failing.
    pub complete_with_sink: bool,
}

#[derive(Clone, Debug)]
pub enum TaFile {
    Plain(TreeAutomaton),
    Tuple { arity: usize, automaton: TreeAutomaton<PaddedTuple> },
}

#[derive(Default)]
struct Raw {
    alphabet: Option<Vec<Symbol>>,
    arity: Option<usize>,
    states: Option<Vec<String>>,
    init: Vec<(usize, String, String)>,
    trans: Vec<(usize, String, String, String, String)>,
    finals: Vec<(usize, String)>,
}

fn once<T>(slot: &mut Option<T>, value: T, line: usize, what: &str) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(ParseError::syntax(line, format!("duplicate `{what}` line")));
    }
    *slot = Some(value);
    Ok(())
}

fn scan(text: &str) -> Result<Raw, ParseError> {
    let mut raw = Raw::default();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some((&head, rest)) = toks.split_first() else { continue };
        match head {
            "alphabet" => {
                let syms = rest.iter().map(|s| Symbol::new(s)).collect::<Result<Vec<_>, _>>()?;
                if syms.is_empty() {
                    return Err(ParseError::syntax(n, "empty alphabet"));
                }
                once(&mut raw.alphabet, syms, n, "alphabet")?;
            }
            "arity" => {
                let k = match rest {
                    [k] => k.parse::<usize>().ok().filter(|&k| k >= 1),
                    _ => None,
                };
                let k = k.ok_or_else(|| ParseError::syntax(n, "expected `arity <n>` with n >= 1"))?;
                once(&mut raw.arity, k, n, "arity")?;
            }
            "states" => {
                if rest.is_empty() {
                    return Err(ParseError::syntax(n, "no states declared"));
                }
                once(&mut raw.states, rest.iter().map(|s| s.to_string()).collect(), n, "states")?;
            }
            "init" => match rest {
                [a, "->", q] => raw.init.push((n, a.to_string(), q.to_string())),
                _ => return Err(ParseError::syntax(n, "expected `init <symbol> -> <state>`")),
            },
            "trans" => match rest {
                [a, p, q, "->", r] => raw.trans.push((n, a.to_string(), p.to_string(), q.to_string(), r.to_string())),
                _ => return Err(ParseError::syntax(n, "expected `trans <symbol> <state> <state> -> <state>`")),
            },
            "final" => raw.finals.extend(rest.iter().map(|q| (n, q.to_string()))),
            other => return Err(ParseError::syntax(n, format!("unknown directive `{other}`"))),
        }
    }
    Ok(raw)
}

fn build<L: Label>(
    raw: Raw,
    alphabet: Vec<L>,
    parse: impl Fn(&str) -> Result<L, ParseError>,
    opts: ParseOptions,
) -> Result<TreeAutomaton<L>, ParseError> {
    let mut names = raw.states.ok_or_else(|| ParseError::syntax(0, "missing `states` line"))?;
    let mut ids: HashMap<String, usize> = HashMap::new();
    for (i, q) in names.iter().enumerate() {
        if ids.insert(q.clone(), i).is_some() {
            return Err(ParseError::Conflict(format!("state `{q}` declared twice")));
        }
    }
    let sym_ix: HashMap<&L, usize> = alphabet.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let symbol = |text: &str| -> Result<usize, ParseError> {
        let a = parse(text)?;
        sym_ix.get(&a).copied().ok_or_else(|| ParseError::UnknownSymbol(text.to_string()))
    };
    let state = |q: &str| ids.get(q).copied().ok_or_else(|| ParseError::UnknownState(q.to_string()));

    let s = alphabet.len();
    let n = names.len();
    let mut init: Vec<Option<usize>> = vec![None; s];
    for (_, a, q) in &raw.init {
        let (a_ix, q) = (symbol(a)?, state(q)?);
        if init[a_ix].is_some_and(|old| old != q) {
            return Err(ParseError::Conflict(format!("init {a}")));
        }
        init[a_ix] = Some(q);
    }
    let mut delta: Vec<Option<usize>> = vec![None; s * n * n];
    for (_, a, p, q, r) in &raw.trans {
        let i = (symbol(a)? * n + state(p)?) * n + state(q)?;
        let r_ix = state(r)?;
        if delta[i].is_some_and(|old| old != r_ix) {
            return Err(ParseError::Conflict(format!("trans {a} {p} {q}")));
        }
        delta[i] = Some(r_ix);
    }
    let mut accepting = vec![false; n];
    for (_, q) in &raw.finals {
        accepting[state(q)?] = true;
    }

    let complete = init.iter().chain(&delta).all(Option::is_some);
    if complete {
        let init = init.into_iter().map(Option::unwrap).collect();
        let delta = delta.into_iter().map(Option::unwrap).collect();
        return Ok(TreeAutomaton::new(alphabet, names, init, delta, accepting));
    }
    if !opts.complete_with_sink {
        let missing = if let Some(a) = init.iter().position(Option::is_none) {
            format!("init {}", alphabet[a])
        } else {
            let i = delta.iter().position(Option::is_none).expect("some entry missing");
            format!("trans {} {} {}", alphabet[i / (n * n)], names[i / n % n], names[i % n])
        };
        return Err(ParseError::Partial(missing));
    }
    let mut sink = "sink".to_string();
    while ids.contains_key(&sink) {
        sink.push('_');
    }
    names.push(sink);
    let m = n + 1;
    let init = init.into_iter().map(|q| q.unwrap_or(n)).collect();
    let mut full = vec![n; s * m * m];
    for a in 0..s {
        for p in 0..n {
            for q in 0..n {
                if let Some(r) = delta[(a * n + p) * n + q] {
                    full[(a * m + p) * m + q] = r;
                }
            }
        }
    }
    accepting.push(false);
    Ok(TreeAutomaton::new(alphabet, names, init, full, accepting))
}

pub fn parse_ta(text: &str, opts: ParseOptions) -> Result<TaFile, ParseError> {
    let mut raw = scan(text)?;
    let base = raw.alphabet.take().ok_or_else(|| ParseError::syntax(0, "missing `alphabet` line"))?;
    match raw.arity {
        None => Ok(TaFile::Plain(build(raw, base, Symbol::new, opts)?)),
        Some(k) => {
            let tuples = padded_alphabet(&base, k);
            let parse = |s: &str| PaddedTuple::parse_with(s, k, Symbol::new);
            Ok(TaFile::Tuple { arity: k, automaton: build(raw, tuples, parse, opts)? })
        }
    }
}

pub fn parse_tree_automaton(text: &str, opts: ParseOptions) -> Result<TreeAutomaton, ParseError> {
    match parse_ta(text, opts)? {
        TaFile::Plain(a) => Ok(a),
        TaFile::Tuple { .. } => Err(ParseError::syntax(0, "expected a plain automaton, found an `arity` line")),
    }
}

pub fn parse_relation_automaton(text: &str, opts: ParseOptions) -> Result<(usize, TreeAutomaton<PaddedTuple>), ParseError> {
    match parse_ta(text, opts)? {
        TaFile::Tuple { arity, automaton } => Ok((arity, automaton)),
        TaFile::Plain(_) => Err(ParseError::syntax(0, "relation automaton needs an `arity` line")),
    }
}

fn render_body<L: Label>(out: &mut String, a: &TreeAutomaton<L>) {
    writeln!(out, "states {}", a.state_names().join(" ")).unwrap();
    for (i, s) in a.alphabet().iter().enumerate() {
        writeln!(out, "init {s} -> {}", a.state_name(a.init(i))).unwrap();
    }
    let n = a.num_states();
    for (i, s) in a.alphabet().iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                let r = a.delta(i, p, q);
                writeln!(out, "trans {s} {} {} -> {}", a.state_name(p), a.state_name(q), a.state_name(r)).unwrap();
            }
        }
    }
    let fin: Vec<&str> = a.accepting_states().into_iter().map(|q| a.state_name(q)).collect();
    if fin.is_empty() {
        out.push_str("final\n");
    } else {
        writeln!(out, "final {}", fin.join(" ")).unwrap();
    }
}

pub fn render_tree_automaton(a: &TreeAutomaton) -> String {
    let mut out = String::new();
    let names: Vec<String> = a.alphabet().iter().map(|s| s.to_string()).collect();
    writeln!(out, "alphabet {}", names.join(" ")).unwrap();
    render_body(&mut out, a);
    out
}

pub fn render_relation_automaton(a: &TreeAutomaton<PaddedTuple>) -> String {
    let base: BTreeSet<&Symbol> = a.alphabet().iter().flat_map(|t| t.0.iter().flatten()).collect();
    let arity = a.alphabet().first().map_or(1, |t| t.arity());
    let mut out = String::new();
    let names: Vec<String> = base.iter().map(|s| s.to_string()).collect();
    writeln!(out, "alphabet {}", names.join(" ")).unwrap();
    writeln!(out, "arity {arity}").unwrap();
    render_body(&mut out, a);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a_cat, a_spine_lt};
    use crate::tree::Tree;

    #[test]
    fn round_trip_plain() {
        let a = a_cat();
        let text = render_tree_automaton(&a);
        let b = parse_tree_automaton(&text, ParseOptions::default()).unwrap();
        assert_eq!(render_tree_automaton(&b), text);
        let t = Tree::parse("(a (a a a) a)").unwrap();
        assert_eq!(a.accepts(&t).unwrap(), b.accepts(&t).unwrap());
    }

    #[test]
    fn round_trip_relation() {
        let a = a_spine_lt();
        let text = render_relation_automaton(&a);
        let (k, b) = parse_relation_automaton(&text, ParseOptions::default()).unwrap();
        assert_eq!(k, 2);
        assert_eq!(render_relation_automaton(&b), text);
        assert!(text.contains("trans _,a TL TL -> TC"));
    }

    const PARTIAL: &str = "# only leaves\nalphabet a\nstates L\ninit a -> L\nfinal L\n";

    #[test]
    fn partial_tables() {
        assert_eq!(
            parse_tree_automaton(PARTIAL, ParseOptions::default()).unwrap_err(),
            ParseError::Partial("trans a L L".into())
        );
        let a = parse_tree_automaton(PARTIAL, ParseOptions { complete_with_sink: true }).unwrap();
        assert_eq!(a.state_names(), ["L", "sink"]);
        assert!(a.accepts(&Tree::parse("a").unwrap()).unwrap());
        assert!(!a.accepts(&Tree::parse("(a a a)").unwrap()).unwrap());
    }

    #[test]
    fn errors_are_reported() {
        let bad = |t: &str| parse_tree_automaton(t, ParseOptions { complete_with_sink: true }).unwrap_err();
        assert!(matches!(bad("alphabet a\nstates q\ninit b -> q\n"), ParseError::UnknownSymbol(_)));
        assert!(matches!(bad("alphabet a\nstates q\ninit a -> r\n"), ParseError::UnknownState(_)));
        assert!(matches!(bad("alphabet a\nstates q r\ninit a -> q\ninit a -> r\n"), ParseError::Conflict(_)));
        assert!(matches!(bad("alphabet a\nstates q\nfoo\n"), ParseError::Syntax { line: 3, .. }));
        assert!(matches!(bad("alphabet a!\n"), ParseError::BadSymbol(_)));
        let t = "alphabet a\narity 2\nstates q\ninit a -> q\n";
        assert!(matches!(parse_ta(t, ParseOptions { complete_with_sink: true }).unwrap_err(), ParseError::ArityMismatch { .. }));
    }
}
