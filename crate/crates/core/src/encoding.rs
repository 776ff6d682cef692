//! Level-by-level encoding of thin trees as words.
//!
//! A tree of thickness at most `K` and height `m` becomes `m + 1` blocks of
//! `K` letters. Block `ℓ` lists the labels of level `ℓ` from left to right,
//! each paired with a child bit (1 for inner nodes), then pads with `#` up
//! to width `K`. The children of the `s`-th inner node of a level are the
//! `(2s-1)`-th and `2s`-th nodes of the next level, which is what makes the
//! encoding invertible.

use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::symbol::Symbol;
use crate::tree::Tree;
use crate::word_automaton::WordAutomaton;

/// A letter of the code alphabet `Σ × {0,1} ∪ {#}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CodeSymbol {
    Pair(Symbol, bool),
    Pad,
}

pub const PAD: &str = "#";

impl CodeSymbol {
    pub fn pair(a: &Symbol, inner: bool) -> Self {
        CodeSymbol::Pair(a.clone(), inner)
    }

    pub fn child_bit(&self) -> Option<bool> {
        match self {
            CodeSymbol::Pair(_, c) => Some(*c),
            CodeSymbol::Pad => None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        if text == PAD {
            return Ok(CodeSymbol::Pad);
        }
        let (a, c) = text.rsplit_once('/').ok_or_else(|| ParseError::BadSymbol(text.to_string()))?;
        let bit = match c {
            "0" => false,
            "1" => true,
            _ => return Err(ParseError::BadSymbol(text.to_string())),
        };
        Ok(CodeSymbol::Pair(Symbol::new(a)?, bit))
    }
}

impl fmt::Display for CodeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSymbol::Pair(a, c) => write!(f, "{a}/{}", *c as u8),
            CodeSymbol::Pad => f.write_str(PAD),
        }
    }
}

impl fmt::Debug for CodeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The code alphabet over `base`, sorted.
pub fn code_alphabet(base: &[Symbol]) -> Vec<CodeSymbol> {
    let mut v: Vec<CodeSymbol> = base.iter().flat_map(|a| [CodeSymbol::pair(a, false), CodeSymbol::pair(a, true)]).collect();
    v.push(CodeSymbol::Pad);
    v.sort();
    v.dedup();
    v
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CodeWord {
    pub symbols: Vec<CodeSymbol>,
    pub block_width: usize,
}

impl CodeWord {
    pub fn blocks(&self) -> impl Iterator<Item = &[CodeSymbol]> {
        self.symbols.chunks(self.block_width)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Parses the space-separated rendering.
    pub fn parse(text: &str, block_width: usize) -> Result<Self, ParseError> {
        let symbols = text.split_whitespace().map(CodeSymbol::parse).collect::<Result<Vec<_>, _>>()?;
        Ok(CodeWord { symbols, block_width })
    }
}

impl fmt::Display for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// The first shape condition a word breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Length is zero or not a multiple of the block width.
    Length { len: usize, block_width: usize },
    /// (a): a block is not a nonempty run of pairs followed by padding.
    BlockShape { block: usize },
    /// (b)-first: the root block must hold exactly one node.
    FirstBlock { found: usize },
    /// (b)-step: a block must hold twice as many nodes as there are inner
    /// nodes in the block before it.
    Step { block: usize, expected: usize, found: usize },
    /// (b)-last: the last block must contain only leaves.
    LastBlock { block: usize, inner: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Length { len, block_width } => {
                write!(f, "length {len} is not a positive multiple of block width {block_width}")
            }
            Violation::BlockShape { block } => write!(f, "(a) block {block}: pairs must form a nonempty prefix followed by padding"),
            Violation::FirstBlock { found } => write!(f, "(b)-first: root block has {found} nodes, expected 1"),
            Violation::Step { block, expected, found } => {
                write!(f, "(b)-step: block {block} has {found} nodes, expected {expected}")
            }
            Violation::LastBlock { block, inner } => write!(f, "(b)-last: final block {block} has {inner} inner nodes"),
        }
    }
}

/// Encodes `t` with block width `k`.
pub fn encode(t: &Tree, k: usize) -> Result<CodeWord> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let thickness = t.thickness();
    if thickness > k {
        return Err(Error::ThicknessExceedsK { thickness, k });
    }
    let mut symbols = Vec::with_capacity((t.height() + 1) * k);
    let mut level: Vec<&Tree> = vec![t];
    while !level.is_empty() {
        for node in &level {
            symbols.push(CodeSymbol::pair(node.label(), !node.is_leaf()));
        }
        symbols.extend(std::iter::repeat_n(CodeSymbol::Pad, k - level.len()));
        level = level.iter().filter_map(|n| n.children()).flat_map(|(l, r)| [l, r]).collect();
    }
    Ok(CodeWord { symbols, block_width: k })
}

/// Checks the block conditions on `w`, reporting the first violation.
pub fn check_code(w: &[CodeSymbol], k: usize) -> Result<(), Violation> {
    if k == 0 || w.is_empty() || !w.len().is_multiple_of(k) {
        return Err(Violation::Length { len: w.len(), block_width: k });
    }
    let mut expected = 1;
    let mut inner = 0;
    for (block, chunk) in w.chunks(k).enumerate() {
        let s = chunk.iter().take_while(|x| **x != CodeSymbol::Pad).count();
        if s == 0 || chunk[s..].iter().any(|x| *x != CodeSymbol::Pad) {
            return Err(Violation::BlockShape { block });
        }
        if s != expected {
            return Err(if block == 0 {
                Violation::FirstBlock { found: s }
            } else {
                Violation::Step { block, expected, found: s }
            });
        }
        inner = chunk[..s].iter().filter(|x| x.child_bit() == Some(true)).count();
        expected = 2 * inner;
    }
    if inner != 0 {
        return Err(Violation::LastBlock { block: w.len() / k - 1, inner });
    }
    Ok(())
}

pub fn is_valid_code(w: &[CodeSymbol], k: usize) -> bool {
    check_code(w, k).is_ok()
}

/// Inverse of [`encode`] on valid codes.
///
/// One left-to-right pass assigns each non-padding letter its parent: the
/// letter at offset `2s + d` of block `ℓ + 1` is child `d` of the `s`-th
/// (0-based) inner node of block `ℓ`. The tree is then assembled bottom-up.
pub fn decode(w: &CodeWord) -> Result<Tree> {
    let k = w.block_width;
    check_code(&w.symbols, k).map_err(Error::InvalidShape)?;
    // per level: (label, is_inner)
    let levels: Vec<Vec<(&Symbol, bool)>> = w
        .blocks()
        .map(|b| {
            b.iter()
                .filter_map(|x| match x {
                    CodeSymbol::Pair(a, c) => Some((a, *c)),
                    CodeSymbol::Pad => None,
                })
                .collect()
        })
        .collect();
    let mut below: Vec<Tree> = Vec::new();
    for level in levels.iter().rev() {
        let mut kids = below.into_iter();
        let mut built = Vec::with_capacity(level.len());
        for &(a, inner) in level {
            if inner {
                let l = kids.next().expect("validated child count");
                let r = kids.next().expect("validated child count");
                built.push(Tree::node(a.clone(), l, r));
            } else {
                built.push(Tree::leaf(a.clone()));
            }
        }
        below = built;
    }
    Ok(below.into_iter().next().expect("validated root block"))
}

/// Deterministic complete automaton accepting exactly the valid codes of
/// block width `k` over `base`.
///
/// A live state records how many pairs the current block must hold, the
/// offset inside the block, and how many inner nodes the block has shown.
pub fn shape_automaton(base: &[Symbol], k: usize) -> WordAutomaton<CodeSymbol> {
    assert!(k >= 1, "block width must be positive");
    let alphabet = code_alphabet(base);
    let mut m = WordAutomaton::new(alphabet.clone());
    // (required, offset, inner) with required in 1..=k, offset in 0..k, inner <= offset
    let mut ids = std::collections::HashMap::new();
    let dead = m.add_state(false);
    let done = m.add_state(true);
    let mut live = Vec::new();
    for required in 1..=k {
        for offset in 0..k {
            for inner in 0..=offset.min(required) {
                let id = m.add_state(false);
                ids.insert((required, offset, inner), id);
                live.push((required, offset, inner));
            }
        }
    }
    m.set_start(ids[&(1, 0, 0)]);
    for (letter, sym) in alphabet.iter().enumerate() {
        m.add_edge(dead, letter, dead);
        m.add_edge(done, letter, dead);
        for &(required, offset, inner) in &live {
            let from = ids[&(required, offset, inner)];
            let ok = match sym {
                CodeSymbol::Pair(..) => offset < required,
                CodeSymbol::Pad => offset >= required,
            };
            let inner2 = inner + (sym.child_bit() == Some(true)) as usize;
            let to = if !ok {
                dead
            } else if offset + 1 < k {
                ids[&(required, offset + 1, inner2)]
            } else if inner2 == 0 {
                done
            } else if 2 * inner2 <= k {
                ids[&(2 * inner2, 0, 0)]
            } else {
                dead
            };
            m.add_edge(from, letter, to);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t_ex;
    use crate::symbol::{alphabet, sym};

    const T_EX_CODE: &str = "a/1 # # # # b/1 c/1 # # # c/0 b/1 b/0 a/0 # a/0 c/0 # # #";

    fn word(text: &str) -> Vec<CodeSymbol> {
        CodeWord::parse(text, 1).unwrap().symbols
    }

    #[test]
    fn encode_example_tree() {
        let w = encode(&t_ex(), 5).unwrap();
        assert_eq!(w.to_string(), T_EX_CODE);
        assert_eq!(encode(&Tree::leaf(sym("a")), 3).unwrap().to_string(), "a/0 # #");
    }

    #[test]
    fn encode_rejects_thick_tree() {
        assert_eq!(encode(&t_ex(), 3), Err(Error::ThicknessExceedsK { thickness: 4, k: 3 }));
        assert_eq!(encode(&t_ex(), 0), Err(Error::InvalidK));
    }

    #[test]
    fn decode_example() {
        let w = CodeWord::parse(T_EX_CODE, 5).unwrap();
        assert_eq!(decode(&w).unwrap(), t_ex());
        let leaf = CodeWord::parse("a/0 # #", 3).unwrap();
        assert_eq!(decode(&leaf).unwrap(), Tree::leaf(sym("a")));
    }

    #[test]
    fn violations_name_the_clause() {
        assert_eq!(check_code(&word(T_EX_CODE), 5), Ok(()));
        assert_eq!(check_code(&word("# a/0 #"), 3), Err(Violation::BlockShape { block: 0 }));
        assert_eq!(check_code(&word("a/1 # #"), 3), Err(Violation::LastBlock { block: 0, inner: 1 }));
        assert_eq!(check_code(&word("a/0 a/0 #"), 3), Err(Violation::FirstBlock { found: 2 }));
        assert_eq!(
            check_code(&word("a/1 # # a/0 # #"), 3),
            Err(Violation::Step { block: 1, expected: 2, found: 1 })
        );
        assert_eq!(check_code(&[], 3), Err(Violation::Length { len: 0, block_width: 3 }));
        assert_eq!(check_code(&word("a/0 #"), 3), Err(Violation::Length { len: 2, block_width: 3 }));
        let bad = CodeWord::parse("a/1 # #", 3).unwrap();
        assert_eq!(decode(&bad), Err(Error::InvalidShape(Violation::LastBlock { block: 0, inner: 1 })));
    }

    #[test]
    fn shape_automaton_basics() {
        let m = shape_automaton(&alphabet(&["a", "b", "c"]), 5);
        assert!(m.is_deterministic() && m.is_complete());
        assert!(m.accepts(&word(T_EX_CODE)));
        assert!(!m.accepts(&[]));
        assert!(!m.accepts(&word("# a/0 # # #")));
    }

    #[test]
    fn code_symbol_parse() {
        assert_eq!(CodeSymbol::parse("a/1").unwrap(), CodeSymbol::pair(&sym("a"), true));
        assert_eq!(CodeSymbol::parse("#").unwrap(), CodeSymbol::Pad);
        assert!(CodeSymbol::parse("a/2").is_err());
        assert!(CodeSymbol::parse("a").is_err());
        assert!(CodeSymbol::parse("_/0").is_err());
    }
}
