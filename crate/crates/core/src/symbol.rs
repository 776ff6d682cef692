//! Alphabet symbols and padded tuples.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::ParseError;

/// Rendering of the padding symbol inside tuples.
pub const BOX: &str = "_";

/// Anything usable as a node label or a word letter.
pub trait Label: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T> Label for T where T: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}

/// A user alphabet symbol: a nonempty string over `[A-Za-z0-9_]`, never the
/// reserved `_` rendering of BOX.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Result<Self, ParseError> {
        if name.is_empty() {
            return Err(ParseError::BadSymbol(name.to_string()));
        }
        if name == BOX || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ParseError::BadSymbol(name.to_string()));
        }
        Ok(Symbol(name.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Builds symbols from string literals. Panics on invalid names, so only
/// use it with known-good input.
pub fn sym(name: &str) -> Symbol {
    Symbol::new(name).expect("valid symbol literal")
}

pub fn alphabet(names: &[&str]) -> Vec<Symbol> {
    names.iter().map(|n| sym(n)).collect()
}

/// A fixed-length tuple whose components are either a letter or BOX
/// (`None`). Used both for convolution trees and convolution words.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Padded<S>(pub Vec<Option<S>>);

impl<S> Padded<S> {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_all_box(&self) -> bool {
        self.0.iter().all(Option::is_none)
    }

    pub fn lane(&self, i: usize) -> Option<&S> {
        self.0[i].as_ref()
    }
}

impl<S: fmt::Display> fmt::Display for Padded<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match c {
                Some(s) => write!(f, "{s}")?,
                None => f.write_str(BOX)?,
            }
        }
        Ok(())
    }
}

impl<S> Padded<S> {
    /// Parses `x,y,_` with `parse` applied to every non-BOX component.
    pub fn parse_with(
        text: &str,
        arity: usize,
        mut parse: impl FnMut(&str) -> Result<S, ParseError>,
    ) -> Result<Self, ParseError> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != arity {
            return Err(ParseError::ArityMismatch { expected: arity, found: parts.len(), symbol: text.to_string() });
        }
        let comps = parts
            .into_iter()
            .map(|p| if p == BOX { Ok(None) } else { parse(p).map(Some) })
            .collect::<Result<Vec<_>, _>>()?;
        let tuple = Padded(comps);
        if tuple.is_all_box() {
            return Err(ParseError::BadSymbol(text.to_string()));
        }
        Ok(tuple)
    }
}

/// Padded tuple of base symbols: the label alphabet of convolution trees.
pub type PaddedTuple = Padded<Symbol>;

/// All tuples over `base ∪ {BOX}` of the given arity except the all-BOX one,
/// in lexicographic order (BOX first).
pub fn padded_alphabet<S: Clone + Ord>(base: &[S], arity: usize) -> Vec<Padded<S>> {
    let mut choices: Vec<Option<S>> = vec![None];
    choices.extend(base.iter().cloned().map(Some));
    let mut out: Vec<Vec<Option<S>>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    let mut tuples: Vec<Padded<S>> = out.into_iter().map(Padded).filter(|t| !t.is_all_box()).collect();
    tuples.sort();
    tuples
}
