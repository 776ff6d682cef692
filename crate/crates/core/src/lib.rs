//! Slim tree-automatic presentations and their compilation to word-automatic ones.

pub mod compile;
pub mod encoding;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod par;
pub mod presentation;
pub mod random;
pub mod slim;
pub mod symbol;
pub mod tree;
pub mod tree_automaton;
pub mod verify;
pub mod word_automaton;

pub use error::{Error, ParseError, Result};
pub use symbol::{Padded, PaddedTuple, Symbol};
pub use tree::{Position, Tree};
pub use tree_automaton::TreeAutomaton;
pub use word_automaton::WordAutomaton;
