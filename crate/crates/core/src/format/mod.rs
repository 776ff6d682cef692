//! Text formats for automata and presentations.

pub mod pres;
pub mod ta;
pub mod wa;

pub use pres::{load_tree_presentation, load_word_presentation, save_tree_presentation, save_word_presentation};
pub use ta::{parse_relation_automaton, parse_tree_automaton, render_relation_automaton, render_tree_automaton, ParseOptions};
pub use wa::{parse_code_automaton, parse_tuple_automaton, render_word_automaton};
