//! Presentation files: a header naming the domain and relation automata.
//!
//! ```text
//! presentation ord_omega
//! domain ord_omega.domain.ta
//! relation < 2 ord_omega.rel0.ta
//! ```
//!
//! Word presentations add `blockwidth K` and point at `.wa` files. Paths are
//! relative to the presentation file.

use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, ParseError, Result};
use crate::format::ta::{parse_relation_automaton, parse_tree_automaton, render_relation_automaton, render_tree_automaton, ParseOptions};
use crate::format::wa::{parse_code_automaton, parse_tuple_automaton, render_word_automaton};
use crate::presentation::{Relation, TreePresentation, WordPresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationEntry {
    pub name: String,
    pub arity: usize,
    pub file: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub name: String,
    pub block_width: Option<usize>,
    pub domain: String,
    pub relations: Vec<RelationEntry>,
}

pub fn parse_header(text: &str) -> Result<Header, ParseError> {
    let mut name = None;
    let mut block_width = None;
    let mut domain = None;
    let mut relations = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            [h, ..] if h.starts_with('#') => {}
            ["presentation", x] => name = Some(x.to_string()),
            ["domain", f] => domain = Some(f.to_string()),
            ["blockwidth", k] => {
                let k = k.parse::<usize>().ok().filter(|&k| k >= 1);
                block_width = Some(k.ok_or_else(|| ParseError::syntax(n, "block width must be a positive integer"))?);
            }
            ["relation", r, k, f] => {
                let arity = k.parse::<usize>().ok().filter(|&k| k >= 1);
                let arity = arity.ok_or_else(|| ParseError::syntax(n, "relation arity must be a positive integer"))?;
                relations.push(RelationEntry { name: r.to_string(), arity, file: f.to_string() });
            }
            _ => return Err(ParseError::syntax(n, format!("unrecognized line `{}`", line.trim()))),
        }
    }
    Ok(Header {
        name: name.ok_or_else(|| ParseError::syntax(0, "missing `presentation` line"))?,
        block_width,
        domain: domain.ok_or_else(|| ParseError::syntax(0, "missing `domain` line"))?,
        relations,
    })
}

pub fn render_header(h: &Header) -> String {
    let mut out = String::new();
    writeln!(out, "presentation {}", h.name).unwrap();
    if let Some(k) = h.block_width {
        writeln!(out, "blockwidth {k}").unwrap();
    }
    writeln!(out, "domain {}", h.domain).unwrap();
    for r in &h.relations {
        writeln!(out, "relation {} {} {}", r.name, r.arity, r.file).unwrap();
    }
    out
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T, ParseError>) -> Result<T> {
    r.map_err(|source| Error::File { path: path.display().to_string(), source })
}

fn sibling(base: &Path, file: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new("")).join(file)
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "presentation".into(), |s| s.to_string_lossy().into_owned())
}

pub fn load_tree_presentation(path: &Path, opts: ParseOptions) -> Result<TreePresentation> {
    let header = in_file(path, parse_header(&read(path)?))?;
    let dpath = sibling(path, &header.domain);
    let domain = in_file(&dpath, parse_tree_automaton(&read(&dpath)?, opts))?;
    let mut relations = Vec::new();
    for r in &header.relations {
        let rpath = sibling(path, &r.file);
        let (arity, a) = in_file(&rpath, parse_relation_automaton(&read(&rpath)?, opts))?;
        if arity != r.arity {
            return Err(Error::ArityMismatch { name: r.name.clone(), declared: r.arity, actual: arity });
        }
        relations.push(Relation::new(&r.name, arity, a));
    }
    TreePresentation::new(&header.name, domain, relations)
}

/// Writes `path` and, next to it, `<stem>.domain.ta` and `<stem>.rel<i>.ta`.
pub fn save_tree_presentation(p: &TreePresentation, path: &Path) -> Result<()> {
    let s = stem(path);
    let domain = format!("{s}.domain.ta");
    write(&sibling(path, &domain), &render_tree_automaton(&p.domain))?;
    let mut relations = Vec::new();
    for (i, r) in p.relations.iter().enumerate() {
        let file = format!("{s}.rel{i}.ta");
        write(&sibling(path, &file), &render_relation_automaton(&r.automaton))?;
        relations.push(RelationEntry { name: r.name.clone(), arity: r.arity, file });
    }
    write(path, &render_header(&Header { name: p.name.clone(), block_width: None, domain, relations }))
}

pub fn load_word_presentation(path: &Path) -> Result<WordPresentation> {
    let header = in_file(path, parse_header(&read(path)?))?;
    let k = header
        .block_width
        .ok_or_else(|| Error::File { path: path.display().to_string(), source: ParseError::syntax(0, "missing `blockwidth` line") })?;
    let dpath = sibling(path, &header.domain);
    let domain = in_file(&dpath, parse_code_automaton(&read(&dpath)?))?;
    let mut relations = Vec::new();
    for r in &header.relations {
        let rpath = sibling(path, &r.file);
        let a = in_file(&rpath, parse_tuple_automaton(&read(&rpath)?, r.arity))?;
        relations.push(Relation::new(&r.name, r.arity, a));
    }
    Ok(WordPresentation { name: header.name, block_width: k, domain, relations })
}

/// Writes `path` and, next to it, `<stem>.domain.wa` and `<stem>.rel<i>.wa`.
pub fn save_word_presentation(p: &WordPresentation, path: &Path) -> Result<()> {
    let s = stem(path);
    let domain = format!("{s}.domain.wa");
    write(&sibling(path, &domain), &render_word_automaton(&p.domain))?;
    let mut relations = Vec::new();
    for (i, r) in p.relations.iter().enumerate() {
        let file = format!("{s}.rel{i}.wa");
        write(&sibling(path, &file), &render_word_automaton(&r.automaton))?;
        relations.push(RelationEntry { name: r.name.clone(), arity: r.arity, file });
    }
    let header = Header { name: p.name.clone(), block_width: Some(p.block_width), domain, relations };
    write(path, &render_header(&header))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip() {
        let text = "presentation ord_omega\nblockwidth 2\ndomain d.wa\nrelation < 2 r.wa\n";
        let h = parse_header(text).unwrap();
        assert_eq!(h.block_width, Some(2));
        assert_eq!(h.relations[0], RelationEntry { name: "<".into(), arity: 2, file: "r.wa".into() });
        assert_eq!(render_header(&h), text);
        assert!(parse_header("domain d.ta\n").is_err());
        assert!(matches!(parse_header("presentation p\ndomain d\nrelation < 0 r\n"), Err(ParseError::Syntax { line: 3, .. })));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_tree_presentation(Path::new("/nonexistent/p.tap"), ParseOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }
}
