//! Finite binary labeled trees.
//!
//! Every node has either zero or two children, so the domain of a tree is a
//! prefix-closed set of bit strings where `u0` is present iff `u1` is.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, ParseError};
use crate::symbol::{Label, Padded, Symbol};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree<L = Symbol> {
    label: L,
    children: Option<Arc<(Tree<L>, Tree<L>)>>,
}

/// Address of a node: the bit string of left (`false`) / right (`true`) turns
/// from the root.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(pub Vec<bool>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, right: bool) -> Self {
        let mut bits = self.0.clone();
        bits.push(right);
        Position(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        if text == "ε" {
            return Ok(Position::root());
        }
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ParseError::Sexp(format!("bad position `{text}`"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "{self}")
        }
    }
}

impl<L> Tree<L> {
    pub fn leaf(label: L) -> Self {
        Tree { label, children: None }
    }

    pub fn node(label: L, left: Tree<L>, right: Tree<L>) -> Self {
        Tree { label, children: Some(Arc::new((left, right))) }
    }

    pub fn label(&self) -> &L {
        &self.label
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn children(&self) -> Option<(&Tree<L>, &Tree<L>)> {
        self.children.as_deref().map(|(l, r)| (l, r))
    }

    pub fn child(&self, right: bool) -> Option<&Tree<L>> {
        self.children().map(|(l, r)| if right { r } else { l })
    }

    pub fn height(&self) -> usize {
        match self.children() {
            None => 0,
            Some((l, r)) => 1 + l.height().max(r.height()),
        }
    }

    /// Number of nodes on each level, from the root down to the deepest level.
    pub fn level_widths(&self) -> Vec<usize> {
        let mut widths = Vec::new();
        let mut level: Vec<&Tree<L>> = vec![self];
        while !level.is_empty() {
            widths.push(level.len());
            level = level.iter().filter_map(|t| t.children()).flat_map(|(l, r)| [l, r]).collect();
        }
        widths
    }

    /// Maximal number of nodes on a single level.
    pub fn thickness(&self) -> usize {
        self.level_widths().into_iter().max().unwrap_or(1)
    }

    pub fn size(&self) -> usize {
        match self.children() {
            None => 1,
            Some((l, r)) => 1 + l.size() + r.size(),
        }
    }

    pub fn get(&self, pos: &Position) -> Option<&Tree<L>> {
        let mut cur = self;
        for &bit in &pos.0 {
            cur = cur.child(bit)?;
        }
        Some(cur)
    }

    pub fn contains(&self, pos: &Position) -> bool {
        self.get(pos).is_some()
    }

    /// Positions of level `level` in lexicographic order (left before right).
    pub fn level_nodes(&self, level: usize) -> Vec<Position> {
        let mut frontier: Vec<(Position, &Tree<L>)> = vec![(Position::root(), self)];
        for _ in 0..level {
            frontier = frontier
                .into_iter()
                .filter_map(|(p, t)| t.children().map(|(l, r)| [(p.child(false), l), (p.child(true), r)]))
                .flatten()
                .collect();
            if frontier.is_empty() {
                break;
            }
        }
        frontier.into_iter().map(|(p, _)| p).collect()
    }

    /// All positions of the domain, level by level.
    pub fn positions(&self) -> Vec<Position> {
        (0..=self.height()).flat_map(|l| self.level_nodes(l)).collect()
    }

    pub fn map<M>(&self, f: &mut impl FnMut(&L) -> M) -> Tree<M> {
        let label = f(&self.label);
        match self.children() {
            None => Tree::leaf(label),
            Some((l, r)) => {
                let l = l.map(f);
                let r = r.map(f);
                Tree::node(label, l, r)
            }
        }
    }
}

impl<L: Clone> Tree<L> {
    /// The subtree rooted at `pos`.
    pub fn subtree(&self, pos: &Position) -> Result<Tree<L>, Error> {
        self.get(pos).cloned().ok_or_else(|| Error::PositionNotInDomain(format!("{pos:?}")))
    }

    /// Labels of level `level` in lexicographic order, paired with whether
    /// the node has children.
    pub fn level_labels(&self, level: usize) -> Vec<(L, bool)> {
        self.level_nodes(level)
            .iter()
            .map(|p| {
                let t = self.get(p).expect("level position in domain");
                (t.label.clone(), !t.is_leaf())
            })
            .collect()
    }
}

/// Superposes trees over a shared domain union; absent positions carry BOX.
pub fn convolve_trees<L: Clone>(trees: &[Tree<L>]) -> Tree<Padded<L>> {
    assert!(!trees.is_empty(), "convolution needs at least one tree");
    let parts: Vec<Option<&Tree<L>>> = trees.iter().map(Some).collect();
    convolve_rec(&parts)
}

fn convolve_rec<L: Clone>(parts: &[Option<&Tree<L>>]) -> Tree<Padded<L>> {
    let label = Padded(parts.iter().map(|p| p.map(|t| t.label.clone())).collect());
    let any_inner = parts.iter().any(|p| p.is_some_and(|t| !t.is_leaf()));
    if !any_inner {
        return Tree::leaf(label);
    }
    let side = |right: bool| -> Vec<Option<&Tree<L>>> { parts.iter().map(|p| p.and_then(|t| t.child(right))).collect() };
    let left = convolve_rec(&side(false));
    let right = convolve_rec(&side(true));
    Tree::node(label, left, right)
}

/// Recovers lane `lane` of a convolution by dropping BOX positions. Returns
/// `None` when the lane is absent at the root or the lane positions do not
/// form a tree domain.
pub fn project_lane<L: Clone>(conv: &Tree<Padded<L>>, lane: usize) -> Option<Tree<L>> {
    let label = conv.label.0.get(lane)?.clone()?;
    match conv.children() {
        None => Some(Tree::leaf(label)),
        Some((l, r)) => {
            let lp = l.label.0[lane].is_some();
            let rp = r.label.0[lane].is_some();
            match (lp, rp) {
                (false, false) => {
                    if subtree_has_lane(l, lane) || subtree_has_lane(r, lane) {
                        None
                    } else {
                        Some(Tree::leaf(label))
                    }
                }
                (true, true) => Some(Tree::node(label, project_lane(l, lane)?, project_lane(r, lane)?)),
                _ => None,
            }
        }
    }
}

fn subtree_has_lane<L>(t: &Tree<Padded<L>>, lane: usize) -> bool {
    t.label.0[lane].is_some() || t.children().is_some_and(|(l, r)| subtree_has_lane(l, lane) || subtree_has_lane(r, lane))
}

impl<L: fmt::Display> fmt::Display for Tree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.children() {
            None => write!(f, "{}", self.label),
            Some((l, r)) => write!(f, "({} {} {})", self.label, l, r),
        }
    }
}

impl<L: fmt::Debug> fmt::Debug for Tree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.children() {
            None => write!(f, "{:?}", self.label),
            Some((l, r)) => write!(f, "({:?} {:?} {:?})", self.label, l, r),
        }
    }
}

impl<L: Label> Tree<L> {
    pub fn to_sexp(&self) -> String {
        self.to_string()
    }
}

impl Tree<Symbol> {
    /// Parses the S-expression form: leaf `a`, inner node `(a L R)`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let tree = parse_tokens(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(ParseError::Sexp(format!("trailing input after tree: `{}`", tokens[pos..].join(" "))));
        }
        Ok(tree)
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, ParseError> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    if tokens.is_empty() {
        return Err(ParseError::Sexp("empty input".into()));
    }
    Ok(tokens)
}

fn parse_tokens(tokens: &[String], pos: &mut usize) -> Result<Tree<Symbol>, ParseError> {
    let tok = tokens.get(*pos).ok_or_else(|| ParseError::Sexp("unexpected end of input".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let label_tok = tokens.get(*pos).ok_or_else(|| ParseError::Sexp("missing label".into()))?;
            if label_tok == "(" || label_tok == ")" {
                return Err(ParseError::Sexp("expected a label after `(`".into()));
            }
            let label = Symbol::new(label_tok)?;
            *pos += 1;
            let left = parse_tokens(tokens, pos)?;
            let right = parse_tokens(tokens, pos)?;
            match tokens.get(*pos).map(String::as_str) {
                Some(")") => {
                    *pos += 1;
                    Ok(Tree::node(label, left, right))
                }
                _ => Err(ParseError::Sexp("inner node must have exactly two children".into())),
            }
        }
        ")" => Err(ParseError::Sexp("unbalanced `)`".into())),
        name => Ok(Tree::leaf(Symbol::new(name)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t_ex;
    use crate::symbol::sym;

    fn leaf(a: &str) -> Tree {
        Tree::leaf(sym(a))
    }

    fn full(h: usize) -> Tree {
        if h == 0 {
            leaf("a")
        } else {
            Tree::node(sym("a"), full(h - 1), full(h - 1))
        }
    }

    fn left_comb(h: usize) -> Tree {
        (0..h).fold(leaf("a"), |t, _| Tree::node(sym("a"), t, leaf("a")))
    }

    #[test]
    fn thickness_examples() {
        assert_eq!(t_ex().thickness(), 4);
        assert_eq!(leaf("a").thickness(), 1);
        assert_eq!(full(3).thickness(), 8);
    }

    #[test]
    fn height_examples() {
        assert_eq!(leaf("a").height(), 0);
        assert_eq!(t_ex().height(), 3);
        assert_eq!(left_comb(5).height(), 5);
    }

    #[test]
    fn subtree_examples() {
        let t = t_ex();
        assert_eq!(t.subtree(&Position::root()).unwrap(), t);
        assert_eq!(t.subtree(&Position::parse("1").unwrap()).unwrap().to_string(), "(c b a)");
        assert!(matches!(t.subtree(&Position::parse("111").unwrap()), Err(Error::PositionNotInDomain(_))));
    }

    #[test]
    fn level_nodes_examples() {
        assert_eq!(leaf("a").level_nodes(0), vec![Position::root()]);
        let t = t_ex();
        let show = |l| t.level_nodes(l).iter().map(|p| p.to_string()).collect::<Vec<_>>();
        assert_eq!(show(2), ["00", "01", "10", "11"]);
        assert_eq!(show(3), ["010", "011"]);
        assert!(t.level_nodes(4).is_empty());
    }

    #[test]
    fn convolution_examples() {
        let t = t_ex();
        let one = convolve_trees(std::slice::from_ref(&t));
        assert_eq!(one.map(&mut |p: &Padded<Symbol>| p.0[0].clone().unwrap()), t);

        let diag = convolve_trees(&[t.clone(), t.clone()]);
        assert_eq!(diag.positions(), t.positions());
        assert!(diag.positions().iter().all(|p| {
            let l = diag.get(p).unwrap().label();
            l.0[0] == l.0[1] && l.0[0].is_some()
        }));

        let h1 = Tree::node(sym("b"), leaf("c"), leaf("c"));
        let c = convolve_trees(&[leaf("a"), h1]);
        assert_eq!(c.to_string(), "(a,b _,c _,c)");
    }

    #[test]
    fn sexp_round_trip() {
        let text = "(a (b c (b a c)) (c b a))";
        let t = Tree::parse(text).unwrap();
        assert_eq!(t, t_ex());
        assert_eq!(t.to_string(), text);
        assert!(Tree::parse("(a b)").is_err());
        assert!(Tree::parse("(a b c d)").is_err());
        assert!(Tree::parse("a b").is_err());
        assert!(Tree::parse("(_ a b)").is_err());
        assert!(Tree::parse("(# a b)").is_err());
    }
}
