//! Differential checks of a word presentation against its tree source, and
//! sanity checks for presented orders.

use std::collections::HashSet;

use serde::Serialize;

use crate::compile::CodeTuple;
use crate::encoding::{encode, CodeSymbol};
use crate::enumerate::{enumerate_trees, EnumerationSpec};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::presentation::{TreePresentation, WordPresentation};
use crate::slim::{decide_slim, exact_max_thickness, Thickness};
use crate::symbol::PaddedTuple;
use crate::tree::{convolve_trees, Tree};
use crate::tree_automaton::TreeAutomaton;
use crate::word_automaton::{convolve_words, WordAutomaton};

/// Upper limit on tuples checked per relation.
pub const TUPLE_LIMIT: usize = 1_000_000;

/// Upper limit on elements in an order sanity check.
pub const ORDER_LIMIT: usize = 4_000;

const MAX_VIOLATIONS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, checked: u64, counterexample: Option<String>) -> Self {
        Check { name: name.into(), passed: counterexample.is_none(), checked, counterexample, note: None }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub max_height: usize,
    pub block_width: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Compares `word` against `tree` on every tree of height at most `h_max`
/// that fits in the block width: domain membership, code counts, encoding
/// injectivity and membership of every relation tuple.
pub fn verify_presentation(
    tree: &TreePresentation,
    word: &WordPresentation,
    h_max: usize,
    exec: Exec,
) -> Result<VerifyReport> {
    let k = word.block_width;
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let mut checks = Vec::new();

    let thick = match exact_max_thickness(&tree.domain, k) {
        Ok(Thickness::Exact(m)) => Check::new("thickness", 1, None).note(format!("max thickness {m}")),
        Ok(Thickness::FatDetected) | Err(Error::CapExceededInconclusive { .. }) => {
            Check::new("thickness", 1, Some(format!("domain has trees thicker than {k}")))
        }
        Err(e) => return Err(e),
    };
    checks.push(thick);

    let trees = enumerate_trees(&EnumerationSpec::new(tree.domain.alphabet().to_vec(), h_max).thickness(k));
    let codes: Vec<Vec<CodeSymbol>> =
        exec.map(&trees, |t| encode(t, k).map(|c| c.symbols)).into_iter().collect::<Result<_>>()?;
    let in_tree: Vec<bool> = exec.map(&trees, |t| tree.domain.accepts(t).unwrap_or(false));
    let idx: Vec<usize> = (0..trees.len()).collect();

    let mismatch = exec.find_first(&idx, |&i| {
        let got = word.domain.accepts(&codes[i]);
        (got != in_tree[i]).then(|| format!("{}: tree automaton {}, word automaton {}", trees[i], verb(in_tree[i]), verb(got)))
    });
    checks.push(Check::new("domain", trees.len() as u64, mismatch));

    let accepted_trees = in_tree.iter().filter(|&&b| b).count() as u128;
    let max_len = (h_max + 1) * k;
    let accepted_words: u128 = word.domain.count_by_length(max_len).iter().sum();
    let count_cx = (accepted_trees != accepted_words).then(|| {
        format!("{accepted_words} accepted codes of length <= {max_len}, {accepted_trees} accepted trees of height <= {h_max}")
    });
    checks.push(Check::new("domain-count", 1, count_cx));

    let distinct: HashSet<&Vec<CodeSymbol>> = codes.iter().collect();
    let inj_cx = (distinct.len() != codes.len()).then(|| {
        let mut seen = std::collections::HashMap::new();
        let (a, b) = codes
            .iter()
            .enumerate()
            .find_map(|(i, c)| seen.insert(c, i).map(|j| (j, i)))
            .expect("duplicate exists");
        format!("{} and {} share a code", trees[a], trees[b])
    });
    checks.push(Check::new("encode-injective", codes.len() as u64, inj_cx));

    for rel in &tree.relations {
        let name = format!("relation {}", rel.name);
        let Some(wrel) = word.relation(&rel.name) else {
            checks.push(Check::new(name, 0, Some("missing in word presentation".into())));
            continue;
        };
        if wrel.arity != rel.arity {
            checks.push(Check::new(name, 0, Some(format!("arity {} vs {}", rel.arity, wrel.arity))));
            continue;
        }
        let n = rel.arity;
        let mut pool = trees.len();
        while pool > 0 && pool.checked_pow(n as u32).is_none_or(|c| c > TUPLE_LIMIT) {
            pool -= 1;
        }
        let total = pool.pow(n as u32);
        let cx = exec.find_first(&(0..total).collect::<Vec<_>>(), |&code| {
            let tuple = unrank(code, pool, n);
            let members: Vec<Tree> = tuple.iter().map(|&i| trees[i].clone()).collect();
            let expected = tuple.iter().all(|&i| in_tree[i]) && rel.automaton.accepts(&convolve_trees(&members)).unwrap_or(false);
            let lanes: Vec<Vec<CodeSymbol>> = tuple.iter().map(|&i| codes[i].clone()).collect();
            let got = wrel.automaton.accepts(&convolve_words(&lanes));
            (expected != got).then(|| {
                let shown: Vec<String> = members.iter().map(|t| t.to_string()).collect();
                format!("({}): tree side {}, word side {}", shown.join(", "), verb(expected), verb(got))
            })
        });
        let mut check = Check::new(name, total as u64, cx);
        if pool < trees.len() {
            check = check.note(format!("limited to the first {pool} of {} trees", trees.len()));
        }
        checks.push(check);
    }
    Ok(VerifyReport { max_height: h_max, block_width: k, checks })
}

fn verb(b: bool) -> &'static str {
    if b {
        "accepts"
    } else {
        "rejects"
    }
}

fn unrank(mut code: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub elements: usize,
    pub truncated: bool,
    pub violations: Vec<String>,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

type Row = Vec<u64>;

fn bit(row: &Row, j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

/// Irreflexivity, trichotomy and transitivity of `less` on `0..n`.
fn check_order(n: usize, less: impl Fn(usize, usize) -> bool + Sync + Send, show: impl Fn(usize) -> String, exec: Exec) -> Vec<String> {
    let rows: Vec<Row> = exec.map_range(n, |i| {
        let mut row = vec![0u64; n.div_ceil(64)];
        for j in 0..n {
            if less(i, j) {
                row[j / 64] |= 1 << (j % 64);
            }
        }
        row
    });
    let mut out = Vec::new();
    for i in 0..n {
        if bit(&rows[i], i) {
            out.push(format!("{} < {} (not irreflexive)", show(i), show(i)));
        }
        for j in i + 1..n {
            match (bit(&rows[i], j), bit(&rows[j], i)) {
                (false, false) => out.push(format!("{} and {} are incomparable", show(i), show(j))),
                (true, true) => out.push(format!("{} < {} and {} < {}", show(i), show(j), show(j), show(i))),
                _ => {}
            }
            if out.len() >= MAX_VIOLATIONS {
                return out;
            }
        }
    }
    let trans: Vec<Option<(usize, usize, usize)>> = exec.map_range(n, |i| {
        (0..n).filter(|&j| bit(&rows[i], j)).find_map(|j| {
            rows[j].iter().zip(&rows[i]).position(|(rj, ri)| rj & !ri != 0).map(|w| {
                let bits = rows[j][w] & !rows[i][w];
                (i, j, w * 64 + bits.trailing_zeros() as usize)
            })
        })
    });
    for (i, j, l) in trans.into_iter().flatten().take(MAX_VIOLATIONS - out.len()) {
        out.push(format!("{} < {} < {} but not {} < {}", show(i), show(j), show(l), show(i), show(l)));
    }
    out
}

fn order_relation<A: Clone>(rels: &[crate::presentation::Relation<A>]) -> Result<A> {
    rels.iter()
        .find(|r| r.name == "<" && r.arity == 2)
        .map(|r| r.automaton.clone())
        .ok_or_else(|| Error::MissingRelation("<".into()))
}

/// Checks that `<` is a strict linear order on the domain trees of height at
/// most `h_max`. This is a sanity check only; it says nothing about
/// scatteredness.
pub fn sanity_order_tree(p: &TreePresentation, h_max: usize, exec: Exec) -> Result<OrderReport> {
    let lt: TreeAutomaton<PaddedTuple> = order_relation(&p.relations)?;
    let verdict = decide_slim(&p.domain);
    let mut spec = EnumerationSpec::new(p.domain.alphabet().to_vec(), h_max);
    if verdict.is_slim() {
        if let Thickness::Exact(k) = exact_max_thickness(&p.domain, verdict.bound as usize)? {
            spec = spec.thickness(k.max(1));
        }
    }
    let all = enumerate_trees(&spec);
    let mut elems: Vec<Tree> = all.into_iter().filter(|t| p.domain.accepts(t).unwrap_or(false)).collect();
    let truncated = elems.len() > ORDER_LIMIT;
    elems.truncate(ORDER_LIMIT);
    let less = |i: usize, j: usize| lt.accepts(&convolve_trees(&[elems[i].clone(), elems[j].clone()])).unwrap_or(false);
    let violations = check_order(elems.len(), less, |i| elems[i].to_string(), exec);
    Ok(OrderReport { elements: elems.len(), truncated, violations })
}

/// The same check on the accepted codes of length at most
/// `(h_max + 1) * K`.
pub fn sanity_order_word(p: &WordPresentation, h_max: usize, exec: Exec) -> Result<OrderReport> {
    let lt: WordAutomaton<CodeTuple> = order_relation(&p.relations)?;
    let mut elems = p.domain.accepted_words((h_max + 1) * p.block_width);
    let truncated = elems.len() > ORDER_LIMIT;
    elems.truncate(ORDER_LIMIT);
    let less = |i: usize, j: usize| lt.accepts(&convolve_words(&[elems[i].clone(), elems[j].clone()]));
    let show = |i: usize| elems[i].iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
    let violations = check_order(elems.len(), less, show, exec);
    Ok(OrderReport { elements: elems.len(), truncated, violations })
}
