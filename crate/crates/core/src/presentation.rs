//! Tree- and word-automatic presentations, and the conversion between them.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::compile::{compile_domain, compile_relation, lanes_shape_automaton, restrict_to_domain, CodeTuple};
use crate::encoding::{shape_automaton, CodeSymbol};
use crate::error::{Error, Result};
use crate::slim::{decide_slim, exact_max_thickness, pump_thick_witness, SlimVerdict, Thickness};
use crate::symbol::{PaddedTuple, Symbol};
use crate::tree::Tree;
use crate::tree_automaton::TreeAutomaton;
use crate::word_automaton::{inclusion_counterexample, WordAutomaton};

#[derive(Clone, Debug)]
pub struct Relation<A> {
    pub name: String,
    pub arity: usize,
    pub automaton: A,
}

impl<A> Relation<A> {
    pub fn new(name: &str, arity: usize, automaton: A) -> Self {
        Relation { name: name.to_string(), arity, automaton }
    }
}

#[derive(Clone, Debug)]
pub struct TreePresentation {
    pub name: String,
    pub domain: TreeAutomaton,
    pub relations: Vec<Relation<TreeAutomaton<PaddedTuple>>>,
}

impl TreePresentation {
    /// Checks that every relation automaton reads tuples of the declared
    /// arity over the domain's alphabet.
    pub fn new(name: &str, domain: TreeAutomaton, relations: Vec<Relation<TreeAutomaton<PaddedTuple>>>) -> Result<Self> {
        let base: BTreeSet<&Symbol> = domain.alphabet().iter().collect();
        for r in &relations {
            for t in r.automaton.alphabet() {
                if t.arity() != r.arity {
                    return Err(Error::ArityMismatch { name: r.name.clone(), declared: r.arity, actual: t.arity() });
                }
                if let Some(s) = t.0.iter().flatten().find(|s| !base.contains(s)) {
                    return Err(Error::UnknownSymbol(s.to_string()));
                }
            }
        }
        Ok(TreePresentation { name: name.to_string(), domain, relations })
    }

    pub fn relation(&self, name: &str) -> Option<&Relation<TreeAutomaton<PaddedTuple>>> {
        self.relations.iter().find(|r| r.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct WordPresentation {
    pub name: String,
    pub block_width: usize,
    pub domain: WordAutomaton<CodeSymbol>,
    pub relations: Vec<Relation<WordAutomaton<CodeTuple>>>,
}

impl WordPresentation {
    pub fn relation(&self, name: &str) -> Option<&Relation<WordAutomaton<CodeTuple>>> {
        self.relations.iter().find(|r| r.name == name)
    }
}

/// How to pick the block width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KPolicy {
    /// The largest thickness of a domain element.
    #[default]
    Exact,
    /// `2^(n-1)` for the reduced domain automaton with `n` states.
    Bound,
    Fixed(usize),
}

impl std::str::FromStr for KPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(KPolicy::Exact),
            "bound" => Ok(KPolicy::Bound),
            n => n
                .parse::<usize>()
                .ok()
                .filter(|&k| k >= 1)
                .map(KPolicy::Fixed)
                .ok_or_else(|| format!("expected `exact`, `bound` or a positive integer, got `{s}`")),
        }
    }
}

/// Block width for a slim domain under `policy`.
pub fn choose_block_width(domain: &TreeAutomaton, verdict: &SlimVerdict, policy: KPolicy) -> Result<usize> {
    match policy {
        KPolicy::Fixed(k) => Ok(k),
        KPolicy::Bound => Ok(usize::try_from(verdict.bound).unwrap_or(usize::MAX)),
        KPolicy::Exact => {
            let cap = usize::try_from(verdict.bound).unwrap_or(usize::MAX);
            match exact_max_thickness(domain, cap)? {
                Thickness::Exact(k) => Ok(k.max(1)),
                Thickness::FatDetected => Err(Error::DomainNotSlim),
            }
        }
    }
}

/// Compiles a tree-automatic presentation with slim domain into a word
/// automatic one. Relations are first restricted to domain tuples. Both
/// the domain and every relation are certified against the code-shape
/// automata by an inclusion check.
pub fn convert_presentation(p: &TreePresentation, policy: KPolicy, budget: usize) -> Result<WordPresentation> {
    let verdict = decide_slim(&p.domain);
    if !verdict.is_slim() {
        return Err(Error::DomainNotSlim);
    }
    let k = choose_block_width(&p.domain, &verdict, policy)?;
    convert_with_width(p, k, budget)
}

pub fn convert_with_width(p: &TreePresentation, k: usize, budget: usize) -> Result<WordPresentation> {
    let base = p.domain.alphabet().to_vec();
    let domain = compile_domain(&p.domain, k, budget)?;
    let shape = shape_automaton(&base, k);
    if let Some(w) = inclusion_counterexample(&domain, &shape) {
        return Err(Error::Certification(format!("domain accepts malformed code {}", render(&w))));
    }
    let mut relations = Vec::with_capacity(p.relations.len());
    for r in &p.relations {
        let restricted = restrict_to_domain(&r.automaton, &p.domain, r.arity);
        let compiled = compile_relation(&restricted, r.arity, k, budget)?;
        let lanes = lanes_shape_automaton(&base, r.arity, k);
        if let Some(w) = inclusion_counterexample(&compiled, &lanes) {
            return Err(Error::Certification(format!("relation `{}` accepts malformed tuple {}", r.name, render(&w))));
        }
        relations.push(Relation::new(&r.name, r.arity, compiled));
    }
    Ok(WordPresentation { name: p.name.clone(), block_width: k, domain, relations })
}

fn render<S: std::fmt::Display>(w: &[S]) -> String {
    w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug)]
pub enum Decision {
    WordAutomatic { verdict: SlimVerdict, presentation: WordPresentation },
    /// The domain is fat. For a scattered linear ordering this rules out any
    /// word-automatic presentation; scatteredness itself is not checked.
    NotWordAutomaticGivenScattered { verdict: SlimVerdict, witness: Tree },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    WordAutomatic,
    NotWordAutomaticGivenScattered,
}

impl Decision {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Decision::WordAutomatic { .. } => VerdictKind::WordAutomatic,
            Decision::NotWordAutomaticGivenScattered { .. } => VerdictKind::NotWordAutomaticGivenScattered,
        }
    }

    pub fn verdict(&self) -> &SlimVerdict {
        match self {
            Decision::WordAutomatic { verdict, .. } | Decision::NotWordAutomaticGivenScattered { verdict, .. } => verdict,
        }
    }
}

/// Decides whether the presented structure is word automatic, assuming it
/// is a scattered linear ordering. On a slim domain the word-automatic
/// presentation is returned; on a fat one, an accepted domain tree thicker
/// than `2^(n-1)`.
pub fn decide_word_automatic(p: &TreePresentation, policy: KPolicy, budget: usize) -> Result<Decision> {
    let mut verdict = decide_slim(&p.domain);
    if verdict.is_slim() {
        let k = choose_block_width(&p.domain, &verdict, policy)?;
        if policy == KPolicy::Exact {
            verdict.exact_max_thickness = Some(k);
        }
        let presentation = convert_with_width(p, k, budget)?;
        Ok(Decision::WordAutomatic { verdict, presentation })
    } else {
        let m = usize::try_from(verdict.bound).unwrap_or(usize::MAX);
        let witness = pump_thick_witness(&p.domain.reduced(), m)?;
        Ok(Decision::NotWordAutomaticGivenScattered { verdict, witness })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::DEFAULT_BUDGET;
    use crate::fixtures::{a_eq, all_trees, empty_domain, ord_omega};
    use crate::symbol::alphabet;

    #[test]
    fn rejects_inconsistent_relations() {
        let bad = TreePresentation::new(
            "bad",
            crate::fixtures::a_spine(),
            vec![Relation::new("=", 2, a_eq(&alphabet(&["a", "b"])))],
        );
        assert_eq!(bad.unwrap_err(), Error::UnknownSymbol("b".into()));
        let bad = TreePresentation::new(
            "bad",
            crate::fixtures::a_spine(),
            vec![Relation::new("=", 3, a_eq(&alphabet(&["a"])))],
        );
        assert!(matches!(bad.unwrap_err(), Error::ArityMismatch { declared: 3, actual: 2, .. }));
    }

    #[test]
    fn k_policy_parse() {
        assert_eq!("exact".parse::<KPolicy>(), Ok(KPolicy::Exact));
        assert_eq!("bound".parse::<KPolicy>(), Ok(KPolicy::Bound));
        assert_eq!("3".parse::<KPolicy>(), Ok(KPolicy::Fixed(3)));
        assert!("0".parse::<KPolicy>().is_err());
        assert!("wide".parse::<KPolicy>().is_err());
    }

    #[test]
    fn ord_omega_is_word_automatic() {
        let d = decide_word_automatic(&ord_omega(), KPolicy::Exact, DEFAULT_BUDGET).unwrap();
        let Decision::WordAutomatic { verdict, presentation } = d else { panic!("expected slim") };
        assert_eq!(verdict.exact_max_thickness, Some(2));
        assert_eq!(presentation.block_width, 2);
        assert_eq!(presentation.relations.len(), 1);
    }

    #[test]
    fn bound_policy_uses_theorem_width() {
        let w = convert_presentation(&ord_omega(), KPolicy::Bound, DEFAULT_BUDGET).unwrap();
        assert_eq!(w.block_width, 4);
    }

    #[test]
    fn fat_domain_gets_witness() {
        let d = decide_word_automatic(&all_trees(), KPolicy::Exact, DEFAULT_BUDGET).unwrap();
        let Decision::NotWordAutomaticGivenScattered { verdict, witness } = d else { panic!("expected fat") };
        assert!(witness.thickness() as u64 > verdict.bound);
        assert!(all_trees().domain.accepts(&witness).unwrap());
        assert_eq!(convert_presentation(&all_trees(), KPolicy::Exact, DEFAULT_BUDGET).unwrap_err(), Error::DomainNotSlim);
    }

    #[test]
    fn empty_domain_converts_to_empty_language() {
        let w = convert_presentation(&empty_domain(), KPolicy::Exact, DEFAULT_BUDGET).unwrap();
        assert!(w.domain.is_empty());
        assert!(w.relations.iter().all(|r| r.automaton.is_empty()));
    }
}
