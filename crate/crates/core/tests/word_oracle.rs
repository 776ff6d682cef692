//! Word automaton operations against path enumeration on short words.

use presslim::symbol::Padded;
use presslim::word_automaton::{convolve_words, equivalent, inclusion_counterexample, unconvolve_words, Equivalence};
use presslim::WordAutomaton;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_nfa(rng: &mut ChaCha8Rng) -> WordAutomaton<char> {
    let mut a = WordAutomaton::new(vec!['a', 'b']);
    let n = rng.gen_range(1..=5);
    for _ in 0..n {
        a.add_state(rng.gen_bool(0.3));
    }
    for q in 0..n {
        if rng.gen_bool(0.3) || q == 0 {
            a.set_start(q);
        }
        for x in 0..2 {
            for r in 0..n {
                if rng.gen_bool(0.25) {
                    a.add_edge(q, x, r);
                }
            }
        }
    }
    a
}

/// Acceptance by exploring every path, one state at a time.
fn path_accepts(a: &WordAutomaton<char>, w: &[char]) -> bool {
    fn go(a: &WordAutomaton<char>, q: usize, w: &[char]) -> bool {
        match w.split_first() {
            None => a.is_accepting(q),
            Some((c, rest)) => {
                let x = a.letter_index(c).unwrap();
                a.edges_from(q).iter().any(|&(y, r)| y == x && go(a, r, rest))
            }
        }
    }
    a.start_states().any(|q| go(a, q, w))
}

fn words(max: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        layer = layer
            .into_iter()
            .flat_map(|w: Vec<char>| {
                ['a', 'b'].into_iter().map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn operations_match_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ws = words(6);
    for _ in 0..100 {
        let a = random_nfa(&mut rng);
        let b = random_nfa(&mut rng);
        let d = a.determinize();
        let c = d.complement().unwrap();
        let i = a.intersect(&b);
        let u = a.union(&b);
        let m = a.minimize();
        for w in &ws {
            let (pa, pb) = (path_accepts(&a, w), path_accepts(&b, w));
            assert_eq!(a.accepts(w), pa);
            assert_eq!(d.accepts(w), pa);
            assert_eq!(c.accepts(w), !pa);
            assert_eq!(i.accepts(w), pa && pb);
            assert_eq!(u.accepts(w), pa || pb);
            assert_eq!(m.accepts(w), pa);
        }
        assert!(a.intersect(&c).is_empty());
        let counts = a.count_by_length(6);
        for (len, &n) in counts.iter().enumerate() {
            let brute = ws.iter().filter(|w| w.len() == len && path_accepts(&a, w)).count();
            assert_eq!(n, brute as u128);
        }
        let listed = a.accepted_words(6);
        assert_eq!(listed.len(), ws.iter().filter(|w| path_accepts(&a, w)).count());
    }
}

#[test]
fn equivalence_matches_exhaustive_comparison() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ws = words(8);
    let mut equal_seen = 0;
    for _ in 0..100 {
        let a = random_nfa(&mut rng);
        let b = if rng.gen_bool(0.3) { a.minimize() } else { random_nfa(&mut rng) };
        let first_diff = ws.iter().find(|w| path_accepts(&a, w) != path_accepts(&b, w));
        match equivalent(&a, &b) {
            Equivalence::Equal => {
                equal_seen += 1;
                assert!(first_diff.is_none());
            }
            Equivalence::Counterexample(w) => {
                assert_ne!(path_accepts(&a, &w), path_accepts(&b, &w));
                // words() lists by length, so the first difference is a shortest one
                if let Some(d) = first_diff {
                    assert_eq!(w.len(), d.len());
                }
            }
        }
        if let Some(w) = inclusion_counterexample(&a, &b) {
            assert!(path_accepts(&a, &w) && !path_accepts(&b, &w));
        } else {
            assert!(ws.iter().all(|w| !path_accepts(&a, w) || path_accepts(&b, w)));
        }
    }
    assert!(equal_seen > 10);
}

#[test]
fn convolution_round_trip() {
    let ws: Vec<Vec<char>> = words(4);
    for n in 1..=3usize {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..500 {
            let tuple: Vec<Vec<char>> = (0..n).map(|_| ws[rng.gen_range(0..ws.len())].clone()).collect();
            let conv: Vec<Padded<char>> = convolve_words(&tuple);
            assert_eq!(conv.len(), tuple.iter().map(Vec::len).max().unwrap());
            assert!(conv.iter().all(|x| !x.is_all_box()));
            assert_eq!(unconvolve_words(&conv, n).unwrap(), tuple);
        }
    }
}

#[test]
fn convolution_examples() {
    let w = |s: &str| s.chars().collect::<Vec<_>>();
    let show = |c: &[Padded<char>]| c.iter().map(|x| format!("({x})")).collect::<String>();
    assert_eq!(show(&convolve_words(&[w("ab"), w("ab")])), "(a,a)(b,b)");
    assert_eq!(show(&convolve_words(&[w("a"), w("")])), "(a,_)");
    assert_eq!(show(&convolve_words(&[w("ab"), w("a"), w("abc")])), "(a,a,a)(b,_,b)(_,_,c)");
}
