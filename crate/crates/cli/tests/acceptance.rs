//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use presslim::compile::{compile_domain, compile_relation, DEFAULT_BUDGET};
use presslim::encoding::{decode, encode, is_valid_code, shape_automaton};
use presslim::enumerate::{count_trees, enumerate_trees, run_classes, EnumerationSpec};
use presslim::fixtures::{a_all, a_cat, a_eq, a_leaf, a_spine_lt, t_ex};
use presslim::par::Exec;
use presslim::random::{random_reduced, random_slim_infinite, random_with_verdict, RandomSpec};
use presslim::slim::{decide_slim, exact_max_thickness, pump_thick_witness, tall_tree_for_state, Thickness};
use presslim::symbol::{alphabet, Symbol};
use presslim::tree::convolve_trees;
use presslim::word_automaton::{convolve_words, inclusion_counterexample};
use presslim::{PaddedTuple, Tree, TreeAutomaton};

const FIG1: &str = "a/1 # # # # b/1 c/1 # # # c/0 b/1 b/0 a/0 # a/0 c/0 # # #";

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let start = Instant::now();
    let mut v = f();
    let took = start.elapsed();
    if let (Ok(detail), Some(limit)) = (&v, limit) {
        if took > limit {
            v = Err(format!("{detail}; took {took:.2?}, limit {limit:?}"));
        }
    }
    (v, took)
}

fn fig1() -> Verdict {
    let got = encode(&t_ex(), 5).map_err(|e| e.to_string())?.to_string();
    ensure(got == FIG1, || format!("got `{got}`"))?;
    Ok("exact match".into())
}

fn round_trip() -> Verdict {
    let spec = EnumerationSpec::new(alphabet(&["a", "b"]), 4).thickness(3);
    let trees = enumerate_trees(&spec);
    ensure(trees.len() as u128 == count_trees(&spec), || "enumeration count mismatch".into())?;
    let mut checked = 0;
    for k in [3, 4] {
        let failures = Exec::default().find_first(&trees, |t| {
            let w = encode(t, k).ok()?;
            let back = decode(&w).ok();
            (back.as_ref() != Some(t) || !is_valid_code(&w.symbols, k)).then(|| format!("{t} at K={k}"))
        });
        if let Some(f) = failures {
            return Err(f);
        }
        checked += trees.len();
    }
    Ok(format!("{checked} (tree, K) pairs, 0 failures"))
}

fn sample() -> Vec<TreeAutomaton> {
    let mut v = random_reduced(2024, 100, RandomSpec::default());
    v.extend(random_reduced(7, 150, RandomSpec { sink_bias: 0.85, ..RandomSpec::default() }));
    v.extend([a_all(), a_leaf(), a_cat()].map(|a| a.reduced()));
    v
}

fn agreement(sample: &[TreeAutomaton]) -> Verdict {
    let bad = Exec::default().find_first(sample, |a| {
        let v = decide_slim(a);
        match exact_max_thickness(a, v.bound as usize) {
            Ok(t) if matches!(t, Thickness::Exact(_)) == v.is_slim() => None,
            other => Some(format!("{a:?}: graph says slim={}, search says {other:?}", v.is_slim())),
        }
    });
    if let Some(b) = bad {
        return Err(b);
    }
    let slim = sample.iter().filter(|a| decide_slim(*a).is_slim()).count();
    ensure(sample.len() >= 203, || "sample too small".into())?;
    Ok(format!("{} automata ({slim} slim, {} fat), 0 disagreements", sample.len(), sample.len() - slim))
}

fn bound_holds(sample: &[TreeAutomaton]) -> Verdict {
    let slim: Vec<&TreeAutomaton> = sample.iter().filter(|a| decide_slim(*a).is_slim()).collect();
    let bad = Exec::default().find_first(&slim, |a| {
        let bound = decide_slim(*a).bound as usize;
        run_classes(a, 6, bound + 1)
            .into_iter()
            .find(|(q, w)| a.is_accepting(*q) && w.iter().any(|&x| x > bound))
            .map(|(_, w)| format!("{a:?}: accepted profile {w:?} exceeds {bound}"))
    });
    match bad {
        Some(b) => Err(b),
        None => Ok(format!("{} slim automata, all accepted trees of height <= 6 within 2^(n-1)", slim.len())),
    }
}

fn domain_compilation() -> Verdict {
    let autos = random_slim_infinite(11, 20);
    let mut trees_checked = 0usize;
    for a in &autos {
        let bound = decide_slim(a).bound as usize;
        let Ok(Thickness::Exact(k)) = exact_max_thickness(a, bound) else {
            return Err(format!("{a:?}: not slim"));
        };
        let k = k.max(1);
        let w = compile_domain(a, k, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        if let Some(cx) = inclusion_counterexample(&w, &shape_automaton(a.alphabet(), k)) {
            return Err(format!("malformed code accepted: {cx:?}"));
        }
        // trees thicker than K are outside L(a) and have no code
        let trees = enumerate_trees(&EnumerationSpec::new(a.alphabet().to_vec(), 4).thickness(k));
        let bad = Exec::default().find_first(&trees, |t| {
            let code = encode(t, k).ok()?;
            (a.accepts(t).ok()? != w.accepts(&code.symbols)).then(|| format!("{t}"))
        });
        if let Some(t) = bad {
            return Err(format!("membership differs on {t}"));
        }
        trees_checked += trees.len();
    }
    Ok(format!("{} slim automata, {trees_checked} trees, shape inclusion certified", autos.len()))
}

fn pairs(r: &TreeAutomaton<PaddedTuple>, base: &[Symbol], k: usize) -> Result<usize, String> {
    let w = compile_relation(r, 2, k, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let trees = enumerate_trees(&EnumerationSpec::new(base.to_vec(), 3).thickness(k));
    let codes: Vec<_> = trees.iter().map(|t| encode(t, k).unwrap().symbols).collect();
    let n = trees.len();
    let bad = Exec::default().find_first(&(0..n * n).collect::<Vec<_>>(), |&ix| {
        let (i, j) = (ix / n, ix % n);
        let expected = r.accepts(&convolve_trees(&[trees[i].clone(), trees[j].clone()])).ok()?;
        let got = w.accepts(&convolve_words(&[codes[i].clone(), codes[j].clone()]));
        (expected != got).then(|| format!("({}, {})", trees[i], trees[j]))
    });
    match bad {
        Some(p) => Err(format!("membership differs on {p}")),
        None => Ok(n * n),
    }
}

fn relation_compilation() -> Verdict {
    let a = alphabet(&["a"]);
    let ab = alphabet(&["a", "b"]);
    // K = 8 covers every tree of height <= 3
    let eq1 = pairs(&a_eq(&a), &a, 8)?;
    let lt1 = pairs(&a_spine_lt(), &a, 8)?;
    let eq2 = pairs(&a_eq(&ab), &ab, 2)?;
    Ok(format!("A_EQ over {{a}}: {eq1} pairs; A_SPINE_LT: {lt1} pairs; A_EQ over {{a,b}} at K=2: {eq2} pairs"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn cli(args: &[&str]) -> Result<(i32, serde_json::Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_presslim")).args(args).output().map_err(|e| e.to_string())?;
    let code = out.status.code().unwrap_or(-1);
    let json = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("{args:?}: exit {code}, {e}: {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok((code, json))
}

fn end_to_end() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let wap = dir.path().join("ord_omega.wap");
    let (wap_s, tap) = (wap.to_str().unwrap(), fixtures().join("ord_omega.tap"));
    let tap_s = tap.to_str().unwrap();

    let (code, v) = cli(&["decide", tap_s, "-o", wap_s])?;
    ensure(code == 0 && v["verdict"] == "word-automatic" && v["slim"] == true, || format!("decide: {v}"))?;
    let (code, v) = cli(&["verify", "--max-height", "5", tap_s, wap_s])?;
    ensure(code == 0 && v["passed"] == true, || format!("verify: {v}"))?;
    for target in [wap_s, tap_s] {
        let (code, v) = cli(&["sanity-order", "--max-height", "5", target])?;
        ensure(code == 0 && v["passed"] == true, || format!("sanity-order {target}: {v}"))?;
    }

    let fat = fixtures().join("all_trees.tap");
    let (code, v) = cli(&["decide", fat.to_str().unwrap()])?;
    ensure(code == 0 && v["verdict"] == "not-word-automatic-given-scattered", || format!("decide fat: {v}"))?;
    let tree = Tree::parse(v["witness"]["tree"].as_str().ok_or("no witness")?).map_err(|e| e.to_string())?;
    let domain = a_all();
    let n = domain.reduced().num_states();
    ensure(domain.accepts(&tree).unwrap(), || format!("witness {tree} rejected"))?;
    ensure(tree.thickness() > 1 << (n - 1), || format!("witness {tree} too thin"))?;
    Ok(format!("ORD_OMEGA decided, verified (h <= 5), ordered; fat witness of thickness {}", tree.thickness()))
}

fn pumping() -> Verdict {
    let autos = random_with_verdict(99, 20, false);
    let mut tall = 0;
    for a in &autos {
        for m in 1..=8 {
            let t = pump_thick_witness(a, m).map_err(|e| e.to_string())?;
            ensure(a.accepts(&t).unwrap() && t.thickness() > m, || format!("{a:?}, m = {m}: {t}"))?;
            for q in 0..a.num_states() {
                if let Ok(t) = tall_tree_for_state(a, q, m) {
                    ensure(a.run(&t).unwrap() == q && t.height() >= m, || format!("{a:?}, q = {q}, m = {m}: {t}"))?;
                    tall += 1;
                }
            }
        }
    }
    Ok(format!("{} fat automata x m in 1..=8; {tall} tall trees checked", autos.len()))
}

type Criterion<'a> = (&'static str, Option<Duration>, Box<dyn FnOnce() -> Verdict + 'a>);

fn main() {
    let sample = sample();
    let criteria: Vec<Criterion> = vec![
        ("encode(t_ex, 5) reproduces the worked example", Some(Duration::from_secs(1)), Box::new(fig1)),
        ("decode/encode round trip, |Σ| = 2, h <= 4, ⌀ <= 3, K in {3, 4}", Some(Duration::from_secs(60)), Box::new(round_trip)),
        ("graph criterion agrees with configuration search", Some(Duration::from_secs(120)), Box::new(|| agreement(&sample))),
        ("slim automata respect the 2^(n-1) bound up to height 6", None, Box::new(|| bound_holds(&sample))),
        ("compiled domains match tree membership, h <= 4", None, Box::new(domain_compilation)),
        ("compiled relations match tuple membership, h <= 3", None, Box::new(relation_compilation)),
        ("decide / verify / sanity-order end to end", None, Box::new(end_to_end)),
        ("pumping witnesses are accepted, thick and tall", None, Box::new(pumping)),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let (v, took) = timed(limit, f);
        match v {
            Ok(detail) => println!("criterion {} PASS {name} [{took:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name} [{took:.2?}]: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
