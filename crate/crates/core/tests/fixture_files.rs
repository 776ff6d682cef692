//! The files under `fixtures/` must match the built-in fixtures. Run with
//! `PRESSLIM_BLESS=1` to rewrite them.

use std::fs;
use std::path::{Path, PathBuf};

use presslim::fixtures::{a_all, a_cat, a_eq, a_leaf, a_spine, a_spine_lt, all_trees, empty_domain, ord_omega, t_ex};
use presslim::format::{
    load_tree_presentation, render_relation_automaton, render_tree_automaton, save_tree_presentation, ParseOptions,
};
use presslim::symbol::alphabet;

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn expected_files(dir: &Path) -> Vec<PathBuf> {
    let mut files = Vec::new();
    let mut put = |name: &str, text: String| {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        files.push(p);
    };
    put("t_ex.sexp", format!("{}\n", t_ex()));
    put("a_all.ta", render_tree_automaton(&a_all()));
    put("a_leaf.ta", render_tree_automaton(&a_leaf()));
    put("a_cat.ta", render_tree_automaton(&a_cat()));
    put("a_spine.ta", render_tree_automaton(&a_spine()));
    put("a_eq.ta", render_relation_automaton(&a_eq(&alphabet(&["a", "b"]))));
    put("a_spine_lt.ta", render_relation_automaton(&a_spine_lt()));
    for (stem, p) in [("ord_omega", ord_omega()), ("all_trees", all_trees()), ("empty", empty_domain())] {
        let path = dir.join(format!("{stem}.tap"));
        save_tree_presentation(&p, &path).unwrap();
        files.push(path);
        files.push(dir.join(format!("{stem}.domain.ta")));
        files.extend((0..p.relations.len()).map(|i| dir.join(format!("{stem}.rel{i}.ta"))));
    }
    files
}

#[test]
fn fixture_files_are_current() {
    let fresh = tempfile::tempdir().unwrap();
    let files = expected_files(fresh.path());
    let dir = fixtures_dir();
    let bless = std::env::var_os("PRESSLIM_BLESS").is_some();
    for f in files {
        let name = f.file_name().unwrap();
        let want = fs::read_to_string(&f).unwrap();
        let target = dir.join(name);
        if bless {
            fs::create_dir_all(&dir).unwrap();
            fs::write(&target, &want).unwrap();
            continue;
        }
        let have = fs::read_to_string(&target).unwrap_or_default();
        assert_eq!(have, want, "{} is stale; rerun with PRESSLIM_BLESS=1", target.display());
    }
}

#[test]
fn fixture_presentations_load() {
    let dir = fixtures_dir();
    let p = load_tree_presentation(&dir.join("ord_omega.tap"), ParseOptions::default()).unwrap();
    assert_eq!(p.name, "ord_omega");
    assert_eq!(p.relations[0].name, "<");
    assert_eq!(p.domain.num_states(), a_spine().num_states());
}
