use proptest::prelude::*;

use presslim::encoding::{decode, encode, is_valid_code};
use presslim::symbol::sym;
use presslim::tree::{convolve_trees, project_lane};
use presslim::Tree;

fn arb_tree() -> impl Strategy<Value = Tree> {
    let leaf = prop::sample::select(vec!["a", "b", "c"]).prop_map(|s| Tree::leaf(sym(s)));
    leaf.prop_recursive(5, 40, 2, |inner| {
        (prop::sample::select(vec!["a", "b", "c"]), inner.clone(), inner)
            .prop_map(|(s, l, r)| Tree::node(sym(s), l, r))
    })
}

proptest! {
    #[test]
    fn sexp_round_trip(t in arb_tree()) {
        prop_assert_eq!(Tree::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn encode_round_trip(t in arb_tree(), extra in 0usize..3) {
        let k = t.thickness() + extra;
        let w = encode(&t, k).unwrap();
        prop_assert!(is_valid_code(&w.symbols, k));
        prop_assert_eq!(w.len(), (t.height() + 1) * k);
        prop_assert_eq!(decode(&w).unwrap(), t);
    }

    #[test]
    fn convolution_projects_back(ts in prop::collection::vec(arb_tree(), 1..4)) {
        let conv = convolve_trees(&ts);
        for (i, t) in ts.iter().enumerate() {
            prop_assert_eq!(project_lane(&conv, i), Some(t.clone()));
        }
        let widths: Vec<usize> = conv.level_widths();
        for t in &ts {
            for (l, w) in t.level_widths().into_iter().enumerate() {
                prop_assert!(w <= widths[l]);
            }
        }
    }

    #[test]
    fn level_nodes_cover_positions(t in arb_tree()) {
        let total: usize = (0..=t.height()).map(|l| t.level_nodes(l).len()).sum();
        prop_assert_eq!(total, t.size());
        prop_assert_eq!(t.level_widths().into_iter().max().unwrap(), t.thickness());
    }
}
