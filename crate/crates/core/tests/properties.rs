mod common;

use std::collections::BTreeMap;

use pic_core::bounds::{mais, sum_keyrate_bracket};
use pic_core::catalogue::scalar_search;
use pic_core::coloring::{block_is_secure, secure_clique_cover};
use pic_core::feasibility::{canonical_scheme, is_feasible};
use pic_core::model::{full_mask, permute_mask, Graph, KeyBlock, KeyStructure, LinearScheme};
use pic_core::oracle::oracle_check_private;
use pic_core::verifier::{verify_private, verify_weak_private};
use pic_core::weak::{necessary_condition_infeasible, subset_condition_violation, Necessary};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0..=full_mask(n), n).prop_map(move |side| {
            let side = side.iter().enumerate().map(|(i, m)| m & !(1 << i)).collect();
            Graph::from_masks(n, side).unwrap()
        })
    })
}

fn graph_and_structure(max_n: usize) -> impl Strategy<Value = (Graph, KeyStructure)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        let pats = proptest::collection::btree_set(1..full_mask(n).max(2), 0..=(full_mask(n) as usize - 1).min(6));
        pats.prop_map(move |p| {
            let p: Vec<u64> = p.into_iter().filter(|&b| b < full_mask(n)).collect();
            (g.clone(), KeyStructure::new(n, &p).unwrap())
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn permute_scheme(s: &LinearScheme, perm: &[usize]) -> LinearScheme {
    let mut g = s.g.clone();
    for (i, m) in s.g.iter().enumerate() {
        g[perm[i]] = m.clone();
    }
    let mut keys: Vec<KeyBlock> =
        s.keys.iter().map(|k| KeyBlock { pattern: permute_mask(k.pattern, perm), h: k.h.clone() }).collect();
    keys.sort_by_key(|k| k.pattern);
    LinearScheme::new(s.q, s.n, s.r, g, keys).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn verifier_matches_oracle(seed in any::<u64>(), g in graph(3)) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_scheme(&mut rng, g.n());
        let v = verify_private(&s, &g).unwrap().is_ok();
        let o = oracle_check_private(&s, &g, 1 << 20).unwrap().clean();
        prop_assert_eq!(v, o);
    }

    #[test]
    fn feasible_iff_canonical_scheme_verifies((g, ks) in graph_and_structure(5)) {
        let f = is_feasible(&g, &ks).unwrap();
        match canonical_scheme(&g, &ks) {
            Ok(s) => {
                prop_assert!(f.is_feasible());
                prop_assert!(verify_private(&s, &g).unwrap().is_ok());
            }
            Err(_) => prop_assert!(!f.is_feasible()),
        }
    }

    #[test]
    fn feasibility_is_monotone((g, ks) in graph_and_structure(4), extra in any::<u64>(), edge in any::<(u8, u8)>()) {
        let n = g.n();
        if !is_feasible(&g, &ks).unwrap().is_feasible() {
            return Ok(());
        }
        // more patterns
        let b = extra % full_mask(n).max(1);
        if b != 0 && !ks.contains(b) {
            let mut pats = ks.patterns().to_vec();
            pats.push(b);
            prop_assert!(is_feasible(&g, &KeyStructure::new(n, &pats).unwrap()).unwrap().is_feasible());
        }
        // more side information
        let (i, j) = (edge.0 as usize % n, edge.1 as usize % n);
        if i != j {
            let mut side = g.sides().to_vec();
            side[i] |= 1 << j;
            let h = Graph::from_masks(n, side).unwrap();
            prop_assert!(is_feasible(&h, &ks).unwrap().is_feasible());
        }
    }

    #[test]
    fn verdicts_are_relabeling_invariant(seed in any::<u64>(), (g, perm) in graph(3).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), permutation(n))
    })) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_scheme(&mut rng, g.n());
        let (gp, sp) = (g.permute(&perm), permute_scheme(&s, &perm));
        prop_assert_eq!(verify_private(&s, &g).unwrap().is_ok(), verify_private(&sp, &gp).unwrap().is_ok());
        prop_assert_eq!(mais(&g).unwrap().0, mais(&gp).unwrap().0);
        let (b1, b2) = (sum_keyrate_bracket(&g).unwrap(), sum_keyrate_bracket(&gp).unwrap());
        prop_assert_eq!((b1.lower, b1.upper), (b2.lower, b2.upper));
    }

    #[test]
    fn bracket_is_ordered(g in graph(5)) {
        let b = sum_keyrate_bracket(&g).unwrap();
        prop_assert!(b.lower <= b.upper);
        let (m, _) = mais(&g).unwrap();
        prop_assert!(m <= g.n());
    }

    #[test]
    fn subset_violation_implies_necessary_infeasible(g in graph(6)) {
        if subset_condition_violation(&g).is_some() {
            let flagged = matches!(necessary_condition_infeasible(&g).unwrap(), Necessary::Infeasible { .. });
            prop_assert!(flagged);
        }
    }

    #[test]
    fn covers_are_secure_and_sound(g in graph(5)) {
        if let Some(c) = secure_clique_cover(&g).unwrap() {
            prop_assert!(c.blocks.iter().all(|&b| block_is_secure(&g, b)));
            prop_assert_eq!(c.blocks.iter().fold(0, |m, b| m | b), full_mask(g.n()));
            prop_assert_eq!(necessary_condition_infeasible(&g).unwrap(), Necessary::Inconclusive);
            let s = pic_core::coloring::scheme_from_secure_cover(&g, &c).unwrap();
            prop_assert!(verify_weak_private(&s, &g).unwrap().is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scalar_search_ignores_user_order((g, ks) in graph_and_structure(3), perm in permutation(3)) {
        if g.n() != 3 {
            return Ok(());
        }
        let caps: BTreeMap<u64, usize> = ks.patterns().iter().map(|&b| (b, 1)).collect();
        let first = scalar_search(&g, 2, 2, &caps).unwrap();
        let again = scalar_search(&g, 2, 2, &caps).unwrap();
        prop_assert_eq!(&first.found, &again.found);
        let pcaps: BTreeMap<u64, usize> = caps.iter().map(|(&b, &w)| (permute_mask(b, &perm), w)).collect();
        let other = scalar_search(&g.permute(&perm), 2, 2, &pcaps).unwrap();
        prop_assert_eq!(first.found.is_some(), other.found.is_some());
        if let Some(s) = first.found {
            prop_assert!(verify_private(&s, &g).unwrap().is_ok());
        }
    }
}
