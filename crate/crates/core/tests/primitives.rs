use ghcut_core::io::{load_graph, load_tree, save_graph, write_tree, Format};
use ghcut_core::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_groups(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(rng);
    let mut groups = Vec::new();
    let mut at = 0;
    for _ in 0..count {
        let size = rng.gen_range(1..=2);
        let mut g = vs[at..at + size].to_vec();
        g.sort_unstable();
        groups.push(g);
        at += size;
    }
    groups
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flow_equals_enumeration(seed in any::<u64>(), n in 2usize..=11, p in 0.1f64..0.9) {
        let g = generate(GraphKind::ErdosRenyi { p }, n, seed, (1, 10)).unwrap();
        let (s, t) = ((seed % n as u64) as usize, ((seed / 7 + 1) % n as u64) as usize);
        prop_assume!(s != t);
        let f = max_flow(&g, s, t).unwrap();
        let brute = brute_lambda(&g, s, t).unwrap();
        prop_assert_eq!(CutValue::Finite(f.value), brute.value);
        // The reported sink side is the largest optimal sink side.
        prop_assert!(brute.witnesses.iter().all(|w| w.side.iter().all(|v| f.cut.contains(*v))));
    }

    #[test]
    fn isolating_cuts_equal_enumeration(seed in any::<u64>(), n in 5usize..=11, count in 2usize..=4) {
        let g = generate(GraphKind::ErdosRenyi { p: 0.35 }, n, seed, (1, 6)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let groups = random_groups(n, count.min(n / 2), &mut rng);
        prop_assume!(groups.len() >= 2);
        let got = isolating_cuts(&g, &groups).unwrap();
        let want = brute_isolating(&g, &groups).unwrap();
        for (a, b) in got.cuts.iter().zip(&want) {
            prop_assert_eq!(CutValue::Finite(a.value), b.value);
            prop_assert_eq!(&a.side, &b.minimal);
        }
    }

    #[test]
    fn gusfield_tree_answers_every_pair(seed in any::<u64>(), n in 2usize..=16) {
        let g = generate(GraphKind::ErdosRenyi { p: 0.3 }, n, seed, (1, 9)).unwrap();
        let t = build_gusfield(&g).unwrap();
        prop_assert_eq!(verify_gh(&g, &t).unwrap(), None);
    }
}

#[test]
fn gusfield_on_forty_vertices() {
    for seed in 0..3 {
        let g = generate(GraphKind::ErdosRenyi { p: 0.15 }, 40, seed, (1, 10)).unwrap();
        let t = build_gusfield(&g).unwrap();
        for a in 0..40 {
            for b in a + 1..40 {
                assert_eq!(t.query(a, b).unwrap(), max_flow(&g, a, b).unwrap().value);
            }
        }
    }
}

#[test]
fn star_with_global_minimum_is_caught() {
    let g = Graph::new(4, [(0, 1, 1), (1, 2, 5), (2, 3, 5), (1, 3, 5)]).unwrap();
    let global = brute_steiner_mincut(&g, &[0, 1, 2, 3]).unwrap().value.finite().unwrap();
    let star = GHTree { parent: vec![None, Some(0), Some(0), Some(0)], weight: vec![0, global, global, global] };
    let bad = verify_gh(&g, &star).unwrap().unwrap();
    assert_eq!((bad.a, bad.b), (1, 2));
    assert_eq!(bad.true_value, brute_lambda(&g, 1, 2).unwrap().value.finite().unwrap());
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(GraphKind::PlantedCut { value: 4 }, 12, 3, (1, 5)).unwrap();
    for fmt in [Format::Dimacs, Format::Json] {
        let path = dir.path().join(format!("g.{fmt:?}"));
        save_graph(&g, &path, fmt).unwrap();
        assert_eq!(load_graph(&path, fmt).unwrap(), g);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tree = random_spanning_tree(&g, 5, &mut rng).unwrap();
    let path = dir.path().join("t.txt");
    std::fs::write(&path, write_tree(&tree, Format::Dimacs).unwrap()).unwrap();
    assert_eq!(load_tree(&path, Format::Dimacs).unwrap(), tree);
    assert!(matches!(load_graph(dir.path().join("missing"), Format::Dimacs), Err(Error::Io(_))));
}
