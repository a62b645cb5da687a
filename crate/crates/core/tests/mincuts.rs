use std::collections::BTreeMap;

use ghcut_core::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Case {
    g: Graph,
    tree: SteinerTree,
    k: u32,
}

fn case(seed: u64, leaf: bool) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(5..=11);
    let p = rng.gen_range(0.25..0.7);
    let g = generate(GraphKind::ErdosRenyi { p }, n, seed, (1, 10)).unwrap();
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(&mut rng);
    let size = rng.gen_range(5..=n);
    let subset = &vs[..size];
    let tree = if leaf {
        random_tree_with_leaf_source(subset, subset[0], &mut rng).unwrap()
    } else {
        random_tree(subset, subset[0], &mut rng).unwrap()
    };
    Case { g, tree, k: rng.gen_range(2..=4) }
}

fn run(c: &Case, k: u32, seed: u64, cfg: &Config, leaf: bool) -> (MuTable, RecursionStats) {
    let mut mu = MuTable::new(c.tree.source());
    let mut stats = RecursionStats::new();
    if leaf {
        leaf_mincuts(&c.g, &c.tree, k, &mut mu, seed, &mut stats, cfg).unwrap();
    } else {
        tree_mincuts(&c.g, &c.tree, k, &mut mu, seed, &mut stats, cfg).unwrap();
    }
    (mu, stats)
}

fn with_witnesses() -> Config {
    Config { track_witnesses: true, ..Config::default() }
}

#[test]
fn k_zero_does_nothing() {
    let c = case(1, false);
    let (mu, stats) = run(&c, 0, 3, &Config::default(), false);
    assert!(mu.is_empty());
    assert_eq!(stats.total().calls, 1);
    assert_eq!(stats.get(Procedure::Tree, 0).vertices, c.g.n() as u64);
}

#[test]
fn small_trees_are_solved_exactly() {
    for seed in 0..30 {
        let g = generate(GraphKind::ErdosRenyi { p: 0.4 }, 9, seed, (1, 7)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = random_tree(&[0, 3, 5, 8], 3, &mut rng).unwrap();
        let mut mu = MuTable::new(3);
        let mut stats = RecursionStats::new();
        tree_mincuts(&g, &tree, 1, &mut mu, seed, &mut stats, &Config::default()).unwrap();
        for t in [0, 5, 8] {
            assert_eq!(mu.get(t), brute_lambda(&g, 3, t).unwrap().value);
        }
    }
}

#[test]
fn two_vertex_leaf_tree() {
    let g = generate(GraphKind::ErdosRenyi { p: 0.5 }, 8, 4, (1, 5)).unwrap();
    let tree = SteinerTree::new(vec![2, 6], vec![(2, 6)], 2).unwrap();
    let mut mu = MuTable::new(2);
    leaf_mincuts(&g, &tree, 3, &mut mu, 0, &mut RecursionStats::new(), &Config::default()).unwrap();
    assert_eq!(mu.get(6), CutValue::Finite(max_flow(&g, 2, 6).unwrap().value));
}

#[test]
fn sandwich_tree_mincuts() {
    let cfg = with_witnesses();
    let mut good_runs = 0;
    let total = 60 * 3;
    for inst in 0..60 {
        let c = case(500 + inst, false);
        let oracle = Oracle::new(&c.g).unwrap();
        let s = c.tree.source();
        for seed in 0..3 {
            let (mu, _) = run(&c, c.k, seed, &cfg, false);
            let mut good = true;
            for t in c.tree.terminals() {
                let lam = oracle.lambda(s, t).unwrap().value;
                let ub = oracle.lambda_tk(&c.tree, t, c.k as usize).unwrap().value;
                let e = mu.entry(t).expect("every terminal receives a value");
                assert!(e.value >= lam, "instance {inst} seed {seed} terminal {t}");
                let w = e.witness.as_ref().expect("witness tracked");
                assert!(w.contains(t) && !w.contains(s));
                assert_eq!(CutValue::Finite(c.g.cut_value(&w.side).unwrap()), e.value);
                good &= e.value <= ub;
            }
            good_runs += good as usize;
        }
    }
    assert!(good_runs * 100 >= total * 95, "{good_runs}/{total}");
}

#[test]
fn sandwich_leaf_mincuts() {
    let cfg = with_witnesses();
    let mut good_runs = 0;
    let total = 60 * 3;
    for inst in 0..60 {
        let c = case(900 + inst, true);
        let oracle = Oracle::new(&c.g).unwrap();
        let s = c.tree.source();
        for seed in 0..3 {
            let (mu, _) = run(&c, c.k, seed, &cfg, true);
            let mut good = true;
            for t in c.tree.terminals() {
                let lam = oracle.lambda(s, t).unwrap().value;
                let ub = oracle.eta_tk(&c.tree, t, c.k as usize).unwrap().value;
                let e = mu.entry(t).expect("every terminal receives a value");
                assert!(e.value >= lam);
                let w = e.witness.as_ref().unwrap();
                assert_eq!(c.g.cut_value(&w.side).unwrap(), w.value);
                assert!(w.contains(t) && !w.contains(s));
                good &= e.value <= ub;
            }
            good_runs += good as usize;
        }
    }
    assert!(good_runs * 100 >= total * 95, "{good_runs}/{total}");
}

#[test]
fn larger_k_rarely_does_worse() {
    // Not a structural guarantee per seed: the two runs consume different
    // random streams. Almost every run should still be pointwise no worse.
    let cfg = Config::default();
    let mut monotone = 0;
    let total = 40 * 2;
    for inst in 0..40 {
        let c = case(1300 + inst, false);
        for seed in 0..2 {
            let (a, _) = run(&c, 2, seed, &cfg, false);
            let (b, _) = run(&c, 3, seed, &cfg, false);
            monotone += c.tree.terminals().all(|t| b.get(t) <= a.get(t)) as usize;
        }
    }
    assert!(monotone * 100 >= total * 95, "{monotone}/{total}");
}

#[test]
fn runs_are_reproducible() {
    let c = case(77, false);
    let (a, sa) = run(&c, 3, 11, &with_witnesses(), false);
    let (b, sb) = run(&c, 3, 11, &with_witnesses(), false);
    assert_eq!(a, b);
    assert_eq!(sa, sb);
    assert_eq!(serde_json::to_string(&sa).unwrap(), serde_json::to_string(&sb).unwrap());
}

#[test]
fn stats_count_both_procedures() {
    let c = case(78, false);
    let (_, stats) = run(&c, 2, 0, &Config::default(), false);
    let top = stats.get(Procedure::Tree, 2);
    assert!(top.calls >= 1);
    assert!(stats.iter().all(|(_, k, _)| k <= 2));
    assert!(stats.total().tree_vertices >= c.tree.len() as u64);
    let fewer = Config { reps_coeff: 1.0, ..Config::default() };
    let (_, small) = run(&c, 2, 0, &fewer, false);
    assert!(small.total().calls < stats.total().calls);
}

#[test]
fn input_errors() {
    let c = case(79, false);
    let mut wrong = MuTable::new(c.tree.source() + 100);
    let mut stats = RecursionStats::new();
    assert!(tree_mincuts(&c.g, &c.tree, 2, &mut wrong, 0, &mut stats, &Config::default()).is_err());
    let star = SteinerTree::new(vec![0, 1, 2], vec![(0, 1), (0, 2)], 0).unwrap();
    let mut mu = MuTable::new(0);
    assert!(leaf_mincuts(&c.g, &star, 2, &mut mu, 0, &mut stats, &Config::default()).is_err());
    let outside = SteinerTree::new(vec![0, 50], vec![(0, 50)], 0).unwrap();
    assert!(tree_mincuts(&c.g, &outside, 2, &mut mu, 0, &mut stats, &Config::default()).is_err());
}

/// Finds a spanning tree that `k`-respects some minimum `(s, t)`-cut.
fn respecting_tree(g: &Graph, s: usize, t: usize, k: usize, rng: &mut ChaCha8Rng) -> Option<SteinerTree> {
    let oracle = Oracle::new(g).unwrap();
    let lam = oracle.lambda(s, t).unwrap().value;
    for _ in 0..50 {
        let tree = random_spanning_tree(g, s, rng).unwrap();
        if oracle.lambda_tk(&tree, t, k).unwrap().value == lam {
            return Some(tree);
        }
    }
    None
}

#[test]
fn sstcv_flags_inflated_estimates() {
    let mut checked = 0;
    for seed in 0..30 {
        let g = generate(GraphKind::ErdosRenyi { p: 0.4 }, 10, seed, (1, 9)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, t) = (0, 1 + seed as usize % 9);
        let Some(tree) = respecting_tree(&g, s, t, 2, &mut rng) else { continue };
        let lam = max_flow(&g, s, t).unwrap().value;
        let terminals: Vec<usize> = (0..10).collect();
        for (est, want) in [(lam, Verdict::Tight), (lam + 1, Verdict::Loose)] {
            let estimates = BTreeMap::from([(t, est)]);
            let out = sstcv_verify(&g, &terminals, s, &estimates, &[tree.clone()], 2, seed, &Config::default())
                .unwrap();
            assert_eq!(out[&t], want, "seed {seed}");
        }
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn sstcv_with_several_guide_trees() {
    let mut checked = 0;
    for seed in 0..10 {
        let g = generate(GraphKind::ErdosRenyi { p: 0.5 }, 8, seed, (1, 9)).unwrap();
        let terminals: Vec<usize> = (0..8).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trees: Vec<SteinerTree> = (0..3).map(|_| random_spanning_tree(&g, 0, &mut rng).unwrap()).collect();
        let oracle = Oracle::new(&g).unwrap();
        let mut estimates = BTreeMap::new();
        for t in 1..8 {
            let lam = oracle.lambda(0, t).unwrap().value;
            if trees.iter().any(|tr| oracle.lambda_tk(tr, t, 2).unwrap().value == lam) {
                estimates.insert(t, lam.finite().unwrap() + (t as u64 % 2));
            }
        }
        let out = sstcv_verify(&g, &terminals, 0, &estimates, &trees, 2, seed, &Config::default()).unwrap();
        for (t, v) in out {
            let want = if t % 2 == 0 { Verdict::Tight } else { Verdict::Loose };
            assert_eq!(v, want, "seed {seed} terminal {t}");
            checked += 1;
        }
    }
    assert!(checked >= 30, "{checked}");
}

#[test]
fn sstcv_rejects_trees_missing_terminals() {
    let g = generate(GraphKind::Clique, 5, 0, (1, 1)).unwrap();
    let tree = SteinerTree::new(vec![0, 1, 2], vec![(0, 1), (1, 2)], 0).unwrap();
    let estimates = BTreeMap::from([(1, 4)]);
    assert!(sstcv_verify(&g, &[0, 1, 4], 0, &estimates, &[tree], 2, 0, &Config::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn values_are_real_cuts(gseed in 0u64..10_000, seed in any::<u64>(), k in 1u32..4, leaf in any::<bool>()) {
        let c = case(gseed, leaf);
        let (mu, _) = run(&c, k, seed, &with_witnesses(), leaf);
        let s = c.tree.source();
        for (t, e) in mu.iter() {
            let w = e.witness.as_ref().unwrap();
            prop_assert!(w.contains(t) && !w.contains(s));
            prop_assert_eq!(CutValue::Finite(c.g.cut_value(&w.side).unwrap()), e.value);
            prop_assert!(e.value >= CutValue::Finite(max_flow(&c.g, s, t).unwrap().value));
        }
    }
}
