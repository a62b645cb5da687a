//! Minimum isolating cuts for disjoint terminal groups.
//!
//! Each group is first contracted to a single vertex. For every bit of the
//! group index one max-flow separates the groups with that bit clear from
//! those with it set; intersecting the sides that contain a group gives a
//! region that is guaranteed to hold its minimal isolating side. A final
//! max-flow from the group to the collapsed outside of its region then
//! yields the minimal minimizer, which is lifted back to original ids.

use crate::error::{invalid, Result};
use crate::graph::{contract, Graph};
use crate::maxflow::{min_cut_between, Network};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingCut {
    pub group: usize,
    /// Inclusion-minimal set containing the group and no other group with
    /// the smallest boundary.
    pub side: Vec<usize>,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingResult {
    pub cuts: Vec<IsolatingCut>,
}

impl IsolatingResult {
    pub fn side(&self, group: usize) -> &[usize] {
        &self.cuts[group].side
    }
}

pub fn isolating_cuts(g: &Graph, groups: &[Vec<usize>]) -> Result<IsolatingResult> {
    if groups.len() < 2 {
        return Err(invalid(format!("need at least two groups, got {}", groups.len())));
    }
    let (q, map) = contract(g, groups)?;
    let k = groups.len();
    // Quotient vertex of group i is i.
    let mut region_code = vec![0usize; q.n()];
    let bits = usize::BITS - (k - 1).leading_zeros();
    for b in 0..bits {
        let (zeros, ones): (Vec<usize>, Vec<usize>) = (0..k).partition(|i| i >> b & 1 == 0);
        let (_, reach) = min_cut_between(&q, &zeros, &ones);
        for v in 0..q.n() {
            region_code[v] |= (!reach[v] as usize) << b;
        }
    }
    // A vertex belongs to region i if it sits on group i's side of every
    // bit cut, i.e. its side pattern equals i's bit pattern.
    let mut regions: Vec<Vec<usize>> = vec![Vec::new(); k];
    for v in 0..q.n() {
        let code = region_code[v];
        if code < k {
            regions[code].push(v);
        }
    }

    let mut slot = vec![usize::MAX; q.n()];
    let mut cuts = Vec::with_capacity(k);
    for (i, region) in regions.iter().enumerate() {
        debug_assert!(region.contains(&i));
        let local = q.collapse_outside(region, &mut slot);
        let src = region.iter().position(|&v| v == i).expect("group lies in its region");
        let mut net = Network::new(&local, 0, &[]);
        let value = net.max_flow(src, region.len());
        let reach = net.reachable(src);
        let inside: Vec<usize> = (0..region.len()).filter(|&j| reach[j]).map(|j| region[j]).collect();
        cuts.push(IsolatingCut { group: i, side: map.lift(&inside), value });
    }
    Ok(IsolatingResult { cuts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphKind};
    use crate::maxflow::max_flow;
    use crate::oracle::brute_isolating;
    use crate::value::CutValue;

    #[test]
    fn two_singletons_are_the_two_minimal_sides() {
        let g = generate(GraphKind::ErdosRenyi { p: 0.4 }, 9, 3, (1, 6)).unwrap();
        let r = isolating_cuts(&g, &[vec![2], vec![6]]).unwrap();
        let ab = max_flow(&g, 2, 6).unwrap();
        let ba = max_flow(&g, 6, 2).unwrap();
        assert_eq!(r.cuts[0].value, ab.value);
        assert_eq!(r.side(0), ab.source_side(9));
        assert_eq!(r.side(1), ba.source_side(9));
    }

    #[test]
    fn star_leaves_isolate_themselves() {
        let g = Graph::new(5, [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 9)]).unwrap();
        let r = isolating_cuts(&g, &[vec![1], vec![2], vec![3]]).unwrap();
        for (i, w) in [2, 3, 4].into_iter().enumerate() {
            assert_eq!(r.side(i), &[i + 1]);
            assert_eq!(r.cuts[i].value, w);
        }
    }

    #[test]
    fn rejects_bad_groups() {
        let g = Graph::new(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(isolating_cuts(&g, &[vec![0]]).is_err());
        assert!(isolating_cuts(&g, &[vec![0, 1], vec![1]]).is_err());
        assert!(isolating_cuts(&g, &[vec![0], vec![]]).is_err());
    }

    #[test]
    fn random_singletons_match_enumeration() {
        for seed in 0..25 {
            let g = generate(GraphKind::ErdosRenyi { p: 0.3 }, 11, seed, (1, 8)).unwrap();
            let base = seed as usize;
            let groups = vec![vec![base % 11], vec![(base + 4) % 11], vec![(base + 8) % 11]];
            let r = isolating_cuts(&g, &groups).unwrap();
            let oracle = brute_isolating(&g, &groups).unwrap();
            for (got, want) in r.cuts.iter().zip(&oracle) {
                assert_eq!(CutValue::Finite(got.value), want.value);
                assert_eq!(got.side, want.minimal);
            }
        }
    }

    #[test]
    fn sides_are_disjoint_and_exclusive() {
        for seed in 0..20 {
            let g = generate(GraphKind::ErdosRenyi { p: 0.25 }, 14, seed, (1, 5)).unwrap();
            let groups = vec![vec![0, 5], vec![1], vec![9, 10, 11], vec![3], vec![7]];
            let r = isolating_cuts(&g, &groups).unwrap();
            let mut owner = vec![usize::MAX; 14];
            for c in &r.cuts {
                assert!(groups[c.group].iter().all(|v| c.side.contains(v)));
                for &v in &c.side {
                    assert_eq!(owner[v], usize::MAX);
                    owner[v] = c.group;
                }
                assert_eq!(g.cut_value(&c.side).unwrap(), c.value);
            }
        }
    }
}
