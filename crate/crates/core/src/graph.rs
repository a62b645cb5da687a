//! Weighted undirected graphs, cuts and contraction.
//!
//! A [`Graph`] is normalized on construction: endpoints are stored as
//! `u < v`, self-loops are dropped and parallel edges are merged by summing
//! their weights. Adjacency is kept in compressed (CSR) form with a reverse
//! arc index so the flow code can use it as a residual network directly.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Total weight must stay below this so that flow sums never overflow.
pub const WEIGHT_LIMIT: u128 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<u64>,
    rev: Vec<usize>,
    total: u64,
}

impl Graph {
    /// Builds a graph on vertices `0..n`, merging parallel edges and dropping
    /// self-loops.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, u64)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u}, {v}) has an endpoint outside 0..{n}")));
            }
            if w == 0 {
                return Err(invalid(format!("edge ({u}, {v}) has weight 0")));
            }
            if u != v {
                list.push((u.min(v), u.max(v), w));
            }
        }
        list.sort_unstable();
        let mut merged: Vec<Edge> = Vec::with_capacity(list.len());
        let mut total: u128 = 0;
        for (u, v, w) in list {
            total += w as u128;
            if total >= WEIGHT_LIMIT {
                return Err(Error::WeightOverflow(total));
            }
            match merged.last_mut() {
                Some(e) if e.u == u && e.v == v => e.w += w,
                _ => merged.push(Edge { u, v, w }),
            }
        }
        Ok(Self::from_merged(n, merged))
    }

    /// `edges` must already be normalized, merged and sorted.
    pub(crate) fn from_merged(n: usize, edges: Vec<Edge>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for e in &edges {
            offsets[e.u + 1] += 1;
            offsets[e.v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let arcs = offsets[n];
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0usize; arcs];
        let mut weights = vec![0u64; arcs];
        let mut rev = vec![0usize; arcs];
        let mut total = 0u64;
        for e in &edges {
            let a = cursor[e.u];
            let b = cursor[e.v];
            cursor[e.u] += 1;
            cursor[e.v] += 1;
            targets[a] = e.v;
            targets[b] = e.u;
            weights[a] = e.w;
            weights[b] = e.w;
            rev[a] = b;
            rev[b] = a;
            total += e.w;
        }
        Self { n, edges, offsets, targets, weights, rev, total }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> u64 {
        self.total
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.targets[r.clone()].iter().copied().zip(self.weights[r].iter().copied())
    }

    /// Weighted degree, i.e. `δ({v})`.
    pub fn degree(&self, v: usize) -> u64 {
        self.weights[self.offsets[v]..self.offsets[v + 1]].iter().sum()
    }

    pub(crate) fn arcs(&self) -> (&[usize], &[usize], &[u64], &[usize]) {
        (&self.offsets, &self.targets, &self.weights, &self.rev)
    }

    /// `δ(side)`: total weight of edges with exactly one endpoint in `side`.
    pub fn cut_value(&self, side: &[usize]) -> Result<u64> {
        let mask = self.side_mask(side)?;
        Ok(self.cut_value_mask(&mask))
    }

    /// `δ` of the set marked in `mask`. No validity checks.
    pub fn cut_value_mask(&self, mask: &[bool]) -> u64 {
        self.edges.iter().filter(|e| mask[e.u] != mask[e.v]).map(|e| e.w).sum()
    }

    /// Validates a proper non-empty side and returns it as a membership mask.
    pub fn side_mask(&self, side: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        let mut count = 0;
        for &v in side {
            if v >= self.n {
                return Err(Error::InvalidCut(format!("vertex {v} outside 0..{}", self.n)));
            }
            if !mask[v] {
                mask[v] = true;
                count += 1;
            }
        }
        if count == 0 || count == self.n {
            return Err(Error::InvalidCut(format!(
                "side must be a non-empty proper subset (has {count} of {} vertices)",
                self.n
            )));
        }
        Ok(mask)
    }

    /// Component id per vertex, numbered in order of smallest member.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for (u, _) in self.neighbors(v) {
                    if comp[u] == usize::MAX {
                        comp[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().0 == 1
    }

    /// Quotient graph where vertex `v` becomes `assign[v] < nq`.
    pub(crate) fn quotient(&self, assign: &[usize], nq: usize) -> Graph {
        let mut list: Vec<(usize, usize, u64)> = self
            .edges
            .iter()
            .filter_map(|e| {
                let (a, b) = (assign[e.u], assign[e.v]);
                (a != b).then(|| (a.min(b), a.max(b), e.w))
            })
            .collect();
        list.sort_unstable();
        let mut merged: Vec<Edge> = Vec::with_capacity(list.len());
        for (u, v, w) in list {
            match merged.last_mut() {
                Some(e) if e.u == u && e.v == v => e.w += w,
                _ => merged.push(Edge { u, v, w }),
            }
        }
        Graph::from_merged(nq, merged)
    }

    /// Keeps the vertices of `keep` (renumbered by position) and collapses
    /// everything else into one extra vertex with id `keep.len()`.
    ///
    /// `slot` is caller-provided scratch of length `n`, filled with
    /// `usize::MAX`; it is restored before returning. Runs in time
    /// proportional to the volume of `keep`.
    pub(crate) fn collapse_outside(&self, keep: &[usize], slot: &mut [usize]) -> Graph {
        for (i, &v) in keep.iter().enumerate() {
            slot[v] = i;
        }
        let ext = keep.len();
        let mut edges = Vec::new();
        let mut outside = vec![0u64; keep.len()];
        for (i, &v) in keep.iter().enumerate() {
            for (u, w) in self.neighbors(v) {
                match slot[u] {
                    usize::MAX => outside[i] += w,
                    j if j > i => edges.push(Edge { u: i, v: j, w }),
                    _ => {}
                }
            }
        }
        for (i, &w) in outside.iter().enumerate() {
            if w > 0 {
                edges.push(Edge { u: i, v: ext, w });
            }
        }
        edges.sort_unstable();
        for &v in keep {
            slot[v] = usize::MAX;
        }
        Graph::from_merged(ext + 1, edges)
    }
}

/// One side of a bipartition together with its value `δ(side)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub side: Vec<usize>,
    pub value: u64,
}

impl Cut {
    /// Evaluates `side` in `g`; the stored side is sorted and deduplicated.
    pub fn new(g: &Graph, side: &[usize]) -> Result<Self> {
        let mask = g.side_mask(side)?;
        Ok(Self::from_mask(g, &mask))
    }

    pub fn from_mask(g: &Graph, mask: &[bool]) -> Self {
        let side = (0..g.n()).filter(|&v| mask[v]).collect();
        Self { side, value: g.cut_value_mask(mask) }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.side.binary_search(&v).is_ok()
    }

    pub fn complement(&self, n: usize) -> Cut {
        let side = (0..n).filter(|v| !self.contains(*v)).collect();
        Cut { side, value: self.value }
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.side {
            mask[v] = true;
        }
        mask
    }
}

/// Provenance of a quotient graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    /// `forward[v]` is the quotient vertex holding original vertex `v`.
    pub forward: Vec<usize>,
    /// Quotient vertices that stand for two or more original vertices.
    pub contracted_nodes: Vec<usize>,
    pub quotient_n: usize,
}

impl ContractionMap {
    /// Original vertices mapped to quotient vertex `q`.
    pub fn members(&self, q: usize) -> Vec<usize> {
        (0..self.forward.len()).filter(|&v| self.forward[v] == q).collect()
    }

    /// Pulls a quotient side back to original vertex ids.
    pub fn lift(&self, side: &[usize]) -> Vec<usize> {
        let mut mask = vec![false; self.quotient_n];
        for &q in side {
            mask[q] = true;
        }
        (0..self.forward.len()).filter(|&v| mask[self.forward[v]]).collect()
    }

    pub fn lift_cut(&self, cut: &Cut) -> Cut {
        Cut { side: self.lift(&cut.side), value: cut.value }
    }
}

/// Merges each group into one vertex. Groups occupy quotient ids
/// `0..groups.len()` in the given order; ungrouped vertices follow in
/// increasing original order.
pub fn contract(g: &Graph, groups: &[Vec<usize>]) -> Result<(Graph, ContractionMap)> {
    let mut forward = vec![usize::MAX; g.n()];
    let mut contracted_nodes = Vec::new();
    for (i, group) in groups.iter().enumerate() {
        if group.is_empty() {
            return Err(invalid(format!("group {i} is empty")));
        }
        for &v in group {
            if v >= g.n() {
                return Err(invalid(format!("vertex {v} outside 0..{}", g.n())));
            }
            if forward[v] != usize::MAX && forward[v] != i {
                return Err(invalid(format!(
                    "vertex {v} appears in groups {} and {i}",
                    forward[v]
                )));
            }
            forward[v] = i;
        }
        if group.iter().any(|&v| v != group[0]) {
            contracted_nodes.push(i);
        }
    }
    let mut next = groups.len();
    for slot in forward.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let quotient = g.quotient(&forward, next);
    Ok((quotient, ContractionMap { forward, contracted_nodes, quotient_n: next }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphKind};
    use proptest::prelude::*;

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap()
    }

    fn path() -> Graph {
        Graph::new(3, [(0, 1, 3), (1, 2, 5)]).unwrap()
    }

    /// Independent recomputation: scan the raw edge list.
    fn scan(edges: &[(usize, usize, u64)], side: &[usize]) -> u64 {
        edges
            .iter()
            .filter(|(u, v, _)| side.contains(u) != side.contains(v))
            .map(|e| e.2)
            .sum()
    }

    #[test]
    fn triangle_vertex_cut_is_its_degree() {
        assert_eq!(triangle().cut_value(&[0]).unwrap(), 2);
    }

    #[test]
    fn path_cut_crosses_one_edge() {
        assert_eq!(path().cut_value(&[0, 1]).unwrap(), 5);
    }

    #[test]
    fn random_cut_matches_edge_scan() {
        let g = generate(GraphKind::ErdosRenyi { p: 0.5 }, 8, 11, (1, 9)).unwrap();
        let raw: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
        for mask in 1u32..255 {
            let side: Vec<usize> = (0..8).filter(|v| mask >> v & 1 == 1).collect();
            assert_eq!(g.cut_value(&side).unwrap(), scan(&raw, &side));
        }
    }

    #[test]
    fn empty_or_full_side_is_rejected() {
        let g = triangle();
        assert!(matches!(g.cut_value(&[]), Err(Error::InvalidCut(_))));
        assert!(matches!(g.cut_value(&[0, 1, 2]), Err(Error::InvalidCut(_))));
    }

    #[test]
    fn parallel_edges_merge_and_loops_drop() {
        let g = Graph::new(3, [(0, 1, 2), (1, 0, 3), (2, 2, 7), (1, 2, 1)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.edges()[0], Edge { u: 0, v: 1, w: 5 });
        assert_eq!(g.total_weight(), 6);
    }

    #[test]
    fn zero_weight_is_rejected() {
        assert!(Graph::new(2, [(0, 1, 0)]).is_err());
    }

    #[test]
    fn contract_everything_gives_a_single_vertex() {
        let (q, map) = contract(&triangle(), &[vec![0, 1, 2]]).unwrap();
        assert_eq!((q.n(), q.m()), (1, 0));
        assert_eq!(map.contracted_nodes, vec![0]);
    }

    #[test]
    fn contract_path_tail() {
        let (q, map) = contract(&path(), &[vec![1, 2]]).unwrap();
        assert_eq!(q.n(), 2);
        assert_eq!(q.edges(), &[Edge { u: 0, v: 1, w: 3 }]);
        assert_eq!(map.forward, vec![1, 0, 0]);
    }

    #[test]
    fn overlapping_groups_are_rejected() {
        assert!(contract(&path(), &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn quotient_cuts_equal_lifted_cuts() {
        let g = generate(GraphKind::ErdosRenyi { p: 0.4 }, 10, 5, (1, 10)).unwrap();
        let (q, map) = contract(&g, &[vec![2, 7], vec![4, 0]]).unwrap();
        assert_eq!(q.n(), 8);
        for mask in 1u32..(1 << q.n()) - 1 {
            let side: Vec<usize> = (0..q.n()).filter(|v| mask >> v & 1 == 1).collect();
            let lifted = map.lift(&side);
            assert_eq!(q.cut_value(&side).unwrap(), g.cut_value(&lifted).unwrap());
        }
    }

    #[test]
    fn collapse_outside_matches_contract() {
        let g = generate(GraphKind::ErdosRenyi { p: 0.5 }, 9, 3, (1, 6)).unwrap();
        let keep = vec![1, 4, 5, 8];
        let mut slot = vec![usize::MAX; g.n()];
        let a = g.collapse_outside(&keep, &mut slot);
        assert!(slot.iter().all(|&s| s == usize::MAX));
        let rest: Vec<usize> = (0..9).filter(|v| !keep.contains(v)).collect();
        let mut groups: Vec<Vec<usize>> = keep.iter().map(|&v| vec![v]).collect();
        groups.push(rest);
        let (b, _) = contract(&g, &groups).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn cut_value_is_symmetric(seed in 0u64..500, mask in 1u32..1023) {
            let g = generate(GraphKind::ErdosRenyi { p: 0.5 }, 10, seed, (1, 20)).unwrap();
            let side: Vec<usize> = (0..10).filter(|v| mask >> v & 1 == 1).collect();
            let other: Vec<usize> = (0..10).filter(|v| mask >> v & 1 == 0).collect();
            prop_assert_eq!(g.cut_value(&side).unwrap(), g.cut_value(&other).unwrap());
        }

        #[test]
        fn contraction_preserves_unsplit_cuts(seed in 0u64..200, a in 0usize..12, b in 0usize..12, c in 0usize..12) {
            prop_assume!(a != b && b != c && a != c);
            let g = generate(GraphKind::ErdosRenyi { p: 0.3 }, 12, seed, (1, 5)).unwrap();
            let (q, map) = contract(&g, &[vec![a, b, c]]).unwrap();
            prop_assert!(q.edges().iter().all(|e| e.w >= 1));
            for mask in 1u32..(1 << q.n()) - 1 {
                let side: Vec<usize> = (0..q.n()).filter(|v| mask >> v & 1 == 1).collect();
                prop_assert_eq!(q.cut_value(&side).unwrap(), g.cut_value(&map.lift(&side)).unwrap());
            }
        }
    }
}
