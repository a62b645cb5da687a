//! Exact s-t maximum flow on undirected graphs (Dinic's blocking flows).
//!
//! Every undirected edge `{u, v, w}` becomes a pair of opposite arcs of
//! capacity `w` that are each other's residual reverse. The returned cut is
//! canonical: its source side is the set reachable from `s` in the final
//! residual network, which is the unique inclusion-minimal source side among
//! all minimum cuts.

use std::collections::VecDeque;

use crate::error::{invalid, Result};
use crate::graph::{Cut, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    /// The sink side `V \ R` where `R` is the residual-reachable set of the
    /// source. Contains every sink, never the source.
    pub cut: Cut,
}

impl FlowResult {
    /// The minimal source side (complement of `cut.side`).
    pub fn source_side(&self, n: usize) -> Vec<usize> {
        self.cut.complement(n).side
    }
}

pub(crate) struct Network {
    offsets: Vec<usize>,
    to: Vec<usize>,
    rev: Vec<usize>,
    cap: Vec<u64>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

impl Network {
    /// Residual network of `g`, plus `extra` vertices joined by one-way arcs
    /// `(from, to, cap)`.
    pub(crate) fn new(g: &Graph, extra: usize, arcs: &[(usize, usize, u64)]) -> Self {
        let (g_off, g_to, g_w, g_rev) = g.arcs();
        let n = g.n() + extra;
        if arcs.is_empty() && extra == 0 {
            return Self {
                offsets: g_off.to_vec(),
                to: g_to.to_vec(),
                rev: g_rev.to_vec(),
                cap: g_w.to_vec(),
                level: vec![0; n],
                iter: vec![0; n],
            };
        }
        let mut deg: Vec<usize> = (0..n)
            .map(|v| if v < g.n() { g_off[v + 1] - g_off[v] } else { 0 })
            .collect();
        for &(a, b, _) in arcs {
            deg[a] += 1;
            deg[b] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let total = offsets[n];
        let mut to = vec![0usize; total];
        let mut rev = vec![0usize; total];
        let mut cap = vec![0u64; total];
        // Graph arcs keep their relative positions inside each block.
        for v in 0..g.n() {
            let shift = offsets[v] - g_off[v];
            for a in g_off[v]..g_off[v + 1] {
                let b = g_rev[a];
                to[a + shift] = g_to[a];
                cap[a + shift] = g_w[a];
                rev[a + shift] = b + offsets[g_to[a]] - g_off[g_to[a]];
            }
        }
        let mut cursor: Vec<usize> = (0..n)
            .map(|v| offsets[v] + if v < g.n() { g_off[v + 1] - g_off[v] } else { 0 })
            .collect();
        for &(a, b, c) in arcs {
            let (x, y) = (cursor[a], cursor[b]);
            cursor[a] += 1;
            cursor[b] += 1;
            to[x] = b;
            to[y] = a;
            cap[x] = c;
            cap[y] = 0;
            rev[x] = y;
            rev[y] = x;
        }
        Self { offsets, to, rev, cap, level: vec![0; n], iter: vec![0; n] }
    }

    fn n(&self) -> usize {
        self.level.len()
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for a in self.offsets[v]..self.offsets[v + 1] {
                let u = self.to[a];
                if self.cap[a] > 0 && self.level[u] == u32::MAX {
                    self.level[u] = self.level[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, v: usize, t: usize, limit: u64) -> u64 {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.offsets[v + 1] {
            let a = self.iter[v];
            let u = self.to[a];
            if self.cap[a] > 0 && self.level[u] == self.level[v] + 1 {
                let pushed = self.dfs(u, t, limit.min(self.cap[a]));
                if pushed > 0 {
                    self.cap[a] -= pushed;
                    let r = self.rev[a];
                    self.cap[r] += pushed;
                    return pushed;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut flow = 0u64;
        while self.bfs(s, t) {
            for v in 0..self.n() {
                self.iter[v] = self.offsets[v];
            }
            loop {
                let pushed = self.dfs(s, t, u64::MAX);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// Vertices reachable from `s` through arcs with residual capacity.
    pub(crate) fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for a in self.offsets[v]..self.offsets[v + 1] {
                let u = self.to[a];
                if self.cap[a] > 0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}

/// Minimum cut separating all of `sources` from all of `sinks` (both
/// non-empty and disjoint). Returns the value and the minimal source side as
/// a mask over `g`'s vertices.
pub(crate) fn min_cut_between(g: &Graph, sources: &[usize], sinks: &[usize]) -> (u64, Vec<bool>) {
    let n = g.n();
    if let ([s], [t]) = (sources, sinks) {
        let mut net = Network::new(g, 0, &[]);
        let value = net.max_flow(*s, *t);
        return (value, net.reachable(*s));
    }
    let inf = g.total_weight() + 1;
    let (ss, tt) = (n, n + 1);
    let arcs: Vec<(usize, usize, u64)> = sources
        .iter()
        .map(|&v| (ss, v, inf))
        .chain(sinks.iter().map(|&v| (v, tt, inf)))
        .collect();
    let mut net = Network::new(g, 2, &arcs);
    let value = net.max_flow(ss, tt);
    let mut reach = net.reachable(ss);
    reach.truncate(n);
    (value, reach)
}

fn check_vertex(g: &Graph, v: usize) -> Result<()> {
    if v >= g.n() {
        return Err(invalid(format!("vertex {v} outside 0..{}", g.n())));
    }
    Ok(())
}

fn result_from(g: &Graph, value: u64, source_side: Vec<bool>) -> FlowResult {
    let sink_side: Vec<bool> = source_side.iter().map(|&b| !b).collect();
    let cut = Cut::from_mask(g, &sink_side);
    debug_assert_eq!(cut.value, value);
    FlowResult { value, cut }
}

/// `λ(s, t)` together with the minimum cut whose source side is minimal.
pub fn max_flow(g: &Graph, s: usize, t: usize) -> Result<FlowResult> {
    check_vertex(g, s)?;
    check_vertex(g, t)?;
    if s == t {
        return Err(invalid(format!("source and sink are both {s}")));
    }
    let (value, reach) = min_cut_between(g, &[s], &[t]);
    Ok(result_from(g, value, reach))
}

/// Minimum cut separating `s` from every vertex of `sinks`; the same as
/// [`max_flow`] after contracting `sinks` into one vertex.
pub fn max_flow_multi(g: &Graph, s: usize, sinks: &[usize]) -> Result<FlowResult> {
    check_vertex(g, s)?;
    if sinks.is_empty() {
        return Err(invalid("sink set is empty"));
    }
    for &t in sinks {
        check_vertex(g, t)?;
        if t == s {
            return Err(invalid(format!("source {s} is also a sink")));
        }
    }
    let (value, reach) = min_cut_between(g, &[s], sinks);
    Ok(result_from(g, value, reach))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphKind};
    use crate::graph::contract;
    use proptest::prelude::*;

    /// Minimum over every set containing all sinks and not `s`.
    fn brute(g: &Graph, s: usize, sinks: &[usize]) -> u64 {
        let n = g.n();
        (0u32..1 << n)
            .filter(|m| m >> s & 1 == 0 && sinks.iter().all(|&t| m >> t & 1 == 1))
            .map(|m| g.cut_value_mask(&(0..n).map(|v| m >> v & 1 == 1).collect::<Vec<_>>()))
            .min()
            .unwrap()
    }

    #[test]
    fn path_bottleneck() {
        let g = Graph::new(3, [(0, 1, 3), (1, 2, 5)]).unwrap();
        let r = max_flow(&g, 0, 2).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.source_side(3), vec![0]);
        assert_eq!(r.cut.side, vec![1, 2]);
    }

    #[test]
    fn unit_k4_pairs() {
        let g = generate(GraphKind::Clique, 4, 0, (1, 1)).unwrap();
        for s in 0..4 {
            for t in 0..4 {
                if s != t {
                    assert_eq!(max_flow(&g, s, t).unwrap().value, 3);
                }
            }
        }
    }

    #[test]
    fn random_graphs_match_enumeration() {
        for seed in 0..40 {
            let g = generate(GraphKind::ErdosRenyi { p: 0.35 }, 10, seed, (1, 10)).unwrap();
            let (s, t) = (seed as usize % 10, (seed as usize * 7 + 3) % 10);
            if s == t {
                continue;
            }
            let r = max_flow(&g, s, t).unwrap();
            assert_eq!(r.value, brute(&g, s, &[t]));
            assert_eq!(g.cut_value(&r.cut.side).unwrap(), r.value);
        }
    }

    #[test]
    fn same_endpoints_rejected() {
        let g = Graph::new(2, [(0, 1, 1)]).unwrap();
        assert!(max_flow(&g, 1, 1).is_err());
        assert!(max_flow(&g, 0, 2).is_err());
    }

    #[test]
    fn disconnected_pair_has_zero_flow() {
        let g = Graph::new(4, [(0, 1, 2), (2, 3, 2)]).unwrap();
        let r = max_flow(&g, 0, 3).unwrap();
        assert_eq!(r.value, 0);
        assert_eq!(r.source_side(4), vec![0, 1]);
    }

    #[test]
    fn source_side_is_minimal() {
        // Two minimum cuts of value 1: {0} and {0, 1}. The minimal one wins.
        let g = Graph::new(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(max_flow(&g, 0, 2).unwrap().source_side(3), vec![0]);
        assert_eq!(max_flow(&g, 2, 0).unwrap().source_side(3), vec![2]);
    }

    #[test]
    fn singleton_sink_set_is_plain_flow() {
        let g = generate(GraphKind::ErdosRenyi { p: 0.4 }, 9, 2, (1, 7)).unwrap();
        assert_eq!(max_flow_multi(&g, 1, &[5]).unwrap(), max_flow(&g, 1, 5).unwrap());
    }

    #[test]
    fn star_to_all_leaves() {
        let g = Graph::new(5, (1..5).map(|v| (0, v, 1))).unwrap();
        let r = max_flow_multi(&g, 0, &[1, 2, 3, 4]).unwrap();
        assert_eq!(r.value, g.degree(0));
    }

    #[test]
    fn multi_sink_rejects_source_in_sinks() {
        let g = Graph::new(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(max_flow_multi(&g, 0, &[0, 2]).is_err());
        assert!(max_flow_multi(&g, 0, &[]).is_err());
    }

    #[test]
    fn multi_sink_matches_enumeration_and_contraction() {
        for seed in 0..30 {
            let g = generate(GraphKind::ErdosRenyi { p: 0.3 }, 10, seed, (1, 10)).unwrap();
            let s = seed as usize % 10;
            let sinks: Vec<usize> = (0..10).filter(|&v| v != s && (v * 5 + seed as usize) % 3 == 0).collect();
            if sinks.is_empty() {
                continue;
            }
            let r = max_flow_multi(&g, s, &sinks).unwrap();
            assert_eq!(r.value, brute(&g, s, &sinks));
            let (q, map) = contract(&g, &[sinks.clone()]).unwrap();
            let via = max_flow(&q, map.forward[s], 0).unwrap();
            assert_eq!(via.value, r.value);
            assert_eq!(map.lift_cut(&via.cut), r.cut);
        }
    }

    proptest! {
        #[test]
        fn flow_is_symmetric_and_degree_bounded(seed in 0u64..300, s in 0usize..12, t in 0usize..12) {
            prop_assume!(s != t);
            let g = generate(GraphKind::ErdosRenyi { p: 0.3 }, 12, seed, (1, 50)).unwrap();
            let st = max_flow(&g, s, t).unwrap();
            let ts = max_flow(&g, t, s).unwrap();
            prop_assert_eq!(st.value, ts.value);
            prop_assert!(st.value <= g.degree(s).min(g.degree(t)));
            prop_assert_eq!(g.cut_value(&st.cut.side).unwrap(), st.value);
        }
    }
}
