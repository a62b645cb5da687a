//! Seeded instance generators: graphs, spanning trees and random Steiner trees.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::steiner::SteinerTree;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GraphKind {
    /// Each pair is an edge with probability `p`; components are then joined.
    ErdosRenyi { p: f64 },
    Clique,
    /// Two dense halves joined by crossing edges of total weight `value`,
    /// which is then the global minimum cut.
    PlantedCut { value: u64 },
}

/// Generates a connected graph on `n` vertices with weights drawn uniformly
/// from the inclusive range `weights`.
pub fn generate(kind: GraphKind, n: usize, seed: u64, weights: (u64, u64)) -> Result<Graph> {
    let (lo, hi) = weights;
    if n < 2 {
        return Err(invalid(format!("need at least 2 vertices, got {n}")));
    }
    if lo == 0 || lo > hi {
        return Err(invalid(format!("bad weight range {lo}..={hi}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    match kind {
        GraphKind::Clique => {
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v, rng.gen_range(lo..=hi)));
                }
            }
        }
        GraphKind::ErdosRenyi { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("edge probability {p} outside [0, 1]")));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v, rng.gen_range(lo..=hi)));
                    }
                }
            }
            join_components(n, &mut edges, &mut rng, (lo, hi));
        }
        GraphKind::PlantedCut { value } => {
            if value == 0 {
                return Err(invalid("planted cut value must be positive"));
            }
            let half = n / 2;
            let sizes = [half, n - half];
            let smallest = sizes.iter().copied().filter(|&s| s >= 2).min().unwrap_or(2);
            // Any cut that splits a half crosses at least `smallest - 1` of its clique edges.
            let floor = value.div_ceil(smallest as u64 - 1);
            for (start, end) in [(0, half), (half, n)] {
                for u in start..end {
                    for v in u + 1..end {
                        edges.push((u, v, rng.gen_range(lo..=hi).max(floor)));
                    }
                }
            }
            let crossing = value.min((half * (n - half)) as u64).min(n as u64);
            let mut parts = vec![1u64; crossing as usize];
            for _ in crossing..value {
                let i = rng.gen_range(0..parts.len());
                parts[i] += 1;
            }
            for w in parts {
                let u = rng.gen_range(0..half);
                let v = rng.gen_range(half..n);
                edges.push((u, v, w));
            }
        }
    }
    Graph::new(n, edges)
}

fn join_components(n: usize, edges: &mut Vec<(usize, usize, u64)>, rng: &mut impl Rng, w: (u64, u64)) {
    let mut dsu = Dsu::new(n);
    for &(u, v, _) in edges.iter() {
        dsu.union(u, v);
    }
    let mut roots: Vec<usize> = (0..n).filter(|&v| dsu.find(v) == v).collect();
    roots.shuffle(rng);
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1], rng.gen_range(w.0..=w.1)));
    }
}

/// A uniformly shuffled Kruskal spanning tree of a connected graph.
pub fn random_spanning_tree(g: &Graph, source: usize, rng: &mut impl Rng) -> Result<SteinerTree> {
    if !g.is_connected() {
        return Err(crate::Error::Disconnected);
    }
    let mut order: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    order.shuffle(rng);
    let mut dsu = Dsu::new(g.n());
    let tree_edges = order.into_iter().filter(|&(u, v)| dsu.union(u, v)).collect();
    SteinerTree::new((0..g.n()).collect(), tree_edges, source)
}

/// A random tree on `vertices` (edges need not exist in any graph): each
/// vertex in shuffled order attaches to a uniformly chosen earlier one.
pub fn random_tree(vertices: &[usize], source: usize, rng: &mut impl Rng) -> Result<SteinerTree> {
    let mut order = vertices.to_vec();
    order.shuffle(rng);
    let edges = (1..order.len())
        .map(|i| (order[rng.gen_range(0..i)], order[i]))
        .collect();
    SteinerTree::new(vertices.to_vec(), edges, source)
}

/// A random tree on `vertices` in which `source` is a leaf.
pub fn random_tree_with_leaf_source(
    vertices: &[usize],
    source: usize,
    rng: &mut impl Rng,
) -> Result<SteinerTree> {
    let rest: Vec<usize> = vertices.iter().copied().filter(|&v| v != source).collect();
    if rest.is_empty() || rest.len() + 1 != vertices.len() {
        return Err(invalid("source must be one of at least two tree vertices"));
    }
    let inner = random_tree(&rest, rest[0], rng)?;
    let mut edges = inner.edges().to_vec();
    edges.push((source, rest[rng.gen_range(0..rest.len())]));
    SteinerTree::new(vertices.to_vec(), edges, source)
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.parent[a.max(b)] = a.min(b);
        true
    }
}
