//! Gomory-Hu trees by Gusfield's method: `n - 1` max-flows on the original
//! graph, no contractions.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::maxflow::{max_flow, FlowResult};

/// A tree on `0..n` rooted at vertex 0. `parent[v]` and `weight[v]`
/// describe the edge from `v` to its parent; both are unset at the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GHTree {
    pub parent: Vec<Option<usize>>,
    pub weight: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub a: usize,
    pub b: usize,
    pub tree_value: u64,
    pub true_value: u64,
}

impl GHTree {
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// Checks that parent pointers form a single tree on `0..n`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.weight.len() != n {
            return Err(invalid("parent and weight lists differ in length"));
        }
        let roots = self.parent.iter().filter(|p| p.is_none()).count();
        if n > 0 && roots != 1 {
            return Err(invalid(format!("expected one root, found {roots}")));
        }
        for v in 0..n {
            let mut x = v;
            for _ in 0..=n {
                match self.parent[x] {
                    None => break,
                    Some(p) if p >= n => return Err(invalid(format!("parent {p} outside 0..{n}"))),
                    Some(p) => x = p,
                }
            }
            if self.parent[x].is_some() {
                return Err(invalid(format!("vertex {v} lies on a parent cycle")));
            }
        }
        Ok(())
    }

    fn depths(&self) -> Vec<usize> {
        let n = self.n();
        let mut depth = vec![usize::MAX; n];
        for v in 0..n {
            let mut chain = Vec::new();
            let mut x = v;
            while depth[x] == usize::MAX {
                match self.parent[x] {
                    Some(p) => {
                        chain.push(x);
                        x = p;
                    }
                    None => {
                        depth[x] = 0;
                    }
                }
            }
            let mut d = depth[x];
            for &y in chain.iter().rev() {
                d += 1;
                depth[y] = d;
            }
        }
        depth
    }

    /// The minimum edge weight on the tree path between `a` and `b`.
    pub fn query(&self, a: usize, b: usize) -> Result<u64> {
        let n = self.n();
        if a >= n || b >= n {
            return Err(invalid(format!("vertex outside 0..{n}")));
        }
        if a == b {
            return Err(invalid(format!("query endpoints are both {a}")));
        }
        let depth = self.depths();
        let (mut a, mut b) = (a, b);
        let mut best = u64::MAX;
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            best = best.min(self.weight[a]);
            a = self.parent[a].ok_or_else(|| Error::Internal("walked past the root".into()))?;
        }
        Ok(best)
    }
}

/// Builds a Gomory-Hu tree with root 0.
pub fn build_gusfield(g: &Graph) -> Result<GHTree> {
    build_gusfield_with(g, max_flow)
}

/// [`build_gusfield`] with a caller-supplied max-flow routine.
pub fn build_gusfield_with(
    g: &Graph,
    mut flow: impl FnMut(&Graph, usize, usize) -> Result<FlowResult>,
) -> Result<GHTree> {
    let n = g.n();
    if n == 0 {
        return Err(invalid("graph has no vertices"));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut parent = vec![0usize; n];
    let mut weight = vec![0u64; n];
    for i in 1..n {
        let f = flow(g, i, parent[i])?;
        weight[i] = f.value;
        // `cut.side` holds the sink; everything else is on i's side.
        let mut on_i_side = vec![true; n];
        for &v in &f.cut.side {
            on_i_side[v] = false;
        }
        for j in i + 1..n {
            if parent[j] == parent[i] && on_i_side[j] {
                parent[j] = i;
            }
        }
    }
    let parent = (0..n).map(|v| (v != 0).then_some(parent[v])).collect();
    Ok(GHTree { parent, weight })
}

/// Compares every pair against a fresh max-flow and returns the first pair
/// `(a, b)`, `a < b` in lexicographic order, where the tree is wrong.
pub fn verify_gh(g: &Graph, t: &GHTree) -> Result<Option<Counterexample>> {
    if t.n() != g.n() {
        return Err(invalid(format!("tree has {} vertices, graph has {}", t.n(), g.n())));
    }
    t.validate()?;
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            let tree_value = t.query(a, b)?;
            let true_value = max_flow(g, a, b)?.value;
            if tree_value != true_value {
                return Ok(Some(Counterexample { a, b, tree_value, true_value }));
            }
        }
    }
    Ok(None)
}
