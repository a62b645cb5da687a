//! Exhaustive ground truth for small graphs.
//!
//! Everything here enumerates vertex subsets directly and evaluates each one
//! by scanning the edge list. Nothing is clever on purpose: these functions
//! are the reference the algorithms are checked against.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Cut, Graph};
use crate::steiner::SteinerTree;
use crate::value::CutValue;

pub const MAX_ORACLE_N: usize = 16;
pub const MAX_ISOLATING_N: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleAnswer {
    pub value: CutValue,
    /// Every optimal side, as the side holding the sink (or the group).
    pub witnesses: Vec<Cut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatingAnswer {
    pub group: usize,
    pub value: CutValue,
    /// The optimal side with the fewest vertices.
    pub minimal: Vec<usize>,
    pub witnesses: Vec<Cut>,
}

/// Cut values of every vertex subset of one graph, indexed by bitmask.
pub struct Oracle<'g> {
    g: &'g Graph,
    values: Vec<u64>,
}

impl<'g> Oracle<'g> {
    pub fn new(g: &'g Graph) -> Result<Self> {
        Self::with_limit(g, MAX_ORACLE_N)
    }

    fn with_limit(g: &'g Graph, limit: usize) -> Result<Self> {
        let n = g.n();
        if n > limit {
            return Err(Error::TooLarge { n, limit });
        }
        let values = (0u32..1 << n)
            .map(|mask| {
                g.edges()
                    .iter()
                    .filter(|e| (mask >> e.u & 1) != (mask >> e.v & 1))
                    .map(|e| e.w)
                    .sum()
            })
            .collect();
        Ok(Self { g, values })
    }

    fn cut(&self, mask: u32) -> Cut {
        let side = (0..self.g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        Cut { side, value: self.values[mask as usize] }
    }

    fn best(&self, feasible: impl Fn(u32) -> bool) -> OracleAnswer {
        let mut best = CutValue::Infinite;
        let mut masks = Vec::new();
        for mask in 0..self.values.len() as u32 {
            if !feasible(mask) {
                continue;
            }
            let v = CutValue::Finite(self.values[mask as usize]);
            if v < best {
                best = v;
                masks.clear();
            }
            if v == best {
                masks.push(mask);
            }
        }
        OracleAnswer { value: best, witnesses: masks.into_iter().map(|m| self.cut(m)).collect() }
    }

    fn check_pair(&self, s: usize, t: usize) -> Result<()> {
        let n = self.g.n();
        if s >= n || t >= n {
            return Err(invalid(format!("vertex outside 0..{n}")));
        }
        if s == t {
            return Err(invalid(format!("source and sink are both {s}")));
        }
        Ok(())
    }

    /// `λ(s, t)`: minimum `δ(A)` over `t ∈ A`, `s ∉ A`.
    pub fn lambda(&self, s: usize, t: usize) -> Result<OracleAnswer> {
        self.check_pair(s, t)?;
        Ok(self.best(|m| m >> t & 1 == 1 && m >> s & 1 == 0))
    }

    fn crossings(tree: &SteinerTree, mask: u32) -> usize {
        tree.edges().iter().filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1)).count()
    }

    /// `λ_{T,k}(s, t)` with `s` the tree's source: like [`Self::lambda`] but
    /// only over cuts crossing at most `k` tree edges.
    pub fn lambda_tk(&self, tree: &SteinerTree, t: usize, k: usize) -> Result<OracleAnswer> {
        let s = tree.source();
        self.check_pair(s, t)?;
        tree.check_within(self.g.n())?;
        Ok(self.best(|m| m >> t & 1 == 1 && m >> s & 1 == 0 && Self::crossings(tree, m) <= k))
    }

    /// `η_{T,k}(s, t)`: as [`Self::lambda_tk`], additionally requiring the
    /// source's unique tree neighbor `p` on `t`'s side.
    pub fn eta_tk(&self, tree: &SteinerTree, t: usize, k: usize) -> Result<OracleAnswer> {
        let s = tree.source();
        self.check_pair(s, t)?;
        tree.check_within(self.g.n())?;
        let p = leaf_neighbor(tree)?;
        Ok(self.best(|m| {
            m >> t & 1 == 1 && m >> s & 1 == 0 && m >> p & 1 == 1 && Self::crossings(tree, m) <= k
        }))
    }

    /// `λ(U)`: minimum over all cuts with terminals on both sides.
    pub fn steiner_mincut(&self, terminals: &[usize]) -> Result<OracleAnswer> {
        if terminals.len() < 2 {
            return Err(invalid("need at least two terminals"));
        }
        if terminals.iter().any(|&u| u >= self.g.n()) {
            return Err(invalid("terminal outside the graph"));
        }
        let tmask: u32 = terminals.iter().map(|&u| 1u32 << u).fold(0, |a, b| a | b);
        Ok(self.best(|m| m & tmask != 0 && m & tmask != tmask))
    }
}

pub(crate) fn leaf_neighbor(tree: &SteinerTree) -> Result<usize> {
    let s = tree.source();
    let mut nbrs = tree.neighbors(s);
    match (nbrs.next(), nbrs.next()) {
        (Some(p), None) => Ok(p),
        _ => Err(invalid(format!("source {s} is not a leaf of the tree"))),
    }
}

pub fn brute_lambda(g: &Graph, s: usize, t: usize) -> Result<OracleAnswer> {
    Oracle::new(g)?.lambda(s, t)
}

pub fn brute_lambda_tk(g: &Graph, tree: &SteinerTree, t: usize, k: usize) -> Result<OracleAnswer> {
    Oracle::new(g)?.lambda_tk(tree, t, k)
}

pub fn brute_eta_tk(g: &Graph, tree: &SteinerTree, t: usize, k: usize) -> Result<OracleAnswer> {
    Oracle::new(g)?.eta_tk(tree, t, k)
}

pub fn brute_steiner_mincut(g: &Graph, terminals: &[usize]) -> Result<OracleAnswer> {
    Oracle::new(g)?.steiner_mincut(terminals)
}

/// Per group: the minimum `δ(S)` over sets holding the whole group and no
/// vertex of any other group.
pub fn brute_isolating(g: &Graph, groups: &[Vec<usize>]) -> Result<Vec<IsolatingAnswer>> {
    let oracle = Oracle::with_limit(g, MAX_ISOLATING_N)?;
    let masks: Vec<u32> = groups
        .iter()
        .map(|grp| grp.iter().map(|&v| 1u32 << v).fold(0, |a, b| a | b))
        .collect();
    let mut out = Vec::with_capacity(groups.len());
    for (i, &own) in masks.iter().enumerate() {
        let others = masks.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |a, (_, &m)| a | m);
        let ans = oracle.best(|m| m & own == own && m & others == 0);
        let minimal = ans
            .witnesses
            .iter()
            .min_by_key(|c| c.side.len())
            .map(|c| c.side.clone())
            .unwrap_or_default();
        out.push(IsolatingAnswer { group: i, value: ans.value, minimal, witnesses: ans.witnesses });
    }
    Ok(out)
}
