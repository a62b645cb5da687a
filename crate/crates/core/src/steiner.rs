//! Steiner trees and the centroid decomposition used by the guided
//! min-cut recursion.
//!
//! A [`SteinerTree`] lives on a subset of a graph's vertices and its edges
//! need not be graph edges. [`decompose`] splits a tree around a centroid
//! `c` into the source `s`, the forest `F` hanging off `s` away from `c`, the
//! middle part `T0` between `s` and `c`, and the side trees of `T \ {c}`
//! that do not contain `s`.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::Cut;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerTree {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
    source: usize,
    index: HashMap<usize, usize>,
    offsets: Vec<usize>,
    adj: Vec<usize>,
}

impl SteinerTree {
    /// Validates that `edges` form one tree spanning exactly `vertices` and
    /// that `source` is a member.
    pub fn new(mut vertices: Vec<usize>, edges: Vec<(usize, usize)>, source: usize) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        let index: HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        if !index.contains_key(&source) {
            return Err(invalid(format!("source {source} is not a tree vertex")));
        }
        if edges.len() + 1 != vertices.len() {
            return Err(invalid(format!(
                "{} edges cannot form a tree on {} vertices",
                edges.len(),
                vertices.len()
            )));
        }
        let t = vertices.len();
        let mut offsets = vec![0usize; t + 1];
        for &(u, v) in &edges {
            for x in [u, v] {
                let i = *index
                    .get(&x)
                    .ok_or_else(|| invalid(format!("tree edge ({u}, {v}) leaves the vertex list")))?;
                offsets[i + 1] += 1;
            }
        }
        for i in 0..t {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets[..t].to_vec();
        let mut adj = vec![0usize; offsets[t]];
        for &(u, v) in &edges {
            let (a, b) = (index[&u], index[&v]);
            adj[cursor[a]] = b;
            cursor[a] += 1;
            adj[cursor[b]] = a;
            cursor[b] += 1;
        }
        let tree = Self { vertices, edges, source, index, offsets, adj };
        if tree.reach_count(tree.index[&source], usize::MAX) != t {
            return Err(invalid("tree edges do not connect all tree vertices"));
        }
        Ok(tree)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.index.contains_key(&v)
    }

    /// Tree vertices other than the source.
    pub fn terminals(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().copied().filter(move |&v| v != self.source)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let i = self.index[&v];
        self.adj[self.offsets[i]..self.offsets[i + 1]].iter().map(|&j| self.vertices[j])
    }

    pub fn degree(&self, v: usize) -> usize {
        let i = self.index[&v];
        self.offsets[i + 1] - self.offsets[i]
    }

    /// The tree restricted to `keep`, which must induce a connected subtree
    /// containing `source`.
    pub fn induced(&self, keep: &[usize], source: usize) -> Result<SteinerTree> {
        let mut mark = vec![false; self.len()];
        for &v in keep {
            let i = *self.index.get(&v).ok_or_else(|| invalid(format!("{v} is not a tree vertex")))?;
            mark[i] = true;
        }
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|(u, v)| mark[self.index[u]] && mark[self.index[v]])
            .collect();
        SteinerTree::new(keep.to_vec(), edges, source)
    }

    /// Renames every vertex through `f`, which must be injective on the tree.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Result<SteinerTree> {
        SteinerTree::new(
            self.vertices.iter().map(|&v| f(v)).collect(),
            self.edges.iter().map(|&(u, v)| (f(u), f(v))).collect(),
            f(self.source),
        )
    }

    /// Checks that every vertex id is below `n`.
    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.vertices.last() {
            Some(&v) if v >= n => Err(invalid(format!("tree vertex {v} outside graph 0..{n}"))),
            _ => Ok(()),
        }
    }

    fn reach_count(&self, start: usize, blocked: usize) -> usize {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        if blocked < seen.len() {
            seen[blocked] = true;
        }
        let mut count = 0;
        while let Some(i) = stack.pop() {
            count += 1;
            for &j in &self.adj[self.offsets[i]..self.offsets[i + 1]] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        count
    }

    /// Parent pointers (local indices) and BFS order for the tree rooted at
    /// local index `root`.
    fn rooted(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let mut parent = vec![usize::MAX; self.len()];
        let mut order = Vec::with_capacity(self.len());
        parent[root] = root;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let i = order[head];
            head += 1;
            for &j in &self.adj[self.offsets[i]..self.offsets[i + 1]] {
                if parent[j] == usize::MAX {
                    parent[j] = i;
                    order.push(j);
                }
            }
        }
        (parent, order)
    }
}

/// A vertex whose removal leaves components of at most `⌊2|V(T)|/3⌋`
/// vertices. Picks the vertex with the smallest largest remaining component,
/// lowest id on ties.
pub fn centroid(t: &SteinerTree) -> usize {
    let n = t.len();
    let (parent, order) = t.rooted(0);
    let mut size = vec![1usize; n];
    let mut heaviest_child = vec![0usize; n];
    for &i in order.iter().skip(1).rev() {
        let p = parent[i];
        size[p] += size[i];
        heaviest_child[p] = heaviest_child[p].max(size[i]);
    }
    (0..n)
        .map(|i| (heaviest_child[i].max(n - size[i]), t.vertices[i]))
        .min()
        .map(|(_, v)| v)
        .unwrap_or(t.source)
}

/// Components of `T \ {v}`, each sorted, ordered by smallest member.
pub fn split_at(t: &SteinerTree, v: usize) -> Vec<Vec<usize>> {
    let root = t.index[&v];
    let (parent, order) = t.rooted(root);
    let mut label = vec![usize::MAX; t.len()];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for &i in order.iter().skip(1) {
        let p = parent[i];
        label[i] = if p == root {
            parts.push(Vec::new());
            parts.len() - 1
        } else {
            label[p]
        };
        parts[label[i]].push(t.vertices[i]);
    }
    for part in &mut parts {
        part.sort_unstable();
    }
    parts.sort_unstable_by_key(|p| p[0]);
    parts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub centroid: usize,
    /// Tree path from the source to the centroid, both ends included.
    pub path: Vec<usize>,
    /// Vertices hanging off the source on the side away from the centroid.
    pub forest: Vec<usize>,
    /// The rest of the source's component of `T \ {c}`: the inner path
    /// vertices and everything hanging off them. Excludes `s` and `c`.
    pub middle: Vec<usize>,
    /// Components of `T \ {c}` that do not contain the source.
    pub side_trees: Vec<Vec<usize>>,
}

impl Decomposition {
    /// Parts that may be pruned: the forest (if non-empty) and each side tree.
    pub fn prunable(&self) -> Vec<Vec<usize>> {
        let mut parts = Vec::with_capacity(self.side_trees.len() + 1);
        if !self.forest.is_empty() {
            parts.push(self.forest.clone());
        }
        parts.extend(self.side_trees.iter().cloned());
        parts
    }
}

/// Splits `t` around its centroid. When the source is the centroid, the path
/// is trivial and both the forest and the middle part are empty.
pub fn decompose(t: &SteinerTree) -> Decomposition {
    let c = centroid(t);
    let s = t.source;
    let root = t.index[&c];
    let (parent, order) = t.rooted(root);
    let si = t.index[&s];

    // Which child-of-c subtree each vertex is in; the source's subtree is
    // `C_s`, everything else is a side tree.
    let mut branch = vec![usize::MAX; t.len()];
    for &i in order.iter().skip(1) {
        branch[i] = if parent[i] == root { i } else { branch[parent[i]] };
    }

    let mut path = vec![s];
    let mut i = si;
    while i != root {
        i = parent[i];
        path.push(t.vertices[i]);
    }

    // Descendants of s in the c-rooted tree form the forest.
    let mut below_s = vec![false; t.len()];
    if si != root {
        below_s[si] = true;
        for &i in order.iter().skip(1) {
            if below_s[parent[i]] {
                below_s[i] = true;
            }
        }
    }

    let mut forest = Vec::new();
    let mut middle = Vec::new();
    let mut sides: HashMap<usize, Vec<usize>> = HashMap::new();
    for &i in order.iter().skip(1) {
        let v = t.vertices[i];
        if si != root && branch[i] == branch[si] {
            if i == si {
                continue;
            }
            if below_s[i] {
                forest.push(v);
            } else {
                middle.push(v);
            }
        } else {
            sides.entry(branch[i]).or_default().push(v);
        }
    }
    forest.sort_unstable();
    middle.sort_unstable();
    let mut side_trees: Vec<Vec<usize>> = sides.into_values().collect();
    for part in &mut side_trees {
        part.sort_unstable();
    }
    side_trees.sort_unstable_by_key(|p| p[0]);
    Decomposition { centroid: c, path, forest, middle, side_trees }
}

/// Number of tree edges whose endpoints lie on opposite sides of `cut`.
pub fn respects_count(t: &SteinerTree, cut: &Cut) -> usize {
    t.edges.iter().filter(|&&(u, v)| cut.contains(u) != cut.contains(v)).count()
}

/// As [`respects_count`] for a side given as a membership mask over graph ids.
pub fn respects_count_mask(t: &SteinerTree, side: &[bool]) -> usize {
    t.edges.iter().filter(|&&(u, v)| side[u] != side[v]).count()
}

/// Removes each part independently with probability 1/2.
///
/// The parts must be vertex sets whose removal, in any combination, leaves a
/// tree that still contains the source.
pub fn prune_sample(t: &SteinerTree, parts: &[Vec<usize>], rng: &mut impl Rng) -> Result<SteinerTree> {
    let mut removed = vec![false; t.len()];
    for part in parts {
        if rng.gen_bool(0.5) {
            for v in part {
                let i = *t.index.get(v).ok_or_else(|| invalid(format!("{v} is not a tree vertex")))?;
                removed[i] = true;
            }
        }
    }
    if removed[t.index[&t.source]] {
        return Err(Error::Internal("pruning removed the source".into()));
    }
    let vertices: Vec<usize> = (0..t.len()).filter(|&i| !removed[i]).map(|i| t.vertices[i]).collect();
    let edges = t
        .edges
        .iter()
        .copied()
        .filter(|(u, v)| !removed[t.index[u]] && !removed[t.index[v]])
        .collect();
    SteinerTree::new(vertices, edges, t.source)
        .map_err(|e| Error::Internal(format!("pruning left an invalid tree: {e}")))
}
