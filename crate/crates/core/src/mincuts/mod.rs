//! Guided single-source minimum cuts.
//!
//! [`tree_mincuts`] takes a graph, a Steiner tree `T` rooted at a source `s`
//! and a crossing budget `k`, and fills a [`MuTable`] with a value `μ(s, t)`
//! for every other tree vertex `t` such that
//!
//! * `μ(s, t) ≥ λ(s, t)` always, because every value written is the weight of
//!   a real cut separating `s` from `t`, and
//! * `μ(s, t) ≤ λ_{T,k}(s, t)` with high probability, where `λ_{T,k}` is the
//!   cheapest `(s, t)`-cut crossing at most `k` edges of `T`.
//!
//! [`leaf_mincuts`] is the companion for trees where `s` is a leaf with tree
//! neighbor `p`; its upper bound is `η_{T,k}(s, t)`, the cheapest such cut
//! that also separates `s` from `p`.

mod recursion;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{Cut, Graph};
use crate::oracle::leaf_neighbor;
use crate::steiner::SteinerTree;
use crate::value::CutValue;

pub use recursion::{derive_seed, Phase};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Pruning repetitions are `⌈reps_coeff · log2 n⌉`.
    pub reps_coeff: f64,
    /// Trees with at most this many vertices are solved by one max-flow per
    /// terminal.
    pub base_threshold: usize,
    /// Keep a witness cut (in original vertex ids) for every μ value.
    pub track_witnesses: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self { reps_coeff: 3.0, base_threshold: 4, track_witnesses: false }
    }
}

impl Config {
    pub fn repetitions(&self, n: usize) -> usize {
        let log = (n.max(2) as f64).log2();
        ((self.reps_coeff * log).ceil() as usize).max(1)
    }

    fn check(&self) -> Result<()> {
        if !(self.reps_coeff.is_finite() && self.reps_coeff > 0.0) {
            return Err(invalid(format!("repetition coefficient {} must be positive", self.reps_coeff)));
        }
        if self.base_threshold < 2 {
            return Err(invalid("base threshold must be at least 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuEntry {
    pub value: CutValue,
    /// The side of the cut holding the terminal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Cut>,
}

/// Candidate cut values `μ(s, t)` for one source. Values only ever decrease.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuTable {
    source: usize,
    entries: BTreeMap<usize, MuEntry>,
}

impl MuTable {
    pub fn new(source: usize) -> Self {
        Self { source, entries: BTreeMap::new() }
    }

    /// A table with an infinite entry for every terminal of `tree`.
    pub fn for_tree(tree: &SteinerTree) -> Self {
        let mut table = Self::new(tree.source());
        for t in tree.terminals() {
            table.entries.insert(t, MuEntry { value: CutValue::Infinite, witness: None });
        }
        table
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn get(&self, t: usize) -> CutValue {
        self.entries.get(&t).map_or(CutValue::Infinite, |e| e.value)
    }

    pub fn entry(&self, t: usize) -> Option<&MuEntry> {
        self.entries.get(&t)
    }

    /// Lowers `μ(t)` to `value` if that is an improvement. Returns whether
    /// the table changed.
    pub fn update(&mut self, t: usize, value: CutValue, witness: Option<Cut>) -> bool {
        if t == self.source {
            return false;
        }
        match self.entries.get_mut(&t) {
            Some(e) if e.value <= value => false,
            Some(e) => {
                *e = MuEntry { value, witness };
                true
            }
            None => {
                self.entries.insert(t, MuEntry { value, witness });
                true
            }
        }
    }

    /// Pointwise minimum with another table for the same source.
    pub fn merge(&mut self, other: &MuTable) -> Result<()> {
        if other.source != self.source {
            return Err(invalid(format!(
                "cannot merge tables for sources {} and {}",
                self.source, other.source
            )));
        }
        for (&t, e) in &other.entries {
            self.update(t, e.value, e.witness.clone());
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &MuEntry)> + '_ {
        self.entries.iter().map(|(&t, e)| (t, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Procedure {
    Tree,
    Leaf,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatEntry {
    pub calls: u64,
    /// Sum of instance vertex counts.
    pub vertices: u64,
    /// Sum of tree sizes.
    pub tree_vertices: u64,
    /// Sum of edge counts, ignoring edges incident to a contracted vertex.
    pub edges: u64,
}

impl StatEntry {
    fn add(&mut self, other: &StatEntry) {
        self.calls += other.calls;
        self.vertices += other.vertices;
        self.tree_vertices += other.tree_vertices;
        self.edges += other.edges;
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StatRow {
    procedure: Procedure,
    k: u32,
    #[serde(flatten)]
    entry: StatEntry,
}

/// Accumulated sizes of every recursive call, keyed by procedure and `k`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<StatRow>", from = "Vec<StatRow>")]
pub struct RecursionStats {
    entries: BTreeMap<(Procedure, u32), StatEntry>,
}

impl From<RecursionStats> for Vec<StatRow> {
    fn from(stats: RecursionStats) -> Self {
        stats
            .entries
            .into_iter()
            .map(|((procedure, k), entry)| StatRow { procedure, k, entry })
            .collect()
    }
}

impl From<Vec<StatRow>> for RecursionStats {
    fn from(rows: Vec<StatRow>) -> Self {
        let mut stats = RecursionStats::default();
        for row in rows {
            stats.entries.entry((row.procedure, row.k)).or_default().add(&row.entry);
        }
        stats
    }
}

impl RecursionStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn record(&mut self, procedure: Procedure, k: u32, n: usize, t: usize, m: u64) {
        let e = self.entries.entry((procedure, k)).or_default();
        e.calls += 1;
        e.vertices += n as u64;
        e.tree_vertices += t as u64;
        e.edges += m;
    }

    pub fn get(&self, procedure: Procedure, k: u32) -> StatEntry {
        self.entries.get(&(procedure, k)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Procedure, u32, &StatEntry)> + '_ {
        self.entries.iter().map(|(&(p, k), e)| (p, k, e))
    }

    /// Sums over every procedure and every `k`.
    pub fn total(&self) -> StatEntry {
        let mut sum = StatEntry::default();
        for e in self.entries.values() {
            sum.add(e);
        }
        sum
    }

    pub fn merge(&mut self, other: &RecursionStats) {
        for (key, e) in &other.entries {
            self.entries.entry(*key).or_default().add(e);
        }
    }
}

fn check_inputs(g: &Graph, tree: &SteinerTree, mu: &MuTable, cfg: &Config) -> Result<()> {
    cfg.check()?;
    tree.check_within(g.n())?;
    if mu.source() != tree.source() {
        return Err(invalid(format!(
            "table is for source {} but the tree is rooted at {}",
            mu.source(),
            tree.source()
        )));
    }
    Ok(())
}

/// Lowers `mu(t)` towards `λ_{T,k}(s, t)` for every terminal `t` of `tree`,
/// where `s` is the tree's source. All randomness derives from `seed`.
pub fn tree_mincuts(
    g: &Graph,
    tree: &SteinerTree,
    k: u32,
    mu: &mut MuTable,
    seed: u64,
    stats: &mut RecursionStats,
    cfg: &Config,
) -> Result<()> {
    check_inputs(g, tree, mu, cfg)?;
    recursion::run(g, tree, k, mu, seed, stats, cfg, Procedure::Tree)
}

/// As [`tree_mincuts`], for a tree whose source is a leaf; the target is
/// `η_{T,k}(s, t)`.
pub fn leaf_mincuts(
    g: &Graph,
    tree: &SteinerTree,
    k: u32,
    mu: &mut MuTable,
    seed: u64,
    stats: &mut RecursionStats,
    cfg: &Config,
) -> Result<()> {
    check_inputs(g, tree, mu, cfg)?;
    leaf_neighbor(tree)?;
    recursion::run(g, tree, k, mu, seed, stats, cfg, Procedure::Leaf)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Tight,
    Loose,
}

/// Decides for each estimate `μ_t ≥ λ(s, t)` whether it is tight, using
/// guide trees of which at least one should `k`-respect a minimum
/// `(s, t)`-cut for every `t`.
///
/// An estimate is reported loose only when a strictly cheaper `(s, t)`-cut
/// was found, so "loose" never needs the guide-tree promise. "Tight" relies
/// on it and holds with high probability.
#[allow(clippy::too_many_arguments)]
pub fn sstcv_verify(
    g: &Graph,
    terminals: &[usize],
    s: usize,
    estimates: &BTreeMap<usize, u64>,
    guide_trees: &[SteinerTree],
    k: u32,
    seed: u64,
    cfg: &Config,
) -> Result<BTreeMap<usize, Verdict>> {
    if s >= g.n() {
        return Err(invalid(format!("source {s} outside 0..{}", g.n())));
    }
    for &t in estimates.keys() {
        if t == s || !terminals.contains(&t) {
            return Err(invalid(format!("estimate given for {t}, which is not a terminal")));
        }
    }
    let mut mu = MuTable::new(s);
    let mut stats = RecursionStats::new();
    for (i, tree) in guide_trees.iter().enumerate() {
        if let Some(&t) = terminals.iter().find(|&&t| !tree.contains(t)) {
            return Err(invalid(format!("guide tree {i} misses terminal {t}")));
        }
        let tree = if tree.source() == s {
            tree.clone()
        } else if tree.contains(s) {
            SteinerTree::new(tree.vertices().to_vec(), tree.edges().to_vec(), s)?
        } else {
            return Err(invalid(format!("guide tree {i} misses the source {s}")));
        };
        tree_mincuts(g, &tree, k, &mut mu, derive_seed(seed, Phase::GuideTree, i), &mut stats, cfg)?;
    }
    Ok(estimates
        .iter()
        .map(|(&t, &est)| {
            let verdict = if mu.get(t) >= CutValue::Finite(est) { Verdict::Tight } else { Verdict::Loose };
            (t, verdict)
        })
        .collect())
}
