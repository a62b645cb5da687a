use std::borrow::Cow;
use std::cell::RefCell;
use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Config, MuTable, Procedure, RecursionStats};
use crate::error::{Error, Result};
use crate::graph::{Cut, Graph};
use crate::isolating::{isolating_cuts, IsolatingResult};
use crate::maxflow::{max_flow, max_flow_multi, FlowResult};
use crate::steiner::{centroid, decompose, prune_sample, split_at, SteinerTree};
use crate::value::CutValue;

/// Tags separating the seed streams of sibling recursive calls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    PruneSample = 1,
    Prune = 2,
    Forest = 3,
    SideTree = 4,
    ForestSide = 5,
    Middle = 6,
    Leaf = 7,
    Reduced = 8,
    LeafRest = 9,
    LeafMax = 10,
    GuideTree = 11,
    Bench = 12,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for repetition `index` of `phase` under `parent`.
pub fn derive_seed(parent: u64, phase: Phase, index: usize) -> u64 {
    splitmix(parent ^ splitmix(((phase as u64) << 48) ^ index as u64))
}

/// A graph seen by one recursive call. Vertices flagged `contracted` stand
/// for a set of original vertices (or for a contracted vertex of an
/// ancestor) and are never reported upwards.
struct Instance<'a> {
    g: Cow<'a, Graph>,
    contracted: Vec<bool>,
    free_edges: u64,
    memo: Memo,
}

/// Flow and isolating-cut answers already computed on this instance's graph.
#[derive(Default)]
struct Memo {
    flows: RefCell<HashMap<(usize, Vec<usize>), Rc<FlowResult>>>,
    isolating: RefCell<HashMap<Vec<Vec<usize>>, Rc<IsolatingResult>>>,
    children: RefCell<HashMap<ChildKey, Rc<(Instance<'static>, Lift)>>>,
}

#[derive(PartialEq, Eq, Hash)]
enum ChildKey {
    Collapse(Vec<usize>),
    Quotient(Vec<usize>),
}

impl<'a> Instance<'a> {
    fn new(g: Cow<'a, Graph>, contracted: Vec<bool>) -> Self {
        let free_edges = g
            .edges()
            .iter()
            .filter(|e| !contracted[e.u] && !contracted[e.v])
            .count() as u64;
        Self { g, contracted, free_edges, memo: Memo::default() }
    }

    fn flow(&self, s: usize, sinks: &[usize]) -> Result<Rc<FlowResult>> {
        let key = (s, sinks.to_vec());
        if let Some(f) = self.memo.flows.borrow().get(&key) {
            return Ok(f.clone());
        }
        let f = Rc::new(match sinks {
            [t] => max_flow(&self.g, s, *t)?,
            _ => max_flow_multi(&self.g, s, sinks)?,
        });
        self.memo.flows.borrow_mut().insert(key, f.clone());
        Ok(f)
    }

    fn isolating(&self, groups: &[Vec<usize>]) -> Result<Rc<IsolatingResult>> {
        if let Some(r) = self.memo.isolating.borrow().get(groups) {
            return Ok(r.clone());
        }
        let r = Rc::new(isolating_cuts(&self.g, groups)?);
        self.memo.isolating.borrow_mut().insert(groups.to_vec(), r.clone());
        Ok(r)
    }

    fn n(&self) -> usize {
        self.g.n()
    }
}

/// How to carry a child instance's results to its parent.
struct Lift {
    /// Parent vertex of each child vertex, `None` for contracted ones.
    up: Vec<Option<usize>>,
    /// Child vertex of each parent vertex; only kept to lift witnesses.
    assign: Option<Vec<usize>>,
}

impl Lift {
    fn side(&self, side: &[usize]) -> Option<Vec<usize>> {
        let assign = self.assign.as_ref()?;
        let mut mask = vec![false; self.up.len()];
        for &v in side {
            mask[v] = true;
        }
        Some((0..assign.len()).filter(|&v| mask[assign[v]]).collect())
    }
}

/// μ values local to one instance: terminal → (value, terminal side).
#[derive(Default)]
struct View {
    entries: BTreeMap<usize, (u64, Option<Vec<usize>>)>,
}

impl View {
    fn get(&self, t: usize) -> CutValue {
        self.entries.get(&t).map_or(CutValue::Infinite, |e| CutValue::Finite(e.0))
    }

    fn update(&mut self, t: usize, value: u64, side: impl FnOnce() -> Option<Vec<usize>>) {
        match self.entries.get(&t) {
            Some(&(old, _)) if old <= value => {}
            _ => {
                self.entries.insert(t, (value, side()));
            }
        }
    }
}

const UNSET: usize = usize::MAX;

struct Recursion<'c> {
    cfg: &'c Config,
    reps: usize,
    stats: &'c mut RecursionStats,
}

#[allow(clippy::too_many_arguments)]
pub(super) fn run(
    g: &Graph,
    tree: &SteinerTree,
    k: u32,
    mu: &mut MuTable,
    seed: u64,
    stats: &mut RecursionStats,
    cfg: &Config,
    procedure: Procedure,
) -> Result<()> {
    let inst = Instance::new(Cow::Borrowed(g), vec![false; g.n()]);
    let mut rec = Recursion { cfg, reps: cfg.repetitions(g.n()), stats };
    let mut view = View::default();
    match procedure {
        Procedure::Tree => rec.tree_rec(&inst, &mut view, tree, k, seed)?,
        Procedure::Leaf => rec.leaf_rec(&inst, &mut view, tree, k, seed)?,
    }
    for (t, (value, side)) in view.entries {
        let witness = side.map(|side| Cut { side, value });
        mu.update(t, CutValue::Finite(value), witness);
    }
    Ok(())
}

/// `T[keep ∪ {s}]` with `s` re-attached to `c`; `keep` must induce a subtree
/// containing `c` and not `s`.
fn attach(t: &SteinerTree, keep: &[usize], s: usize, c: usize) -> Result<SteinerTree> {
    let core = t.induced(keep, c)?;
    let mut vertices = core.vertices().to_vec();
    vertices.push(s);
    let mut edges = core.edges().to_vec();
    edges.push((s, c));
    SteinerTree::new(vertices, edges, s)
}

fn with(v: usize, part: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(part.len() + 1);
    out.push(v);
    out.extend_from_slice(part);
    out
}

impl Recursion<'_> {
    fn base(&mut self, inst: &Instance, view: &mut View, t: &SteinerTree) -> Result<()> {
        let s = t.source();
        let track = self.cfg.track_witnesses;
        for x in t.terminals() {
            let f = inst.flow(s, &[x])?;
            view.update(x, f.value, || track.then(|| f.cut.side.clone()));
        }
        Ok(())
    }

    /// Stands in for a call at `k = 0`, which only records its size.
    fn record_idle(&mut self, procedure: Procedure, inst: &Instance, tree_len: usize) {
        self.stats.record(procedure, 0, inst.n(), tree_len, inst.free_edges);
    }

    /// The subtree-pruning phase: `reps` independent samples, each dropping
    /// every part with probability 1/2, recursed on at `k - 1`.
    #[allow(clippy::too_many_arguments)]
    fn prune_phase(
        &mut self,
        procedure: Procedure,
        inst: &Instance,
        view: &mut View,
        t: &SteinerTree,
        parts: &[Vec<usize>],
        k: u32,
        seed: u64,
    ) -> Result<()> {
        for r in 0..self.reps {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, Phase::PruneSample, r));
            if k == 1 {
                let dropped: usize = parts.iter().filter(|_| rng.gen_bool(0.5)).map(Vec::len).sum();
                self.record_idle(procedure, inst, t.len() - dropped);
                continue;
            }
            let pruned = prune_sample(t, parts, &mut rng)?;
            let child_seed = derive_seed(seed, Phase::Prune, r);
            match procedure {
                Procedure::Tree => self.tree_rec(inst, view, &pruned, k - 1, child_seed)?,
                Procedure::Leaf => self.leaf_rec(inst, view, &pruned, k - 1, child_seed)?,
            }
        }
        Ok(())
    }

    fn collapse_child(&self, inst: &Instance, keep: &[usize]) -> Rc<(Instance<'static>, Lift)> {
        let key = ChildKey::Collapse(keep.to_vec());
        if let Some(c) = inst.memo.children.borrow().get(&key) {
            return c.clone();
        }
        let n = inst.n();
        let mut slot = vec![UNSET; n];
        let g = inst.g.collapse_outside(keep, &mut slot);
        let mut contracted: Vec<bool> = keep.iter().map(|&v| inst.contracted[v]).collect();
        contracted.push(true);
        let up = keep.iter().map(|&v| (!inst.contracted[v]).then_some(v)).chain([None]).collect();
        let assign = self.cfg.track_witnesses.then(|| {
            let mut a = vec![keep.len(); n];
            for (i, &v) in keep.iter().enumerate() {
                a[v] = i;
            }
            a
        });
        let child = Rc::new((Instance::new(Cow::Owned(g), contracted), Lift { up, assign }));
        inst.memo.children.borrow_mut().insert(key, child.clone());
        child
    }

    fn quotient_child(&self, inst: &Instance, assign: Vec<usize>, nq: usize) -> Rc<(Instance<'static>, Lift)> {
        let key = ChildKey::Quotient(assign);
        if let Some(c) = inst.memo.children.borrow().get(&key) {
            return c.clone();
        }
        let ChildKey::Quotient(assign) = &key else { unreachable!() };
        let g = inst.g.quotient(assign, nq);
        let mut count = vec![0usize; nq];
        let mut member = vec![UNSET; nq];
        let mut contracted = vec![false; nq];
        for (v, &q) in assign.iter().enumerate() {
            count[q] += 1;
            member[q] = v;
            contracted[q] |= inst.contracted[v];
        }
        let mut up = Vec::with_capacity(nq);
        for q in 0..nq {
            contracted[q] |= count[q] != 1;
            up.push((!contracted[q]).then_some(member[q]));
        }
        let assign = self.cfg.track_witnesses.then(|| assign.clone());
        let child = Rc::new((Instance::new(Cow::Owned(g), contracted), Lift { up, assign }));
        inst.memo.children.borrow_mut().insert(key, child.clone());
        child
    }

    fn merge(&self, parent: &mut View, child: View, lift: &Lift) {
        for (t, (value, side)) in child.entries {
            if let Some(p) = lift.up[t] {
                parent.update(p, value, || side.and_then(|s| lift.side(&s)));
            }
        }
    }

    fn tree_child(
        &mut self,
        child: Rc<(Instance<'static>, Lift)>,
        view: &mut View,
        t: &SteinerTree,
        k: u32,
        seed: u64,
    ) -> Result<()> {
        let (child, lift) = &*child;
        let mut local = View::default();
        self.tree_rec(child, &mut local, t, k, seed)?;
        self.merge(view, local, lift);
        Ok(())
    }

    fn tree_rec(&mut self, inst: &Instance, view: &mut View, t: &SteinerTree, k: u32, seed: u64) -> Result<()> {
        self.stats.record(Procedure::Tree, k, inst.n(), t.len(), inst.free_edges);
        if k == 0 {
            return Ok(());
        }
        if t.len() <= self.cfg.base_threshold {
            return self.base(inst, view, t);
        }
        let d = decompose(t);
        let (s, c) = (t.source(), d.centroid);

        let parts = d.prunable();
        if !parts.is_empty() {
            self.prune_phase(Procedure::Tree, inst, view, t, &parts, k, seed)?;
        }
        if k == 1 && !d.forest.is_empty() {
            self.record_idle(Procedure::Tree, inst, 1 + d.forest.len());
        } else if !d.forest.is_empty() {
            let sub = t.induced(&with(s, &d.forest), s)?;
            self.tree_rec(inst, view, &sub, k - 1, derive_seed(seed, Phase::Forest, 0))?;
        }

        let mut groups = vec![vec![s]];
        let c_idx = (c != s).then(|| {
            groups.push(vec![c]);
            groups.len() - 1
        });
        let f_idx = (!d.forest.is_empty()).then(|| {
            groups.push(d.forest.clone());
            groups.len() - 1
        });
        let m_idx = (!d.middle.is_empty()).then(|| {
            groups.push(d.middle.clone());
            groups.len() - 1
        });
        let first_side = groups.len();
        groups.extend(d.side_trees.iter().cloned());
        let iso = inst.isolating(&groups)?;

        // Each side tree, with everything outside its isolating side merged
        // into the new source that takes the centroid's place.
        for (i, part) in d.side_trees.iter().enumerate() {
            let w = iso.side(first_side + i);
            let out = w.len();
            let sub = t
                .induced(&with(c, part), c)?
                .relabel(|v| if v == c { out } else { position(w, v) })?;
            let child = self.collapse_child(inst, w);
            self.tree_child(child, view, &sub, k, derive_seed(seed, Phase::SideTree, i))?;
        }
        if let Some(fi) = f_idx {
            let w = iso.side(fi);
            let out = w.len();
            let sub = t
                .induced(&with(s, &d.forest), s)?
                .relabel(|v| if v == s { out } else { position(w, v) })?;
            let child = self.collapse_child(inst, w);
            self.tree_child(child, view, &sub, k, derive_seed(seed, Phase::ForestSide, 0))?;
        }
        if let (Some(mi), Some(ci)) = (m_idx, c_idx) {
            // Source absorbs the sides of s and F, the centroid absorbs its
            // own side and all side-tree sides; the middle part stays.
            let mut src = vec![0];
            src.extend(f_idx);
            let mut sink = vec![ci];
            sink.extend(first_side..groups.len());
            let (assign, nq) = two_node_assignment(inst.n(), &iso, &src, &sink);
            debug_assert!(iso.side(mi).iter().all(|&v| assign[v] >= 2));
            let mut keep = with(s, &d.middle);
            keep.push(c);
            let sub = t
                .induced(&keep, s)?
                .relabel(|v| if v == s { 0 } else if v == c { 1 } else { assign[v] })?;
            let child = self.quotient_child(inst, assign, nq);
            self.tree_child(child, view, &sub, k, derive_seed(seed, Phase::Middle, 0))?;
        }

        if c != s {
            let rest: Vec<usize> = std::iter::once(c).chain(d.side_trees.iter().flatten().copied()).collect();
            let t4 = attach(t, &rest, s, c)?;
            self.leaf_rec(inst, view, &t4, k, derive_seed(seed, Phase::Leaf, 0))?;
            if k == 1 {
                self.record_idle(Procedure::Tree, inst, t4.len());
            } else {
                self.tree_rec(inst, view, &t4, k - 1, derive_seed(seed, Phase::Reduced, 0))?;
            }
        }
        Ok(())
    }

    fn leaf_rec(&mut self, inst: &Instance, view: &mut View, t: &SteinerTree, k: u32, seed: u64) -> Result<()> {
        self.stats.record(Procedure::Leaf, k, inst.n(), t.len(), inst.free_edges);
        if k == 0 {
            return Ok(());
        }
        let s = t.source();
        let c = centroid(t);
        if t.len() <= self.cfg.base_threshold || c == s {
            return self.base(inst, view, t);
        }
        let mut sides = split_at(t, c);
        let home = sides
            .iter()
            .position(|p| p.binary_search(&s).is_ok())
            .ok_or_else(|| Error::Internal("source missing from its own component".into()))?;
        let near: Vec<usize> = sides.remove(home).into_iter().filter(|&v| v != s).collect();

        self.prune_phase(Procedure::Leaf, inst, view, t, &sides, k, seed)?;
        let rest: Vec<usize> = std::iter::once(c).chain(sides.iter().flatten().copied()).collect();
        if k == 1 {
            self.record_idle(Procedure::Tree, inst, 1 + rest.len());
        } else {
            let t2 = attach(t, &rest, s, c)?;
            self.tree_rec(inst, view, &t2, k - 1, derive_seed(seed, Phase::Reduced, 0))?;
        }

        let mut groups = vec![vec![s], vec![c]];
        groups.extend(sides.iter().cloned());
        let near_idx = (!near.is_empty()).then(|| {
            groups.push(near.clone());
            groups.len() - 1
        });
        let iso = inst.isolating(&groups)?;
        let side_groups = 2..2 + sides.len();

        if near_idx.is_some() {
            let sink: Vec<usize> = std::iter::once(1).chain(side_groups.clone()).collect();
            let (assign, nq) = two_node_assignment(inst.n(), &iso, &[0], &sink);
            let keep = with(c, &with(s, &near));
            let sub = t
                .induced(&keep, s)?
                .relabel(|v| if v == s { 0 } else if v == c { 1 } else { assign[v] })?;
            let mut local = View::default();
            let child = self.quotient_child(inst, assign, nq);
            let (child, lift) = &*child;
            self.leaf_rec(child, &mut local, &sub, k, derive_seed(seed, Phase::LeafRest, 0))?;
            self.merge(view, local, lift);
        }

        let sinks: Vec<usize> = std::iter::once(c).chain(sides.iter().flatten().copied()).collect();
        let f = inst.flow(s, &sinks)?;
        let track = self.cfg.track_witnesses;
        for &x in &sinks {
            view.update(x, f.value, || track.then(|| f.cut.side.clone()));
        }

        // The side tree holding the terminal whose current value is worst.
        let (best, _) = sides
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.iter().map(move |&v| (i, v)))
            .max_by_key(|&(_, v)| (view.get(v), Reverse(v)))
            .ok_or_else(|| Error::Internal("centroid has no side trees".into()))?;
        let mut sink = vec![1];
        sink.extend(near_idx);
        sink.extend(side_groups.filter(|&g| g != 2 + best));
        let (assign, nq) = two_node_assignment(inst.n(), &iso, &[0], &sink);
        let part = &sides[best];
        let hook = t
            .neighbors(c)
            .find(|v| part.binary_search(v).is_ok())
            .ok_or_else(|| Error::Internal("side tree not adjacent to the centroid".into()))?;
        let inner = t.induced(part, hook)?;
        let mut vertices = vec![0, 1];
        vertices.extend(part.iter().map(|&v| assign[v]));
        let mut edges: Vec<(usize, usize)> = inner.edges().iter().map(|&(u, v)| (assign[u], assign[v])).collect();
        edges.push((0, 1));
        edges.push((1, assign[hook]));
        let sub = SteinerTree::new(vertices, edges, 0)?;
        let mut local = View::default();
        let child = self.quotient_child(inst, assign, nq);
        let (child, lift) = &*child;
        if sub.len() < t.len() {
            self.leaf_rec(child, &mut local, &sub, k, derive_seed(seed, Phase::LeafMax, 0))?;
        } else {
            self.base(child, &mut local, &sub)?;
        }
        self.merge(view, local, lift);
        Ok(())
    }
}

fn position(sorted: &[usize], v: usize) -> usize {
    sorted.binary_search(&v).expect("tree vertex lies in its isolating side")
}

/// Maps the isolating sides of groups `src` to vertex 0, those of `sink` to
/// vertex 1, and every other vertex to its own id from 2 upwards.
fn two_node_assignment(n: usize, iso: &IsolatingResult, src: &[usize], sink: &[usize]) -> (Vec<usize>, usize) {
    let mut assign = vec![UNSET; n];
    for (groups, id) in [(src, 0), (sink, 1)] {
        for &gi in groups {
            for &v in iso.side(gi) {
                assign[v] = id;
            }
        }
    }
    let mut nq = 2;
    for a in &mut assign {
        if *a == UNSET {
            *a = nq;
            nq += 1;
        }
    }
    (assign, nq)
}
