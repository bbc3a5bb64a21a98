//! Cluster graph over the stored centers and its depth-first spanning forest.
//!
//! Centers are addressed by rank (position in ascending center order) so
//! that per-center arrays hold exactly `|S|` words. Centers of small
//! implicit components are isolated in the cluster graph and never ranked.

use crate::cost::{AsymVec, CostMeter};
use crate::decomp::{ClusterScan, Decomposition};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeId};

#[derive(Debug, Clone, Copy)]
pub struct ClusterGraphView<'a, G: ?Sized> {
    pub g: &'a G,
    pub d: &'a Decomposition,
}

impl<'a, G: Adjacency + ?Sized> ClusterGraphView<'a, G> {
    pub fn new(g: &'a G, d: &'a Decomposition) -> Self {
        ClusterGraphView { g, d }
    }

    /// Number of stored centers (cluster graph nodes).
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn scan(&self, s: NodeId, meter: &mut CostMeter) -> Result<ClusterScan> {
        self.d.scan_cluster(self.g, s, meter)
    }

    /// Centers of clusters adjacent to `C(s)`, ascending. Zero writes.
    pub fn center_neighbors(&self, s: NodeId, meter: &mut CostMeter) -> Result<Vec<NodeId>> {
        if self.d.kind(s, meter).is_none() {
            return Err(Error::Argument(format!("{s} is not a stored center")));
        }
        Ok(self.scan(s, meter)?.neighbor_centers())
    }

    /// Neighbor ranks of the center with rank `r`, ascending.
    pub fn ranked_neighbors(&self, r: usize, meter: &mut CostMeter) -> Result<Vec<usize>> {
        let s = self.center_at(r, meter)?;
        let nb = self.center_neighbors(s, meter)?;
        nb.into_iter().map(|c| self.rank_of(c, meter)).collect()
    }

    pub fn center_at(&self, r: usize, meter: &mut CostMeter) -> Result<NodeId> {
        self.d
            .select(r, meter)
            .ok_or_else(|| Error::Range { id: r as u64, bound: self.d.len() })
    }

    pub fn rank_of(&self, c: NodeId, meter: &mut CostMeter) -> Result<usize> {
        self.d
            .rank(c, meter)
            .ok_or_else(|| Error::Argument(format!("{c} is not a stored center")))
    }
}

const NONE: u32 = u32::MAX;
const UNSET: u64 = u64::MAX;

#[inline]
fn pack(hi: u32, lo: u32) -> u64 {
    ((hi as u64) << 32) | lo as u64
}

#[inline]
fn unpack(w: u64) -> (u32, u32) {
    ((w >> 32) as u32, w as u32)
}

/// Depth-first spanning forest of the cluster graph, one tree per
/// component, rooted at the component's smallest center.
///
/// Per center two words: `parent | first` written on entry and
/// `last | low` written on exit. `first`/`last` are Euler tour ranks (a
/// single counter advanced on entry and exit). `low` is the smallest
/// `first` reachable from the subtree by one non-tree cluster edge. With a
/// depth-first tree every non-tree cluster edge joins an ancestor and a
/// descendant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterTree {
    enter: AsymVec<u64>,
    exit: AsymVec<u64>,
}

impl ClusterTree {
    pub fn len(&self) -> usize {
        self.enter.len()
    }

    pub fn is_empty(&self) -> bool {
        self.enter.is_empty()
    }

    pub fn parent(&self, r: usize, meter: &mut CostMeter) -> Option<usize> {
        let (p, _) = unpack(self.enter.get(r, meter));
        (p != NONE).then_some(p as usize)
    }

    pub fn first(&self, r: usize, meter: &mut CostMeter) -> u32 {
        unpack(self.enter.get(r, meter)).1
    }

    pub fn last(&self, r: usize, meter: &mut CostMeter) -> u32 {
        unpack(self.exit.get(r, meter)).0
    }

    pub fn low(&self, r: usize, meter: &mut CostMeter) -> u32 {
        unpack(self.exit.get(r, meter)).1
    }

    /// `(parent, first, last, low)` in two reads.
    pub fn node(&self, r: usize, meter: &mut CostMeter) -> TreeNode {
        let (p, first) = unpack(self.enter.get(r, meter));
        let (last, low) = unpack(self.exit.get(r, meter));
        TreeNode { parent: (p != NONE).then_some(p as usize), first, last, low }
    }

    /// `a` is an ancestor of `b` (or equal).
    pub fn is_ancestor(&self, a: usize, b: usize, meter: &mut CostMeter) -> bool {
        let (na, nb) = (self.node(a, meter), self.node(b, meter));
        na.contains(&nb)
    }

    pub fn root_of(&self, mut r: usize, meter: &mut CostMeter) -> usize {
        while let Some(p) = self.parent(r, meter) {
            r = p;
        }
        r
    }

    /// Lowest common ancestor by climbing from `a` until the interval
    /// covers `b`. Zero writes, `O(depth)` reads.
    pub fn lca(&self, a: usize, b: usize, meter: &mut CostMeter) -> Result<usize> {
        let nb = self.node(b, meter);
        let mut x = a;
        loop {
            let nx = self.node(x, meter);
            if nx.contains(&nb) {
                return Ok(x);
            }
            match nx.parent {
                Some(p) => x = p,
                None => return Err(Error::DistinctComponents),
            }
        }
    }

    /// The child of `a` on the path down to its proper descendant `b`.
    pub fn child_toward(&self, a: usize, b: usize, meter: &mut CostMeter) -> Option<usize> {
        let mut x = b;
        loop {
            let p = self.parent(x, meter)?;
            if p == a {
                return Some(x);
            }
            x = p;
        }
    }

    /// The stored `enter` and `exit` words (unmetered, for serialization).
    pub fn words(&self) -> (&[u64], &[u64]) {
        (self.enter.raw(), self.exit.raw())
    }

    pub fn from_words(enter: Vec<u64>, exit: Vec<u64>) -> Result<Self> {
        if enter.len() != exit.len() {
            return Err(Error::Format(format!("{} enter words but {} exit words", enter.len(), exit.len())));
        }
        Ok(ClusterTree { enter: AsymVec::from_uncharged(enter), exit: AsymVec::from_uncharged(exit) })
    }

    /// Parent of every center (unmetered, for inspection and tests).
    pub fn parents(&self) -> Vec<Option<usize>> {
        self.enter
            .raw()
            .iter()
            .map(|&w| {
                let (p, _) = unpack(w);
                (p != NONE).then_some(p as usize)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub first: u32,
    pub last: u32,
    pub low: u32,
}

impl TreeNode {
    pub fn contains(&self, other: &TreeNode) -> bool {
        self.first <= other.first && other.last <= self.last
    }
}

/// Depth-first search over the cluster graph without a stack: the parent
/// pointer in the `enter` word leads back up, and a node's neighbor list is
/// recomputed whenever the search returns to it. Writes: two words per
/// center.
pub fn build_cluster_tree<G: Adjacency + ?Sized>(
    view: &ClusterGraphView<'_, G>,
    meter: &mut CostMeter,
) -> Result<ClusterTree> {
    let n = view.len();
    if n as u64 >= (NONE as u64) / 2 {
        return Err(Error::Config(format!("{n} centers exceed the 32-bit tree layout")));
    }
    let mut enter = AsymVec::alloc(n, UNSET);
    let mut exit = AsymVec::alloc(n, UNSET);
    let mut clock: u32 = 0;
    for root in 0..n {
        if enter.get(root, meter) != UNSET {
            continue;
        }
        enter.set(root, pack(NONE, clock), meter);
        clock += 1;
        let mut cur = root;
        loop {
            let nbrs = meter.local_scope(|m| view.ranked_neighbors(cur, m))??;
            meter.local_alloc(nbrs.len() as u64);
            let mut next = None;
            for &x in &nbrs {
                if enter.get(x, meter) == UNSET {
                    next = Some(x);
                    break;
                }
            }
            if let Some(x) = next {
                enter.set(x, pack(cur as u32, clock), meter);
                clock += 1;
                meter.local_free(nbrs.len() as u64);
                cur = x;
                continue;
            }
            let (p, first) = unpack(enter.get(cur, meter));
            let mut low = first;
            for &x in &nbrs {
                if x as u32 == p {
                    continue;
                }
                let (px, fx) = unpack(enter.get(x, meter));
                if px == cur as u32 {
                    low = low.min(unpack(exit.get(x, meter)).1);
                } else {
                    low = low.min(fx);
                }
            }
            meter.local_free(nbrs.len() as u64);
            exit.set(cur, pack(clock, low), meter);
            clock += 1;
            if p == NONE {
                break;
            }
            cur = p as usize;
        }
    }
    Ok(ClusterTree { enter, exit })
}

/// Constant-time LCA over a [`ClusterTree`]: Euler sequence plus a sparse
/// table of range minima. Costs `O(|S| log |S|)` words, so the oracles do
/// not build it; it serves callers that need many ancestor queries.
#[derive(Debug, Clone)]
pub struct LcaIndex {
    /// Euler sequence entries `depth << 32 | rank`.
    seq: AsymVec<u64>,
    /// Position of each rank's first occurrence in `seq`.
    pos: AsymVec<u32>,
    /// `table[j][i]` = min of `seq[i .. i + 2^j]`.
    table: Vec<AsymVec<u64>>,
    root: AsymVec<u32>,
}

impl LcaIndex {
    pub fn build(tree: &ClusterTree, meter: &mut CostMeter) -> Self {
        let n = tree.len();
        let parents: Vec<Option<usize>> = (0..n).map(|r| tree.parent(r, meter)).collect();
        let firsts: Vec<u32> = (0..n).map(|r| tree.first(r, meter)).collect();
        meter.local_alloc(3 * n as u64);
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for r in 0..n {
            match parents[r] {
                Some(p) => children[p].push(r),
                None => roots.push(r),
            }
        }
        for c in &mut children {
            c.sort_by_key(|&x| firsts[x]);
        }
        let mut seq = AsymVec::new();
        let mut pos = AsymVec::alloc(n, 0u32);
        let mut root = AsymVec::alloc(n, 0u32);
        for &rt in &roots {
            // iterative Euler walk: (node, depth, next child index)
            let mut stack = vec![(rt, 0u32, 0usize)];
            pos.set(rt, seq.len() as u32, meter);
            root.set(rt, rt as u32, meter);
            seq.push(pack(0, rt as u32), meter);
            while let Some(top) = stack.last_mut() {
                let (v, d, i) = *top;
                if i < children[v].len() {
                    top.2 += 1;
                    let c = children[v][i];
                    pos.set(c, seq.len() as u32, meter);
                    root.set(c, rt as u32, meter);
                    seq.push(pack(d + 1, c as u32), meter);
                    stack.push((c, d + 1, 0));
                } else {
                    stack.pop();
                    if let Some(&(p, pd, _)) = stack.last() {
                        seq.push(pack(pd, p as u32), meter);
                    }
                }
            }
        }
        let len = seq.len();
        let mut table: Vec<AsymVec<u64>> = Vec::new();
        let mut width = 2;
        while width <= len {
            let prev = table.last().map_or(seq.raw(), |t| t.raw());
            let half = width / 2;
            let mut level = AsymVec::new();
            for i in 0..=len - width {
                level.push(prev[i].min(prev[i + half]), meter);
            }
            meter.record_read(2 * (len - width + 1) as u64);
            table.push(level);
            width *= 2;
        }
        LcaIndex { seq, pos, table, root }
    }

    pub fn lca(&self, a: usize, b: usize, meter: &mut CostMeter) -> Result<usize> {
        if self.root.get(a, meter) != self.root.get(b, meter) {
            return Err(Error::DistinctComponents);
        }
        let (mut i, mut j) = (self.pos.get(a, meter) as usize, self.pos.get(b, meter) as usize);
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let span = j - i + 1;
        if span == 1 {
            return Ok(unpack(self.seq.get(i, meter)).1 as usize);
        }
        let lvl = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let t = &self.table[lvl - 1];
        let m = t.get(i, meter).min(t.get(j + 1 - (1 << lvl), meter));
        Ok(unpack(m).1 as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{build_decomposition, CenterKind, DecompOptions};
    use crate::graph::{fixtures, gen_random_bounded, gen_random_bounded_with, GenOptions, Graph};
    use std::collections::BTreeSet;

    fn brute_cluster_graph(g: &Graph, d: &Decomposition) -> Vec<BTreeSet<NodeId>> {
        let mut m = CostMeter::default();
        let rho: Vec<NodeId> = (0..g.n()).map(|v| d.rho(g, v, &mut m).unwrap()).collect();
        let mut out = vec![BTreeSet::new(); g.n()];
        for (u, v) in g.edges() {
            if rho[u] != rho[v] {
                out[rho[u]].insert(rho[v]);
                out[rho[v]].insert(rho[u]);
            }
        }
        out
    }

    #[test]
    fn center_neighbors_match_explicit_cluster_graph() {
        for seed in 0..6 {
            let g = gen_random_bounded(400 + 300 * seed as usize, 3, seed);
            let d = build_decomposition(&g, 4, seed, DecompOptions::default(), &mut CostMeter::default()).unwrap();
            let view = ClusterGraphView::new(&g, &d);
            let brute = brute_cluster_graph(&g, &d);
            let mut m = CostMeter::default();
            for (c, _) in d.centers() {
                let got: BTreeSet<NodeId> = view.center_neighbors(c, &mut m).unwrap().into_iter().collect();
                assert_eq!(got, brute[c], "center {c}");
            }
            assert_eq!(m.writes(), 0);
        }
    }

    #[test]
    fn p5_split_at_midpoint() {
        let g = fixtures::p5();
        let d = Decomposition::from_centers(8, 0, 5, &[(0, CenterKind::Primary), (4, CenterKind::Primary)]).unwrap();
        let view = ClusterGraphView::new(&g, &d);
        let mut m = CostMeter::default();
        assert_eq!(view.center_neighbors(0, &mut m).unwrap(), vec![4]);
        assert_eq!(view.center_neighbors(4, &mut m).unwrap(), vec![0]);
        assert!(view.center_neighbors(2, &mut m).is_err());
    }

    #[test]
    fn single_cluster_has_no_neighbors() {
        let g = fixtures::c6();
        let d = Decomposition::from_centers(8, 0, 6, &[(3, CenterKind::Primary)]).unwrap();
        let view = ClusterGraphView::new(&g, &d);
        assert!(view.center_neighbors(3, &mut CostMeter::default()).unwrap().is_empty());
        let t = build_cluster_tree(&view, &mut CostMeter::default()).unwrap();
        let mut m = CostMeter::default();
        assert_eq!((t.first(0, &mut m), t.last(0, &mut m)), (0, 1));
    }

    #[test]
    fn path_of_three_clusters() {
        // P5 with centers 0, 2, 4 and large k: clusters {0,1}? vertex 1 is
        // adjacent to centers 0 and 2 and goes to 0 on priority
        let g = fixtures::p5();
        let d = Decomposition::from_centers(
            8,
            0,
            5,
            &[(0, CenterKind::Primary), (2, CenterKind::Primary), (4, CenterKind::Primary)],
        )
        .unwrap();
        let view = ClusterGraphView::new(&g, &d);
        let t = build_cluster_tree(&view, &mut CostMeter::default()).unwrap();
        assert_eq!(t.parents(), vec![None, Some(0), Some(1)]);
    }

    fn tree_for(seed: u64, n: usize, opts: GenOptions) -> (Graph, Decomposition) {
        let g = gen_random_bounded_with(n, 3, seed, opts);
        let d = build_decomposition(&g, 4, seed, DecompOptions::default(), &mut CostMeter::default()).unwrap();
        (g, d)
    }

    #[test]
    fn cluster_tree_is_depth_first_spanning_forest() {
        for seed in 0..8 {
            let opts = GenOptions { extra_edges: 0.4, drop_tree_edge: if seed % 2 == 0 { 0.0 } else { 0.02 } };
            let (g, d) = tree_for(seed, 500, opts);
            let view = ClusterGraphView::new(&g, &d);
            let mut m = CostMeter::default();
            let t = build_cluster_tree(&view, &mut m).unwrap();
            assert_eq!(m.writes() as usize, 2 * d.len());
            let n = d.len();
            let centers: Vec<NodeId> = d.centers().into_iter().map(|(c, _)| c).collect();
            let brute = brute_cluster_graph(&g, &d);
            let mut m = CostMeter::default();
            let nodes: Vec<TreeNode> = (0..n).map(|r| t.node(r, &mut m)).collect();
            let anc = |a: usize, b: usize| nodes[a].contains(&nodes[b]);
            for r in 0..n {
                assert!(nodes[r].first < nodes[r].last);
                if let Some(p) = nodes[r].parent {
                    assert!(brute[centers[r]].contains(&centers[p]), "tree edge not in cluster graph");
                } else {
                    // roots are the smallest center of their component
                    for q in 0..r {
                        assert!(!anc(r, q) && !anc(q, r) || q == r);
                    }
                }
                // every cluster edge joins an ancestor and a descendant
                for &c in &brute[centers[r]] {
                    let q = centers.binary_search(&c).unwrap();
                    assert!(anc(r, q) || anc(q, r), "cross edge {r}-{q}");
                }
                // low is the min first over back edges from the subtree
                let mut low = nodes[r].first;
                for q in 0..n {
                    if anc(r, q) {
                        for &c in &brute[centers[q]] {
                            let x = centers.binary_search(&c).unwrap();
                            if Some(x) != nodes[q].parent {
                                low = low.min(nodes[x].first);
                            }
                        }
                    }
                }
                assert_eq!(nodes[r].low, low);
            }
            // ancestry from intervals agrees with parent pointers
            for a in 0..n {
                for b in 0..n {
                    let mut x = Some(b);
                    let mut is_anc = false;
                    while let Some(y) = x {
                        if y == a {
                            is_anc = true;
                        }
                        x = nodes[y].parent;
                    }
                    assert_eq!(anc(a, b), is_anc);
                }
            }
        }
    }

    fn brute_lca(t: &ClusterTree, a: usize, b: usize) -> Option<usize> {
        let parents = t.parents();
        let mut path = vec![a];
        while let Some(p) = parents[*path.last().unwrap()] {
            path.push(p);
        }
        let mut x = Some(b);
        while let Some(y) = x {
            if path.contains(&y) {
                return Some(y);
            }
            x = parents[y];
        }
        None
    }

    #[test]
    fn lca_matches_brute_force() {
        for seed in 0..10 {
            let (g, d) = tree_for(seed, 150, GenOptions { extra_edges: 0.3, drop_tree_edge: 0.03 });
            let view = ClusterGraphView::new(&g, &d);
            let t = build_cluster_tree(&view, &mut CostMeter::default()).unwrap();
            let idx = LcaIndex::build(&t, &mut CostMeter::default());
            let mut m = CostMeter::default();
            let n = t.len();
            for a in 0..n {
                assert_eq!(t.lca(a, a, &mut m).unwrap(), a);
                if let Some(p) = t.parent(a, &mut m) {
                    assert_eq!(t.lca(a, p, &mut m).unwrap(), p);
                    assert_eq!(t.child_toward(p, a, &mut m), Some(a));
                }
                for b in 0..n {
                    let want = brute_lca(&t, a, b);
                    let climb = t.lca(a, b, &mut m).ok();
                    let table = idx.lca(a, b, &mut m).ok();
                    assert_eq!(climb, want);
                    assert_eq!(table, want);
                }
            }
            assert_eq!(m.writes(), 0);
        }
    }
}
