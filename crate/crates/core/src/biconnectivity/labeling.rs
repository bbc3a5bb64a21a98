//! Depth-first Euler data, critical tree edges and the BC labeling.
//!
//! A tree edge `(p, c)` is critical when the subtree of `c` has no non-tree
//! edge leaving `[first(p), last(p)]` below `p`. Removing critical edges
//! from the spanning tree splits it into classes; each class plus the parent
//! of its top vertex (the head) is one biconnected component.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::cost::{AsymVec, CostMeter};
use crate::decomp::parse_fields;
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeId};

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct EulerData {
    /// One root per tree, the lowest id of its component.
    pub roots: Vec<NodeId>,
    pub parent: AsymVec<u32>,
    pub first: AsymVec<u32>,
    pub last: AsymVec<u32>,
    pub w: AsymVec<u32>,
    pub low: AsymVec<u32>,
    pub high: AsymVec<u32>,
    /// Depth-first preorder over all trees (local memory).
    pub preorder: Vec<NodeId>,
}

impl EulerData {
    pub fn parent_of(&self, v: NodeId) -> Option<NodeId> {
        let p = self.parent.raw()[v];
        (p != NONE).then_some(p as NodeId)
    }

    fn critical(&self, p: NodeId, c: NodeId, meter: &mut CostMeter) -> bool {
        self.first.get(p, meter) <= self.low.get(c, meter) && self.high.get(c, meter) <= self.last.get(p, meter)
    }
}

/// DFS spanning tree of a connected graph from `root`, with Euler ranks and
/// `w`, `low`, `high`. Six words are written per vertex.
pub fn euler_low_high<G: Adjacency + ?Sized>(g: &G, root: NodeId, meter: &mut CostMeter) -> Result<EulerData> {
    if !g.contains(root) {
        return Err(Error::Range { id: root as u64, bound: g.id_bound() });
    }
    let e = euler_from(g, std::iter::once(root).chain(g.nodes()), meter)?;
    if e.roots.len() > 1 {
        return Err(Error::Disconnected);
    }
    Ok(e)
}

/// Depth-first spanning forest, one tree per component rooted at its lowest id.
pub fn euler_forest<G: Adjacency + ?Sized>(g: &G, meter: &mut CostMeter) -> Result<EulerData> {
    euler_from(g, g.nodes(), meter)
}

fn euler_from<G: Adjacency + ?Sized>(
    g: &G,
    starts: impl Iterator<Item = NodeId>,
    meter: &mut CostMeter,
) -> Result<EulerData> {
    let n = g.id_bound();
    if n as u64 >= NONE as u64 / 2 {
        return Err(Error::Config(format!("{n} ids exceed the 32-bit Euler ranks")));
    }
    let mut parent = AsymVec::alloc(n, NONE);
    let mut first = AsymVec::alloc(n, NONE);
    let mut last = AsymVec::alloc(n, NONE);
    let mut roots = Vec::new();
    let mut preorder = Vec::new();
    let mut clock = 0u32;
    let mut stack: Vec<(NodeId, Vec<NodeId>, usize)> = Vec::new();
    for s in starts {
        if first.get(s, meter) != NONE {
            continue;
        }
        roots.push(s);
        first.set(s, clock, meter);
        clock += 1;
        preorder.push(s);
        stack.push((s, g.neighbors(s, meter), 0));
        while let Some((v, nb, i)) = stack.last_mut() {
            let v = *v;
            if *i < nb.len() {
                let u = nb[*i];
                *i += 1;
                if u != v && first.get(u, meter) == NONE {
                    parent.set(u, v as u32, meter);
                    first.set(u, clock, meter);
                    clock += 1;
                    preorder.push(u);
                    let nu = g.neighbors(u, meter);
                    meter.local_alloc(nu.len() as u64 + 2);
                    stack.push((u, nu, 0));
                }
            } else {
                meter.local_free(nb.len() as u64 + 2);
                last.set(v, clock, meter);
                clock += 1;
                stack.pop();
            }
        }
    }
    meter.local_alloc(preorder.len() as u64);

    // w(v): lowest/highest first() over non-tree edges at v. One copy of each
    // tree edge is the tree edge; further parallel copies count as non-tree.
    let mut lo = vec![NONE; n];
    let mut hi = vec![0u32; n];
    meter.local_alloc(2 * preorder.len() as u64);
    let mut w = AsymVec::alloc(n, NONE);
    let mut skipped = Vec::new();
    for &v in &preorder {
        let fv = first.get(v, meter);
        let pv = parent.get(v, meter);
        let (mut a, mut b) = (fv, fv);
        skipped.clear();
        for u in g.neighbors(v, meter) {
            if u == v {
                continue;
            }
            let tree = pv as NodeId == u || parent.get(u, meter) as NodeId == v;
            if tree && !skipped.contains(&u) {
                skipped.push(u);
                continue;
            }
            let fu = first.get(u, meter);
            a = a.min(fu);
            b = b.max(fu);
        }
        w.set(v, a, meter);
        lo[v] = a;
        hi[v] = b;
    }
    for &v in preorder.iter().rev() {
        let p = parent.get(v, meter);
        if p != NONE {
            let p = p as NodeId;
            lo[p] = lo[p].min(lo[v]);
            hi[p] = hi[p].max(hi[v]);
        }
    }
    let mut low = AsymVec::alloc(n, NONE);
    let mut high = AsymVec::alloc(n, NONE);
    for &v in &preorder {
        low.set(v, lo[v], meter);
        high.set(v, hi[v], meter);
    }
    meter.local_free(2 * preorder.len() as u64);
    Ok(EulerData { roots, parent, first, last, w, low, high, preorder })
}

/// Tree edges `(parent, child)` with `first(p) <= low(c)` and
/// `high(c) <= last(p)`, in preorder of the child.
pub fn critical_edges(e: &EulerData, meter: &mut CostMeter) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for &c in &e.preorder {
        let p = e.parent.get(c, meter);
        if p != NONE && e.critical(p as NodeId, c, meter) {
            out.push((p as NodeId, c));
        }
    }
    out
}

/// Vertex labels `l` and component heads `r` over a spanning forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcLabeling {
    roots: Vec<NodeId>,
    labels: AsymVec<u32>,
    heads: AsymVec<u32>,
}

/// A node of the block-cut tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BctNode {
    Vertex(NodeId),
    Block(u32),
}

/// BC labeling of a connected graph; writes the Euler data (6n words), then
/// `n - 1` labels and `C` heads.
pub fn build_bc_labeling<G: Adjacency + ?Sized>(g: &G, meter: &mut CostMeter) -> Result<BcLabeling> {
    let root = g.nodes().next().ok_or_else(|| Error::Argument("empty graph".into()))?;
    let e = euler_low_high(g, root, meter)?;
    Ok(BcLabeling::from_euler(&e, g.id_bound(), meter))
}

/// BC labeling of every component; each tree root carries no label.
pub fn build_bc_forest<G: Adjacency + ?Sized>(g: &G, meter: &mut CostMeter) -> Result<BcLabeling> {
    let e = euler_forest(g, meter)?;
    Ok(BcLabeling::from_euler(&e, g.id_bound(), meter))
}

impl BcLabeling {
    /// Classes are the pieces of the spanning forest after removing critical
    /// edges; a preorder sweep labels each vertex from its parent.
    pub fn from_euler(e: &EulerData, bound: usize, meter: &mut CostMeter) -> Self {
        let mut labels = AsymVec::alloc(bound, NONE);
        let mut heads = AsymVec::new();
        for &c in &e.preorder {
            let p = e.parent.get(c, meter);
            if p == NONE {
                continue;
            }
            let p = p as NodeId;
            if e.critical(p, c, meter) {
                labels.set(c, heads.len() as u32, meter);
                heads.push(p as u32, meter);
            } else {
                let l = labels.get(p, meter);
                labels.set(c, l, meter);
            }
        }
        BcLabeling { roots: e.roots.clone(), labels, heads }
    }

    /// A labeling given explicitly: `labels` holds `(v, l(v))` for every
    /// non-root vertex, `heads[l]` is the head of class `l`.
    pub fn from_parts(n: usize, root: NodeId, labels: &[(NodeId, u32)], heads: &[NodeId]) -> Result<Self> {
        if root >= n {
            return Err(Error::Range { id: root as u64, bound: n });
        }
        let mut lab = vec![NONE; n];
        for &(v, l) in labels {
            if v >= n {
                return Err(Error::Range { id: v as u64, bound: n });
            }
            if l as usize >= heads.len() {
                return Err(Error::Format(format!("label {l} of vertex {v} has no head")));
            }
            if v == root || lab[v] != NONE {
                return Err(Error::Format(format!("vertex {v} labeled twice or is the root")));
            }
            lab[v] = l;
        }
        if let Some(&h) = heads.iter().find(|&&h| h >= n) {
            return Err(Error::Range { id: h as u64, bound: n });
        }
        Ok(BcLabeling {
            roots: vec![root],
            labels: AsymVec::from_uncharged(lab),
            heads: AsymVec::from_uncharged(heads.iter().map(|&h| h as u32).collect()),
        })
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    /// Number of biconnected components `C`.
    pub fn components(&self) -> usize {
        self.heads.len()
    }

    pub fn label(&self, v: NodeId, meter: &mut CostMeter) -> Option<u32> {
        let l = self.labels.get(v, meter);
        (l != NONE).then_some(l)
    }

    pub fn head(&self, l: u32, meter: &mut CostMeter) -> NodeId {
        self.heads.get(l as usize, meter) as NodeId
    }

    pub fn labels_raw(&self) -> &[u32] {
        self.labels.raw()
    }

    pub fn heads_raw(&self) -> &[u32] {
        self.heads.raw()
    }

    /// Head of `v`'s class, `None` for tree roots.
    fn head_of(&self, v: NodeId, meter: &mut CostMeter) -> Option<NodeId> {
        self.label(v, meter).map(|l| self.head(l, meter))
    }

    fn checked_neighbors<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        a: NodeId,
        b: NodeId,
        meter: &mut CostMeter,
    ) -> Result<Vec<NodeId>> {
        for v in [a, b] {
            if !g.contains(v) || v >= self.labels.len() {
                return Err(Error::Range { id: v as u64, bound: self.labels.len() });
            }
        }
        let nb = g.neighbors(a, meter);
        if !nb.contains(&b) {
            return Err(Error::Argument(format!("({a}, {b}) is not an edge")));
        }
        Ok(nb)
    }

    /// True if no other vertex shares `c`'s class. Classes are connected in
    /// the tree, so a second member would be a neighbor of `c`.
    fn singleton<G: Adjacency + ?Sized>(&self, g: &G, c: NodeId, l: u32, meter: &mut CostMeter) -> bool {
        g.neighbors(c, meter).into_iter().all(|w| w == c || self.label(w, meter) != Some(l))
    }

    /// Bridge iff one endpoint forms a single-vertex class headed by the
    /// other endpoint and the edge is not doubled.
    pub fn is_bridge<G: Adjacency + ?Sized>(&self, g: &G, a: NodeId, b: NodeId, meter: &mut CostMeter) -> Result<bool> {
        let nb = self.checked_neighbors(g, a, b, meter)?;
        if a == b || nb.iter().filter(|&&x| x == b).count() > 1 {
            return Ok(false);
        }
        for (c, other) in [(a, b), (b, a)] {
            if let Some(l) = self.label(c, meter) {
                if self.head(l, meter) == other && self.singleton(g, c, l, meter) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// A non-root vertex is a cut vertex iff it heads a class; a root iff it
    /// heads at least two.
    pub fn is_articulation<G: Adjacency + ?Sized>(&self, g: &G, v: NodeId, meter: &mut CostMeter) -> Result<bool> {
        if !g.contains(v) || v >= self.labels.len() {
            return Err(Error::Range { id: v as u64, bound: self.labels.len() });
        }
        let nb = g.neighbors(v, meter);
        if self.label(v, meter).is_none() {
            let mut seen = BTreeSet::new();
            for w in nb {
                if w != v {
                    if let Some(l) = self.label(w, meter) {
                        seen.insert(l);
                    }
                }
            }
            return Ok(seen.len() >= 2);
        }
        for w in nb {
            if w != v && self.head_of(w, meter) == Some(v) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Label of the component containing edge `(a, b)`: the label of the
    /// endpoint farther from the root. `None` only for a self-loop at a root.
    pub fn edge_label<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        a: NodeId,
        b: NodeId,
        meter: &mut CostMeter,
    ) -> Result<Option<u32>> {
        self.checked_neighbors(g, a, b, meter)?;
        Ok(self.edge_label_unchecked(a, b, meter))
    }

    pub(crate) fn edge_label_unchecked(&self, a: NodeId, b: NodeId, meter: &mut CostMeter) -> Option<u32> {
        let (la, lb) = (self.label(a, meter), self.label(b, meter));
        if a == b {
            return la;
        }
        match (la, lb) {
            (None, l) | (l, None) => l,
            (Some(x), Some(y)) => {
                if self.head(x, meter) == b {
                    Some(x)
                } else if self.head(y, meter) == a {
                    Some(y)
                } else {
                    Some(x)
                }
            }
        }
    }

    pub fn same_bcc(&self, u: NodeId, v: NodeId, meter: &mut CostMeter) -> bool {
        if u == v {
            return true;
        }
        let (lu, lv) = (self.label(u, meter), self.label(v, meter));
        if lu.is_some() && lu == lv {
            return true;
        }
        lu.is_some_and(|l| self.head(l, meter) == v) || lv.is_some_and(|l| self.head(l, meter) == u)
    }

    /// Edges `v - l(v)` and `l - r(l)`, with vertex nodes of degree one
    /// removed.
    pub fn block_cut_tree(&self) -> Vec<(BctNode, BctNode)> {
        let mut edges = Vec::new();
        let mut degree = vec![0usize; self.labels.len()];
        for (v, &l) in self.labels.raw().iter().enumerate() {
            if l != NONE {
                edges.push((BctNode::Vertex(v), BctNode::Block(l)));
                degree[v] += 1;
            }
        }
        for (l, &h) in self.heads.raw().iter().enumerate() {
            edges.push((BctNode::Vertex(h as NodeId), BctNode::Block(l as u32)));
            degree[h as usize] += 1;
        }
        edges.retain(|&(v, _)| matches!(v, BctNode::Vertex(v) if degree[v] >= 2));
        edges.sort_unstable();
        edges
    }

    /// `n C root`, then `v l(v)` for every non-root vertex, then `label head`.
    pub fn serialize(&self) -> Result<String> {
        if self.roots.len() != 1 {
            return Err(Error::Disconnected);
        }
        let mut s = String::new();
        let n = self.labels.len();
        let _ = writeln!(s, "{} {} {}", n, self.heads.len(), self.roots[0]);
        for (v, &l) in self.labels.raw().iter().enumerate() {
            if v != self.roots[0] {
                if l == NONE {
                    return Err(Error::Format(format!("vertex {v} has no label")));
                }
                let _ = writeln!(s, "{v} {l}");
            }
        }
        for (l, &h) in self.heads.raw().iter().enumerate() {
            let _ = writeln!(s, "{l} {h}");
        }
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (i, header) = lines.next().ok_or_else(|| Error::Format("empty labeling".into()))?;
        let h = fields(i, header, 3)?;
        let (n, c, root) = (h[0] as usize, h[1] as usize, h[2] as usize);
        if n == 0 {
            return Err(Error::Format("labeling over zero vertices".into()));
        }
        let mut labels = Vec::with_capacity(n - 1);
        let mut heads = vec![0; c];
        for j in 0..n - 1 + c {
            let (i, line) = lines.next().ok_or_else(|| Error::Format(format!("expected {} lines", n + c)))?;
            let f = fields(i, line, 2)?;
            if j < n - 1 {
                labels.push((f[0] as usize, f[1] as u32));
            } else {
                let l = f[0] as usize;
                if l >= c {
                    return Err(Error::Parse { line: i + 1, msg: format!("label {l} >= {c}") });
                }
                heads[l] = f[1] as usize;
            }
        }
        if let Some((i, _)) = lines.next() {
            return Err(Error::Parse { line: i + 1, msg: "trailing data".into() });
        }
        Self::from_parts(n, root, &labels, &heads)
    }
}

fn fields(i: usize, line: &str, expect: usize) -> Result<Vec<u64>> {
    parse_fields(line, expect).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, parse_edge_list, Graph};

    fn euler(g: &Graph) -> EulerData {
        euler_low_high(g, 0, &mut CostMeter::default()).unwrap()
    }

    fn crit(g: &Graph) -> Vec<(NodeId, NodeId)> {
        let e = euler(g);
        let mut c = critical_edges(&e, &mut CostMeter::default());
        c.sort_unstable();
        c
    }

    #[test]
    fn single_edge() {
        let g = parse_edge_list("0 1\n").unwrap();
        let e = euler(&g);
        assert_eq!(e.low.raw()[1], e.first.raw()[1]);
        assert_eq!(e.w.raw()[1], e.first.raw()[1]);
        assert_eq!(crit(&g), vec![(0, 1)]);
    }

    #[test]
    fn tri_bridge_euler() {
        let g = fixtures::tri_bridge();
        let e = euler(&g);
        // DFS 0 -> 1 -> 2 -> 3; edge (0, 2) is the only non-tree edge
        assert_eq!(e.parent_of(2), Some(1));
        assert_eq!(e.w.raw()[2], e.first.raw()[0]);
        assert_eq!(e.low.raw()[2], e.first.raw()[0]);
        assert!(e.first.raw()[2] <= e.low.raw()[3] && e.high.raw()[3] <= e.last.raw()[2]);
        assert_eq!(crit(&g), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn cycle_has_only_the_root_edge_critical() {
        // the root's tree edge always passes the test; it starts the one class
        assert_eq!(crit(&fixtures::c6()).len(), 1);
    }

    #[test]
    fn star_edges_all_critical() {
        assert_eq!(crit(&fixtures::star(3)).len(), 3);
    }

    #[test]
    fn disconnected_rejected() {
        let g = fixtures::two_triangles();
        assert!(matches!(euler_low_high(&g, 0, &mut CostMeter::default()), Err(Error::Disconnected)));
        assert!(matches!(build_bc_labeling(&g, &mut CostMeter::default()), Err(Error::Disconnected)));
        let f = build_bc_forest(&g, &mut CostMeter::default()).unwrap();
        assert_eq!(f.roots(), &[0, 3]);
        assert_eq!(f.components(), 2);
    }

    fn lab(g: &Graph) -> BcLabeling {
        build_bc_labeling(g, &mut CostMeter::default()).unwrap()
    }

    #[test]
    fn triangle_one_component() {
        let g = parse_edge_list("0 1\n1 2\n2 0\n").unwrap();
        let l = lab(&g);
        assert_eq!(l.components(), 1);
        assert_eq!(l.labels_raw()[1], l.labels_raw()[2]);
        assert_eq!(l.heads_raw(), &[0]);
    }

    #[test]
    fn tri_bridge_labeling() {
        let g = fixtures::tri_bridge();
        let l = lab(&g);
        let mut m = CostMeter::default();
        assert_eq!(l.components(), 2);
        assert_eq!(l.label(1, &mut m), l.label(2, &mut m));
        assert_eq!(l.head(l.label(1, &mut m).unwrap(), &mut m), 0);
        assert_eq!(l.head(l.label(3, &mut m).unwrap(), &mut m), 2);
        assert!(l.is_bridge(&g, 2, 3, &mut m).unwrap());
        assert!(l.is_bridge(&g, 3, 2, &mut m).unwrap());
        assert!(!l.is_bridge(&g, 0, 1, &mut m).unwrap());
        assert!(l.is_articulation(&g, 2, &mut m).unwrap());
        assert!(!l.is_articulation(&g, 0, &mut m).unwrap());
        assert!(l.is_bridge(&g, 0, 3, &mut m).is_err());
    }

    /// The labeling drawn in the figure: root 1, vertices 2..9.
    fn figure() -> BcLabeling {
        let l = [1, 1, 1, 2, 1, 1, 3, 3];
        let labels: Vec<(NodeId, u32)> = (2..=9).zip(l.iter().map(|&x| x - 1)).collect();
        BcLabeling::from_parts(10, 1, &labels, &[1, 2, 6]).unwrap()
    }

    fn figure_graph() -> Graph {
        fixtures::bc_example()
    }

    #[test]
    fn figure_queries() {
        let l = figure();
        let g = figure_graph();
        let mut m = CostMeter::default();
        let aps: Vec<NodeId> = (1..=9).filter(|&v| l.is_articulation(&g, v, &mut m).unwrap()).collect();
        assert_eq!(aps, vec![2, 6]);
        let bridges: Vec<(NodeId, NodeId)> =
            g.edges().into_iter().filter(|&(a, b)| l.is_bridge(&g, a, b, &mut m).unwrap()).collect();
        assert_eq!(bridges, vec![(2, 5)]);
        // classes plus heads
        let mut classes: Vec<BTreeSet<NodeId>> = (0..3)
            .map(|c| {
                let mut s: BTreeSet<NodeId> = (2..=9).filter(|&v| l.labels_raw()[v] == c).collect();
                s.insert(l.heads_raw()[c as usize] as NodeId);
                s
            })
            .collect();
        classes.sort();
        let want: Vec<BTreeSet<NodeId>> =
            vec![[1, 2, 3, 4, 6, 7].into(), [2, 5].into(), [6, 8, 9].into()];
        let mut want = want;
        want.sort();
        assert_eq!(classes, want);
        // built from the graph, the labeling has the same classes
        let built = build_bc_forest(&g, &mut m).unwrap();
        for u in 1..=9 {
            for v in 1..=9 {
                assert_eq!(built.same_bcc(u, v, &mut m), l.same_bcc(u, v, &mut m), "{u} {v}");
            }
        }
        assert_eq!(built.roots(), &[0, 1]);
        assert_eq!(built.components(), 3);
    }

    #[test]
    fn doubled_edge_not_a_bridge() {
        let text = format!("{}2 5\n", fixtures::BC_EXAMPLE);
        let g = parse_edge_list(&text).unwrap();
        let mut m = CostMeter::default();
        assert!(!figure().is_bridge(&g, 2, 5, &mut m).unwrap());
        let l = build_bc_forest(&g, &mut m).unwrap();
        assert!(!l.is_bridge(&g, 2, 5, &mut m).unwrap());
        // still its own component
        assert!(!l.same_bcc(5, 3, &mut m));
        assert!(l.is_articulation(&g, 2, &mut m).unwrap());
    }

    #[test]
    fn doubled_back_edge_counts() {
        // triangle whose closing edge is doubled: still one component
        let g = parse_edge_list("0 1\n1 2\n2 0\n2 0\n").unwrap();
        let l = lab(&g);
        assert_eq!(l.components(), 1);
    }

    #[test]
    fn bowtie_and_edge_labels() {
        let g = fixtures::bowtie();
        let l = lab(&g);
        let mut m = CostMeter::default();
        assert_eq!(l.components(), 2);
        assert!(l.is_articulation(&g, 2, &mut m).unwrap());
        assert!(!l.same_bcc(0, 4, &mut m));
        assert!(l.same_bcc(0, 2, &mut m) && l.same_bcc(4, 2, &mut m));
        let e01 = l.edge_label(&g, 0, 1, &mut m).unwrap();
        assert_eq!(e01, l.edge_label(&g, 1, 2, &mut m).unwrap());
        assert_eq!(e01, l.edge_label(&g, 2, 0, &mut m).unwrap());
        assert_ne!(e01, l.edge_label(&g, 2, 3, &mut m).unwrap());
    }

    #[test]
    fn self_loop_label() {
        let g = parse_edge_list("0 1\n1 1\n0 0\n").unwrap();
        let l = lab(&g);
        let mut m = CostMeter::default();
        assert_eq!(l.edge_label(&g, 1, 1, &mut m).unwrap(), l.label(1, &mut m));
        assert_eq!(l.edge_label(&g, 0, 0, &mut m).unwrap(), None);
        assert!(!l.is_bridge(&g, 1, 1, &mut m).unwrap());
        assert!(l.is_bridge(&g, 0, 1, &mut m).unwrap());
    }

    #[test]
    fn block_cut_tree_of_bowtie() {
        let l = lab(&fixtures::bowtie());
        let t = l.block_cut_tree();
        // two blocks joined at vertex 2
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|&(v, _)| v == BctNode::Vertex(2)));
    }

    #[test]
    fn block_cut_tree_of_figure() {
        let t = figure().block_cut_tree();
        let cut: BTreeSet<BctNode> = t.iter().map(|&(v, _)| v).collect();
        assert_eq!(cut, [BctNode::Vertex(2), BctNode::Vertex(6)].into());
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn size_is_n_minus_one_plus_c() {
        let g = fixtures::tri_bridge();
        let l = lab(&g);
        let s = l.serialize().unwrap();
        assert_eq!(s.lines().count(), 1 + g.n() - 1 + l.components());
        assert_eq!(BcLabeling::parse(&s).unwrap(), l);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(BcLabeling::parse("").is_err());
        assert!(BcLabeling::parse("3 1 0\n1 0\n").is_err());
        assert!(BcLabeling::parse("3 1 0\n1 0\n2 5\n0 0\n").is_err());
        assert!(BcLabeling::parse("2 1 0\n1 0\n0 0\n9 9\n").is_err());
        assert!(BcLabeling::parse("2 1 0\n1 0\n0 0\n").is_ok());
    }

    #[test]
    fn queries_do_not_write() {
        let g = fixtures::bc_example();
        let l = build_bc_forest(&g, &mut CostMeter::default()).unwrap();
        let mut m = CostMeter::default();
        for (a, b) in g.edges() {
            l.is_bridge(&g, a, b, &mut m).unwrap();
            l.edge_label(&g, a, b, &mut m).unwrap();
        }
        for v in 0..g.n() {
            l.is_articulation(&g, v, &mut m).unwrap();
        }
        assert_eq!(m.writes(), 0);
    }
}
