//! Implicit bounded-degree view of an arbitrary-degree graph.
//!
//! Every vertex whose degree exceeds the cap is replaced by a binary tree of
//! virtual nodes over its (sorted) edge slots. A tree node covering slots
//! `[lo, hi)` splits at `lo + (hi - lo) / 2`; a half of length one is the
//! edge itself, longer halves are child virtual nodes. Nothing is stored:
//! a virtual node's id encodes the owning vertex's adjacency offset plus the
//! split position of the node, and the far endpoint of a redirected edge is
//! found by binary search in the other endpoint's sorted list.
//!
//! Node ids `0..n` are the real vertices. A virtual node with split `s` in
//! the tree of `v` has id `n + offset(v) + s`; ids in that range that are
//! not splits of some tree are unused (see [`Adjacency::contains`]).

use crate::cost::CostMeter;
use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph, NodeId};

pub const DEFAULT_DEGREE_CAP: usize = 3;

#[derive(Debug, Clone, Copy)]
pub struct BoundedView<'g> {
    base: &'g Graph,
    cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TreeNode {
    lo: usize,
    hi: usize,
    /// Split of the parent node, `None` when the parent is the real vertex.
    parent_split: Option<usize>,
}

#[inline]
fn split(lo: usize, hi: usize) -> usize {
    lo + (hi - lo) / 2
}

/// Locates the virtual node whose split is `s` in the tree over `d` slots.
/// The root of the slot tree is the real vertex itself and is never returned.
fn find_node(d: usize, s: usize) -> Option<TreeNode> {
    let (mut lo, mut hi) = (0, d);
    let mut m = split(lo, hi);
    let mut parent = None;
    if s == m {
        return None;
    }
    loop {
        let (clo, chi) = if s < m { (lo, m) } else { (m, hi) };
        if chi - clo < 2 {
            return None;
        }
        let cm = split(clo, chi);
        if cm == s {
            return Some(TreeNode { lo: clo, hi: chi, parent_split: parent });
        }
        parent = Some(cm);
        lo = clo;
        hi = chi;
        m = cm;
    }
}

impl<'g> BoundedView<'g> {
    pub fn new(base: &'g Graph, cap: usize) -> Result<Self> {
        if cap < 3 {
            return Err(Error::Config(format!(
                "degree cap {cap} < 3: a virtual tree node needs degree 3"
            )));
        }
        Ok(BoundedView { base, cap })
    }

    pub fn base(&self) -> &'g Graph {
        self.base
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    fn expanded(&self, v: NodeId) -> bool {
        self.base.degree(v) > self.cap
    }

    /// Number of virtual nodes (a vertex of degree `d > cap` owns `d - 2`).
    pub fn virtual_count(&self) -> usize {
        (0..self.n())
            .filter(|&v| self.expanded(v))
            .map(|v| self.base.degree(v) - 2)
            .sum()
    }

    pub fn is_virtual(&self, x: NodeId) -> bool {
        x >= self.n()
    }

    /// The real vertex a view node belongs to.
    pub fn owner(&self, x: NodeId, meter: &mut CostMeter) -> NodeId {
        if x < self.n() {
            return x;
        }
        let slot = x - self.n();
        let offs = self.base.offsets();
        meter.record_read((usize::BITS - offs.len().leading_zeros()) as u64);
        offs.partition_point(|&o| o <= slot) - 1
    }

    fn virtual_id(&self, v: NodeId, s: usize) -> NodeId {
        self.n() + self.base.offset(v) + s
    }

    /// View node that carries slot `j` of `v` as a direct edge.
    fn slot_holder(&self, v: NodeId, j: usize) -> NodeId {
        let d = self.base.degree(v);
        if d <= self.cap {
            return v;
        }
        let (mut lo, mut hi) = (0, d);
        let mut current = v;
        loop {
            let m = split(lo, hi);
            let (clo, chi) = if j < m { (lo, m) } else { (m, hi) };
            if chi - clo == 1 {
                return current;
            }
            lo = clo;
            hi = chi;
            current = self.virtual_id(v, split(lo, hi));
        }
    }

    /// Far endpoint (as a view node) of the edge stored in slot `i` of `v`,
    /// or `None` for a self-loop.
    fn redirect(&self, v: NodeId, i: usize, meter: &mut CostMeter) -> Option<NodeId> {
        let u = self.base.adj(v)[i];
        meter.record_read(1);
        if u == v {
            return None;
        }
        if self.base.degree(u) <= self.cap {
            return Some(u);
        }
        let mine = self.base.edge_slots(v, u, meter);
        let theirs = self.base.edge_slots(u, v, meter);
        let j = theirs.start + (i - mine.start);
        Some(self.slot_holder(u, j))
    }

    /// The view edge standing for copy `copy` of the original edge `{u, v}`.
    pub fn map_edge(&self, u: NodeId, v: NodeId, copy: usize, meter: &mut CostMeter) -> Option<(NodeId, NodeId)> {
        if u == v {
            return None;
        }
        let su = self.base.edge_slots(u, v, meter);
        let sv = self.base.edge_slots(v, u, meter);
        if copy >= su.len() {
            return None;
        }
        Some((self.slot_holder(u, su.start + copy), self.slot_holder(v, sv.start + copy)))
    }

    fn push_half(&self, v: NodeId, lo: usize, hi: usize, meter: &mut CostMeter, out: &mut Vec<NodeId>) {
        if hi - lo == 1 {
            if let Some(x) = self.redirect(v, lo, meter) {
                out.push(x);
            }
        } else {
            out.push(self.virtual_id(v, split(lo, hi)));
        }
    }
}

impl Adjacency for BoundedView<'_> {
    fn id_bound(&self) -> usize {
        self.n() + 2 * self.base.m()
    }

    fn contains(&self, x: NodeId) -> bool {
        if x < self.n() {
            return true;
        }
        if x >= self.id_bound() {
            return false;
        }
        let v = self.owner(x, &mut CostMeter::default());
        if !self.expanded(v) {
            return false;
        }
        let s = x - self.n() - self.base.offset(v);
        s > 0 && find_node(self.base.degree(v), s).is_some()
    }

    /// Edges inside one vertex's tree of virtual nodes.
    fn is_virtual_edge(&self, a: NodeId, b: NodeId, meter: &mut CostMeter) -> bool {
        (self.is_virtual(a) || self.is_virtual(b)) && self.owner(a, meter) == self.owner(b, meter)
    }

    fn neighbors_into(&self, x: NodeId, meter: &mut CostMeter, out: &mut Vec<NodeId>) {
        let start = out.len();
        if x < self.n() {
            let d = self.base.degree(x);
            if d <= self.cap {
                for i in 0..d {
                    if let Some(y) = self.redirect(x, i, meter) {
                        out.push(y);
                    }
                }
            } else {
                let m = split(0, d);
                self.push_half(x, 0, m, meter, out);
                self.push_half(x, m, d, meter, out);
            }
        } else {
            let v = self.owner(x, meter);
            let d = self.base.degree(v);
            let s = x - self.n() - self.base.offset(v);
            let node = find_node(d, s).expect("neighbors of a non-node id");
            out.push(match node.parent_split {
                None => v,
                Some(ps) => self.virtual_id(v, ps),
            });
            self.push_half(v, node.lo, s, meter, out);
            self.push_half(v, s, node.hi, meter, out);
        }
        out[start..].sort_unstable();
    }
}
