//! Biconnectivity oracle over the cluster decomposition.
//!
//! Stored per center: the two cluster-tree words and one word
//! `glabel << 32 | bridges`. For a non-root cluster `D`, `glabel` names the
//! block holding `D`'s tree edge, and `bridges` counts the bridges on the
//! path from `D`'s tree-edge endpoint up to the anchor of its tree root (the
//! root center). Everything else is recomputed from at most three local
//! graphs per query.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::local::{LocalGraph, Side};
use crate::cluster::{build_cluster_tree, ClusterGraphView, ClusterTree};
use crate::cost::{AsymVec, CostMeter};
use crate::decomp::{build_decomposition, parse_fields, DecompOptions, Decomposition};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeId};

const NO_LABEL: u32 = u32::MAX;
/// Edge labels of blocks inside one cluster: `INTERNAL | center << 24 | local`.
const INTERNAL: u64 = 1 << 63;

#[derive(Debug, Clone)]
pub struct BccOracle {
    decomp: Decomposition,
    tree: ClusterTree,
    info: AsymVec<u64>,
    /// Number of distinct tree-edge block labels handed out.
    pub tree_blocks: u32,
}

#[inline]
fn pack(label: u32, bridges: u32) -> u64 {
    ((label as u64) << 32) | bridges as u64
}

/// Builds the decomposition and cluster tree, then walks the tree top-down
/// once, writing one word per center.
pub fn build_bcc_oracle<G: Adjacency + ?Sized>(
    g: &G,
    k: usize,
    seed: u64,
    opts: DecompOptions,
    meter: &mut CostMeter,
) -> Result<BccOracle> {
    let decomp = build_decomposition(g, k, seed, opts, meter)?;
    let tree = build_cluster_tree(&ClusterGraphView::new(g, &decomp), meter)?;
    let mut o = BccOracle { decomp, tree, info: AsymVec::alloc(0, 0), tree_blocks: 0 };
    o.info = AsymVec::alloc(o.tree.len(), u64::MAX);
    let mut info = std::mem::take(&mut o.info);
    for r in 0..o.tree.len() {
        if o.tree.parent(r, meter).is_some() {
            continue;
        }
        info.set(r, pack(NO_LABEL, 0), meter);
        // stackless preorder walk: down to the first child, else across to
        // the next sibling, else up
        let mut x = r;
        loop {
            let lg = meter.local_scope(|m| o.local_graph_at(g, x, m))??;
            let first_child = meter.local_scope(|m| o.fill_children(g, &lg, &mut info, m))??;
            if let Some(c) = first_child {
                x = c;
                continue;
            }
            loop {
                let Some(p) = o.tree.parent(x, meter) else { break };
                let lp = meter.local_scope(|m| o.local_graph_at(g, p, m))??;
                let fx = o.tree.first(x, meter);
                if let Some(s) = lp.outer.iter().find(|q| q.side == Side::Child && q.node.first > fx) {
                    x = s.rank;
                    break;
                }
                x = p;
            }
            if x == r || o.tree.parent(x, meter).is_none() {
                break;
            }
        }
    }
    o.info = info;
    Ok(o)
}

impl BccOracle {
    pub fn decomposition(&self) -> &Decomposition {
        &self.decomp
    }

    pub fn cluster_tree(&self) -> &ClusterTree {
        &self.tree
    }

    /// Stored clusters.
    pub fn clusters(&self) -> usize {
        self.tree.len()
    }

    fn local_graph_at<G: Adjacency + ?Sized>(&self, g: &G, r: usize, meter: &mut CostMeter) -> Result<LocalGraph> {
        let c = self
            .decomp
            .select(r, meter)
            .ok_or_else(|| Error::Range { id: r as u64, bound: self.tree.len() })?;
        LocalGraph::build(g, &self.decomp, &self.tree, c, meter)
    }

    /// Local graph of the cluster holding `v`.
    pub fn local_graph<G: Adjacency + ?Sized>(&self, g: &G, v: NodeId, meter: &mut CostMeter) -> Result<LocalGraph> {
        let c = self.decomp.rho(g, v, meter)?;
        LocalGraph::build(g, &self.decomp, &self.tree, c, meter)
    }

    fn word(&self, r: usize, meter: &mut CostMeter) -> (u32, u32) {
        let w = self.info.get(r, meter);
        ((w >> 32) as u32, w as u32)
    }

    /// Anchor of a cluster: its tree-edge endpoint, or the center for a root.
    fn anchor(lg: &LocalGraph) -> NodeId {
        lg.parent_outer().map_or(lg.center, |i| lg.outer[i].inside)
    }

    /// Writes the word of every child of `lg`'s cluster; returns the first
    /// child in tree order.
    fn fill_children<G: Adjacency + ?Sized>(
        &mut self,
        g: &G,
        lg: &LocalGraph, info: &mut AsymVec<u64>, meter: &mut CostMeter) -> Result<Option<usize>> {
        let r = lg.rank.expect("stored cluster");
        let w = info.get(r, meter);
        let (label, bridges) = ((w >> 32) as u32, w as u32);
        let up_block = lg.parent_outer().map(|i| lg.outer_block(i));
        let anchor = lg.local(Self::anchor(lg))?;
        let mut fresh: HashMap<Option<u32>, u32> = HashMap::new();
        let mut first = None;
        for (i, o) in lg.outer.iter().enumerate() {
            if o.side != Side::Child {
                continue;
            }
            first.get_or_insert(o.rank);
            let b = lg.outer_block(i);
            let gl = if up_block == Some(b) {
                label
            } else {
                *fresh.entry(b).or_insert_with(|| {
                    self.tree_blocks += 1;
                    self.tree_blocks - 1
                })
            };
            let x = lg.local(o.inside)?;
            let below = u64::from(Self::tree_edge_bridge(g, lg, i, meter)) + lg.bridges_between(g, x, anchor, meter);
            let total = bridges as u64 + below;
            let total = u32::try_from(total).map_err(|_| Error::Config("bridge count overflow".into()))?;
            info.set(o.rank, pack(gl, total), meter);
        }
        Ok(first)
    }

    /// The tree edge to outer vertex `i` is a bridge of the underlying graph.
    fn tree_edge_bridge<G: Adjacency + ?Sized>(g: &G, lg: &LocalGraph, i: usize, meter: &mut CostMeter) -> bool {
        let o = &lg.outer[i];
        let x = lg.local(o.inside).expect("tree edge starts inside");
        lg.is_bridge(x, lg.outer_local(i)) && !g.is_virtual_edge(o.inside, o.vertex, meter)
    }

    fn check_edge<G: Adjacency + ?Sized>(g: &G, a: NodeId, b: NodeId, meter: &mut CostMeter) -> Result<()> {
        for v in [a, b] {
            if !g.contains(v) {
                return Err(Error::Range { id: v as u64, bound: g.id_bound() });
            }
        }
        if !g.neighbors(a, meter).contains(&b) {
            return Err(Error::Argument(format!("({a}, {b}) is not an edge")));
        }
        Ok(())
    }

    /// Bridge iff it is a bridge of the local graph of either endpoint.
    pub fn is_bridge<G: Adjacency + ?Sized>(&self, g: &G, a: NodeId, b: NodeId, meter: &mut CostMeter) -> Result<bool> {
        Self::check_edge(g, a, b, meter)?;
        if a == b {
            return Ok(false);
        }
        meter
            .local_scope(|m| {
                let lg = self.local_graph(g, a, m)?;
                let (la, lb) = lg.local_edge(a, b)?;
                Ok(lg.is_bridge(la, lb))
            })
            .and_then(|r| r)
    }

    pub fn is_articulation<G: Adjacency + ?Sized>(&self, g: &G, v: NodeId, meter: &mut CostMeter) -> Result<bool> {
        meter
            .local_scope(|m| {
                let lg = self.local_graph(g, v, m)?;
                Ok(lg.is_articulation(lg.local(v)?))
            })
            .and_then(|r| r)
    }

    fn label_in(&self, lg: &LocalGraph, la: usize, lb: usize, meter: &mut CostMeter) -> Option<u64> {
        let b = lg.block(la, lb)?;
        for (i, o) in lg.outer.iter().enumerate() {
            if lg.outer_block(i) == Some(b) {
                let r = match o.side {
                    Side::Parent => lg.rank.expect("stored cluster"),
                    Side::Child => o.rank,
                };
                return Some(self.word(r, meter).0 as u64);
            }
        }
        Some(INTERNAL | (lg.center as u64) << 24 | b as u64)
    }

    /// Global block label of edge `(a, b)`; `None` for a self-loop.
    pub fn edge_bcc_label<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        a: NodeId,
        b: NodeId,
        meter: &mut CostMeter,
    ) -> Result<Option<u64>> {
        Self::check_edge(g, a, b, meter)?;
        if a == b {
            return Ok(None);
        }
        meter
            .local_scope(|m| {
                let lg = self.local_graph(g, a, m)?;
                let (la, lb) = lg.local_edge(a, b)?;
                Ok(self.label_in(&lg, la, lb, m))
            })
            .and_then(|r| r)
    }

    /// Labels of the blocks containing `v` (one local graph).
    pub fn vertex_blocks<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        v: NodeId,
        meter: &mut CostMeter,
    ) -> Result<BTreeSet<u64>> {
        meter.local_scope(|m| self.vertex_blocks_in(g, v, m)).and_then(|r| r)
    }

    fn vertex_blocks_in<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        v: NodeId,
        meter: &mut CostMeter,
    ) -> Result<BTreeSet<u64>> {
        let lg = self.local_graph(g, v, meter)?;
        let lv = lg.local(v)?;
        let mut out = BTreeSet::new();
        for &w in lg.adjacency().list(lv) {
            if w != lv {
                out.extend(self.label_in(&lg, lv, w, meter));
            }
        }
        Ok(out)
    }

    /// True if `u == v` or some block contains both.
    pub fn vertices_biconnected<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        u: NodeId,
        v: NodeId,
        meter: &mut CostMeter,
    ) -> Result<bool> {
        if u == v {
            if !g.contains(u) {
                return Err(Error::Range { id: u as u64, bound: g.id_bound() });
            }
            return Ok(true);
        }
        meter
            .local_scope(|m| {
                let a = self.vertex_blocks_in(g, u, m)?;
                let b = self.vertex_blocks_in(g, v, m)?;
                Ok(!a.is_disjoint(&b))
            })
            .and_then(|r| r)
    }

    /// Bridges on any path from `u` to `v`, `None` if they are disconnected.
    pub fn bridges_between<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        u: NodeId,
        v: NodeId,
        meter: &mut CostMeter,
    ) -> Result<Option<u64>> {
        meter.local_scope(|m| self.bridges_between_in(g, u, v, m)).and_then(|r| r)
    }

    fn bridges_between_in<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        u: NodeId,
        v: NodeId,
        meter: &mut CostMeter,
    ) -> Result<Option<u64>> {
        let lu = self.local_graph(g, u, meter)?;
        if lu.is_member(v) {
            return Ok(Some(lu.bridges_between(g, lu.local(u)?, lu.local(v)?, meter)));
        }
        let lv = self.local_graph(g, v, meter)?;
        let (Some(c1), Some(c2)) = (lu.rank, lv.rank) else {
            return Ok(None);
        };
        let l = match self.tree.lca(c1, c2, meter) {
            Ok(l) => l,
            Err(Error::DistinctComponents) => return Ok(None),
            Err(e) => return Err(e),
        };
        let ll = if l == c1 {
            lu.clone()
        } else if l == c2 {
            lv.clone()
        } else {
            self.local_graph_at(g, l, meter)?
        };
        let mut total = 0u64;
        let mut entry = [0usize; 2];
        for (i, (lx, x)) in [(&lu, u), (&lv, v)].into_iter().enumerate() {
            let cx = lx.rank.expect("stored cluster");
            if cx == l {
                entry[i] = ll.local(x)?;
                continue;
            }
            let up = lx.local(Self::anchor(lx))?;
            total += lx.bridges_between(g, lx.local(x)?, up, meter);
            let d = self
                .tree
                .child_toward(l, cx, meter)
                .ok_or_else(|| Error::Invariant(format!("{l} is not above {cx}")))?;
            total += (self.word(cx, meter).1 - self.word(d, meter).1) as u64;
            let oi = ll
                .child_outer(d)
                .ok_or_else(|| Error::Invariant(format!("{d} is not a child of {l}")))?;
            let xd = ll.local(ll.outer[oi].inside)?;
            total += u64::from(Self::tree_edge_bridge(g, &ll, oi, meter));
            entry[i] = xd;
        }
        total += ll.bridges_between(g, entry[0], entry[1], meter);
        Ok(Some(total))
    }

    /// Connected after deleting any single edge.
    pub fn one_edge_connected<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        u: NodeId,
        v: NodeId,
        meter: &mut CostMeter,
    ) -> Result<bool> {
        Ok(self.bridges_between(g, u, v, meter)? == Some(0))
    }

    /// Decomposition section, then `bcc |S| labels` and one
    /// `enter exit info` word triple per center rank.
    pub fn serialize(&self) -> String {
        let mut s = self.decomp.serialize();
        let (enter, exit) = self.tree.words();
        let _ = writeln!(s, "bcc {} {}", enter.len(), self.tree_blocks);
        for ((a, b), c) in enter.iter().zip(exit).zip(self.info.raw()) {
            let _ = writeln!(s, "{a} {b} {c}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let decomp = Decomposition::parse_lines(&mut lines)?;
        let head = lines.next().ok_or_else(|| Error::Format("missing bcc section".into()))?;
        let f = parse_fields(head.strip_prefix("bcc ").ok_or_else(|| Error::Format("missing bcc section".into()))?, 2)?;
        let (count, tree_blocks) = (f[0] as usize, f[1] as u32);
        if count != decomp.len() {
            return Err(Error::Format(format!("{count} cluster words for {} centers", decomp.len())));
        }
        let (mut enter, mut exit, mut info) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| Error::Format("truncated cluster words".into()))?;
            let w = parse_fields(line, 3)?;
            enter.push(w[0]);
            exit.push(w[1]);
            info.push(w[2]);
        }
        if lines.next().is_some() {
            return Err(Error::Format("trailing lines after cluster words".into()));
        }
        let tree = ClusterTree::from_words(enter, exit)?;
        Ok(BccOracle { decomp, tree, info: AsymVec::from_uncharged(info), tree_blocks })
    }

    /// Members and internal blocks (blocks with no outer vertex) of the
    /// cluster centered at `s`.
    pub fn cluster_summary<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        s: NodeId,
        meter: &mut CostMeter,
    ) -> Result<(usize, usize)> {
        meter
            .local_scope(|m| {
                let lg = LocalGraph::build(g, &self.decomp, &self.tree, s, m)?;
                Ok((lg.members.len(), lg.internal_blocks()))
            })
            .and_then(|r| r)
    }
}
