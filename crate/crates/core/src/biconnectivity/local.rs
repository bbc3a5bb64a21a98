//! The local graph of a cluster: the cluster's own vertices plus one outer
//! vertex per cluster-tree edge, with every edge leaving the cluster
//! redirected to the outer vertex standing for its side of the tree.
//!
//! An edge into the subtree of child `D` goes to `D`'s outer vertex; any
//! other leaving edge goes to the parent's outer vertex. Children whose
//! subtree reaches above the cluster (`low(D) < first(C)`) are chained to
//! the parent outer vertex in ascending center order, since in the full
//! graph they are joined around the cluster.

use std::collections::{HashMap, VecDeque};

use super::labeling::{build_bc_forest, BcLabeling};
use crate::cluster::{ClusterTree, TreeNode};
use crate::cost::CostMeter;
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeId};

/// Explicit multigraph in local memory; adjacency reads are not charged.
#[derive(Debug, Clone, Default)]
pub struct LocalAdj {
    adj: Vec<Vec<NodeId>>,
}

impl LocalAdj {
    pub fn new(n: usize) -> Self {
        LocalAdj { adj: vec![Vec::new(); n] }
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    fn finish(&mut self) {
        for l in &mut self.adj {
            l.sort_unstable();
        }
    }

    pub fn list(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

impl Adjacency for LocalAdj {
    fn id_bound(&self) -> usize {
        self.adj.len()
    }

    fn contains(&self, v: NodeId) -> bool {
        v < self.adj.len()
    }

    fn neighbors_into(&self, v: NodeId, _meter: &mut CostMeter, out: &mut Vec<NodeId>) {
        out.extend_from_slice(&self.adj[v]);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Parent,
    Child,
}

/// An outer vertex: the far endpoint of a cluster-tree edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outer {
    pub side: Side,
    /// Center and rank of the neighboring cluster.
    pub center: NodeId,
    pub rank: usize,
    /// The tree edge `(inside, vertex)`: the smallest edge between the two
    /// clusters, ordered parent endpoint first.
    pub inside: NodeId,
    pub vertex: NodeId,
    /// Joined to the parent outer vertex by a chain edge.
    pub chained: bool,
    pub node: TreeNode,
}

#[derive(Debug, Clone)]
pub struct LocalGraph {
    pub center: NodeId,
    /// `None` for the implicit center of a small component.
    pub rank: Option<usize>,
    /// `V_i` in BFS order from the center; local ids `0..members.len()`.
    pub members: Vec<NodeId>,
    /// `V_o`; the parent side first if present, then children by `first`.
    /// Local id of `outer[i]` is `members.len() + i`.
    pub outer: Vec<Outer>,
    pub chain_edges: usize,
    adj: LocalAdj,
    bc: BcLabeling,
    index: HashMap<NodeId, usize>,
    /// Outside endpoint of a leaving edge -> local id of its outer vertex.
    outside: HashMap<NodeId, usize>,
}

impl LocalGraph {
    /// Builds `G'` for the cluster centered at `s`. Zero writes; scratch is
    /// charged as local memory.
    pub fn build<G: Adjacency + ?Sized>(
        g: &G,
        d: &Decomposition,
        tree: &ClusterTree,
        s: NodeId,
        meter: &mut CostMeter,
    ) -> Result<Self> {
        let scan = d.scan_cluster(g, s, meter)?;
        let rank = d.rank(s, meter);
        let mi = scan.members.len();
        let index: HashMap<NodeId, usize> = scan.members.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        let mut outer: Vec<Outer> = Vec::new();
        // neighbor center -> outer index
        let mut side_of: HashMap<NodeId, usize> = HashMap::new();
        if let Some(r) = rank {
            let me = tree.node(r, meter);
            let mut others: Vec<(NodeId, usize, TreeNode)> = Vec::new();
            for c in scan.neighbor_centers() {
                let rc = d
                    .rank(c, meter)
                    .ok_or_else(|| Error::Invariant(format!("neighbor {c} of stored cluster {s} is not stored")))?;
                others.push((c, rc, tree.node(rc, meter)));
            }
            // smallest crossing edge per neighbor center, parent endpoint first
            let mut tree_edge: HashMap<NodeId, (NodeId, NodeId)> = HashMap::new();
            for &(a, b, c) in &scan.boundary {
                let e = if me.contains(&others.iter().find(|o| o.0 == c).unwrap().2) { (a, b) } else { (b, a) };
                tree_edge.entry(c).and_modify(|x| *x = (*x).min(e)).or_insert(e);
            }
            if let Some(p) = me.parent {
                let &(c, rc, node) = others
                    .iter()
                    .find(|o| o.1 == p)
                    .ok_or_else(|| Error::Invariant(format!("cluster {s} is not adjacent to its parent")))?;
                let (x, y) = tree_edge[&c];
                outer.push(Outer { side: Side::Parent, center: c, rank: rc, inside: y, vertex: x, chained: false, node });
            }
            let mut children: Vec<&(NodeId, usize, TreeNode)> =
                others.iter().filter(|o| o.2.parent == Some(r)).collect();
            children.sort_by_key(|o| o.2.first);
            for &&(c, rc, node) in &children {
                let (x, y) = tree_edge[&c];
                let chained = node.low < me.first;
                outer.push(Outer { side: Side::Child, center: c, rank: rc, inside: x, vertex: y, chained, node });
            }
            for &(c, _, node) in &others {
                let i = if me.contains(&node) {
                    outer
                        .iter()
                        .position(|o| o.side == Side::Child && o.node.contains(&node))
                        .ok_or_else(|| Error::Invariant(format!("descendant {c} of {s} under no child")))?
                } else {
                    outer
                        .iter()
                        .position(|o| o.side == Side::Parent)
                        .ok_or_else(|| Error::Invariant(format!("root cluster {s} has a non-descendant neighbor {c}")))?
                };
                side_of.insert(c, i);
            }
        } else if !scan.boundary.is_empty() {
            return Err(Error::Invariant(format!("implicit cluster {s} has leaving edges")));
        }

        let mut adj = LocalAdj::new(mi + outer.len());
        for &(a, b) in &scan.internal {
            adj.add_edge(index[&a], index[&b]);
        }
        let mut outside = HashMap::new();
        for &(a, b, c) in &scan.boundary {
            let o = mi + side_of[&c];
            adj.add_edge(index[&a], o);
            outside.insert(b, o);
        }
        let mut chain: Vec<(NodeId, usize)> =
            outer.iter().enumerate().filter(|(_, o)| o.chained).map(|(i, o)| (o.center, mi + i)).collect();
        chain.sort_unstable();
        let mut chain_edges = 0;
        if let Some(p) = outer.iter().position(|o| o.side == Side::Parent) {
            let mut prev = mi + p;
            for &(_, i) in &chain {
                adj.add_edge(prev, i);
                prev = i;
                chain_edges += 1;
            }
        }
        adj.finish();
        meter.local_alloc((3 * adj.id_bound() + 2 * adj.edge_count() + 2 * outside.len()) as u64);

        let bc = build_bc_forest(&adj, &mut CostMeter::default())?;
        Ok(LocalGraph { center: s, rank, members: scan.members, outer, chain_edges, adj, bc, index, outside })
    }

    pub fn adjacency(&self) -> &LocalAdj {
        &self.adj
    }

    pub fn labeling(&self) -> &BcLabeling {
        &self.bc
    }

    pub fn is_member(&self, v: NodeId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn local(&self, v: NodeId) -> Result<usize> {
        self.index
            .get(&v)
            .copied()
            .ok_or_else(|| Error::Argument(format!("{v} is not in cluster {}", self.center)))
    }

    pub fn outer_local(&self, i: usize) -> usize {
        self.members.len() + i
    }

    pub fn parent_outer(&self) -> Option<usize> {
        self.outer.iter().position(|o| o.side == Side::Parent)
    }

    pub fn child_outer(&self, rank: usize) -> Option<usize> {
        self.outer.iter().position(|o| o.side == Side::Child && o.rank == rank)
    }

    /// Local endpoints of the graph edge `(a, b)` with `a` in the cluster.
    pub fn local_edge(&self, a: NodeId, b: NodeId) -> Result<(usize, usize)> {
        let la = self.local(a)?;
        let lb = match self.index.get(&b) {
            Some(&x) => x,
            None => *self
                .outside
                .get(&b)
                .ok_or_else(|| Error::Argument(format!("({a}, {b}) is not an edge")))?,
        };
        if !self.adj.list(la).contains(&lb) {
            return Err(Error::Argument(format!("({a}, {b}) is not an edge")));
        }
        Ok((la, lb))
    }

    /// Local block label of the edge `(la, lb)`.
    pub fn block(&self, la: usize, lb: usize) -> Option<u32> {
        self.bc.edge_label_unchecked(la, lb, &mut CostMeter::default())
    }

    /// Local block holding every edge at outer vertex `i`.
    pub fn outer_block(&self, i: usize) -> Option<u32> {
        let v = self.outer_local(i);
        self.adj.list(v).first().and_then(|&w| self.block(v, w))
    }

    pub fn is_bridge(&self, la: usize, lb: usize) -> bool {
        self.bc.is_bridge(&self.adj, la, lb, &mut CostMeter::default()).unwrap_or(false)
    }

    pub fn is_articulation(&self, la: usize) -> bool {
        self.bc.is_articulation(&self.adj, la, &mut CostMeter::default()).unwrap_or(false)
    }

    /// Bridges on a path between two cluster vertices that stays inside the
    /// cluster. Virtual edges of `g` are not counted.
    pub fn bridges_between<G: Adjacency + ?Sized>(&self, g: &G, la: usize, lb: usize, meter: &mut CostMeter) -> u64 {
        let mi = self.members.len();
        let mut prev = vec![usize::MAX; mi];
        prev[la] = la;
        let mut q = VecDeque::from([la]);
        while let Some(v) = q.pop_front() {
            if v == lb {
                break;
            }
            for &w in self.adj.list(v) {
                if w < mi && prev[w] == usize::MAX {
                    prev[w] = v;
                    q.push_back(w);
                }
            }
        }
        let mut count = 0;
        let mut v = lb;
        while v != la {
            let p = prev[v];
            if self.is_bridge(p, v) && !g.is_virtual_edge(self.members[p], self.members[v], meter) {
                count += 1;
            }
            v = p;
        }
        count
    }

    /// Local blocks made of cluster edges only.
    pub fn internal_blocks(&self) -> usize {
        let with_outer: Vec<Option<u32>> = (0..self.outer.len()).map(|i| self.outer_block(i)).collect();
        (0..self.bc.components() as u32).filter(|b| !with_outer.contains(&Some(*b))).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{build_cluster_tree, ClusterGraphView};
    use crate::decomp::{build_decomposition, CenterKind, DecompOptions};
    use crate::graph::{fixtures, gen_random_bounded, parse_edge_list, Graph};

    fn setup(g: &Graph, d: Decomposition) -> (Decomposition, ClusterTree) {
        let t = build_cluster_tree(&ClusterGraphView::new(g, &d), &mut CostMeter::default()).unwrap();
        (d, t)
    }

    #[test]
    fn isolated_cluster_has_no_outer_vertices() {
        let g = fixtures::bowtie();
        let d = Decomposition::from_centers(8, 0, 5, &[(0, CenterKind::Primary)]).unwrap();
        let (d, t) = setup(&g, d);
        let lg = LocalGraph::build(&g, &d, &t, 0, &mut CostMeter::default()).unwrap();
        assert!(lg.outer.is_empty());
        assert_eq!(lg.members.len(), 5);
        assert_eq!(lg.adjacency().edge_count(), 6);
        assert_eq!(lg.internal_blocks(), 2);
    }

    #[test]
    fn two_cluster_path() {
        // P5 split at the midpoint: centers 0 and 3
        let g = fixtures::p5();
        let d = Decomposition::from_centers(4, 0, 5, &[(0, CenterKind::Primary), (3, CenterKind::Primary)]).unwrap();
        let (d, t) = setup(&g, d);
        let mut m = CostMeter::default();
        let a = LocalGraph::build(&g, &d, &t, 0, &mut m).unwrap();
        let b = LocalGraph::build(&g, &d, &t, 3, &mut m).unwrap();
        assert_eq!(a.members, vec![0, 1]);
        assert_eq!(b.members, vec![3, 2, 4]);
        assert_eq!(a.outer.len(), 1);
        assert_eq!((a.outer[0].side, a.outer[0].inside, a.outer[0].vertex), (Side::Child, 1, 2));
        assert_eq!(b.outer.len(), 1);
        assert_eq!((b.outer[0].side, b.outer[0].inside, b.outer[0].vertex), (Side::Parent, 2, 1));
        assert_eq!(m.writes(), 0);
    }

    #[test]
    fn three_joined_clusters_give_two_chain_edges() {
        // singleton clusters; the tree is 0 - 1 - {2, 3} and both children
        // of 1 also touch 0, so 1's parent side and children form one group
        let g = parse_edge_list("0 1\n1 2\n1 3\n2 0\n3 0\n").unwrap();
        let centers: Vec<(NodeId, CenterKind)> = (0..4).map(|c| (c, CenterKind::Primary)).collect();
        let d = Decomposition::from_centers(2, 0, 4, &centers).unwrap();
        let (d, t) = setup(&g, d);
        let lg = LocalGraph::build(&g, &d, &t, 1, &mut CostMeter::default()).unwrap();
        assert_eq!(lg.outer.len(), 3);
        assert_eq!(lg.chain_edges, 2);
        assert!(lg.outer.iter().filter(|o| o.side == Side::Child).all(|o| o.chained));
        // chains plus the three leaving edges: one block, no cut vertex
        assert!(!lg.is_articulation(0));
    }

    #[test]
    fn every_cluster_builds_on_random_graphs() {
        for seed in 0..8 {
            let g = gen_random_bounded(400, 3, seed);
            let mut m = CostMeter::default();
            let d = build_decomposition(&g, 4, seed, DecompOptions::default(), &mut m).unwrap();
            let (d, t) = setup(&g, d);
            let mut total = 0;
            for (c, _) in d.centers() {
                let lg = LocalGraph::build(&g, &d, &t, c, &mut m).unwrap();
                total += lg.members.len();
                // each outer vertex's edges form one local block
                for i in 0..lg.outer.len() {
                    let v = lg.outer_local(i);
                    let b = lg.outer_block(i);
                    assert!(b.is_some());
                    assert!(lg.adjacency().list(v).iter().all(|&w| lg.block(v, w) == b));
                }
            }
            assert_eq!(total, g.n());
        }
    }
}
