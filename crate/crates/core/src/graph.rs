//! Read-only multigraph storage, edge-list ingestion and random generation.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::BufRead;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::CostMeter;
use crate::error::{Error, Result};

pub type NodeId = usize;

/// Anything the algorithms can traverse. All adjacency reads are charged to
/// the supplied meter.
pub trait Adjacency {
    /// Exclusive upper bound on node ids. Not every id below the bound needs
    /// to name a node (see [`contains`](Adjacency::contains)).
    fn id_bound(&self) -> usize;

    fn contains(&self, v: NodeId) -> bool;

    /// Appends the neighbors of `v` to `out`, in ascending order, self-loops
    /// included.
    fn neighbors_into(&self, v: NodeId, meter: &mut CostMeter, out: &mut Vec<NodeId>);

    fn neighbors(&self, v: NodeId, meter: &mut CostMeter) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.neighbors_into(v, meter, &mut out);
        out
    }

    /// True for edges that exist only in this view and stand for no edge
    /// of the underlying graph.
    fn is_virtual_edge(&self, _a: NodeId, _b: NodeId, _meter: &mut CostMeter) -> bool {
        false
    }

    /// All valid node ids in ascending order.
    fn nodes(&self) -> Box<dyn Iterator<Item = NodeId> + '_> {
        Box::new((0..self.id_bound()).filter(move |&v| self.contains(v)))
    }
}

/// Priority order on vertices: lower id means higher priority.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VertexOrder;

impl VertexOrder {
    #[inline]
    pub fn cmp(self, a: NodeId, b: NodeId) -> Ordering {
        a.cmp(&b)
    }

    #[inline]
    pub fn higher(self, a: NodeId, b: NodeId) -> bool {
        a < b
    }
}

/// Undirected multigraph in compressed sparse row form. Neighbor lists are
/// sorted; a self-loop contributes two entries to its vertex's list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<NodeId>,
    m: usize,
    max_degree: usize,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::Range { id: x as u64, bound: n });
                }
            }
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adj = vec![0; offsets[n]];
        for &(u, v) in edges {
            adj[fill[u]] = v;
            fill[u] += 1;
            adj[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        let max_degree = deg.iter().copied().max().unwrap_or(0);
        Ok(Graph { offsets, adj, m: edges.len(), max_degree })
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Offset of `v`'s list in the flat adjacency array.
    pub fn offset(&self, v: NodeId) -> usize {
        self.offsets[v]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Unmetered view of `v`'s sorted neighbor list.
    pub fn adj(&self, v: NodeId) -> &[NodeId] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Unmetered flat adjacency entry.
    pub fn adj_at(&self, slot: usize) -> NodeId {
        self.adj[slot]
    }

    pub fn checked_neighbors(&self, v: NodeId, meter: &mut CostMeter) -> Result<Vec<NodeId>> {
        if v >= self.n() {
            return Err(Error::Range { id: v as u64, bound: self.n() });
        }
        Ok(self.neighbors(v, meter))
    }

    /// Positions (relative to `u`'s list) of the entries equal to `v`, found
    /// by binary search.
    pub fn edge_slots(&self, u: NodeId, v: NodeId, meter: &mut CostMeter) -> Range<usize> {
        let list = self.adj(u);
        let steps = usize::BITS - list.len().leading_zeros();
        meter.record_read(2 * steps as u64);
        let lo = list.partition_point(|&x| x < v);
        let hi = list.partition_point(|&x| x <= v);
        lo..hi
    }

    /// Number of parallel copies of edge `{u, v}`.
    pub fn multiplicity(&self, u: NodeId, v: NodeId, meter: &mut CostMeter) -> usize {
        let r = self.edge_slots(u, v, meter);
        let c = r.len();
        if u == v {
            c / 2
        } else {
            c
        }
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.n() && v < self.n() && self.adj(u).binary_search(&v).is_ok()
    }

    /// Every edge once, as `(u, v)` with `u <= v`, sorted; parallel edges
    /// repeat and self-loops appear once.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            let list = self.adj(u);
            let mut i = 0;
            while i < list.len() {
                let v = list[i];
                if v > u {
                    out.push((u, v));
                } else if v == u {
                    out.push((u, u));
                    i += 1;
                }
                i += 1;
            }
        }
        out
    }

    /// Edge-list text, one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# n={} m={}", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

impl Adjacency for Graph {
    fn id_bound(&self) -> usize {
        self.n()
    }

    fn contains(&self, v: NodeId) -> bool {
        v < self.n()
    }

    fn neighbors_into(&self, v: NodeId, meter: &mut CostMeter, out: &mut Vec<NodeId>) {
        let list = self.adj(v);
        meter.record_read(list.len() as u64);
        out.extend_from_slice(list);
    }
}

/// Parses edge-list text: one `u v` pair per line, `#` starts a comment
/// line, blank lines are skipped. `n` is one more than the largest id.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_id: Option<u64> = None;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut it = t.split_whitespace();
        let mut field = |name: &str| -> Result<u64> {
            let tok = it.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("missing {name} endpoint"),
            })?;
            tok.parse::<u64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad {name} endpoint {tok:?}: {e}"),
            })
        };
        let u = field("first")?;
        let v = field("second")?;
        if it.next().is_some() {
            return Err(Error::Parse { line: lineno, msg: "trailing tokens".into() });
        }
        for x in [u, v] {
            if x >= u32::MAX as u64 {
                return Err(Error::Range { id: x, bound: u32::MAX as usize });
            }
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u as NodeId, v as NodeId));
    }
    let n = max_id.map_or(0, |m| m as usize + 1);
    Graph::from_edges(n, &edges)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    load_edge_list(text.as_bytes())
}

/// Knobs for [`gen_random_bounded_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenOptions {
    /// Extra-edge attempts, as a fraction of `n`.
    pub extra_edges: f64,
    /// Probability of dropping each spanning-tree edge (0 keeps the graph
    /// connected).
    pub drop_tree_edge: f64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { extra_edges: 0.5, drop_tree_edge: 0.0 }
    }
}

/// Connected simple graph with maximum degree at most `max_deg`.
pub fn gen_random_bounded(n: usize, max_deg: usize, seed: u64) -> Graph {
    gen_random_bounded_with(n, max_deg, seed, GenOptions::default())
}

/// Random spanning tree grown under the degree cap, followed by extra edges
/// that are rejected when they would exceed the cap or duplicate an edge.
pub fn gen_random_bounded_with(n: usize, max_deg: usize, seed: u64, opts: GenOptions) -> Graph {
    assert!(n >= 1 && max_deg >= 2, "need n >= 1 and max_deg >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0usize; n];
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    // vertices with spare capacity, for the tree phase
    let mut open: Vec<NodeId> = vec![0];
    let mut perm: Vec<NodeId> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let root = perm[0];
    open[0] = root;
    for &v in &perm[1..] {
        let idx = rng.gen_range(0..open.len());
        let u = open[idx];
        let keep = opts.drop_tree_edge <= 0.0 || rng.gen::<f64>() >= opts.drop_tree_edge;
        if keep {
            deg[u] += 1;
            deg[v] += 1;
            adj[u].push(v);
            adj[v].push(u);
            edges.push((u.min(v), u.max(v)));
            if deg[u] >= max_deg {
                open.swap_remove(idx);
            }
        }
        if deg[v] < max_deg {
            open.push(v);
        }
    }
    let attempts = (opts.extra_edges * n as f64).round() as usize;
    for _ in 0..attempts {
        if n < 2 {
            break;
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || deg[u] >= max_deg || deg[v] >= max_deg || adj[u].contains(&v) {
            continue;
        }
        deg[u] += 1;
        deg[v] += 1;
        adj[u].push(v);
        adj[v].push(u);
        edges.push((u.min(v), u.max(v)));
    }
    edges.sort_unstable();
    Graph::from_edges(n, &edges).expect("generated ids are in range")
}

/// Graph with a few hub vertices of large degree on top of a bounded-degree
/// backbone. Used to exercise the bounded-degree adapter.
pub fn gen_random_with_hubs(n: usize, hubs: usize, hub_degree: usize, seed: u64) -> Graph {
    let base = gen_random_bounded_with(n, 3, seed, GenOptions { extra_edges: 0.3, drop_tree_edge: 0.0 });
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut edges = base.edges();
    for h in 0..hubs.min(n) {
        let hub = rng.gen_range(0..n);
        for _ in 0..hub_degree {
            let v = rng.gen_range(0..n);
            if v != hub {
                edges.push((hub.min(v), hub.max(v)));
            }
        }
        let _ = h;
    }
    edges.sort_unstable();
    Graph::from_edges(n, &edges).expect("generated ids are in range")
}

/// Shared small fixtures.
pub mod fixtures {
    use super::{parse_edge_list, Graph};

    /// Path 0-1-2-3-4.
    pub fn p5() -> Graph {
        parse_edge_list("0 1\n1 2\n2 3\n3 4\n").unwrap()
    }

    /// Cycle 0..5.
    pub fn c6() -> Graph {
        parse_edge_list("0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n").unwrap()
    }

    pub const TRI_BRIDGE: &str = "0 1\n1 2\n0 2\n2 3";

    /// Triangle {0,1,2} plus pendant edge 2-3.
    pub fn tri_bridge() -> Graph {
        parse_edge_list(TRI_BRIDGE).unwrap()
    }

    /// Triangles {0,1,2} and {2,3,4} sharing vertex 2.
    pub fn bowtie() -> Graph {
        parse_edge_list("0 1\n1 2\n0 2\n2 3\n3 4\n2 4\n").unwrap()
    }

    /// Triangles {0,1,2} and {3,4,5}, no edge between them.
    pub fn two_triangles() -> Graph {
        parse_edge_list("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n").unwrap()
    }

    /// Triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
    pub fn joined_triangles() -> Graph {
        parse_edge_list("0 1\n1 2\n0 2\n2 3\n3 4\n4 5\n3 5\n").unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        let text: String = (1..=leaves).map(|i| format!("0 {i}\n")).collect();
        parse_edge_list(&text).unwrap()
    }

    /// The BC-labeling example: vertices 1..=9 rooted at 1 (vertex 0 unused
    /// and isolated). Blocks {1,2,3,4,6,7}, {2,5}, {6,8,9}.
    pub fn bc_example() -> Graph {
        parse_edge_list(BC_EXAMPLE).unwrap()
    }

    pub const BC_EXAMPLE: &str = "1 2\n2 3\n3 4\n4 1\n1 6\n6 7\n7 3\n2 5\n6 8\n8 9\n9 6\n";

    pub fn all() -> Vec<(&'static str, Graph)> {
        vec![
            ("P5", p5()),
            ("C6", c6()),
            ("TRI_BRIDGE", tri_bridge()),
            ("BOWTIE", bowtie()),
            ("TWO_TRIANGLES", two_triangles()),
            ("JOINED_TRIANGLES", joined_triangles()),
            ("STAR3", star(3)),
        ]
    }
}
