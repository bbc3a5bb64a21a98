//! Brute-force ground truth. Nothing here touches the oracle modules or the
//! cost meter.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use crate::graph::{Graph, NodeId};

/// Component label per vertex: the smallest vertex id in its component.
pub fn union_find_cc(g: &Graph) -> Vec<NodeId> {
    let mut parent: Vec<NodeId> = (0..g.n()).collect();
    fn find(p: &mut [NodeId], mut x: NodeId) -> NodeId {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (u, v) in g.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        // the smaller root wins, so every root is its component's minimum
        if a < b {
            parent[b] = a;
        } else {
            parent[a] = b;
        }
    }
    (0..g.n()).map(|v| find(&mut parent, v)).collect()
}

fn count_components(n: usize, edges: impl Iterator<Item = (NodeId, NodeId)>, skip_vertex: Option<NodeId>) -> usize {
    let mut parent: Vec<NodeId> = (0..n).collect();
    fn find(p: &mut [NodeId], mut x: NodeId) -> NodeId {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n - usize::from(skip_vertex.is_some());
    for (u, v) in edges {
        if Some(u) == skip_vertex || Some(v) == skip_vertex {
            continue;
        }
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub labels: Vec<NodeId>,
    /// `(u, v)` with `u < v`.
    pub bridges: BTreeSet<(NodeId, NodeId)>,
    pub articulation: BTreeSet<NodeId>,
    /// `g.edges()`, the index space of `edge_block`.
    pub edges: Vec<(NodeId, NodeId)>,
    /// Block id per edge; `None` for self-loops.
    pub edge_block: Vec<Option<usize>>,
}

impl GroundTruth {
    /// Blocks containing each vertex.
    pub fn vertex_blocks(&self) -> Vec<BTreeSet<usize>> {
        let mut out = vec![BTreeSet::new(); self.labels.len()];
        for (&(u, v), b) in self.edges.iter().zip(&self.edge_block) {
            if let Some(b) = *b {
                out[u].insert(b);
                out[v].insert(b);
            }
        }
        out
    }

    /// Per vertex, the smallest vertex reachable without crossing a bridge.
    pub fn two_edge_labels(&self) -> Vec<NodeId> {
        let n = self.labels.len();
        let kept: Vec<(NodeId, NodeId)> =
            self.edges.iter().copied().filter(|&(u, v)| u != v && !self.bridges.contains(&(u, v))).collect();
        let g = Graph::from_edges(n, &kept).expect("edges come from a valid graph");
        union_find_cc(&g)
    }
}

/// Bridges by single-edge deletion, cut vertices by single-vertex deletion,
/// blocks by a separate Hopcroft-Tarjan pass. On graphs with at most 128
/// vertices the two methods are cross-checked and any disagreement panics.
pub fn brute_biconn(g: &Graph) -> GroundTruth {
    let n = g.n();
    let edges = g.edges();
    let base = count_components(n, edges.iter().copied(), None);

    let mut bridges = BTreeSet::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u == v {
            continue;
        }
        let rest = edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e);
        if count_components(n, rest, None) > base {
            bridges.insert((u, v));
        }
    }

    let mut articulation = BTreeSet::new();
    for v in 0..n {
        let isolated = g.adj(v).iter().all(|&w| w == v);
        let without = count_components(n, edges.iter().copied(), Some(v));
        if without > base - usize::from(isolated) {
            articulation.insert(v);
        }
    }

    let edge_block = hopcroft_tarjan(n, &edges);
    let truth = GroundTruth { labels: union_find_cc(g), bridges, articulation, edges, edge_block };
    if n <= 128 {
        cross_check(&truth);
    }
    truth
}

fn cross_check(t: &GroundTruth) {
    let mut size: HashMap<usize, usize> = HashMap::new();
    for b in t.edge_block.iter().flatten() {
        *size.entry(*b).or_default() += 1;
    }
    let bridges: BTreeSet<(NodeId, NodeId)> = t
        .edges
        .iter()
        .zip(&t.edge_block)
        .filter(|(_, b)| b.is_some_and(|b| size[&b] == 1))
        .map(|(&e, _)| e)
        .collect();
    assert_eq!(bridges, t.bridges, "deletion and Hopcroft-Tarjan disagree on bridges");
    let aps: BTreeSet<NodeId> =
        t.vertex_blocks().iter().enumerate().filter(|(_, s)| s.len() >= 2).map(|(v, _)| v).collect();
    assert_eq!(aps, t.articulation, "deletion and Hopcroft-Tarjan disagree on cut vertices");
}

/// Block id per edge by the edge-stack DFS. Parallel copies are distinct
/// edges; self-loops get `None`.
pub fn hopcroft_tarjan(n: usize, edges: &[(NodeId, NodeId)]) -> Vec<Option<usize>> {
    let mut adj: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u != v {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
    }
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut block = vec![None; edges.len()];
    let mut blocks = 0;
    let mut clock = 0;
    let mut estack: Vec<usize> = Vec::new();
    // (vertex, edge used to enter it, next adjacency index)
    let mut stack: Vec<(NodeId, usize, usize)> = Vec::new();
    for s in 0..n {
        if disc[s] != UNSEEN {
            continue;
        }
        disc[s] = clock;
        low[s] = clock;
        clock += 1;
        stack.push((s, UNSEEN, 0));
        while let Some(&mut (v, via, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let (u, e) = adj[v][*i];
                *i += 1;
                if e == via {
                    continue;
                }
                if disc[u] == UNSEEN {
                    estack.push(e);
                    disc[u] = clock;
                    low[u] = clock;
                    clock += 1;
                    stack.push((u, e, 0));
                } else if disc[u] < disc[v] {
                    estack.push(e);
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        while let Some(e) = estack.pop() {
                            block[e] = Some(blocks);
                            if e == via {
                                break;
                            }
                        }
                        blocks += 1;
                    }
                }
            }
        }
    }
    block
}

/// True if `a` and `b` induce the same partition: equal entries in one
/// exactly where the other has equal entries (`None` entries must match).
pub fn same_partition<A: Eq + Hash + Clone, B: Eq + Hash + Clone>(a: &[Option<A>], b: &[Option<B>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut fwd: HashMap<A, B> = HashMap::new();
    let mut back: HashMap<B, A> = HashMap::new();
    for (x, y) in a.iter().zip(b) {
        match (x, y) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                if fwd.entry(x.clone()).or_insert_with(|| y.clone()) != y
                    || back.entry(y.clone()).or_insert_with(|| x.clone()) != x
                {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, gen_random_bounded_with, parse_edge_list, GenOptions};

    #[test]
    fn union_find_examples() {
        let empty = Graph::from_edges(3, &[]).unwrap();
        assert_eq!(union_find_cc(&empty), vec![0, 1, 2]);
        assert_eq!(union_find_cc(&fixtures::bowtie()).iter().collect::<BTreeSet<_>>().len(), 1);
        assert_eq!(union_find_cc(&fixtures::two_triangles()), vec![0, 0, 0, 3, 3, 3]);
    }

    #[test]
    fn tri_bridge_truth() {
        let t = brute_biconn(&fixtures::tri_bridge());
        assert_eq!(t.bridges, [(2, 3)].into());
        assert_eq!(t.articulation, [2].into());
    }

    #[test]
    fn cycle_truth() {
        let t = brute_biconn(&fixtures::c6());
        assert!(t.bridges.is_empty() && t.articulation.is_empty());
        assert!(t.edge_block.iter().all(|&b| b == Some(0)));
    }

    #[test]
    fn star_truth() {
        let t = brute_biconn(&fixtures::star(3));
        assert_eq!(t.bridges.len(), 3);
        assert_eq!(t.articulation, [0].into());
    }

    #[test]
    fn parallel_and_loops() {
        let g = parse_edge_list("0 1\n0 1\n1 2\n2 2\n").unwrap();
        let t = brute_biconn(&g);
        assert_eq!(t.bridges, [(1, 2)].into());
        assert_eq!(t.articulation, [1].into());
        assert_eq!(t.edge_block[0], t.edge_block[1]);
        assert_eq!(t.edge_block[3], None);
        assert_eq!(t.two_edge_labels(), vec![0, 0, 2]);
    }

    #[test]
    fn cross_check_random() {
        for seed in 0..30 {
            let opts = GenOptions { extra_edges: (seed % 4) as f64 * 0.1, drop_tree_edge: 0.05 };
            let g = gen_random_bounded_with(60 + seed as usize, 4, seed, opts);
            brute_biconn(&g);
        }
    }

    #[test]
    fn partition_comparison() {
        assert!(same_partition(&[Some(1), Some(1), Some(2)], &[Some('a'), Some('a'), Some('b')]));
        assert!(!same_partition(&[Some(1), Some(1), Some(2)], &[Some('a'), Some('b'), Some('b')]));
        assert!(!same_partition(&[Some(1), Some(2)], &[Some('a'), Some('a')]));
        assert!(!same_partition(&[Some(1)], &[None::<u8>]));
    }
}
