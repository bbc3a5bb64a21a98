//! Connectivity with `O(n + βm)` writes, and the sublinear-write oracle that
//! runs it over the cluster graph.

use std::fmt::Write as _;

use crate::cluster::ClusterGraphView;
use crate::cost::{AsymVec, CostMeter};
use crate::decomp::{build_decomposition, parse_fields, DecompOptions, Decomposition};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeId};
use crate::ldd::{ldd, ById, Ldd, NodeGraph, NONE};

/// Salt so that the delays drawn for the cluster graph differ from the
/// center sample.
const CC_SALT: u64 = 0x6363_5f6f_7261_636c;

#[derive(Debug, Clone)]
pub struct LinearCc {
    pub ldd: Ldd,
    /// Edges between blocks, `u << 32 | w`.
    cut: AsymVec<u64>,
    /// Union-find over blocks: `rank << 32 | parent`, parent `NONE` at roots.
    uf: AsymVec<u64>,
    /// Cut edges that joined two trees of the contracted forest.
    links: AsymVec<u64>,
    components: usize,
}

const ROOT: u64 = NONE as u64;

fn find(uf: &AsymVec<u64>, mut b: usize, meter: &mut CostMeter) -> (usize, u32) {
    loop {
        let w = uf.get(b, meter);
        let p = w as u32;
        if p == NONE {
            return (b, (w >> 32) as u32);
        }
        b = p as usize;
    }
}

/// Steps: LDD, BFS tree per block (the LDD parent pointers), contraction of
/// blocks with the cut edges compacted into one array, and union-find over
/// the contracted graph.
pub fn connectivity_linear<G: NodeGraph + ?Sized>(
    g: &G,
    beta: f64,
    seed: u64,
    meter: &mut CostMeter,
) -> Result<LinearCc> {
    let parts = ldd(g, beta, seed, meter)?;
    let mut cut = AsymVec::new();
    let mut nb = Vec::new();
    for u in 0..g.node_count() {
        if !g.has_node(u) {
            continue;
        }
        let bu = parts.block(u, meter);
        nb.clear();
        g.node_neighbors(u, meter, &mut nb)?;
        for &w in &nb {
            if u < w && parts.block(w, meter) != bu {
                cut.push(((u as u64) << 32) | w as u64, meter);
            }
        }
    }
    let blocks = parts.blocks();
    let mut uf = AsymVec::alloc(blocks, ROOT);
    let mut links = AsymVec::new();
    let mut components = blocks;
    for i in 0..cut.len() {
        let e = cut.get(i, meter);
        let (u, w) = ((e >> 32) as usize, e as u32 as usize);
        let (ra, ka) = find(&uf, parts.block(u, meter) as usize, meter);
        let (rb, kb) = find(&uf, parts.block(w, meter) as usize, meter);
        if ra == rb {
            continue;
        }
        let (hi, lo) = if ka > kb || (ka == kb && ra < rb) { (ra, rb) } else { (rb, ra) };
        uf.set(lo, ((kb.max(ka) as u64) << 32) | hi as u64, meter);
        if ka == kb {
            uf.set(hi, (((ka + 1) as u64) << 32) | ROOT, meter);
        }
        links.push(e, meter);
        components -= 1;
    }
    Ok(LinearCc { ldd: parts, cut, uf, links, components })
}

impl LinearCc {
    pub fn components(&self) -> usize {
        self.components
    }

    pub fn cut_edges(&self) -> usize {
        self.cut.len()
    }

    /// Component label of node `i`: the source node of its union-find root block.
    pub fn label(&self, i: usize, meter: &mut CostMeter) -> usize {
        let (root, _) = find(&self.uf, self.ldd.block(i, meter) as usize, meter);
        self.ldd.source(root as u32, meter)
    }

    /// Labels per index (`None` for non-nodes), unmetered.
    pub fn labels(&self) -> Vec<Option<usize>> {
        let blocks = self.ldd.blocks_raw();
        let mut m = CostMeter::default();
        blocks.iter().enumerate().map(|(i, b)| b.map(|_| self.label(i, &mut m))).collect()
    }

    /// `n C` header, then one `v label` line per node.
    pub fn serialize(&self) -> String {
        let labels = self.labels();
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", labels.len(), self.components);
        for (v, l) in labels.iter().enumerate() {
            if let Some(l) = l {
                let _ = writeln!(s, "{v} {l}");
            }
        }
        s
    }

    /// Spanning forest: BFS tree edges inside blocks plus the linking cut edges.
    pub fn forest(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .ldd
            .parents_raw()
            .into_iter()
            .enumerate()
            .filter_map(|(i, p)| p.filter(|&p| p != i).map(|p| (i, p)))
            .collect();
        out.extend(self.links.raw().iter().map(|&e| ((e >> 32) as usize, e as u32 as usize)));
        out
    }
}

/// Reads [`LinearCc::serialize`] output back as a label per index.
pub fn parse_cc_labels(text: &str) -> Result<Vec<Option<usize>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Format("missing label header".into()))?;
    let h = parse_fields(header, 2)?;
    let mut labels = vec![None; h[0] as usize];
    for line in lines {
        let f = parse_fields(line, 2)?;
        let (v, l) = (f[0] as usize, f[1] as usize);
        if v >= labels.len() || l >= labels.len() {
            return Err(Error::Format(format!("label line {line:?} out of range")));
        }
        labels[v] = Some(l);
    }
    Ok(labels)
}

/// Connectivity labels and spanning forest of a graph given by adjacency.
pub fn connected_components<G: Adjacency + ?Sized>(
    g: &G,
    beta: f64,
    seed: u64,
    meter: &mut CostMeter,
) -> Result<LinearCc> {
    connectivity_linear(&ById(g), beta, seed, meter)
}

/// Sublinear-write connectivity oracle: the implicit decomposition plus one
/// component label per stored center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcOracle {
    decomp: Decomposition,
    /// Label (a center id) per center rank.
    labels: AsymVec<u32>,
}

pub fn build_cc_oracle<G: Adjacency + ?Sized>(
    g: &G,
    k: usize,
    seed: u64,
    opts: DecompOptions,
    meter: &mut CostMeter,
) -> Result<CcOracle> {
    let decomp = build_decomposition(g, k, seed, opts, meter)?;
    let view = ClusterGraphView::new(g, &decomp);
    let n = decomp.len();
    let mut labels = AsymVec::new();
    if n > 0 {
        let cc = connectivity_linear(&view, 1.0 / k as f64, seed ^ CC_SALT, meter)?;
        for r in 0..n {
            let src = cc.label(r, meter);
            let c = view.center_at(src, meter)?;
            labels.push(c as u32, meter);
        }
    }
    Ok(CcOracle { decomp, labels })
}

impl CcOracle {
    pub fn decomposition(&self) -> &Decomposition {
        &self.decomp
    }

    /// Label of `v`'s component. Small components without a stored center
    /// are resolved by exploring them; their label is their smallest vertex.
    pub fn query<G: Adjacency + ?Sized>(&self, g: &G, v: NodeId, meter: &mut CostMeter) -> Result<NodeId> {
        let info = self.decomp.center_info(g, v, meter)?;
        if info.implicit {
            return Ok(info.center);
        }
        let r = self
            .decomp
            .rank(info.center, meter)
            .ok_or_else(|| Error::Invariant(format!("center {} not stored", info.center)))?;
        Ok(self.labels.get(r, meter) as NodeId)
    }

    pub fn connected<G: Adjacency + ?Sized>(
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
        Ok(self.query(g, u, meter)? == self.query(g, v, meter)?)
    }

    /// `(center, label)` for every stored center, ascending.
    pub fn center_labels(&self) -> Vec<(NodeId, NodeId)> {
        self.decomp
            .centers()
            .into_iter()
            .zip(self.labels.raw())
            .map(|((c, _), &l)| (c, l as NodeId))
            .collect()
    }

    /// Decomposition section followed by one `center label` line per center.
    pub fn serialize(&self) -> String {
        let mut s = self.decomp.serialize();
        for (c, l) in self.center_labels() {
            let _ = writeln!(s, "{c} {l}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let decomp = Decomposition::parse_lines(&mut lines)?;
        let centers = decomp.centers();
        let mut labels = Vec::with_capacity(centers.len());
        for (c, _) in &centers {
            let line = lines.next().ok_or_else(|| Error::Format("truncated label list".into()))?;
            let f = parse_fields(line, 2)?;
            if f[0] as usize != *c {
                return Err(Error::Format(format!("label line for {} where {c} expected", f[0])));
            }
            if f[1] >= NONE as u64 {
                return Err(Error::Format(format!("label {} out of range", f[1])));
            }
            labels.push(f[1] as u32);
        }
        if lines.next().is_some() {
            return Err(Error::Format("trailing lines after labels".into()));
        }
        Ok(CcOracle { decomp, labels: AsymVec::from_uncharged(labels) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, gen_random_bounded, gen_random_bounded_with, GenOptions, Graph};

    /// Independent union-find, labels = smallest vertex per component.
    fn uf_labels(g: &Graph) -> Vec<usize> {
        let mut p: Vec<usize> = (0..g.n()).collect();
        fn f(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (u, v) in g.edges() {
            let (a, b) = (f(&mut p, u), f(&mut p, v));
            p[a.max(b)] = a.min(b);
        }
        (0..g.n()).map(|v| f(&mut p, v)).collect()
    }

    fn same_partition(a: &[usize], b: &[usize]) -> bool {
        let mut fw = std::collections::HashMap::new();
        let mut bw = std::collections::HashMap::new();
        a.iter().zip(b).all(|(x, y)| *fw.entry(x).or_insert(y) == y && *bw.entry(y).or_insert(x) == x)
    }

    fn check_forest(g: &Graph, cc: &LinearCc) {
        let forest = cc.forest();
        let truth = uf_labels(g);
        let comps = {
            let mut t = truth.clone();
            t.sort_unstable();
            t.dedup();
            t.len()
        };
        assert_eq!(forest.len(), g.n() - comps);
        // acyclic and every edge real
        let mut p: Vec<usize> = (0..g.n()).collect();
        fn f(p: &mut Vec<usize>, mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        for &(u, v) in &forest {
            assert!(g.has_edge(u, v));
            let (a, b) = (f(&mut p, u), f(&mut p, v));
            assert_ne!(a, b, "cycle in forest");
            p[a] = b;
        }
    }

    #[test]
    fn linear_matches_union_find() {
        for seed in 0..20 {
            let g = gen_random_bounded_with(300, 3, seed, GenOptions { extra_edges: 0.3, drop_tree_edge: 0.05 });
            let cc = connected_components(&g, 0.2, seed, &mut CostMeter::default()).unwrap();
            let got: Vec<usize> = cc.labels().into_iter().map(Option::unwrap).collect();
            assert!(same_partition(&got, &uf_labels(&g)));
            check_forest(&g, &cc);
        }
        for (name, g) in fixtures::all() {
            let cc = connected_components(&g, 0.3, 1, &mut CostMeter::default()).unwrap();
            let got: Vec<usize> = cc.labels().into_iter().map(Option::unwrap).collect();
            assert!(same_partition(&got, &uf_labels(&g)), "{name}");
            check_forest(&g, &cc);
        }
    }

    #[test]
    fn two_triangles_forest() {
        let g = fixtures::two_triangles();
        let cc = connected_components(&g, 0.5, 0, &mut CostMeter::default()).unwrap();
        assert_eq!(cc.components(), 2);
        assert_eq!(cc.forest().len(), 4);
    }

    fn oracle_partition(g: &Graph, o: &CcOracle) -> Vec<usize> {
        let mut m = CostMeter::default();
        let out = (0..g.n()).map(|v| o.query(g, v, &mut m).unwrap()).collect();
        assert_eq!(m.writes(), 0);
        out
    }

    #[test]
    fn oracle_matches_union_find() {
        for seed in 0..25 {
            let opts = GenOptions { extra_edges: 0.3, drop_tree_edge: if seed % 3 == 0 { 0.0 } else { 0.03 } };
            let g = gen_random_bounded_with(64 + 37 * seed as usize, 3, seed, opts);
            for k in [2, 4, 7] {
                let o = build_cc_oracle(&g, k, seed, DecompOptions::default(), &mut CostMeter::default()).unwrap();
                assert!(same_partition(&oracle_partition(&g, &o), &uf_labels(&g)), "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn oracle_small_examples() {
        let mut m = CostMeter::default();
        let g = fixtures::bowtie();
        let o = build_cc_oracle(&g, 2, 5, DecompOptions::default(), &mut CostMeter::default()).unwrap();
        assert!(o.connected(&g, 0, 4, &mut m).unwrap());
        assert!(o.connected(&g, 3, 3, &mut m).unwrap());
        let g = fixtures::two_triangles();
        for k in [2, 3, 8] {
            let o = build_cc_oracle(&g, k, 5, DecompOptions::default(), &mut CostMeter::default()).unwrap();
            assert!(!o.connected(&g, 0, 5, &mut m).unwrap());
            assert!(o.connected(&g, 3, 5, &mut m).unwrap());
        }
        assert_eq!(m.writes(), 0);
    }

    #[test]
    fn connected_graph_has_one_center_label() {
        let g = gen_random_bounded(500, 3, 8);
        let o = build_cc_oracle(&g, 4, 8, DecompOptions::default(), &mut CostMeter::default()).unwrap();
        let mut l: Vec<NodeId> = o.center_labels().into_iter().map(|(_, l)| l).collect();
        l.dedup();
        assert_eq!(l.len(), 1);
    }

    #[test]
    fn serialization_round_trip() {
        let g = gen_random_bounded_with(300, 3, 3, GenOptions { extra_edges: 0.2, drop_tree_edge: 0.05 });
        let o = build_cc_oracle(&g, 4, 3, DecompOptions::default(), &mut CostMeter::default()).unwrap();
        let back = CcOracle::parse(&o.serialize()).unwrap();
        assert_eq!(back, o);
        assert_eq!(oracle_partition(&g, &back), oracle_partition(&g, &o));
    }
}
