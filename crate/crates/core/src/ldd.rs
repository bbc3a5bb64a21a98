//! Low-diameter decomposition by exponentially delayed BFS.
//!
//! Every node draws a shift `δ ~ Exp(β)` from a seeded hash and wakes up at
//! `⌊δ_max - δ⌋`, so large shifts start first. In iteration `i` all live
//! searches advance one level, then every unclaimed node waking at `i`
//! starts its own block. A node reached by several searches in
//! the same iteration joins the lowest block id; block ids count up in
//! start order.

use std::collections::BTreeMap;

use crate::cluster::ClusterGraphView;
use crate::cost::{AsymVec, CostMeter};
use crate::decomp::hash64;
use crate::error::{Error, Result};
use crate::graph::Adjacency;

/// Graphs whose nodes are addressed by dense indices `0..node_count()`.
/// Indices that are not nodes (`has_node` false) are skipped.
pub trait NodeGraph {
    fn node_count(&self) -> usize;

    fn has_node(&self, _i: usize) -> bool {
        true
    }

    /// Appends the neighbors of `i`; may contain `i` itself and repeats.
    fn node_neighbors(&self, i: usize, meter: &mut CostMeter, out: &mut Vec<usize>) -> Result<()>;
}

/// Any adjacency structure, indexed by node id.
pub struct ById<'a, G: ?Sized>(pub &'a G);

impl<G: Adjacency + ?Sized> NodeGraph for ById<'_, G> {
    fn node_count(&self) -> usize {
        self.0.id_bound()
    }

    fn has_node(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    fn node_neighbors(&self, i: usize, meter: &mut CostMeter, out: &mut Vec<usize>) -> Result<()> {
        self.0.neighbors_into(i, meter, out);
        Ok(())
    }
}

/// The cluster graph, indexed by center rank.
impl<G: Adjacency + ?Sized> NodeGraph for ClusterGraphView<'_, G> {
    fn node_count(&self) -> usize {
        self.len()
    }

    fn node_neighbors(&self, i: usize, meter: &mut CostMeter, out: &mut Vec<usize>) -> Result<()> {
        let nb = meter.local_scope(|m| self.ranked_neighbors(i, m))??;
        out.extend(nb);
        Ok(())
    }
}

pub(crate) const NONE: u32 = u32::MAX;
const UNCLAIMED: u64 = u64::MAX;

/// Salt separating delay draws from center sampling under the same seed.
const DELAY_SALT: u64 = 0x6c64_645f_6465_6c61;

/// `δ_v = -ln(u) / β` with `u ∈ (0, 1]` drawn from the seeded hash, capped
/// at `4 ln(n) / β`.
pub fn delay(seed: u64, v: usize, beta: f64, n: usize) -> f64 {
    let h = hash64(seed ^ DELAY_SALT, v as u64);
    let u = ((h >> 11) + 1) as f64 / (1u64 << 53) as f64;
    let cap = 4.0 * (n.max(2) as f64).ln() / beta;
    (-u.ln() / beta).min(cap)
}

#[derive(Debug, Clone)]
pub struct Ldd {
    pub beta: f64,
    /// `block << 32 | bfs parent` per node; a block's source is its own parent.
    owner: AsymVec<u64>,
    /// Source node of each block.
    sources: AsymVec<u32>,
    pub cut_edges: usize,
}

impl Ldd {
    pub fn blocks(&self) -> usize {
        self.sources.len()
    }

    pub fn block(&self, i: usize, meter: &mut CostMeter) -> u32 {
        (self.owner.get(i, meter) >> 32) as u32
    }

    pub fn parent(&self, i: usize, meter: &mut CostMeter) -> usize {
        self.owner.get(i, meter) as u32 as usize
    }

    pub fn source(&self, b: u32, meter: &mut CostMeter) -> usize {
        self.sources.get(b as usize, meter) as usize
    }

    /// Block id per index (`None` for non-nodes), unmetered.
    pub fn blocks_raw(&self) -> Vec<Option<u32>> {
        self.owner.raw().iter().map(|&w| (w != UNCLAIMED).then_some((w >> 32) as u32)).collect()
    }

    /// BFS parent per index, unmetered.
    pub fn parents_raw(&self) -> Vec<Option<usize>> {
        self.owner.raw().iter().map(|&w| (w != UNCLAIMED).then_some(w as u32 as usize)).collect()
    }
}

/// Writes one word per node (its owner) plus one per block (its source).
pub fn ldd<G: NodeGraph + ?Sized>(g: &G, beta: f64, seed: u64, meter: &mut CostMeter) -> Result<Ldd> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Argument(format!("beta = {beta} outside (0, 1)")));
    }
    let n = g.node_count();
    if n as u64 >= NONE as u64 {
        return Err(Error::Config(format!("{n} nodes exceed the 32-bit block layout")));
    }
    let present = (0..n).filter(|&i| g.has_node(i)).count();
    let shifts: Vec<(f64, usize)> =
        (0..n).filter(|&i| g.has_node(i)).map(|i| (delay(seed, i, beta, present), i)).collect();
    let top = shifts.iter().map(|&(d, _)| d).fold(0.0, f64::max);
    let mut starts: Vec<(u64, usize)> = shifts.iter().map(|&(d, i)| ((top - d).floor() as u64, i)).collect();
    starts.sort_unstable();
    meter.local_alloc(2 * starts.len() as u64);

    let mut owner = AsymVec::alloc(n, UNCLAIMED);
    let mut sources = AsymVec::new();
    let mut frontier: Vec<usize> = Vec::new();
    let mut next = 0;
    let mut iter = 0u64;
    let mut nb = Vec::new();
    while next < starts.len() || !frontier.is_empty() {
        if frontier.is_empty() && starts[next].0 > iter {
            iter = starts[next].0;
        }
        // advance every live search by one level
        let mut claims: BTreeMap<usize, (u32, usize)> = BTreeMap::new();
        for &u in &frontier {
            let b = (owner.get(u, meter) >> 32) as u32;
            nb.clear();
            g.node_neighbors(u, meter, &mut nb)?;
            for &w in &nb {
                if w == u || owner.get(w, meter) != UNCLAIMED {
                    continue;
                }
                let e = claims.entry(w).or_insert((b, u));
                if b < e.0 {
                    *e = (b, u);
                }
            }
        }
        meter.local_free(frontier.len() as u64);
        frontier.clear();
        for (w, (b, u)) in claims {
            owner.set(w, ((b as u64) << 32) | u as u64, meter);
            frontier.push(w);
        }
        // start new blocks
        while next < starts.len() && starts[next].0 == iter {
            let v = starts[next].1;
            next += 1;
            if owner.get(v, meter) == UNCLAIMED {
                let b = sources.len() as u64;
                owner.set(v, (b << 32) | v as u64, meter);
                sources.push(v as u32, meter);
                frontier.push(v);
            }
        }
        meter.local_alloc(frontier.len() as u64);
        iter += 1;
    }

    let mut cut = 0;
    for i in 0..n {
        if !g.has_node(i) {
            continue;
        }
        let b = owner.get(i, meter) >> 32;
        nb.clear();
        g.node_neighbors(i, meter, &mut nb)?;
        for &w in &nb {
            if i < w && owner.get(w, meter) >> 32 != b {
                cut += 1;
            }
        }
    }
    Ok(Ldd { beta, owner, sources, cut_edges: cut })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, gen_random_bounded, parse_edge_list, Graph};
    use std::collections::{HashSet, VecDeque};

    fn run(g: &Graph, beta: f64, seed: u64) -> Ldd {
        ldd(&ById(g), beta, seed, &mut CostMeter::default()).unwrap()
    }

    #[test]
    fn beta_range_checked() {
        let g = fixtures::p5();
        for b in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(ldd(&ById(&g), b, 0, &mut CostMeter::default()).is_err());
        }
    }

    #[test]
    fn single_vertex() {
        let g = parse_edge_list("0 0\n").unwrap();
        let l = run(&g, 0.5, 3);
        assert_eq!(l.blocks(), 1);
        assert_eq!(l.cut_edges, 0);
    }

    #[test]
    fn simultaneous_wakeup_gives_singletons() {
        // a seed where every vertex of P5 wakes in iteration 0
        let g = fixtures::p5();
        let beta = 0.9;
        let seed = (0..)
            .find(|&s| {
                let d: Vec<f64> = (0..5).map(|v| delay(s, v, beta, 5)).collect();
                let top = d.iter().cloned().fold(0.0, f64::max);
                d.iter().all(|&x| top - x < 1.0)
            })
            .unwrap();
        let l = run(&g, beta, seed);
        assert_eq!(l.blocks(), 5);
        assert_eq!(l.cut_edges, 4);
    }

    fn check_blocks(g: &Graph, l: &Ldd) {
        let blocks = l.blocks_raw();
        let parents = l.parents_raw();
        let mut m = CostMeter::default();
        for v in 0..g.n() {
            let b = blocks[v].unwrap();
            let p = parents[v].unwrap();
            if p == v {
                assert_eq!(l.source(b, &mut m), v);
            } else {
                assert!(g.has_edge(v, p));
                assert_eq!(blocks[p], Some(b));
            }
        }
        // blocks are connected: BFS restricted to the block reaches all members
        for b in 0..l.blocks() as u32 {
            let src = l.source(b, &mut m);
            let members: HashSet<usize> = (0..g.n()).filter(|&v| blocks[v] == Some(b)).collect();
            let mut seen = HashSet::from([src]);
            let mut q = VecDeque::from([src]);
            while let Some(v) = q.pop_front() {
                for &w in g.adj(v) {
                    if members.contains(&w) && seen.insert(w) {
                        q.push_back(w);
                    }
                }
            }
            assert_eq!(seen.len(), members.len());
        }
        let cut = g.edges().iter().filter(|&&(u, v)| blocks[u] != blocks[v]).count();
        assert_eq!(cut, l.cut_edges);
    }

    #[test]
    fn blocks_are_connected_trees() {
        for seed in 0..10 {
            let g = gen_random_bounded(600, 3, seed);
            for beta in [0.05, 0.2, 0.6] {
                check_blocks(&g, &run(&g, beta, seed));
            }
        }
    }

    #[test]
    fn writes_one_word_per_node_and_block() {
        let g = gen_random_bounded(500, 3, 2);
        let mut m = CostMeter::default();
        let l = ldd(&ById(&g), 0.1, 2, &mut m).unwrap();
        assert_eq!(m.writes() as usize, 500 + l.blocks());
    }

    #[test]
    fn cut_fraction_small() {
        for beta in [0.05, 0.1, 0.2] {
            let mut frac = 0.0;
            for seed in 0..5 {
                let g = gen_random_bounded(4096, 3, seed);
                let l = run(&g, beta, seed);
                frac += l.cut_edges as f64 / g.m() as f64;
            }
            assert!(frac / 5.0 <= 2.0 * beta, "beta {beta}: mean cut fraction {}", frac / 5.0);
        }
    }
}
