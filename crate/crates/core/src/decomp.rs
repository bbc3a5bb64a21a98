//! Implicit k-decomposition: a center set with one bit per center, from
//! which every vertex's cluster is recomputed on demand.
//!
//! A vertex's primary center is the sampled center reached first by a
//! priority BFS (equal-hop paths ordered by their first differing vertex,
//! lower id first). Its center is the first stored center on the path to
//! that primary center. Clusters that would exceed `k` vertices are cut by
//! secondary centers.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::cost::{AsymVec, CostMeter};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeId};

/// SplitMix64 finalizer.
#[inline]
pub fn hash64(seed: u64, v: u64) -> u64 {
    let mut z = seed ^ v.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `hash64(seed, v) / 2^64 < 1/k`.
#[inline]
pub fn sampled(seed: u64, v: NodeId, k: usize) -> bool {
    hash64(seed, v as u64) < u64::MAX / k as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CenterKind {
    Primary,
    Secondary,
}

impl CenterKind {
    pub fn bit(self) -> u8 {
        match self {
            CenterKind::Primary => 0,
            CenterKind::Secondary => 1,
        }
    }
}

/// Total order on equal-source paths: fewer hops first, then the path whose
/// first differing vertex has higher priority (lower id).
#[derive(Debug, Clone, Copy, Default)]
pub struct PathOrder;

impl PathOrder {
    pub fn cmp(self, a: &[NodeId], b: &[NodeId]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| a.cmp(b))
    }
}

/// Discovery sequence of a priority BFS.
#[derive(Debug, Clone, Default)]
pub struct BfsTrace {
    pub order: Vec<NodeId>,
    /// Index into `order` of each vertex's BFS parent; `usize::MAX` for the source.
    pub parent: Vec<usize>,
    /// Index of the vertex at which the stop predicate fired.
    pub stopped: Option<usize>,
}

impl BfsTrace {
    /// Path from the source to `order[idx]`, source first.
    pub fn path_to(&self, mut idx: usize) -> Vec<NodeId> {
        let mut p = vec![self.order[idx]];
        while self.parent[idx] != usize::MAX {
            idx = self.parent[idx];
            p.push(self.order[idx]);
        }
        p.reverse();
        p
    }
}

const WORDS_PER_VISIT: u64 = 2;

/// Breadth-first search from `source` in path order. Vertices are discovered
/// level by level; within a level, children follow their parent's rank and
/// then their own id, and a vertex keeps its first discovery. The search
/// stops right after discovering a vertex on which `stop` returns true.
/// All state is local; the meter sees adjacency reads and local footprint.
pub fn priority_bfs<G: Adjacency + ?Sized>(
    g: &G,
    source: NodeId,
    mut stop: impl FnMut(NodeId, &mut CostMeter) -> bool,
    meter: &mut CostMeter,
) -> BfsTrace {
    let mut trace = BfsTrace { order: vec![source], parent: vec![usize::MAX], stopped: None };
    meter.local_alloc(WORDS_PER_VISIT);
    if stop(source, meter) {
        trace.stopped = Some(0);
        return trace;
    }
    let mut seen: HashMap<NodeId, ()> = HashMap::new();
    seen.insert(source, ());
    let mut nb = Vec::new();
    let mut head = 0;
    while head < trace.order.len() {
        let v = trace.order[head];
        nb.clear();
        g.neighbors_into(v, meter, &mut nb);
        for &w in &nb {
            if w == v || seen.contains_key(&w) {
                continue;
            }
            seen.insert(w, ());
            trace.order.push(w);
            trace.parent.push(head);
            meter.local_alloc(WORDS_PER_VISIT);
            if stop(w, meter) {
                trace.stopped = Some(trace.order.len() - 1);
                return trace;
            }
        }
        head += 1;
    }
    trace
}

/// Result of a center lookup for one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CenterInfo {
    pub center: NodeId,
    pub primary: NodeId,
    /// Next vertex on the path toward the center (`None` at the center).
    pub next_hop: Option<NodeId>,
    /// The vertex lies in a component smaller than `k` without any sampled
    /// vertex; its center is the component's smallest vertex and is never
    /// stored.
    pub implicit: bool,
}

/// Packed 2-bit-per-node center map: 0 = not a center, 1 = primary,
/// 2 = secondary.
#[derive(Debug, Clone, PartialEq, Eq)]
struct CenterMap {
    words: AsymVec<u64>,
}

const SLOTS_PER_WORD: usize = 32;

impl CenterMap {
    fn new(bound: usize) -> Self {
        CenterMap { words: AsymVec::alloc(bound.div_ceil(SLOTS_PER_WORD).max(1), 0) }
    }

    fn get(&self, v: NodeId, meter: &mut CostMeter) -> Option<CenterKind> {
        let w = self.words.get(v / SLOTS_PER_WORD, meter);
        decode((w >> (2 * (v % SLOTS_PER_WORD))) & 3)
    }

    fn peek(&self, v: NodeId) -> Option<CenterKind> {
        let w = self.words.raw()[v / SLOTS_PER_WORD];
        decode((w >> (2 * (v % SLOTS_PER_WORD))) & 3)
    }

    fn set(&mut self, v: NodeId, kind: CenterKind, meter: &mut CostMeter) {
        let i = v / SLOTS_PER_WORD;
        let shift = 2 * (v % SLOTS_PER_WORD);
        let code = match kind {
            CenterKind::Primary => 1u64,
            CenterKind::Secondary => 2u64,
        };
        let w = (self.words.raw()[i] & !(3 << shift)) | (code << shift);
        self.words.set(i, w, meter);
    }
}

trait PairCount {
    fn count_ones_in_pairs(self) -> u32;
}

impl PairCount for u64 {
    /// Number of non-zero 2-bit slots.
    fn count_ones_in_pairs(self) -> u32 {
        ((self | (self >> 1)) & 0x5555_5555_5555_5555).count_ones()
    }
}

fn decode(bits: u64) -> Option<CenterKind> {
    match bits {
        1 => Some(CenterKind::Primary),
        2 => Some(CenterKind::Secondary),
        _ => None,
    }
}

/// Options for [`build_decomposition`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecompOptions {
    /// Also promote every child of a split cluster's root to a secondary
    /// center (the rule used to bound recursion depth when parallelizing).
    pub par_centers: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    k: usize,
    seed: u64,
    bound: usize,
    count: usize,
    map: CenterMap,
    /// Number of centers in map words before each word.
    prefix: AsymVec<u32>,
}

/// Sampling retries when the primary sample is more than four times its
/// expected size.
const MAX_RESAMPLES: u64 = 8;

impl Decomposition {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Seed actually used for sampling (after any resampling).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn id_bound(&self) -> usize {
        self.bound
    }

    /// Number of stored centers.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn kind(&self, v: NodeId, meter: &mut CostMeter) -> Option<CenterKind> {
        if v >= self.bound {
            return None;
        }
        self.map.get(v, meter)
    }

    /// Builds the rank index: one word per map word.
    fn indexed(mut self, meter: &mut CostMeter) -> Self {
        let mut prefix = AsymVec::new();
        let mut total = 0u32;
        for i in 0..self.map.words.len() {
            prefix.push(total, meter);
            total += self.map.words.get(i, meter).count_ones_in_pairs();
        }
        self.prefix = prefix;
        self
    }

    /// Position of center `c` in ascending center order. Two reads.
    pub fn rank(&self, c: NodeId, meter: &mut CostMeter) -> Option<usize> {
        if c >= self.bound {
            return None;
        }
        let i = c / SLOTS_PER_WORD;
        let w = self.map.words.get(i, meter);
        let shift = 2 * (c % SLOTS_PER_WORD);
        if (w >> shift) & 3 == 0 {
            return None;
        }
        let below = if shift == 0 { 0 } else { (w & ((1u64 << shift) - 1)).count_ones_in_pairs() };
        Some(self.prefix.get(i, meter) as usize + below as usize)
    }

    /// Center with rank `r`: binary search over the rank index, then one
    /// map word.
    pub fn select(&self, r: usize, meter: &mut CostMeter) -> Option<NodeId> {
        if r >= self.count {
            return None;
        }
        let (mut lo, mut hi) = (0, self.prefix.len());
        // last word whose prefix is <= r
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.prefix.get(mid, meter) as usize <= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut left = r - self.prefix.get(lo, meter) as usize;
        let w = self.map.words.get(lo, meter);
        for j in 0..SLOTS_PER_WORD {
            if (w >> (2 * j)) & 3 != 0 {
                if left == 0 {
                    return Some(lo * SLOTS_PER_WORD + j);
                }
                left -= 1;
            }
        }
        None
    }

    /// Stored centers in ascending order (unmetered).
    pub fn centers(&self) -> Vec<(NodeId, CenterKind)> {
        let mut out = Vec::with_capacity(self.count);
        for (i, &w) in self.map.words.raw().iter().enumerate() {
            if w == 0 {
                continue;
            }
            for j in 0..SLOTS_PER_WORD {
                if let Some(kind) = decode((w >> (2 * j)) & 3) {
                    out.push((i * SLOTS_PER_WORD + j, kind));
                }
            }
        }
        out
    }

    /// Stored centers, charging one read per map word scanned.
    pub fn centers_metered(&self, meter: &mut CostMeter) -> Vec<NodeId> {
        meter.record_read(self.map.words.len() as u64);
        self.centers().into_iter().map(|(c, _)| c).collect()
    }

    /// Primary center of `v`. Zero writes.
    pub fn rho0<G: Adjacency + ?Sized>(&self, g: &G, v: NodeId, meter: &mut CostMeter) -> Result<NodeId> {
        Ok(self.center_info(g, v, meter)?.primary)
    }

    /// Center of `v`. Zero writes.
    pub fn rho<G: Adjacency + ?Sized>(&self, g: &G, v: NodeId, meter: &mut CostMeter) -> Result<NodeId> {
        Ok(self.center_info(g, v, meter)?.center)
    }

    pub fn center_info<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        v: NodeId,
        meter: &mut CostMeter,
    ) -> Result<CenterInfo> {
        if !g.contains(v) {
            return Err(Error::Range { id: v as u64, bound: g.id_bound() });
        }
        meter
            .local_scope(|meter| locate(g, v, self.k, |x, m| self.map.get(x, m), meter))
            .and_then(|r| r)
    }

    /// True if `s` names a cluster: a stored center or the implicit center of
    /// a small sample-free component.
    pub fn is_cluster_center<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        s: NodeId,
        meter: &mut CostMeter,
    ) -> Result<bool> {
        if !g.contains(s) {
            return Ok(false);
        }
        if self.kind(s, meter).is_some() {
            return Ok(true);
        }
        let info = self.center_info(g, s, meter)?;
        Ok(info.implicit && info.center == s)
    }

    /// Vertices of the cluster `C(s)`, in BFS order from `s`. Zero writes.
    pub fn cluster_of<G: Adjacency + ?Sized>(&self, g: &G, s: NodeId, meter: &mut CostMeter) -> Result<Vec<NodeId>> {
        Ok(self.scan_cluster(g, s, meter)?.members)
    }

    /// BFS over `C(s)` that also reports every edge leaving the cluster
    /// together with the center owning its far endpoint. Zero writes.
    pub fn scan_cluster<G: Adjacency + ?Sized>(
        &self,
        g: &G,
        s: NodeId,
        meter: &mut CostMeter,
    ) -> Result<ClusterScan> {
        if !self.is_cluster_center(g, s, meter)? {
            return Err(Error::Argument(format!("{s} is not a center")));
        }
        meter.local_scope(|meter| scan(self, g, s, meter)).and_then(|r| r)
    }

    /// A decomposition over an explicit center list (unmetered; used for
    /// deserialization and hand-built examples).
    pub fn from_centers(k: usize, seed: u64, bound: usize, centers: &[(NodeId, CenterKind)]) -> Result<Self> {
        if k < 2 {
            return Err(Error::Argument(format!("k = {k}, need k >= 2")));
        }
        let mut scratch = CostMeter::default();
        let mut map = CenterMap::new(bound);
        let mut count = 0;
        for &(c, kind) in centers {
            if c >= bound {
                return Err(Error::Range { id: c as u64, bound });
            }
            if map.peek(c).is_none() {
                count += 1;
            }
            map.set(c, kind, &mut scratch);
        }
        Ok(Decomposition { k, seed, bound, count, map, prefix: AsymVec::new() }.indexed(&mut scratch))
    }

    /// Text form: header `k n seed |S|`, then one `id bit` line per center.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {} {}", self.k, self.bound, self.seed, self.count);
        for (c, kind) in self.centers() {
            let _ = writeln!(s, "{} {}", c, kind.bit());
        }
        s
    }

    /// Parses [`serialize`](Self::serialize) output from the front of
    /// `lines`, consuming exactly the decomposition section.
    pub fn parse_lines<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<Self> {
        let header = lines.next().ok_or_else(|| Error::Format("missing decomposition header".into()))?;
        let h: Vec<u64> = parse_fields(header, 4)?;
        let (k, bound, seed, count) = (h[0] as usize, h[1] as usize, h[2], h[3] as usize);
        if k < 2 {
            return Err(Error::Format(format!("k = {k} < 2")));
        }
        let mut centers = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| Error::Format("truncated center list".into()))?;
            let f: Vec<u64> = parse_fields(line, 2)?;
            let id = f[0] as usize;
            if id >= bound {
                return Err(Error::Format(format!("center {id} out of range")));
            }
            let kind = match f[1] {
                0 => CenterKind::Primary,
                1 => CenterKind::Secondary,
                b => return Err(Error::Format(format!("bad center bit {b}"))),
            };
            if centers.last().is_some_and(|&(p, _)| p >= id) {
                return Err(Error::Format("center list not strictly ascending".into()));
            }
            centers.push((id, kind));
        }
        Self::from_centers(k, seed, bound, &centers)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_lines(&mut text.lines().filter(|l| !l.trim().is_empty()))
    }
}

pub(crate) fn parse_fields(line: &str, expect: usize) -> Result<Vec<u64>> {
    let f: std::result::Result<Vec<u64>, _> = line.split_whitespace().map(str::parse::<u64>).collect();
    match f {
        Ok(v) if v.len() == expect => Ok(v),
        _ => Err(Error::Format(format!("expected {expect} integers, got {line:?}"))),
    }
}

/// Center lookup shared by queries and construction. `kind_of` reports the
/// current center set.
fn locate<G: Adjacency + ?Sized>(
    g: &G,
    v: NodeId,
    k: usize,
    kind_of: impl Fn(NodeId, &mut CostMeter) -> Option<CenterKind>,
    meter: &mut CostMeter,
) -> Result<CenterInfo> {
    let trace = priority_bfs(g, v, |x, m| kind_of(x, m) == Some(CenterKind::Primary), meter);
    let (primary, path) = match trace.stopped {
        Some(idx) => (trace.order[idx], trace.path_to(idx)),
        None => {
            // no primary center in the component: it must be smaller than k,
            // and its smallest vertex is the implicit center
            if trace.order.len() >= k {
                return Err(Error::Invariant(format!("component of {v} has no primary center")));
            }
            let (idx, &min) = trace
                .order
                .iter()
                .enumerate()
                .min_by_key(|&(_, &x)| x)
                .expect("trace contains the source");
            let next_hop = trace.path_to(idx).get(1).copied();
            return Ok(CenterInfo { center: min, primary: min, next_hop, implicit: true });
        }
    };
    // path[0] is v
    let walk = path;
    debug_assert_eq!(walk[0], v);
    for (i, &x) in walk.iter().enumerate() {
        if x == primary || kind_of(x, meter).is_some() {
            return Ok(CenterInfo {
                center: x,
                primary,
                next_hop: if i == 0 { None } else { Some(walk[1]) },
                implicit: false,
            });
        }
    }
    Err(Error::Invariant(format!("no center on the path from {v} to {primary}")))
}

/// One cluster explored from its center.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClusterScan {
    pub center: NodeId,
    /// Members in BFS order from the center.
    pub members: Vec<NodeId>,
    /// `(inside, outside, center of outside)` for every adjacency entry
    /// leaving the cluster; parallel edges appear once per copy.
    pub boundary: Vec<(NodeId, NodeId, NodeId)>,
    /// Edges with both endpoints inside, once per copy as `(lo, hi)`;
    /// self-loops are skipped.
    pub internal: Vec<(NodeId, NodeId)>,
}

impl ClusterScan {
    /// Deduplicated, sorted neighbor centers.
    pub fn neighbor_centers(&self) -> Vec<NodeId> {
        let mut c: Vec<NodeId> = self.boundary.iter().map(|&(_, _, s)| s).collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

fn scan<G: Adjacency + ?Sized>(d: &Decomposition, g: &G, s: NodeId, meter: &mut CostMeter) -> Result<ClusterScan> {
    let mut out = ClusterScan { center: s, members: vec![s], boundary: Vec::new(), internal: Vec::new() };
    // vertex -> its center, for every vertex examined
    let mut owner: HashMap<NodeId, NodeId> = HashMap::new();
    owner.insert(s, s);
    meter.local_alloc(2);
    let mut queue = VecDeque::from([s]);
    let mut nb = Vec::new();
    while let Some(v) = queue.pop_front() {
        nb.clear();
        g.neighbors_into(v, meter, &mut nb);
        for &w in &nb {
            if w == v {
                continue;
            }
            let c = match owner.get(&w) {
                Some(&c) => c,
                None => {
                    let c = d.center_info(g, w, meter)?.center;
                    owner.insert(w, c);
                    meter.local_alloc(2);
                    if c == s {
                        out.members.push(w);
                        queue.push_back(w);
                    }
                    c
                }
            };
            if c != s {
                out.boundary.push((v, w, c));
            } else if v < w {
                out.internal.push((v, w));
            }
        }
    }
    Ok(out)
}

/// Picks the non-root tree node whose subtree size is closest to `k/2`,
/// lower id on ties. `nodes[0]` is the root; `parent[i] < i` for `i > 0`.
pub fn partition_vertex(nodes: &[NodeId], parent: &[usize], k: usize) -> NodeId {
    assert!(nodes.len() >= 2, "tree needs a non-root node");
    let mut size = vec![1usize; nodes.len()];
    for i in (1..nodes.len()).rev() {
        size[parent[i]] += size[i];
    }
    let mut best = 1;
    let score = |i: usize| (2 * size[i]).abs_diff(k);
    for i in 2..nodes.len() {
        let (si, sb) = (score(i), score(best));
        if si < sb || (si == sb && nodes[i] < nodes[best]) {
            best = i;
        }
    }
    nodes[best]
}

/// Builds the implicit decomposition. Writes: the packed center map (one
/// word per 32 ids) plus one word per emitted center.
pub fn build_decomposition<G: Adjacency + ?Sized>(
    g: &G,
    k: usize,
    seed: u64,
    opts: DecompOptions,
    meter: &mut CostMeter,
) -> Result<Decomposition> {
    if k < 2 {
        return Err(Error::Argument(format!("k = {k}, need k >= 2")));
    }
    let nodes: Vec<NodeId> = g.nodes().collect();
    let n = nodes.len();
    let mut seed_used = seed;
    for _ in 0..MAX_RESAMPLES {
        let count = nodes.iter().filter(|&&v| sampled(seed_used, v, k)).count();
        if count * k <= 4 * n.max(1) {
            break;
        }
        seed_used = seed_used.wrapping_add(1);
    }
    let bound = g.id_bound();
    let mut d = Decomposition { k, seed: seed_used, bound, count: 0, map: CenterMap::new(bound), prefix: AsymVec::new() };

    let mut primaries = Vec::new();
    for &v in &nodes {
        if sampled(seed_used, v, k) {
            d.map.set(v, CenterKind::Primary, meter);
            d.count += 1;
            primaries.push(v);
        }
    }
    // sample-free components with at least k vertices get their smallest
    // vertex as a stored primary center
    for &v in &nodes {
        if d.map.peek(v).is_some() {
            continue;
        }
        let trace = meter.local_scope(|m| {
            priority_bfs(g, v, |x, m| d.map.get(x, m) == Some(CenterKind::Primary), m)
        })?;
        if trace.stopped.is_none() && trace.order.len() >= k && trace.order.iter().all(|&x| x >= v) {
            d.map.set(v, CenterKind::Primary, meter);
            d.count += 1;
            primaries.push(v);
        }
    }
    primaries.sort_unstable();

    for &p in &primaries {
        let mut stack = vec![p];
        while let Some(c) = stack.pop() {
            let split = meter.local_scope(|m| secondary_split(g, &d, c, opts, m))??;
            if split.is_empty() {
                continue;
            }
            for &u in &split {
                d.map.set(u, CenterKind::Secondary, meter);
                d.count += 1;
            }
            for &u in split.iter().rev() {
                stack.push(u);
            }
            stack.push(c);
        }
    }
    Ok(d.indexed(meter))
}

/// Searches the first `k + 1` vertices owned by `c`. Returns the new centers
/// cutting the cluster, or nothing when the cluster already fits.
fn secondary_split<G: Adjacency + ?Sized>(
    g: &G,
    d: &Decomposition,
    c: NodeId,
    opts: DecompOptions,
    meter: &mut CostMeter,
) -> Result<Vec<NodeId>> {
    let k = d.k;
    let mut nodes = vec![c];
    let mut parent = vec![usize::MAX];
    let mut index: HashMap<NodeId, usize> = HashMap::from([(c, 0)]);
    let mut seen: HashMap<NodeId, ()> = HashMap::from([(c, ())]);
    let mut queue = VecDeque::from([c]);
    let mut nb = Vec::new();
    'search: while let Some(v) = queue.pop_front() {
        nb.clear();
        g.neighbors_into(v, meter, &mut nb);
        for &w in &nb {
            if w == v || seen.contains_key(&w) {
                continue;
            }
            seen.insert(w, ());
            meter.local_alloc(1);
            let info = locate(g, w, k, |x, m| d.map.get(x, m), meter)?;
            if info.center != c {
                continue;
            }
            let hop = info.next_hop.expect("non-center vertex has a next hop");
            let p = *index
                .get(&hop)
                .ok_or_else(|| Error::Invariant(format!("next hop {hop} of {w} not yet in the tree")))?;
            index.insert(w, nodes.len());
            nodes.push(w);
            parent.push(p);
            meter.local_alloc(3);
            queue.push_back(w);
            if nodes.len() > k {
                break 'search;
            }
        }
    }
    if nodes.len() <= k {
        return Ok(Vec::new());
    }
    nodes.truncate(k);
    parent.truncate(k);
    let u = partition_vertex(&nodes, &parent, k);
    let mut out = vec![u];
    if opts.par_centers {
        for i in 1..nodes.len() {
            if parent[i] == 0 && nodes[i] != u {
                out.push(nodes[i]);
            }
        }
        out.sort_unstable();
    }
    debug_assert!(out.iter().all(|&x| d.map.peek(x).is_none()));
    Ok(out)
}
