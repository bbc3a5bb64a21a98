//! Command-line driver. Exit codes: 0 success, 1 verification mismatch,
//! 2 usage or I/O error.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::biconnectivity::{build_bc_forest, build_bc_labeling, build_bcc_oracle, BcLabeling, BccOracle};
use crate::connectivity::{build_cc_oracle, connected_components, parse_cc_labels, CcOracle};
use crate::cost::{default_k, CostMeter};
use crate::decomp::{build_decomposition, DecompOptions, Decomposition};
use crate::error::{Error, Result};
use crate::graph::{gen_random_bounded_with, gen_random_with_hubs, load_edge_list, GenOptions, Graph, NodeId};
use crate::reference::{brute_biconn, same_partition, union_find_cc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "asym-graph", version, about = "Write-efficient connectivity and biconnectivity oracles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a random graph as an edge list
    Gen(GenArgs),
    /// Build an oracle and write its serialization
    Build(BuildArgs),
    /// Answer queries against a built oracle
    Query(QueryArgs),
    /// Build oracles and compare every answer with brute force
    Verify(VerifyArgs),
    /// Run one algorithm and print its cost as JSON
    Cost(CostArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Params {
    /// Cluster size bound [default: ceil(sqrt(omega))]
    #[arg(long)]
    pub k: Option<usize>,
    /// Cost of one write to the large memory
    #[arg(long, default_value_t = 16)]
    pub omega: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also make every child of a split vertex a center
    #[arg(long)]
    pub par_centers: bool,
}

impl Params {
    fn k(&self) -> Result<usize> {
        if self.omega < 1 {
            return Err(Error::Config("omega must be at least 1".into()));
        }
        let k = self.k.unwrap_or_else(|| default_k(self.omega));
        if k < 2 {
            return Err(Error::Config(format!("k = {k}, need k >= 2")));
        }
        Ok(k)
    }

    fn opts(&self) -> DecompOptions {
        DecompOptions { par_centers: self.par_centers }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Decomp,
    CcLinear,
    CcSublinear,
    BccLinear,
    BccSublinear,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Decomp => "decomp",
            Algo::CcLinear => "cc-linear",
            Algo::CcSublinear => "cc-sublinear",
            Algo::BccLinear => "bcc-linear",
            Algo::BccSublinear => "bcc-sublinear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Cc,
    Bcc,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub max_degree: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Extra-edge attempts as a fraction of n
    #[arg(long)]
    pub extra: Option<f64>,
    /// Probability of dropping each spanning-tree edge
    #[arg(long, default_value_t = 0.0)]
    pub drop: f64,
    /// Number of high-degree hub vertices
    #[arg(long, default_value_t = 0)]
    pub hubs: usize,
    #[arg(long, default_value_t = 64)]
    pub hub_degree: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::CcSublinear)]
    pub algo: Algo,
    #[command(flatten)]
    pub params: Params,
    /// Serialization target [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cost JSON target [default: stderr]
    #[arg(long)]
    pub cost_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub oracle: PathBuf,
    /// Single connectivity query; without it, `kind u v` lines are read
    /// from stdin
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    pub connected: Option<Vec<NodeId>>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Cc)]
    pub mode: Mode,
    /// Restrict to one algorithm [default: every algorithm of the mode]
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Args, Debug)]
pub struct CostArgs {
    /// Input graph; alternatively generate one with --n
    #[arg(long, required_unless_present = "n")]
    pub graph: Option<PathBuf>,
    #[arg(long, conflicts_with = "graph")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_degree: usize,
    #[arg(long, value_enum, default_value_t = Algo::CcSublinear)]
    pub algo: Algo,
    #[command(flatten)]
    pub params: Params,
}

/// Parses `args` and runs the command.
pub fn main_with(args: impl IntoIterator<Item = String>, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    run(cli, input, out, err)
}

pub fn run(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let r = match cli.command {
        Command::Gen(a) => gen(&a, out),
        Command::Build(a) => build_cmd(&a, out, err),
        Command::Query(a) => query(&a, input, out, err),
        Command::Verify(a) => verify(&a, err),
        Command::Cost(a) => cost(&a, out, err),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), msg: e.to_string() }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let f = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    load_edge_list(std::io::BufReader::new(f))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_err(p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| io_err(Path::new("<stdout>"), e)),
    }
}

fn gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    if a.max_degree < 2 && a.n > 2 {
        return Err(Error::Argument("max degree must be at least 2".into()));
    }
    let g = if a.hubs > 0 {
        gen_random_with_hubs(a.n, a.hubs, a.hub_degree, a.seed)
    } else {
        let mut opts = GenOptions { drop_tree_edge: a.drop, ..Default::default() };
        if let Some(x) = a.extra {
            opts.extra_edges = x;
        }
        gen_random_bounded_with(a.n, a.max_degree, a.seed, opts)
    };
    emit(a.out.as_deref(), &g.to_edge_list(), out)?;
    Ok(EXIT_OK)
}

/// Any built structure.
pub enum Built {
    Decomp(Decomposition),
    CcLinear(String),
    CcSublinear(CcOracle),
    BccLinear(BcLabeling),
    BccSublinear(BccOracle),
}

impl Built {
    pub fn serialize(&self) -> Result<String> {
        Ok(match self {
            Built::Decomp(d) => d.serialize(),
            Built::CcLinear(s) => s.clone(),
            Built::CcSublinear(o) => o.serialize(),
            Built::BccLinear(l) => l.serialize()?,
            Built::BccSublinear(o) => o.serialize(),
        })
    }
}

pub fn build(g: &Graph, algo: Algo, p: &Params, meter: &mut CostMeter) -> Result<Built> {
    let k = p.k()?;
    Ok(match algo {
        Algo::Decomp => Built::Decomp(build_decomposition(g, k, p.seed, p.opts(), meter)?),
        Algo::CcLinear => Built::CcLinear(connected_components(g, 1.0 / k as f64, p.seed, meter)?.serialize()),
        Algo::CcSublinear => Built::CcSublinear(build_cc_oracle(g, k, p.seed, p.opts(), meter)?),
        Algo::BccLinear => Built::BccLinear(build_bc_labeling(g, meter)?),
        Algo::BccSublinear => Built::BccSublinear(build_bcc_oracle(g, k, p.seed, p.opts(), meter)?),
    })
}

fn build_cmd(a: &BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = read_graph(&a.graph)?;
    let mut meter = CostMeter::new(a.params.omega);
    let built = build(&g, a.algo, &a.params, &mut meter)?;
    let text = format!("asym-graph {}\n{}", a.algo.name(), built.serialize()?);
    emit(a.out.as_deref(), &text, out)?;
    let json = meter.report().to_json() + "\n";
    match &a.cost_out {
        Some(p) => std::fs::write(p, json).map_err(|e| io_err(p, e))?,
        None => err.write_all(json.as_bytes()).map_err(|e| io_err(Path::new("<stderr>"), e))?,
    }
    Ok(EXIT_OK)
}

enum Loaded {
    Decomp(Decomposition),
    CcLinear(Vec<Option<usize>>),
    CcSublinear(CcOracle),
    BccLinear(BcLabeling),
    BccSublinear(BccOracle),
}

fn load_oracle(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let (tag, body) = text.split_once('\n').unwrap_or((&text, ""));
    let name = tag
        .strip_prefix("asym-graph ")
        .ok_or_else(|| Error::Format(format!("{}: missing `asym-graph <algo>` tag line", path.display())))?;
    let algo = Algo::from_str(name.trim(), false).map_err(|e| Error::Format(format!("unknown algorithm tag: {e}")))?;
    Ok(match algo {
        Algo::Decomp => Loaded::Decomp(Decomposition::parse(body)?),
        Algo::CcLinear => Loaded::CcLinear(parse_cc_labels(body)?),
        Algo::CcSublinear => Loaded::CcSublinear(CcOracle::parse(body)?),
        Algo::BccLinear => Loaded::BccLinear(BcLabeling::parse(body)?),
        Algo::BccSublinear => Loaded::BccSublinear(BccOracle::parse(body)?),
    })
}

fn answer(o: &Loaded, g: &Graph, kind: &str, u: NodeId, v: NodeId, m: &mut CostMeter) -> Result<String> {
    let unsupported = || Error::Argument(format!("query kind {kind:?} is not supported by this oracle"));
    let cc_label = |labels: &[Option<usize>], x: NodeId| {
        labels.get(x).copied().flatten().ok_or(Error::Range { id: x as u64, bound: labels.len() })
    };
    Ok(match (o, kind) {
        (Loaded::Decomp(d), "center") => d.rho(g, u, m)?.to_string(),
        (Loaded::Decomp(d), "cluster") => {
            let c = d.rho(g, u, m)?;
            let members: Vec<String> = d.cluster_of(g, c, m)?.iter().map(|x| x.to_string()).collect();
            members.join(" ")
        }
        (Loaded::CcLinear(l), "connected") => (cc_label(l, u)? == cc_label(l, v)?).to_string(),
        (Loaded::CcLinear(l), "component") => cc_label(l, u)?.to_string(),
        (Loaded::CcSublinear(o), "connected") => o.connected(g, u, v, m)?.to_string(),
        (Loaded::CcSublinear(o), "component") => o.query(g, u, m)?.to_string(),
        (Loaded::BccLinear(l), "bridge") => l.is_bridge(g, u, v, m)?.to_string(),
        (Loaded::BccLinear(l), "articulation") => l.is_articulation(g, u, m)?.to_string(),
        (Loaded::BccLinear(l), "biconnected") => {
            check_vertex(g, u)?;
            check_vertex(g, v)?;
            l.same_bcc(u, v, m).to_string()
        }
        (Loaded::BccLinear(l), "label") => l.edge_label(g, u, v, m)?.map_or("none".into(), |x| x.to_string()),
        (Loaded::BccSublinear(o), "bridge") => o.is_bridge(g, u, v, m)?.to_string(),
        (Loaded::BccSublinear(o), "articulation") => o.is_articulation(g, u, m)?.to_string(),
        (Loaded::BccSublinear(o), "biconnected") => o.vertices_biconnected(g, u, v, m)?.to_string(),
        (Loaded::BccSublinear(o), "two-edge") => o.one_edge_connected(g, u, v, m)?.to_string(),
        (Loaded::BccSublinear(o), "connected") => o.bridges_between(g, u, v, m)?.is_some().to_string(),
        (Loaded::BccSublinear(o), "label") => o.edge_bcc_label(g, u, v, m)?.map_or("none".into(), |x| x.to_string()),
        _ => return Err(unsupported()),
    })
}

fn check_vertex(g: &Graph, v: NodeId) -> Result<()> {
    if v >= g.n() {
        return Err(Error::Range { id: v as u64, bound: g.n() });
    }
    Ok(())
}

fn query(a: &QueryArgs, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = read_graph(&a.graph)?;
    let o = load_oracle(&a.oracle)?;
    let mut m = CostMeter::default();
    let wr = |e: std::io::Error| io_err(Path::new("<stdout>"), e);
    let mut count = 0;
    if let Some(uv) = &a.connected {
        writeln!(out, "{}", answer(&o, &g, "connected", uv[0], uv[1], &mut m)?).map_err(wr)?;
        count += 1;
    } else {
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| io_err(Path::new("<stdin>"), e))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = t.split_whitespace().collect();
            let bad = || Error::Parse { line: i + 1, msg: format!("expected `kind u v`, got {t:?}") };
            if f.len() < 2 || f.len() > 3 {
                return Err(bad());
            }
            let u: NodeId = f[1].parse().map_err(|_| bad())?;
            let v: NodeId = match f.get(2) {
                Some(x) => x.parse().map_err(|_| bad())?,
                None => u,
            };
            writeln!(out, "{}", answer(&o, &g, f[0], u, v, &mut m)?).map_err(wr)?;
            count += 1;
        }
    }
    let _ = writeln!(err, "{count} queries: {} reads, {} writes", m.reads(), m.writes());
    Ok(EXIT_OK)
}

/// Collects named comparisons and prints one line per check.
struct Report<'a> {
    err: &'a mut dyn Write,
    failed: bool,
}

impl Report<'_> {
    fn check(&mut self, name: &str, diffs: Vec<String>) {
        if diffs.is_empty() {
            let _ = writeln!(self.err, "ok        {name}");
        } else {
            self.failed = true;
            let _ = writeln!(self.err, "MISMATCH  {name}: {} differences", diffs.len());
            for d in diffs.iter().take(10) {
                let _ = writeln!(self.err, "    {d}");
            }
        }
    }
}

fn verify(a: &VerifyArgs, err: &mut dyn Write) -> Result<i32> {
    let g = read_graph(&a.graph)?;
    let k = a.params.k()?;
    let wants = |x: Algo| a.algo.is_none_or(|y| y == x);
    let mut rep = Report { err, failed: false };
    match a.mode {
        Mode::Cc => {
            let truth: Vec<Option<usize>> = union_find_cc(&g).into_iter().map(Some).collect();
            if wants(Algo::CcLinear) {
                let cc = connected_components(&g, 1.0 / k as f64, a.params.seed, &mut CostMeter::default())?;
                let l = cc.labels();
                rep.check("cc-linear partition", partition_diff(&l, &truth));
                let forest = cc.forest();
                let comps = truth.iter().collect::<BTreeSet<_>>().len();
                let d = if forest.len() == g.n() - comps {
                    vec![]
                } else {
                    vec![format!("{} forest edges, expected {}", forest.len(), g.n() - comps)]
                };
                rep.check("cc-linear forest size", d);
            }
            if wants(Algo::CcSublinear) {
                let o = build_cc_oracle(&g, k, a.params.seed, a.params.opts(), &mut CostMeter::default())?;
                let mut m = CostMeter::default();
                let l: Vec<Option<usize>> =
                    (0..g.n()).map(|v| o.query(&g, v, &mut m).map(Some)).collect::<Result<_>>()?;
                rep.check("cc-sublinear partition", partition_diff(&l, &truth));
                rep.check("cc-sublinear query writes", zero_writes(&m));
            }
        }
        Mode::Bcc => {
            let t = brute_biconn(&g);
            let vb = t.vertex_blocks();
            let two = t.two_edge_labels();
            if wants(Algo::BccLinear) {
                let l = build_bc_forest(&g, &mut CostMeter::default())?;
                let mut m = CostMeter::default();
                let mut bridges = BTreeSet::new();
                let mut labels = Vec::new();
                for &(x, y) in &t.edges {
                    if l.is_bridge(&g, x, y, &mut m)? {
                        bridges.insert((x, y));
                    }
                    labels.push(if x == y { None } else { l.edge_label(&g, x, y, &mut m)? });
                }
                rep.check("bcc-linear bridges", set_diff(&bridges, &t.bridges));
                let aps = (0..g.n()).map(|v| l.is_articulation(&g, v, &mut m)).collect::<Result<Vec<_>>>()?;
                let aps: BTreeSet<NodeId> = (0..g.n()).filter(|&v| aps[v]).collect();
                rep.check("bcc-linear articulation points", set_diff(&aps, &t.articulation));
                rep.check("bcc-linear edge partition", partition_diff(&labels, &t.edge_block));
                let mut d = Vec::new();
                for (u, v) in pairs(g.n()) {
                    let want = u == v || !vb[u].is_disjoint(&vb[v]);
                    if l.same_bcc(u, v, &mut m) != want {
                        d.push(format!("same_bcc({u}, {v}) should be {want}"));
                    }
                }
                rep.check("bcc-linear vertex pairs", d);
                rep.check("bcc-linear query writes", zero_writes(&m));
            }
            if wants(Algo::BccSublinear) {
                let o = build_bcc_oracle(&g, k, a.params.seed, a.params.opts(), &mut CostMeter::default())?;
                let mut m = CostMeter::default();
                let mut bridges = BTreeSet::new();
                let mut labels = Vec::new();
                for &(x, y) in &t.edges {
                    if o.is_bridge(&g, x, y, &mut m)? {
                        bridges.insert((x, y));
                    }
                    labels.push(o.edge_bcc_label(&g, x, y, &mut m)?);
                }
                rep.check("bcc-sublinear bridges", set_diff(&bridges, &t.bridges));
                let aps = (0..g.n()).map(|v| o.is_articulation(&g, v, &mut m)).collect::<Result<Vec<_>>>()?;
                let aps: BTreeSet<NodeId> = (0..g.n()).filter(|&v| aps[v]).collect();
                rep.check("bcc-sublinear articulation points", set_diff(&aps, &t.articulation));
                rep.check("bcc-sublinear edge partition", partition_diff(&labels, &t.edge_block));
                let blocks = (0..g.n()).map(|v| o.vertex_blocks(&g, v, &mut m)).collect::<Result<Vec<_>>>()?;
                let mut d = Vec::new();
                let mut d2 = Vec::new();
                for (u, v) in pairs(g.n()) {
                    let want = u == v || !vb[u].is_disjoint(&vb[v]);
                    if (u == v || !blocks[u].is_disjoint(&blocks[v])) != want {
                        d.push(format!("vertices_biconnected({u}, {v}) should be {want}"));
                    }
                }
                for (u, v) in pairs(g.n().min(64)) {
                    let want = t.labels[u] == t.labels[v] && two[u] == two[v];
                    if o.one_edge_connected(&g, u, v, &mut m)? != want {
                        d2.push(format!("one_edge_connected({u}, {v}) should be {want}"));
                    }
                }
                rep.check("bcc-sublinear vertex pairs", d);
                rep.check("bcc-sublinear 2-edge-connected pairs", d2);
                rep.check("bcc-sublinear query writes", zero_writes(&m));
            }
        }
    }
    Ok(if rep.failed { EXIT_MISMATCH } else { EXIT_OK })
}

/// All pairs `u <= v` when `n <= 512`, else pairs from the first 512 ids.
fn pairs(n: usize) -> impl Iterator<Item = (NodeId, NodeId)> {
    let n = n.min(512);
    (0..n).flat_map(move |u| (u..n).map(move |v| (u, v)))
}

fn zero_writes(m: &CostMeter) -> Vec<String> {
    if m.writes() == 0 {
        vec![]
    } else {
        vec![format!("{} writes during queries", m.writes())]
    }
}

fn set_diff<T: Ord + std::fmt::Debug>(got: &BTreeSet<T>, want: &BTreeSet<T>) -> Vec<String> {
    let mut d: Vec<String> = got.difference(want).map(|x| format!("extra {x:?}")).collect();
    d.extend(want.difference(got).map(|x| format!("missing {x:?}")));
    d
}

fn partition_diff<A, B>(got: &[Option<A>], want: &[Option<B>]) -> Vec<String>
where
    A: Eq + std::hash::Hash + Clone + std::fmt::Debug,
    B: Eq + std::hash::Hash + Clone + std::fmt::Debug,
{
    if same_partition(got, want) {
        return vec![];
    }
    // report elements whose class disagrees with the first element of the
    // reference class
    let mut rep: HashMap<&B, usize> = HashMap::new();
    let mut d = Vec::new();
    for (i, w) in want.iter().enumerate() {
        if let Some(w) = w {
            let j = *rep.entry(w).or_insert(i);
            if got[i] != got[j] {
                d.push(format!("element {i}: {:?}, but {j} in the same class has {:?}", got[i], got[j]));
            }
        }
    }
    if d.is_empty() {
        d.push("classes merged that should be separate".into());
    }
    d
}

fn cost(a: &CostArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = match (&a.graph, a.n) {
        (Some(p), _) => read_graph(p)?,
        (None, Some(n)) => gen_random_bounded_with(n, a.max_degree, a.params.seed, GenOptions::default()),
        (None, None) => return Err(Error::Argument("need --graph or --n".into())),
    };
    let mut meter = CostMeter::new(a.params.omega);
    build(&g, a.algo, &a.params, &mut meter)?;
    let r = meter.report();
    let mut table = String::new();
    let _ = writeln!(table, "algorithm  {}", a.algo.name());
    let _ = writeln!(table, "n / m      {} / {}", g.n(), g.m());
    let _ = writeln!(table, "k / omega  {} / {}", a.params.k()?, r.omega);
    let _ = writeln!(table, "reads      {}", r.reads);
    let _ = writeln!(table, "writes     {}  ({:.3} per vertex)", r.writes, r.writes as f64 / g.n().max(1) as f64);
    let _ = writeln!(table, "charged    {}", r.charged);
    let _ = writeln!(table, "local hwm  {}", r.local_hwm);
    let _ = err.write_all(table.as_bytes());
    writeln!(out, "{}", r.to_json()).map_err(|e| io_err(Path::new("<stdout>"), e))?;
    Ok(EXIT_OK)
}
