//! Biconnectivity oracle with sublinear writes.
use asym_graph::biconnectivity::build_bcc_oracle;
use asym_graph::decomp::DecompOptions;
use asym_graph::graph::{gen_random_bounded_with, GenOptions};
use asym_graph::CostMeter;

fn main() -> asym_graph::Result<()> {
    let opts = GenOptions { extra_edges: 0.1, ..Default::default() };
    let g = gen_random_bounded_with(1000, 3, 5, opts);
    let mut m = CostMeter::default();
    let o = build_bcc_oracle(&g, 4, 5, DecompOptions::default(), &mut m)?;
    println!("{} clusters, build writes {} ({:.2} per vertex)", o.clusters(), m.writes(), m.writes() as f64 / g.n() as f64);

    let mut q = CostMeter::default();
    let bridges = g.edges().into_iter().filter(|&(u, v)| o.is_bridge(&g, u, v, &mut q).unwrap_or(false)).count();
    let aps = (0..g.n()).filter(|&v| o.is_articulation(&g, v, &mut q).unwrap_or(false)).count();
    println!("{bridges} bridges, {aps} articulation points");
    println!("bridges between 0 and 999: {:?}", o.bridges_between(&g, 0, 999, &mut q)?);
    println!("0 and 1 biconnected: {}", o.vertices_biconnected(&g, 0, 1, &mut q)?);
    println!("query writes {}", q.writes());
    Ok(())
}
