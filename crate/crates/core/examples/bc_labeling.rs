//! Linear-write BC labeling: bridges, articulation points and blocks.
use asym_graph::biconnectivity::build_bc_forest;
use asym_graph::graph::fixtures;
use asym_graph::CostMeter;

fn main() -> asym_graph::Result<()> {
    let g = fixtures::bc_example();
    let mut m = CostMeter::default();
    let l = build_bc_forest(&g, &mut m)?;
    println!("build writes {}", m.writes());

    let mut q = CostMeter::default();
    for v in 1..g.n() {
        println!("vertex {v}: label {:?}, articulation {}", l.label(v, &mut q), l.is_articulation(&g, v, &mut q)?);
    }
    for (u, v) in g.edges() {
        let bridge = l.is_bridge(&g, u, v, &mut q)?;
        println!("edge {u}-{v}: block {:?}{}", l.edge_label(&g, u, v, &mut q)?, if bridge { " (bridge)" } else { "" });
    }
    println!("block-cut tree: {:?}", l.block_cut_tree());
    println!("query writes {}", q.writes());
    Ok(())
}
