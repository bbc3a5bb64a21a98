//! Answer queries on a graph with hubs through a degree-bounded view.
use asym_graph::biconnectivity::build_bcc_oracle;
use asym_graph::bounded::BoundedView;
use asym_graph::connectivity::build_cc_oracle;
use asym_graph::decomp::DecompOptions;
use asym_graph::graph::gen_random_with_hubs;
use asym_graph::CostMeter;

fn main() -> asym_graph::Result<()> {
    let g = gen_random_with_hubs(300, 2, 80, 9);
    let view = BoundedView::new(&g, 3)?;
    println!("max degree {}, view adds {} virtual nodes", g.max_degree(), view.virtual_count());

    let mut m = CostMeter::default();
    let cc = build_cc_oracle(&view, 4, 9, DecompOptions::default(), &mut m)?;
    let bcc = build_bcc_oracle(&view, 4, 9, DecompOptions::default(), &mut m)?;
    println!("build writes {}", m.writes());

    let mut q = CostMeter::default();
    println!("connected(0, 299) = {}", cc.connected(&view, 0, 299, &mut q)?);
    let (u, v) = g.edges()[0];
    let (x, y) = view.map_edge(u, v, 0, &mut q).expect("edge is present");
    println!("edge {u}-{v} is a bridge: {}", bcc.is_bridge(&view, x, y, &mut q)?);
    println!("0 and 299 2-edge-connected: {}", bcc.one_edge_connected(&view, 0, 299, &mut q)?);
    Ok(())
}
