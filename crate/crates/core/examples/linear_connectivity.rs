//! Low-diameter decomposition and the linear-write connectivity algorithm.
use asym_graph::connectivity::connected_components;
use asym_graph::graph::gen_random_bounded;
use asym_graph::ldd::{ldd, ById};
use asym_graph::CostMeter;

fn main() -> asym_graph::Result<()> {
    let g = gen_random_bounded(4096, 3, 11);
    for beta in [0.05, 0.1, 0.2] {
        let mut m = CostMeter::default();
        let parts = ldd(&ById(&g), beta, 11, &mut m)?;
        let blocks = parts.blocks_raw();
        let cut = g.edges().iter().filter(|&&(u, v)| blocks[u] != blocks[v]).count();
        println!(
            "beta {beta:.2}: {} blocks, cut fraction {:.3}, writes {}",
            parts.blocks(),
            cut as f64 / g.m() as f64,
            m.writes()
        );
    }
    let mut m = CostMeter::default();
    let cc = connected_components(&g, 0.25, 11, &mut m)?;
    println!("{} components, {} forest edges, writes {}", cc.components(), cc.forest().len(), m.writes());
    Ok(())
}
