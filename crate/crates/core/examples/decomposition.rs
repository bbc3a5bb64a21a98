//! Build an implicit k-decomposition and recover clusters on demand.
use asym_graph::cluster::ClusterGraphView;
use asym_graph::decomp::{build_decomposition, DecompOptions};
use asym_graph::graph::gen_random_bounded;
use asym_graph::CostMeter;

fn main() -> asym_graph::Result<()> {
    let g = gen_random_bounded(40, 3, 1);
    let mut build = CostMeter::default();
    let d = build_decomposition(&g, 4, 1, DecompOptions::default(), &mut build)?;
    println!("{} centers stored, build writes {}", d.len(), build.writes());

    let mut q = CostMeter::default();
    for (c, kind) in d.centers() {
        let members = d.cluster_of(&g, c, &mut q)?;
        println!("center {c:>3} ({kind:?}): {members:?}");
    }
    let view = ClusterGraphView::new(&g, &d);
    let (c, _) = d.centers()[0];
    println!("cluster graph neighbors of {c}: {:?}", view.center_neighbors(c, &mut q)?);
    println!("rho(17) = {}", d.rho(&g, 17, &mut q)?);
    println!("queries: {} reads, {} writes", q.reads(), q.writes());
    Ok(())
}
