//! Connectivity oracle with sublinear writes.
use asym_graph::connectivity::{build_cc_oracle, CcOracle};
use asym_graph::decomp::DecompOptions;
use asym_graph::graph::{gen_random_bounded_with, GenOptions};
use asym_graph::CostMeter;

fn main() -> asym_graph::Result<()> {
    let opts = GenOptions { drop_tree_edge: 0.05, ..Default::default() };
    let g = gen_random_bounded_with(2000, 3, 3, opts);
    let mut m = CostMeter::default();
    let o = build_cc_oracle(&g, 4, 3, DecompOptions::default(), &mut m)?;
    println!("n = {}: build writes {} ({:.2} per vertex)", g.n(), m.writes(), m.writes() as f64 / g.n() as f64);

    let mut q = CostMeter::default();
    for (u, v) in [(0, 1), (0, 1999), (500, 1500)] {
        println!("connected({u}, {v}) = {}", o.connected(&g, u, v, &mut q)?);
    }
    println!("component label of 42: {}", o.query(&g, 42, &mut q)?);
    println!("query writes: {}", q.writes());

    let again = CcOracle::parse(&o.serialize())?;
    assert_eq!(again, o);
    Ok(())
}
