//! The cost meter: asymmetric reads and writes, and local scratch memory.
use asym_graph::{AsymVec, CostMeter};

fn main() -> asym_graph::Result<()> {
    let mut m = CostMeter::new(32).with_local_budget(64);
    let mut a = AsymVec::alloc(10, 0u32);
    for i in 0..10 {
        a.set(i, i as u32 * 2, &mut m);
    }
    let sum: u32 = (0..10).map(|i| a.get(i, &mut m)).sum();
    println!("sum {sum}");

    m.local_scope(|m| {
        m.local_alloc(48);
        m.local_free(48);
    })?;
    println!("{}", m.report().to_json());

    let over = m.local_scope(|m| m.local_alloc(100));
    println!("over budget: {over:?}");
    Ok(())
}
