//! Generate a random bounded-degree graph, write it as an edge list and read
//! it back.
use asym_graph::graph::{gen_random_bounded, parse_edge_list};

fn main() -> asym_graph::Result<()> {
    let g = gen_random_bounded(12, 3, 7);
    let text = g.to_edge_list();
    print!("{text}");
    let h = parse_edge_list(&text)?;
    assert_eq!(g.edges(), h.edges());
    println!("# n = {}, m = {}, max degree = {}", h.n(), h.m(), h.max_degree());
    Ok(())
}
