use asym_graph::biconnectivity::build_bcc_oracle;
use asym_graph::bounded::BoundedView;
use asym_graph::decomp::DecompOptions;
use asym_graph::graph::{fixtures, parse_edge_list};
use asym_graph::reference::brute_biconn;
use asym_graph::{Adjacency, CostMeter};

#[test]
fn star_view_degrees_and_virtual_count() {
    let g = fixtures::star(8);
    let view = BoundedView::new(&g, 3).unwrap();
    let mut m = CostMeter::default();
    assert_eq!(view.virtual_count(), 6);
    for x in view.nodes() {
        assert!(view.neighbors(x, &mut m).len() <= 3, "node {x}");
    }
    assert_eq!(m.writes(), 0);
}

#[test]
fn triangle_under_one_virtual_node_has_no_bridges() {
    // hub 0 has degree 5, so its slots are split across virtual nodes and
    // the triangle 0-1-2 closes through them
    let g = parse_edge_list("0 1\n0 2\n1 2\n0 3\n0 4\n0 5\n").unwrap();
    let view = BoundedView::new(&g, 3).unwrap();
    assert!(view.virtual_count() > 0);
    let o = build_bcc_oracle(&view, 3, 0, DecompOptions::default(), &mut CostMeter::default()).unwrap();
    let t = brute_biconn(&g);
    let mut m = CostMeter::default();
    for (a, b) in g.edges() {
        let (x, y) = view.map_edge(a, b, 0, &mut m).unwrap();
        assert_eq!(o.is_bridge(&view, x, y, &mut m).unwrap(), t.bridges.contains(&(a, b)), "{a}-{b}");
    }
    assert!(o.one_edge_connected(&view, 1, 2, &mut m).unwrap());
    assert!(o.one_edge_connected(&view, 0, 1, &mut m).unwrap());
    assert!(!o.one_edge_connected(&view, 0, 3, &mut m).unwrap());
}

#[test]
fn view_merges_blocks_sharing_only_the_hub() {
    // two triangles meet at hub 0; in the view their cycles share the path
    // through 0's virtual tree, so the two blocks become one
    let g = parse_edge_list("0 1\n0 2\n0 3\n0 4\n1 3\n2 4\n").unwrap();
    let t = brute_biconn(&g);
    assert!(t.articulation.contains(&0));
    let view = BoundedView::new(&g, 3).unwrap();
    let o = build_bcc_oracle(&view, 3, 0, DecompOptions::default(), &mut CostMeter::default()).unwrap();
    let mut m = CostMeter::default();
    let (x, y) = view.map_edge(1, 3, 0, &mut m).unwrap();
    let (p, q) = view.map_edge(2, 4, 0, &mut m).unwrap();
    let a = o.edge_bcc_label(&view, x, y, &mut m).unwrap();
    let b = o.edge_bcc_label(&view, p, q, &mut m).unwrap();
    assert_eq!(a, b);
    assert!(!o.is_articulation(&view, 0, &mut m).unwrap());
}
