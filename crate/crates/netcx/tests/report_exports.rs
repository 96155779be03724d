mod common;

use netcx::graph::{NetGraph, Vertex};
use netcx::ingest::build_graph;
use netcx::metrics::compute_metrics;
use netcx::report::{export_dot, export_graphml, summarize_types, TypeSummaryGraph};
use netcx::taxonomy::{Taxonomy, VertexCategory};
use netcx::topologies::{generate, TopologyId, TopologyParams};

fn default_graph(id: TopologyId) -> NetGraph {
    build_graph(&generate(id, &TopologyParams::default()).unwrap(), &Taxonomy::builtin()).unwrap()
}

#[test]
fn dot_parses_under_reference_grammar() {
    for id in TopologyId::ALL {
        let dot = export_dot(&summarize_types(&default_graph(id)));
        graphviz_rust::parse(&dot).unwrap_or_else(|e| panic!("{id}: {e}\n{dot}"));
    }
    for seed in 0..50 {
        let dot = export_dot(&summarize_types(&common::random_graph(seed, 50)));
        graphviz_rust::parse(&dot).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
    graphviz_rust::parse(&export_dot(&TypeSummaryGraph::default())).unwrap();
}

#[test]
fn dot_single_node_and_colors() {
    let mut g = NetGraph::new("one");
    g.add_vertex(Vertex {
        id: "vm:a".into(),
        dialect: "azure".into(),
        type_name: "vm".into(),
        display_name: "a".into(),
        category: VertexCategory::Infrastructure,
        is_endpoint: true,
        cidr: None,
    })
    .unwrap();
    let dot = export_dot(&summarize_types(&g));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 1);

    let dot = export_dot(&summarize_types(&default_graph(TopologyId::Azure1)));
    assert!(dot.contains("\"ipv4\" -- \"ipv4\" [kind=contains"), "{dot}");
    assert!(dot.lines().filter(|l| l.contains("\"ipv4\"") && l.contains(" -- ")).all(|l| l.contains("color=grey")));
    assert!(dot.contains("\"nic\" -- \"vm\" [kind=tight, label=\"24\", color=red"), "{dot}");
    for line in dot.lines().filter(|l| l.contains("kind=loose") && !l.contains("\"ipv4\"")) {
        assert!(line.contains("color=blue"), "{line}");
    }
}

#[test]
fn azure_1_has_34_literals() {
    let s = summarize_types(&default_graph(TopologyId::Azure1));
    let ipv4 = s.node("ipv4").unwrap();
    assert_eq!((ipv4.category, ipv4.vertex_count), (VertexCategory::AddressLiteral, 34));
}

#[test]
fn summaries_conserve_totals() {
    for id in TopologyId::ALL {
        let g = default_graph(id);
        let s = summarize_types(&g);
        assert_eq!(s.total_vertices(), g.vertex_count(), "{id}");
        assert_eq!(s.total_edges(), g.edge_count(), "{id}");
    }
}

#[test]
fn graphml_round_trip_preserves_metrics() {
    for id in TopologyId::ALL {
        let g = default_graph(id);
        let back = common::read_graphml(&export_graphml(&g));
        assert_eq!(compute_metrics(&g, "x").unwrap(), compute_metrics(&back, "x").unwrap(), "{id}");
        assert_eq!(summarize_types(&g), summarize_types(&back), "{id}");
    }
    for seed in 0..30 {
        let g = common::random_graph(seed, 50);
        let back = common::read_graphml(&export_graphml(&g));
        assert_eq!(compute_metrics(&g, "x").unwrap(), compute_metrics(&back, "x").unwrap(), "seed {seed}");
    }
}

#[test]
fn graphml_small_cases() {
    let empty = export_graphml(&NetGraph::new("empty"));
    assert_eq!(empty.matches("<node ").count(), 0);
    assert!(empty.contains("edgedefault=\"undirected\""));
    let mut g = NetGraph::new("one");
    g.add_vertex(Vertex {
        id: "ipv4:10.0.0.0/8".into(),
        dialect: "azure".into(),
        type_name: "ipv4".into(),
        display_name: "10.0.0.0/8".into(),
        category: VertexCategory::AddressLiteral,
        is_endpoint: false,
        cidr: Some("10.0.0.0/8".parse().unwrap()),
    })
    .unwrap();
    let xml = export_graphml(&g);
    for key in ["type_name", "category", "is_endpoint", "cidr"] {
        assert!(xml.contains(&format!("<data key=\"{key}\">")), "{key}: {xml}");
    }
    assert!(xml.contains("<data key=\"cidr\">10.0.0.0/8</data>"));
}

#[test]
fn exports_are_deterministic() {
    for id in TopologyId::ALL {
        let (a, b) = (default_graph(id), default_graph(id));
        assert_eq!(export_graphml(&a), export_graphml(&b));
        assert_eq!(export_dot(&summarize_types(&a)), export_dot(&summarize_types(&b)));
    }
}
