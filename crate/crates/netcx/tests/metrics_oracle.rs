mod common;

use proptest::prelude::*;

use netcx::graph::{EdgeKind, NetGraph};
use netcx::metrics::{compute_metrics, count_edges_by_kind, ip_excess_degree};
use netcx::report::summarize_types;

use common::{brute_force_ip_ed, cited_literal, filter_edges, random_graph, relabeled};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ip_ed_matches_oracle(seed in any::<u64>()) {
        let g = random_graph(seed, 50);
        prop_assert_eq!(ip_excess_degree(&g), brute_force_ip_ed(&g));
        prop_assert_eq!(count_edges_by_kind(&g).total(), g.edge_count());
    }

    #[test]
    fn relabeling_is_invisible(seed in any::<u64>()) {
        let g = random_graph(seed, 50);
        let h = relabeled(&g, seed ^ 0x5eed);
        prop_assert_eq!(compute_metrics(&g, "x").unwrap(), compute_metrics(&h, "x").unwrap());
    }

    #[test]
    fn dropping_contains_changes_only_that_count(seed in any::<u64>()) {
        let g = random_graph(seed, 50);
        let h = filter_edges(&g, |k| k != EdgeKind::Contains);
        let (a, mut b) = (compute_metrics(&g, "x").unwrap(), compute_metrics(&h, "x").unwrap());
        prop_assert_eq!(b.contains_edges, 0);
        b.contains_edges = a.contains_edges;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn one_more_citation_adds_one(seed in any::<u64>()) {
        let mut g = random_graph(seed, 50);
        let lit = cited_literal(&mut g);
        let before = ip_excess_degree(&g);
        let other = (0..g.vertex_count()).find(|&i| i != lit).unwrap();
        g.add_edge_idx(other, lit, EdgeKind::Loose, "extra");
        prop_assert_eq!(ip_excess_degree(&g), before + 1);
    }

    #[test]
    fn summary_conserves_counts(seed in any::<u64>()) {
        let g = random_graph(seed, 50);
        let s = summarize_types(&g);
        prop_assert_eq!(s.total_vertices(), g.vertex_count());
        prop_assert_eq!(s.total_edges(), g.edge_count());
        let mut seen = std::collections::HashSet::new();
        for e in &s.type_edges {
            prop_assert!(e.type_a <= e.type_b);
            prop_assert!(seen.insert((e.type_a.clone(), e.type_b.clone(), e.kind)));
        }
    }

    #[test]
    fn derived_containment_is_idempotent(seed in any::<u64>()) {
        let g = filter_edges(&random_graph(seed, 50), |k| k != EdgeKind::Contains);
        let once = g.clone().with_contains_edges();
        let mut twice = once.clone();
        prop_assert_eq!(twice.derive_contains_edges(), 0);
        prop_assert_eq!(ip_excess_degree(&once), ip_excess_degree(&g));
        for e in once.edges().iter().filter(|e| e.kind == EdgeKind::Contains) {
            let (a, b) = (once.vertices()[e.a].cidr.unwrap(), once.vertices()[e.b].cidr.unwrap());
            prop_assert!(a.contains(&b) || b.contains(&a));
        }
    }
}

#[test]
fn no_endpoints_is_an_error() {
    let g = NetGraph::new("empty");
    assert!(compute_metrics(&g, "empty").is_err());
}
