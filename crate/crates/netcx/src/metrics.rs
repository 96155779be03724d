//! The six-column complexity row.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeKind, NetGraph};
use crate::taxonomy::VertexCategory;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub topology_name: String,
    pub vertex_count: usize,
    pub endpoint_count: usize,
    pub nodes_per_endpoint: f64,
    pub l_edges: usize,
    pub t_edges: usize,
    pub contains_edges: usize,
    pub i_types: usize,
    pub p_types: usize,
    pub ip_excess_degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub loose: usize,
    pub tight: usize,
    pub contains: usize,
}

impl EdgeCounts {
    pub fn total(&self) -> usize {
        self.loose + self.tight + self.contains
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("topology `{0}` has no endpoints; nodes per endpoint is undefined")]
    NoEndpoints(String),
}

pub fn count_endpoints(graph: &NetGraph) -> usize {
    graph.vertices().iter().filter(|v| v.is_endpoint).count()
}

/// Sum over literals of `max(0, d - 1)`, where `d` ignores contains edges.
pub fn ip_excess_degree(graph: &NetGraph) -> usize {
    let mut degree = vec![0usize; graph.vertex_count()];
    for e in graph.edges().iter().filter(|e| e.kind != EdgeKind::Contains) {
        degree[e.a] += 1;
        degree[e.b] += 1;
    }
    graph
        .vertices()
        .iter()
        .zip(degree)
        .filter(|(v, _)| v.category == VertexCategory::AddressLiteral)
        .map(|(_, d)| d.saturating_sub(1))
        .sum()
}

pub fn count_edges_by_kind(graph: &NetGraph) -> EdgeCounts {
    graph.edges().iter().fold(EdgeCounts::default(), |mut c, e| {
        match e.kind {
            EdgeKind::Loose => c.loose += 1,
            EdgeKind::Tight => c.tight += 1,
            EdgeKind::Contains => c.contains += 1,
        }
        c
    })
}

/// Distinct type names per category: `(i_types, p_types)`.
pub fn count_types_by_category(graph: &NetGraph) -> (usize, usize) {
    let mut infra = BTreeSet::new();
    let mut policy = BTreeSet::new();
    for v in graph.vertices() {
        match v.category {
            VertexCategory::Infrastructure => infra.insert(v.type_name.as_str()),
            VertexCategory::Policy => policy.insert(v.type_name.as_str()),
            VertexCategory::AddressLiteral => false,
        };
    }
    (infra.len(), policy.len())
}

pub fn compute_metrics(graph: &NetGraph, name: &str) -> Result<MetricsRow, MetricsError> {
    let endpoint_count = count_endpoints(graph);
    if endpoint_count == 0 {
        return Err(MetricsError::NoEndpoints(name.to_string()));
    }
    let edges = count_edges_by_kind(graph);
    let (i_types, p_types) = count_types_by_category(graph);
    Ok(MetricsRow {
        topology_name: name.to_string(),
        vertex_count: graph.vertex_count(),
        endpoint_count,
        nodes_per_endpoint: graph.vertex_count() as f64 / endpoint_count as f64,
        l_edges: edges.loose,
        t_edges: edges.tight,
        contains_edges: edges.contains,
        i_types,
        p_types,
        ip_excess_degree: ip_excess_degree(graph),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn add(g: &mut NetGraph, id: &str, cat: VertexCategory, endpoint: bool, cidr: Option<&str>) {
        g.add_vertex(Vertex {
            id: id.into(),
            dialect: "azure".into(),
            type_name: if cidr.is_some() { "ipv4".into() } else { id.trim_end_matches(char::is_numeric).into() },
            display_name: id.into(),
            category: cat,
            is_endpoint: endpoint,
            cidr: cidr.map(|c| c.parse().unwrap()),
        })
        .unwrap();
    }

    #[test]
    fn excess_degree_excludes_contains() {
        let mut g = NetGraph::new("t");
        add(&mut g, "lit", VertexCategory::AddressLiteral, false, Some("10.0.0.0/16"));
        add(&mut g, "sup", VertexCategory::AddressLiteral, false, Some("10.0.0.0/8"));
        add(&mut g, "sub", VertexCategory::AddressLiteral, false, Some("10.0.1.0/24"));
        add(&mut g, "vnet", VertexCategory::Infrastructure, false, None);
        for i in 1..=3 {
            add(&mut g, &format!("route{i}"), VertexCategory::Policy, false, None);
            g.add_edge(&format!("route{i}"), "lit", EdgeKind::Loose, "addressPrefix").unwrap();
        }
        g.add_edge("vnet", "lit", EdgeKind::Loose, "addressPrefix").unwrap();
        assert_eq!(g.derive_contains_edges(), 2);
        assert_eq!(ip_excess_degree(&g), 3);
    }

    #[test]
    fn single_reference_and_isolated_literals() {
        let mut g = NetGraph::new("t");
        add(&mut g, "a", VertexCategory::AddressLiteral, false, Some("10.0.0.0/24"));
        add(&mut g, "b", VertexCategory::AddressLiteral, false, Some("10.0.1.0/24"));
        add(&mut g, "vm", VertexCategory::Infrastructure, true, None);
        g.add_edge("vm", "a", EdgeKind::Loose, "x").unwrap();
        assert_eq!(ip_excess_degree(&g), 0);
    }

    #[test]
    fn empty_graph() {
        let g = NetGraph::new("e");
        assert_eq!(count_endpoints(&g), 0);
        assert_eq!(count_edges_by_kind(&g), EdgeCounts::default());
        assert_eq!(ip_excess_degree(&g), 0);
        assert_eq!(compute_metrics(&g, "e"), Err(MetricsError::NoEndpoints("e".into())));
    }

    #[test]
    fn literals_count_in_no_category() {
        let mut g = NetGraph::new("t");
        add(&mut g, "a", VertexCategory::AddressLiteral, false, Some("10.0.0.0/24"));
        add(&mut g, "b", VertexCategory::AddressLiteral, false, Some("10.0.1.0/24"));
        assert_eq!(count_types_by_category(&g), (0, 0));
    }

    #[test]
    fn endpoints_only_ratio_is_one() {
        let mut g = NetGraph::new("t");
        for i in 0..5 {
            add(&mut g, &format!("vm{i}"), VertexCategory::Infrastructure, true, None);
        }
        let row = compute_metrics(&g, "t").unwrap();
        assert_eq!(row.nodes_per_endpoint, 1.0);
        assert_eq!((row.i_types, row.p_types), (1, 0));
    }
}
