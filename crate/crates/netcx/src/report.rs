//! Vertex-type summaries, graph exports and comparison tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use quick_xml::events::{BytesDecl, BytesEnd, BytesStart, BytesText, Event};
use quick_xml::Writer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeKind, NetGraph};
use crate::metrics::MetricsRow;
use crate::taxonomy::VertexCategory;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeNode {
    pub type_name: String,
    pub category: VertexCategory,
    pub vertex_count: usize,
}

/// An aggregated bundle of edges; `type_a <= type_b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEdge {
    pub type_a: String,
    pub type_b: String,
    pub kind: EdgeKind,
    pub edge_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeSummaryGraph {
    pub type_nodes: Vec<TypeNode>,
    pub type_edges: Vec<TypeEdge>,
}

impl TypeSummaryGraph {
    pub fn node(&self, type_name: &str) -> Option<&TypeNode> {
        self.type_nodes.iter().find(|n| n.type_name == type_name)
    }

    pub fn total_vertices(&self) -> usize {
        self.type_nodes.iter().map(|n| n.vertex_count).sum()
    }

    pub fn total_edges(&self) -> usize {
        self.type_edges.iter().map(|e| e.edge_count).sum()
    }
}

/// Groups vertices by type and edges by (unordered type pair, kind). Output is sorted.
pub fn summarize_types(graph: &NetGraph) -> TypeSummaryGraph {
    let mut nodes: BTreeMap<&str, (VertexCategory, usize)> = BTreeMap::new();
    for v in graph.vertices() {
        nodes.entry(v.type_name.as_str()).or_insert((v.category, 0)).1 += 1;
    }
    let mut edges: BTreeMap<(&str, &str, EdgeKind), usize> = BTreeMap::new();
    let vs = graph.vertices();
    for e in graph.edges() {
        let (a, b) = (vs[e.a].type_name.as_str(), vs[e.b].type_name.as_str());
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        *edges.entry((a, b, e.kind)).or_default() += 1;
    }
    TypeSummaryGraph {
        type_nodes: nodes
            .into_iter()
            .map(|(t, (category, vertex_count))| TypeNode { type_name: t.to_string(), category, vertex_count })
            .collect(),
        type_edges: edges
            .into_iter()
            .map(|((a, b, kind), edge_count)| TypeEdge {
                type_a: a.to_string(),
                type_b: b.to_string(),
                kind,
                edge_count,
            })
            .collect(),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", dot_escape(s))
}

fn fill(category: VertexCategory) -> &'static str {
    match category {
        VertexCategory::Infrastructure => "lightblue",
        VertexCategory::Policy => "lightsalmon",
        VertexCategory::AddressLiteral => "lightgrey",
    }
}

/// Renders the summary as an undirected DOT graph. Sizes scale with `ln(1 + count)`.
pub fn export_dot(summary: &TypeSummaryGraph) -> String {
    let mut out = String::from("graph types {\n  node [shape=ellipse, style=filled];\n");
    for n in &summary.type_nodes {
        let width = 0.75 + 0.5 * (1.0 + n.vertex_count as f64).ln();
        let _ = writeln!(
            out,
            "  {} [label=\"{}\\n{}\", category={}, fillcolor={}, width={width:.2}];",
            dot_id(&n.type_name),
            dot_escape(&n.type_name),
            n.vertex_count,
            dot_id(n.category.as_str()),
            fill(n.category),
        );
    }
    let literal = |t: &str| summary.node(t).is_some_and(|n| n.category == VertexCategory::AddressLiteral);
    for e in &summary.type_edges {
        let style = match e.kind {
            EdgeKind::Contains => "color=grey, style=dashed",
            _ if literal(&e.type_a) || literal(&e.type_b) => "color=grey",
            EdgeKind::Loose => "color=blue",
            EdgeKind::Tight => "color=red",
        };
        let penwidth = 1.0 + (1.0 + e.edge_count as f64).ln();
        let _ = writeln!(
            out,
            "  {} -- {} [kind={}, label=\"{}\", {style}, penwidth={penwidth:.2}];",
            dot_id(&e.type_a),
            dot_id(&e.type_b),
            e.kind,
            e.edge_count,
        );
    }
    out.push_str("}\n");
    out
}

const NODE_KEYS: [(&str, &str); 4] =
    [("type_name", "string"), ("category", "string"), ("is_endpoint", "boolean"), ("cidr", "string")];
const EDGE_KEYS: [(&str, &str); 2] = [("kind", "string"), ("label", "string")];

/// Renders the full graph as GraphML in insertion order.
pub fn export_graphml(graph: &NetGraph) -> String {
    let mut w = Writer::new_with_indent(Vec::new(), b' ', 2);
    let mut ev = |e: Event<'_>| w.write_event(e).expect("writing to memory cannot fail");
    ev(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None)));
    ev(Event::Start(BytesStart::new("graphml").with_attributes([
        ("xmlns", "http://graphml.graphdrawing.org/xmlns"),
        ("xmlns:xsi", "http://www.w3.org/2001/XMLSchema-instance"),
        (
            "xsi:schemaLocation",
            "http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd",
        ),
    ])));
    for (target, keys) in [("node", &NODE_KEYS[..]), ("edge", &EDGE_KEYS[..])] {
        for (name, ty) in keys {
            ev(Event::Empty(BytesStart::new("key").with_attributes([
                ("id", *name),
                ("for", target),
                ("attr.name", *name),
                ("attr.type", *ty),
            ])));
        }
    }
    ev(Event::Start(BytesStart::new("graph").with_attributes([("id", graph.name()), ("edgedefault", "undirected")])));
    let data = |ev: &mut dyn FnMut(Event<'_>), key: &str, value: &str| {
        ev(Event::Start(BytesStart::new("data").with_attributes([("key", key)])));
        ev(Event::Text(BytesText::new(value)));
        ev(Event::End(BytesEnd::new("data")));
    };
    for v in graph.vertices() {
        ev(Event::Start(BytesStart::new("node").with_attributes([("id", v.id.as_str())])));
        data(&mut ev, "type_name", &v.type_name);
        data(&mut ev, "category", v.category.as_str());
        data(&mut ev, "is_endpoint", if v.is_endpoint { "true" } else { "false" });
        data(&mut ev, "cidr", &v.cidr.map(|c| c.to_string()).unwrap_or_default());
        ev(Event::End(BytesEnd::new("node")));
    }
    let vs = graph.vertices();
    for (i, e) in graph.edges().iter().enumerate() {
        let id = format!("e{i}");
        ev(Event::Start(BytesStart::new("edge").with_attributes([
            ("id", id.as_str()),
            ("source", vs[e.a].id.as_str()),
            ("target", vs[e.b].id.as_str()),
        ])));
        data(&mut ev, "kind", e.kind.as_str());
        data(&mut ev, "label", &e.label);
        ev(Event::End(BytesEnd::new("edge")));
    }
    ev(Event::End(BytesEnd::new("graph")));
    ev(Event::End(BytesEnd::new("graphml")));
    let mut text = String::from_utf8(w.into_inner()).expect("writer emits UTF-8");
    text.push('\n');
    text
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("a comparison needs at least one row")]
    NoRows,
    #[error("malformed row table: {0}")]
    Csv(#[from] csv::Error),
}

/// One rendered table row. The ratio is kept as its two-decimal text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "Topology")]
    pub topology: String,
    #[serde(rename = "Nodes/N_E")]
    pub nodes_per_endpoint: String,
    #[serde(rename = "L-Edges")]
    pub l_edges: usize,
    #[serde(rename = "T-Edges")]
    pub t_edges: usize,
    #[serde(rename = "I-Types")]
    pub i_types: usize,
    #[serde(rename = "P-Types")]
    pub p_types: usize,
    #[serde(rename = "IP-ED")]
    pub ip_excess_degree: usize,
}

impl From<&MetricsRow> for TableRow {
    fn from(m: &MetricsRow) -> Self {
        Self {
            topology: m.topology_name.clone(),
            nodes_per_endpoint: format!("{:.2}", m.nodes_per_endpoint),
            l_edges: m.l_edges,
            t_edges: m.t_edges,
            i_types: m.i_types,
            p_types: m.p_types,
            ip_excess_degree: m.ip_excess_degree,
        }
    }
}

pub const TABLE_HEADER: [&str; 7] = ["Topology", "Nodes/N_E", "L-Edges", "T-Edges", "I-Types", "P-Types", "IP-ED"];

pub fn render_comparison(rows: &[MetricsRow], format: TableFormat) -> Result<String, ReportError> {
    let rows: Vec<TableRow> = rows.iter().map(TableRow::from).collect();
    render_table(&rows, format)
}

pub fn render_table(rows: &[TableRow], format: TableFormat) -> Result<String, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::NoRows);
    }
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields is UTF-8"))
        }
        TableFormat::Markdown => {
            let mut out = format!("| {} |\n|---|---:|---:|---:|---:|---:|---:|\n", TABLE_HEADER.join(" | "));
            for r in rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} |",
                    r.topology, r.nodes_per_endpoint, r.l_edges, r.t_edges, r.i_types, r.p_types, r.ip_excess_degree
                );
            }
            Ok(out)
        }
    }
}

/// Reads rows written by [`render_table`] in CSV form.
pub fn read_table_csv(text: &str) -> Result<Vec<TableRow>, ReportError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<Vec<TableRow>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn vertex(id: &str, ty: &str, cat: VertexCategory) -> Vertex {
        Vertex {
            id: id.into(),
            dialect: "azure".into(),
            type_name: ty.into(),
            display_name: id.into(),
            category: cat,
            is_endpoint: ty == "vm",
            cidr: None,
        }
    }

    fn two_vms() -> NetGraph {
        let mut g = NetGraph::new("t");
        for i in 1..=2 {
            g.add_vertex(vertex(&format!("vm:{i}"), "vm", VertexCategory::Infrastructure)).unwrap();
            g.add_vertex(vertex(&format!("nic:{i}"), "nic", VertexCategory::Infrastructure)).unwrap();
            g.add_edge(&format!("vm:{i}"), &format!("nic:{i}"), EdgeKind::Tight, "networkInterface").unwrap();
        }
        g
    }

    #[test]
    fn summary_aggregates() {
        let s = summarize_types(&two_vms());
        assert_eq!(s.type_nodes.len(), 2);
        assert_eq!(s.node("vm").unwrap().vertex_count, 2);
        assert_eq!(
            s.type_edges,
            [TypeEdge { type_a: "nic".into(), type_b: "vm".into(), kind: EdgeKind::Tight, edge_count: 2 }]
        );
        assert_eq!(summarize_types(&NetGraph::new("e")), TypeSummaryGraph::default());
    }

    #[test]
    fn dot_shapes() {
        let empty = export_dot(&TypeSummaryGraph::default());
        assert_eq!(empty, "graph types {\n  node [shape=ellipse, style=filled];\n}\n");
        let dot = export_dot(&summarize_types(&two_vms()));
        assert!(dot.contains("\"nic\" -- \"vm\" [kind=tight, label=\"2\", color=red, penwidth=2.10];"), "{dot}");
        assert!(dot.contains("width=1.30"), "{dot}");
    }

    #[test]
    fn graphml_escapes() {
        let mut g = NetGraph::new("a&b");
        g.add_vertex(vertex("x:<1>", "x", VertexCategory::Policy)).unwrap();
        let xml = export_graphml(&g);
        assert!(xml.contains("id=\"x:&lt;1&gt;\""), "{xml}");
        assert!(xml.contains("<data key=\"cidr\"></data>"), "{xml}");
        assert_eq!(xml.matches("<node ").count(), 1);
    }

    #[test]
    fn tables() {
        let row = MetricsRow {
            topology_name: "azure-1".into(),
            vertex_count: 176,
            endpoint_count: 24,
            nodes_per_endpoint: 176.0 / 24.0,
            l_edges: 55,
            t_edges: 203,
            contains_edges: 0,
            i_types: 8,
            p_types: 8,
            ip_excess_degree: 37,
        };
        let csv = render_comparison(std::slice::from_ref(&row), TableFormat::Csv).unwrap();
        assert_eq!(csv, "Topology,Nodes/N_E,L-Edges,T-Edges,I-Types,P-Types,IP-ED\nazure-1,7.33,55,203,8,8,37\n");
        assert_eq!(read_table_csv(&csv).unwrap(), [TableRow::from(&row)]);
        let md = render_comparison(&[row], TableFormat::Markdown).unwrap();
        assert_eq!(md.lines().count(), 3);
        assert!(md.ends_with("| azure-1 | 7.33 | 55 | 203 | 8 | 8 | 37 |\n"));
        assert!(matches!(render_comparison(&[], TableFormat::Csv), Err(ReportError::NoRows)));
    }
}
