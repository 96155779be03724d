//! Typed undirected multigraph of a configuration.
//!
//! Graphs are append-only: vertices and edges can be added but never removed.
//! Vertex ids are strings; edges store vertex indices internally.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cidr::Ipv4Prefix;
use crate::taxonomy::{Taxonomy, VertexCategory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Loose,
    Tight,
    Contains,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Loose => "loose",
            EdgeKind::Tight => "tight",
            EdgeKind::Contains => "contains",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub dialect: String,
    pub type_name: String,
    pub display_name: String,
    pub category: VertexCategory,
    pub is_endpoint: bool,
    pub cidr: Option<Ipv4Prefix>,
}

/// An undirected edge between two vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
    pub label: String,
}

impl Edge {
    /// The endpoint opposite to `v`, if `v` is incident.
    pub fn other(&self, v: usize) -> Option<usize> {
        if self.a == v {
            Some(self.b)
        } else if self.b == v {
            Some(self.a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetGraph {
    name: String,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

impl NetGraph {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn add_vertex(&mut self, vertex: Vertex) -> Result<usize, GraphError> {
        if self.index.contains_key(&vertex.id) {
            return Err(GraphError::DuplicateVertex(vertex.id));
        }
        let idx = self.vertices.len();
        self.index.insert(vertex.id.clone(), idx);
        self.vertices.push(vertex);
        Ok(idx)
    }

    /// Adds an edge between two vertices given by id.
    pub fn add_edge(&mut self, a: &str, b: &str, kind: EdgeKind, label: impl Into<String>) -> Result<(), GraphError> {
        let ia = self.index_of(a).ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
        let ib = self.index_of(b).ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
        self.add_edge_idx(ia, ib, kind, label);
        Ok(())
    }

    /// Adds an edge between two vertex indices. Panics on out-of-range indices.
    pub fn add_edge_idx(&mut self, a: usize, b: usize, kind: EdgeKind, label: impl Into<String>) {
        assert!(a < self.vertices.len() && b < self.vertices.len(), "edge index out of range");
        self.edges.push(Edge { a, b, kind, label: label.into() });
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.index_of(id).map(|i| &self.vertices[i])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Links each address literal to its immediate covering literal(s).
    ///
    /// Returns the number of edges added. Existing contains edges are kept,
    /// so running twice adds nothing the second time.
    pub fn derive_contains_edges(&mut self) -> usize {
        let literals: Vec<(usize, Ipv4Prefix)> =
            self.vertices.iter().enumerate().filter_map(|(i, v)| v.cidr.map(|c| (i, c))).collect();
        let existing: HashSet<(usize, usize)> =
            self.edges.iter().filter(|e| e.kind == EdgeKind::Contains).map(|e| (e.a, e.b)).collect();
        let mut added = 0;
        for &(inner_idx, inner) in &literals {
            // Immediate parents are the longest strictly covering prefixes.
            let best = literals.iter().filter(|(_, outer)| outer.contains(&inner)).map(|(_, outer)| outer.len()).max();
            let Some(best) = best else { continue };
            for &(outer_idx, outer) in &literals {
                if outer.len() == best && outer.contains(&inner) && !existing.contains(&(outer_idx, inner_idx)) {
                    self.add_edge_idx(outer_idx, inner_idx, EdgeKind::Contains, "contains");
                    added += 1;
                }
            }
        }
        added
    }

    /// Owned-value form of [`NetGraph::derive_contains_edges`].
    pub fn with_contains_edges(mut self) -> Self {
        self.derive_contains_edges();
        self
    }
}

/// One broken invariant found by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    DanglingEdge { edge: usize },
    CidrMismatch { vertex: String },
    EndpointNotInfrastructure { vertex: String },
    ContainsOnNonLiteral { edge: usize },
    ContainsNotNested { edge: usize },
    TightOnLiteral { edge: usize, vertex: String },
    UnmappedType { dialect: String, type_name: String },
    CategoryMismatch { vertex: String, expected: VertexCategory },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "duplicate vertex id `{id}`"),
            Violation::DanglingEdge { edge } => write!(f, "edge #{edge} references a missing vertex"),
            Violation::CidrMismatch { vertex } => {
                write!(f, "vertex `{vertex}`: cidr must be present exactly for address literals")
            }
            Violation::EndpointNotInfrastructure { vertex } => {
                write!(f, "vertex `{vertex}`: endpoint flag on a non-infrastructure vertex")
            }
            Violation::ContainsOnNonLiteral { edge } => write!(f, "contains edge #{edge} touches a non-literal vertex"),
            Violation::ContainsNotNested { edge } => write!(f, "contains edge #{edge} joins prefixes that do not nest"),
            Violation::TightOnLiteral { edge, vertex } => {
                write!(f, "tight edge #{edge} is incident to address literal `{vertex}`")
            }
            Violation::UnmappedType { dialect, type_name } => {
                write!(f, "unmapped type `{type_name}` for dialect `{dialect}`")
            }
            Violation::CategoryMismatch { vertex, expected } => {
                write!(f, "vertex `{vertex}`: category differs from taxonomy ({expected})")
            }
        }
    }
}

/// Lists every invariant violation. An empty list means the graph is well-formed.
pub fn validate_graph(graph: &NetGraph, taxonomy: &Taxonomy) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut unmapped = HashSet::new();
    for v in graph.vertices() {
        if !seen.insert(v.id.as_str()) {
            out.push(Violation::DuplicateId(v.id.clone()));
        }
        if v.cidr.is_some() != (v.category == VertexCategory::AddressLiteral) {
            out.push(Violation::CidrMismatch { vertex: v.id.clone() });
        }
        if v.is_endpoint && v.category != VertexCategory::Infrastructure {
            out.push(Violation::EndpointNotInfrastructure { vertex: v.id.clone() });
        }
        match taxonomy.lookup(&v.dialect, &v.type_name) {
            Ok(entry) if entry.category != v.category => {
                out.push(Violation::CategoryMismatch { vertex: v.id.clone(), expected: entry.category });
            }
            Ok(_) => {}
            Err(_) => {
                if unmapped.insert((v.dialect.as_str(), v.type_name.as_str())) {
                    out.push(Violation::UnmappedType { dialect: v.dialect.clone(), type_name: v.type_name.clone() });
                }
            }
        }
    }
    let n = graph.vertex_count();
    for (i, e) in graph.edges().iter().enumerate() {
        if e.a >= n || e.b >= n {
            out.push(Violation::DanglingEdge { edge: i });
            continue;
        }
        let (va, vb) = (&graph.vertices()[e.a], &graph.vertices()[e.b]);
        match e.kind {
            EdgeKind::Contains => match (va.cidr, vb.cidr) {
                (Some(outer), Some(inner))
                    if va.category == VertexCategory::AddressLiteral
                        && vb.category == VertexCategory::AddressLiteral =>
                {
                    if !outer.contains(&inner) && !inner.contains(&outer) {
                        out.push(Violation::ContainsNotNested { edge: i });
                    }
                }
                _ => out.push(Violation::ContainsOnNonLiteral { edge: i }),
            },
            EdgeKind::Tight => {
                for v in [va, vb] {
                    if v.category == VertexCategory::AddressLiteral {
                        out.push(Violation::TightOnLiteral { edge: i, vertex: v.id.clone() });
                    }
                }
            }
            EdgeKind::Loose => {}
        }
    }
    out
}
