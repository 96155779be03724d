//! Dialect parsers, the neutral resource IR and graph construction.

pub mod aci;
pub mod azure;
pub mod k8s;
pub mod switch_cli;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cidr::{CidrError, Ipv4Prefix};
use crate::graph::{validate_graph, EdgeKind, NetGraph, Vertex};
use crate::taxonomy::{Taxonomy, TaxonomyError, LITERAL_TYPE};

/// The four supported configuration dialects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Azure,
    K8s,
    Cli,
    Aci,
}

impl Dialect {
    pub const ALL: [Dialect; 4] = [Dialect::Azure, Dialect::K8s, Dialect::Cli, Dialect::Aci];

    pub fn as_str(&self) -> &'static str {
        match self {
            Dialect::Azure => "azure",
            Dialect::K8s => "k8s",
            Dialect::Cli => "cli",
            Dialect::Aci => "aci",
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dialect {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dialect::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown dialect `{s}` (expected azure, k8s, cli or aci)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    Loose,
    Tight,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResourceRef {
    pub target_type: String,
    pub target_key: String,
    pub coupling: Coupling,
    pub relationship: String,
}

impl ResourceRef {
    pub fn tight(target_type: &str, target_key: impl Into<String>, relationship: &str) -> Self {
        Self {
            target_type: target_type.to_string(),
            target_key: target_key.into(),
            coupling: Coupling::Tight,
            relationship: relationship.to_string(),
        }
    }

    pub fn loose(target_type: &str, target_key: impl Into<String>, relationship: &str) -> Self {
        Self {
            target_type: target_type.to_string(),
            target_key: target_key.into(),
            coupling: Coupling::Loose,
            relationship: relationship.to_string(),
        }
    }

    /// A loose reference to an address literal.
    pub fn literal(cidr: impl Into<String>, relationship: &str) -> Self {
        Self::loose(LITERAL_TYPE, cidr, relationship)
    }

    pub fn is_literal(&self) -> bool {
        self.target_type == LITERAL_TYPE
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resource {
    pub dialect: String,
    pub type_name: String,
    pub key: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attributes: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refs: Vec<ResourceRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cidrs: Vec<String>,
}

impl Resource {
    pub fn new(dialect: Dialect, type_name: &str, key: impl Into<String>) -> Self {
        Self {
            dialect: dialect.as_str().to_string(),
            type_name: type_name.to_string(),
            key: key.into(),
            attributes: BTreeMap::new(),
            refs: Vec::new(),
            cidrs: Vec::new(),
        }
    }

    pub fn attr(mut self, k: &str, v: impl Into<String>) -> Self {
        self.attributes.insert(k.to_string(), v.into());
        self
    }

    pub fn with_ref(mut self, r: ResourceRef) -> Self {
        self.refs.push(r);
        self
    }

    pub fn tight(self, target_type: &str, target_key: impl Into<String>, relationship: &str) -> Self {
        self.with_ref(ResourceRef::tight(target_type, target_key, relationship))
    }

    pub fn loose(self, target_type: &str, target_key: impl Into<String>, relationship: &str) -> Self {
        self.with_ref(ResourceRef::loose(target_type, target_key, relationship))
    }

    /// Cites a prefix loosely and records it among the declared cidrs.
    pub fn cite(mut self, cidr: impl Into<String>, relationship: &str) -> Self {
        let cidr = cidr.into();
        if !self.cidrs.contains(&cidr) {
            self.cidrs.push(cidr.clone());
        }
        self.with_ref(ResourceRef::literal(cidr, relationship))
    }

    /// Declares a prefix without an edge (e.g. a platform-assigned address).
    pub fn declare(mut self, cidr: impl Into<String>) -> Self {
        let cidr = cidr.into();
        if !self.cidrs.contains(&cidr) {
            self.cidrs.push(cidr);
        }
        self
    }

    pub fn refs_labeled<'a>(&'a self, relationship: &'a str) -> impl Iterator<Item = &'a ResourceRef> + 'a {
        self.refs.iter().filter(move |r| r.relationship == relationship)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceSet {
    pub dialect: String,
    pub resources: Vec<Resource>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ResourceSet {
    pub fn new(dialect: Dialect) -> Self {
        Self { dialect: dialect.as_str().to_string(), resources: Vec::new(), warnings: Vec::new() }
    }

    pub fn push(&mut self, r: Resource) {
        self.resources.push(r);
    }

    pub fn is_empty(&self) -> bool {
        self.resources.is_empty()
    }

    pub fn len(&self) -> usize {
        self.resources.len()
    }

    pub fn get(&self, type_name: &str, key: &str) -> Option<&Resource> {
        self.resources.iter().find(|r| r.type_name == type_name && r.key == key)
    }

    pub fn of_type<'a>(&'a self, type_name: &'a str) -> impl Iterator<Item = &'a Resource> + 'a {
        self.resources.iter().filter(move |r| r.type_name == type_name)
    }

    /// Sorts resources by (type, key) and warnings lexically, making output independent of input order.
    pub fn canonicalize(&mut self) {
        self.resources.sort_by(|a, b| (&a.type_name, &a.key).cmp(&(&b.type_name, &b.key)));
        self.warnings.sort();
        self.warnings.dedup();
    }

    /// Serializes to the neutral JSON IR.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("resource sets always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error("duplicate resource {type_name} `{key}`")]
    DuplicateResource { type_name: String, key: String },
    #[error("resource {type_name} `{key}`: {source}")]
    Cidr { type_name: String, key: String, source: CidrError },
    #[error("unresolved tight reference(s): {}", .0.join("; "))]
    UnresolvedTight(Vec<String>),
    #[error("resource {type_name} `{key}`: tight reference to address literal `{cidr}`")]
    TightLiteral { type_name: String, key: String, cidr: String },
    #[error("graph failed validation: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

fn vertex_id(type_name: &str, key: &str) -> String {
    format!("{type_name}:{key}")
}

/// Builds the categorized graph of a resource set and derives containment.
pub fn build_graph(rs: &ResourceSet, taxonomy: &Taxonomy) -> Result<NetGraph, BuildError> {
    let mut g = NetGraph::new(rs.dialect.clone());
    let mut literals: HashMap<String, usize> = HashMap::new();

    let literal = |g: &mut NetGraph, lits: &mut HashMap<String, usize>, res: &Resource, raw: &str| {
        let prefix: Ipv4Prefix = raw.parse().map_err(|source| BuildError::Cidr {
            type_name: res.type_name.clone(),
            key: res.key.clone(),
            source,
        })?;
        let canon = prefix.to_string();
        if let Some(&idx) = lits.get(&canon) {
            return Ok::<usize, BuildError>(idx);
        }
        let idx = g
            .add_vertex(Vertex {
                id: vertex_id(LITERAL_TYPE, &canon),
                dialect: rs.dialect.clone(),
                type_name: LITERAL_TYPE.to_string(),
                display_name: canon.clone(),
                category: crate::taxonomy::VertexCategory::AddressLiteral,
                is_endpoint: false,
                cidr: Some(prefix),
            })
            .expect("literal ids are unique by construction");
        lits.insert(canon, idx);
        Ok(idx)
    };

    for res in &rs.resources {
        let entry = taxonomy.lookup(&rs.dialect, &res.type_name)?;
        g.add_vertex(Vertex {
            id: vertex_id(&res.type_name, &res.key),
            dialect: rs.dialect.clone(),
            type_name: res.type_name.clone(),
            display_name: res.key.clone(),
            category: entry.category,
            is_endpoint: entry.is_endpoint,
            cidr: None,
        })
        .map_err(|_| BuildError::DuplicateResource { type_name: res.type_name.clone(), key: res.key.clone() })?;
    }

    let mut unresolved = Vec::new();
    for res in &rs.resources {
        let src = g.index_of(&vertex_id(&res.type_name, &res.key)).expect("added above");
        for cidr in &res.cidrs {
            literal(&mut g, &mut literals, res, cidr)?;
        }
        for r in &res.refs {
            if r.is_literal() {
                if r.coupling == Coupling::Tight {
                    return Err(BuildError::TightLiteral {
                        type_name: res.type_name.clone(),
                        key: res.key.clone(),
                        cidr: r.target_key.clone(),
                    });
                }
                let dst = literal(&mut g, &mut literals, res, &r.target_key)?;
                g.add_edge_idx(src, dst, EdgeKind::Loose, r.relationship.clone());
                continue;
            }
            let target_id = vertex_id(&r.target_type, &r.target_key);
            let dst = match (g.index_of(&target_id), r.coupling) {
                (Some(idx), _) => idx,
                (None, Coupling::Tight) => {
                    unresolved.push(format!(
                        "{} `{}` -[{}]-> {} `{}`",
                        res.type_name, res.key, r.relationship, r.target_type, r.target_key
                    ));
                    continue;
                }
                // Loose names may dangle: materialize the named vertex.
                (None, Coupling::Loose) => {
                    let entry = taxonomy.lookup(&rs.dialect, &r.target_type)?;
                    g.add_vertex(Vertex {
                        id: target_id,
                        dialect: rs.dialect.clone(),
                        type_name: r.target_type.clone(),
                        display_name: r.target_key.clone(),
                        category: entry.category,
                        is_endpoint: entry.is_endpoint,
                        cidr: None,
                    })
                    .expect("checked absent")
                }
            };
            let kind = match r.coupling {
                Coupling::Loose => EdgeKind::Loose,
                Coupling::Tight => EdgeKind::Tight,
            };
            g.add_edge_idx(src, dst, kind, r.relationship.clone());
        }
    }
    if !unresolved.is_empty() {
        return Err(BuildError::UnresolvedTight(unresolved));
    }
    g.derive_contains_edges();
    let violations = validate_graph(&g, taxonomy);
    if !violations.is_empty() {
        return Err(BuildError::Invalid(violations.iter().map(ToString::to_string).collect()));
    }
    Ok(g)
}

/// Errors raised while reading a dialect's native format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("document {doc}: {message}")]
    Syntax { doc: usize, message: String },
    #[error("document {doc}, {path}: {message}")]
    Field { doc: usize, path: String, message: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("document {doc}, {path}: {source}")]
    Cidr { doc: usize, path: String, source: CidrError },
    #[error("document {doc}, {path}: unresolved tight reference to `{target}`")]
    Unresolved { doc: usize, path: String, target: String },
    #[error("duplicate {type_name} `{key}`")]
    Duplicate { type_name: String, key: String },
}

/// Errors raised while writing a resource set in a dialect's native format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot write {type_name} `{key}`: {message}")]
pub struct WriteError {
    pub type_name: String,
    pub key: String,
    pub message: String,
}

impl WriteError {
    pub(crate) fn new(r: &Resource, message: impl Into<String>) -> Self {
        Self { type_name: r.type_name.clone(), key: r.key.clone(), message: message.into() }
    }
}

/// Returns an error when two resources share a (type, key) pair.
pub(crate) fn check_unique(rs: &ResourceSet) -> Result<(), ParseError> {
    let mut seen = std::collections::HashSet::new();
    for r in &rs.resources {
        if !seen.insert((r.type_name.as_str(), r.key.as_str())) {
            return Err(ParseError::Duplicate { type_name: r.type_name.clone(), key: r.key.clone() });
        }
    }
    Ok(())
}
