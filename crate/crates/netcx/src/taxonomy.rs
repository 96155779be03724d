//! Mapping from (dialect, type name) to vertex category and endpoint flag.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Type name used for address literal vertices in every dialect.
pub const LITERAL_TYPE: &str = "ipv4";

const DEFAULT_TAXONOMY: &str = include_str!("default_taxonomy.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexCategory {
    Policy,
    Infrastructure,
    AddressLiteral,
}

impl VertexCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            VertexCategory::Policy => "policy",
            VertexCategory::Infrastructure => "infrastructure",
            VertexCategory::AddressLiteral => "address_literal",
        }
    }
}

impl fmt::Display for VertexCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VertexCategory {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "policy" => Ok(VertexCategory::Policy),
            "infrastructure" => Ok(VertexCategory::Infrastructure),
            "address_literal" => Ok(VertexCategory::AddressLiteral),
            other => Err(format!("unknown category `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonEntry {
    pub category: VertexCategory,
    pub is_endpoint: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxonomyError {
    #[error("taxonomy line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("taxonomy line {line}: duplicate entry for ({dialect}, {type_name})")]
    Duplicate { line: usize, dialect: String, type_name: String },
    #[error("unmapped type `{type_name}` for dialect `{dialect}`")]
    Unmapped { dialect: String, type_name: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Taxonomy {
    entries: BTreeMap<(String, String), TaxonEntry>,
}

impl Taxonomy {
    /// The built-in taxonomy covering every type the bundled parsers and generators emit.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_TAXONOMY).expect("built-in taxonomy is well-formed")
    }

    pub fn builtin_text() -> &'static str {
        DEFAULT_TAXONOMY
    }

    /// Parses `dialect type_name category endpoint` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, TaxonomyError> {
        let mut tax = Taxonomy::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let cols: Vec<&str> = content.split_whitespace().collect();
            let syntax = |message: String| TaxonomyError::Syntax { line, message };
            let [dialect, type_name, category, flag] = cols[..] else {
                return Err(syntax(format!("expected 4 columns, found {}", cols.len())));
            };
            let category: VertexCategory = category.parse().map_err(syntax)?;
            let is_endpoint = match flag {
                "0" => false,
                "1" => true,
                other => return Err(syntax(format!("endpoint flag must be 0 or 1, found `{other}`"))),
            };
            if is_endpoint && category != VertexCategory::Infrastructure {
                return Err(syntax(format!("endpoint type `{type_name}` must be infrastructure")));
            }
            if (type_name == LITERAL_TYPE) != (category == VertexCategory::AddressLiteral) {
                return Err(syntax(format!(
                    "only `{LITERAL_TYPE}` may be, and must be, address_literal (got `{type_name}` {category})"
                )));
            }
            tax.insert(dialect, type_name, TaxonEntry { category, is_endpoint }).map_err(|_| {
                TaxonomyError::Duplicate { line, dialect: dialect.to_string(), type_name: type_name.to_string() }
            })?;
        }
        Ok(tax)
    }

    /// Adds an entry; fails if one already exists for the pair.
    pub fn insert(&mut self, dialect: &str, type_name: &str, entry: TaxonEntry) -> Result<(), TaxonEntry> {
        let key = (dialect.to_string(), type_name.to_string());
        match self.entries.get(&key) {
            Some(existing) => Err(*existing),
            None => {
                self.entries.insert(key, entry);
                Ok(())
            }
        }
    }

    /// Looks up a type. The literal type is intrinsic and always resolves.
    pub fn lookup(&self, dialect: &str, type_name: &str) -> Result<TaxonEntry, TaxonomyError> {
        if type_name == LITERAL_TYPE {
            return Ok(TaxonEntry { category: VertexCategory::AddressLiteral, is_endpoint: false });
        }
        self.entries
            .get(&(dialect.to_string(), type_name.to_string()))
            .copied()
            .ok_or_else(|| TaxonomyError::Unmapped { dialect: dialect.to_string(), type_name: type_name.to_string() })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, TaxonEntry)> {
        self.entries.iter().map(|((d, t), e)| (d.as_str(), t.as_str(), *e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_counts() {
        let t = Taxonomy::builtin();
        let count = |d: &str, c| t.entries().filter(|(dd, _, e)| *dd == d && e.category == c).count();
        assert_eq!(count("azure", VertexCategory::Infrastructure), 8);
        assert_eq!(count("azure", VertexCategory::Policy), 9);
        assert_eq!(count("k8s", VertexCategory::Infrastructure), 2);
        assert_eq!(count("k8s", VertexCategory::Policy), 3);
        assert_eq!(count("cli", VertexCategory::Policy), 1);
        assert_eq!(count("aci", VertexCategory::Infrastructure), 6);
        assert!(t.lookup("k8s", "pod").unwrap().is_endpoint);
        assert_eq!(t.lookup("cli", "ipv4").unwrap().category, VertexCategory::AddressLiteral);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Taxonomy::parse("azure vm"), Err(TaxonomyError::Syntax { line: 1, .. })));
        assert!(matches!(
            Taxonomy::parse("# c\nazure vm infrastructure 1\nazure vm policy 0"),
            Err(TaxonomyError::Duplicate { line: 3, .. })
        ));
        assert!(Taxonomy::parse("azure nsg policy 1").is_err());
        assert!(Taxonomy::parse("azure vm address_literal 0").is_err());
        assert!(Taxonomy::parse("azure vm infra 0").is_err());
        let err = Taxonomy::parse("").unwrap().lookup("azure", "vm").unwrap_err();
        assert!(err.to_string().contains("`vm`"));
    }
}
