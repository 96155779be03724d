//! Parameterized generators for the six reference topologies.
//!
//! Every topology is built from the same logical intent: `app_units` application
//! units of `tiers` tiers each, plus one shared-services unit of `shared_groups`
//! groups, with `endpoints_per_group` endpoints per group. Generators return the
//! neutral IR; [`write_native`] renders it in the dialect's own format.

mod aci;
mod azure;
mod cli;
mod k8s;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{self, Dialect, ParseError, ResourceSet, WriteError};

pub use aci::gen_aci;
pub use azure::gen_azure;
pub use cli::gen_cli;
pub use k8s::gen_k8s;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TopologyId {
    #[serde(rename = "azure-1")]
    Azure1,
    #[serde(rename = "azure-2")]
    Azure2,
    #[serde(rename = "azure-3")]
    Azure3,
    #[serde(rename = "cli-3")]
    Cli3,
    #[serde(rename = "k8s-3")]
    K8s3,
    #[serde(rename = "aci-3")]
    Aci3,
}

impl TopologyId {
    pub const ALL: [TopologyId; 6] = [
        TopologyId::Azure1,
        TopologyId::Azure2,
        TopologyId::Azure3,
        TopologyId::Cli3,
        TopologyId::K8s3,
        TopologyId::Aci3,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TopologyId::Azure1 => "azure-1",
            TopologyId::Azure2 => "azure-2",
            TopologyId::Azure3 => "azure-3",
            TopologyId::Cli3 => "cli-3",
            TopologyId::K8s3 => "k8s-3",
            TopologyId::Aci3 => "aci-3",
        }
    }

    /// Row label used in comparison tables.
    pub fn display_name(&self) -> &'static str {
        match self {
            TopologyId::Azure1 => "Topology 1 (Azure)",
            TopologyId::Azure2 => "Topology 2 (Azure)",
            TopologyId::Azure3 => "Topology 3 (Azure)",
            TopologyId::Cli3 => "Topology 3 (CLI)",
            TopologyId::K8s3 => "Topology 3 (K8S)",
            TopologyId::Aci3 => "Topology 3 (ACI)",
        }
    }

    pub fn dialect(&self) -> Dialect {
        match self {
            TopologyId::Azure1 | TopologyId::Azure2 | TopologyId::Azure3 => Dialect::Azure,
            TopologyId::Cli3 => Dialect::Cli,
            TopologyId::K8s3 => Dialect::K8s,
            TopologyId::Aci3 => Dialect::Aci,
        }
    }
}

impl fmt::Display for TopologyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TopologyId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TopologyId::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| {
            format!("unknown topology `{s}` (expected azure-1, azure-2, azure-3, cli-3, k8s-3 or aci-3)")
        })
    }
}

/// Size knobs shared by all generators. Defaults reproduce the reference tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyParams {
    pub app_units: u32,
    pub tiers: u32,
    pub shared_groups: u32,
    pub endpoints_per_group: u32,
    /// Emit access lists on the switch topology.
    pub acls: bool,
}

impl Default for TopologyParams {
    fn default() -> Self {
        Self { app_units: 2, tiers: 4, shared_groups: 4, endpoints_per_group: 2, acls: true }
    }
}

impl TopologyParams {
    /// Total endpoints the parameters describe.
    pub fn endpoint_count(&self) -> u64 {
        let groups = u64::from(self.app_units) * u64::from(self.tiers) + u64::from(self.shared_groups);
        groups * u64::from(self.endpoints_per_group)
    }

    /// Units carrying an address block: app units, then the shared unit if present.
    pub(crate) fn unit_count(&self) -> u32 {
        self.app_units + u32::from(self.shared_groups > 0)
    }

    fn check(&self) -> Result<(), GenError> {
        if self.endpoint_count() == 0 {
            return Err(GenError::InvalidParams("parameters describe zero endpoints".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid topology parameters: {0}")]
    InvalidParams(String),
    #[error("unknown Azure variant {0} (expected 1, 2 or 3)")]
    UnknownVariant(u8),
}

pub(crate) fn limit(what: &str, value: u64, max: u64) -> Result<(), GenError> {
    if value > max {
        return Err(GenError::InvalidParams(format!("{what} is {value}, the addressing plan allows at most {max}")));
    }
    Ok(())
}

/// Names for tier `t` (1-based): web, app, db, backend, then `tierN`.
pub(crate) fn tier_name(t: u32) -> String {
    match t {
        1 => "web".into(),
        2 => "app".into(),
        3 => "db".into(),
        4 => "backend".into(),
        n => format!("tier{n}"),
    }
}

/// Generates a topology in its dialect's IR.
pub fn generate(id: TopologyId, params: &TopologyParams) -> Result<ResourceSet, GenError> {
    params.check()?;
    match id {
        TopologyId::Azure1 => gen_azure(1, params),
        TopologyId::Azure2 => gen_azure(2, params),
        TopologyId::Azure3 => gen_azure(3, params),
        TopologyId::Cli3 => gen_cli(params),
        TopologyId::K8s3 => gen_k8s(params),
        TopologyId::Aci3 => gen_aci(params),
    }
}

/// Renders a resource set as native files, as (file name, content) pairs.
pub fn write_native(rs: &ResourceSet, stem: &str) -> Result<Vec<(String, String)>, WriteError> {
    let dialect: Dialect = rs.dialect.parse().map_err(|m: String| WriteError {
        type_name: "resourceSet".into(),
        key: rs.dialect.clone(),
        message: m,
    })?;
    Ok(match dialect {
        Dialect::Azure => vec![(format!("{stem}.json"), ingest::azure::write_azure(rs)?)],
        Dialect::K8s => vec![(format!("{stem}.yaml"), ingest::k8s::write_k8s(rs)?)],
        Dialect::Aci => vec![(format!("{stem}.json"), ingest::aci::write_aci(rs)?)],
        Dialect::Cli => {
            ingest::switch_cli::write_cli(rs)?.into_iter().map(|(sw, text)| (format!("{sw}.cfg"), text)).collect()
        }
    })
}

/// Parses native files of one dialect, as (file name, content) pairs.
///
/// Switch configurations take the switch name from the file stem.
pub fn parse_native(dialect: Dialect, files: &[(String, String)]) -> Result<ResourceSet, ParseError> {
    let texts: Vec<&str> = files.iter().map(|(_, t)| t.as_str()).collect();
    match dialect {
        Dialect::Azure => ingest::azure::parse_azure(&texts),
        Dialect::K8s => ingest::k8s::parse_k8s(&texts),
        Dialect::Aci => {
            let mut merged = ResourceSet::new(Dialect::Aci);
            for t in texts {
                let rs = ingest::aci::parse_aci(t)?;
                merged.resources.extend(rs.resources);
                merged.warnings.extend(rs.warnings);
            }
            merged.canonicalize();
            ingest::check_unique(&merged)?;
            Ok(merged)
        }
        Dialect::Cli => {
            let named: Vec<(&str, &str)> = files
                .iter()
                .map(|(name, t)| {
                    let base = name.rsplit(['/', '\\']).next().unwrap_or(name);
                    (base.split('.').next().unwrap_or(base), t.as_str())
                })
                .collect();
            ingest::switch_cli::parse_cli_files(&named)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::build_graph;
    use crate::metrics::compute_metrics;
    use crate::taxonomy::Taxonomy;

    fn row(id: TopologyId, p: &TopologyParams) -> (String, u64, u64, u64, u64, u64) {
        let rs = generate(id, p).unwrap();
        let g = build_graph(&rs, &Taxonomy::builtin()).unwrap();
        let m = compute_metrics(&g, id.as_str()).unwrap();
        (
            format!("{:.2}", m.nodes_per_endpoint),
            m.l_edges as u64,
            m.t_edges as u64,
            m.i_types as u64,
            m.p_types as u64,
            m.ip_excess_degree as u64,
        )
    }

    #[test]
    fn default_metrics() {
        let p = TopologyParams::default();
        let expect = |s: &str, l, t, i, pt, ip| (s.to_string(), l, t, i, pt, ip);
        assert_eq!(row(TopologyId::Azure1, &p), expect("7.33", 55, 195, 8, 8, 37));
        assert_eq!(row(TopologyId::Azure2, &p), expect("6.42", 24, 161, 8, 8, 6));
        assert_eq!(row(TopologyId::Azure3, &p), expect("5.96", 21, 140, 5, 4, 6));
        assert_eq!(row(TopologyId::Cli3, &p), expect("4.71", 187, 40, 4, 1, 15));
        assert_eq!(row(TopologyId::K8s3, &p), expect("3.08", 82, 43, 2, 3, 0));
        assert_eq!(row(TopologyId::Aci3, &p), expect("2.00", 0, 96, 6, 3, 0));
    }

    #[test]
    fn native_round_trip_preserves_metrics() {
        let p = TopologyParams::default();
        let tax = Taxonomy::builtin();
        for id in TopologyId::ALL {
            let rs = generate(id, &p).unwrap();
            let files = write_native(&rs, id.as_str()).unwrap();
            let back = parse_native(id.dialect(), &files).unwrap();
            assert!(back.warnings.is_empty(), "{id}: {:?}", back.warnings);
            let a = compute_metrics(&build_graph(&rs, &tax).unwrap(), "x").unwrap();
            let b = compute_metrics(&build_graph(&back, &tax).unwrap(), "x").unwrap();
            assert_eq!(a, b, "{id}");
        }
    }

    #[test]
    fn ids_parse() {
        for id in TopologyId::ALL {
            assert_eq!(id.as_str().parse::<TopologyId>().unwrap(), id);
        }
        assert!("azure-4".parse::<TopologyId>().is_err());
    }

    #[test]
    fn zero_endpoints_rejected() {
        let p = TopologyParams { endpoints_per_group: 0, ..Default::default() };
        assert!(matches!(generate(TopologyId::K8s3, &p), Err(GenError::InvalidParams(_))));
        assert!(matches!(gen_azure(4, &TopologyParams::default()), Err(GenError::UnknownVariant(4))));
    }
}

#[cfg(test)]
mod round_trip {
    use super::*;

    fn normalized(mut rs: ResourceSet) -> ResourceSet {
        for r in &mut rs.resources {
            r.refs.sort();
            r.cidrs.sort();
        }
        rs
    }

    #[test]
    fn native_round_trip_is_lossless() {
        for id in TopologyId::ALL {
            let rs = generate(id, &TopologyParams::default()).unwrap();
            let back = parse_native(id.dialect(), &write_native(&rs, "x").unwrap()).unwrap();
            let (a, b) = (normalized(rs), normalized(back));
            for (x, y) in a.resources.iter().zip(&b.resources) {
                assert_eq!(x, y, "{id}");
            }
            assert_eq!(a.resources.len(), b.resources.len(), "{id}");
        }
    }
}
