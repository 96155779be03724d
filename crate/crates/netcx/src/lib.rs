//! Complexity metrics for network configurations modeled as typed graphs.
//!
//! Configurations in one of four dialects are parsed into a neutral resource
//! set, built into a categorized multigraph and measured. The six reference
//! topologies can be generated in every dialect's native format.

pub mod cidr;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod report;
pub mod reproduce;
pub mod taxonomy;
pub mod topologies;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::NetGraph;
use crate::ingest::{build_graph, BuildError, Dialect, ParseError, ResourceSet, WriteError};
use crate::metrics::{compute_metrics, MetricsError, MetricsRow};
use crate::report::ReportError;
use crate::taxonomy::{Taxonomy, TaxonomyError};
use crate::topologies::{parse_native, GenError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error(transparent)]
    Write(#[from] WriteError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("no resources found in the input")]
    NoResources,
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().to_path_buf(), source }
    }
}

/// Everything produced by analyzing one configuration.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub resources: ResourceSet,
    pub graph: NetGraph,
    pub metrics: MetricsRow,
}

/// File extensions picked up when a directory is given as input.
pub fn dialect_extensions(dialect: Dialect) -> &'static [&'static str] {
    match dialect {
        Dialect::Azure | Dialect::Aci => &["json"],
        Dialect::K8s => &["yaml", "yml", "json"],
        Dialect::Cli => &["cfg", "conf", "txt"],
    }
}

/// Suffix of neutral IR files written next to native ones; directory scans skip them.
pub const IR_SUFFIX: &str = ".ir.json";

/// Reads input files; directories contribute their matching files, sorted by name.
pub fn collect_inputs(dialect: Dialect, paths: &[PathBuf]) -> Result<Vec<(String, String)>, Error> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::io(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| {
                    f.is_file()
                        && !f.to_string_lossy().ends_with(IR_SUFFIX)
                        && f.extension()
                            .and_then(|x| x.to_str())
                            .is_some_and(|x| dialect_extensions(dialect).contains(&x))
                })
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    files
        .into_iter()
        .map(|f| {
            let text = std::fs::read_to_string(&f).map_err(|e| Error::io(&f, e))?;
            Ok((f.display().to_string(), text))
        })
        .collect()
}

/// Parses, builds and measures native files of one dialect.
pub fn analyze(
    dialect: Dialect,
    files: &[(String, String)],
    taxonomy: &Taxonomy,
    name: &str,
) -> Result<Analysis, Error> {
    let resources = parse_native(dialect, files)?;
    if resources.is_empty() {
        return Err(Error::NoResources);
    }
    let graph = build_graph(&resources, taxonomy)?.with_name(name);
    let metrics = compute_metrics(&graph, name)?;
    Ok(Analysis { resources, graph, metrics })
}
