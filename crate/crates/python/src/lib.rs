//! Python bindings for the netcx library.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use netcx::cidr::Ipv4Prefix;
use netcx::graph::NetGraph;
use netcx::ingest::{Dialect, ResourceSet};
use netcx::report::{TableFormat, TableRow};
use netcx::taxonomy::Taxonomy;
use netcx::topologies::{TopologyId, TopologyParams};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn taxonomy(text: Option<&str>) -> PyResult<Taxonomy> {
    text.map_or_else(|| Ok(Taxonomy::builtin()), |t| Taxonomy::parse(t).map_err(value_error))
}

fn dialect(s: &str) -> PyResult<Dialect> {
    s.parse().map_err(value_error)
}

fn topology(s: &str) -> PyResult<TopologyId> {
    s.parse().map_err(value_error)
}

fn table_format(s: &str) -> PyResult<TableFormat> {
    match s {
        "md" => Ok(TableFormat::Markdown),
        "csv" => Ok(TableFormat::Csv),
        _ => Err(PyValueError::new_err(format!("unknown table format `{s}` (expected md or csv)"))),
    }
}

/// One row of the metrics table.
#[pyclass(name = "MetricsRow", frozen, get_all)]
struct PyMetricsRow {
    topology_name: String,
    vertex_count: usize,
    endpoint_count: usize,
    nodes_per_endpoint: f64,
    l_edges: usize,
    t_edges: usize,
    contains_edges: usize,
    i_types: usize,
    p_types: usize,
    ip_excess_degree: usize,
}

impl From<netcx::metrics::MetricsRow> for PyMetricsRow {
    fn from(m: netcx::metrics::MetricsRow) -> Self {
        Self {
            topology_name: m.topology_name,
            vertex_count: m.vertex_count,
            endpoint_count: m.endpoint_count,
            nodes_per_endpoint: m.nodes_per_endpoint,
            l_edges: m.l_edges,
            t_edges: m.t_edges,
            contains_edges: m.contains_edges,
            i_types: m.i_types,
            p_types: m.p_types,
            ip_excess_degree: m.ip_excess_degree,
        }
    }
}

impl From<&PyMetricsRow> for netcx::metrics::MetricsRow {
    fn from(m: &PyMetricsRow) -> Self {
        Self {
            topology_name: m.topology_name.clone(),
            vertex_count: m.vertex_count,
            endpoint_count: m.endpoint_count,
            nodes_per_endpoint: m.nodes_per_endpoint,
            l_edges: m.l_edges,
            t_edges: m.t_edges,
            contains_edges: m.contains_edges,
            i_types: m.i_types,
            p_types: m.p_types,
            ip_excess_degree: m.ip_excess_degree,
        }
    }
}

#[pymethods]
impl PyMetricsRow {
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("topology_name", &self.topology_name)?;
        d.set_item("vertex_count", self.vertex_count)?;
        d.set_item("endpoint_count", self.endpoint_count)?;
        d.set_item("nodes_per_endpoint", self.nodes_per_endpoint)?;
        d.set_item("l_edges", self.l_edges)?;
        d.set_item("t_edges", self.t_edges)?;
        d.set_item("contains_edges", self.contains_edges)?;
        d.set_item("i_types", self.i_types)?;
        d.set_item("p_types", self.p_types)?;
        d.set_item("ip_excess_degree", self.ip_excess_degree)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let row = TableRow::from(&netcx::metrics::MetricsRow::from(self));
        format!(
            "MetricsRow({}, nodes_per_endpoint={}, l_edges={}, t_edges={}, i_types={}, p_types={}, ip_excess_degree={})",
            row.topology, row.nodes_per_endpoint, row.l_edges, row.t_edges, row.i_types, row.p_types, row.ip_excess_degree
        )
    }
}

/// A built configuration graph.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    graph: NetGraph,
}

#[pymethods]
impl PyGraph {
    #[getter]
    fn name(&self) -> String {
        self.graph.name().to_string()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    #[pyo3(signature = (name=None))]
    fn metrics(&self, name: Option<&str>) -> PyResult<PyMetricsRow> {
        let name = name.unwrap_or(self.graph.name());
        netcx::metrics::compute_metrics(&self.graph, name).map(Into::into).map_err(value_error)
    }

    /// Type summary as (type, category, vertex count) triples.
    fn type_counts(&self) -> Vec<(String, String, usize)> {
        netcx::report::summarize_types(&self.graph)
            .type_nodes
            .into_iter()
            .map(|n| (n.type_name, n.category.as_str().to_string(), n.vertex_count))
            .collect()
    }

    fn to_dot(&self) -> String {
        netcx::report::export_dot(&netcx::report::summarize_types(&self.graph))
    }

    fn to_graphml(&self) -> String {
        netcx::report::export_graphml(&self.graph)
    }
}

fn params(app_units: u32, tiers: u32, shared_groups: u32, endpoints_per_group: u32, acls: bool) -> TopologyParams {
    TopologyParams { app_units, tiers, shared_groups, endpoints_per_group, acls }
}

/// Generates a reference topology and returns its IR as JSON.
#[pyfunction]
#[pyo3(signature = (topology, app_units=2, tiers=4, shared_groups=4, endpoints_per_group=2, acls=true))]
fn generate(
    topology: &str,
    app_units: u32,
    tiers: u32,
    shared_groups: u32,
    endpoints_per_group: u32,
    acls: bool,
) -> PyResult<String> {
    let p = params(app_units, tiers, shared_groups, endpoints_per_group, acls);
    netcx::topologies::generate(self::topology(topology)?, &p).map(|rs| rs.to_json()).map_err(value_error)
}

/// Generates a reference topology as native (file name, text) pairs.
#[pyfunction]
#[pyo3(signature = (topology, app_units=2, tiers=4, shared_groups=4, endpoints_per_group=2, acls=true))]
fn generate_native(
    topology: &str,
    app_units: u32,
    tiers: u32,
    shared_groups: u32,
    endpoints_per_group: u32,
    acls: bool,
) -> PyResult<Vec<(String, String)>> {
    let id = self::topology(topology)?;
    let p = params(app_units, tiers, shared_groups, endpoints_per_group, acls);
    let rs = netcx::topologies::generate(id, &p).map_err(value_error)?;
    netcx::topologies::write_native(&rs, id.as_str()).map_err(value_error)
}

/// Builds a graph from IR JSON.
#[pyfunction]
#[pyo3(signature = (ir_json, taxonomy=None, name="graph"))]
fn build_graph(ir_json: &str, taxonomy: Option<&str>, name: &str) -> PyResult<PyGraph> {
    let rs = ResourceSet::from_json(ir_json).map_err(value_error)?;
    let graph = netcx::ingest::build_graph(&rs, &self::taxonomy(taxonomy)?).map_err(value_error)?;
    Ok(PyGraph { graph: graph.with_name(name) })
}

/// Parses native (file name, text) pairs into IR JSON.
#[pyfunction]
fn parse(dialect: &str, files: Vec<(String, String)>) -> PyResult<String> {
    let rs = netcx::topologies::parse_native(self::dialect(dialect)?, &files).map_err(value_error)?;
    Ok(rs.to_json())
}

/// Parses, builds and measures native (file name, text) pairs.
#[pyfunction]
#[pyo3(signature = (dialect, files, taxonomy=None, name="input"))]
fn analyze(
    dialect: &str,
    files: Vec<(String, String)>,
    taxonomy: Option<&str>,
    name: &str,
) -> PyResult<(PyGraph, PyMetricsRow)> {
    let a = netcx::analyze(self::dialect(dialect)?, &files, &self::taxonomy(taxonomy)?, name).map_err(value_error)?;
    Ok((PyGraph { graph: a.graph }, a.metrics.into()))
}

/// Like `analyze`, reading files and directories from disk.
#[pyfunction]
#[pyo3(signature = (dialect, paths, taxonomy=None, name="input"))]
fn analyze_paths(
    dialect: &str,
    paths: Vec<PathBuf>,
    taxonomy: Option<&str>,
    name: &str,
) -> PyResult<(PyGraph, PyMetricsRow)> {
    let d = self::dialect(dialect)?;
    let files = netcx::collect_inputs(d, &paths).map_err(value_error)?;
    analyze(dialect, files, taxonomy, name)
}

/// Renders rows as a Markdown or CSV table.
#[pyfunction]
#[pyo3(signature = (rows, format="md"))]
fn render_table(rows: Vec<PyRef<'_, PyMetricsRow>>, format: &str) -> PyResult<String> {
    let rows: Vec<_> = rows.iter().map(|r| netcx::metrics::MetricsRow::from(&**r)).collect();
    netcx::report::render_comparison(&rows, table_format(format)?).map_err(value_error)
}

/// Measures the six default topologies and returns the rendered comparison.
#[pyfunction]
#[pyo3(signature = (taxonomy=None))]
fn reproduce(taxonomy: Option<&str>) -> PyResult<(String, bool)> {
    let r = netcx::reproduce::reproduce(&self::taxonomy(taxonomy)?).map_err(value_error)?;
    Ok((netcx::reproduce::render_reproduction(&r), r.all_pass()))
}

/// True when `outer` strictly contains `inner`.
#[pyfunction]
fn cidr_contains(outer: &str, inner: &str) -> PyResult<bool> {
    let outer: Ipv4Prefix = outer.parse().map_err(value_error)?;
    let inner: Ipv4Prefix = inner.parse().map_err(value_error)?;
    Ok(netcx::cidr::cidr_contains(&outer, &inner))
}

#[pyfunction]
fn builtin_taxonomy() -> &'static str {
    Taxonomy::builtin_text()
}

#[pyfunction]
fn topologies() -> Vec<&'static str> {
    TopologyId::ALL.iter().map(|t| t.as_str()).collect()
}

#[pymodule]
fn netcx_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMetricsRow>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(generate_native, m)?)?;
    m.add_function(wrap_pyfunction!(build_graph, m)?)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_paths, m)?)?;
    m.add_function(wrap_pyfunction!(render_table, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(cidr_contains, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_taxonomy, m)?)?;
    m.add_function(wrap_pyfunction!(topologies, m)?)?;
    Ok(())
}
