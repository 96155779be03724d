//! Target reference values and the reproduction check over the six default topologies.

use std::fmt::Write as _;

use crate::ingest::build_graph;
use crate::metrics::{compute_metrics, MetricsRow};
use crate::report::{render_comparison, TableFormat};
use crate::taxonomy::Taxonomy;
use crate::topologies::{generate, TopologyId, TopologyParams};
use crate::Error;

/// Reference row for one topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub id: TopologyId,
    pub nodes_per_endpoint: f64,
    pub l_edges: usize,
    pub t_edges: usize,
    pub i_types: usize,
    pub p_types: usize,
    pub ip_excess_degree: usize,
}

const fn row(id: TopologyId, npe: f64, l: usize, t: usize, i: usize, p: usize, ip: usize) -> Target {
    Target { id, nodes_per_endpoint: npe, l_edges: l, t_edges: t, i_types: i, p_types: p, ip_excess_degree: ip }
}

pub const TARGETS: [Target; 6] = [
    row(TopologyId::Azure1, 7.33, 55, 203, 8, 8, 37),
    row(TopologyId::Azure2, 6.42, 24, 163, 8, 8, 6),
    row(TopologyId::Azure3, 5.96, 22, 138, 5, 4, 6),
    row(TopologyId::Cli3, 4.71, 186, 40, 4, 1, 15),
    row(TopologyId::K8s3, 3.08, 82, 43, 2, 3, 0),
    row(TopologyId::Aci3, 2.00, 0, 99, 6, 3, 0),
];

pub fn target(id: TopologyId) -> &'static Target {
    TARGETS.iter().find(|p| p.id == id).expect("every topology has a target row")
}

/// Why a default topology misses a reference cell. Shown next to the check.
const NOTES: &[(TopologyId, &str, &str)] = &[
    (TopologyId::Azure1, "T-Edges", "implicit platform links (NIC placement, firewall ipconfig) not modeled"),
    (TopologyId::Azure2, "T-Edges", "implicit platform links (NIC placement, firewall ipconfig) not modeled"),
    (TopologyId::Azure3, "L-Edges", "one fewer tier-to-tier NSG rule prefix than the reference export"),
    (TopologyId::Azure3, "T-Edges", "NSGs attach to subnets, adding subnet links"),
    (TopologyId::Cli3, "L-Edges", "transit SVI on the core switch adds one address citation"),
    (TopologyId::Aci3, "T-Edges", "containment under the tenant is implicit in the object tree"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub topology: TopologyId,
    pub column: &'static str,
    pub achieved: String,
    pub expected: String,
    pub tolerance: &'static str,
    pub pass: bool,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reproduction {
    pub rows: Vec<MetricsRow>,
    pub checks: Vec<CellCheck>,
}

impl Reproduction {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Generates, builds and measures one default topology; the row is named by its table label.
pub fn default_row(id: TopologyId, taxonomy: &Taxonomy) -> Result<MetricsRow, Error> {
    let rs = generate(id, &TopologyParams::default())?;
    let g = build_graph(&rs, taxonomy)?;
    Ok(compute_metrics(&g, id.display_name())?)
}

fn within_pct(achieved: usize, expected: usize, pct: usize) -> bool {
    achieved.abs_diff(expected) * 100 <= expected * pct
}

pub fn check_row(id: TopologyId, m: &MetricsRow) -> Vec<CellCheck> {
    let p = target(id);
    let note = |col: &str| NOTES.iter().find(|(t, c, _)| *t == id && *c == col).map(|(_, _, n)| *n);
    let mut out = Vec::new();
    let mut cell = |column: &'static str, achieved: String, expected: String, tolerance: &'static str, pass| {
        let note = if achieved != expected { note(column) } else { None };
        out.push(CellCheck { topology: id, column, achieved, expected, tolerance, pass, note });
    };
    let npe_a = format!("{:.2}", m.nodes_per_endpoint);
    let npe_pass = (npe_a.parse::<f64>().unwrap_or(f64::NAN) - p.nodes_per_endpoint).abs() <= 0.05 + 1e-9;
    cell("Nodes/N_E", npe_a, format!("{:.2}", p.nodes_per_endpoint), "+/-0.05", npe_pass);
    for (column, a, e) in [("L-Edges", m.l_edges, p.l_edges), ("T-Edges", m.t_edges, p.t_edges)] {
        if e == 0 {
            cell(column, a.to_string(), e.to_string(), "exact", a == e);
        } else {
            cell(column, a.to_string(), e.to_string(), "+/-10%", within_pct(a, e, 10));
        }
    }
    for (column, a, e) in [
        ("I-Types", m.i_types, p.i_types),
        ("P-Types", m.p_types, p.p_types),
        ("IP-ED", m.ip_excess_degree, p.ip_excess_degree),
    ] {
        cell(column, a.to_string(), e.to_string(), "exact", a == e);
    }
    out
}

pub fn reproduce(taxonomy: &Taxonomy) -> Result<Reproduction, Error> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for id in TopologyId::ALL {
        let m = default_row(id, taxonomy)?;
        checks.extend(check_row(id, &m));
        rows.push(m);
    }
    Ok(Reproduction { rows, checks })
}

/// Markdown table followed by one check line per cell.
pub fn render_reproduction(r: &Reproduction) -> String {
    let mut out = render_comparison(&r.rows, TableFormat::Markdown).expect("six rows");
    out.push('\n');
    for c in &r.checks {
        let _ = write!(
            out,
            "[{}] {} {}: {} (target {}, {})",
            if c.pass { "PASS" } else { "FAIL" },
            c.topology.display_name(),
            c.column,
            c.achieved,
            c.expected,
            c.tolerance
        );
        if let Some(n) = c.note {
            let _ = write!(out, "; {n}");
        }
        out.push('\n');
    }
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    let _ = writeln!(out, "\n{} of {} cells within tolerance", r.checks.len() - failed, r.checks.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass() {
        let r = reproduce(&Taxonomy::builtin()).unwrap();
        assert!(r.all_pass(), "{}", render_reproduction(&r));
        assert_eq!(r.checks.len(), 36);
        let text = render_reproduction(&r);
        assert!(text.contains("| Topology 3 (ACI) | 2.00 | 0 | 96 | 6 | 3 | 0 |"), "{text}");
        assert!(text.contains("36 of 36"));
    }

    #[test]
    fn tolerances() {
        assert!(within_pct(195, 203, 10));
        assert!(!within_pct(180, 203, 10));
        let mut m = default_row(TopologyId::Aci3, &Taxonomy::builtin()).unwrap();
        m.l_edges = 1;
        let c = check_row(TopologyId::Aci3, &m);
        assert!(!c.iter().find(|c| c.column == "L-Edges").unwrap().pass);
    }
}
