//! Shared test helpers: seeded random graphs, a brute-force IP-ED tally and a GraphML reader.
#![allow(dead_code)]

use std::collections::HashMap;

use quick_xml::events::Event;
use quick_xml::Reader;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netcx::cidr::Ipv4Prefix;
use netcx::graph::{EdgeKind, NetGraph, Vertex};
use netcx::taxonomy::VertexCategory;

const TYPES: [(&str, VertexCategory); 5] = [
    ("vm", VertexCategory::Infrastructure),
    ("subnet", VertexCategory::Infrastructure),
    ("nsgRule", VertexCategory::Policy),
    ("label", VertexCategory::Policy),
    ("ipv4", VertexCategory::AddressLiteral),
];

fn vertex(id: String, type_name: &str, category: VertexCategory, endpoint: bool, cidr: Option<Ipv4Prefix>) -> Vertex {
    Vertex {
        display_name: id.clone(),
        id,
        dialect: "test".into(),
        type_name: type_name.into(),
        category,
        is_endpoint: endpoint,
        cidr,
    }
}

/// A graph of at most `max_vertices` vertices with random categories and edge kinds.
/// Vertex 0 is always an endpoint so metrics are defined.
pub fn random_graph(seed: u64, max_vertices: usize) -> NetGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vertices);
    let mut g = NetGraph::new("random");
    let mut used = std::collections::HashSet::new();
    for i in 0..n {
        let (ty, cat) = if i == 0 { TYPES[0] } else { TYPES[rng.gen_range(0..TYPES.len())] };
        let cidr = if cat == VertexCategory::AddressLiteral {
            // Small address space so containment chains are common.
            let len = rng.gen_range(8..=32u8);
            let addr = std::net::Ipv4Addr::from(0x0a00_0000 | (rng.gen::<u32>() & 0x00ff_ffff));
            let p = Ipv4Prefix::network_of(addr, len).unwrap();
            if !used.insert(p) {
                continue;
            }
            Some(p)
        } else {
            None
        };
        let id = match cidr {
            Some(p) => format!("ipv4:{p}"),
            None => format!("{ty}:{i}"),
        };
        let endpoint = ty == "vm" && (i == 0 || rng.gen_bool(0.5));
        g.add_vertex(vertex(id, ty, cat, endpoint, cidr)).unwrap();
    }
    let m = rng.gen_range(0..=2 * g.vertex_count());
    for _ in 0..m {
        let a = rng.gen_range(0..g.vertex_count());
        let b = rng.gen_range(0..g.vertex_count());
        let kind = [EdgeKind::Loose, EdgeKind::Tight, EdgeKind::Contains][rng.gen_range(0..3)];
        g.add_edge_idx(a, b, kind, "rel");
    }
    g
}

/// Per-literal tally written independently of the library: walk every edge end.
pub fn brute_force_ip_ed(g: &NetGraph) -> usize {
    let mut total = 0;
    for (i, v) in g.vertices().iter().enumerate() {
        if v.category != VertexCategory::AddressLiteral {
            continue;
        }
        let mut degree = 0usize;
        for e in g.edges() {
            if e.kind == EdgeKind::Contains {
                continue;
            }
            degree += usize::from(e.a == i) + usize::from(e.b == i);
        }
        total += degree.saturating_sub(1);
    }
    total
}

/// Rebuilds the graph with fresh ids and shuffled vertex and edge order.
pub fn relabeled(g: &NetGraph, seed: u64) -> NetGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(&mut rng);
    let mut out = NetGraph::new(g.name());
    let mut new_index = vec![0; g.vertex_count()];
    for (pos, &old) in order.iter().enumerate() {
        let mut v = g.vertices()[old].clone();
        v.id = format!("renamed-{pos}");
        v.display_name = v.id.clone();
        new_index[old] = out.add_vertex(v).unwrap();
    }
    let mut edges = g.edges().to_vec();
    edges.shuffle(&mut rng);
    for e in edges {
        let (a, b) = if rng.gen_bool(0.5) { (e.a, e.b) } else { (e.b, e.a) };
        out.add_edge_idx(new_index[a], new_index[b], e.kind, e.label);
    }
    out
}

/// Ensures some literal already carries a non-contains edge; returns its index.
pub fn cited_literal(g: &mut NetGraph) -> usize {
    let cited = g.vertices().iter().enumerate().find_map(|(i, v)| {
        let used = g.edges().iter().any(|e| e.kind != EdgeKind::Contains && (e.a == i || e.b == i));
        (v.category == VertexCategory::AddressLiteral && used).then_some(i)
    });
    cited.unwrap_or_else(|| {
        let i = g
            .add_vertex(Vertex {
                id: "ipv4:192.0.2.0/24".into(),
                dialect: "test".into(),
                type_name: "ipv4".into(),
                display_name: "192.0.2.0/24".into(),
                category: VertexCategory::AddressLiteral,
                is_endpoint: false,
                cidr: Some("192.0.2.0/24".parse().unwrap()),
            })
            .unwrap();
        g.add_edge_idx(0, i, EdgeKind::Loose, "seed");
        i
    })
}

/// Copy of the graph with only the edges accepted by `keep`.
pub fn filter_edges(g: &NetGraph, keep: impl Fn(EdgeKind) -> bool) -> NetGraph {
    let mut out = NetGraph::new(g.name());
    for v in g.vertices() {
        out.add_vertex(v.clone()).unwrap();
    }
    for e in g.edges().iter().filter(|e| keep(e.kind)) {
        out.add_edge_idx(e.a, e.b, e.kind, e.label.clone());
    }
    out
}

/// Reads GraphML produced by `export_graphml` back into a graph.
pub fn read_graphml(text: &str) -> NetGraph {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut g = NetGraph::new("graphml");
    let mut current: HashMap<String, String> = HashMap::new();
    let mut element: Option<(String, String, String)> = None; // (tag, id or source, target)
    let mut key = String::new();
    let attr = |e: &quick_xml::events::BytesStart<'_>, name: &str| -> String {
        e.attributes()
            .flatten()
            .find(|a| a.key.as_ref() == name.as_bytes())
            .map(|a| a.unescape_value().unwrap().into_owned())
            .unwrap_or_default()
    };
    loop {
        match reader.read_event().unwrap() {
            Event::Start(e) => match e.name().as_ref() {
                b"graph" => g = g.with_name(attr(&e, "id")),
                b"node" => element = Some(("node".into(), attr(&e, "id"), String::new())),
                b"edge" => element = Some(("edge".into(), attr(&e, "source"), attr(&e, "target"))),
                b"data" => key = attr(&e, "key"),
                _ => {}
            },
            Event::Text(t) => {
                current.insert(key.clone(), t.unescape().unwrap().into_owned());
            }
            Event::End(e) => match e.name().as_ref() {
                b"data" => {
                    current.entry(key.clone()).or_default();
                }
                b"node" | b"edge" => {
                    let (tag, a, b) = element.take().unwrap();
                    let get = |k: &str| current.get(k).cloned().unwrap_or_default();
                    if tag == "node" {
                        let cidr = get("cidr");
                        g.add_vertex(Vertex {
                            display_name: a.clone(),
                            id: a,
                            dialect: "graphml".into(),
                            type_name: get("type_name"),
                            category: get("category").parse().unwrap(),
                            is_endpoint: get("is_endpoint") == "true",
                            cidr: (!cidr.is_empty()).then(|| cidr.parse().unwrap()),
                        })
                        .unwrap();
                    } else {
                        let kind = match get("kind").as_str() {
                            "loose" => EdgeKind::Loose,
                            "tight" => EdgeKind::Tight,
                            _ => EdgeKind::Contains,
                        };
                        g.add_edge(&a, &b, kind, get("label")).unwrap();
                    }
                    current.clear();
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    g
}
