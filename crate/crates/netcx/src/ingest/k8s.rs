//! Kubernetes manifests (multi-document YAML).

use std::collections::BTreeSet;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{check_unique, Dialect, ParseError, Resource, ResourceSet, WriteError};
use crate::cidr::Ipv4Prefix;

const WORKLOADS: &[&str] = &["Deployment", "StatefulSet", "ReplicaSet", "ReplicationController", "DaemonSet", "Job"];

fn label_key(k: &str, v: &Value) -> String {
    match v {
        Value::String(s) => format!("{k}={s}"),
        other => format!("{k}={other}"),
    }
}

fn match_labels(v: Option<&Value>) -> Vec<String> {
    v.and_then(|s| s.get("matchLabels").or(Some(s)))
        .and_then(Value::as_object)
        .map(|m| {
            m.iter()
                .filter(|(k, _)| k.as_str() != "matchLabels" && k.as_str() != "matchExpressions")
                .map(|(k, v)| label_key(k, v))
                .collect()
        })
        .unwrap_or_default()
}

fn plain_labels(v: Option<&Value>) -> Vec<String> {
    v.and_then(Value::as_object).map(|m| m.iter().map(|(k, v)| label_key(k, v)).collect()).unwrap_or_default()
}

struct State {
    rs: ResourceSet,
    carried: BTreeSet<String>,
    selected: BTreeSet<String>,
    namespaces_used: BTreeSet<String>,
}

/// Parses manifest texts; each text may hold several `---` separated documents.
pub fn parse_k8s(manifests: &[&str]) -> Result<ResourceSet, ParseError> {
    let mut docs = Vec::new();
    for text in manifests {
        for de in serde_yaml::Deserializer::from_str(text) {
            let doc = docs.len();
            let v = Value::deserialize(de).map_err(|e| ParseError::Syntax { doc, message: e.to_string() })?;
            docs.push(v);
        }
    }
    parse_k8s_values(&docs)
}

pub fn parse_k8s_values(docs: &[Value]) -> Result<ResourceSet, ParseError> {
    let mut st = State {
        rs: ResourceSet::new(Dialect::K8s),
        carried: BTreeSet::new(),
        selected: BTreeSet::new(),
        namespaces_used: BTreeSet::new(),
    };
    for (doc, v) in docs.iter().enumerate() {
        if v.is_null() {
            continue;
        }
        if v.get("kind").and_then(Value::as_str) == Some("List") {
            for (i, item) in v.get("items").and_then(Value::as_array).into_iter().flatten().enumerate() {
                object(&mut st, doc, &format!("items[{i}]."), item)?;
            }
        } else {
            object(&mut st, doc, "", v)?;
        }
    }
    let declared: BTreeSet<String> = st.rs.of_type("namespace").map(|r| r.key.clone()).collect();
    for ns in st.namespaces_used.difference(&declared) {
        st.rs.warnings.push(format!("namespace `{ns}` is referenced but not declared; synthesized"));
        st.rs.push(Resource::new(Dialect::K8s, "namespace", ns.clone()));
    }
    for label in st.selected.difference(&st.carried) {
        st.rs.warnings.push(format!("selector label `{label}` matches no object"));
    }
    for label in st.carried.union(&st.selected) {
        st.rs.push(Resource::new(Dialect::K8s, "label", label.clone()));
    }
    st.rs.canonicalize();
    check_unique(&st.rs)?;
    Ok(st.rs)
}

fn object(st: &mut State, doc: usize, prefix: &str, v: &Value) -> Result<(), ParseError> {
    let field = |path: &str, message: &str| ParseError::Field {
        doc,
        path: format!("{prefix}{path}"),
        message: message.to_string(),
    };
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| field("kind", "missing kind"))?;
    let meta = v.get("metadata");
    let name = meta
        .and_then(|m| m.get("name"))
        .and_then(Value::as_str)
        .ok_or_else(|| field("metadata.name", "missing name"))?;
    let ns = meta.and_then(|m| m.get("namespace")).and_then(Value::as_str).unwrap_or("default").to_string();
    let annotations = |mut r: Resource| {
        if let Some(m) = meta.and_then(|m| m.get("annotations")).and_then(Value::as_object) {
            for (k, val) in m {
                r.attributes.insert(k.clone(), val.as_str().map_or_else(|| val.to_string(), str::to_string));
            }
        }
        r
    };
    let spec = v.get("spec");
    match kind {
        "Namespace" => {
            let mut r = annotations(Resource::new(Dialect::K8s, "namespace", name));
            for l in plain_labels(meta.and_then(|m| m.get("labels"))) {
                st.carried.insert(l.clone());
                r = r.loose("label", l, "label");
            }
            st.rs.push(r);
        }
        "Pod" => {
            let labels = plain_labels(meta.and_then(|m| m.get("labels")));
            push_pod(st, &ns, name, labels, annotations);
        }
        k if WORKLOADS.contains(&k) => {
            let template = spec.and_then(|s| s.get("template"));
            let labels = plain_labels(template.and_then(|t| t.get("metadata")).and_then(|m| m.get("labels")));
            let replicas = spec.and_then(|s| s.get("replicas")).and_then(Value::as_u64).unwrap_or(1);
            for i in 0..replicas {
                push_pod(st, &ns, &format!("{name}-{i}"), labels.clone(), |r| {
                    r.attr("workload", format!("{k}/{name}"))
                });
            }
        }
        "Service" => {
            let mut r = annotations(Resource::new(Dialect::K8s, "service", format!("{ns}/{name}"))).tight(
                "namespace",
                ns.clone(),
                "namespace",
            );
            for l in plain_labels(spec.and_then(|s| s.get("selector"))) {
                st.selected.insert(l.clone());
                r = r.loose("label", l, "selector");
            }
            st.namespaces_used.insert(ns);
            st.rs.push(r);
        }
        "NetworkPolicy" => {
            let r = annotations(Resource::new(Dialect::K8s, "networkPolicy", format!("{ns}/{name}"))).tight(
                "namespace",
                ns.clone(),
                "namespace",
            );
            let r = network_policy(st, doc, prefix, spec, r)?;
            st.namespaces_used.insert(ns);
            st.rs.push(r);
        }
        other => st.rs.warnings.push(format!("document {doc}: unsupported kind `{other}` ignored")),
    }
    Ok(())
}

fn push_pod(st: &mut State, ns: &str, name: &str, labels: Vec<String>, decorate: impl FnOnce(Resource) -> Resource) {
    let mut r =
        decorate(Resource::new(Dialect::K8s, "pod", format!("{ns}/{name}"))).tight("namespace", ns, "namespace");
    for l in labels {
        st.carried.insert(l.clone());
        r = r.loose("label", l, "label");
    }
    st.namespaces_used.insert(ns.to_string());
    st.rs.push(r);
}

fn network_policy(
    st: &mut State,
    doc: usize,
    prefix: &str,
    spec: Option<&Value>,
    mut r: Resource,
) -> Result<Resource, ParseError> {
    let Some(spec) = spec else { return Ok(r) };
    let pod_selector = spec.get("podSelector");
    if pod_selector.and_then(|p| p.get("matchExpressions")).is_some() {
        st.rs.warnings.push(format!("document {doc}: matchExpressions are not modeled"));
    }
    for l in match_labels(pod_selector) {
        st.selected.insert(l.clone());
        r = r.loose("label", l, "podSelector");
    }
    if let Some(types) = spec.get("policyTypes").and_then(Value::as_array) {
        let joined: Vec<&str> = types.iter().filter_map(Value::as_str).collect();
        r = r.attr("policyTypes", joined.join(","));
    }
    for (dir, peers_key, pod_label, ns_label) in
        [("ingress", "from", "ingressFrom", "ingressNamespace"), ("egress", "to", "egressTo", "egressNamespace")]
    {
        for (ri, rule) in spec.get(dir).and_then(Value::as_array).into_iter().flatten().enumerate() {
            for (pi, peer) in rule.get(peers_key).and_then(Value::as_array).into_iter().flatten().enumerate() {
                let path = format!("{prefix}spec.{dir}[{ri}].{peers_key}[{pi}]");
                if let Some(sel) = peer.get("podSelector") {
                    for l in match_labels(Some(sel)) {
                        st.selected.insert(l.clone());
                        r = r.loose("label", l, pod_label);
                    }
                }
                if let Some(sel) = peer.get("namespaceSelector") {
                    let labels = match_labels(Some(sel));
                    if labels.is_empty() {
                        r = r.attr(&format!("{dir}AllNamespaces"), "true");
                    }
                    for l in labels {
                        st.selected.insert(l.clone());
                        r = r.loose("label", l, ns_label);
                    }
                }
                if let Some(block) = peer.get("ipBlock") {
                    let cidr = block.get("cidr").and_then(Value::as_str).ok_or_else(|| ParseError::Field {
                        doc,
                        path: format!("{path}.ipBlock.cidr"),
                        message: "missing cidr".into(),
                    })?;
                    let parse = |s: &str, p: String| {
                        s.parse::<Ipv4Prefix>().map(|c| c.to_string()).map_err(|source| ParseError::Cidr {
                            doc,
                            path: p,
                            source,
                        })
                    };
                    r = r.cite(parse(cidr, format!("{path}.ipBlock.cidr"))?, &format!("{dir}IpBlock"));
                    for (ei, e) in block.get("except").and_then(Value::as_array).into_iter().flatten().enumerate() {
                        let s = e.as_str().unwrap_or_default();
                        r = r.cite(parse(s, format!("{path}.ipBlock.except[{ei}]"))?, &format!("{dir}IpBlockExcept"));
                    }
                }
            }
        }
    }
    Ok(r)
}

fn labels_map(r: &Resource, rel: &str) -> Map<String, Value> {
    let mut m = Map::new();
    for l in r.refs_labeled(rel) {
        if let Some((k, v)) = l.target_key.split_once('=') {
            m.insert(k.to_string(), Value::String(v.to_string()));
        }
    }
    m
}

fn split_key(r: &Resource) -> Result<(&str, &str), WriteError> {
    r.key.split_once('/').ok_or_else(|| WriteError::new(r, "expected `namespace/name` key"))
}

fn metadata(r: &Resource, name: &str, ns: Option<&str>, labels: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(name));
    if let Some(ns) = ns {
        m.insert("namespace".into(), json!(ns));
    }
    if !labels.is_empty() {
        m.insert("labels".into(), Value::Object(labels));
    }
    let annotations: Map<String, Value> = r
        .attributes
        .iter()
        .filter(|(k, _)| !matches!(k.as_str(), "policyTypes" | "ingressAllNamespaces" | "egressAllNamespaces"))
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    if !annotations.is_empty() {
        m.insert("annotations".into(), Value::Object(annotations));
    }
    Value::Object(m)
}

fn peers(r: &Resource, dir: &str, pod_rel: &str, ns_rel: &str) -> Vec<Value> {
    let all_ns = r.attributes.get(&format!("{dir}AllNamespaces")).is_some_and(|v| v == "true");
    let mut out = Vec::new();
    for l in r.refs_labeled(pod_rel) {
        let (k, v) = l.target_key.split_once('=').unwrap_or((&l.target_key, ""));
        let mut peer = json!({ "podSelector": { "matchLabels": { k: v } } });
        if all_ns {
            peer["namespaceSelector"] = json!({});
        }
        out.push(peer);
    }
    for l in r.refs_labeled(ns_rel) {
        let (k, v) = l.target_key.split_once('=').unwrap_or((&l.target_key, ""));
        out.push(json!({ "namespaceSelector": { "matchLabels": { k: v } } }));
    }
    let block_rel = format!("{dir}IpBlock");
    for l in r.refs_labeled(&block_rel) {
        let except_rel = format!("{dir}IpBlockExcept");
        let except: Vec<&str> = r.refs_labeled(&except_rel).map(|e| e.target_key.as_str()).collect();
        let mut block = json!({ "cidr": l.target_key });
        if !except.is_empty() {
            block["except"] = json!(except);
        }
        out.push(json!({ "ipBlock": block }));
    }
    if out.is_empty() && all_ns {
        out.push(json!({ "namespaceSelector": {} }));
    }
    out
}

/// Serializes a resource set as multi-document YAML.
pub fn write_k8s(rs: &ResourceSet) -> Result<String, WriteError> {
    let mut docs = Vec::new();
    for r in &rs.resources {
        let doc = match r.type_name.as_str() {
            "label" => continue,
            "namespace" => json!({
                "apiVersion": "v1", "kind": "Namespace",
                "metadata": metadata(r, &r.key, None, labels_map(r, "label")),
            }),
            "pod" => {
                let (ns, name) = split_key(r)?;
                json!({
                    "apiVersion": "v1", "kind": "Pod",
                    "metadata": metadata(r, name, Some(ns), labels_map(r, "label")),
                    "spec": { "containers": [{ "name": "app", "image": "registry.local/app:1.0" }] },
                })
            }
            "service" => {
                let (ns, name) = split_key(r)?;
                json!({
                    "apiVersion": "v1", "kind": "Service",
                    "metadata": metadata(r, name, Some(ns), Map::new()),
                    "spec": { "selector": labels_map(r, "selector"), "ports": [{ "port": 80 }] },
                })
            }
            "networkPolicy" => {
                let (ns, name) = split_key(r)?;
                let mut spec = Map::new();
                spec.insert("podSelector".into(), json!({ "matchLabels": labels_map(r, "podSelector") }));
                let ingress = peers(r, "ingress", "ingressFrom", "ingressNamespace");
                let egress = peers(r, "egress", "egressTo", "egressNamespace");
                if !ingress.is_empty() {
                    spec.insert("ingress".into(), json!([{ "from": ingress }]));
                }
                if !egress.is_empty() {
                    spec.insert("egress".into(), json!([{ "to": egress }]));
                }
                if let Some(types) = r.attributes.get("policyTypes") {
                    spec.insert("policyTypes".into(), json!(types.split(',').collect::<Vec<_>>()));
                }
                json!({
                    "apiVersion": "networking.k8s.io/v1", "kind": "NetworkPolicy",
                    "metadata": metadata(r, name, Some(ns), Map::new()),
                    "spec": spec,
                })
            }
            _ => return Err(WriteError::new(r, "no Kubernetes kind for this type")),
        };
        docs.push(serde_yaml::to_string(&doc).expect("json values serialize as yaml"));
    }
    Ok(docs.join("---\n"))
}
