//! Policy-fabric documents in the APIC object-tree JSON shape.
//!
//! Every node is `{"class": {"attributes": {..}, "children": [..]}}`. Relations
//! (`fvRs*`, `vzRs*`, `l3extRs*`) name their target and always become tight refs.

use serde_json::{json, Map, Value};

use super::{check_unique, Dialect, ParseError, Resource, ResourceRef, ResourceSet, WriteError};
use crate::cidr::Ipv4Prefix;

/// Containers whose children are attributed to the enclosing object.
const TRANSPARENT: &[&str] = &["polUni", "fabricInst", "fvAp", "vzSubj", "l3extLNodeP", "l3extInstP"];
/// Classes recognized but not modeled.
const IGNORED: &[&str] = &["vzEntry", "l3extLIfP", "l3extSubnet", "fvRsDomAtt"];

struct Pending {
    owner: usize,
    target_type: &'static str,
    tenant: Option<String>,
    name: String,
    relationship: &'static str,
    path: String,
}

#[derive(Default)]
struct Ctx {
    tenant: Option<String>,
    ap: Option<String>,
    owner: Option<usize>,
}

struct Walker {
    resources: Vec<Resource>,
    pending: Vec<Pending>,
    warnings: Vec<String>,
}

fn node(v: &Value) -> Option<(&str, &Map<String, Value>, &[Value])> {
    let (class, body) = v.as_object()?.iter().next()?;
    static EMPTY_MAP: std::sync::OnceLock<Map<String, Value>> = std::sync::OnceLock::new();
    let attrs = body.get("attributes").and_then(Value::as_object).unwrap_or_else(|| EMPTY_MAP.get_or_init(Map::new));
    let children = body.get("children").and_then(Value::as_array).map_or(&[][..], Vec::as_slice);
    Some((class.as_str(), attrs, children))
}

fn attr<'a>(attrs: &'a Map<String, Value>, k: &str) -> Option<&'a str> {
    attrs.get(k).and_then(Value::as_str)
}

/// Parses one policy document.
pub fn parse_aci(policy_doc: &str) -> Result<ResourceSet, ParseError> {
    let v: Value =
        serde_json::from_str(policy_doc).map_err(|e| ParseError::Syntax { doc: 0, message: e.to_string() })?;
    parse_aci_value(&v)
}

pub fn parse_aci_value(doc: &Value) -> Result<ResourceSet, ParseError> {
    let mut w = Walker { resources: Vec::new(), pending: Vec::new(), warnings: Vec::new() };
    let roots: Vec<&Value> = match doc.get("imdata").and_then(Value::as_array) {
        Some(items) => items.iter().collect(),
        None => vec![doc],
    };
    for (i, root) in roots.into_iter().enumerate() {
        w.walk(root, &Ctx::default(), format!("[{i}]"))?;
    }
    let Walker { mut resources, pending, warnings } = w;
    for p in pending {
        let candidates: Vec<String> = match (&p.tenant, p.target_type) {
            (_, "port" | "leaf") => vec![p.name.clone()],
            (Some(t), _) => vec![format!("{t}/{}", p.name), format!("common/{}", p.name)],
            (None, _) => vec![format!("common/{}", p.name)],
        };
        let found = candidates
            .iter()
            .find(|k| resources.iter().any(|r| r.type_name == p.target_type && &r.key == *k))
            .ok_or_else(|| ParseError::Unresolved { doc: 0, path: p.path.clone(), target: p.name.clone() })?;
        resources[p.owner].refs.push(ResourceRef::tight(p.target_type, found.clone(), p.relationship));
    }
    let mut rs = ResourceSet { dialect: Dialect::Aci.as_str().into(), resources, warnings };
    rs.canonicalize();
    check_unique(&rs)?;
    Ok(rs)
}

impl Walker {
    fn add(&mut self, type_name: &str, key: String, attrs: &Map<String, Value>) -> usize {
        let mut r = Resource::new(Dialect::Aci, type_name, key);
        for (k, v) in attrs {
            if k != "id" && (k != "name" || type_name == "leaf") {
                r.attributes.insert(k.clone(), v.as_str().map_or_else(|| v.to_string(), str::to_string));
            }
        }
        self.resources.push(r);
        self.resources.len() - 1
    }

    fn relate(&mut self, ctx: &Ctx, target_type: &'static str, name: String, relationship: &'static str, path: &str) {
        if let Some(owner) = ctx.owner {
            self.pending.push(Pending {
                owner,
                target_type,
                tenant: ctx.tenant.clone(),
                name,
                relationship,
                path: path.to_string(),
            });
        } else {
            self.warnings.push(format!("{path}: relation outside an object ignored"));
        }
    }

    fn walk(&mut self, v: &Value, ctx: &Ctx, path: String) -> Result<(), ParseError> {
        let field = |p: &str, m: &str| ParseError::Field { doc: 0, path: p.to_string(), message: m.to_string() };
        let (class, attrs, children) = node(v).ok_or_else(|| field(&path, "expected a {class: {...}} object"))?;
        let name = attr(attrs, "name");
        let here = format!("{path}/{class}{}", name.map(|n| format!("[{n}]")).unwrap_or_default());
        let need_name = || name.ok_or_else(|| field(&here, "missing name")).map(str::to_string);
        let scoped = |n: String| match &ctx.tenant {
            Some(t) => format!("{t}/{n}"),
            None => n,
        };
        let mut inner = Ctx { tenant: ctx.tenant.clone(), ap: ctx.ap.clone(), owner: ctx.owner };
        let target = |k: &str| attr(attrs, k).map(str::to_string).ok_or_else(|| field(&here, &format!("missing {k}")));
        match class {
            c if TRANSPARENT.contains(&c) => {
                if c == "fvAp" {
                    inner.ap = Some(need_name()?);
                }
            }
            c if IGNORED.contains(&c) => return Ok(()),
            "fvTenant" => {
                let n = need_name()?;
                inner.owner = Some(self.add("tenant", n.clone(), attrs));
                inner.tenant = Some(n);
            }
            "fvCtx" => inner.owner = Some(self.add("vrf", scoped(need_name()?), attrs)),
            "fvBD" => inner.owner = Some(self.add("bridgeDomain", scoped(need_name()?), attrs)),
            "vzBrCP" => inner.owner = Some(self.add("contract", scoped(need_name()?), attrs)),
            "vzFilter" => {
                self.add("filter", scoped(need_name()?), attrs);
                return Ok(());
            }
            "l3extOut" => inner.owner = Some(self.add("l3out", scoped(need_name()?), attrs)),
            "fvAEPg" => {
                let ap = ctx.ap.clone().unwrap_or_else(|| "default".into());
                inner.owner = Some(self.add("epg", scoped(format!("{ap}/{}", need_name()?)), attrs));
            }
            "fabricNode" => {
                let id = target("id")?;
                inner.owner = Some(self.add("leaf", id.clone(), attrs));
                inner.tenant = Some(id);
            }
            "l1PhysIf" => {
                let leaf = ctx.tenant.clone().ok_or_else(|| field(&here, "port outside a fabric node"))?;
                let idx = self.add("port", format!("{leaf}/{}", target("id")?), attrs);
                self.resources[idx].refs.push(ResourceRef::tight("leaf", leaf, "leaf"));
                return Ok(());
            }
            "fvSubnet" => {
                let ip = target("ip")?;
                let (addr, len) = ip.split_once('/').ok_or_else(|| field(&here, "subnet ip needs a prefix length"))?;
                let addr = addr.parse().map_err(|_| field(&here, &format!("invalid address `{ip}`")))?;
                let len = len.parse().map_err(|_| field(&here, &format!("invalid prefix `{ip}`")))?;
                let net = Ipv4Prefix::network_of(addr, len).map_err(|source| ParseError::Cidr {
                    doc: 0,
                    path: here.clone(),
                    source,
                })?;
                if let Some(owner) = ctx.owner {
                    let r = &mut self.resources[owner];
                    if !r.cidrs.contains(&net.to_string()) {
                        r.cidrs.push(net.to_string());
                    }
                }
                return Ok(());
            }
            "fvRsCtx" | "l3extRsEctx" => self.relate(ctx, "vrf", target("tnFvCtxName")?, "context", &here),
            "fvRsBd" => self.relate(ctx, "bridgeDomain", target("tnFvBDName")?, "bridgeDomain", &here),
            "fvRsProv" => self.relate(ctx, "contract", target("tnVzBrCPName")?, "provides", &here),
            "fvRsCons" => self.relate(ctx, "contract", target("tnVzBrCPName")?, "consumes", &here),
            "vzRsSubjFiltAtt" => self.relate(ctx, "filter", target("tnVzFilterName")?, "filter", &here),
            "fvRsPathAtt" => {
                let dn = target("tDn")?;
                let port = parse_path_dn(&dn).ok_or_else(|| field(&here, &format!("unrecognized path `{dn}`")))?;
                self.relate(ctx, "port", port, "staticPath", &here);
            }
            "l3extRsNodeL3OutAtt" => {
                let dn = target("tDn")?;
                let leaf = parse_node_dn(&dn).ok_or_else(|| field(&here, &format!("unrecognized node `{dn}`")))?;
                self.relate(ctx, "leaf", leaf, "node", &here);
            }
            other => {
                self.warnings.push(format!("{here}: unsupported class `{other}` ignored"));
                return Ok(());
            }
        }
        for (i, child) in children.iter().enumerate() {
            self.walk(child, &inner, format!("{here}[{i}]"))?;
        }
        Ok(())
    }
}

/// `topology/pod-1/paths-101/pathep-[eth1/1]` → `101/eth1/1`.
fn parse_path_dn(dn: &str) -> Option<String> {
    let rest = dn.split("/paths-").nth(1)?;
    let (node, port) = rest.split_once("/pathep-[")?;
    Some(format!("{node}/{}", port.strip_suffix(']')?))
}

/// `topology/pod-1/node-101` → `101`.
fn parse_node_dn(dn: &str) -> Option<String> {
    dn.rsplit_once("/node-").map(|(_, n)| n.to_string())
}

fn obj(class: &str, attributes: Map<String, Value>, children: Vec<Value>) -> Value {
    let mut body = Map::new();
    body.insert("attributes".into(), Value::Object(attributes));
    if !children.is_empty() {
        body.insert("children".into(), Value::Array(children));
    }
    json!({ class: body })
}

fn named(r: &Resource, name: &str) -> Map<String, Value> {
    let mut m: Map<String, Value> = r.attributes.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    m.insert("name".into(), json!(name));
    m
}

fn short(key: &str) -> &str {
    key.rsplit('/').next().unwrap_or(key)
}

fn rel(class: &str, attr_name: &str, value: &str) -> Value {
    obj(class, [(attr_name.to_string(), json!(value))].into_iter().collect(), vec![])
}

fn contract_rels(r: &Resource) -> Vec<Value> {
    let mut out = Vec::new();
    for x in r.refs_labeled("provides") {
        out.push(rel("fvRsProv", "tnVzBrCPName", short(&x.target_key)));
    }
    for x in r.refs_labeled("consumes") {
        out.push(rel("fvRsCons", "tnVzBrCPName", short(&x.target_key)));
    }
    out
}

/// Serializes a resource set as one `polUni` document.
pub fn write_aci(rs: &ResourceSet) -> Result<String, WriteError> {
    let mut top = Vec::new();
    for leaf in rs.of_type("leaf") {
        let ports: Vec<Value> = rs
            .of_type("port")
            .filter(|p| p.refs_labeled("leaf").any(|x| x.target_key == leaf.key))
            .map(|p| {
                let mut a: Map<String, Value> = p.attributes.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                a.insert("id".into(), json!(p.key.split_once('/').map_or(p.key.as_str(), |(_, id)| id)));
                obj("l1PhysIf", a, vec![])
            })
            .collect();
        let mut a: Map<String, Value> = leaf.attributes.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        a.insert("id".into(), json!(leaf.key));
        top.push(obj("fabricNode", a, ports));
    }
    for tenant in rs.of_type("tenant") {
        let t = tenant.key.as_str();
        let mine = |ty: &'static str| rs.of_type(ty).filter(move |r| r.key.split('/').next() == Some(t));
        let mut children = Vec::new();
        for r in mine("vrf") {
            children.push(obj("fvCtx", named(r, short(&r.key)), vec![]));
        }
        for r in mine("bridgeDomain") {
            let mut kids: Vec<Value> =
                r.refs_labeled("context").map(|x| rel("fvRsCtx", "tnFvCtxName", short(&x.target_key))).collect();
            kids.extend(r.cidrs.iter().map(|c| rel("fvSubnet", "ip", c)));
            children.push(obj("fvBD", named(r, short(&r.key)), kids));
        }
        for r in mine("filter") {
            children.push(obj("vzFilter", named(r, short(&r.key)), vec![]));
        }
        for r in mine("contract") {
            let filters: Vec<Value> = r
                .refs_labeled("filter")
                .map(|x| rel("vzRsSubjFiltAtt", "tnVzFilterName", short(&x.target_key)))
                .collect();
            let subj = obj("vzSubj", [("name".to_string(), json!("subject"))].into_iter().collect(), filters);
            children.push(obj("vzBrCP", named(r, short(&r.key)), vec![subj]));
        }
        let mut aps: Vec<(&str, Vec<Value>)> = Vec::new();
        for r in mine("epg") {
            let parts: Vec<&str> = r.key.splitn(3, '/').collect();
            let [_, ap, name] = parts[..] else {
                return Err(WriteError::new(r, "expected `tenant/ap/epg` key"));
            };
            let mut kids: Vec<Value> =
                r.refs_labeled("bridgeDomain").map(|x| rel("fvRsBd", "tnFvBDName", short(&x.target_key))).collect();
            kids.extend(contract_rels(r));
            for x in r.refs_labeled("staticPath") {
                let (node, port) = x.target_key.split_once('/').ok_or_else(|| WriteError::new(r, "bad port key"))?;
                kids.push(rel("fvRsPathAtt", "tDn", &format!("topology/pod-1/paths-{node}/pathep-[{port}]")));
            }
            let epg = obj("fvAEPg", named(r, name), kids);
            match aps.iter_mut().find(|(a, _)| *a == ap) {
                Some((_, v)) => v.push(epg),
                None => aps.push((ap, vec![epg])),
            }
        }
        for (ap, epgs) in aps {
            children.push(obj("fvAp", [("name".to_string(), json!(ap))].into_iter().collect(), epgs));
        }
        for r in mine("l3out") {
            let mut kids: Vec<Value> =
                r.refs_labeled("context").map(|x| rel("l3extRsEctx", "tnFvCtxName", short(&x.target_key))).collect();
            let nodes: Vec<Value> = r
                .refs_labeled("node")
                .map(|x| rel("l3extRsNodeL3OutAtt", "tDn", &format!("topology/pod-1/node-{}", x.target_key)))
                .collect();
            kids.push(obj("l3extLNodeP", [("name".to_string(), json!("nodes"))].into_iter().collect(), nodes));
            kids.push(obj("l3extInstP", [("name".to_string(), json!("ext"))].into_iter().collect(), contract_rels(r)));
            children.push(obj("l3extOut", named(r, short(&r.key)), kids));
        }
        top.push(obj("fvTenant", named(tenant, t), children));
    }
    for r in &rs.resources {
        if !matches!(
            r.type_name.as_str(),
            "leaf" | "port" | "tenant" | "vrf" | "bridgeDomain" | "filter" | "contract" | "epg" | "l3out"
        ) {
            return Err(WriteError::new(r, "no ACI class for this type"));
        }
    }
    let doc = obj("polUni", Map::new(), top);
    Ok(serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n")
}
