//! Azure resource exports (ARM JSON).
//!
//! Accepted shapes per document: a resource object, an array of resources, or an
//! object with a `resources` array. Child resources may be flat (`vnet/subnet`
//! names) or nested under their parent's properties. Id references become tight
//! refs; IPv4 strings become loose literal refs; service tags are skipped.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Map, Value};

use super::{check_unique, Dialect, ParseError, Resource, ResourceRef, ResourceSet, WriteError};
use crate::cidr::{looks_like_ipv4, Ipv4Prefix};

const SUBSCRIPTION: &str = "00000000-0000-0000-0000-000000000000";
const RESOURCE_GROUP: &str = "netcx";

struct ArmType {
    type_name: &'static str,
    arm: &'static str,
    parent: Option<&'static str>,
}

const ARM_TYPES: &[ArmType] = &[
    ArmType { type_name: "vnet", arm: "Microsoft.Network/virtualNetworks", parent: None },
    ArmType { type_name: "subnet", arm: "Microsoft.Network/virtualNetworks/subnets", parent: Some("vnet") },
    ArmType {
        type_name: "peering",
        arm: "Microsoft.Network/virtualNetworks/virtualNetworkPeerings",
        parent: Some("vnet"),
    },
    ArmType { type_name: "vm", arm: "Microsoft.Compute/virtualMachines", parent: None },
    ArmType { type_name: "nic", arm: "Microsoft.Network/networkInterfaces", parent: None },
    ArmType { type_name: "ipconfig", arm: "Microsoft.Network/networkInterfaces/ipConfigurations", parent: Some("nic") },
    ArmType { type_name: "publicIp", arm: "Microsoft.Network/publicIPAddresses", parent: None },
    ArmType { type_name: "firewall", arm: "Microsoft.Network/azureFirewalls", parent: None },
    ArmType { type_name: "firewallPolicy", arm: "Microsoft.Network/firewallPolicies", parent: None },
    ArmType {
        type_name: "ruleCollection",
        arm: "Microsoft.Network/firewallPolicies/ruleCollectionGroups",
        parent: Some("firewallPolicy"),
    },
    ArmType {
        type_name: "fwRule",
        arm: "Microsoft.Network/firewallPolicies/ruleCollectionGroups/rules",
        parent: Some("ruleCollection"),
    },
    ArmType { type_name: "ipGroup", arm: "Microsoft.Network/ipGroups", parent: None },
    ArmType { type_name: "routeTable", arm: "Microsoft.Network/routeTables", parent: None },
    ArmType { type_name: "route", arm: "Microsoft.Network/routeTables/routes", parent: Some("routeTable") },
    ArmType { type_name: "nsg", arm: "Microsoft.Network/networkSecurityGroups", parent: None },
    ArmType { type_name: "nsgRule", arm: "Microsoft.Network/networkSecurityGroups/securityRules", parent: Some("nsg") },
    ArmType { type_name: "asg", arm: "Microsoft.Network/applicationSecurityGroups", parent: None },
];

/// Nested child collections: (parent type, path under properties, child type).
const NESTED: &[(&str, &str, &str)] = &[
    ("vnet", "subnets", "subnet"),
    ("vnet", "virtualNetworkPeerings", "peering"),
    ("nic", "ipConfigurations", "ipconfig"),
    ("routeTable", "routes", "route"),
    ("nsg", "securityRules", "nsgRule"),
    ("ruleCollection", "ruleCollections[].rules", "fwRule"),
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// `{"id": ...}` object reference.
    Ref,
    /// Bare id string reference.
    RefStr,
    /// IPv4 string typed by the operator.
    Lit,
    /// Address assigned by the platform: recorded, no edge.
    Declared,
    /// `privateIPAddress`: literal when Static, declared otherwise.
    PrivateIp,
}

struct Field {
    label: &'static str,
    path: &'static str,
    kind: Kind,
    many: bool,
}

const fn f(label: &'static str, path: &'static str, kind: Kind, many: bool) -> Field {
    Field { label, path, kind, many }
}

fn fields(type_name: &str) -> &'static [Field] {
    use Kind::*;
    match type_name {
        "vnet" => const { &[f("addressPrefix", "addressSpace.addressPrefixes", Lit, true)] },
        "subnet" => {
            const {
                &[
                    f("addressPrefix", "addressPrefix", Lit, false),
                    f("addressPrefix", "addressPrefixes", Lit, true),
                    f("networkSecurityGroup", "networkSecurityGroup", Ref, false),
                    f("routeTable", "routeTable", Ref, false),
                ]
            }
        }
        "peering" => const { &[f("remoteVirtualNetwork", "remoteVirtualNetwork", Ref, false)] },
        "vm" => const { &[f("networkInterface", "networkProfile.networkInterfaces", Ref, true)] },
        "nic" => const { &[f("networkSecurityGroup", "networkSecurityGroup", Ref, false)] },
        "ipconfig" => {
            const {
                &[
                    f("subnet", "subnet", Ref, false),
                    f("publicIPAddress", "publicIPAddress", Ref, false),
                    f("applicationSecurityGroup", "applicationSecurityGroups", Ref, true),
                    f("privateIPAddress", "privateIPAddress", PrivateIp, false),
                ]
            }
        }
        "publicIp" => const { &[f("ipAddress", "ipAddress", Declared, false)] },
        "firewall" => {
            const {
                &[
                    f("subnet", "ipConfigurations[].properties.subnet", Ref, false),
                    f("publicIPAddress", "ipConfigurations[].properties.publicIPAddress", Ref, false),
                    f("firewallPolicy", "firewallPolicy", Ref, false),
                    f("privateIPAddress", "ipConfigurations[].properties.privateIPAddress", Declared, false),
                ]
            }
        }
        "fwRule" => {
            const {
                &[
                    f("sourceIpGroup", "sourceIpGroups", RefStr, true),
                    f("destinationIpGroup", "destinationIpGroups", RefStr, true),
                    f("sourceAddress", "sourceAddresses", Lit, true),
                    f("destinationAddress", "destinationAddresses", Lit, true),
                ]
            }
        }
        "ipGroup" => const { &[f("ipAddress", "ipAddresses", Lit, true)] },
        "route" => {
            const {
                &[
                    f("addressPrefix", "addressPrefix", Lit, false),
                    f("nextHopIpAddress", "nextHopIpAddress", Lit, false),
                    f("nextHop", "nextHopResource", Ref, false),
                ]
            }
        }
        "nsgRule" => {
            const {
                &[
                    f("sourceAddressPrefix", "sourceAddressPrefix", Lit, false),
                    f("sourceAddressPrefix", "sourceAddressPrefixes", Lit, true),
                    f("destinationAddressPrefix", "destinationAddressPrefix", Lit, false),
                    f("destinationAddressPrefix", "destinationAddressPrefixes", Lit, true),
                    f("sourceApplicationSecurityGroup", "sourceApplicationSecurityGroups", Ref, true),
                    f("destinationApplicationSecurityGroup", "destinationApplicationSecurityGroups", Ref, true),
                ]
            }
        }
        _ => const { &[] },
    }
}

fn arm_type_by_name(type_name: &str) -> Option<&'static ArmType> {
    ARM_TYPES.iter().find(|t| t.type_name == type_name)
}

fn arm_type_by_arm(arm: &str) -> Option<&'static ArmType> {
    ARM_TYPES.iter().find(|t| t.arm.eq_ignore_ascii_case(arm))
}

/// Canonical resource id for a (type, key) pair; key segments are separated by `/`.
pub fn arm_id(type_name: &str, key: &str) -> Option<String> {
    let t = arm_type_by_name(type_name)?;
    let mut segs = t.arm.split('/');
    let namespace = segs.next()?;
    let types: Vec<&str> = segs.collect();
    let names: Vec<&str> = key.split('/').collect();
    if types.len() != names.len() {
        return None;
    }
    let mut id = format!("/subscriptions/{SUBSCRIPTION}/resourceGroups/{RESOURCE_GROUP}/providers/{namespace}");
    for (t, n) in types.iter().zip(names) {
        id.push('/');
        id.push_str(t);
        id.push('/');
        id.push_str(n);
    }
    Some(id)
}

/// Ids match on the provider path, case-insensitively.
fn normalize_id(id: &str) -> String {
    let lower = id.trim().trim_end_matches('/').to_ascii_lowercase();
    match lower.find("/providers/") {
        Some(pos) => lower[pos..].to_string(),
        None => lower,
    }
}

struct Raw<'a> {
    type_name: &'static str,
    key: String,
    doc: usize,
    path: String,
    props: &'a Value,
    /// Nested children without a `properties` wrapper carry their fields inline.
    inline: bool,
    id: Option<String>,
}

/// Collects values at a dotted path; `seg[]` iterates arrays; leaf arrays are flattened.
fn collect<'a>(v: &'a Value, segs: &[&str], path: String, out: &mut Vec<(&'a Value, String)>) {
    let Some((head, rest)) = segs.split_first() else {
        match v {
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    out.push((item, format!("{path}[{i}]")));
                }
            }
            Value::Null => {}
            other => out.push((other, path)),
        }
        return;
    };
    let (name, iterate) = match head.strip_suffix("[]") {
        Some(n) => (n, true),
        None => (*head, false),
    };
    let Some(next) = v.get(name) else { return };
    let next_path = format!("{path}.{name}");
    if iterate {
        if let Value::Array(items) = next {
            for (i, item) in items.iter().enumerate() {
                collect(item, rest, format!("{next_path}[{i}]"), out);
            }
        }
    } else {
        collect(next, rest, next_path, out);
    }
}

fn split_path(p: &str) -> Vec<&str> {
    p.split('.').collect()
}

fn props_of(obj: &Value) -> (&Value, bool) {
    match obj.get("properties") {
        Some(p) if p.is_object() => (p, false),
        _ => (obj, true),
    }
}

/// Parses Azure documents (JSON text) into a resource set.
pub fn parse_azure(documents: &[&str]) -> Result<ResourceSet, ParseError> {
    let values = documents
        .iter()
        .enumerate()
        .map(|(doc, text)| {
            serde_json::from_str::<Value>(text).map_err(|e| ParseError::Syntax { doc, message: e.to_string() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    parse_azure_values(&values)
}

pub fn parse_azure_values(documents: &[Value]) -> Result<ResourceSet, ParseError> {
    let mut rs = ResourceSet::new(Dialect::Azure);
    let mut raws: Vec<Raw> = Vec::new();
    for (doc, value) in documents.iter().enumerate() {
        let top: Vec<(&Value, String)> = match value {
            Value::Array(items) => items.iter().enumerate().map(|(i, v)| (v, format!("[{i}]"))).collect(),
            Value::Object(m) if m.get("resources").is_some_and(Value::is_array) => m["resources"]
                .as_array()
                .unwrap()
                .iter()
                .enumerate()
                .map(|(i, v)| (v, format!("resources[{i}]")))
                .collect(),
            Value::Object(m) if m.contains_key("type") => vec![(value, "$".to_string())],
            _ => {
                return Err(ParseError::Syntax {
                    doc,
                    message: "expected a resource, an array of resources or an object with `resources`".into(),
                })
            }
        };
        for (obj, path) in top {
            collect_resource(doc, obj, path, &mut raws, &mut rs.warnings)?;
        }
    }

    let mut ids: HashMap<String, (&'static str, String)> = HashMap::new();
    for r in &raws {
        let canonical = arm_id(r.type_name, &r.key).expect("key depth checked");
        ids.insert(normalize_id(&canonical), (r.type_name, r.key.clone()));
        if let Some(id) = &r.id {
            ids.insert(normalize_id(id), (r.type_name, r.key.clone()));
        }
    }

    for raw in &raws {
        let r = convert(raw, &ids, &mut rs.warnings)?;
        rs.push(r);
    }
    rs.canonicalize();
    check_unique(&rs)?;
    Ok(rs)
}

fn collect_resource<'a>(
    doc: usize,
    obj: &'a Value,
    path: String,
    raws: &mut Vec<Raw<'a>>,
    warnings: &mut Vec<String>,
) -> Result<(), ParseError> {
    let field_err = |p: &str, message: String| ParseError::Field { doc, path: p.to_string(), message };
    let arm = obj.get("type").and_then(Value::as_str).ok_or_else(|| field_err(&path, "missing `type`".into()))?;
    let name = obj.get("name").and_then(Value::as_str).ok_or_else(|| field_err(&path, "missing `name`".into()))?;
    let Some(t) = arm_type_by_arm(arm) else {
        warnings.push(format!("document {doc}, {path}: unsupported resource type `{arm}` ignored"));
        return Ok(());
    };
    if arm_id(t.type_name, name).is_none() {
        return Err(field_err(&path, format!("name `{name}` does not match the segments of `{arm}`")));
    }
    let (props, inline) = props_of(obj);
    push_raw(doc, t.type_name, name.to_string(), obj, props, inline, path, raws)
}

#[allow(clippy::too_many_arguments)]
fn push_raw<'a>(
    doc: usize,
    type_name: &'static str,
    key: String,
    obj: &'a Value,
    props: &'a Value,
    inline: bool,
    path: String,
    raws: &mut Vec<Raw<'a>>,
) -> Result<(), ParseError> {
    for &(parent, child_path, child_type) in NESTED {
        if parent != type_name {
            continue;
        }
        let mut children = Vec::new();
        collect(props, &split_path(child_path), format!("{path}.properties"), &mut children);
        for (child, cpath) in children {
            let name = child.get("name").and_then(Value::as_str).ok_or_else(|| ParseError::Field {
                doc,
                path: cpath.clone(),
                message: "nested resource without `name`".into(),
            })?;
            let (cprops, cinline) = props_of(child);
            push_raw(doc, child_type, format!("{key}/{name}"), child, cprops, cinline, cpath, raws)?;
        }
    }
    raws.push(Raw {
        type_name,
        key,
        doc,
        path,
        props,
        inline,
        id: obj.get("id").and_then(Value::as_str).map(str::to_string),
    });
    Ok(())
}

fn convert(
    raw: &Raw,
    ids: &HashMap<String, (&'static str, String)>,
    warnings: &mut Vec<String>,
) -> Result<Resource, ParseError> {
    let doc = raw.doc;
    let mut res = Resource::new(Dialect::Azure, raw.type_name, raw.key.clone());
    let t = arm_type_by_name(raw.type_name).expect("known type");
    if let Some(parent) = t.parent {
        let (parent_key, _) = raw.key.rsplit_once('/').expect("child keys have a parent segment");
        res.refs.push(ResourceRef::tight(parent, parent_key, "parent"));
    }

    let resolve = |target: &str, path: &str| -> Result<ResourceRef, ParseError> {
        ids.get(&normalize_id(target)).map(|(tt, tk)| (*tt, tk.clone())).map_or_else(
            || Err(ParseError::Unresolved { doc, path: path.to_string(), target: target.to_string() }),
            |(tt, tk)| Ok(ResourceRef::tight(tt, tk, "")),
        )
    };
    let prefix = |s: &str, path: &str| -> Result<String, ParseError> {
        s.parse::<Ipv4Prefix>().map(|p| p.to_string()).map_err(|source| ParseError::Cidr {
            doc,
            path: path.to_string(),
            source,
        })
    };

    let base = format!("{}.properties", raw.path);
    let static_ip = raw
        .props
        .get("privateIPAllocationMethod")
        .and_then(Value::as_str)
        .is_some_and(|m| m.eq_ignore_ascii_case("static"));
    let mut consumed: Vec<&str> = vec!["privateIPAllocationMethod"];
    for field in fields(raw.type_name) {
        consumed.push(field.path.split(['.', '[']).next().unwrap());
        let mut found = Vec::new();
        collect(raw.props, &split_path(field.path), base.clone(), &mut found);
        for (value, path) in found {
            match field.kind {
                Kind::Ref | Kind::RefStr => {
                    let id = value.as_str().or_else(|| value.get("id").and_then(Value::as_str)).ok_or_else(|| {
                        ParseError::Field { doc, path: path.clone(), message: "expected an id reference".into() }
                    })?;
                    let mut r = resolve(id, &path)?;
                    r.relationship = field.label.to_string();
                    res.refs.push(r);
                }
                Kind::Lit | Kind::Declared | Kind::PrivateIp => {
                    let Some(s) = value.as_str() else {
                        return Err(ParseError::Field { doc, path, message: "expected an address string".into() });
                    };
                    if !looks_like_ipv4(s) {
                        continue;
                    }
                    let cidr = prefix(s, &path)?;
                    let cited = field.kind == Kind::Lit || (field.kind == Kind::PrivateIp && static_ip);
                    res = if cited { res.cite(cidr, field.label) } else { res.declare(cidr) };
                }
            }
        }
    }
    for &(parent, child_path, _) in NESTED {
        if parent == raw.type_name {
            consumed.push(child_path.split(['.', '[']).next().unwrap());
        }
    }
    if raw.inline {
        consumed.extend(["name", "id", "type"]);
    }
    if let Value::Object(map) = raw.props {
        for (k, v) in map {
            if consumed.contains(&k.as_str()) {
                continue;
            }
            match v {
                Value::String(s) => {
                    res.attributes.insert(k.clone(), s.clone());
                }
                Value::Bool(_) | Value::Number(_) => {
                    res.attributes.insert(k.clone(), v.to_string());
                }
                Value::Null => {}
                _ => warnings.push(format!("document {doc}, {base}.{k}: unsupported field ignored")),
            }
        }
    }
    Ok(res)
}

/// Inserts `leaf` at a dotted path, creating objects and single-element arrays.
fn set_path(root: &mut Map<String, Value>, path: &str, leaf: Value) {
    let segs = split_path(path);
    let mut cur = root;
    for (i, seg) in segs.iter().enumerate() {
        let last = i + 1 == segs.len();
        match seg.strip_suffix("[]") {
            Some(name) => {
                let arr = cur.entry(name).or_insert_with(|| Value::Array(vec![json!({"name": "ipconfig1"})]));
                let first = arr.as_array_mut().unwrap().first_mut().unwrap();
                cur = first.as_object_mut().unwrap();
            }
            None if last => {
                cur.insert(seg.to_string(), leaf);
                return;
            }
            None => {
                cur = cur.entry(*seg).or_insert_with(|| json!({})).as_object_mut().unwrap();
            }
        }
    }
}

/// Serializes a resource set as an ARM-style `{"resources": [...]}` document.
pub fn write_azure(rs: &ResourceSet) -> Result<String, WriteError> {
    let mut out = Vec::new();
    for r in &rs.resources {
        let t = arm_type_by_name(&r.type_name).ok_or_else(|| WriteError::new(r, "no ARM type"))?;
        let id = arm_id(&r.type_name, &r.key).ok_or_else(|| WriteError::new(r, "key does not fit the ARM type"))?;
        let mut props = Map::new();
        for (k, v) in &r.attributes {
            props.insert(k.clone(), Value::String(v.clone()));
        }
        let mut grouped: BTreeMap<&str, Vec<&ResourceRef>> = BTreeMap::new();
        for rf in r.refs.iter().filter(|rf| rf.relationship != "parent" || t.parent.is_none()) {
            grouped.entry(rf.relationship.as_str()).or_default().push(rf);
        }
        let table = fields(&r.type_name);
        for (label, refs) in grouped {
            let candidates: Vec<&Field> =
                table.iter().filter(|f| f.label == label && f.kind != Kind::Declared).collect();
            let field = candidates
                .iter()
                .find(|f| f.many == (refs.len() > 1))
                .or_else(|| candidates.iter().find(|f| f.many))
                .or_else(|| candidates.first())
                .ok_or_else(|| WriteError::new(r, format!("no property for relationship `{label}`")))?;
            let to_value = |rf: &ResourceRef| -> Result<Value, WriteError> {
                Ok(match field.kind {
                    Kind::Ref | Kind::RefStr => {
                        let id = arm_id(&rf.target_type, &rf.target_key)
                            .ok_or_else(|| WriteError::new(r, format!("cannot address {}", rf.target_type)))?;
                        if field.kind == Kind::Ref {
                            json!({ "id": id })
                        } else {
                            Value::String(id)
                        }
                    }
                    _ => Value::String(rf.target_key.clone()),
                })
            };
            let values = refs.iter().map(|rf| to_value(rf)).collect::<Result<Vec<_>, _>>()?;
            if field.kind == Kind::PrivateIp {
                props.insert("privateIPAllocationMethod".into(), json!("Static"));
            }
            let leaf = if field.many { Value::Array(values) } else { values.into_iter().next().unwrap() };
            set_path(&mut props, field.path, leaf);
        }
        let cited: Vec<&str> = r.refs.iter().filter(|rf| rf.is_literal()).map(|rf| rf.target_key.as_str()).collect();
        for cidr in r.cidrs.iter().filter(|c| !cited.contains(&c.as_str())) {
            let field = table
                .iter()
                .find(|f| matches!(f.kind, Kind::Declared | Kind::PrivateIp))
                .ok_or_else(|| WriteError::new(r, format!("cannot express declared prefix {cidr}")))?;
            if props.contains_key(field.path) {
                return Err(WriteError::new(r, "more than one declared address"));
            }
            if field.kind == Kind::PrivateIp {
                props.insert("privateIPAllocationMethod".into(), json!("Dynamic"));
            }
            let addr = cidr.strip_suffix("/32").unwrap_or(cidr);
            set_path(&mut props, field.path, Value::String(addr.to_string()));
        }
        out.push(json!({ "type": t.arm, "name": r.key, "id": id, "properties": Value::Object(props) }));
    }
    let doc = json!({ "resources": out });
    Ok(serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::build_graph;
    use crate::metrics::ip_excess_degree;
    use crate::taxonomy::Taxonomy;

    #[test]
    fn vnet_subnet_route_fixture() {
        let doc = r#"{"resources": [
          {"type": "Microsoft.Network/virtualNetworks", "name": "v", "location": "westeurope",
           "properties": {"addressSpace": {"addressPrefixes": ["10.0.0.0/16"]},
             "subnets": [{"name": "s", "properties": {"addressPrefix": "10.0.1.0/24"}}]}},
          {"type": "Microsoft.Network/routeTables", "name": "rt",
           "properties": {"routes": [{"name": "r", "properties": {"addressPrefix": "10.0.1.0/24",
             "nextHopType": "VirtualAppliance", "nextHopIpAddress": "10.0.0.4"}}]}}
        ]}"#;
        let rs = parse_azure(&[doc]).unwrap();
        let types: Vec<&str> = rs.resources.iter().map(|r| r.type_name.as_str()).collect();
        assert_eq!(types, ["route", "routeTable", "subnet", "vnet"]);
        let route = rs.get("route", "rt/r").unwrap();
        assert_eq!(route.attributes["nextHopType"], "VirtualAppliance");
        let g = build_graph(&rs, &Taxonomy::builtin()).unwrap();
        // 10.0.1.0/24 cited by subnet and route; 10.0.0.4/32 once; 10.0.0.0/16 once.
        assert_eq!(ip_excess_degree(&g), 1);
    }

    #[test]
    fn empty_and_errors() {
        assert!(parse_azure(&[]).unwrap().is_empty());
        assert!(matches!(parse_azure(&["{"]), Err(ParseError::Syntax { doc: 0, .. })));
        let dangling = r#"[{"type": "Microsoft.Network/networkInterfaces", "name": "n",
            "properties": {"networkSecurityGroup": {"id": "/subscriptions/x/resourceGroups/y/providers/Microsoft.Network/networkSecurityGroups/missing"}}}]"#;
        assert!(matches!(parse_azure(&["[]", dangling]), Err(ParseError::Unresolved { doc: 1, .. })));
        let bad_ip =
            r#"[{"type": "Microsoft.Network/ipGroups", "name": "g", "properties": {"ipAddresses": ["10.0.0.1/24"]}}]"#;
        let err = parse_azure(&[bad_ip]).unwrap_err();
        assert!(err.to_string().contains("10.0.0.1/24"), "{err}");
        let no_name = r#"[{"type": "Microsoft.Network/ipGroups"}]"#;
        assert!(matches!(parse_azure(&[no_name]), Err(ParseError::Field { .. })));
    }

    #[test]
    fn service_tags_and_unknown_types() {
        let doc = r#"[
          {"type": "Microsoft.Network/networkSecurityGroups", "name": "n", "properties": {"securityRules": [
            {"name": "r", "properties": {"sourceAddressPrefix": "VirtualNetwork", "destinationAddressPrefix": "*",
              "priority": 100, "access": "Allow", "tags": {"a": "b"}}}]}},
          {"type": "Microsoft.Storage/storageAccounts", "name": "st"}
        ]"#;
        let rs = parse_azure(&[doc]).unwrap();
        let rule = rs.get("nsgRule", "n/r").unwrap();
        assert_eq!(rule.refs.len(), 1);
        assert_eq!(rule.attributes["priority"], "100");
        assert_eq!(rs.warnings.len(), 2);
    }

    #[test]
    fn dynamic_vs_static_private_ip() {
        let doc = r#"[
          {"type": "Microsoft.Network/networkInterfaces", "name": "n", "properties": {"ipConfigurations": [
            {"name": "a", "properties": {"privateIPAllocationMethod": "Dynamic", "privateIPAddress": "10.1.1.4"}},
            {"name": "b", "properties": {"privateIPAllocationMethod": "Static", "privateIPAddress": "10.1.1.5"}}]}}
        ]"#;
        let rs = parse_azure(&[doc]).unwrap();
        let a = rs.get("ipconfig", "n/a").unwrap();
        assert_eq!(a.cidrs, ["10.1.1.4/32"]);
        assert_eq!(a.refs.len(), 1);
        let b = rs.get("ipconfig", "n/b").unwrap();
        assert_eq!(b.refs.len(), 2);
    }

    #[test]
    fn order_independent() {
        let a = r#"{"type": "Microsoft.Network/virtualNetworks", "name": "v", "properties": {"addressSpace": {"addressPrefixes": ["10.0.0.0/16"]}}}"#;
        let b = r#"{"type": "Microsoft.Network/virtualNetworks/subnets", "name": "v/s", "properties": {"addressPrefix": "10.0.0.0/24"}}"#;
        assert_eq!(parse_azure(&[a, b]).unwrap(), parse_azure(&[b, a]).unwrap());
    }
}
