//! Line-oriented switch configurations, one file per switch.
//!
//! Recognized: `hostname`, `vlan`, `interface` blocks (switchport, ip address,
//! ip access-group), `ip route`, named and numbered access lists. Anything else
//! is skipped with a warning.

use std::collections::BTreeMap;
use std::net::Ipv4Addr;

use super::{check_unique, Dialect, ParseError, Resource, ResourceRef, ResourceSet, WriteError};
use crate::cidr::Ipv4Prefix;

const SILENT: &[&str] = &["end", "version", "ip routing", "no ip domain-lookup"];

enum Block {
    None,
    Interface(Resource),
    Acl(Resource),
    Vlan,
}

fn line_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line { line, message: message.into() }
}

fn ip(line: usize, s: &str) -> Result<Ipv4Addr, ParseError> {
    s.parse().map_err(|_| line_err(line, format!("invalid IPv4 address `{s}`")))
}

/// Expands `10,20-22` into individual VLAN ids.
pub fn vlan_list(line: usize, s: &str) -> Result<Vec<u16>, ParseError> {
    let mut out = Vec::new();
    let num = |t: &str| {
        t.trim()
            .parse::<u16>()
            .ok()
            .filter(|v| (1..=4094).contains(v))
            .ok_or_else(|| line_err(line, format!("invalid VLAN id `{t}`")))
    };
    for part in s.split(',') {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(line_err(line, format!("invalid VLAN range `{part}`")));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    Ok(out)
}

/// Reads one address operand of an ACL entry; returns the prefix (None for `any`) and tokens used.
fn address_operand(line: usize, toks: &[&str]) -> Result<(Option<Ipv4Prefix>, usize), ParseError> {
    match toks {
        ["any", ..] => Ok((None, 1)),
        ["host", a, ..] => Ok((Some(Ipv4Prefix::new(ip(line, a)?, 32).expect("/32 is valid")), 2)),
        [a, ..] if a.contains('/') => {
            let p = a.parse().map_err(|e| line_err(line, format!("{e}")))?;
            Ok((Some(p), 1))
        }
        [a, w, ..] if w.parse::<Ipv4Addr>().is_ok() => {
            let len = Ipv4Prefix::wildcard_len(ip(line, w)?)
                .ok_or_else(|| line_err(line, format!("non-contiguous wildcard `{w}`")))?;
            let p = Ipv4Prefix::new(ip(line, a)?, len).map_err(|e| line_err(line, format!("{e}")))?;
            Ok((Some(p), 2))
        }
        [a, ..] => Ok((Some(Ipv4Prefix::new(ip(line, a)?, 32).expect("/32 is valid")), 1)),
        [] => Err(line_err(line, "missing address operand")),
    }
}

fn port_operand(toks: &[&str]) -> usize {
    match toks {
        ["eq" | "neq" | "gt" | "lt", _, ..] => 2,
        ["range", _, _, ..] => 3,
        _ => 0,
    }
}

/// Literal references cited by one ACL entry (`permit ...`/`deny ...`, optional sequence number).
pub fn acl_entry_refs(line: usize, entry: &str, extended: bool) -> Result<Vec<ResourceRef>, ParseError> {
    let mut toks: Vec<&str> = entry.split_whitespace().collect();
    if toks.first().is_some_and(|t| t.bytes().all(|b| b.is_ascii_digit())) {
        toks.remove(0);
    }
    match toks.first() {
        Some(&"remark") => return Ok(Vec::new()),
        Some(&("permit" | "deny")) => {}
        _ => return Err(line_err(line, format!("expected permit, deny or remark in `{entry}`"))),
    }
    let mut refs = Vec::new();
    if extended {
        if toks.len() < 4 {
            return Err(line_err(line, format!("incomplete extended entry `{entry}`")));
        }
        let mut i = 2;
        for role in ["source", "destination"] {
            let (p, used) = address_operand(line, &toks[i..])?;
            i += used;
            i += port_operand(&toks[i.min(toks.len())..]);
            if let Some(p) = p {
                refs.push(ResourceRef::literal(p.to_string(), role));
            }
        }
    } else if let (Some(p), _) = address_operand(line, &toks[1..])? {
        refs.push(ResourceRef::literal(p.to_string(), "source"));
    }
    Ok(refs)
}

/// Refs for `ip route PREFIX MASK NEXTHOP [distance]` (tokens after `ip route`).
pub fn route_refs(line: usize, args: &str) -> Result<Vec<ResourceRef>, ParseError> {
    let toks: Vec<&str> = args.split_whitespace().collect();
    let [net, mask, hop, ..] = toks[..] else {
        return Err(line_err(line, format!("incomplete static route `{args}`")));
    };
    let len =
        Ipv4Prefix::mask_len(ip(line, mask)?).ok_or_else(|| line_err(line, format!("non-contiguous mask `{mask}`")))?;
    let prefix = Ipv4Prefix::new(ip(line, net)?, len).map_err(|e| line_err(line, e.to_string()))?;
    let mut refs = vec![ResourceRef::literal(prefix.to_string(), "staticRoute")];
    if let Ok(nh) = hop.parse::<Ipv4Addr>() {
        refs.push(ResourceRef::literal(Ipv4Prefix::new(nh, 32).expect("/32").to_string(), "nextHop"));
    }
    Ok(refs)
}

fn attr_seq(r: &Resource, prefix: &str) -> String {
    format!("{prefix}{:04}", r.attributes.keys().filter(|k| k.starts_with(prefix)).count() + 1)
}

/// Parses the configuration of a single switch.
pub fn parse_cli(config_text: &str, switch: &str) -> Result<ResourceSet, ParseError> {
    let mut rs = ResourceSet::new(Dialect::Cli);
    let mut sw = Resource::new(Dialect::Cli, "switch", switch);
    let mut vlans: Vec<u16> = Vec::new();
    let mut acls: BTreeMap<String, Resource> = BTreeMap::new();
    let mut interfaces: Vec<Resource> = Vec::new();
    let mut block = Block::None;

    let close = |block: &mut Block, interfaces: &mut Vec<Resource>, acls: &mut BTreeMap<String, Resource>| {
        match std::mem::replace(block, Block::None) {
            Block::Interface(r) => interfaces.push(r),
            Block::Acl(r) => {
                acls.insert(r.key.clone(), r);
            }
            Block::None | Block::Vlan => {}
        }
    };

    for (idx, raw) in config_text.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim_end();
        let trimmed = text.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('!') {
            continue;
        }
        let indented = text.len() != trimmed.len();
        if indented {
            match &mut block {
                Block::Interface(r) => interface_line(line, trimmed, switch, r, &mut rs.warnings)?,
                Block::Acl(r) => {
                    let extended = r.attributes.get("kind").is_some_and(|k| k == "extended");
                    let refs = acl_entry_refs(line, trimmed, extended)?;
                    if !trimmed.split_whitespace().any(|t| t == "remark") {
                        let key = attr_seq(r, "entry.");
                        r.attributes.insert(key, trimmed.to_string());
                    }
                    r.refs.extend(refs);
                }
                Block::Vlan => {}
                Block::None => rs.warnings.push(format!("line {line}: indented line outside a block ignored")),
            }
            continue;
        }
        close(&mut block, &mut interfaces, &mut acls);
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        match toks[..] {
            ["hostname", name] => {
                if name != switch {
                    rs.warnings.push(format!("line {line}: hostname `{name}` differs from file name `{switch}`"));
                }
            }
            ["vlan", list] => {
                vlans.extend(vlan_list(line, list)?);
                block = Block::Vlan;
            }
            ["interface", name] => {
                let key = format!("{switch}/{name}");
                let r = match name.strip_prefix("Vlan").or_else(|| name.strip_prefix("vlan")) {
                    Some(id) => {
                        let id = vlan_list(line, id)?;
                        Resource::new(Dialect::Cli, "svi", key).loose("vlan", id[0].to_string(), "vlan")
                    }
                    None => Resource::new(Dialect::Cli, "port", key),
                };
                block = Block::Interface(r.tight("switch", switch, "switch"));
            }
            ["ip", "route", ..] => {
                let args = toks[2..].join(" ");
                sw.refs.extend(route_refs(line, &args)?);
                let key = attr_seq(&sw, "route.");
                sw.attributes.insert(key, args);
            }
            ["ip", "access-list", kind @ ("extended" | "standard"), name] => {
                let key = format!("{switch}/{name}");
                let r = acls.remove(&key).unwrap_or_else(|| Resource::new(Dialect::Cli, "acl", key).attr("kind", kind));
                block = Block::Acl(r);
            }
            ["ip", "access-list", ..] => {
                return Err(line_err(line, format!("malformed access-list header `{trimmed}`")))
            }
            ["access-list", number, ..] => {
                let n: u32 = number.parse().map_err(|_| line_err(line, format!("invalid ACL number `{number}`")))?;
                let extended = (100..=199).contains(&n) || (2000..=2699).contains(&n);
                let entry = toks[2..].join(" ");
                let refs = acl_entry_refs(line, &entry, extended)?;
                let key = format!("{switch}/{number}");
                let r = acls.entry(key.clone()).or_insert_with(|| {
                    Resource::new(Dialect::Cli, "acl", key)
                        .attr("kind", if extended { "numbered-extended" } else { "numbered-standard" })
                });
                let seq = attr_seq(r, "entry.");
                r.attributes.insert(seq, entry);
                r.refs.extend(refs);
            }
            _ if SILENT.iter().any(|s| trimmed.starts_with(s)) => {}
            _ => rs.warnings.push(format!("line {line}: unsupported command `{trimmed}` ignored")),
        }
    }
    close(&mut block, &mut interfaces, &mut acls);

    vlans.sort_unstable();
    vlans.dedup();
    for v in &vlans {
        sw = sw.loose("vlan", v.to_string(), "vlanDatabase");
        rs.push(Resource::new(Dialect::Cli, "vlan", v.to_string()));
    }
    for r in &interfaces {
        for acl in r.refs.iter().filter(|x| x.target_type == "acl") {
            if !acls.contains_key(&acl.target_key) {
                rs.warnings.push(format!("access list `{}` is applied but never defined", acl.target_key));
            }
        }
    }
    rs.push(sw);
    rs.resources.extend(interfaces);
    rs.resources.extend(acls.into_values());
    rs.canonicalize();
    check_unique(&rs)?;
    Ok(rs)
}

fn interface_line(
    line: usize,
    text: &str,
    switch: &str,
    r: &mut Resource,
    warnings: &mut Vec<String>,
) -> Result<(), ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    match toks[..] {
        ["description", ..] => {
            r.attributes.insert("description".into(), toks[1..].join(" "));
        }
        ["switchport", "mode", mode] => {
            r.attributes.insert("mode".into(), mode.into());
        }
        ["switchport", "access", "vlan", v] => {
            let v = vlan_list(line, v)?;
            r.refs.push(ResourceRef::loose("vlan", v[0].to_string(), "accessVlan"));
        }
        ["switchport", "trunk", "allowed", "vlan", list] => {
            for v in vlan_list(line, list)? {
                r.refs.push(ResourceRef::loose("vlan", v.to_string(), "trunkVlan"));
            }
        }
        ["ip", "address", addr, mask] => {
            let a = ip(line, addr)?;
            let len = Ipv4Prefix::mask_len(ip(line, mask)?)
                .ok_or_else(|| line_err(line, format!("non-contiguous mask `{mask}`")))?;
            let net = Ipv4Prefix::network_of(a, len).expect("len from mask");
            r.attributes.insert("address".into(), addr.into());
            r.attributes.insert("mask".into(), mask.into());
            r.refs.push(ResourceRef::literal(net.to_string(), "ipAddress"));
            if !r.cidrs.contains(&net.to_string()) {
                r.cidrs.push(net.to_string());
            }
        }
        ["ip", "address", ..] => return Err(line_err(line, format!("malformed ip address `{text}`"))),
        ["ip", "access-group", name, dir @ ("in" | "out")] => {
            let rel = if dir == "in" { "accessGroupIn" } else { "accessGroupOut" };
            r.refs.push(ResourceRef::loose("acl", format!("{switch}/{name}"), rel));
        }
        ["ip", "access-group", ..] => return Err(line_err(line, format!("malformed access-group `{text}`"))),
        ["shutdown"] | ["no", "shutdown"] | ["switchport"] | ["no", "switchport"] | ["no", "ip", "address"] => {
            r.attributes.insert(text.replace(' ', "-"), "true".into());
        }
        _ => warnings.push(format!("line {line}: unsupported interface command `{text}` ignored")),
    }
    Ok(())
}

/// Parses several switch files given as (switch name, text) and merges them.
pub fn parse_cli_files(files: &[(&str, &str)]) -> Result<ResourceSet, ParseError> {
    let mut merged = ResourceSet::new(Dialect::Cli);
    for (name, text) in files {
        let rs = parse_cli(text, name)?;
        merged.warnings.extend(rs.warnings.into_iter().map(|w| format!("{name}: {w}")));
        for r in rs.resources {
            if r.type_name == "vlan" && merged.get("vlan", &r.key).is_some() {
                continue;
            }
            merged.push(r);
        }
    }
    merged.canonicalize();
    check_unique(&merged)?;
    Ok(merged)
}

fn local<'a>(r: &'a Resource, switch: &str) -> &'a str {
    r.key.strip_prefix(switch).and_then(|k| k.strip_prefix('/')).unwrap_or(&r.key)
}

/// Renders one configuration text per switch, as (switch name, text).
pub fn write_cli(rs: &ResourceSet) -> Result<Vec<(String, String)>, WriteError> {
    let mut out = Vec::new();
    for sw in rs.of_type("switch") {
        let name = sw.key.as_str();
        let owned = |t: &'static str| {
            rs.of_type(t).filter(move |r| r.refs.iter().any(|x| x.target_type == "switch" && x.target_key == name))
        };
        let mut text = format!("hostname {name}\n!\n");
        for v in sw.refs_labeled("vlanDatabase") {
            text.push_str(&format!("vlan {}\n", v.target_key));
        }
        text.push_str("!\n");
        for r in owned("port").chain(owned("svi")) {
            text.push_str(&format!("interface {}\n", local(r, name)));
            if let Some(d) = r.attributes.get("description") {
                text.push_str(&format!(" description {d}\n"));
            }
            if let Some(m) = r.attributes.get("mode") {
                text.push_str(&format!(" switchport mode {m}\n"));
            }
            for v in r.refs_labeled("accessVlan") {
                text.push_str(&format!(" switchport access vlan {}\n", v.target_key));
            }
            let trunk: Vec<&str> = r.refs_labeled("trunkVlan").map(|v| v.target_key.as_str()).collect();
            if !trunk.is_empty() {
                text.push_str(&format!(" switchport trunk allowed vlan {}\n", trunk.join(",")));
            }
            if r.refs_labeled("ipAddress").next().is_some() {
                let (Some(a), Some(m)) = (r.attributes.get("address"), r.attributes.get("mask")) else {
                    return Err(WriteError::new(r, "ip address without address/mask attributes"));
                };
                text.push_str(&format!(" ip address {a} {m}\n"));
            }
            for (rel, dir) in [("accessGroupIn", "in"), ("accessGroupOut", "out")] {
                for acl in r.refs_labeled(rel) {
                    let acl_name = acl.target_key.strip_prefix(&format!("{name}/")).unwrap_or(&acl.target_key);
                    text.push_str(&format!(" ip access-group {acl_name} {dir}\n"));
                }
            }
            text.push_str("!\n");
        }
        for (k, route) in &sw.attributes {
            if k.starts_with("route.") {
                text.push_str(&format!("ip route {route}\n"));
            }
        }
        text.push_str("!\n");
        for acl in rs.of_type("acl").filter(|a| a.key.starts_with(&format!("{name}/"))) {
            let acl_name = local(acl, name);
            let kind = acl.attributes.get("kind").map_or("extended", String::as_str);
            let entries = acl.attributes.iter().filter(|(k, _)| k.starts_with("entry."));
            match kind {
                "extended" | "standard" => {
                    text.push_str(&format!("ip access-list {kind} {acl_name}\n"));
                    for (_, e) in entries {
                        text.push_str(&format!(" {e}\n"));
                    }
                }
                _ => {
                    for (_, e) in entries {
                        text.push_str(&format!("access-list {acl_name} {e}\n"));
                    }
                }
            }
            text.push_str("!\n");
        }
        text.push_str("end\n");
        out.push((name.to_string(), text));
    }
    Ok(out)
}
