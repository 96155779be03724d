//! Switch configurations: one access switch per unit plus a core switch joined by a transit VLAN.

use super::{limit, GenError, TopologyParams};
use crate::cidr::Ipv4Prefix;
use crate::ingest::switch_cli::{acl_entry_refs, route_refs};
use crate::ingest::{Dialect, Resource, ResourceSet};

const D: Dialect = Dialect::Cli;
const TRANSIT_VLAN: u32 = 100;

struct Unit {
    index: u32,
    switch: String,
    groups: u32,
    shared: bool,
}

fn numbered(prefix: &str, n: usize) -> String {
    format!("{prefix}{n:04}")
}

fn acl(switch: &str, name: &str, entries: &[String]) -> Resource {
    let mut r = Resource::new(D, "acl", format!("{switch}/{name}")).attr("kind", "extended");
    for (n, e) in entries.iter().enumerate() {
        r = r.attr(&numbered("entry.", n + 1), e.clone());
        r.refs.extend(acl_entry_refs(0, e, true).expect("generated entries are well-formed"));
    }
    r
}

fn svi(switch: &str, vlan: u32, addr: [u32; 4], len: u8) -> Resource {
    let a = std::net::Ipv4Addr::new(addr[0] as u8, addr[1] as u8, addr[2] as u8, addr[3] as u8);
    let net = Ipv4Prefix::network_of(a, len).expect("prefix length is at most 32");
    let mask = net.netmask();
    Resource::new(D, "svi", format!("{switch}/Vlan{vlan}"))
        .tight("switch", switch, "switch")
        .loose("vlan", vlan.to_string(), "vlan")
        .attr("address", a.to_string())
        .attr("mask", mask.to_string())
        .cite(net.to_string(), "ipAddress")
}

fn with_route(sw: Resource, args: &str) -> Resource {
    let n = sw.attributes.keys().filter(|k| k.starts_with("route.")).count();
    let mut sw = sw.attr(&numbered("route.", n + 1), args);
    sw.refs.extend(route_refs(0, args).expect("generated routes are well-formed"));
    sw
}

pub fn gen_cli(p: &TopologyParams) -> Result<ResourceSet, GenError> {
    let n = p.unit_count();
    let max_groups = p.tiers.max(p.shared_groups);
    limit("groups per unit", u64::from(max_groups), 99)?;
    limit("VLAN ids", u64::from(100 * n + max_groups), 4094)?;
    limit("endpoints per group", u64::from(p.endpoints_per_group), 244)?;

    let mut units: Vec<Unit> = (1..=p.app_units)
        .map(|i| Unit { index: i, switch: format!("sw-app{i}"), groups: p.tiers, shared: false })
        .collect();
    if p.shared_groups > 0 {
        units.push(Unit { index: n, switch: "sw-shared".into(), groups: p.shared_groups, shared: true });
    }
    let shared_index = units.iter().find(|u| u.shared).map(|u| u.index);

    let mut vlans = vec![TRANSIT_VLAN];
    for u in &units {
        vlans.extend((1..=u.groups).map(|g| 100 * u.index + g));
    }
    vlans.sort_unstable();

    let transit_len = 32 - (n + 3).next_power_of_two().trailing_zeros() as u8;
    let mut rs = ResourceSet::new(D);
    for v in &vlans {
        rs.push(Resource::new(D, "vlan", v.to_string()));
    }
    let database = |mut sw: Resource| {
        for v in &vlans {
            sw = sw.loose("vlan", v.to_string(), "vlanDatabase");
        }
        sw
    };

    for u in &units {
        let s = u.switch.as_str();
        let i = u.index;
        let mut hosts = Vec::new();
        let mut port_no = 0;
        for g in 1..=u.groups {
            let vlan = 100 * i + g;
            for h in 1..=p.endpoints_per_group {
                port_no += 1;
                let mut port = Resource::new(D, "port", format!("{s}/GigabitEthernet1/0/{port_no}"))
                    .tight("switch", s, "switch")
                    .attr("mode", "access")
                    .loose("vlan", vlan.to_string(), "accessVlan");
                if p.acls {
                    port = port.loose("acl", format!("{s}/HOSTS-IN"), "accessGroupIn");
                }
                rs.push(port);
                hosts.push(format!("permit ip host 10.{i}.{g}.{} any", 10 + h));
            }
            let mut r = svi(s, vlan, [10, i, g, 1], 24);
            if p.acls {
                let name = if u.shared { "SHARED-OUT".to_string() } else { format!("T{g}-OUT") };
                r = r.loose("acl", format!("{s}/{name}"), "accessGroupOut");
                if !u.shared {
                    let entries = if g == 1 {
                        let mut e = vec!["permit tcp any any eq 443".to_string()];
                        if let Some(si) = shared_index {
                            e.push(format!("permit ip 10.{si}.0.0 0.0.255.255 any"));
                        }
                        e
                    } else {
                        vec![format!("permit ip 10.{i}.{}.0 0.0.0.255 any", g - 1)]
                    };
                    rs.push(acl(s, &name, &entries));
                }
            }
            rs.push(r);
        }
        if p.acls {
            rs.push(acl(s, "HOSTS-IN", &hosts));
            if u.shared {
                let entries: Vec<String> =
                    (1..=p.app_units).map(|a| format!("permit ip 10.{a}.0.0 0.0.255.255 any")).collect();
                rs.push(acl(s, "SHARED-OUT", &entries));
            }
        }
        rs.push(svi(s, TRANSIT_VLAN, [10, 0, 0, i], transit_len));
        rs.push(with_route(database(Resource::new(D, "switch", s)), &format!("0.0.0.0 0.0.0.0 Vlan{TRANSIT_VLAN}")));
    }

    let mut core = database(Resource::new(D, "switch", "sw-core"));
    for u in &units {
        core = with_route(core, &format!("10.{0}.0.0 255.255.0.0 10.0.0.{0}", u.index));
    }
    rs.push(core);
    rs.push(svi("sw-core", TRANSIT_VLAN, [10, 0, 0, n + 1], transit_len));
    rs.canonicalize();
    Ok(rs)
}
