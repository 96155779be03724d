//! Azure variants.
//!
//! 1: hub firewall with per-subnet forced routing and an ipGroup rule tree.
//! 2: hub firewall with one shared route table and per-spoke NSGs.
//! 3: full-mesh peerings, segmentation in NSG rules and application security groups.

use super::{limit, GenError, TopologyParams};
use crate::ingest::{Dialect, Resource, ResourceSet};

const D: Dialect = Dialect::Azure;
const HUB_PREFIX: &str = "10.0.0.0/16";
const FW_SUBNET_PREFIX: &str = "10.0.1.0/26";

struct Unit {
    index: u32,
    name: String,
    groups: u32,
    shared: bool,
}

impl Unit {
    fn vnet_prefix(&self) -> String {
        format!("10.{}.0.0/16", self.index)
    }

    fn subnet(&self, g: u32) -> String {
        format!("{}/tier{g}", self.name)
    }

    fn subnet_prefix(&self, g: u32) -> String {
        format!("10.{}.{g}.0/24", self.index)
    }
}

fn units(p: &TopologyParams) -> Vec<Unit> {
    let mut out: Vec<Unit> = (1..=p.app_units)
        .map(|i| Unit { index: i, name: format!("spoke{i}"), groups: p.tiers, shared: false })
        .collect();
    if p.shared_groups > 0 {
        let i = p.app_units + 1;
        out.push(Unit { index: i, name: format!("spoke{i}"), groups: p.shared_groups, shared: true });
    }
    out
}

pub fn gen_azure(variant: u8, p: &TopologyParams) -> Result<ResourceSet, GenError> {
    if !(1..=3).contains(&variant) {
        return Err(GenError::UnknownVariant(variant));
    }
    limit("the number of address units", u64::from(p.unit_count()), 254)?;
    limit("tiers", u64::from(p.tiers), 254)?;
    limit("shared groups", u64::from(p.shared_groups), 254)?;
    limit("endpoints per group", u64::from(p.endpoints_per_group), 251)?;

    let units = units(p);
    let mut rs = ResourceSet::new(D);

    if variant < 3 {
        hub(&mut rs, &units);
    } else {
        for a in &units {
            for b in units.iter().filter(|b| b.index != a.index) {
                rs.push(
                    Resource::new(D, "peering", format!("{}/{}-to-{}", a.name, a.name, b.name))
                        .tight("vnet", a.name.clone(), "parent")
                        .tight("vnet", b.name.clone(), "remoteVirtualNetwork"),
                );
            }
        }
    }

    for u in &units {
        rs.push(Resource::new(D, "vnet", u.name.clone()).cite(u.vnet_prefix(), "addressPrefix"));
        for g in 1..=u.groups {
            let mut subnet = Resource::new(D, "subnet", u.subnet(g))
                .tight("vnet", u.name.clone(), "parent")
                .cite(u.subnet_prefix(g), "addressPrefix");
            subnet = match variant {
                1 => subnet.tight("routeTable", format!("rt-{}-tier{g}", u.name), "routeTable"),
                2 => subnet.tight("routeTable", "rt-spokes", "routeTable"),
                _ => subnet.tight("nsg", format!("nsg-{}", u.name), "networkSecurityGroup"),
            };
            rs.push(subnet);
            for v in 1..=p.endpoints_per_group {
                let vm = format!("{}-t{g}-vm{v}", u.name);
                let nic = format!("{vm}-nic");
                rs.push(Resource::new(D, "vm", vm.clone()).tight("nic", nic.clone(), "networkInterface"));
                let mut nic_r = Resource::new(D, "nic", nic.clone());
                match variant {
                    1 => nic_r = nic_r.tight("nsg", "nsg-spokes", "networkSecurityGroup"),
                    2 => nic_r = nic_r.tight("nsg", format!("nsg-{}", u.name), "networkSecurityGroup"),
                    _ => {}
                }
                rs.push(nic_r);
                let mut ipc = Resource::new(D, "ipconfig", format!("{nic}/ipconfig1"))
                    .tight("nic", nic, "parent")
                    .tight("subnet", u.subnet(g), "subnet");
                if !u.shared {
                    ipc = ipc.declare(format!("10.{}.{g}.{}/32", u.index, 3 + v));
                }
                if variant == 3 && u.shared {
                    ipc = ipc.tight("asg", format!("asg-shared{g}"), "applicationSecurityGroup");
                }
                rs.push(ipc);
            }
        }
    }

    match variant {
        1 => variant1(&mut rs, &units),
        2 => variant2(&mut rs, &units),
        _ => variant3(&mut rs, &units),
    }
    rs.canonicalize();
    Ok(rs)
}

/// Hub vnet, firewall and hub-spoke peerings shared by variants 1 and 2.
fn hub(rs: &mut ResourceSet, units: &[Unit]) {
    rs.push(Resource::new(D, "vnet", "hub").cite(HUB_PREFIX, "addressPrefix"));
    rs.push(
        Resource::new(D, "subnet", "hub/AzureFirewallSubnet")
            .tight("vnet", "hub", "parent")
            .cite(FW_SUBNET_PREFIX, "addressPrefix"),
    );
    rs.push(Resource::new(D, "publicIp", "azfw-pip"));
    rs.push(Resource::new(D, "firewallPolicy", "azfw-policy"));
    rs.push(
        Resource::new(D, "firewall", "azfw")
            .tight("subnet", "hub/AzureFirewallSubnet", "subnet")
            .tight("publicIp", "azfw-pip", "publicIPAddress")
            .tight("firewallPolicy", "azfw-policy", "firewallPolicy"),
    );
    for u in units {
        rs.push(Resource::new(D, "peering", format!("hub/hub-to-{}", u.name)).tight("vnet", "hub", "parent").tight(
            "vnet",
            u.name.clone(),
            "remoteVirtualNetwork",
        ));
        rs.push(
            Resource::new(D, "peering", format!("{}/{}-to-hub", u.name, u.name))
                .tight("vnet", u.name.clone(), "parent")
                .tight("vnet", "hub", "remoteVirtualNetwork"),
        );
    }
}

fn route(table: &str, name: &str, prefix: String) -> Resource {
    Resource::new(D, "route", format!("{table}/{name}"))
        .tight("routeTable", table, "parent")
        .cite(prefix, "addressPrefix")
        .tight("firewall", "azfw", "nextHop")
}

fn fw_rule(name: &str, sources: &[String], destinations: &[String]) -> Resource {
    let mut r = Resource::new(D, "fwRule", format!("azfw-policy/network/{name}")).tight(
        "ruleCollection",
        "azfw-policy/network",
        "parent",
    );
    for s in sources {
        r = r.tight("ipGroup", s.clone(), "sourceIpGroup");
    }
    for d in destinations {
        r = r.tight("ipGroup", d.clone(), "destinationIpGroup");
    }
    r
}

fn rule_collection(rs: &mut ResourceSet) {
    rs.push(Resource::new(D, "ruleCollection", "azfw-policy/network").tight("firewallPolicy", "azfw-policy", "parent"));
}

fn variant1(rs: &mut ResourceSet, units: &[Unit]) {
    for u in units {
        for g in 1..=u.groups {
            let table = format!("rt-{}-tier{g}", u.name);
            rs.push(Resource::new(D, "routeTable", table.clone()));
            rs.push(route(&table, "default", "0.0.0.0/0".into()));
            rs.push(route(&table, "vnet", u.vnet_prefix()));
        }
    }
    rs.push(Resource::new(D, "nsg", "nsg-spokes"));
    rs.push(
        Resource::new(D, "nsgRule", "nsg-spokes/allow-from-firewall")
            .tight("nsg", "nsg-spokes", "parent")
            .cite(FW_SUBNET_PREFIX, "sourceAddressPrefix")
            .cite(HUB_PREFIX, "sourceAddressPrefix"),
    );
    let mut apps = Vec::new();
    let mut shared = Vec::new();
    for u in units {
        let name = if u.shared { "ipg-shared".to_string() } else { format!("ipg-app{}", u.index) };
        let mut ipg = Resource::new(D, "ipGroup", name.clone());
        for g in 1..=u.groups {
            ipg = ipg.cite(u.subnet_prefix(g), "ipAddress");
        }
        rs.push(ipg);
        if u.shared { &mut shared } else { &mut apps }.push(name);
    }
    rule_collection(rs);
    if !shared.is_empty() && !apps.is_empty() {
        rs.push(fw_rule("apps-to-shared", &apps, &shared));
    }
    if !apps.is_empty() {
        rs.push(fw_rule("intra-app", &apps, &apps));
    }
}

fn variant2(rs: &mut ResourceSet, units: &[Unit]) {
    rs.push(Resource::new(D, "routeTable", "rt-spokes"));
    rs.push(route("rt-spokes", "default", "0.0.0.0/0".into()));
    for u in units {
        let nsg = format!("nsg-{}", u.name);
        rs.push(Resource::new(D, "nsg", nsg.clone()));
        for rule in ["allow-vnet-inbound", "deny-all-inbound"] {
            rs.push(Resource::new(D, "nsgRule", format!("{nsg}/{rule}")).tight("nsg", nsg.clone(), "parent"));
        }
    }
    let mut apps = Vec::new();
    let mut shared = Vec::new();
    for u in units {
        if u.shared {
            for g in 1..=u.groups {
                let name = format!("ipg-shared{g}");
                rs.push(Resource::new(D, "ipGroup", name.clone()).cite(u.subnet_prefix(g), "ipAddress"));
                shared.push(name);
            }
        } else {
            let name = format!("ipg-app{}", u.index);
            rs.push(Resource::new(D, "ipGroup", name.clone()).cite(u.vnet_prefix(), "ipAddress"));
            apps.push(name);
        }
    }
    rule_collection(rs);
    if !apps.is_empty() {
        for (g, dst) in shared.iter().enumerate() {
            rs.push(fw_rule(&format!("apps-to-shared{}", g + 1), &apps, std::slice::from_ref(dst)));
        }
    }
}

fn variant3(rs: &mut ResourceSet, units: &[Unit]) {
    let shared_groups = units.iter().find(|u| u.shared).map_or(0, |u| u.groups);
    for g in 1..=shared_groups {
        rs.push(Resource::new(D, "asg", format!("asg-shared{g}")));
    }
    for u in units {
        let nsg = format!("nsg-{}", u.name);
        rs.push(Resource::new(D, "nsg", nsg.clone()));
        let rule =
            |name: String| Resource::new(D, "nsgRule", format!("{nsg}/{name}")).tight("nsg", nsg.clone(), "parent");
        if u.shared {
            for g in 1..=u.groups {
                rs.push(rule(format!("allow-to-shared{g}")).tight(
                    "asg",
                    format!("asg-shared{g}"),
                    "destinationApplicationSecurityGroup",
                ));
            }
            continue;
        }
        for g in 2..=u.groups {
            rs.push(
                rule(format!("allow-tier{}-to-tier{g}", g - 1)).cite(u.subnet_prefix(g - 1), "sourceAddressPrefix"),
            );
        }
        if shared_groups > 0 {
            let mut r = rule("allow-shared".into());
            for g in 1..=shared_groups {
                r = r.tight("asg", format!("asg-shared{g}"), "sourceApplicationSecurityGroup");
            }
            rs.push(r);
        }
    }
}
