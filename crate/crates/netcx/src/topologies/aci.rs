//! Policy fabric: EPGs bound by contracts, pinned to leaf ports by static paths.

use super::{limit, tier_name, GenError, TopologyParams};
use crate::ingest::{Dialect, Resource, ResourceSet};

const D: Dialect = Dialect::Aci;
const PORTS_PER_LEAF: u64 = 12;

pub fn gen_aci(p: &TopologyParams) -> Result<ResourceSet, GenError> {
    let ports = p.endpoint_count();
    let leaves = ports.div_ceil(PORTS_PER_LEAF).max(1);
    limit("the number of leaves", leaves, 3899)?;

    let mut rs = ResourceSet::new(D);
    rs.push(Resource::new(D, "tenant", "t1"));
    rs.push(Resource::new(D, "vrf", "t1/vrf1"));
    rs.push(Resource::new(D, "bridgeDomain", "t1/bd1").tight("vrf", "t1/vrf1", "context"));
    rs.push(Resource::new(D, "filter", "t1/any"));
    let leaf_id = |n: u64| (101 + n).to_string();
    let mut l3out = Resource::new(D, "l3out", "t1/l3out1").tight("vrf", "t1/vrf1", "context");
    for n in 0..leaves {
        let id = leaf_id(n);
        l3out = l3out.tight("leaf", id.clone(), "node");
        rs.push(Resource::new(D, "leaf", id.clone()).attr("name", format!("leaf{id}")));
    }
    let has_apps = p.app_units > 0 && p.tiers > 0;
    if has_apps {
        l3out = l3out.tight("contract", "t1/external", "consumes");
    }
    rs.push(l3out);

    let mut contracts: Vec<String> =
        (1..p.tiers).map(|t| format!("{}-to-{}", tier_name(t), tier_name(t + 1))).collect();
    if p.shared_groups > 0 {
        contracts.push("shared".into());
    }
    if has_apps {
        contracts.push("external".into());
    }
    for c in contracts {
        rs.push(Resource::new(D, "contract", format!("t1/{c}")).tight("filter", "t1/any", "filter"));
    }

    let mut epgs = Vec::new();
    for i in 1..=p.app_units {
        for t in 1..=p.tiers {
            let mut r = Resource::new(D, "epg", format!("t1/app{i}/{}", tier_name(t))).tight(
                "bridgeDomain",
                "t1/bd1",
                "bridgeDomain",
            );
            if t > 1 {
                r = r.tight("contract", format!("t1/{}-to-{}", tier_name(t - 1), tier_name(t)), "provides");
            }
            if t == 1 {
                r = r.tight("contract", "t1/external", "provides");
            }
            if t < p.tiers {
                r = r.tight("contract", format!("t1/{}-to-{}", tier_name(t), tier_name(t + 1)), "consumes");
            }
            if p.shared_groups > 0 {
                r = r.tight("contract", "t1/shared", "consumes");
            }
            epgs.push(r);
        }
    }
    for k in 1..=p.shared_groups {
        epgs.push(
            Resource::new(D, "epg", format!("t1/shared/svc{k}")).tight("bridgeDomain", "t1/bd1", "bridgeDomain").tight(
                "contract",
                "t1/shared",
                "provides",
            ),
        );
    }
    let mut n: u64 = 0;
    for mut epg in epgs {
        for _ in 0..p.endpoints_per_group {
            let leaf = leaf_id(n / PORTS_PER_LEAF);
            let port = format!("{leaf}/eth1/{}", n % PORTS_PER_LEAF + 1);
            rs.push(Resource::new(D, "port", port.clone()).tight("leaf", leaf, "leaf"));
            epg = epg.tight("port", port, "staticPath");
            n += 1;
        }
        rs.push(epg);
    }
    rs.canonicalize();
    Ok(rs)
}
