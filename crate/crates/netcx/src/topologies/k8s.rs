//! Kubernetes: one namespace per unit, label-selected services and tier-chain network policies.

use std::collections::BTreeSet;

use super::{tier_name, GenError, TopologyParams};
use crate::ingest::{Dialect, Resource, ResourceSet};

const D: Dialect = Dialect::K8s;

pub fn gen_k8s(p: &TopologyParams) -> Result<ResourceSet, GenError> {
    let mut rs = ResourceSet::new(D);
    let mut labels = BTreeSet::new();
    let mut units: Vec<(String, u32)> = (1..=p.app_units).map(|i| (format!("app{i}"), p.tiers)).collect();
    if p.shared_groups > 0 {
        units.push(("shared".into(), p.shared_groups));
    }
    for (ns, groups) in &units {
        rs.push(Resource::new(D, "namespace", ns.clone()));
        for g in 1..=*groups {
            let tier = format!("tier={}", tier_name(g));
            for v in 1..=p.endpoints_per_group {
                let name = format!("{ns}-{}-{v}", tier_name(g));
                let run = format!("run={name}");
                rs.push(
                    Resource::new(D, "pod", format!("{ns}/{name}"))
                        .tight("namespace", ns.clone(), "namespace")
                        .loose("label", run.clone(), "label")
                        .loose("label", tier.clone(), "label"),
                );
                labels.insert(run);
            }
            rs.push(
                Resource::new(D, "service", format!("{ns}/{}", tier_name(g)))
                    .tight("namespace", ns.clone(), "namespace")
                    .loose("label", tier.clone(), "selector"),
            );
            labels.insert(tier);
        }
        if ns == "shared" {
            let mut np = Resource::new(D, "networkPolicy", "shared/allow-all-tiers")
                .tight("namespace", ns.clone(), "namespace")
                .attr("policyTypes", "Ingress")
                .attr("ingressAllNamespaces", "true");
            for t in 1..=p.tiers {
                let l = format!("tier={}", tier_name(t));
                np = np.loose("label", l.clone(), "ingressFrom");
                labels.insert(l);
            }
            rs.push(np);
            continue;
        }
        for t in 1..*groups {
            let (from, to) = (tier_name(t), tier_name(t + 1));
            rs.push(
                Resource::new(D, "networkPolicy", format!("{ns}/allow-{from}-to-{to}"))
                    .tight("namespace", ns.clone(), "namespace")
                    .attr("policyTypes", "Ingress,Egress")
                    .loose("label", format!("tier={to}"), "podSelector")
                    .loose("label", format!("tier={from}"), "ingressFrom")
                    .loose("label", format!("tier={to}"), "egressTo"),
            );
        }
    }
    for l in labels {
        rs.push(Resource::new(D, "label", l));
    }
    rs.canonicalize();
    Ok(rs)
}
