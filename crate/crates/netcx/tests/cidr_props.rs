use std::net::Ipv4Addr;

use proptest::prelude::*;

use netcx::cidr::{cidr_contains, Ipv4Prefix};

fn prefix() -> impl Strategy<Value = Ipv4Prefix> {
    (any::<u32>(), 0u8..=32).prop_map(|(a, len)| Ipv4Prefix::network_of(Ipv4Addr::from(a), len).unwrap())
}

proptest! {
    #[test]
    fn display_parse_round_trip(p in prefix()) {
        prop_assert_eq!(p.to_string().parse::<Ipv4Prefix>().unwrap(), p);
    }

    #[test]
    fn containment_is_strict_and_transitive(a in prefix(), b in prefix(), c in prefix()) {
        prop_assert!(!cidr_contains(&a, &a));
        if cidr_contains(&a, &b) {
            prop_assert!(!cidr_contains(&b, &a));
            prop_assert!(a.len() < b.len());
            prop_assert!(a.first() <= b.first() && b.last() <= a.last());
        }
        if cidr_contains(&a, &b) && cidr_contains(&b, &c) {
            prop_assert!(cidr_contains(&a, &c));
        }
    }

    #[test]
    fn masks_agree(p in prefix()) {
        prop_assert_eq!(Ipv4Prefix::mask_len(p.netmask()), Some(p.len()));
        prop_assert_eq!(Ipv4Prefix::wildcard_len(p.wildcard()), Some(p.len()));
    }

    #[test]
    fn host_bits_rejected(a in any::<u32>(), len in 0u8..32) {
        let addr = Ipv4Addr::from(a);
        let net = Ipv4Prefix::network_of(addr, len).unwrap();
        prop_assert_eq!(Ipv4Prefix::new(addr, len).is_ok(), net.addr() == addr);
    }
}

#[test]
fn examples() {
    let p = |s: &str| s.parse::<Ipv4Prefix>().unwrap();
    assert!(cidr_contains(&p("10.0.0.0/8"), &p("10.1.2.0/24")));
    assert!(!cidr_contains(&p("10.1.2.0/24"), &p("10.0.0.0/8")));
    assert_eq!(p("10.1.1.4"), p("10.1.1.4/32"));
    assert!("10.1.1.1/24".parse::<Ipv4Prefix>().is_err());
    assert!("10.1.1/24".parse::<Ipv4Prefix>().is_err());
    assert!("10.1.1.0/33".parse::<Ipv4Prefix>().is_err());
}
