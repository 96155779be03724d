//! IPv4 prefixes and strict containment.

use std::fmt;
use std::net::Ipv4Addr;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CidrError {
    #[error("malformed IPv4 prefix `{0}`")]
    Malformed(String),
    #[error("IPv4 prefix `{0}` has host bits set below the mask")]
    HostBits(String),
}

/// An IPv4 network prefix with all host bits zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Ipv4Prefix {
    addr: u32,
    len: u8,
}

fn mask(len: u8) -> u32 {
    if len == 0 {
        0
    } else {
        u32::MAX << (32 - u32::from(len))
    }
}

impl Ipv4Prefix {
    /// Builds a prefix, rejecting lengths over 32 and set host bits.
    pub fn new(addr: Ipv4Addr, len: u8) -> Result<Self, CidrError> {
        let raw = u32::from(addr);
        if len > 32 {
            return Err(CidrError::Malformed(format!("{addr}/{len}")));
        }
        if raw & !mask(len) != 0 {
            return Err(CidrError::HostBits(format!("{addr}/{len}")));
        }
        Ok(Self { addr: raw, len })
    }

    /// Builds the network containing `addr` at length `len` (host bits cleared).
    pub fn network_of(addr: Ipv4Addr, len: u8) -> Result<Self, CidrError> {
        if len > 32 {
            return Err(CidrError::Malformed(format!("{addr}/{len}")));
        }
        Ok(Self { addr: u32::from(addr) & mask(len), len })
    }

    /// Converts a contiguous dotted netmask (e.g. 255.255.255.0) to a length.
    pub fn mask_len(netmask: Ipv4Addr) -> Option<u8> {
        let m = u32::from(netmask);
        let len = m.leading_ones();
        (m.checked_shl(len).unwrap_or(0) == 0).then_some(len as u8)
    }

    /// Converts a contiguous wildcard mask (e.g. 0.0.0.255) to a length.
    pub fn wildcard_len(wildcard: Ipv4Addr) -> Option<u8> {
        Self::mask_len(Ipv4Addr::from(!u32::from(wildcard)))
    }

    pub fn addr(&self) -> Ipv4Addr {
        Ipv4Addr::from(self.addr)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u8 {
        self.len
    }

    pub fn first(&self) -> u32 {
        self.addr
    }

    pub fn last(&self) -> u32 {
        self.addr | !mask(self.len)
    }

    /// Strict containment: `other` lies inside `self` and is longer.
    pub fn contains(&self, other: &Ipv4Prefix) -> bool {
        other.len > self.len && other.addr & mask(self.len) == self.addr
    }

    /// Dotted netmask form, as used by switch CLIs.
    pub fn netmask(&self) -> Ipv4Addr {
        Ipv4Addr::from(mask(self.len))
    }

    /// Dotted wildcard form, as used in ACL entries.
    pub fn wildcard(&self) -> Ipv4Addr {
        Ipv4Addr::from(!mask(self.len))
    }
}

/// Strict containment between two prefixes.
pub fn cidr_contains(outer: &Ipv4Prefix, inner: &Ipv4Prefix) -> bool {
    outer.contains(inner)
}

/// True when the text looks like an IPv4 address or prefix (digits, dots, optional slash).
/// Used by parsers to separate address literals from service tags such as `Internet`.
pub fn looks_like_ipv4(s: &str) -> bool {
    let s = s.trim();
    !s.is_empty()
        && s.starts_with(|c: char| c.is_ascii_digit())
        && s.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '/')
}

impl FromStr for Ipv4Prefix {
    type Err = CidrError;

    /// Accepts `a.b.c.d/len`; a bare address is read as `/32`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || CidrError::Malformed(s.to_string());
        let (addr, len) = match s.trim().split_once('/') {
            Some((a, l)) => {
                if l.is_empty() || !l.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(malformed());
                }
                (a, l.parse::<u8>().map_err(|_| malformed())?)
            }
            None => (s.trim(), 32),
        };
        let addr: Ipv4Addr = addr.parse().map_err(|_| malformed())?;
        Self::new(addr, len).map_err(|e| match e {
            CidrError::HostBits(_) => CidrError::HostBits(s.to_string()),
            CidrError::Malformed(_) => malformed(),
        })
    }
}

impl fmt::Display for Ipv4Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.addr(), self.len)
    }
}

impl TryFrom<String> for Ipv4Prefix {
    type Error = CidrError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Ipv4Prefix> for String {
    fn from(p: Ipv4Prefix) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Ipv4Prefix {
        s.parse().unwrap()
    }

    #[test]
    fn containment_examples() {
        assert!(cidr_contains(&p("10.0.0.0/16"), &p("10.0.1.0/24")));
        assert!(!cidr_contains(&p("10.0.0.0/24"), &p("10.0.0.0/24")));
        assert!(!cidr_contains(&p("10.0.0.0/24"), &p("10.1.0.0/24")));
        assert!(cidr_contains(&p("0.0.0.0/0"), &p("10.1.0.0/24")));
        assert!(!cidr_contains(&p("10.0.1.0/24"), &p("10.0.0.0/16")));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("10.1.2.3").to_string(), "10.1.2.3/32");
        assert_eq!(p("0.0.0.0/0").to_string(), "0.0.0.0/0");
        for bad in ["10.0.0.0/33", "10.0.0/8", "x", "10.0.0.0/", "10.0.0.0/+8", ""] {
            assert!(matches!(bad.parse::<Ipv4Prefix>(), Err(CidrError::Malformed(_))), "{bad}");
        }
        let err = "10.0.0.1/24".parse::<Ipv4Prefix>().unwrap_err();
        assert_eq!(err, CidrError::HostBits("10.0.0.1/24".into()));
        assert!(err.to_string().contains("10.0.0.1/24"));
    }

    #[test]
    fn masks() {
        assert_eq!(Ipv4Prefix::mask_len("255.255.255.0".parse().unwrap()), Some(24));
        assert_eq!(Ipv4Prefix::mask_len("0.0.0.0".parse().unwrap()), Some(0));
        assert_eq!(Ipv4Prefix::mask_len("255.0.255.0".parse().unwrap()), None);
        assert_eq!(Ipv4Prefix::wildcard_len("0.0.0.255".parse().unwrap()), Some(24));
        assert_eq!(Ipv4Prefix::wildcard_len("0.0.255.255".parse().unwrap()), Some(16));
        assert_eq!(p("10.1.0.0/16").wildcard().to_string(), "0.0.255.255");
        assert_eq!(p("10.1.0.0/29").netmask().to_string(), "255.255.255.248");
    }

    #[test]
    fn ipv4_shape() {
        assert!(looks_like_ipv4("10.0.0.0/8"));
        assert!(looks_like_ipv4("10.0.0.300"));
        assert!(!looks_like_ipv4("VirtualNetwork"));
        assert!(!looks_like_ipv4("*"));
    }
}
