//! Static plant-network description: subnets, hosts, services, firewall
//! reachability, and per-episode address resolution.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of hosts in the canonical topology.
pub const HOST_COUNT: usize = 13;

const TOPOLOGY_JSON: &str = include_str!("data/topology.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HostKind {
    UserHost,
    EnterpriseServer,
    DefenderMachine,
    OperationalHost,
    OperationalServer,
}

impl HostKind {
    /// Servers are everything that is not a user host or the defender's own
    /// machine; they carry the heavier compromise penalty.
    pub fn is_server(&self) -> bool {
        matches!(
            self,
            HostKind::EnterpriseServer | HostKind::OperationalHost | HostKind::OperationalServer
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceSpec {
    pub port: u16,
    pub service: String,
    pub exploitable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubnetSpec {
    pub id: u8,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostSpec {
    pub name: String,
    pub subnet: u8,
    pub kind: HostKind,
    pub services: Vec<ServiceSpec>,
}

/// Static network topology. Host order is canonical and fixed: the defender's
/// bit-vector observation layout is indexed by position in `hosts`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Network {
    pub version: u32,
    pub subnets: Vec<SubnetSpec>,
    pub firewall: Vec<(u8, u8)>,
    pub foothold: String,
    pub hosts: Vec<HostSpec>,
}

impl Network {
    /// Parse a topology document and validate its structural invariants.
    pub fn from_json(text: &str) -> Result<Network> {
        let net: Network = serde_json::from_str(text)?;
        net.validate()?;
        Ok(net)
    }

    pub fn host_index(&self, name: &str) -> Option<usize> {
        self.hosts.iter().position(|h| h.name == name)
    }

    pub fn host(&self, name: &str) -> Result<&HostSpec> {
        self.hosts
            .iter()
            .find(|h| h.name == name)
            .ok_or_else(|| Error::UnknownHost(name.to_string()))
    }

    pub fn foothold_index(&self) -> usize {
        self.host_index(&self.foothold).expect("validated foothold")
    }

    fn firewall_permits(&self, src: u8, dst: u8) -> bool {
        self.firewall.contains(&(src, dst))
    }

    /// Firewall reachability between two hosts. The operational server is a
    /// special case: it accepts traffic only from the operational hosts (or
    /// itself), regardless of subnet-level rules.
    pub fn reachable(&self, src: &str, dst: &str) -> Result<bool> {
        let s = self.host(src)?;
        let d = self.host(dst)?;
        if !self.firewall_permits(s.subnet, d.subnet) {
            return Ok(false);
        }
        if d.kind == HostKind::OperationalServer {
            return Ok(matches!(
                s.kind,
                HostKind::OperationalHost | HostKind::OperationalServer
            ));
        }
        Ok(true)
    }

    /// Hosts that a subnet sweep reveals. The defender's machine never shows
    /// up in sweep results (it is not a red target).
    pub fn hosts_in_subnet(&self, subnet: u8) -> Vec<&HostSpec> {
        self.hosts
            .iter()
            .filter(|h| h.subnet == subnet && h.kind != HostKind::DefenderMachine)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.hosts.len() != HOST_COUNT {
            return Err(Error::Topology(format!(
                "expected {HOST_COUNT} hosts, found {}",
                self.hosts.len()
            )));
        }
        let count = |k: HostKind| self.hosts.iter().filter(|h| h.kind == k).count();
        let expected = [
            (HostKind::UserHost, 5),
            (HostKind::EnterpriseServer, 3),
            (HostKind::DefenderMachine, 1),
            (HostKind::OperationalHost, 3),
            (HostKind::OperationalServer, 1),
        ];
        for (kind, n) in expected {
            if count(kind) != n {
                return Err(Error::Topology(format!("expected {n} hosts of {kind:?}")));
            }
        }
        let mut names = std::collections::BTreeSet::new();
        for h in &self.hosts {
            if !names.insert(h.name.clone()) {
                return Err(Error::Topology(format!("duplicate host name {}", h.name)));
            }
            if h.services.is_empty() {
                return Err(Error::Topology(format!("host {} exposes no services", h.name)));
            }
            let mut ports = std::collections::BTreeSet::new();
            for s in &h.services {
                if !ports.insert(s.port) {
                    return Err(Error::Topology(format!(
                        "host {} has duplicate port {}",
                        h.name, s.port
                    )));
                }
            }
        }
        // Subnet 1 must never route to subnet 3.
        if self.firewall_permits(1, 3) {
            return Err(Error::Topology("firewall permits subnet 1 -> 3".into()));
        }
        let foothold = self
            .hosts
            .iter()
            .find(|h| h.name == self.foothold)
            .ok_or_else(|| Error::Topology("foothold host not in topology".into()))?;
        if foothold.subnet != 1 || foothold.kind != HostKind::UserHost {
            return Err(Error::Topology("foothold must be a subnet-1 user host".into()));
        }
        Ok(())
    }
}

/// The canonical 13-host network embedded in the crate.
pub fn default_topology() -> Network {
    static CANONICAL: OnceLock<Network> = OnceLock::new();
    CANONICAL
        .get_or_init(|| Network::from_json(TOPOLOGY_JSON).expect("embedded topology is valid"))
        .clone()
}

/// Synthetic network address, bound to a hostname for one episode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Address(pub String);

impl std::fmt::Display for Address {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Per-episode address bindings. Resolution is total over issued addresses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressBook {
    to_host: BTreeMap<Address, String>,
    to_addr: BTreeMap<String, Address>,
}

impl AddressBook {
    /// Draw a fresh synthetic address for every host from the seeded stream.
    pub fn generate(net: &Network, rng: &mut impl Rng) -> AddressBook {
        let mut to_host = BTreeMap::new();
        let mut to_addr = BTreeMap::new();
        for h in &net.hosts {
            let addr = loop {
                let a: u8 = rng.gen();
                let b: u8 = rng.gen_range(1..255);
                let candidate = Address(format!("10.{}.{}.{}", h.subnet, a, b));
                if !to_host.contains_key(&candidate) {
                    break candidate;
                }
            };
            to_host.insert(addr.clone(), h.name.clone());
            to_addr.insert(h.name.clone(), addr);
        }
        AddressBook { to_host, to_addr }
    }

    pub fn resolve(&self, addr: &Address) -> Result<&str> {
        self.to_host
            .get(addr)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownAddress(addr.0.clone()))
    }

    pub fn addr_of(&self, host: &str) -> Result<&Address> {
        self.to_addr
            .get(host)
            .ok_or_else(|| Error::UnknownHost(host.to_string()))
    }
}
