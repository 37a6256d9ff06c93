//! Scripted red agents.
//!
//! Two attacker strategies share the objective of reaching the operational
//! server and disrupting its services, plus a benign stand-in that only
//! sleeps:
//!
//! * [`BLineAgent`] knows the network's structure (but not its current
//!   state) and follows a depth-first kill-chain through one user host, an
//!   enterprise server and an operational host to the operational server.
//! * [`MeanderAgent`] has no prior knowledge: it sweeps a subnet, scans every
//!   discovered host, exploits and escalates them all, and only then pivots
//!   to the next subnet.
//!
//! All decisions are pure functions of (internal state, last step's view,
//! seeded RNG), so a seed fully determines an agent's action trace.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{Address, AddressBook, HostKind, Network};
use crate::sim::{RedAction, RedView};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AdversaryKind {
    #[serde(rename = "meander")]
    Meander,
    #[serde(rename = "bline")]
    BLine,
    #[serde(rename = "benign")]
    UserBenign,
}

impl AdversaryKind {
    /// Controller action ids: 0 = Meander, 1 = BLine, 2 = no adversary.
    pub fn action_id(self) -> usize {
        match self {
            AdversaryKind::Meander => 0,
            AdversaryKind::BLine => 1,
            AdversaryKind::UserBenign => 2,
        }
    }

    pub fn from_action_id(id: usize) -> AdversaryKind {
        match id {
            0 => AdversaryKind::Meander,
            1 => AdversaryKind::BLine,
            _ => AdversaryKind::UserBenign,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AdversaryKind::Meander => "meander",
            AdversaryKind::BLine => "bline",
            AdversaryKind::UserBenign => "benign",
        }
    }
}

impl std::fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A red player: consumes the previous step's feedback, emits the next action.
pub trait RedAgent {
    fn kind(&self) -> AdversaryKind;
    fn next_action(&mut self, view: &RedView) -> RedAction;
}

/// The benign user: always sleeps.
#[derive(Debug, Default)]
pub struct BenignAgent;

impl RedAgent for BenignAgent {
    fn kind(&self) -> AdversaryKind {
        AdversaryKind::UserBenign
    }

    fn next_action(&mut self, _view: &RedView) -> RedAction {
        RedAction::Sleep
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BLinePhase {
    Discover,
    Scan,
    Exploit,
    Escalate,
    Impact,
}

/// Depth-first attacker with structural knowledge of the network.
///
/// The pivot chain (user host, enterprise server, operational host,
/// operational server) is fixed per episode, with the concrete hosts drawn
/// from the agent's seed. Recovery edges: a failed exploit rotates to the
/// next plausible service on the same host; once every candidate has been
/// tried the host is re-scanned; an evicted session regresses the chain to
/// the evicted host and re-exploits it.
pub struct BLineAgent {
    chain: Vec<Address>,
    /// Service ids the agent's prior knowledge marks as exploitable, per
    /// chain position. Scan results are filtered against this, so honeypots
    /// mimicking those services stay in the candidate set.
    exploitable: Vec<BTreeSet<String>>,
    pos: usize,
    phase: BLinePhase,
    known_ports: BTreeMap<Address, Vec<u16>>,
    tried: BTreeSet<u16>,
    rot: usize,
    last: Option<RedAction>,
    rng: ChaCha8Rng,
}

impl BLineAgent {
    pub fn new(net: &Network, book: &AddressBook, seed: u64) -> BLineAgent {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng, kind: HostKind, exclude: Option<&str>| -> String {
            let candidates: Vec<&str> = net
                .hosts
                .iter()
                .filter(|h| h.kind == kind && Some(h.name.as_str()) != exclude)
                .map(|h| h.name.as_str())
                .collect();
            candidates[rng.gen_range(0..candidates.len())].to_string()
        };
        // The foothold is excluded: the opening exploit targets a host the
        // agent does not already own.
        let user = pick(&mut rng, HostKind::UserHost, Some(net.foothold.as_str()));
        let enterprise = pick(&mut rng, HostKind::EnterpriseServer, None);
        let op_host = pick(&mut rng, HostKind::OperationalHost, None);
        let op_server = net
            .hosts
            .iter()
            .find(|h| h.kind == HostKind::OperationalServer)
            .expect("topology has an operational server");
        let names = [user, enterprise, op_host, op_server.name.clone()];
        let chain: Vec<Address> =
            names.iter().map(|n| book.addr_of(n).expect("chain host").clone()).collect();
        let exploitable: Vec<BTreeSet<String>> = names
            .iter()
            .map(|n| {
                net.host(n)
                    .unwrap()
                    .services
                    .iter()
                    .filter(|s| s.exploitable)
                    .map(|s| s.service.clone())
                    .collect()
            })
            .collect();
        BLineAgent {
            chain,
            exploitable,
            pos: 0,
            phase: BLinePhase::Discover,
            known_ports: BTreeMap::new(),
            tried: BTreeSet::new(),
            rot: 0,
            last: None,
            rng,
        }
    }

    fn target(&self) -> &Address {
        &self.chain[self.pos]
    }

    fn apply_feedback(&mut self, view: &RedView) {
        let last = self.last.clone();
        match last {
            None => {}
            Some(RedAction::DiscoverRemoteSystems { .. }) => {
                if view.success {
                    self.phase = BLinePhase::Scan;
                }
            }
            Some(RedAction::DiscoverNetworkServices { target }) => {
                if view.success {
                    let allowed = &self.exploitable[self.pos];
                    let mut ports: Vec<u16> = view
                        .services
                        .iter()
                        .filter(|(_, svc)| allowed.contains(svc))
                        .map(|(p, _)| *p)
                        .collect();
                    if ports.is_empty() {
                        ports = view.services.iter().map(|(p, _)| *p).collect();
                    }
                    self.rot = self.rng.gen_range(0..ports.len());
                    self.known_ports.insert(target, ports);
                    self.tried.clear();
                    self.phase = BLinePhase::Exploit;
                }
            }
            Some(RedAction::ExploitRemoteService { port, .. }) => {
                if view.success {
                    self.phase = BLinePhase::Escalate;
                } else {
                    self.tried.insert(port);
                    self.rot += 1;
                    let total = self.known_ports.get(self.target()).map_or(0, Vec::len);
                    if self.tried.len() >= total {
                        // Every candidate service exhausted: refresh the scan.
                        self.phase = BLinePhase::Scan;
                    }
                }
            }
            Some(RedAction::PrivilegeEscalate { .. }) => {
                if view.success {
                    if self.pos + 1 == self.chain.len() {
                        self.phase = BLinePhase::Impact;
                    } else {
                        self.pos += 1;
                        self.tried.clear();
                        self.phase = BLinePhase::Scan;
                    }
                }
                // On failure simply retry the escalation.
            }
            Some(RedAction::Impact { .. }) | Some(RedAction::Sleep) => {}
        }

        // Eviction recovery: fall back to the earliest evicted chain host and
        // re-exploit it from the sessions still held.
        let mut regress: Option<usize> = None;
        for lost in &view.lost_sessions {
            if let Some(i) = self.chain.iter().position(|a| a == lost) {
                regress = Some(regress.map_or(i, |r: usize| r.min(i)));
            }
        }
        if let Some(i) = regress {
            if i <= self.pos {
                self.pos = i;
                self.tried.clear();
                if let Some(ports) = self.known_ports.get(self.target()) {
                    self.rot = self.rng.gen_range(0..ports.len());
                    self.phase = BLinePhase::Exploit;
                } else {
                    self.phase = BLinePhase::Scan;
                }
            }
        }
    }

    fn choose(&mut self) -> RedAction {
        match self.phase {
            BLinePhase::Discover => RedAction::DiscoverRemoteSystems { subnet: 1 },
            BLinePhase::Scan => RedAction::DiscoverNetworkServices { target: self.target().clone() },
            BLinePhase::Exploit => {
                let target = self.target().clone();
                match self.known_ports.get(&target) {
                    Some(ports) if !ports.is_empty() => {
                        // Skip ports already tried since the last scan.
                        let mut port = ports[self.rot % ports.len()];
                        for off in 0..ports.len() {
                            let p = ports[(self.rot + off) % ports.len()];
                            if !self.tried.contains(&p) {
                                port = p;
                                break;
                            }
                        }
                        RedAction::ExploitRemoteService { target, port }
                    }
                    _ => RedAction::DiscoverNetworkServices { target },
                }
            }
            BLinePhase::Escalate => RedAction::PrivilegeEscalate { target: self.target().clone() },
            BLinePhase::Impact => RedAction::Impact { target: self.chain[3].clone() },
        }
    }
}

impl RedAgent for BLineAgent {
    fn kind(&self) -> AdversaryKind {
        AdversaryKind::BLine
    }

    fn next_action(&mut self, view: &RedView) -> RedAction {
        self.apply_feedback(view);
        let action = self.choose();
        self.last = Some(action.clone());
        action
    }
}

/// Breadth-first attacker with no prior knowledge.
pub struct MeanderAgent {
    rng: ChaCha8Rng,
    frontier: u8,
    swept: BTreeSet<u8>,
    known: BTreeSet<Address>,
    to_scan: VecDeque<Address>,
    scan_retry: VecDeque<Address>,
    ports: BTreeMap<Address, Vec<(u16, String)>>,
    holding: BTreeSet<Address>,
    admin: BTreeSet<Address>,
    impact_target: Option<Address>,
    last: Option<RedAction>,
}

impl MeanderAgent {
    pub fn new(foothold: Address, seed: u64) -> MeanderAgent {
        let mut known = BTreeSet::new();
        known.insert(foothold.clone());
        let mut holding = BTreeSet::new();
        holding.insert(foothold);
        MeanderAgent {
            rng: ChaCha8Rng::seed_from_u64(seed),
            frontier: 1,
            swept: BTreeSet::new(),
            known,
            to_scan: VecDeque::new(),
            scan_retry: VecDeque::new(),
            ports: BTreeMap::new(),
            holding,
            admin: BTreeSet::new(),
            impact_target: None,
            last: None,
        }
    }

    fn apply_feedback(&mut self, view: &RedView) {
        let last = self.last.clone();
        match last {
            None | Some(RedAction::Sleep) | Some(RedAction::Impact { .. }) => {}
            Some(RedAction::DiscoverRemoteSystems { subnet }) => {
                if view.success {
                    self.swept.insert(subnet);
                    let mut fresh: Vec<Address> = view
                        .discovered
                        .iter()
                        .filter(|a| !self.ports.contains_key(*a))
                        .cloned()
                        .collect();
                    fresh.shuffle(&mut self.rng);
                    for a in fresh {
                        self.known.insert(a.clone());
                        if !self.to_scan.contains(&a) {
                            self.to_scan.push_back(a);
                        }
                    }
                }
            }
            Some(RedAction::DiscoverNetworkServices { target }) => {
                if view.success {
                    self.ports.insert(target, view.services.clone());
                } else {
                    self.scan_retry.push_back(target);
                }
            }
            Some(RedAction::ExploitRemoteService { target, .. }) => {
                if view.success {
                    self.holding.insert(target);
                }
            }
            Some(RedAction::PrivilegeEscalate { target }) => {
                if view.success {
                    self.admin.insert(target);
                }
            }
        }
        if let Some(os) = &view.op_server_admin {
            self.impact_target = Some(os.clone());
        }
        for lost in &view.lost_sessions {
            self.holding.remove(lost);
            self.admin.remove(lost);
            if self.impact_target.as_ref() == Some(lost) {
                self.impact_target = None;
            }
        }
    }

    fn pick<'a>(&mut self, candidates: &'a [Address]) -> &'a Address {
        &candidates[self.rng.gen_range(0..candidates.len())]
    }

    fn choose(&mut self) -> RedAction {
        if let Some(os) = &self.impact_target {
            return RedAction::Impact { target: os.clone() };
        }
        if !self.swept.contains(&self.frontier) {
            return RedAction::DiscoverRemoteSystems { subnet: self.frontier };
        }
        if let Some(t) = self.to_scan.pop_front() {
            return RedAction::DiscoverNetworkServices { target: t };
        }
        let exploitable: Vec<Address> = self
            .ports
            .keys()
            .filter(|a| !self.holding.contains(*a))
            .cloned()
            .collect();
        if !exploitable.is_empty() {
            let target = self.pick(&exploitable).clone();
            let svc = &self.ports[&target];
            let (port, _) = svc[self.rng.gen_range(0..svc.len())].clone();
            return RedAction::ExploitRemoteService { target, port };
        }
        let escalatable: Vec<Address> =
            self.holding.iter().filter(|a| !self.admin.contains(*a)).cloned().collect();
        if !escalatable.is_empty() {
            let target = self.pick(&escalatable).clone();
            return RedAction::PrivilegeEscalate { target };
        }
        if let Some(t) = self.scan_retry.pop_front() {
            return RedAction::DiscoverNetworkServices { target: t };
        }
        if self.frontier < 3 {
            self.frontier += 1;
            return RedAction::DiscoverRemoteSystems { subnet: self.frontier };
        }
        RedAction::Sleep
    }
}

impl RedAgent for MeanderAgent {
    fn kind(&self) -> AdversaryKind {
        AdversaryKind::Meander
    }

    fn next_action(&mut self, view: &RedView) -> RedAction {
        self.apply_feedback(view);
        let action = self.choose();
        self.last = Some(action.clone());
        action
    }
}

/// Draw an adversary kind from a probability table.
pub fn sample_adversary(
    rng: &mut impl Rng,
    mix: &[(AdversaryKind, f64)],
) -> Result<AdversaryKind> {
    if mix.is_empty() {
        return Err(Error::InvalidConfig("empty adversary mix".into()));
    }
    let mut total = 0.0;
    for (_, w) in mix {
        if *w < 0.0 {
            return Err(Error::InvalidConfig("negative adversary weight".into()));
        }
        total += w;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!("adversary mix sums to {total}, expected 1")));
    }
    let draw: f64 = rng.gen();
    let mut acc = 0.0;
    for (kind, w) in mix {
        acc += w;
        if draw < acc {
            return Ok(*kind);
        }
    }
    Ok(mix.last().unwrap().0)
}
