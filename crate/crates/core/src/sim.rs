//! Turn-based game engine: dynamic state, action resolution with stochastic
//! outcomes, reward computation, and the defender observation feed.
//!
//! Resolution order within a step is red first, then blue: the defender's
//! sensors pick up this step's red activity, and the observation emitted at
//! the end of the step reflects both players' effects.
//!
//! Sensor model: red scans and exploits show up in the defender's per-host
//! *activity* knowledge automatically (the bit vector is a sensor feed that
//! flags the last step's events). The attacker's *access* level is only
//! written into the defender's knowledge by Analyse, or as a side effect of
//! the defender's own Remove/Restore actions.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::net::{Address, AddressBook, HostKind, Network};
use crate::obs::{observe, Access, Activity, BlueObservation, HostKnowledge};
use crate::seed::{derive_seed, STREAM_ADDR, STREAM_SIM};

/// Per-action-class success probabilities. The simulator introduces
/// randomness to mimic an emulated network, so even valid actions may fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuccessProbs {
    pub exploit: f64,
    pub escalate: f64,
    pub scan: f64,
    pub impact: f64,
    pub restore: f64,
    pub remove: f64,
    pub analyse: f64,
    pub decoy: f64,
}

impl Default for SuccessProbs {
    fn default() -> Self {
        SuccessProbs {
            exploit: 0.9,
            escalate: 0.95,
            scan: 1.0,
            impact: 1.0,
            restore: 0.95,
            remove: 0.95,
            analyse: 1.0,
            decoy: 1.0,
        }
    }
}

impl SuccessProbs {
    /// Profile with deterministic red actions; blue noise unchanged. Used for
    /// undisturbed-trajectory checks.
    pub fn certain_red() -> Self {
        SuccessProbs { exploit: 1.0, escalate: 1.0, scan: 1.0, impact: 1.0, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("exploit", self.exploit),
            ("escalate", self.escalate),
            ("scan", self.scan),
            ("impact", self.impact),
            ("restore", self.restore),
            ("remove", self.remove),
            ("analyse", self.analyse),
            ("decoy", self.decoy),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("probability `{name}` = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// True (ground-truth) dynamic state of one host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostState {
    /// Red activity against this host during the current step.
    pub activity: Activity,
    /// Attacker access level currently held.
    pub access: Access,
    /// Honeypot service slots, port -> mimicked service id. Decoy ports never
    /// collide with real service ports.
    pub decoys: BTreeMap<u16, String>,
    /// Operational server only: services disrupted by a successful Impact.
    pub impacted: bool,
}

impl HostState {
    fn clean() -> Self {
        HostState {
            activity: Activity::None,
            access: Access::None,
            decoys: BTreeMap::new(),
            impacted: false,
        }
    }
}

/// Defender action. Targets are hostnames: the defender manages its own
/// machines by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verb", rename_all = "snake_case")]
pub enum BlueAction {
    Sleep,
    Analyse { host: String },
    Remove { host: String },
    Restore { host: String },
    Decoy { host: String, service: String },
}

/// Attacker action. Targets are episode-scoped addresses except for subnet
/// sweeps, which name a subnet id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verb", rename_all = "snake_case")]
pub enum RedAction {
    Sleep,
    DiscoverRemoteSystems { subnet: u8 },
    DiscoverNetworkServices { target: Address },
    ExploitRemoteService { target: Address, port: u16 },
    PrivilegeEscalate { target: Address },
    Impact { target: Address },
}

/// Feedback the attacker receives after a step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RedView {
    /// Whether the last red action succeeded.
    pub success: bool,
    /// Addresses revealed by a subnet sweep.
    pub discovered: Vec<Address>,
    /// (port, service id) pairs revealed by a service scan of the last
    /// target. Honeypot slots are indistinguishable from real services here.
    pub services: Vec<(u16, String)>,
    /// Sessions the defender evicted this step.
    pub lost_sessions: Vec<Address>,
    /// Host on which a new session was established this step.
    pub gained_session: Option<Address>,
    /// Set when privilege escalation succeeded on the operational server:
    /// from inside, the attacker recognises the prize machine.
    pub op_server_admin: Option<Address>,
}

impl RedView {
    pub fn initial() -> Self {
        RedView { success: true, ..Default::default() }
    }
}

/// Everything a step produces.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub turn: u32,
    pub blue_success: bool,
    pub red_success: bool,
    pub reward: f64,
    pub blue_obs: BlueObservation,
    pub red_view: RedView,
}

const DECOY_PORT_BASE: u16 = 40_000;

/// One episode's simulation state. Single-owner, single-threaded; parallel
/// episodes each own an independent `Sim`.
#[derive(Debug, Clone)]
pub struct Sim {
    net: Network,
    addresses: AddressBook,
    hosts: Vec<HostState>,
    knowledge: Vec<HostKnowledge>,
    sessions: Vec<bool>,
    foothold: usize,
    turn: u32,
    last_blue_success: bool,
    probs: SuccessProbs,
    rng: ChaCha8Rng,
}

impl Sim {
    /// Fresh state at turn 0. The attacker holds an irremovable user-level
    /// foothold on a predetermined subnet-1 host; the defender starts with an
    /// all-clear view (it has not analysed anything yet).
    pub fn reset(net: &Network, seed: u64, probs: SuccessProbs) -> (Sim, BlueObservation) {
        let mut addr_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_ADDR));
        let addresses = AddressBook::generate(net, &mut addr_rng);
        let foothold = net.foothold_index();
        let mut hosts: Vec<HostState> = net.hosts.iter().map(|_| HostState::clean()).collect();
        hosts[foothold].access = Access::User;
        let mut sessions = vec![false; net.hosts.len()];
        sessions[foothold] = true;
        let knowledge = vec![HostKnowledge::clear(); net.hosts.len()];
        let sim = Sim {
            net: net.clone(),
            addresses,
            hosts,
            knowledge,
            sessions,
            foothold,
            turn: 0,
            last_blue_success: true,
            probs,
            rng: ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_SIM)),
        };
        let obs = sim.observation();
        (sim, obs)
    }

    pub fn net(&self) -> &Network {
        &self.net
    }

    pub fn addresses(&self) -> &AddressBook {
        &self.addresses
    }

    pub fn turn(&self) -> u32 {
        self.turn
    }

    pub fn observation(&self) -> BlueObservation {
        observe(&self.knowledge, self.last_blue_success)
    }

    pub fn host_state(&self, name: &str) -> Result<&HostState> {
        let i = self.net.host_index(name).ok_or_else(|| Error::UnknownHost(name.into()))?;
        Ok(&self.hosts[i])
    }

    pub fn knowledge_of(&self, name: &str) -> Result<&HostKnowledge> {
        let i = self.net.host_index(name).ok_or_else(|| Error::UnknownHost(name.into()))?;
        Ok(&self.knowledge[i])
    }

    pub fn has_session(&self, name: &str) -> Result<bool> {
        let i = self.net.host_index(name).ok_or_else(|| Error::UnknownHost(name.into()))?;
        Ok(self.sessions[i])
    }

    fn roll(&mut self, p: f64) -> bool {
        if p >= 1.0 {
            true
        } else if p <= 0.0 {
            false
        } else {
            self.rng.gen::<f64>() < p
        }
    }

    fn host_idx_by_addr(&self, addr: &Address) -> Result<usize> {
        let name = self.addresses.resolve(addr)?.to_string();
        self.net
            .host_index(&name)
            .ok_or(Error::UnknownHost(name))
    }

    /// Can any red session open a connection to host `dst`?
    fn red_can_reach(&self, dst: usize) -> bool {
        let dst_name = &self.net.hosts[dst].name;
        self.sessions.iter().enumerate().any(|(i, &held)| {
            held && self.net.reachable(&self.net.hosts[i].name, dst_name).unwrap_or(false)
        })
    }

    fn red_can_reach_subnet(&self, subnet: u8) -> bool {
        self.sessions.iter().enumerate().any(|(i, &held)| {
            held && self
                .net
                .firewall
                .contains(&(self.net.hosts[i].subnet, subnet))
        })
    }

    /// Resolve one turn. Red acts first, then blue; the reward reflects the
    /// post-action state.
    pub fn step(&mut self, blue: &BlueAction, red: &RedAction) -> Result<StepOutcome> {
        // Activity knowledge is a per-step sensor feed: clear last step's
        // flags before resolving this step's events.
        for h in &mut self.hosts {
            h.activity = Activity::None;
        }
        for k in &mut self.knowledge {
            k.activity = Activity::None;
        }

        let mut view = RedView::default();
        let mut impact_now = false;
        let red_success = self.resolve_red(red, &mut view, &mut impact_now)?;
        view.success = red_success;

        let (blue_success, restored) = self.resolve_blue(blue, &mut view)?;
        self.last_blue_success = blue_success;

        let reward = compute_reward(&self.net, &self.hosts, impact_now, restored);
        let blue_obs = self.observation();
        let outcome = StepOutcome {
            turn: self.turn,
            blue_success,
            red_success,
            reward,
            blue_obs,
            red_view: view,
        };
        self.turn += 1;
        Ok(outcome)
    }

    fn resolve_red(
        &mut self,
        red: &RedAction,
        view: &mut RedView,
        impact_now: &mut bool,
    ) -> Result<bool> {
        match red {
            RedAction::Sleep => Ok(true),
            RedAction::DiscoverRemoteSystems { subnet } => {
                if !self.net.subnets.iter().any(|s| s.id == *subnet) {
                    return Err(Error::MalformedAction(format!("unknown subnet {subnet}")));
                }
                if !self.red_can_reach_subnet(*subnet) || !self.roll(self.probs.scan) {
                    return Ok(false);
                }
                view.discovered = self
                    .net
                    .hosts_in_subnet(*subnet)
                    .iter()
                    .map(|h| self.addresses.addr_of(&h.name).unwrap().clone())
                    .collect();
                Ok(true)
            }
            RedAction::DiscoverNetworkServices { target } => {
                let idx = self.host_idx_by_addr(target)?;
                if self.net.hosts[idx].kind == HostKind::DefenderMachine
                    || !self.red_can_reach(idx)
                    || !self.roll(self.probs.scan)
                {
                    return Ok(false);
                }
                let mut ports: Vec<(u16, String)> = self.net.hosts[idx]
                    .services
                    .iter()
                    .map(|s| (s.port, s.service.clone()))
                    .collect();
                ports.extend(self.hosts[idx].decoys.iter().map(|(p, s)| (*p, s.clone())));
                ports.sort_unstable();
                view.services = ports;
                self.hosts[idx].activity = Activity::Scanned;
                self.knowledge[idx].activity = Activity::Scanned;
                Ok(true)
            }
            RedAction::ExploitRemoteService { target, port } => {
                let idx = self.host_idx_by_addr(target)?;
                if self.net.hosts[idx].kind == HostKind::DefenderMachine
                    || !self.red_can_reach(idx)
                {
                    return Ok(false);
                }
                if self.hosts[idx].decoys.contains_key(port) {
                    // Honeypot triggered: the exploit fails and the defender's
                    // sensors flag the host as exploited.
                    self.hosts[idx].activity = Activity::Exploited;
                    self.knowledge[idx].activity = Activity::Exploited;
                    return Ok(false);
                }
                let Some(svc) = self.net.hosts[idx].services.iter().find(|s| s.port == *port)
                else {
                    return Ok(false); // closed port, nothing listening
                };
                if !svc.exploitable || !self.roll(self.probs.exploit) {
                    return Ok(false);
                }
                self.sessions[idx] = true;
                if self.hosts[idx].access == Access::None {
                    self.hosts[idx].access = Access::User;
                }
                self.hosts[idx].activity = Activity::Exploited;
                self.knowledge[idx].activity = Activity::Exploited;
                view.gained_session = Some(target.clone());
                Ok(true)
            }
            RedAction::PrivilegeEscalate { target } => {
                let idx = self.host_idx_by_addr(target)?;
                if !self.sessions[idx] || self.hosts[idx].access == Access::None {
                    return Ok(false);
                }
                if !self.roll(self.probs.escalate) {
                    return Ok(false);
                }
                self.hosts[idx].access = Access::Admin;
                if self.net.hosts[idx].kind == HostKind::OperationalServer {
                    view.op_server_admin = Some(target.clone());
                }
                Ok(true)
            }
            RedAction::Impact { target } => {
                let idx = self.host_idx_by_addr(target)?;
                if self.net.hosts[idx].kind != HostKind::OperationalServer {
                    return Err(Error::MalformedAction(
                        "impact targets only the operational server".into(),
                    ));
                }
                if self.hosts[idx].access != Access::Admin || !self.roll(self.probs.impact) {
                    return Ok(false);
                }
                self.hosts[idx].impacted = true;
                *impact_now = true;
                Ok(true)
            }
        }
    }

    /// Returns (blue_success, successful_restore).
    fn resolve_blue(&mut self, blue: &BlueAction, view: &mut RedView) -> Result<(bool, bool)> {
        match blue {
            BlueAction::Sleep => Ok((true, false)),
            BlueAction::Analyse { host } => {
                let idx = self
                    .net
                    .host_index(host)
                    .ok_or_else(|| Error::UnknownHost(host.clone()))?;
                if !self.roll(self.probs.analyse) {
                    return Ok((false, false));
                }
                // Analysis reveals the true state of the host with certainty.
                self.knowledge[idx].access = self.hosts[idx].access;
                self.knowledge[idx].activity = self.hosts[idx].activity;
                Ok((true, false))
            }
            BlueAction::Remove { host } => {
                let idx = self
                    .net
                    .host_index(host)
                    .ok_or_else(|| Error::UnknownHost(host.clone()))?;
                if idx == self.foothold {
                    // The foothold session cannot be terminated.
                    return Ok((false, false));
                }
                if self.hosts[idx].access != Access::User {
                    // Nothing removable: admin persistence survives process
                    // termination, and a clean host has no processes to kill.
                    // The attempt still reports what it found.
                    self.knowledge[idx].access = self.hosts[idx].access;
                    return Ok((false, false));
                }
                if !self.roll(self.probs.remove) {
                    return Ok((false, false));
                }
                self.hosts[idx].access = Access::None;
                if self.sessions[idx] {
                    self.sessions[idx] = false;
                    view.lost_sessions
                        .push(self.addresses.addr_of(host).unwrap().clone());
                }
                self.knowledge[idx].access = Access::None;
                Ok((true, false))
            }
            BlueAction::Restore { host } => {
                let idx = self
                    .net
                    .host_index(host)
                    .ok_or_else(|| Error::UnknownHost(host.clone()))?;
                if idx == self.foothold {
                    // The foothold host cannot be restored to a benign state.
                    return Ok((false, false));
                }
                if !self.roll(self.probs.restore) {
                    return Ok((false, false));
                }
                let decoys = std::mem::take(&mut self.hosts[idx].decoys);
                self.hosts[idx] = HostState::clean();
                self.hosts[idx].decoys = decoys; // honeypots are blue's own
                if self.sessions[idx] {
                    self.sessions[idx] = false;
                    view.lost_sessions
                        .push(self.addresses.addr_of(host).unwrap().clone());
                }
                self.knowledge[idx] = HostKnowledge::clear();
                Ok((true, true))
            }
            BlueAction::Decoy { host, service } => {
                let idx = self
                    .net
                    .host_index(host)
                    .ok_or_else(|| Error::UnknownHost(host.clone()))?;
                if !self.roll(self.probs.decoy) {
                    return Ok((false, false));
                }
                let next_port = self.hosts[idx]
                    .decoys
                    .keys()
                    .max()
                    .copied()
                    .unwrap_or(DECOY_PORT_BASE)
                    + 1;
                self.hosts[idx].decoys.insert(next_port, service.clone());
                Ok((true, false))
            }
        }
    }

    /// Digest of the observable simulation state, for trace records.
    pub fn state_digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.turn.to_le_bytes());
        hasher.update([u8::from(self.last_blue_success)]);
        for (i, h) in self.hosts.iter().enumerate() {
            hasher.update([
                h.activity as u8,
                h.access as u8,
                u8::from(h.impacted),
                u8::from(self.sessions[i]),
                self.knowledge[i].activity as u8,
                self.knowledge[i].access as u8,
            ]);
            for (port, svc) in &h.decoys {
                hasher.update(port.to_le_bytes());
                hasher.update(svc.as_bytes());
            }
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Per-step defender reward. Only penalties exist: for every host on which
/// the attacker has admin access the defender loses 0.1 (user hosts) or 1
/// (servers); a successful Impact costs 10 and a successful Restore costs 1.
/// Computed in tenths to keep the arithmetic exact.
pub fn compute_reward(
    net: &Network,
    hosts: &[HostState],
    impact_this_turn: bool,
    restore_succeeded: bool,
) -> f64 {
    let mut tenths: i64 = 0;
    for (spec, state) in net.hosts.iter().zip(hosts) {
        if state.access == Access::Admin {
            tenths -= match spec.kind {
                HostKind::UserHost => 1,
                _ => 10,
            };
        }
    }
    if impact_this_turn {
        tenths -= 100;
    }
    if restore_succeeded {
        tenths -= 10;
    }
    tenths as f64 / 10.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::default_topology;

    fn certain() -> SuccessProbs {
        SuccessProbs {
            exploit: 1.0,
            escalate: 1.0,
            scan: 1.0,
            impact: 1.0,
            restore: 1.0,
            remove: 1.0,
            analyse: 1.0,
            decoy: 1.0,
        }
    }

    fn addr(sim: &Sim, host: &str) -> Address {
        sim.addresses().addr_of(host).unwrap().clone()
    }

    #[test]
    fn reset_is_all_clear_with_foothold() {
        let net = default_topology();
        let (sim, obs) = Sim::reset(&net, 7, SuccessProbs::default());
        assert!(obs.bits52.iter().all(|&b| b == 0));
        assert_eq!(sim.host_state("User0").unwrap().access, Access::User);
        assert!(sim.has_session("User0").unwrap());
        assert_eq!(sim.knowledge_of("User0").unwrap().access, Access::None);
        assert_eq!(obs.bits_ak[52], 1); // last action success starts true
    }

    #[test]
    fn reset_is_deterministic() {
        let net = default_topology();
        let (s1, o1) = Sim::reset(&net, 42, SuccessProbs::default());
        let (s2, o2) = Sim::reset(&net, 42, SuccessProbs::default());
        assert_eq!(o1, o2);
        assert_eq!(s1.state_digest(), s2.state_digest());
        assert_eq!(s1.addresses(), s2.addresses());
    }

    #[test]
    fn sleep_sleep_reward_zero() {
        let net = default_topology();
        let (mut sim, _) = Sim::reset(&net, 7, SuccessProbs::default());
        let out = sim.step(&BlueAction::Sleep, &RedAction::Sleep).unwrap();
        assert_eq!(out.reward, 0.0);
        assert!(out.blue_success);
        assert!(out.red_success);
        assert_eq!(sim.turn(), 1);
    }

    #[test]
    fn exploit_on_decoy_fails_and_flags_exploited() {
        let net = default_topology();
        let (mut sim, _) = Sim::reset(&net, 5, certain());
        sim.step(
            &BlueAction::Decoy { host: "Enterprise0".into(), service: "ssh".into() },
            &RedAction::Sleep,
        )
        .unwrap();
        let decoy_port = *sim.host_state("Enterprise0").unwrap().decoys.keys().next().unwrap();
        // Put a red session within reach of subnet 2 first.
        let u1 = addr(&sim, "User1");
        sim.step(&BlueAction::Sleep, &RedAction::ExploitRemoteService { target: u1, port: 22 })
            .unwrap();
        let e0 = addr(&sim, "Enterprise0");
        let out = sim
            .step(
                &BlueAction::Sleep,
                &RedAction::ExploitRemoteService { target: e0, port: decoy_port },
            )
            .unwrap();
        assert!(!out.red_success);
        assert_eq!(sim.knowledge_of("Enterprise0").unwrap().activity, Activity::Exploited);
        assert_eq!(sim.host_state("Enterprise0").unwrap().access, Access::None);
    }

    #[test]
    fn restore_on_foothold_always_fails() {
        let net = default_topology();
        let (mut sim, _) = Sim::reset(&net, 5, certain());
        let out = sim
            .step(&BlueAction::Restore { host: "User0".into() }, &RedAction::Sleep)
            .unwrap();
        assert!(!out.blue_success);
        assert_eq!(out.reward, 0.0); // no restore penalty when unsuccessful
        assert_eq!(sim.host_state("User0").unwrap().access, Access::User);
        assert!(sim.has_session("User0").unwrap());
        assert_eq!(sim.knowledge_of("User0").unwrap().access, Access::None);
    }

    #[test]
    fn remove_clears_user_but_not_admin() {
        let net = default_topology();
        let (mut sim, _) = Sim::reset(&net, 6, certain());
        let u2 = addr(&sim, "User2");
        sim.step(
            &BlueAction::Sleep,
            &RedAction::ExploitRemoteService { target: u2.clone(), port: 22 },
        )
        .unwrap();
        assert_eq!(sim.host_state("User2").unwrap().access, Access::User);
        let out = sim
            .step(&BlueAction::Remove { host: "User2".into() }, &RedAction::Sleep)
            .unwrap();
        assert!(out.blue_success);
        assert_eq!(sim.host_state("User2").unwrap().access, Access::None);
        assert!(!sim.has_session("User2").unwrap());
        assert_eq!(out.red_view.lost_sessions, vec![u2.clone()]);

        // Re-exploit and escalate; Remove must now fail but report admin.
        sim.step(
            &BlueAction::Sleep,
            &RedAction::ExploitRemoteService { target: u2.clone(), port: 22 },
        )
        .unwrap();
        sim.step(&BlueAction::Sleep, &RedAction::PrivilegeEscalate { target: u2 }).unwrap();
        let out = sim
            .step(&BlueAction::Remove { host: "User2".into() }, &RedAction::Sleep)
            .unwrap();
        assert!(!out.blue_success);
        assert_eq!(sim.host_state("User2").unwrap().access, Access::Admin);
        assert_eq!(sim.knowledge_of("User2").unwrap().access, Access::Admin);
    }

    #[test]
    fn restore_resets_server_and_costs_one() {
        let net = default_topology();
        let (mut sim, _) = Sim::reset(&net, 8, certain());
        let u1 = addr(&sim, "User1");
        sim.step(&BlueAction::Sleep, &RedAction::ExploitRemoteService { target: u1, port: 22 })
            .unwrap();
        let e1 = addr(&sim, "Enterprise1");
        sim.step(
            &BlueAction::Sleep,
            &RedAction::ExploitRemoteService { target: e1.clone(), port: 22 },
        )
        .unwrap();
        sim.step(&BlueAction::Sleep, &RedAction::PrivilegeEscalate { target: e1 }).unwrap();
        assert_eq!(sim.host_state("Enterprise1").unwrap().access, Access::Admin);
        let out = sim
            .step(&BlueAction::Restore { host: "Enterprise1".into() }, &RedAction::Sleep)
            .unwrap();
        assert!(out.blue_success);
        assert_eq!(sim.host_state("Enterprise1").unwrap().access, Access::None);
        // -1 for the restore only: the restored server no longer counts and
        // user-level access elsewhere carries no penalty.
        assert_eq!(out.reward, -1.0);
    }

    #[test]
    fn exploit_never_crosses_forbidden_firewall_pair() {
        let net = default_topology();
        let (mut sim, _) = Sim::reset(&net, 10, certain());
        // Only the subnet-1 foothold session exists; subnet 3 is unreachable.
        let op = addr(&sim, "OpHost0");
        let out = sim
            .step(&BlueAction::Sleep, &RedAction::ExploitRemoteService { target: op, port: 22 })
            .unwrap();
        assert!(!out.red_success);
        assert_eq!(sim.host_state("OpHost0").unwrap().access, Access::None);
    }

    #[test]
    fn escalate_requires_user_access() {
        let net = default_topology();
        let (mut sim, _) = Sim::reset(&net, 11, certain());
        let u3 = addr(&sim, "User3");
        let out = sim
            .step(&BlueAction::Sleep, &RedAction::PrivilegeEscalate { target: u3 })
            .unwrap();
        assert!(!out.red_success);
    }

    #[test]
    fn impact_requires_admin_on_op_server() {
        let net = default_topology();
        let (mut sim, _) = Sim::reset(&net, 12, certain());
        let os = addr(&sim, "OpServer");
        let out = sim.step(&BlueAction::Sleep, &RedAction::Impact { target: os }).unwrap();
        assert!(!out.red_success);
        // Impact against anything else is malformed.
        let u1 = addr(&sim, "User1");
        assert!(sim.step(&BlueAction::Sleep, &RedAction::Impact { target: u1 }).is_err());
    }

    #[test]
    fn analyse_reveals_foothold() {
        let net = default_topology();
        let (mut sim, _) = Sim::reset(&net, 13, certain());
        let out = sim
            .step(&BlueAction::Analyse { host: "User0".into() }, &RedAction::Sleep)
            .unwrap();
        assert!(out.blue_success);
        assert_eq!(sim.knowledge_of("User0").unwrap().access, Access::User);
    }

    #[test]
    fn same_seed_same_outcomes() {
        let net = default_topology();
        let run = |seed: u64| -> Vec<String> {
            let (mut sim, _) = Sim::reset(&net, seed, SuccessProbs::default());
            let u1 = addr(&sim, "User1");
            let mut digests = Vec::new();
            for i in 0..20 {
                let red = if i % 2 == 0 {
                    RedAction::ExploitRemoteService { target: u1.clone(), port: 22 }
                } else {
                    RedAction::DiscoverNetworkServices { target: u1.clone() }
                };
                let blue = if i % 3 == 0 {
                    BlueAction::Remove { host: "User1".into() }
                } else {
                    BlueAction::Sleep
                };
                sim.step(&blue, &red).unwrap();
                digests.push(sim.state_digest());
            }
            digests
        };
        assert_eq!(run(99), run(99));
        assert_ne!(run(99), run(100));
    }

    #[test]
    fn reward_examples() {
        let net = default_topology();
        let mut hosts: Vec<HostState> = net.hosts.iter().map(|_| HostState::clean()).collect();
        // Admin on 2 user hosts, nothing else.
        hosts[1].access = Access::Admin;
        hosts[3].access = Access::Admin;
        assert_eq!(compute_reward(&net, &hosts, false, false), -0.2);
        // Admin on the op server plus a successful impact this turn.
        let mut hosts: Vec<HostState> = net.hosts.iter().map(|_| HostState::clean()).collect();
        hosts[12].access = Access::Admin;
        assert_eq!(compute_reward(&net, &hosts, true, false), -11.0);
        // Clean state.
        let hosts: Vec<HostState> = net.hosts.iter().map(|_| HostState::clean()).collect();
        assert_eq!(compute_reward(&net, &hosts, false, false), 0.0);
        // Clean state, successful restore.
        assert_eq!(compute_reward(&net, &hosts, false, true), -1.0);
    }

    #[test]
    fn reward_matches_brute_force_oracle() {
        // Independent rule-sum oracle: walks the rules one by one in plain
        // floating point and must agree exactly with the implementation.
        fn oracle(net: &Network, hosts: &[HostState], impact: bool, restored: bool) -> f64 {
            let mut tenths = 0i64;
            for (i, h) in hosts.iter().enumerate() {
                if h.access == Access::Admin {
                    if net.hosts[i].kind == HostKind::UserHost {
                        tenths -= 1;
                    } else {
                        tenths -= 10;
                    }
                }
            }
            if impact {
                tenths -= 100;
            }
            if restored {
                tenths -= 10;
            }
            tenths as f64 / 10.0
        }
        use rand::Rng;
        use rand::SeedableRng;
        let net = default_topology();
        let defender = net.host_index("Defender").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_000);
        for _ in 0..10_000 {
            let hosts: Vec<HostState> = (0..net.hosts.len())
                .map(|i| {
                    let mut h = HostState::clean();
                    // The defender's machine is never red-targetable, so the
                    // randomized states mirror reachable simulation states.
                    if i != defender {
                        h.access = match rng.gen_range(0..3) {
                            0 => Access::None,
                            1 => Access::User,
                            _ => Access::Admin,
                        };
                    }
                    h
                })
                .collect();
            let impact = rng.gen_bool(0.2);
            let restored = rng.gen_bool(0.2);
            let got = compute_reward(&net, &hosts, impact, restored);
            let want = oracle(&net, &hosts, impact, restored);
            assert_eq!(got.to_bits(), want.to_bits());
            assert!(got <= 0.0);
            assert!(got >= -(0.1 * 5.0 + 7.0 + 10.0 + 1.0));
        }
    }
}
