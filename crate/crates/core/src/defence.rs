//! Defender policies and the hierarchical assembly.
//!
//! The policies here are scripted specialists standing in for trained
//! models; anything implementing [`DefencePolicy`] can be slotted into the
//! hierarchy instead. The hierarchical defender routes the first four turns
//! to a default specialist, classifies the adversary exactly once on turn
//! four from the window of observations, and hands every later turn to the
//! matching specialist.

use std::collections::VecDeque;

use crate::adversary::AdversaryKind;
use crate::controller::Controller;
use crate::net::{HostKind, Network};
use crate::obs::{decode_bits52, Access, Activity, BlueObservation};
use crate::sim::BlueAction;

/// Observation encoding a policy consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObsEncoding {
    Bits52,
    ActionKnowledge,
    StateRepresentation,
}

/// A defender policy: total over valid observations.
pub trait DefencePolicy {
    fn encoding(&self) -> ObsEncoding {
        ObsEncoding::Bits52
    }

    fn act(&mut self, obs: &BlueObservation, turn: u32) -> BlueAction;
}

/// Does nothing, ever. Baseline for dominance comparisons.
#[derive(Debug, Default)]
pub struct SleepPolicy;

impl DefencePolicy for SleepPolicy {
    fn act(&mut self, _obs: &BlueObservation, _turn: u32) -> BlueAction {
        BlueAction::Sleep
    }
}

/// Priority-rule specialist: restore admin-compromised servers, remove
/// user-level intrusions, protect servers with honeypots, investigate
/// flagged hosts, otherwise sleep. Ties break in canonical host order.
pub struct GreedyRestorePolicy {
    hosts: Vec<(String, HostKind)>,
    foothold: usize,
    schedule: Vec<(String, String)>,
    placed: usize,
}

impl GreedyRestorePolicy {
    pub fn new(net: &Network) -> GreedyRestorePolicy {
        let hosts: Vec<(String, HostKind)> =
            net.hosts.iter().map(|h| (h.name.clone(), h.kind)).collect();
        // Honeypots go on the servers along the attacker's pivot path,
        // enterprise first, in canonical order. Each mimics the host's first
        // service so it looks like the obvious way in.
        let schedule: Vec<(String, String)> = net
            .hosts
            .iter()
            .filter(|h| h.kind.is_server())
            .map(|h| (h.name.clone(), h.services[0].service.clone()))
            .collect();
        GreedyRestorePolicy { hosts, foothold: net.foothold_index(), schedule, placed: 0 }
    }

    fn decoys_remaining(&self) -> bool {
        self.placed < self.schedule.len()
    }

    fn next_decoy(&mut self) -> BlueAction {
        let (host, service) = self.schedule[self.placed].clone();
        self.placed += 1;
        BlueAction::Decoy { host, service }
    }
}

impl DefencePolicy for GreedyRestorePolicy {
    fn act(&mut self, obs: &BlueObservation, _turn: u32) -> BlueAction {
        let Ok(know) = decode_bits52(&obs.bits52) else {
            return BlueAction::Sleep;
        };
        // 1. Restore any server showing admin access.
        for (i, (name, kind)) in self.hosts.iter().enumerate() {
            if kind.is_server() && know[i].access == Access::Admin {
                return BlueAction::Restore { host: name.clone() };
            }
        }
        // 2. Remove any host showing user access. The foothold is skipped:
        //    its session cannot be terminated, so the action would only burn
        //    the turn.
        for (i, (name, kind)) in self.hosts.iter().enumerate() {
            if know[i].access == Access::User
                && i != self.foothold
                && *kind != HostKind::DefenderMachine
            {
                return BlueAction::Remove { host: name.clone() };
            }
        }
        // 3. Honeypot the highest-value unprotected server.
        if self.decoys_remaining() {
            return self.next_decoy();
        }
        // 4. Investigate the most recently flagged host, worst signal first.
        for wanted in [Activity::Exploited, Activity::Scanned] {
            if let Some(i) = know.iter().position(|k| k.activity == wanted) {
                return BlueAction::Analyse { host: self.hosts[i].0.clone() };
            }
        }
        BlueAction::Sleep
    }
}

/// Specialist for the depth-first attacker: front-loads honeypots along the
/// known pivot path, then falls back to the greedy priority rules.
pub struct DecoyWallPolicy {
    greedy: GreedyRestorePolicy,
}

impl DecoyWallPolicy {
    pub fn new(net: &Network) -> DecoyWallPolicy {
        DecoyWallPolicy { greedy: GreedyRestorePolicy::new(net) }
    }
}

impl DefencePolicy for DecoyWallPolicy {
    fn act(&mut self, obs: &BlueObservation, turn: u32) -> BlueAction {
        if self.greedy.decoys_remaining() {
            return self.greedy.next_decoy();
        }
        self.greedy.act(obs, turn)
    }
}

/// Controller-routed pair of specialists.
///
/// The controller's decision is written at most once per episode; a benign
/// classification routes to the BLine specialist as the safe default.
pub struct HierarchicalDefender {
    controller: Controller,
    meander: Box<dyn DefencePolicy>,
    bline: Box<dyn DefencePolicy>,
    decided: Option<AdversaryKind>,
    window: VecDeque<Vec<u8>>,
}

impl HierarchicalDefender {
    pub fn new(
        controller: Controller,
        meander: Box<dyn DefencePolicy>,
        bline: Box<dyn DefencePolicy>,
    ) -> HierarchicalDefender {
        HierarchicalDefender { controller, meander, bline, decided: None, window: VecDeque::new() }
    }

    /// Standard assembly with the scripted specialists.
    pub fn scripted(net: &Network, controller: Controller) -> HierarchicalDefender {
        HierarchicalDefender::new(
            controller,
            Box::new(GreedyRestorePolicy::new(net)),
            Box::new(DecoyWallPolicy::new(net)),
        )
    }

    pub fn decided(&self) -> Option<AdversaryKind> {
        self.decided
    }
}

impl DefencePolicy for HierarchicalDefender {
    fn act(&mut self, obs: &BlueObservation, turn: u32) -> BlueAction {
        self.window.push_back(obs.bits52.clone());
        if self.window.len() > 4 {
            self.window.pop_front();
        }
        if turn < 4 {
            // Pre-classification default: the BLine specialist, since the
            // depth-first attacker compromises fastest.
            return self.bline.act(obs, turn);
        }
        if self.decided.is_none() {
            let window: Vec<Vec<u8>> = self.window.iter().cloned().collect();
            self.decided = Some(self.controller.predict(&window));
        }
        match self.decided.expect("decided is set") {
            AdversaryKind::Meander => self.meander.act(obs, turn),
            AdversaryKind::BLine | AdversaryKind::UserBenign => self.bline.act(obs, turn),
        }
    }
}
